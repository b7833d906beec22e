import math
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modlab.errors import DomainError
from modlab.indices import (
    ExtendedExponent,
    IndexPair,
    Outcome,
    classify_regions,
    coarse_embedding_conditions,
    dual_exponent,
    embeds_besov_modulation,
    embeds_L_in_M,
    embeds_M_in_L,
    embeds_M_shifted,
    fraction_str,
    miyachi_Lp_bound,
    mu1,
    mu2,
    multiplier_verdict,
    nu1,
    nu2,
    smoothness,
    to_fraction,
)

F = Fraction
unit = st.fractions(min_value=0, max_value=1, max_denominator=48)
rational_s = st.fractions(min_value=-3, max_value=3, max_denominator=24)
interior = st.fractions(min_value=0, max_value=1, max_denominator=48).filter(lambda x: 0 < x < 1)


def p_of(u):
    return "infty" if u == 0 else 1 / u


# ---------------------------------------------------------------------------
# exponents

def test_exponent_parsing():
    assert ExtendedExponent.of(2).recip == F(1, 2)
    assert ExtendedExponent.of("4/3").recip == F(3, 4)
    assert ExtendedExponent.of("infty").is_infinite
    assert ExtendedExponent.of(math.inf).is_infinite
    assert str(ExtendedExponent.of("infty")) == "infty"
    assert str(ExtendedExponent.of("3/2")) == "3/2"


@pytest.mark.parametrize("p, expected", [(2, "2"), (1, "infty"), ("4/3", "4"), ("infty", "1")])
def test_dual_exponent(p, expected):
    assert str(dual_exponent(p)) == expected


@pytest.mark.parametrize("bad", ["1/2", 0, "-3", F(9, 10)])
def test_exponent_below_one_rejected(bad):
    with pytest.raises(DomainError):
        ExtendedExponent.of(bad)


def test_decimal_needs_approx_and_warns():
    with pytest.raises(DomainError):
        to_fraction("0.25")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert to_fraction("0.25", approx=True) == F(1, 4)
        assert to_fraction(1 / 3) == F(1, 3)
    assert len(caught) == 2


def test_exact_inputs_do_not_warn():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert smoothness("-1/4") == F(-1, 4)
        assert smoothness(3) == 3
        assert smoothness(2.0) == 2


def test_zero_denominator():
    with pytest.raises(DomainError):
        to_fraction("1/0")


# ---------------------------------------------------------------------------
# regions and branch values

def test_centre_in_all_regions():
    assert len(classify_regions(IndexPair(F(1, 2), F(1, 2))).names()) == 6


def test_corner_one_zero():
    names = classify_regions(IndexPair(F(1), F(0))).names()
    assert set(names) == {"I1*", "I2*", "I3"}


def test_quarter_quarter():
    # brute force: min(1/4,3/4) >= 1/4 and min(1/4,1/2) >= 1/4 hold, 1/2 >= 3/4 fails
    names = classify_regions(IndexPair(F(1, 4), F(1, 4))).names()
    assert {"I1*", "I3*"} <= set(names) and "I2*" not in names


@pytest.mark.parametrize(
    "fn, p, q, expected",
    [
        (nu1, 2, 2, 0),
        (nu1, 1, 2, F(1, 2)),
        (nu1, "infty", 1, 1),
        (nu2, 2, 2, 0),
        (nu2, 1, 2, F(-1, 2)),
        (nu2, "infty", 2, F(-1, 2)),
        (mu1, 2, 2, F(-1, 2)),
        (mu1, 1, 1, 0),
        (mu2, "infty", "infty", -1),
    ],
)
def test_branch_examples(fn, p, q, expected):
    assert fn(p, q) == expected


@given(unit, unit)
def test_duality(u, v):
    assert nu2(IndexPair(u, v)) == -nu1(IndexPair(1 - u, 1 - v))


@given(unit, unit)
def test_signs_and_order(u, v):
    pq = IndexPair(u, v)
    assert nu1(pq) >= 0 >= nu2(pq)
    assert mu1(pq) >= mu2(pq)


@given(unit, unit)
def test_regions_cover_square(u, v):
    rs = classify_regions(IndexPair(u, v))
    assert rs.I1s or rs.I2s or rs.I3s
    assert rs.I1 or rs.I2 or rs.I3


@given(unit, unit)
def test_mu_is_nu_minus_inverse_p(u, v):
    # holds branch by branch, so it must hold for the assembled functions
    pq = IndexPair(u, v)
    assert mu1(pq) == nu1(pq) - u
    assert mu2(pq) == nu2(pq) - u


# ---------------------------------------------------------------------------
# verdicts

def test_besov_examples():
    assert embeds_besov_modulation(2, 2, 0, 1, "B-to-M").holds
    assert embeds_besov_modulation(1, 2, F(1, 2), 1, "B-to-M").holds
    assert not embeds_besov_modulation(1, 2, F(-2, 5), 1, "M-to-B").holds
    assert embeds_besov_modulation(1, 2, F(-1, 2), 1, "M-to-B").holds


def test_L_in_M_examples():
    v = embeds_L_in_M(2, 2, 0, 1)
    assert v.holds and v.matched_condition == "Thm1.3(1)"
    v = embeds_L_in_M(2, 1, F(1, 2), 1)
    assert not v.holds and v.threshold == F(1, 2) and v.strict
    v = embeds_L_in_M(1, "infty", 0, 1)
    assert v.holds and v.matched_condition == "Thm1.3(3)"


def test_M_in_L_examples():
    v = embeds_M_in_L(2, 1, 0, 1)
    assert v.holds and v.matched_condition == "Thm1.4(1)" and v.label == "Embeds"
    v = embeds_M_in_L(2, 4, F(-1, 4), 1)
    assert not v.holds and v.label == "DoesNotEmbed"
    v = embeds_M_in_L("infty", 1, 0, 1)
    assert v.holds and v.matched_condition == "Thm1.4(3)"


def test_shifted_examples():
    assert embeds_M_shifted(2, 1, 0, 1, "M_s-to-L").holds
    assert not embeds_M_shifted(1, 2, F(-1, 2), 1, "L-to-M_s").holds
    assert not embeds_M_in_L("infty", 2, F(-1, 2), 1).holds
    assert embeds_M_in_L("infty", 2, F(-3, 5), 1).holds


def test_miyachi():
    assert miyachi_Lp_bound(2, 0, 1, 2).holds
    assert not miyachi_Lp_bound(2, F(-1, 100), 1, 2).holds
    assert miyachi_Lp_bound(4, F(1, 2), 1, 2).holds
    with pytest.raises(DomainError):
        miyachi_Lp_bound(1, 0)
    with pytest.raises(DomainError):
        miyachi_Lp_bound(2, 0, alpha=1)


def test_multiplier_examples():
    assert multiplier_verdict(2, 2, 0, 1, 2, "mult-M-to-L").outcome is Outcome.BOUNDED
    gap = multiplier_verdict(2, 4, F(1, 4), 1, 3, "mult-M-to-L")
    assert gap.outcome is Outcome.UNKNOWN_GAP and gap.threshold == F(1, 4)
    v = multiplier_verdict(1, 1, 0, 1, 3, "mult-M-to-L")
    assert v.outcome is Outcome.UNBOUNDED and v.threshold == F(1, 2)
    with pytest.raises(DomainError):
        multiplier_verdict(2, 2, 0, 1, -1)


@settings(max_examples=300)
@given(unit, unit, rational_s, st.integers(1, 3), st.sampled_from([0, F(1, 2), 1, 2, 3, F(7, 2)]))
def test_triverdict_coherence(u, v, s, n, alpha):
    for direction in ("mult-M-to-L", "mult-L-to-M"):
        tv = multiplier_verdict(p_of(u), p_of(v), s, n, alpha, direction)
        if tv.outcome is Outcome.UNKNOWN_GAP:
            assert alpha > 2 and tv.strict and s == tv.threshold
        if tv.outcome is Outcome.BOUNDED:
            assert s >= tv.threshold
        if tv.outcome is Outcome.UNBOUNDED:
            assert s <= tv.threshold


@given(unit, unit, rational_s, st.integers(1, 4))
def test_monotone_in_s(u, v, s, n):
    p, q = p_of(u), p_of(v)
    step = F(1, 13)
    if embeds_L_in_M(p, q, s, n).holds:
        assert embeds_L_in_M(p, q, s + step, n).holds
    if embeds_M_in_L(p, q, s, n).holds:
        assert embeds_M_in_L(p, q, s - step, n).holds


@given(interior, interior, rational_s, st.integers(1, 3))
def test_embedding_duality_interior(u, v, s, n):
    assert embeds_M_in_L(p_of(u), p_of(v), s, n).holds == embeds_L_in_M(p_of(1 - u), p_of(1 - v), -s, n).holds


@given(unit, unit, rational_s, st.integers(1, 3))
def test_coarse_conditions_bracket_exact(u, v, s, n):
    p, q = p_of(u), p_of(v)
    suff, nec = coarse_embedding_conditions(p, q, s, n, "L-to-M")
    exact = embeds_L_in_M(p, q, s, n).holds
    assert (not suff or exact) and (not exact or nec)
    suff, nec = coarse_embedding_conditions(p, q, s, n, "M-to-L")
    exact = embeds_M_in_L(p, q, s, n).holds
    assert (not suff or exact) and (not exact or nec)


def test_bad_dimension_and_direction():
    with pytest.raises(DomainError):
        embeds_L_in_M(2, 2, 0, 0)
    with pytest.raises(DomainError):
        embeds_besov_modulation(2, 2, 0, 1, "sideways")


def test_fraction_str():
    assert fraction_str(F(-1, 4)) == "-1/4"
    assert fraction_str(F(3)) == "3"
    assert fraction_str(ExtendedExponent.of("infty")) == "infty"
