import csv
import io
import math
from fractions import Fraction

import jsonschema
import numpy as np
import pytest

from modlab.cli import schema
from modlab.errors import AliasingError, DomainError
from modlab.experiments import (
    SUMMARY_COLUMNS,
    ExponentFit,
    ProbeReport,
    annular_bound,
    annular_inequality_check,
    band_multiplier_norm_probe,
    band_multiplier_probe,
    dilation_experiment,
    dilation_grid,
    dual_norm_tail_bound,
    embedding_probe,
    fit_exponent,
    gabor_probe_coefficients,
    multiplier_grid,
    multiplier_loss_experiment,
    sandwich_probe,
    sequence_oracle_dual_norm,
    stationary_phase_exponent,
    summary_csv,
)
from modlab.extremals import LatticeCoefficients

SMALL = dilation_grid(4096, 8)
LAMS = (1, 2, 4, 8, 16)


def _validate(report):
    jsonschema.validate(report.to_dict(), schema("probe_report"))


# ---------------------------------------------------------------------------
# fitting

def test_fit_exact_power():
    lams = [2.0**j for j in range(6)]
    fit = fit_exponent([(l, l**1.5) for l in lams])
    assert abs(fit.slope - 1.5) < 1e-12 and fit.residual < 1e-12


def test_fit_intercept_and_exclusion():
    lams = [2.0**j for j in range(6)]
    fit = fit_exponent([(l, 2 / l) for l in lams], exclude=1)
    assert fit.slope == pytest.approx(-1) and fit.intercept == pytest.approx(math.log(2))
    assert fit.excluded == ((1.0, 2.0),) and fit.lambdas[0] == 2.0


def test_fit_with_noise():
    rng = np.random.default_rng(5)
    lams = [2.0**j for j in range(8)]
    pairs = [(l, l**0.7 * (1 + 0.01 * rng.uniform(-1, 1))) for l in lams]
    assert abs(fit_exponent(pairs).slope - 0.7) < 0.02


@pytest.mark.parametrize(
    "pairs, exclude",
    [
        ([(1, 1), (2, 2), (4, 4)], 0),
        ([(1, 1), (2, 2), (4, 4), (8, 8)], 1),
        ([(1, 1), (2, 0), (4, 4), (8, 8)], 0),
        ([(1, 1), (1, 2), (4, 4), (8, 8)], 0),
        ([(1, 1), (2, math.inf), (4, 4), (8, 8)], 0),
    ],
)
def test_fit_rejects_bad_input(pairs, exclude):
    with pytest.raises(DomainError):
        fit_exponent(pairs, exclude)


# ---------------------------------------------------------------------------
# dilation and embedding probes

def test_dilation_l2_exponent():
    r = dilation_experiment(2, 2, LAMS, spec=SMALL)
    assert abs(r.measured.slope + 0.5) < 0.02
    assert r.verdict_consistency
    _validate(r)


def test_dilation_lambda_checks():
    with pytest.raises(DomainError):
        dilation_experiment(2, 2, (1, 2, 4, 8), spec=SMALL)
    with pytest.raises(DomainError):
        dilation_experiment(2, 2, (1, 4, 2, 8, 16), spec=SMALL)
    with pytest.raises(AliasingError) as info:
        dilation_experiment(2, 2, (1, 2, 4, 8, 512), spec=SMALL)
    assert info.value.max_lambda < 512


def test_sandwich_bounded_and_cap():
    r = sandwich_probe(3, lambdas=LAMS, spec=SMALL)
    assert r.verdict_consistency and len(r.measured) == 2 * len(LAMS)
    # a cap of 1 cannot be met: max / first >= 1 always
    assert not sandwich_probe(3, lambdas=LAMS, spec=SMALL, cap=1.0).verdict_consistency


def test_embedding_gaussian_embeds():
    r = embedding_probe(2, 1, 0, scales=LAMS)
    assert r.predicted["verdict"] == "Embeds" and r.verdict_consistency
    _validate(r)


def test_embedding_gabor_grows():
    r = embedding_probe(2, 4, "-1/4", family="gabor", scales=(8, 16, 32))
    assert r.predicted["verdict"] == "DoesNotEmbed"
    assert all(b > a for a, b in zip(r.measured, r.measured[1:]))
    assert r.verdict_consistency


def test_embedding_errors():
    with pytest.raises(DomainError):
        embedding_probe(2, 2, 0, n=2)
    with pytest.raises(DomainError):
        embedding_probe(2, 2, 0, family="sinc")
    with pytest.raises(DomainError):
        embedding_probe(2, 2, 0, family=lambda s: None)
    with pytest.raises(DomainError):
        gabor_probe_coefficients(2, 2, 0, 4)


# ---------------------------------------------------------------------------
# sequence-space oracles

def test_dual_norm_oracle():
    assert sequence_oracle_dual_norm(1, 2, 1, 1, 0) == 1.0
    # p=1, q=2: (q/p)' = 2, terms (1+k)^{-2s}
    direct = math.sqrt(1 + 2 * sum((1 + k) ** -2.0 for k in range(1, 11)))
    assert sequence_oracle_dual_norm(1, 2, 1, 1, 10) == pytest.approx(direct)
    with pytest.raises(DomainError):
        sequence_oracle_dual_norm(2, 2, 1, 1, 4)
    with pytest.raises(DomainError):
        sequence_oracle_dual_norm(2, 1, 1, 1, 4)


def test_dual_norm_tail_bound():
    assert dual_norm_tail_bound(1, 2, Fraction(1, 2), 10) == math.inf
    a = 2.0
    rd = 2.0
    S = lambda R: sequence_oracle_dual_norm(1, 2, 1, 1, R) ** rd
    assert S(400) - S(100) <= dual_norm_tail_bound(1, 2, 1, 100)
    assert dual_norm_tail_bound(1, 2, 1, 100) == pytest.approx(2 * 101 ** (1 - a) / (a - 1))


def test_annular_single_entry():
    # c = delta_m: annulus |k|/2 <= m <= 2|k| gives |k| in [m/2, 2m], both signs
    m, p, q, s = 6, 2, 1, Fraction(-1, 4)
    gamma = 1 * (0.5 - 1) + float(s)
    ks = [k for k in range(1, 2 * m + 1) if k / 2 <= m <= 2 * k]
    expected = 2 * sum(k**gamma for k in ks)
    c = LatticeCoefficients.from_mapping({m: 1.0})
    assert annular_inequality_check(p, q, s, 1, c) == pytest.approx(expected)


def test_annular_random_below_bound():
    rng = np.random.default_rng(11)
    # gamma q = -5/4 < -1 gives a finite bound; s = -1/4 gives gamma q = -3/4
    bound = annular_bound(2, 1, Fraction(-3, 4))
    assert math.isfinite(bound)
    for _ in range(20):
        c = LatticeCoefficients.random(rng, 30, exclude_zero=True)
        assert annular_inequality_check(2, 1, Fraction(-3, 4), 1, c) <= bound
    assert annular_bound(2, 1, Fraction(-1, 4)) == math.inf


def test_annular_errors():
    c = LatticeCoefficients.from_mapping({3: 1.0})
    with pytest.raises(DomainError):
        annular_inequality_check(1, 2, 0, 1, c)
    with pytest.raises(DomainError):
        annular_inequality_check(2, 1, 0, 1, LatticeCoefficients.from_mapping({0: 1.0}))
    with pytest.raises(DomainError):
        annular_inequality_check(2, 1, 0, 2, c)
    with pytest.raises(DomainError):
        annular_inequality_check(2, 1, 0, 1, LatticeCoefficients.from_mapping({}))


# ---------------------------------------------------------------------------
# multipliers

def test_stationary_phase_exponent():
    assert stationary_phase_exponent(1, 2, 0) == 1
    assert stationary_phase_exponent(2, 3, Fraction(1, 2)) == Fraction(-1, 2)
    assert stationary_phase_exponent(1, 1, Fraction(1, 3)) == Fraction(-1, 3)


def test_unitary_multiplier_is_flat():
    r = multiplier_loss_experiment(2, 2, 0, LAMS, N=2**14)
    assert abs(r.measured.slope) < 1e-6 and r.verdict_consistency
    _validate(r)


def test_multiplier_grid_limits():
    spec = multiplier_grid(2, 4.0, N=2**14)
    assert spec.nyquist >= 4
    with pytest.raises(AliasingError) as info:
        multiplier_grid(2, 1000.0, N=2**12)
    assert info.value.max_lambda < 1000
    with pytest.raises(DomainError):
        multiplier_loss_experiment(2, -1, 0, LAMS)


def test_band_multiplier_alpha_zero_and_l2():
    # alpha = 0 is the constant phase e^i times a window: norm at most sup |phi| = 1 on L^2
    for p in (1, 2, 4):
        r = band_multiplier_probe(p, 0, 2, trials=4)
        assert r.verdict_consistency
    assert band_multiplier_norm_probe(2, 2, 3, 6) <= 1 + 1e-12
    _validate(band_multiplier_probe(2, 2, 3, trials=4))


def test_band_multiplier_monotone_and_deterministic():
    a = [band_multiplier_norm_probe(3, 2, 2, t, seed=4) for t in (1, 3, 6)]
    assert a[0] <= a[1] <= a[2]
    assert band_multiplier_norm_probe(3, 2, 2, 6, seed=4) == a[2]
    with pytest.raises(DomainError):
        band_multiplier_norm_probe(2, 2, 2, 0)
    with pytest.raises(DomainError):
        band_multiplier_norm_probe(2, 2, 1000, 2)


# ---------------------------------------------------------------------------
# reports

def test_summary_csv():
    fit = ExponentFit(0.5, 0.0, 0.0, (2.0, 4.0, 8.0, 16.0), (1.0, 2.0, 3.0, 4.0))
    reports = [
        ProbeReport("dilation", {"q": "2", "p": "1"}, {"upper": "1"}, fit, True),
        ProbeReport("sandwich", {"p": "2"}, {"bounded": "true"}, [1.0, 1.5], False),
    ]
    rows = list(csv.DictReader(io.StringIO(summary_csv(reports))))
    assert tuple(rows[0]) == SUMMARY_COLUMNS
    assert rows[0]["parameters"] == "p=1;q=2" and rows[0]["measured"] == "0.5"
    assert rows[1]["measured"] == "1.5" and rows[1]["residual"] == "" and rows[1]["consistent"] == "false"
    for r in reports:
        _validate(r)
