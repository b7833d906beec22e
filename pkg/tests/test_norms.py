import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modlab.errors import AliasingError, DomainError, TruncationError
from modlab.extremals import annulus_function, annulus_hat
from modlab.grid import Gaussian, GridSpec, SampledFunction, Spectrum, Zero, idft, sample
from modlab.norms import (
    DYADIC,
    HAT,
    SMOOTHED_HAT,
    TAIL_TOLERANCE,
    BesovDecomposition,
    ModulationDecomposition,
    besov_norm,
    lp_norm,
    modulation_norm,
    sobolev_norm,
)
from modlab.windows import DyadicWindow, Window, cutoff, smoothstep

P_LIST = (1, Fraction(3, 2), 2, 3, "infty")
SPEC = GridSpec.band_aligned(1, 2**12, 8)


# ---------------------------------------------------------------------------
# windows

def test_smoothstep_symmetry():
    t = np.linspace(-0.5, 1.5, 401)
    assert np.allclose(smoothstep(t) + smoothstep(1 - t), 1.0, atol=1e-15)
    assert smoothstep(0.0) == 0.0 and smoothstep(1.0) == 1.0


@pytest.mark.parametrize("w", [HAT, SMOOTHED_HAT])
def test_uniform_partition_of_unity(w):
    assert w.partition_defect() < 1e-12
    t = np.linspace(-3, 3, 6001)
    assert np.all(w.profile(t)[np.abs(t) >= 1] == 0)


def test_window_2d_is_tensor():
    x, y = np.meshgrid(np.linspace(-1, 1, 5), np.linspace(-1, 1, 7), indexing="ij")
    assert np.allclose(HAT(x, y), HAT.profile(x) * HAT.profile(y))


def test_unknown_window_kind():
    with pytest.raises(ValueError):
        Window("gaussian")


def test_dyadic_partition_and_support():
    assert DYADIC.partition_defect(1000.0) < 1e-12
    r = np.linspace(0, 64, 64001)
    assert np.all(DYADIC.psi0(r)[r >= 2] == 0)
    psi = DYADIC.psi(r)
    assert np.all(psi[(r <= 0.5) | (r >= 2)] == 0)
    for j in range(1, 5):
        lo, hi = DyadicWindow.support(j)
        piece = DYADIC.piece(j, r)
        assert np.all(piece[(r <= lo) | (r >= hi)] == 0)
    assert cutoff(0.5) == 1.0 and cutoff(2.5) == 0.0


# ---------------------------------------------------------------------------
# L^p and L^p_s

def test_gaussian_l2():
    assert abs(lp_norm(sample(Gaussian(), SPEC), 2) - math.pi**0.25) < 1e-6


def test_plateau_near_one():
    spec = GridSpec(1, 2**14, 8.0)
    x = spec.nodes()
    f = SampledFunction(spec, np.where(np.abs(x) < 0.5, 1.0, 0.0))
    for p in P_LIST:
        assert abs(lp_norm(f, p) - 1) < 1e-3


@pytest.mark.parametrize("p", P_LIST)
@pytest.mark.parametrize("lam", [2.0, 3.0, 5.5])
def test_lp_scaling(p, lam):
    f = sample(Gaussian(), SPEC)
    g = sample(Gaussian(sigma=1 / lam), SPEC)
    assert abs(lp_norm(g, p) / lp_norm(f, p) - lam ** (-1.0 / float(Fraction(p) if p != "infty" else math.inf))) < 1e-6


def test_sobolev_zero_and_inverse():
    f = sample(Gaussian(sigma=0.8), SPEC)
    for p in P_LIST:
        assert abs(sobolev_norm(f, p, 0) - lp_norm(f, p)) <= 1e-10 * lp_norm(f, p)
    from modlab.grid import apply_symbol, dft, japanese

    lifted = idft(apply_symbol(dft(f), lambda *xi: japanese(xi) ** 1.5))
    assert abs(sobolev_norm(lifted, 3, -1.5) / lp_norm(f, 3) - 1) < 1e-8


def test_sobolev_gaussian_quadrature():
    # (2 pi)^-1 int (1 + xi^2) 2 pi exp(-xi^2) dxi by an independent quadrature
    xi = np.linspace(-12, 12, 200001)
    integrand = (1 + xi**2) * np.exp(-(xi**2))
    oracle = math.sqrt(np.trapezoid(integrand, xi))
    assert abs(sobolev_norm(sample(Gaussian(), SPEC), 2, 1) - oracle) < 1e-8


def test_sobolev_aliasing_error():
    with pytest.raises(AliasingError):
        sobolev_norm(sample(Gaussian(sigma=0.02), SPEC), 2, 1)


# ---------------------------------------------------------------------------
# modulation and Besov

def test_zero_function():
    z = sample(Zero(), SPEC)
    for fn in (modulation_norm, besov_norm):
        rep = fn(z, 2, 1)
        assert rep.value == 0.0 and rep.band_contributions == {}


def test_narrow_spectrum_touches_three_bands():
    xi = SPEC.frequencies()
    F = Spectrum(SPEC, 1 - smoothstep(np.abs(xi) / 0.5))
    rep = modulation_norm(F, 2, 2)
    assert set(rep.band_contributions) <= {(-1,), (0,), (1,)}


def test_gaussian_modulation_l2_ratio():
    f = sample(Gaussian(), SPEC)
    r = modulation_norm(f, 2, 2).value / lp_norm(f, 2)
    # 1/2 <= sum_k hat(xi - k)^2 <= 1 and Plancherel
    assert 2**-0.5 <= r <= 1


@pytest.mark.parametrize("q1, q2", [(1, Fraction(3, 2)), (Fraction(3, 2), 2), (2, 3), (3, "infty")])
def test_nesting_in_q(q1, q2):
    f = sample(Gaussian(sigma=0.4), SPEC)
    dec = ModulationDecomposition(f, ps=[2])
    assert dec.report(2, q2).value <= dec.report(2, q1).value


@settings(max_examples=20, deadline=None)
@given(
    st.sampled_from(P_LIST),
    st.sampled_from(P_LIST),
    st.sampled_from([0, Fraction(1, 2), -1, 2]),
    st.floats(0.2, 2.0),
)
def test_band_additivity(p, q, s, sigma):
    f = sample(Gaussian(sigma=sigma), SPEC)
    for rep in (modulation_norm(f, p, q, s), besov_norm(f, p, q, s)):
        assert abs(rep.aggregate() - rep.value) <= 1e-12 * rep.value
        assert rep.tail_estimate < TAIL_TOLERANCE * rep.value or rep.tail_estimate == 0


def test_window_equivalence():
    ratios = []
    for sigma in (0.1, 0.3, 1.0, 3.0):
        f = sample(Gaussian(sigma=sigma), SPEC)
        for p in P_LIST:
            for q in (1, 2, "infty"):
                a = modulation_norm(f, p, q, window=HAT).value
                b = modulation_norm(f, p, q, window=SMOOTHED_HAT).value
                ratios.append(a / b)
    assert 0.25 <= min(ratios) and max(ratios) <= 4


def test_explicit_radius_and_truncation_error():
    f = sample(Gaussian(sigma=0.5), SPEC)
    auto = modulation_norm(f, 2, 1)
    with pytest.raises(TruncationError) as info:
        modulation_norm(f, 2, 1, radius=0)
    assert info.value.suggested_radius == auto.truncation_radius
    again = modulation_norm(f, 2, 1, radius=auto.truncation_radius + 3)
    assert abs(again.value / auto.value - 1) < 1e-6


def test_besov_narrow_annulus():
    xi = np.abs(SPEC.frequencies())
    ramp = smoothstep((xi - 0.75) / 0.05) * (1 - smoothstep((xi - 0.95) / 0.05))
    rep = besov_norm(Spectrum(SPEC, ramp), 2, 2)
    assert set(rep.band_contributions) <= {0, 1}


def test_besov_annulus_quadrature():
    # the spectral Riemann sum converges like dxi^2, so a long box is needed
    spec = GridSpec(1, 2**14, 800.0)
    g = annulus_function(spec)
    rep = besov_norm(g, 2, 2)
    t = np.linspace(0.0, 2.5, 250001)
    weight = sum(DYADIC.piece(j, t) ** 2 for j in range(4))
    # (2 pi)^-1 int_R sum_j psi_j^2 |g^|^2 dxi, even in xi
    oracle = math.sqrt(2 * np.trapezoid(weight * annulus_hat(t) ** 2, t) / (2 * math.pi))
    assert abs(rep.value / oracle - 1) < 1e-6


def test_2d_modulation_matches_full_band_transforms():
    spec = GridSpec.band_aligned(2, 128, 4)
    f = sample(Gaussian(sigma=0.7), spec)
    dec = ModulationDecomposition(f, ps=[3])
    for key in dec.keys[:6]:
        full = lp_norm(dec.band_function(key), 3)
        assert abs(dec.band_norm(key, 3) - full) <= 1e-12 * max(full, 1e-300)


def test_decomposition_rejects_arrays():
    with pytest.raises(DomainError):
        ModulationDecomposition(np.ones(8))
    with pytest.raises(DomainError):
        BesovDecomposition([1.0])


def test_norm_report_json():
    d = modulation_norm(sample(Gaussian(), SPEC), "3/2", "infty", "1/2").to_dict()
    assert d["p"] == "3/2" and d["q"] == "infty" and d["s"] == "1/2"
    ks = [b["k"] for b in d["bands"]]
    assert ks == sorted(ks)
