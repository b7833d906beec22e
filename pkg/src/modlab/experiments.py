"""Exponent fits, sharpness probes and sequence-space oracles.

Every probe returns a :class:`ProbeReport` whose ``verdict_consistency`` flag
compares the measurement with the exact prediction from :mod:`modlab.indices`.
"""

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import AliasingError, DomainError
from .extremals import (
    LatticeCoefficients,
    annulus_function,
    annulus_hat,
    eta_profile,
    gabor_lattice,
)
from .grid import Gaussian, GridSpec, Spectrum, idft, sample
from .indices import (
    ExtendedExponent,
    embeds_M_in_L,
    fraction_str,
    mu1,
    smoothness,
    mu2,
)
from .norms import HAT, ModulationDecomposition, lp_norm, sobolev_norm

__all__ = [
    "ExponentFit",
    "ProbeReport",
    "fit_exponent",
    "DEFAULT_LAMBDAS",
    "DEFAULT_SEED",
    "dilation_grid",
    "dilation_family",
    "dilation_sweep",
    "dilation_experiment",
    "sandwich_sweep",
    "sandwich_probe",
    "embedding_probe",
    "gabor_probe_grid",
    "gabor_probe_coefficients",
    "sequence_oracle_dual_norm",
    "dual_norm_tail_bound",
    "annular_inequality_check",
    "annular_bound",
    "stationary_phase_exponent",
    "multiplier_grid",
    "multiplier_value",
    "multiplier_loss_experiment",
    "band_multiplier_norm_probe",
    "band_multiplier_probe",
    "summary_csv",
]

DEFAULT_LAMBDAS = tuple(2.0**j for j in range(7))
DEFAULT_SEED = 20240611
SLOPE_TOLERANCE = 0.05


def _exp(p):
    return ExtendedExponent.of(p)


def _num(x):
    """Exact Fraction for rational input (including ``"a/b"`` strings), float otherwise."""
    if isinstance(x, float):
        return x
    return smoothness(x)


def _fmt(x):
    if isinstance(x, ExtendedExponent):
        return str(x)
    if isinstance(x, (int, Fraction)):
        return fraction_str(x)
    return repr(float(x))


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class ExponentFit:
    """Least-squares line through ``(log lam, log value)``.

    ``excluded`` lists the leading ``(lam, value)`` pairs left out of the fit;
    ``residual`` is ``max |value / fitted - 1|`` over the fitted points.
    """

    slope: float
    intercept: float
    residual: float
    lambdas: tuple
    values: tuple
    excluded: tuple = ()

    def to_dict(self):
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "residual": self.residual,
            "lambdas": list(self.lambdas),
            "values": list(self.values),
            "excluded": [list(pair) for pair in self.excluded],
        }


def fit_exponent(pairs, exclude=0):
    """Fit ``value ~ exp(intercept) * lam^slope`` by least squares in log-log.

    Parameters
    ----------
    pairs : sequence of (lam, value)
        ``lam`` strictly increasing, ``value > 0``.
    exclude : int
        Number of leading pairs (smallest ``lam``) to leave out of the fit.
    """
    pairs = [(float(l), float(v)) for l, v in pairs]
    lams = [l for l, _ in pairs]
    if any(b <= a for a, b in zip(lams, lams[1:])):
        raise DomainError("lambdas must be strictly increasing")
    if any(not (v > 0 and math.isfinite(v)) for _, v in pairs):
        raise DomainError("fit needs finite positive values")
    used = pairs[exclude:]
    if len(used) < 4:
        raise DomainError(f"fit needs at least 4 points after exclusion, got {len(used)}")
    x = np.log([l for l, _ in used])
    y = np.log([v for _, v in used])
    slope, intercept = np.polyfit(x, y, 1)
    fitted = np.exp(intercept + slope * x)
    residual = float(np.max(np.abs(np.exp(y) / fitted - 1.0)))
    return ExponentFit(
        float(slope),
        float(intercept),
        residual,
        tuple(l for l, _ in used),
        tuple(v for _, v in used),
        tuple(pairs[:exclude]),
    )


@dataclass
class ProbeReport:
    """Outcome of one probe at one parameter point.

    ``measured`` is an :class:`ExponentFit` or a list of ratios indexed by
    ``scales``.
    """

    kind: str
    parameters: dict
    predicted: dict
    measured: object
    verdict_consistency: bool
    scales: list = field(default_factory=list)
    notes: str = ""
    headline: float = None

    @property
    def measured_value(self):
        """Slope of a fit, ``headline`` if set, else last / first of the series."""
        if isinstance(self.measured, ExponentFit):
            return self.measured.slope
        if self.headline is not None:
            return self.headline
        series = list(self.measured)
        return series[-1] / series[0] if series and series[0] else float("nan")

    @property
    def residual(self):
        return self.measured.residual if isinstance(self.measured, ExponentFit) else None

    def to_dict(self):
        measured = self.measured.to_dict() if isinstance(self.measured, ExponentFit) else list(self.measured)
        return {
            "kind": self.kind,
            "parameters": dict(self.parameters),
            "predicted": dict(self.predicted),
            "measured": measured,
            "measured_value": float(self.measured_value),
            "scales": list(self.scales),
            "verdict_consistency": bool(self.verdict_consistency),
            "notes": self.notes,
        }

    def summary_row(self):
        pred = ";".join(f"{k}={v}" for k, v in sorted(self.predicted.items()))
        params = ";".join(f"{k}={v}" for k, v in sorted(self.parameters.items()))
        res = self.residual
        return {
            "kind": self.kind,
            "parameters": params,
            "predicted": pred,
            "measured": repr(float(self.measured_value)),
            "residual": "" if res is None else repr(float(res)),
            "consistent": "true" if self.verdict_consistency else "false",
        }


SUMMARY_COLUMNS = ("kind", "parameters", "predicted", "measured", "residual", "consistent")


def summary_csv(reports):
    """CSV text with one row per report, in the given order."""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SUMMARY_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.summary_row())
    return buf.getvalue()


# ---------------------------------------------------------------------------
# dilation exponents

def dilation_grid(N=2**16, P=32):
    """Band-aligned 1D grid used by the dilation sweeps (``L = 2 pi P``)."""
    return GridSpec.band_aligned(1, N, P)


def dilation_family(family, spec, lam):
    """``U_lam f`` for the named family, built without resampling error."""
    if family == "gaussian":
        return sample(Gaussian(sigma=1.0 / lam), spec)
    if family == "annulus":
        return annulus_function(spec, lam)
    raise DomainError(f"unknown family {family!r} (expected 'gaussian' or 'annulus')")


def _max_family_lambda(family, spec, tol=1e-8):
    # spectra: gaussian exp(-|xi|^2 / (2 lam^2)), annulus supported below 1.96 lam
    half_nyq = spec.nyquist / 2
    if family == "annulus":
        return half_nyq / 1.96
    # mass fraction beyond r of |f^|^2 = exp(-xi^2 / lam^2) is erfc(r / lam)
    lo, hi = 0.0, half_nyq
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if math.erfc(half_nyq / mid) < tol else (lo, mid)
    return lo


def _decompositions(family, lambdas, spec, ps, window):
    decs = []
    for lam in lambdas:
        try:
            decs.append(ModulationDecomposition(dilation_family(family, spec, lam), window, ps=ps))
        except AliasingError as exc:
            lmax = _max_family_lambda(family, spec)
            raise AliasingError(f"{exc}; largest admissible lambda is {lmax:.4g}", max_lambda=lmax) from exc
    return decs


def _check_lambdas(lambdas):
    lambdas = [float(l) for l in lambdas]
    if len(lambdas) < 5:
        raise DomainError("a dilation sweep needs at least 5 lambdas (the smallest is excluded from the fit)")
    if any(l < 1 for l in lambdas) or any(b <= a for a, b in zip(lambdas, lambdas[1:])):
        raise DomainError("lambdas must be >= 1 and strictly increasing")
    return lambdas


def dilation_sweep(pairs, lambdas=DEFAULT_LAMBDAS, family="gaussian", spec=None, window=HAT, tol=SLOPE_TOLERANCE):
    """Dilation exponents for several ``(p, q)`` pairs sharing one set of band
    decompositions per ``lam``.  Returns one :class:`ProbeReport` per pair."""
    lambdas = _check_lambdas(lambdas)
    spec = spec or dilation_grid()
    pairs = [(_exp(p), _exp(q)) for p, q in pairs]
    ps = sorted({p.recip: p for p, _ in pairs}.values(), key=lambda e: e.recip)
    decs = _decompositions(family, lambdas, spec, ps, window)
    reports = []
    for p, q in pairs:
        values = [d.report(p, q, 0).value for d in decs]
        fit = fit_exponent(list(zip(lambdas, values)), exclude=1)
        lo, hi = spec.n * mu2(p, q), spec.n * mu1(p, q)
        ok = float(lo) - tol <= fit.slope <= float(hi) + tol
        reports.append(
            ProbeReport(
                "dilation",
                {"p": str(p), "q": str(q), "n": spec.n, "family": family, "N": spec.N, "L": spec.L},
                {"lower": fraction_str(lo), "upper": fraction_str(hi), "tolerance": tol},
                fit,
                bool(ok),
                scales=lambdas,
            )
        )
    return reports


def dilation_experiment(p, q, lambdas=DEFAULT_LAMBDAS, family="gaussian", spec=None, window=HAT, tol=SLOPE_TOLERANCE):
    """Fit the growth exponent of ``||U_lam f||_{M^{p,q}}`` and check it lies in
    ``[n mu2 - tol, n mu1 + tol]``."""
    return dilation_sweep([(p, q)], lambdas, family, spec, window, tol)[0]


# ---------------------------------------------------------------------------
# embedding probes

def sandwich_sweep(ps, family="gaussian", lambdas=DEFAULT_LAMBDAS, spec=None, window=HAT, cap=2.0):
    """Constants of ``M^{p,min(p,p')} -> L^p -> M^{p,max(p,p')}`` along dilates.

    For each ``p`` reports ``C(lam) = ||f||_p / ||f||_{M^{p,min}}`` followed by
    ``C'(lam) = ||f||_{M^{p,max}} / ||f||_p``.  Both inclusions are bounded, so
    neither ratio may grow: consistency means ``max C / C(lam_0) < cap`` and the
    same for ``C'``.  One band decomposition per ``lam`` serves every ``p``.
    """
    spec = spec or dilation_grid()
    lambdas = [float(l) for l in lambdas]
    ps = [_exp(p) for p in ps]
    decs = _decompositions(family, lambdas, spec, ps, window)
    members = [dilation_family(family, spec, lam) for lam in lambdas]
    reports = []
    for p in ps:
        qmin = ExtendedExponent(max(p.recip, 1 - p.recip))
        qmax = ExtendedExponent(min(p.recip, 1 - p.recip))
        lower, upper = [], []
        for f, d in zip(members, decs):
            lp = lp_norm(f, p)
            lower.append(lp / d.report(p, qmin, 0).value)
            upper.append(d.report(p, qmax, 0).value / lp)
        g1 = max(lower) / lower[0]
        g2 = max(upper) / upper[0]
        reports.append(
            ProbeReport(
                "sandwich",
                {"p": str(p), "family": family, "q_small": str(qmin), "q_large": str(qmax)},
                {"bounded": "true", "cap": cap},
                lower + upper,
                bool(g1 < cap and g2 < cap),
                scales=lambdas + lambdas,
                notes=f"first half: L^p / M^(p,{qmin}); second half: M^(p,{qmax}) / L^p; "
                f"growth {g1:.6g}, {g2:.6g}",
            )
        )
    return reports


def sandwich_probe(p, family="gaussian", lambdas=DEFAULT_LAMBDAS, spec=None, window=HAT, cap=2.0):
    """Single-``p`` form of :func:`sandwich_sweep`."""
    return sandwich_sweep([p], family, lambdas, spec, window, cap)[0]


def gabor_probe_grid(R, samples_per_unit=128):
    """Integer-aligned grid holding translates up to ``|l| = R`` with margin."""
    L = 1 << math.ceil(math.log2(2 * (R + 2)))
    return GridSpec(1, L * samples_per_unit, float(L))


def gabor_probe_coefficients(p, q, s, R):
    """Near-extremal Gabor coefficients ``|c_l| = <l>^{s (r' - 1)}`` for ``r = q/p``.

    For ``p < q`` they nearly maximise ``||<l>^s c||_p / ||c||_q``, the
    discrete shadow of ``||f||_{L^p_s} / ||f||_{M^{p,q}}``.
    """
    p, q = _exp(p), _exp(q)
    if not p.recip > q.recip:
        raise DomainError("the Gabor family probes p < q")
    r_recip = q.recip / p.recip  # 1/r with r = q/p
    r_dual = 1 / (1 - r_recip)  # r'
    ks = np.arange(-R, R + 1)
    expo = float(_num(s)) * float(r_dual - 1)
    return LatticeCoefficients(1, ks.reshape(-1, 1), (1.0 + ks.astype(float) ** 2) ** (expo / 2))


DEFAULT_GABOR_RADII = (8, 16, 32, 64, 128)


def embedding_probe(p, q, s, n=1, family="gaussian", scales=None, cap=2.0, min_growth=1.1):
    """Ratio series ``||f||_{L^p_s} / ||f||_{M^{p,q}}`` along a family.

    ``family`` is ``"gaussian"`` or ``"annulus"`` (scale = dilation factor),
    ``"gabor"`` (scale = lattice radius R), or a callable ``scale ->
    SampledFunction``.  If ``M^{p,q} -> L^p_s`` is predicted, the series must
    stay below ``cap`` times its first value; otherwise it must increase
    strictly with ``last / first >= min_growth``.
    """
    if n != 1:
        raise DomainError("numerical probes run in one dimension")
    p, q, s = _exp(p), _exp(q), _num(s)
    verdict = embeds_M_in_L(p, q, s, n)
    if family == "gabor":
        scales = list(scales or DEFAULT_GABOR_RADII)
        eta = eta_profile()

        def member(R):
            R = int(R)
            return gabor_lattice(gabor_probe_coefficients(p, q, s, R), eta, gabor_probe_grid(R))

    elif family in ("gaussian", "annulus"):
        scales = list(scales or DEFAULT_LAMBDAS)
        spec = dilation_grid()

        def member(lam):
            return dilation_family(family, spec, lam)

    elif callable(family):
        if scales is None:
            raise DomainError("a custom family needs explicit scales")
        scales = list(scales)
        member = family
    else:
        raise DomainError(f"unknown family {family!r}")
    ratios = []
    for scale in scales:
        f = member(scale)
        if not np.any(f.values):
            raise DomainError(f"family member at scale {scale} is identically zero")
        ratios.append(sobolev_norm(f, p, s) / ModulationDecomposition(f, HAT, ps=[p]).report(p, q, 0).value)
    if verdict.holds:
        ok = max(ratios) / ratios[0] < cap
    else:
        ok = all(b > a for a, b in zip(ratios, ratios[1:])) and ratios[-1] / ratios[0] >= min_growth
    name = family if isinstance(family, str) else getattr(family, "__name__", "custom")
    return ProbeReport(
        "embedding",
        {"p": str(p), "q": str(q), "s": _fmt(s), "n": n, "family": name},
        {
            "verdict": verdict.label,
            "matched_condition": verdict.matched_condition or "",
            "threshold": fraction_str(verdict.threshold),
        },
        ratios,
        bool(ok),
        scales=[float(x) for x in scales],
    )


# ---------------------------------------------------------------------------
# sequence-space oracles

def _lattice_radii(n, R):
    """Euclidean lengths of all ``k in Z^n`` with ``|k| <= R`` (n = 1, 2)."""
    if n == 1:
        k = np.arange(1, int(R) + 1, dtype=float)
        return np.concatenate(([0.0], k, k))
    if n == 2:
        axis = np.arange(-int(R), int(R) + 1, dtype=float)
        r = np.sqrt(axis[:, None] ** 2 + axis[None, :] ** 2).ravel()
        return r[r <= R]
    raise DomainError("lattice sums are implemented for n = 1, 2")


def _dual_exponent_of_ratio(p, q):
    """``(q/p)'`` as a float (``q = inf`` gives 1)."""
    return float(1 / (1 - q.recip / p.recip))


def sequence_oracle_dual_norm(p, q, s, n, R):
    """``||{(1 + |k|)^{-s p}}||_{l^{(q/p)'}}`` over ``k in Z^n``, ``|k| <= R``."""
    p, q = _exp(p), _exp(q)
    if not p.recip > q.recip:
        raise DomainError("the dual-norm oracle needs p < q")
    if R < 0:
        raise DomainError("radius must be nonnegative")
    rd = _dual_exponent_of_ratio(p, q)
    a = float(_num(s)) * float(p.value) * rd
    terms = (1.0 + _lattice_radii(n, R)) ** (-a)
    return float(math.fsum(terms.tolist()) ** (1.0 / rd))


def dual_norm_tail_bound(p, q, s, R):
    """1D bound ``2 int_R^inf (1 + x)^{-a} dx`` on the power-sum increment past R,
    with ``a = s p (q/p)'``; infinite when ``a <= 1``."""
    p, q = _exp(p), _exp(q)
    a = float(_num(s)) * float(p.value) * _dual_exponent_of_ratio(p, q)
    if a <= 1:
        return math.inf
    return 2.0 * (1.0 + R) ** (1.0 - a) / (a - 1.0)


def annular_inequality_check(p, q, s, n, c):
    """LHS / RHS of the annular inequality for a coefficient sequence ``c``.

    ``LHS = (sum_{k != 0} |k|^{gamma q} (sum_{|k|/2 <= |l| <= 2|k|} |c_l|^p)^{q/p})^{1/q}``
    with ``gamma = n (1/p - 1) + s`` and ``RHS = ||c||_{l^p}``.
    """
    p, q = _exp(p), _exp(q)
    s = _num(s)
    if p.is_infinite or q.is_infinite or not q.recip > p.recip:
        raise DomainError("the annular inequality needs finite q < p")
    if c.n != n:
        raise DomainError("coefficient dimension differs from n")
    if len(c.values) == 0:
        raise DomainError("coefficient sequence is empty")
    if np.any(np.all(c.ks == 0, axis=1)):
        raise DomainError("the coefficient at 0 must be absent")
    pv, qv = float(p.value), float(q.value)
    gamma = n * (1.0 / pv - 1.0) + float(s)
    rl = c.norms
    order = np.argsort(rl)
    rl = rl[order]
    mass = np.abs(c.values[order]) ** pv
    prefix = np.concatenate(([0.0], np.cumsum(mass)))
    rk = _lattice_radii(n, 2.0 * rl[-1])
    rk = rk[rk > 0]
    eps = 1e-12
    lo = np.searchsorted(rl, rk / 2 - eps, side="left")
    hi = np.searchsorted(rl, 2 * rk + eps, side="right")
    annulus = prefix[hi] - prefix[lo]
    keep = annulus > 0
    lhs = float(np.sum(rk[keep] ** (gamma * qv) * annulus[keep] ** (qv / pv)) ** (1.0 / qv))
    rhs = float(prefix[-1] ** (1.0 / pv))
    return lhs / rhs


def annular_bound(p, q, s, n=1):
    """``(sum_{k != 0} |k|^{gamma q})^{1/q}``, which bounds the annular ratio for
    every ``c`` when ``gamma q < -n``; ``inf`` otherwise."""
    p, q = _exp(p), _exp(q)
    gq = (n * (float(p.recip) - 1.0) + float(s)) * float(q.value)
    if gq >= -n:
        return math.inf
    if n == 1:
        # zeta(-gq) via partial sum plus integral tail
        K = 100000
        k = np.arange(1, K + 1, dtype=float)
        zeta = math.fsum((k**gq).tolist()) + K ** (gq + 1) / (-gq - 1) + 0.5 * K**gq
        return (2.0 * zeta) ** (1.0 / float(q.value))
    raise DomainError("closed-form bound implemented for n = 1")


# ---------------------------------------------------------------------------
# multiplier experiments

def stationary_phase_exponent(p, alpha, s, n=1):
    """Predicted growth of ``||e^{i|lam D|^alpha} <lam D>^{-s} g||_{L^p}`` in ``lam``.

    ``alpha n (1/p - 1/2) - s``; for ``n = 1`` and ``alpha = 1`` the phase is
    linear on each half-line, nothing disperses and the exponent is ``-s``.
    """
    p, alpha, s = _exp(p), _num(alpha), _num(s)
    if n == 1 and alpha == 1:
        return -s
    return alpha * n * (p.recip - Fraction(1, 2)) - s


MULTIPLIER_MARGIN = 200.0


def _spread(alpha, lam):
    # largest |d/dxi (lam |xi|)^alpha| over the annulus support 0.51 <= |xi| <= 1.96
    if alpha == 0:
        return 0.0
    return alpha * lam**alpha * max(0.51 ** (alpha - 1), 1.96 ** (alpha - 1))


def multiplier_grid(alpha, lam, N=2**16, min_P=64):
    """Band-aligned grid wide enough for the dispersed annulus and with
    Nyquist frequency at least 4."""
    alpha = float(alpha)
    need = 2.0 * (_spread(alpha, lam) + MULTIPLIER_MARGIN)
    P = min_P
    while 2 * math.pi * P < need:
        P *= 2
    if N / (2 * P) < 4:
        Pmax = N // 8
        room = math.pi * Pmax - MULTIPLIER_MARGIN
        c = alpha * max(0.51 ** (alpha - 1), 1.96 ** (alpha - 1))
        lmax = (room / c) ** (1 / alpha) if alpha > 0 else math.inf
        raise AliasingError(
            f"N = {N} cannot hold the dispersed annulus at lambda = {lam:g} for alpha = {alpha:g}; "
            f"largest admissible lambda is {lmax:.4g}",
            max_lambda=lmax,
        )
    return GridSpec.band_aligned(1, N, P)


def multiplier_value(p, alpha, s, lam, N=2**16):
    """``||e^{i|lam D|^alpha} <lam D>^{-s} g||_{L^p}`` for the annulus ``g``."""
    spec = multiplier_grid(alpha, lam, N)
    xi = np.abs(spec.frequencies())
    alpha, s = float(alpha), float(s)
    symbol = np.exp(1j * (lam * xi) ** alpha) * (1.0 + (lam * xi) ** 2) ** (-s / 2)
    coeffs = annulus_hat(xi) * symbol
    return lp_norm(idft(Spectrum(spec, coeffs)), p)


def multiplier_loss_experiment(p, alpha, s, lambdas=DEFAULT_LAMBDAS, N=2**16, tol=0.1):
    """Fit the growth exponent of :func:`multiplier_value` and compare it with
    :func:`stationary_phase_exponent` (consistent when within ``tol``)."""
    alpha, s = _num(alpha), _num(s)
    if alpha < 0:
        raise DomainError("alpha must be nonnegative")
    lambdas = _check_lambdas(lambdas)
    values = [multiplier_value(p, alpha, s, lam, N) for lam in lambdas]
    fit = fit_exponent(list(zip(lambdas, values)), exclude=1)
    pred = stationary_phase_exponent(p, alpha, s)
    ok = abs(fit.slope - float(pred)) <= tol
    return ProbeReport(
        "multiplier",
        {"p": str(_exp(p)), "alpha": _fmt(alpha), "s": _fmt(s), "n": 1, "N": N},
        {"exponent": _fmt(pred), "tolerance": tol},
        fit,
        bool(ok),
        scales=lambdas,
    )


def _band_multiplier_ratios(p, alpha, k, trials, seed, spec, window):
    p = _exp(p)
    xi = spec.frequencies()
    if abs(k) + 2 > spec.nyquist / 2:
        raise DomainError(f"band {k} too close to the Nyquist frequency {spec.nyquist:g}")
    phase = np.exp(1j * np.abs(xi) ** float(alpha))
    win = window.profile(xi - k)
    rng = np.random.default_rng(seed)
    near = np.abs(xi - k) <= 2
    ratios = []
    for i in range(trials):
        if i == 0:
            F = win.astype(complex)
        else:
            F = np.zeros(spec.N, dtype=complex)
            m = int(near.sum())
            F[near] = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        f = idft(Spectrum(spec, F))
        out = idft(Spectrum(spec, F * phase * win))
        den = lp_norm(f, p)
        ratios.append(lp_norm(out, p) / den if den > 0 else 0.0)
    kernel = idft(Spectrum(spec, phase * win))
    return ratios, lp_norm(kernel, 1)


def band_multiplier_norm_probe(p, alpha, k, trials, seed=DEFAULT_SEED, spec=None, window=HAT):
    """Lower bound for ``||phi(D - k) e^{i|D|^alpha}||_{L^p -> L^p}``.

    Maximises the norm ratio over a nested library: the first member is the
    band kernel ``(phi(. - k))^vee``; member ``i >= 1`` has random complex
    coefficients on the lattice points within distance 2 of ``k`` drawn from
    a generator seeded with ``seed``.  The estimate is nondecreasing in
    ``trials``.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    spec = spec or GridSpec.band_aligned(1, 2**12, 8)
    ratios, _ = _band_multiplier_ratios(p, _num(alpha), k, trials, seed, spec, window)
    return max(ratios)


def band_multiplier_probe(p, alpha, k, trials=16, seed=DEFAULT_SEED, spec=None, window=HAT):
    """Report form of :func:`band_multiplier_norm_probe`.

    The measured series is the running maximum over the library.  Young's
    inequality bounds the operator norm by the ``L^1`` norm of its kernel, so
    consistency means the final estimate stays below that bound (and below 1
    for ``p = 2``).
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    spec = spec or GridSpec.band_aligned(1, 2**12, 8)
    alpha = _num(alpha)
    ratios, young = _band_multiplier_ratios(p, alpha, k, trials, seed, spec, window)
    running = np.maximum.accumulate(ratios).tolist()
    bound = min(young, 1.0) if _exp(p).recip == Fraction(1, 2) else young
    est = running[-1]
    return ProbeReport(
        "band-multiplier",
        {"p": str(_exp(p)), "alpha": _fmt(alpha), "k": int(k), "trials": int(trials), "seed": int(seed)},
        {"upper_bound": repr(float(bound))},
        running,
        bool(est <= bound * (1 + 1e-9)),
        scales=[float(i + 1) for i in range(trials)],
        headline=float(est),
    )
