"""Test families built from disjointly supported bumps, critical sequences and
band-limited annuli, plus the dilation operator ``U_lam f(x) = f(lam x)``."""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AliasingError, DomainError, ResolutionError
from .grid import Bump, Dilated, SampledFunction, Spectrum, dft, idft, sample
from .indices import ExtendedExponent
from .norms import lp_norm
from .windows import smoothstep

__all__ = [
    "LatticeCoefficients",
    "BumpProfile",
    "eta_profile",
    "a_profile",
    "psi_profile",
    "annulus_profile",
    "annulus_hat",
    "gabor_lattice",
    "scaled_bumps",
    "critical_sequence",
    "annulus_function",
    "dilate",
    "max_dilation",
    "window_correlation_norm",
    "gabor_band_bound",
]


# ---------------------------------------------------------------------------
# coefficient sequences

@dataclass(frozen=True, eq=False)
class LatticeCoefficients:
    """Finitely supported ``{c_k}`` on ``Z^n``, stored as sorted arrays.

    ``ks`` has shape ``(M, n)``; zero coefficients are dropped.
    """

    n: int
    ks: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        ks = np.asarray(self.ks, dtype=np.int64).reshape(-1, self.n)
        vals = np.asarray(self.values, dtype=complex).reshape(-1)
        if ks.shape[0] != vals.shape[0]:
            raise DomainError("lattice points and coefficients differ in length")
        if not np.all(np.isfinite(vals)):
            raise DomainError("coefficients must be finite")
        keep = vals != 0
        ks, vals = ks[keep], vals[keep]
        order = np.lexsort(ks.T[::-1]) if ks.size else np.arange(0)
        ks, vals = ks[order], vals[order]
        if ks.shape[0] > 1 and np.any(np.all(ks[1:] == ks[:-1], axis=1)):
            raise DomainError("duplicate lattice points")
        ks.flags.writeable = False
        vals.flags.writeable = False
        object.__setattr__(self, "ks", ks)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_mapping(cls, entries, n=1):
        items = list(entries.items())
        ks = [np.atleast_1d(k) for k, _ in items]
        return cls(n, np.array(ks, dtype=np.int64).reshape(-1, n), [v for _, v in items])

    @classmethod
    def random(cls, rng, radius, n=1, exclude_zero=False):
        """Complex Gaussian entries on ``|k|_inf <= radius``."""
        axis = np.arange(-radius, radius + 1)
        ks = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)
        if exclude_zero:
            ks = ks[np.any(ks != 0, axis=1)]
        vals = rng.standard_normal(len(ks)) + 1j * rng.standard_normal(len(ks))
        return cls(n, ks, vals)

    @property
    def entries(self):
        return {tuple(int(v) for v in k): complex(c) for k, c in zip(self.ks, self.values)}

    @property
    def norms(self):
        """Euclidean lengths ``|k|``."""
        return np.sqrt(np.sum(self.ks.astype(float) ** 2, axis=1))

    @property
    def radius(self):
        return float(self.norms.max()) if len(self.values) else 0.0

    @property
    def max_coordinate(self):
        return int(np.abs(self.ks).max()) if len(self.values) else 0

    def lp_norm(self, p):
        p = ExtendedExponent.of(p)
        a = np.abs(self.values)
        if a.size == 0:
            return 0.0
        if p.is_infinite:
            return float(a.max())
        pv = float(p.value)
        return float(np.sum(a**pv) ** (1.0 / pv))

    def weighted_norm(self, q, s):
        """``||{(1 + |l|)^s c_l}||_{l^q}``."""
        w = (1.0 + self.norms) ** float(s) * np.abs(self.values)
        return LatticeCoefficients(self.n, self.ks, w).lp_norm(q)

    def to_json(self):
        return [
            {"k": [int(v) for v in k], "re": float(c.real), "im": float(c.imag)}
            for k, c in zip(self.ks, self.values)
        ]

    @classmethod
    def from_json(cls, rows, n=None):
        if n is None:
            n = len(rows[0]["k"]) if rows else 1
        ks = [r["k"] for r in rows]
        vals = [complex(r["re"], r["im"]) for r in rows]
        return cls(n, np.array(ks, dtype=np.int64).reshape(-1, n), vals)


# ---------------------------------------------------------------------------
# profiles

def _poly_bump_integral(m):
    """``int_{-1}^{1} (1 - y^2)^m dy`` for real ``m > -1``."""
    return math.sqrt(math.pi) * math.gamma(m + 1) / math.gamma(m + 1.5)


def _fourier_1d(profile, half_width, xi, nodes=200):
    """``int profile(x) cos(x xi) dx`` by Gauss-Legendre on ``[-w, w]`` (even profiles)."""
    y, wts = np.polynomial.legendre.leggauss(nodes)
    x = half_width * y
    vals = profile(x)
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    return half_width * (np.cos(np.outer(xi, x)) @ (wts * vals))


@dataclass(frozen=True)
class BumpProfile:
    """Compactly supported tensor profile with its support box and metadata.

    ``half_width`` bounds the support: ``supp in [-half_width, half_width]^n``.
    ``data`` holds role-specific constants such as the recorded Fourier lower
    bound ``C``.
    """

    role: str
    descriptor: object
    half_width: float
    data: dict = field(default_factory=dict)

    def __call__(self, *x):
        return self.descriptor(*x)

    def profile_1d(self, t):
        return self.descriptor(t)

    def lp_norm(self, p, n=1):
        """Exact ``||profile||_{L^p(R^n)}`` for the polynomial bumps."""
        p = ExtendedExponent.of(p)
        if not isinstance(self.descriptor, Bump):
            raise DomainError(f"no closed form for the {self.role} profile")
        if p.is_infinite:
            return 1.0
        pv = float(p.value)
        one = self.descriptor.radius * _poly_bump_integral(3 * pv)
        return one ** (n / pv)


def eta_profile():
    """``eta(x) = prod (1 - 4 x_i^2)^3`` on ``[-1/2, 1/2]^n``."""
    return BumpProfile("eta", Bump(0.5), 0.5)


def a_profile(delta=0.5):
    """``a(x) = prod (1 - (8 x_i / delta)^2)^3``: support ``[-delta/8, delta/8]^n``,
    peak 1, and ``|a^(xi)| >= C`` on ``|xi| <= 2`` with ``C`` recorded in ``data``."""
    if not 0 < delta < 1:
        raise DomainError("delta must lie in (0, 1)")
    r = delta / 8
    bump = Bump(r)
    t = np.linspace(0.0, 2.0, 401)
    c1 = float(np.min(np.abs(_fourier_1d(bump, r, t))))
    return BumpProfile("a", bump, r, {"delta": delta, "fourier_lower_bound_1d": c1})


@dataclass(frozen=True)
class _PlateauProfile:
    inner: float
    outer: float

    def __call__(self, *x):
        out = 1.0
        for c in x:
            t = (np.abs(np.asarray(c, dtype=float)) - self.inner) / (self.outer - self.inner)
            out = out * (1.0 - smoothstep(t))
        return out


def psi_profile(delta=0.5):
    """``Psi = 1`` on ``[-delta/4, delta/4]^n``, supported in ``[-3 delta/8, 3 delta/8]^n``."""
    prof = _PlateauProfile(delta / 4, 3 * delta / 8)
    t = np.linspace(0.0, 2.0, 401)
    c1 = float(np.min(np.abs(_fourier_1d(prof, 3 * delta / 8, t))))
    return BumpProfile("Psi", prof, 3 * delta / 8, {"delta": delta, "fourier_lower_bound_1d": c1})


ANNULUS_EDGES = (0.51, 2.0**-0.5, 2.0**0.5, 1.96)


def annulus_hat(r):
    """Radial ``g^``: 1 on ``[2^{-1/2}, 2^{1/2}]``, C^2 ramps, support in ``(1/2, 2)``."""
    a, b, c, d = ANNULUS_EDGES
    r = np.asarray(r, dtype=float)
    return smoothstep((r - a) / (b - a)) * (1.0 - smoothstep((r - c) / (d - c)))


def annulus_profile():
    return BumpProfile("g", annulus_hat, ANNULUS_EDGES[-1], {"plateau": ANNULUS_EDGES[1:3]})


# ---------------------------------------------------------------------------
# constructions

def _axis_block(spec, centre, half_width):
    """Node indices within ``half_width`` of ``centre`` along one axis."""
    lo = math.ceil((centre - half_width + spec.L / 2) / spec.h - 1e-9)
    hi = math.floor((centre + half_width + spec.L / 2) / spec.h + 1e-9)
    idx = np.arange(max(lo, 0), min(hi, spec.N - 1) + 1)
    return idx, -spec.L / 2 + idx * spec.h


def _place(spec, out, centre, half_width, evaluate):
    blocks = [_axis_block(spec, centre[a], half_width) for a in range(spec.n)]
    if spec.n == 1:
        (i0, x0), = blocks
        out[i0] += evaluate(x0)
    else:
        (i0, x0), (i1, x1) = blocks
        out[np.ix_(i0, i1)] += evaluate(x0[:, None], x1[None, :])


def gabor_lattice(c, eta, spec):
    """``f(x) = sum_l c_l exp(i l.x) eta(x - l)`` sampled on ``spec``."""
    if c.n != spec.n:
        raise DomainError("coefficient and grid dimensions differ")
    hw = eta.half_width
    if c.max_coordinate + hw + 1 > spec.L / 2:
        raise ResolutionError(
            f"box [-{spec.L / 2:g}, {spec.L / 2:g}) cannot hold translates up to "
            f"|l|_inf = {c.max_coordinate} with margin 1; need L >= {2 * (c.max_coordinate + hw + 1):g}"
        )
    out = np.zeros(spec.shape, dtype=complex)
    for k, ck in zip(c.ks, c.values):
        kf = k.astype(float)

        def term(*x, kf=kf, ck=ck):
            phase = sum(kc * xc for kc, xc in zip(kf, x))
            return ck * np.exp(1j * phase) * eta(*(xc - kc for xc, kc in zip(x, kf)))

        _place(spec, out, kf, hw, term)
    return SampledFunction(spec, out)


def scaled_bumps(c, a, p, spec, samples=8):
    """``f(x) = sum_l c_l |l|^{n/p} a(|l| (x - l))``, each term L^p-normalised."""
    p = ExtendedExponent.of(p)
    if c.n != spec.n:
        raise DomainError("coefficient and grid dimensions differ")
    if len(c.values) and np.any(np.all(c.ks == 0, axis=1)):
        raise DomainError("the coefficient at l = 0 must be absent")
    if c.max_coordinate + 1 > spec.L / 2:
        raise ResolutionError(f"box too small for |l|_inf = {c.max_coordinate}; need L >= {2 * (c.max_coordinate + 1)}")
    R = c.radius
    if R > 0:
        h_needed = a.half_width / R / samples
        if spec.h > h_needed:
            need = 1 << math.ceil(math.log2(spec.L / h_needed))
            raise ResolutionError(
                f"grid spacing {spec.h:.3g} does not resolve bumps of half-width "
                f"{a.half_width / R:.3g}; need N >= {need}",
                required_N=need,
            )
    out = np.zeros(spec.shape, dtype=complex)
    for k, ck, r in zip(c.ks, c.values, c.norms):
        kf = k.astype(float)
        amp = ck * r ** (spec.n * float(p.recip))

        def term(*x, kf=kf, amp=amp, r=r):
            return amp * a(*(r * (xc - kc) for xc, kc in zip(x, kf)))

        _place(spec, out, kf, a.half_width / r, term)
    return SampledFunction(spec, out)


def critical_sequence(p, eps, N, R, n=1):
    """``c_k = |k|^{-n/p} (log |k|)^{-(1+eps)/p}`` for ``N <= |k| <= R``, else 0."""
    p = ExtendedExponent.of(p)
    if p.is_infinite:
        raise DomainError("critical sequence needs finite p")
    if not (eps > 0 and R > N >= 3):
        raise DomainError("need eps > 0 and R > N >= 3")
    axis = np.arange(-R, R + 1)
    ks = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)
    r = np.sqrt(np.sum(ks.astype(float) ** 2, axis=1))
    keep = (r >= N) & (r <= R)
    ks, r = ks[keep], r[keep]
    pr = float(p.recip)
    vals = r ** (-n * pr) * np.log(r) ** (-(1 + eps) * pr)
    return LatticeCoefficients(n, ks, vals)


def annulus_function(spec, lam=1.0):
    """``U_lam g`` for the annulus function, built from its spectrum
    ``lam^{-n} g^(xi / lam)`` sampled on the lattice."""
    coeffs = lam ** (-spec.n) * annulus_hat(spec.frequency_radius() / lam)
    return idft(Spectrum(spec, np.broadcast_to(coeffs, spec.shape)))


def max_dilation(f, tol=1e-8):
    """Largest ``lam`` whose dilate keeps spectral mass beyond half Nyquist below ``tol``."""
    F = dft(f)
    w = (np.abs(F.coeffs) ** 2).ravel()
    total = w.sum()
    if total == 0:
        return math.inf
    r = np.broadcast_to(f.spec.frequency_radius(), f.spec.shape).ravel()
    order = np.argsort(r)[::-1]
    outer = np.cumsum(w[order]) / total
    # radius below which all but tol of the mass lives
    cut = np.searchsorted(outer, tol)
    rho = r[order][min(cut, len(order) - 1)]
    return math.inf if rho == 0 else (f.spec.nyquist / 2) / rho


def dilate(f, lam):
    """``U_lam f(x) = f(lam x)`` on the same grid.

    Integer ``lam`` resamples exactly (nodes map onto nodes; values from outside
    the box are taken as zero).  Other ``lam`` re-evaluate the descriptor the
    function was sampled from.
    """
    if lam < 1:
        raise DomainError(f"dilation factor must be >= 1, got {lam}")
    if lam == 1:
        return SampledFunction(f.spec, f.values, source=f.source)
    lmax = max_dilation(f)
    if lam > lmax:
        raise AliasingError(
            f"dilating by {lam:g} pushes spectral mass past half the Nyquist frequency; "
            f"largest admissible factor is {lmax:.4g}",
            max_lambda=lmax,
        )
    spec = f.spec
    if float(lam).is_integer():
        m = int(lam)
        j = m * np.arange(spec.N) - (m - 1) * spec.N // 2
        valid = (j >= 0) & (j < spec.N)
        jc = np.clip(j, 0, spec.N - 1)
        out = f.values
        for axis in range(spec.n):
            out = np.take(out, jc, axis=axis)
            mask = valid.reshape([-1 if a == axis else 1 for a in range(spec.n)])
            out = np.where(mask, out, 0.0)
        return SampledFunction(spec, out)
    if f.source is None:
        raise DomainError("non-integer dilation needs a function sampled from a descriptor")
    return sample(Dilated(f.source, float(lam)), spec)


def window_correlation_norm(f, k, psi, p):
    """``||(M_k Psi) * f||_{L^p}`` with ``M_k Psi(x) = exp(i k.x) Psi(x)``."""
    spec = f.spec
    k = np.atleast_1d(np.asarray(k, dtype=float))
    x = spec.coords()
    window = np.exp(1j * sum(kc * xc for kc, xc in zip(k, x))) * psi(*x)
    W = dft(SampledFunction(spec, np.broadcast_to(window, spec.shape)))
    conv = idft(Spectrum(spec, W.coeffs * dft(f).coeffs))
    return lp_norm(conv, p)


def gabor_band_bound(c, k, decay, constant=1.0):
    """``C sum_l |c_l| (1 + |k - l|)^{-decay}``."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    d = np.sqrt(np.sum((c.ks - k) ** 2, axis=1))
    return constant * float(np.sum(np.abs(c.values) * (1.0 + d) ** (-float(decay))))
