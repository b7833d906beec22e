"""Lebesgue, Bessel-potential, modulation and Besov norms of sampled functions.

Band norms are computed at full grid resolution.  A decomposition object keeps
per-band L^p norms so several ``(p, q, s)`` triples can share one set of
inverse transforms.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import fft as _fft
from .errors import DomainError, TruncationError
from .grid import (
    SampledFunction,
    Spectrum,
    _sign,
    apply_symbol,
    check_aliasing,
    dft,
    idft,
    japanese,
)
from .indices import ExtendedExponent, fraction_str
from .windows import DYADIC, HAT, SMOOTHED_HAT, DyadicWindow, Window

__all__ = [
    "Window",
    "DyadicWindow",
    "HAT",
    "SMOOTHED_HAT",
    "DYADIC",
    "NormReport",
    "lp_norm",
    "sobolev_norm",
    "modulation_norm",
    "besov_norm",
    "ModulationDecomposition",
    "BesovDecomposition",
    "TAIL_TOLERANCE",
]

TAIL_TOLERANCE = 1e-6


def _exp(p):
    return ExtendedExponent.of(p)


def _smooth(s):
    return s if isinstance(s, float) else Fraction(s)


def _lp_from_abs(a, cell, p):
    """Riemann-sum L^p norm of ``|g|`` given as a nonnegative array."""
    if p.is_infinite:
        return float(a.max()) if a.size else 0.0
    peak = float(a.max()) if a.size else 0.0
    if peak == 0.0:
        return 0.0
    pv = float(p.value)
    b = a / peak
    if pv == 1.0:
        total = b.sum()
    elif pv == 2.0:
        total = np.vdot(b.ravel(), b.ravel())
    else:
        total = np.power(b, pv).sum()
    return peak * float(total * cell) ** (1.0 / pv)


def lp_norm(f, p):
    """``(int |f|^p dx)^{1/p}`` as a Riemann sum; grid maximum for ``p = inf``."""
    return _lp_from_abs(np.abs(f.values), f.spec.cell, _exp(p))


def _aggregate(weighted, q):
    """ℓ^q norm of a nonnegative vector (``max`` for ``q = inf``)."""
    x = np.asarray(weighted, dtype=float)
    if x.size == 0:
        return 0.0
    peak = float(x.max())
    if peak == 0.0:
        return 0.0
    if q.is_infinite:
        return peak
    qv = float(q.value)
    return peak * float(np.power(x / peak, qv).sum()) ** (1.0 / qv)


def sobolev_norm(f, p, s):
    """``||(<xi>^s f^)^vee||_{L^p}``; raises :class:`AliasingError` on a bad grid."""
    F = dft(f)
    check_aliasing(F)
    s = float(s)
    if s == 0.0:
        return lp_norm(f, p)
    G = apply_symbol(F, lambda *xi: japanese(xi) ** s)
    return lp_norm(idft(G), p)


@dataclass(frozen=True, eq=False)
class NormReport:
    """Value of a band-decomposed norm plus the per-band data behind it.

    ``band_contributions[key]`` is the unweighted ``||band_key f||_{L^p}``;
    ``value`` is the ℓ^q aggregation of ``weight(key) * contribution``.
    """

    space: str
    n: int
    p: ExtendedExponent
    q: ExtendedExponent
    s: object
    value: float
    band_contributions: dict = field(default_factory=dict)
    truncation_radius: int = 0
    tail_estimate: float = 0.0

    def weight(self, key):
        s = float(self.s)
        if self.space == "besov":
            return 2.0 ** (key * s)
        return float(np.sqrt(1.0 + sum(k * k for k in key))) ** s

    def aggregate(self):
        """Recompute ``value`` from ``band_contributions``."""
        keys = sorted(self.band_contributions)
        return _aggregate([self.weight(k) * self.band_contributions[k] for k in keys], self.q)

    def to_dict(self):
        bands = []
        for key in sorted(self.band_contributions):
            k = list(key) if isinstance(key, tuple) else key
            bands.append({"k": k, "contribution": self.band_contributions[key]})
        s = fraction_str(self.s) if isinstance(self.s, (int, Fraction)) else repr(float(self.s))
        return {
            "space": self.space,
            "p": str(self.p),
            "q": str(self.q),
            "s": s,
            "value": self.value,
            "bands": bands,
            "tail_estimate": self.tail_estimate,
            "truncation_radius": self.truncation_radius,
        }


class _Decomposition:
    """Common band bookkeeping; subclasses define keys, bounds and band spectra."""

    space = ""

    def __init__(self, f, ps=()):
        if isinstance(f, Spectrum):
            self.F = f
        elif isinstance(f, SampledFunction):
            self.F = dft(f)
        else:
            raise DomainError("expected a SampledFunction or Spectrum")
        check_aliasing(self.F)
        self.spec = self.F.spec
        self._ps = {_exp(p).recip: _exp(p) for p in ps}
        self._norms = {}
        self._bounds = {k: b for k, b in self._cheap_bounds().items() if b > 0.0}
        self._keys = sorted(self._bounds, key=lambda k: (self.radius_of(k), k))

    # subclass hooks -------------------------------------------------------
    def _cheap_bounds(self):
        raise NotImplementedError

    def _band_coeffs(self, key):
        raise NotImplementedError

    def radius_of(self, key):
        raise NotImplementedError

    def _band_abs(self, key):
        """``|band_key f|`` at the grid nodes."""
        axes = tuple(range(self.spec.n))
        G = np.fft.ifftshift(self._band_coeffs(key) * _sign(self.spec), axes=axes)
        return np.abs(_fft.ifftn(G, axes)) / self.spec.cell

    def weight(self, key, s):
        raise NotImplementedError

    # ---------------------------------------------------------------------
    @property
    def keys(self):
        return list(self._keys)

    def band_function(self, key):
        return idft(Spectrum(self.spec, self._band_coeffs(key)))

    def band_norm(self, key, p):
        p = _exp(p)
        cached = self._norms.get(key)
        if cached is None or p.recip not in cached:
            a = self._band_abs(key)
            cached = self._norms.setdefault(key, {})
            wanted = dict(self._ps)
            wanted[p.recip] = p
            for r, pe in wanted.items():
                if r not in cached:
                    cached[r] = _lp_from_abs(a, self.spec.cell, pe)
        return cached[p.recip]

    def _bound_factor(self, p):
        # ||g||_p <= L^{n/p} ||g||_inf <= L^{n/p} (2 pi)^{-n} dxi^n sum |G|
        spec = self.spec
        return spec.L ** (spec.n * float(p.recip)) * spec.frequency_cell / (2 * math.pi) ** spec.n

    def _tails(self, p, q, s):
        """``T[i]``: ℓ^q bound of weighted cheap bounds beyond the i-th radius."""
        fac = self._bound_factor(p)
        radii = sorted({self.radius_of(k) for k in self._keys})
        W = {}
        for k in self._keys:
            W.setdefault(self.radius_of(k), []).append(self.weight(k, s) * fac * self._bounds[k])
        if q.is_infinite:
            per = [max(W[r]) for r in radii]
            suffix = np.maximum.accumulate(per[::-1])[::-1]
            tails = list(suffix[1:]) + [0.0]
        else:
            qv = float(q.value)
            per = [math.fsum(w**qv for w in W[r]) for r in radii]
            suffix = np.cumsum(per[::-1])[::-1]
            tails = [float(t) ** (1.0 / qv) for t in list(suffix[1:]) + [0.0]]
        total = _aggregate([w for r in radii for w in W[r]], q)
        return radii, tails, total

    def report(self, p, q, s=0, radius=None, tol=TAIL_TOLERANCE):
        """:class:`NormReport` for exponents ``(p, q)`` and smoothness ``s``."""
        p, q, s = _exp(p), _exp(q), _smooth(s)
        sf = float(s)
        if not self._keys:
            return NormReport(self.space, self.spec.n, p, q, s, 0.0, {}, 0, 0.0)
        radii, tails, total = self._tails(p, q, sf)

        def evaluate(R):
            contrib = {k: self.band_norm(k, p) for k in self._keys if self.radius_of(k) <= R}
            contrib = {k: v for k, v in contrib.items() if v > 0.0}
            keys = sorted(contrib)
            value = _aggregate([self.weight(k, sf) * contrib[k] for k in keys], q)
            return contrib, value

        def smallest_radius(target):
            for R, T in zip(radii, tails):
                if T < target:
                    return R, T
            return radii[-1], 0.0

        def auto():
            R, T = smallest_radius(0.5 * tol * total)
            contrib, value = evaluate(R)
            if not (T < tol * value or T == 0.0):
                R, T = smallest_radius(0.5 * tol * value)
                contrib, value = evaluate(R)
            return R, T, contrib, value

        if radius is None:
            R, T, contrib, value = auto()
        else:
            R = int(radius)
            inside = [i for i, r in enumerate(radii) if r <= R]
            T = tails[inside[-1]] if inside else total
            contrib, value = evaluate(R)
            if not (T < tol * value or T == 0.0):
                suggested = auto()[0]
                raise TruncationError(
                    f"truncation radius {R} leaves a tail bound {T:.3e} above "
                    f"{tol:g} x value {value:.3e}; use radius >= {suggested}",
                    suggested,
                )
        return NormReport(self.space, self.spec.n, p, q, s, value, contrib, int(R), float(T))


class ModulationDecomposition(_Decomposition):
    """Frequency-uniform decomposition ``phi(D - k) f`` over integer ``k``."""

    space = "modulation"

    def __init__(self, f, window=HAT, ps=()):
        self.window = window
        super().__init__(f, ps)

    def _axis_bands(self):
        spec = self.spec
        freqs = spec.frequencies()
        kmin = math.floor(freqs[0]) - 1
        kmax = math.ceil(freqs[-1]) + 1
        out = {}
        half = spec.N // 2
        for k in range(kmin, kmax + 1):
            lo = max(math.ceil((k - 1) / spec.dxi - 1e-9), -half)
            hi = min(math.floor((k + 1) / spec.dxi + 1e-9), half - 1)
            if lo > hi:
                continue
            w = self.window.profile(freqs[lo + half : hi + half + 1] - k)
            nz = np.flatnonzero(w > 0)
            if nz.size:
                lo, hi = lo + nz[0], lo + nz[-1]
                out[k] = (slice(lo + half, hi + half + 1), w[nz[0] : nz[-1] + 1])
        self._axis = out
        return out

    def _cheap_bounds(self):
        bands = self._axis_bands()
        A = np.abs(self.F.coeffs)
        if self.spec.n == 1:
            return {(k,): float(w @ A[sl]) for k, (sl, w) in bands.items()}
        rows = {k: w @ A[sl, :] for k, (sl, w) in bands.items()}
        out = {}
        for k1, row in rows.items():
            for k2, (sl, w) in bands.items():
                out[(k1, k2)] = float(w @ row[sl])
        return out

    def _band_coeffs(self, key):
        G = np.zeros(self.spec.shape, dtype=complex)
        if self.spec.n == 1:
            sl, w = self._axis[key[0]]
            G[sl] = w * self.F.coeffs[sl]
        else:
            (s1, w1), (s2, w2) = self._axis[key[0]], self._axis[key[1]]
            G[s1, s2] = np.outer(w1, w2) * self.F.coeffs[s1, s2]
        return G

    def _band_abs(self, key):
        # pruned transforms over the nonzero block; the dropped start phases
        # and the centring sign are unimodular per axis and do not change |g|
        spec = self.spec
        half = spec.N // 2
        if spec.n == 1:
            sl, w = self._axis[key[0]]
            block = (w * self.F.coeffs[sl] * _sign(spec)[sl])[:, None]
            g = _fft.block_ifft(block, sl.start - half, spec.N, phase=False)[:, 0]
        else:
            (s1, w1), (s2, w2) = self._axis[key[0]], self._axis[key[1]]
            block = np.outer(w1, w2) * self.F.coeffs[s1, s2] * _sign(spec)[s1, s2]
            rows = _fft.block_ifft(block.T, s2.start - half, spec.N, phase=False)
            g = _fft.block_ifft(rows.T, s1.start - half, spec.N, phase=False)
        return np.abs(g) / spec.cell

    def radius_of(self, key):
        return max(abs(k) for k in key)

    def weight(self, key, s):
        return float(np.sqrt(1.0 + sum(k * k for k in key))) ** s


class BesovDecomposition(_Decomposition):
    """Dyadic decomposition ``psi_j(D) f``, ``j >= 0``."""

    space = "besov"

    def __init__(self, f, dw=DYADIC, ps=()):
        self.dw = dw
        super().__init__(f, ps)

    def _cheap_bounds(self):
        r = self.spec.frequency_radius()
        self._r = np.broadcast_to(r, self.spec.shape)
        rmax = float(self._r.max())
        A = np.abs(self.F.coeffs)
        out = {}
        j = 0
        while self.dw.support(j)[0] < rmax:
            out[j] = float(np.sum(self.dw.piece(j, self._r) * A))
            j += 1
        return out

    def _band_coeffs(self, key):
        return self.dw.piece(key, self._r) * self.F.coeffs

    def radius_of(self, key):
        return key

    def weight(self, key, s):
        return 2.0 ** (key * s)


def modulation_norm(f, p, q, s=0, window=HAT, radius=None, tol=TAIL_TOLERANCE):
    """``(sum_k <k>^{sq} ||phi(D - k) f||_p^q)^{1/q}`` as a :class:`NormReport`."""
    return ModulationDecomposition(f, window, ps=(p,)).report(p, q, s, radius=radius, tol=tol)


def besov_norm(f, p, q, s=0, dw=DYADIC, radius=None, tol=TAIL_TOLERANCE):
    """``(sum_j 2^{jsq} ||psi_j(D) f||_p^q)^{1/q}`` as a :class:`NormReport`."""
    return BesovDecomposition(f, dw, ps=(p,)).report(p, q, s, radius=radius, tol=tol)
