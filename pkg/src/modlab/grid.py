"""Sampled functions on periodic uniform grids and their Fourier transforms.

The transform follows the integral convention ``f^(xi) = int f(x) e^{-i x.xi} dx``
with inverse ``f(x) = (2 pi)^{-n} int f^(xi) e^{i x.xi} dxi``.  Nodes are
``x_j = -L/2 + j L/N`` and frequencies ``xi_m = m * 2 pi / L`` with
``m in {-N/2, ..., N/2 - 1}`` stored in increasing order along every axis.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import fft as _fft
from .errors import AliasingError, DomainError, ModlabError

__all__ = [
    "GridSpec",
    "SampledFunction",
    "Spectrum",
    "Zero",
    "Gaussian",
    "Hat",
    "Bump",
    "ModulatedTranslates",
    "Dilated",
    "Tabulated",
    "sample",
    "dft",
    "idft",
    "apply_symbol",
    "band_project",
    "dyadic_project",
    "japanese",
    "aliasing_fraction",
    "check_aliasing",
    "write_csv",
    "read_csv",
]


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on ``[-L/2, L/2)^n`` with ``N`` samples per axis."""

    n: int
    N: int
    L: float

    def __post_init__(self):
        if self.n not in (1, 2):
            raise DomainError(f"grid dimension must be 1 or 2, got {self.n}")
        if self.N < 8 or not _fft.is_power_of_two(self.N):
            raise DomainError(f"N must be a power of two >= 8, got {self.N}")
        if not (self.L > 0 and math.isfinite(self.L)):
            raise DomainError(f"box length must be positive, got {self.L}")
        object.__setattr__(self, "L", float(self.L))

    @classmethod
    def band_aligned(cls, n, N, P):
        """Grid with ``L = 2 pi P`` so that integer frequencies are lattice points."""
        return cls(n, N, 2.0 * math.pi * P)

    @property
    def h(self):
        return self.L / self.N

    @property
    def dxi(self):
        return 2.0 * math.pi / self.L

    @property
    def nyquist(self):
        return math.pi * self.N / self.L

    @property
    def shape(self):
        return (self.N,) * self.n

    @property
    def cell(self):
        """Quadrature weight ``h^n``."""
        return self.h**self.n

    @property
    def frequency_cell(self):
        return self.dxi**self.n

    def nodes(self):
        return -self.L / 2 + self.h * np.arange(self.N)

    def frequencies(self):
        return self.dxi * np.arange(-self.N // 2, self.N // 2)

    def coords(self):
        """Open-grid node coordinates, one broadcastable array per axis."""
        return _open_grid(self.nodes(), self.n)

    def frequency_coords(self):
        return _open_grid(self.frequencies(), self.n)

    def frequency_radius(self):
        xi = self.frequency_coords()
        return np.sqrt(sum(c * c for c in xi))

    def to_dict(self):
        return {"n": self.n, "N": self.N, "L": self.L}


def _open_grid(axis, n):
    if n == 1:
        return (axis,)
    return (axis[:, None], axis[None, :])


def _frozen_array(values, spec, what):
    arr = np.array(values, dtype=np.complex128)
    if arr.size != spec.N**spec.n:
        raise DomainError(f"{what} has {arr.size} entries, grid needs {spec.N ** spec.n}")
    arr = arr.reshape(spec.shape)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{what} contains non-finite entries")
    arr.flags.writeable = False
    return arr


class _GridArray:
    """Shared linear-space arithmetic for samples and spectra."""

    def _new(self, values):
        return type(self)(self.spec, values)

    def _check(self, other):
        if not isinstance(other, type(self)) or other.spec != self.spec:
            raise DomainError("operands live on different grids")

    def __add__(self, other):
        self._check(other)
        return self._new(self.values_ + other.values_)

    def __sub__(self, other):
        self._check(other)
        return self._new(self.values_ - other.values_)

    def __mul__(self, scalar):
        return self._new(self.values_ * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.values_)


@dataclass(frozen=True, eq=False)
class SampledFunction(_GridArray):
    """Samples at the grid nodes; ``source`` keeps the descriptor when known."""

    spec: GridSpec
    values: np.ndarray
    source: object = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values, self.spec, "sample array"))

    @property
    def values_(self):
        return self.values


@dataclass(frozen=True, eq=False)
class Spectrum(_GridArray):
    spec: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen_array(self.coeffs, self.spec, "coefficient array"))

    @property
    def values_(self):
        return self.coeffs

    def at(self, xi):
        """Coefficient at the lattice frequency nearest to ``xi``."""
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        idx = tuple(int(round(v / self.spec.dxi)) + self.spec.N // 2 for v in xi)
        return complex(self.coeffs[idx])


# ---------------------------------------------------------------------------
# descriptors

@dataclass(frozen=True)
class Zero:
    def __call__(self, *x):
        return np.zeros(np.broadcast_shapes(*(np.shape(c) for c in x)), dtype=complex)


@dataclass(frozen=True)
class Gaussian:
    """``amplitude * exp(-|x|^2 / (2 sigma^2))``."""

    sigma: float = 1.0
    amplitude: complex = 1.0

    def __call__(self, *x):
        r2 = sum(np.asarray(c, dtype=float) ** 2 for c in x)
        return self.amplitude * np.exp(-r2 / (2.0 * self.sigma**2))


@dataclass(frozen=True)
class Hat:
    """Tensor hat ``prod max(0, 1 - |x_i| / width)``."""

    width: float = 1.0

    def __call__(self, *x):
        out = 1.0
        for c in x:
            out = out * np.maximum(0.0, 1.0 - np.abs(c) / self.width)
        return out


@dataclass(frozen=True)
class Bump:
    """Tensor C^2 bump ``prod (1 - (x_i / radius)^2)^3`` on ``|x_i| < radius``."""

    radius: float = 0.5

    def __call__(self, *x):
        out = 1.0
        for c in x:
            t = np.minimum((np.asarray(c, dtype=float) / self.radius) ** 2, 1.0)
            out = out * (1.0 - t) ** 3
        return out


@dataclass(frozen=True)
class ModulatedTranslates:
    """``sum_j coef_j exp(i freq_j . x) profile(scale_j (x - shift_j))``."""

    profile: object
    terms: tuple = ()  # (coef, freq, shift, scale)

    def __call__(self, *x):
        out = np.zeros(np.broadcast_shapes(*(np.shape(c) for c in x)), dtype=complex)
        for coef, freq, shift, scale in self.terms:
            freq = np.atleast_1d(freq)
            shift = np.atleast_1d(shift)
            phase = sum(fk * c for fk, c in zip(freq, x))
            moved = [scale * (c - sk) for c, sk in zip(x, shift)]
            out = out + coef * np.exp(1j * phase) * self.profile(*moved)
        return out


@dataclass(frozen=True)
class Dilated:
    """``base(lam * x)``."""

    base: object
    lam: float

    def __call__(self, *x):
        return self.base(*(self.lam * np.asarray(c, dtype=float) for c in x))


@dataclass(frozen=True, eq=False)
class Tabulated:
    values: np.ndarray = field(default_factory=lambda: np.zeros(0))


_DESCRIPTORS = (Zero, Gaussian, Hat, Bump, ModulatedTranslates, Dilated, Tabulated)


def sample(descriptor, spec):
    """Evaluate a descriptor at the grid nodes."""
    if not isinstance(descriptor, _DESCRIPTORS):
        raise DomainError(f"unsupported descriptor {type(descriptor).__name__}")
    if isinstance(descriptor, Tabulated):
        values = np.asarray(descriptor.values, dtype=complex)
    else:
        with np.errstate(all="ignore"):
            values = np.asarray(descriptor(*spec.coords()), dtype=complex)
        values = np.broadcast_to(values, spec.shape)
    if not np.all(np.isfinite(values)):
        raise DomainError(f"{type(descriptor).__name__} is not finite on the grid")
    source = None if isinstance(descriptor, Tabulated) else descriptor
    return SampledFunction(spec, values, source=source)


# ---------------------------------------------------------------------------
# transforms

def _sign(spec):
    # (-1)^m for centred m; N/2 is even so this equals (-1)^index
    s = 1.0 - 2.0 * (np.arange(spec.N) % 2)
    if spec.n == 1:
        return s
    return s[:, None] * s[None, :]


def dft(f):
    """Riemann-sum Fourier transform ``h^n sum_x f(x) exp(-i x . xi_m)``."""
    spec = f.spec
    axes = tuple(range(spec.n))
    X = _fft.fftn(f.values, axes)
    X = np.fft.fftshift(X, axes=axes)
    return Spectrum(spec, X * _sign(spec) * spec.cell)


def idft(F):
    """Inverse of :func:`dft`, carrying the ``(2 pi)^{-n}`` factor."""
    spec = F.spec
    axes = tuple(range(spec.n))
    G = np.fft.ifftshift(F.coeffs * _sign(spec), axes=axes)
    return SampledFunction(spec, _fft.ifftn(G, axes) / spec.cell)


def japanese(xi):
    """``<xi> = (1 + |xi|^2)^{1/2}`` for an open grid of coordinates."""
    return np.sqrt(1.0 + sum(np.asarray(c, dtype=float) ** 2 for c in xi))


def apply_symbol(F, symbol):
    """Multiply coefficients by ``symbol(*xi)`` evaluated on the lattice."""
    xi = F.spec.frequency_coords()
    with np.errstate(all="ignore"):
        m = np.broadcast_to(np.asarray(symbol(*xi), dtype=complex), F.spec.shape)
    bad = ~np.isfinite(m)
    if bad.any():
        idx = np.argwhere(bad)[0]
        where = tuple(float(F.spec.frequencies()[i]) for i in idx)
        raise DomainError(f"symbol is not finite at xi = {where if F.spec.n > 1 else where[0]}")
    return Spectrum(F.spec, F.coeffs * m)


def band_project(F, k, window):
    """``phi(xi - k) F``; the result is supported in ``k + [-1, 1]^n``."""
    k = np.atleast_1d(k)
    if k.size != F.spec.n:
        raise DomainError(f"band index {tuple(k)} does not match dimension {F.spec.n}")
    xi = F.spec.frequency_coords()
    return Spectrum(F.spec, F.coeffs * window(*(c - kc for c, kc in zip(xi, k))))


def dyadic_project(F, j, dw):
    """``psi_j(xi) F`` for the dyadic piece ``j >= 0``."""
    if j < 0 or int(j) != j:
        raise DomainError(f"dyadic index must be a nonnegative integer, got {j}")
    lo, _ = dw.support(j)
    reach = F.spec.nyquist * math.sqrt(F.spec.n)
    if lo >= reach:
        raise DomainError(
            f"dyadic band {j} starts at |xi| = {lo:g}, beyond the grid's reach {reach:g}; "
            "increase N or decrease L"
        )
    return Spectrum(F.spec, F.coeffs * dw.piece(int(j), F.spec.frequency_radius()))


def aliasing_fraction(F):
    """Share of spectral L^2 mass outside ``|xi| <= nyquist / 2``."""
    w = np.abs(F.coeffs) ** 2
    total = w.sum()
    if total == 0:
        return 0.0
    outside = F.spec.frequency_radius() > F.spec.nyquist / 2
    return float(w[outside].sum() / total)


def check_aliasing(F, tol=1e-8):
    frac = aliasing_fraction(F)
    if frac >= tol:
        raise AliasingError(
            f"{frac:.3e} of the spectral mass lies beyond half the Nyquist frequency "
            f"{F.spec.nyquist / 2:g} (tolerance {tol:g})"
        )
    return frac


# ---------------------------------------------------------------------------
# CSV interchange

def write_csv(f, path):
    """Write samples as ``# gridspec`` line, header row, then ``i0[,i1],re,im`` rows."""
    spec = f.spec
    idx_names = [f"i{a}" for a in range(spec.n)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# gridspec n={spec.n} N={spec.N} L={spec.L!r}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(idx_names + ["re", "im"])
        for idx in np.ndindex(*spec.shape):
            v = f.values[idx]
            w.writerow(list(idx) + [repr(float(v.real)), repr(float(v.imag))])


def _parse_header(line):
    if not line.startswith("# gridspec"):
        raise ModlabError("missing '# gridspec n=.. N=.. L=..' header line")
    fields = dict(tok.split("=", 1) for tok in line[len("# gridspec"):].split())
    try:
        return GridSpec(int(fields["n"]), int(fields["N"]), float(fields["L"]))
    except (KeyError, ValueError) as exc:
        raise ModlabError(f"malformed gridspec header: {line.strip()}") from exc


def read_csv(path):
    """Inverse of :func:`write_csv`; raises :class:`ModlabError` on mismatch."""
    with open(path, newline="", encoding="utf-8") as fh:
        spec = _parse_header(fh.readline())
        rows = list(csv.reader(fh))
    if not rows:
        raise ModlabError("missing column header row")
    expected = [f"i{a}" for a in range(spec.n)] + ["re", "im"]
    if [c.strip() for c in rows[0]] != expected:
        raise ModlabError(f"column header {rows[0]} does not match {expected}")
    body = rows[1:]
    if len(body) != spec.N**spec.n:
        raise ModlabError(f"{len(body)} data rows, grid needs {spec.N ** spec.n}")
    values = np.zeros(spec.shape, dtype=complex)
    seen = np.zeros(spec.shape, dtype=bool)
    try:
        for row in body:
            idx = tuple(int(v) for v in row[: spec.n])
            if any(not 0 <= i < spec.N for i in idx):
                raise ModlabError(f"index {idx} outside the grid")
            values[idx] = float(row[spec.n]) + 1j * float(row[spec.n + 1])
            seen[idx] = True
    except (ValueError, IndexError) as exc:
        raise ModlabError(f"malformed data row: {exc}") from exc
    if not seen.all():
        raise ModlabError("some grid nodes are missing from the file")
    try:
        return SampledFunction(spec, values)
    except DomainError as exc:
        raise ModlabError(str(exc)) from exc
