"""Exact index functions and embedding/boundedness decisions.

Lebesgue exponents are stored through their reciprocal ``1/p`` as a
:class:`fractions.Fraction`, so ``p = inf`` is simply ``recip == 0`` and
every region boundary is decided without rounding.

The index pair ``(u, v) = (1/p, 1/q)`` lives in the closed unit square.
Two families of closed regions cover it::

    starred     I1*: min(u, 1-u) >= v     I2*: min(v, 1/2) >= 1-u
                I3*: min(v, 1/2) >= u
    unstarred   I1 : max(u, 1-u) <= v     I2 : max(v, 1/2) <= 1-u
                I3 : max(v, 1/2) <= u

``nu1``/``mu1`` are piecewise on the starred family, ``nu2``/``mu2`` on the
unstarred one.  On overlaps all matching branches are evaluated and must
agree; disagreement raises :class:`~modlab.errors.InconsistencyError`.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

from .errors import DomainError, InconsistencyError

Number = Union[int, Fraction, float, str]

HALF = Fraction(1, 2)
APPROX_DENOMINATOR = 10**6

_INFINITY_TOKENS = {"inf", "infty", "infinity", "oo", "∞"}
_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def to_fraction(x: Number, approx: bool = False) -> Fraction:
    """Convert ``x`` to an exact rational.

    Integers, fractions and ``"num/den"`` strings convert exactly.  Floats
    and decimal strings are rounded to the nearest rational with
    denominator at most 10**6 and a warning is emitted; decimal strings
    additionally require ``approx=True``.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        m = _RATIONAL_RE.match(x)
        if m:
            den = int(m.group(2)) if m.group(2) else 1
            if den == 0:
                raise DomainError(f"zero denominator in {x!r}")
            return Fraction(int(m.group(1)), den)
        if not approx:
            raise DomainError(
                f"{x!r} is not an exact rational; pass approx=True to round decimals"
            )
        try:
            x = float(x)
        except ValueError as exc:
            raise DomainError(f"cannot parse {x!r} as a number") from exc
    if isinstance(x, float):
        if not math.isfinite(x):
            raise DomainError(f"{x!r} is not finite")
        if x.is_integer():
            return Fraction(int(x))
        rounded = Fraction(x).limit_denominator(APPROX_DENOMINATOR)
        warnings.warn(f"real value {x!r} rounded to the rational {rounded}", stacklevel=2)
        return rounded
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def smoothness(s: Number, approx: bool = False) -> Fraction:
    """Exact smoothness index."""
    return to_fraction(s, approx=approx)


@dataclass(frozen=True)
class ExtendedExponent:
    """Lebesgue exponent ``1 <= p <= inf`` stored as ``recip = 1/p``."""

    recip: Fraction

    def __post_init__(self):
        r = self.recip if isinstance(self.recip, Fraction) else to_fraction(self.recip)
        if not 0 <= r <= 1:
            raise DomainError(f"1/p = {r} outside [0, 1] (need 1 <= p <= inf)")
        object.__setattr__(self, "recip", r)

    @classmethod
    def of(cls, p, approx: bool = False) -> "ExtendedExponent":
        """Build from the exponent itself (``2``, ``"4/3"``, ``"infty"``, ``math.inf``)."""
        if isinstance(p, ExtendedExponent):
            return p
        if isinstance(p, str) and p.strip().lower() in _INFINITY_TOKENS:
            return cls(Fraction(0))
        if isinstance(p, float) and math.isinf(p) and p > 0:
            return cls(Fraction(0))
        value = to_fraction(p, approx=approx)
        if value < 1:
            raise DomainError(f"exponent p = {value} < 1")
        return cls(1 / value)

    @property
    def is_infinite(self) -> bool:
        return self.recip == 0

    @property
    def value(self):
        """``p`` as a Fraction, or ``math.inf``."""
        return math.inf if self.recip == 0 else 1 / self.recip

    def dual(self) -> "ExtendedExponent":
        return ExtendedExponent(1 - self.recip)

    def __float__(self):
        return float(self.value)

    def __str__(self):
        return "infty" if self.recip == 0 else str(1 / self.recip)


def exponent(p, approx: bool = False) -> ExtendedExponent:
    return ExtendedExponent.of(p, approx=approx)


def dual_exponent(p) -> ExtendedExponent:
    return exponent(p).dual()


@dataclass(frozen=True)
class IndexPair:
    """The point ``(1/p, 1/q)`` of the closed unit square."""

    u: Fraction
    v: Fraction

    def __post_init__(self):
        for name in ("u", "v"):
            val = to_fraction(getattr(self, name))
            if not 0 <= val <= 1:
                raise DomainError(f"{name} = {val} outside [0, 1]")
            object.__setattr__(self, name, val)

    @classmethod
    def of(cls, p, q) -> "IndexPair":
        return cls(exponent(p).recip, exponent(q).recip)


@dataclass(frozen=True)
class RegionSet:
    I1: bool
    I2: bool
    I3: bool
    I1s: bool
    I2s: bool
    I3s: bool

    def names(self):
        labels = ("I1", "I2", "I3", "I1*", "I2*", "I3*")
        flags = (self.I1, self.I2, self.I3, self.I1s, self.I2s, self.I3s)
        return [lab for lab, f in zip(labels, flags) if f]


def _pair(p, q=None) -> IndexPair:
    if q is None:
        if isinstance(p, IndexPair):
            return p
        raise TypeError("expected an IndexPair or two exponents")
    return IndexPair.of(p, q)


def _starred_flags(u, v):
    return (
        min(u, 1 - u) >= v,
        min(v, HALF) >= 1 - u,
        min(v, HALF) >= u,
    )


def _unstarred_flags(u, v):
    return (
        max(u, 1 - u) <= v,
        max(v, HALF) <= 1 - u,
        max(v, HALF) <= u,
    )


def classify_regions(pq: IndexPair) -> RegionSet:
    u, v = pq.u, pq.v
    a1, a2, a3 = _unstarred_flags(u, v)
    b1, b2, b3 = _starred_flags(u, v)
    return RegionSet(a1, a2, a3, b1, b2, b3)


def _branch_value(name, flags, values):
    hits = {val for flag, val in zip(flags, values) if flag}
    if not hits:
        # the closed regions cover the square; reaching here is a bug
        raise InconsistencyError(f"{name}: point lies in no region")
    if len(hits) > 1:
        raise InconsistencyError(f"{name}: overlapping branches disagree: {sorted(hits)}")
    return hits.pop()


def nu1(p, q=None) -> Fraction:
    pq = _pair(p, q)
    u, v = pq.u, pq.v
    return _branch_value("nu1", _starred_flags(u, v), (Fraction(0), u + v - 1, -u + v))


def nu2(p, q=None) -> Fraction:
    pq = _pair(p, q)
    u, v = pq.u, pq.v
    return _branch_value("nu2", _unstarred_flags(u, v), (Fraction(0), u + v - 1, -u + v))


def mu1(p, q=None) -> Fraction:
    pq = _pair(p, q)
    u, v = pq.u, pq.v
    return _branch_value("mu1", _starred_flags(u, v), (-u, v - 1, -2 * u + v))


def mu2(p, q=None) -> Fraction:
    pq = _pair(p, q)
    u, v = pq.u, pq.v
    return _branch_value("mu2", _unstarred_flags(u, v), (-u, v - 1, -2 * u + v))


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Verdict:
    """Outcome of an if-and-only-if statement.

    ``matched_condition`` names the clause whose (p, q) range applies; when
    ``holds`` is false it is the clause whose smoothness inequality failed.
    """

    holds: bool
    matched_condition: str
    threshold: Fraction
    strict: bool = False
    kind: str = "embedding"

    @property
    def label(self) -> str:
        if self.kind == "embedding":
            return "Embeds" if self.holds else "DoesNotEmbed"
        return "Bounded" if self.holds else "Unbounded"

    def __bool__(self):
        return self.holds


class Outcome(str, Enum):
    BOUNDED = "Bounded"
    UNBOUNDED = "Unbounded"
    UNKNOWN_GAP = "UnknownGap"


@dataclass(frozen=True)
class TriVerdict:
    outcome: Outcome
    threshold: Fraction
    matched_condition: str
    strict: bool = False

    @property
    def label(self) -> str:
        return self.outcome.value


def _check_n(n):
    if int(n) != n or n < 1:
        raise DomainError(f"dimension n = {n} must be a positive integer")
    return int(n)


def _compare(s, threshold, strict, upper):
    """``s`` against ``threshold``: lower bound (s >= t) or upper (s <= t)."""
    if upper:
        return s < threshold if strict else s <= threshold
    return s > threshold if strict else s >= threshold


def _clause_L_in_M(u, v):
    """Clause number and strictness for L^p_s -> M^{p,q} at (1/p, 1/q)."""
    if u == 1:
        return (3, False) if v == 0 else (4, True)
    if v <= u:  # q >= p > 1
        return 1, False
    return 2, True  # p > q


def _clause_M_in_L(u, v):
    """Clause number and strictness for M^{p,q} -> L^p_s at (1/p, 1/q)."""
    if u == 0:
        return (3, False) if v == 1 else (4, True)
    if v >= u:  # q <= p < inf
        return 1, False
    return 2, True  # p < q


DIRECTIONS = ("L-to-M", "M-to-L", "B-to-M", "M-to-B", "mult-M-to-L", "mult-L-to-M")


def embeds_besov_modulation(p, q, s, n=1, direction="B-to-M") -> Verdict:
    """``B^{p,q}_s -> M^{p,q}`` (direction ``"B-to-M"``) or ``M^{p,q} -> B^{p,q}_s``."""
    n = _check_n(n)
    s = smoothness(s)
    if direction == "B-to-M":
        t = n * nu1(p, q)
        return Verdict(s >= t, "Thm1.1(1)", t)
    if direction == "M-to-B":
        t = n * nu2(p, q)
        return Verdict(s <= t, "Thm1.1(2)", t)
    raise DomainError(f"unknown direction {direction!r}")


def embeds_L_in_M(p, q, s, n=1) -> Verdict:
    """Decide ``L^p_s -> M^{p,q}``; exactly one clause applies to each (p, q)."""
    n = _check_n(n)
    s = smoothness(s)
    pq = IndexPair.of(p, q)
    t = n * nu1(pq)
    clause, strict = _clause_L_in_M(pq.u, pq.v)
    return Verdict(_compare(s, t, strict, upper=False), f"Thm1.3({clause})", t, strict)


def embeds_M_in_L(p, q, s, n=1) -> Verdict:
    """Decide ``M^{p,q} -> L^p_s``."""
    n = _check_n(n)
    s = smoothness(s)
    pq = IndexPair.of(p, q)
    t = n * nu2(pq)
    clause, strict = _clause_M_in_L(pq.u, pq.v)
    return Verdict(_compare(s, t, strict, upper=True), f"Thm1.4({clause})", t, strict)


def embeds_M_shifted(p, q, s, n=1, direction="M_s-to-L") -> Verdict:
    """Embeddings with the weight on the modulation side, via lifting.

    ``"M_s-to-L"`` decides ``M^{p,q}_s -> L^p`` (same as ``M^{p,q} -> L^p_{-s}``);
    ``"L-to-M_s"`` decides ``L^p -> M^{p,q}_s`` (same as ``L^p_{-s} -> M^{p,q}``).
    The returned threshold is expressed in terms of ``s``.
    """
    s = smoothness(s)
    if direction == "M_s-to-L":
        inner = embeds_M_in_L(p, q, -s, n)
        # -s <= t  <=>  s >= -t
    elif direction == "L-to-M_s":
        inner = embeds_L_in_M(p, q, -s, n)
        # -s >= t  <=>  s <= -t
    else:
        raise DomainError(f"unknown direction {direction!r}")
    return Verdict(inner.holds, inner.matched_condition, -inner.threshold, inner.strict)


def coarse_embedding_conditions(p, q, s, n=1, direction="L-to-M"):
    """Strict sufficient and weak necessary conditions away from criticality.

    Returns ``(sufficient, necessary)``.  For ``"L-to-M"`` these are
    ``s > n nu1`` and ``s >= n nu1``; for ``"M-to-L"`` ``s < n nu2`` and
    ``s <= n nu2``.
    """
    n = _check_n(n)
    s = smoothness(s)
    if direction == "L-to-M":
        t = n * nu1(p, q)
        return s > t, s >= t
    if direction == "M-to-L":
        t = n * nu2(p, q)
        return s < t, s <= t
    raise DomainError(f"unknown direction {direction!r}")


def miyachi_Lp_bound(p, s, n=1, alpha=2) -> Verdict:
    """Boundedness of ``exp(i|D|^alpha)`` from ``L^p_s`` to ``L^p``.

    Holds iff ``s >= alpha * n * |1/p - 1/2|``; defined for ``1 < p < inf``
    and ``alpha > 1``.
    """
    n = _check_n(n)
    s = smoothness(s)
    alpha = to_fraction(alpha)
    pe = exponent(p)
    if not 0 < pe.recip < 1:
        raise DomainError(f"p = {pe} must satisfy 1 < p < inf")
    if alpha <= 1:
        raise DomainError(f"alpha = {alpha} must exceed 1")
    t = alpha * n * abs(pe.recip - HALF)
    return Verdict(s >= t, "ThmA", t, kind="boundedness")


def multiplier_verdict(p, q, s, n=1, alpha=2, direction="mult-M-to-L") -> TriVerdict:
    """Boundedness of ``exp(i|D|^alpha)`` between modulation and Sobolev spaces.

    ``"mult-M-to-L"``: ``M^{p,q}_s -> L^p``; ``"mult-L-to-M"``: ``L^p_s -> M^{p,q}``.
    For ``alpha <= 2`` the answer is exact.  For ``alpha > 2`` the known
    sufficient and necessary conditions share one threshold but the
    sufficient one is strict on some clauses, so ``s`` equal to the
    threshold there yields ``UnknownGap``.
    """
    n = _check_n(n)
    s = smoothness(s)
    alpha = to_fraction(alpha)
    if alpha < 0:
        raise DomainError(f"alpha = {alpha} must be nonnegative")
    pq = IndexPair.of(p, q)
    loss = (alpha - 2) * n * abs(pq.u - HALF) if alpha > 2 else Fraction(0)
    if direction in ("mult-M-to-L", "M-to-L"):
        t = -n * nu2(pq) + loss
        clause, strict = _clause_M_in_L(pq.u, pq.v)
    elif direction in ("mult-L-to-M", "L-to-M"):
        t = n * nu1(pq) + loss
        clause, strict = _clause_L_in_M(pq.u, pq.v)
        clause += 4
    else:
        raise DomainError(f"unknown direction {direction!r}")
    sufficient = _compare(s, t, strict, upper=False)
    if alpha <= 2:
        tag = f"Cor5.2({clause})"
        outcome = Outcome.BOUNDED if sufficient else Outcome.UNBOUNDED
        return TriVerdict(outcome, t, tag, strict)
    if sufficient:
        return TriVerdict(Outcome.BOUNDED, t, f"Cor5.4({clause})", strict)
    if s < t:
        return TriVerdict(Outcome.UNBOUNDED, t, "Thm5.5", strict)
    return TriVerdict(Outcome.UNKNOWN_GAP, t, f"Cor5.4({clause})|Thm5.5", strict)


def fraction_str(x) -> str:
    """``"num/den"`` (or an integer) for exact values; ``"infty"`` for inf."""
    if isinstance(x, ExtendedExponent):
        return str(x)
    if isinstance(x, float) and math.isinf(x):
        return "infty"
    return str(Fraction(x))
