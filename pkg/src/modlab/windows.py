"""Frequency windows: uniform (unit-lattice) and dyadic partitions of unity."""

from dataclasses import dataclass

import numpy as np


def smoothstep(t):
    """C^2 quintic ramp: 0 for t <= 0, 1 for t >= 1, and S(t) + S(1-t) = 1."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0)


@dataclass(frozen=True)
class Window:
    """Tensor-product window ``phi`` with ``supp phi in [-1, 1]^n``.

    ``kind="hat"`` is ``prod max(0, 1 - |xi_i|)``; ``kind="smoothed-hat"``
    replaces each factor by ``S(1 - |xi_i|)`` with the quintic ramp ``S``.
    Both satisfy ``sum_k phi(xi - k) = 1`` exactly.
    """

    kind: str = "hat"

    def __post_init__(self):
        if self.kind not in ("hat", "smoothed-hat"):
            raise ValueError(f"unknown window kind {self.kind!r}")

    def profile(self, t):
        """One-dimensional factor."""
        r = 1.0 - np.abs(np.asarray(t, dtype=float))
        if self.kind == "hat":
            return np.maximum(r, 0.0)
        return smoothstep(r)

    def __call__(self, *xi):
        out = self.profile(xi[0])
        for comp in xi[1:]:
            out = out * self.profile(comp)
        return out

    def partition_defect(self, samples=4097):
        """``max |sum_k phi(t - k) - 1|`` over a fine sample of one period."""
        t = np.linspace(0.0, 1.0, samples)
        total = sum(self.profile(t - k) for k in (-1, 0, 1, 2))
        return float(np.max(np.abs(total - 1.0)))


HAT = Window("hat")
SMOOTHED_HAT = Window("smoothed-hat")


def cutoff(r):
    """Radial C^2 cutoff: 1 on [0, 1], 0 on [2, inf)."""
    return 1.0 - smoothstep(np.asarray(r, dtype=float) - 1.0)


@dataclass(frozen=True)
class DyadicWindow:
    """Radial Littlewood-Paley pieces built by telescoping :func:`cutoff`.

    ``psi0 = theta(|xi|)`` and ``psi(xi) = theta(|xi|) - theta(2|xi|)``, so
    ``supp psi0 in {|xi| <= 2}``, ``supp psi in {1/2 <= |xi| <= 2}`` and
    ``psi0 + sum_{j>=1} psi(xi / 2^j) = 1``.
    """

    def psi0(self, r):
        return cutoff(r)

    def psi(self, r):
        r = np.asarray(r, dtype=float)
        return cutoff(r) - cutoff(2.0 * r)

    def piece(self, j, r):
        """``psi_j(r)``: ``psi0`` for ``j = 0``, else ``psi(r / 2^j)``."""
        if j == 0:
            return self.psi0(r)
        return self.psi(np.asarray(r, dtype=float) / 2.0**j)

    @staticmethod
    def support(j):
        """Closed radial interval outside which ``psi_j`` vanishes."""
        if j == 0:
            return 0.0, 2.0
        return 2.0 ** (j - 1), 2.0 ** (j + 1)

    def partition_defect(self, rmax, samples=20001):
        r = np.linspace(0.0, rmax, samples)
        jmax = int(np.ceil(np.log2(max(rmax, 2.0)))) + 1
        total = sum(self.piece(j, r) for j in range(jmax + 1))
        return float(np.max(np.abs(total - 1.0)))


DYADIC = DyadicWindow()
