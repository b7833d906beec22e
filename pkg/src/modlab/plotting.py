"""PNG figures for probe reports.

Uses the non-interactive Agg backend; every function writes one file and
returns its path.
"""

import math
from fractions import Fraction

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .experiments import ExponentFit  # noqa: E402
from .indices import IndexPair, mu1, nu1, nu2  # noqa: E402

# fixed metadata keeps PNG bytes independent of the matplotlib build date
_PNG_META = {"Software": None}


def _save(fig, path):
    fig.savefig(path, dpi=100, metadata=_PNG_META)
    plt.close(fig)
    return path


def _title(report):
    return report.kind + "  " + ", ".join(f"{k}={v}" for k, v in sorted(report.parameters.items()))


def plot_fit(report, path):
    """Log-log plot of the measured values with the fitted line."""
    fit = report.measured
    if not isinstance(fit, ExponentFit):
        raise TypeError("plot_fit needs a report whose measurement is an ExponentFit")
    fig, ax = plt.subplots(figsize=(5, 3.6))
    lams = [l for l, _ in fit.excluded] + list(fit.lambdas)
    vals = [v for _, v in fit.excluded] + list(fit.values)
    ax.loglog(lams, vals, "o", color="k", label="measured")
    if fit.excluded:
        ax.loglog(*zip(*fit.excluded), "o", mfc="w", color="k", label="excluded")
    x = np.array(fit.lambdas)
    ax.loglog(x, np.exp(fit.intercept) * x**fit.slope, "-", color="C0", label=f"slope {fit.slope:.4f}")
    ax.set_xlabel(r"$\lambda$")
    ax.set_ylabel("value")
    ax.set_title(_title(report), fontsize=7)
    ax.legend(fontsize=7)
    fig.tight_layout()
    return _save(fig, path)


def plot_series(report, path):
    """Ratio series against the report's scales."""
    series = list(report.measured)
    scales = list(report.scales)
    fig, ax = plt.subplots(figsize=(5, 3.6))
    if report.kind == "sandwich":
        half = len(series) // 2
        ax.semilogx(scales[:half], series[:half], "o-", label="lower constant")
        ax.semilogx(scales[half:], series[half:], "s-", label="upper constant")
        ax.legend(fontsize=7)
    else:
        ax.semilogx(scales, series, "o-", color="k")
    ax.set_xlabel("scale")
    ax.set_ylabel("ratio")
    ax.set_title(_title(report), fontsize=7)
    fig.tight_layout()
    return _save(fig, path)


def plot_report(report, path):
    if isinstance(report.measured, ExponentFit):
        return plot_fit(report, path)
    return plot_series(report, path)


def plot_regions(path, resolution=48):
    """Heatmaps of ``nu1``, ``nu2`` and ``mu1`` over ``(1/p, 1/q)``."""
    grid = [Fraction(i, resolution) for i in range(resolution + 1)]
    panels = (("nu1", nu1), ("nu2", nu2), ("mu1", mu1))
    fig, axes = plt.subplots(1, 3, figsize=(10, 3.4))
    for ax, (name, fn) in zip(axes, panels):
        z = np.array([[float(fn(IndexPair(u, v))) for u in grid] for v in grid])
        im = ax.imshow(z, origin="lower", extent=(0, 1, 0, 1), cmap="viridis")
        ax.set_title(name)
        ax.set_xlabel("1/p")
        ax.set_ylabel("1/q")
        fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    return _save(fig, path)


def finite(values):
    """True when every value is a finite float (plots skip otherwise)."""
    return all(math.isfinite(float(v)) for v in values)
