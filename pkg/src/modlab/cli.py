"""Command-line front end.

Subcommands: ``verdict``, ``regions``, ``norm``, ``experiment``.

Exit codes: 0 success, 1 inconsistent probe, 2 parse or input-format error,
3 domain error, 4 unwritable output, 5 truncation tail above tolerance.
"""

import argparse
import csv
import io
import json
import os
import re
import sys
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from importlib import resources

import jsonschema

from . import experiments as ex
from .errors import DomainError, ModlabError, TruncationError
from .grid import GridSpec, read_csv
from .indices import (
    DIRECTIONS,
    IndexPair,
    embeds_besov_modulation,
    embeds_L_in_M,
    embeds_M_in_L,
    exponent,
    fraction_str,
    mu1,
    mu2,
    multiplier_verdict,
    nu1,
    nu2,
    smoothness,
)
from .norms import HAT, SMOOTHED_HAT, besov_norm, lp_norm, modulation_norm, sobolev_norm

EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4
EXIT_TRUNCATION = 5

PROBES = ("dilation", "sandwich", "embedding", "multiplier", "band-multiplier")
FAMILIES = ("gaussian", "annulus", "gabor")


class UsageError(Exception):
    """Bad input detected by the CLI itself (exit 2)."""


# ---------------------------------------------------------------------------
# parsing helpers

def _rational(text, approx=False):
    try:
        return smoothness(text, approx=approx)
    except (ModlabError, TypeError) as exc:
        raise UsageError(f"cannot parse {text!r}: {exc} (use 'num/den', or --approx for decimals)") from exc


def _exponent(text, approx=False):
    try:
        return exponent(text, approx=approx)
    except (ModlabError, TypeError) as exc:
        raise UsageError(f"invalid exponent {text!r}: {exc}") from exc


def _split(text):
    if text is None:
        return None
    return [t for t in (x.strip() for x in str(text).split(",")) if t]


def _float_list(items):
    try:
        return [float(Fraction(str(x).strip())) for x in items]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse lambdas {items!r}") from exc


def schema(name):
    """Load a shipped JSON schema by stem (``"verdict"``, ``"probe_report"``, ...)."""
    text = resources.files("modlab").joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate(obj, name):
    jsonschema.validate(obj, schema(name))
    return obj


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _makedirs(path):
    os.makedirs(path, exist_ok=True)
    if not os.access(path, os.W_OK):
        raise PermissionError(f"{path} is not writable")


# ---------------------------------------------------------------------------
# verdict

def cmd_verdict(args):
    p = _exponent(args.p, args.approx)
    q = _exponent(args.q, args.approx)
    s = _rational(args.s, args.approx)
    direction = args.dir
    out = {
        "p": str(p),
        "q": str(q),
        "s": fraction_str(s),
        "n": args.n,
        "direction": direction,
    }
    if direction.startswith("mult-"):
        alpha = _rational(args.alpha if args.alpha is not None else "2", args.approx)
        v = multiplier_verdict(p, q, s, args.n, alpha, direction)
        out["alpha"] = fraction_str(alpha)
    else:
        if args.alpha is not None:
            raise UsageError("--alpha only applies to the mult-* directions")
        fn = {
            "L-to-M": lambda: embeds_L_in_M(p, q, s, args.n),
            "M-to-L": lambda: embeds_M_in_L(p, q, s, args.n),
            "B-to-M": lambda: embeds_besov_modulation(p, q, s, args.n, "B-to-M"),
            "M-to-B": lambda: embeds_besov_modulation(p, q, s, args.n, "M-to-B"),
        }[direction]
        v = fn()
    out["verdict"] = v.label
    out["matched_condition"] = v.matched_condition or ""
    out["threshold"] = fraction_str(v.threshold)
    sys.stdout.write(dumps(validate(out, "verdict")))
    return EXIT_OK


# ---------------------------------------------------------------------------
# region diagram

REGION_COLUMNS = ("inv_p", "inv_q", "nu1", "nu2", "mu1", "mu2")

# boundary segments in (1/p, 1/q); each group is three segments meeting at the centre
_STARRED = (((0, 0), (0.5, 0.5)), ((0.5, 0.5), (1, 0)), ((0.5, 0.5), (0.5, 1)))
_UNSTARRED = (((0.5, 0.5), (1, 1)), ((0, 1), (0.5, 0.5)), ((0.5, 0), (0.5, 0.5)))
_LABELS = (
    ("I1*", 0.5, 0.18), ("I2*", 0.8, 0.45), ("I3*", 0.2, 0.72),
    ("I1", 0.5, 0.86), ("I2", 0.25, 0.3), ("I3", 0.75, 0.3),
)


def region_rows(resolution):
    """Exact ``(1/p, 1/q, nu1, nu2, mu1, mu2)`` on the grid ``{0, 1/res, ..., 1}^2``."""
    rows = []
    for i in range(resolution + 1):
        for j in range(resolution + 1):
            pq = IndexPair(Fraction(i, resolution), Fraction(j, resolution))
            rows.append((pq.u, pq.v, nu1(pq), nu2(pq), mu1(pq), mu2(pq)))
    return rows


def region_csv(resolution):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REGION_COLUMNS)
    for row in region_rows(resolution):
        w.writerow([fraction_str(x) for x in row])
    return buf.getvalue()


def region_svg(size=400, margin=50):
    """Unit square in ``(1/p, 1/q)`` with the starred and unstarred boundaries."""

    def X(u):
        return margin + u * size

    def Y(v):
        return margin + (1 - v) * size

    def polyline(seg, cls):
        pts = " ".join(f"{X(u):g},{Y(v):g}" for u, v in seg)
        return f'    <polyline class="{cls}" points="{pts}"/>'

    total = size + 2 * margin
    lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total}" height="{total}" '
        f'viewBox="0 0 {total} {total}">',
        "  <style>.starred{stroke:#c0392b;stroke-width:2;fill:none}"
        ".unstarred{stroke:#2c3e50;stroke-width:2;stroke-dasharray:6 4;fill:none}"
        "text{font-family:sans-serif;font-size:13px}</style>",
        f'  <rect x="{margin}" y="{margin}" width="{size}" height="{size}" fill="none" stroke="black"/>',
        '  <g id="starred" class="region-boundary">',
        *(polyline(seg, "starred") for seg in _STARRED),
        "  </g>",
        '  <g id="unstarred" class="region-boundary">',
        *(polyline(seg, "unstarred") for seg in _UNSTARRED),
        "  </g>",
        '  <g id="labels">',
        *(f'    <text x="{X(u):g}" y="{Y(v):g}" text-anchor="middle">{name}</text>' for name, u, v in _LABELS),
        f'    <text x="{X(0.5):g}" y="{total - 12}" text-anchor="middle">1/p</text>',
        f'    <text x="14" y="{Y(0.5):g}" text-anchor="middle">1/q</text>',
        f'    <text x="{X(0):g}" y="{Y(0) + 18:g}" text-anchor="middle">0</text>',
        f'    <text x="{X(1):g}" y="{Y(0) + 18:g}" text-anchor="middle">1</text>',
        f'    <text x="{X(0) - 12:g}" y="{Y(1) + 4:g}" text-anchor="middle">1</text>',
        "  </g>",
        "</svg>",
    ]
    return "\n".join(lines) + "\n"


def cmd_regions(args):
    if args.resolution < 8:
        raise UsageError("--resolution must be at least 8")
    out = args.out
    _makedirs(out)
    svg_path = os.path.join(out, "regions.svg")
    csv_path = os.path.join(out, "regions.csv")
    _write_text(svg_path, region_svg())
    _write_text(csv_path, region_csv(args.resolution))
    info = {
        "svg": svg_path,
        "csv": csv_path,
        "resolution": args.resolution,
        "rows": (args.resolution + 1) ** 2,
    }
    if args.figures:
        from .plotting import plot_regions

        info["png"] = plot_regions(os.path.join(out, "regions.png"))
    sys.stdout.write(dumps(validate(info, "regions")))
    return EXIT_OK


# ---------------------------------------------------------------------------
# norm

def norm_report_dict(f, space, p, q=None, s=0, window=HAT, radius=None):
    """JSON-ready norm report for any of the four supported spaces."""
    if space in ("lebesgue", "sobolev"):
        value = lp_norm(f, p) if space == "lebesgue" else sobolev_norm(f, p, s)
        return {
            "space": space,
            "p": str(p),
            "q": None,
            "s": fraction_str(s),
            "value": float(value),
            "bands": [],
            "tail_estimate": 0.0,
            "truncation_radius": None,
        }
    if q is None:
        raise UsageError(f"--q is required for the {space} norm")
    if space == "modulation":
        rep = modulation_norm(f, p, q, s, window=window, radius=radius)
    else:
        rep = besov_norm(f, p, q, s, radius=radius)
    return rep.to_dict()


def cmd_norm(args):
    p = _exponent(args.p, args.approx)
    q = _exponent(args.q, args.approx) if args.q is not None else None
    s = _rational(args.s, args.approx)
    try:
        f = read_csv(args.input)
    except FileNotFoundError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}") from exc
    except ModlabError as exc:
        raise UsageError(f"{args.input}: {exc}") from exc
    window = SMOOTHED_HAT if args.window == "smoothed-hat" else HAT
    out = norm_report_dict(f, args.space, p, q, s, window, args.radius)
    sys.stdout.write(dumps(validate(out, "norm_report")))
    return EXIT_OK


# ---------------------------------------------------------------------------
# experiment

@dataclass
class RunConfig:
    """Batch experiment description; every rational is a ``"num/den"`` string."""

    probe: str
    p: list = field(default_factory=list)
    q: list = field(default_factory=list)
    s: list = field(default_factory=lambda: ["0"])
    alpha: list = field(default_factory=lambda: ["2"])
    n: int = 1
    family: str = "gaussian"
    lambdas: list = None
    grid: dict = field(default_factory=dict)
    k: int = 3
    trials: int = 16
    seed: int = ex.DEFAULT_SEED
    out: str = "modlab-out"
    timestamp: bool = True
    figures: bool = True
    approx: bool = False
    command: str = "experiment"

    @classmethod
    def from_dict(cls, data):
        try:
            validate(data, "run_config")
        except jsonschema.ValidationError as exc:
            raise UsageError(f"invalid run config: {exc.message}") from exc
        return cls(**data)

    def to_dict(self):
        d = {
            "command": self.command,
            "probe": self.probe,
            "p": list(self.p),
            "q": list(self.q),
            "s": list(self.s),
            "alpha": list(self.alpha),
            "n": self.n,
            "family": self.family,
            "grid": dict(self.grid),
            "k": self.k,
            "trials": self.trials,
            "seed": self.seed,
            "out": self.out,
            "timestamp": self.timestamp,
            "figures": self.figures,
            "approx": self.approx,
        }
        if self.lambdas is not None:
            d["lambdas"] = list(self.lambdas)
        return d


def _sorted_exponents(items, approx):
    vals = {}
    for t in items:
        e = _exponent(t, approx)
        vals[e.recip] = e
    # increasing p, i.e. decreasing 1/p
    return [vals[r] for r in sorted(vals, reverse=True)]


def _sorted_rationals(items, approx):
    return sorted({_rational(t, approx) for t in items})


def _need(name, items):
    if not items:
        raise UsageError(f"empty parameter grid: {name} has no values")
    return items


def _dilation_spec(cfg):
    base = ex.dilation_grid()
    N = cfg.grid.get("N", base.N)
    L = cfg.grid.get("L", base.L)
    try:
        return GridSpec(1, N, L)
    except DomainError as exc:
        raise UsageError(f"bad grid override: {exc}") from exc


def run_probes(cfg):
    """Evaluate the probes described by ``cfg`` in sorted parameter order."""
    if cfg.probe not in PROBES:
        raise UsageError(f"unknown probe {cfg.probe!r}")
    if cfg.n != 1:
        raise DomainError("numerical probes run in one dimension")
    a = cfg.approx
    lambdas = None if cfg.lambdas is None else _float_list(cfg.lambdas)
    if lambdas is not None and not lambdas:
        raise UsageError("empty parameter grid: lambdas has no values")
    ps = _need("p", _sorted_exponents(cfg.p, a))
    if cfg.probe == "dilation":
        qs = _need("q", _sorted_exponents(cfg.q, a))
        if cfg.family == "gabor":
            raise UsageError("the dilation probe takes the gaussian or annulus family")
        pairs = [(p, q) for p in ps for q in qs]
        return ex.dilation_sweep(pairs, lambdas or ex.DEFAULT_LAMBDAS, cfg.family, _dilation_spec(cfg))
    if cfg.probe == "sandwich":
        if cfg.family == "gabor":
            raise UsageError("the sandwich probe takes the gaussian or annulus family")
        return ex.sandwich_sweep(ps, cfg.family, lambdas or ex.DEFAULT_LAMBDAS, _dilation_spec(cfg))
    if cfg.probe == "embedding":
        qs = _need("q", _sorted_exponents(cfg.q, a))
        ss = _need("s", _sorted_rationals(cfg.s, a))
        return [
            ex.embedding_probe(p, q, s, cfg.n, cfg.family, scales=lambdas)
            for p in ps
            for q in qs
            for s in ss
        ]
    if cfg.probe == "multiplier":
        if "L" in cfg.grid:
            raise UsageError("multiplier grids choose L per lambda; only N can be overridden")
        alphas = _need("alpha", _sorted_rationals(cfg.alpha, a))
        ss = _need("s", _sorted_rationals(cfg.s, a))
        N = cfg.grid.get("N", 2**16)
        return [
            ex.multiplier_loss_experiment(p, al, s, lambdas or ex.DEFAULT_LAMBDAS, N)
            for p in ps
            for al in alphas
            for s in ss
        ]
    alphas = _need("alpha", _sorted_rationals(cfg.alpha, a))
    base = GridSpec.band_aligned(1, 2**12, 8)
    spec = GridSpec(1, cfg.grid.get("N", base.N), cfg.grid.get("L", base.L))
    return [
        ex.band_multiplier_probe(p, al, cfg.k, cfg.trials, cfg.seed, spec)
        for p in ps
        for al in alphas
    ]


def run_experiment(cfg):
    """Run ``cfg`` and write reports, summary CSV, figures and a manifest.

    Returns ``(reports, manifest)``.
    """
    _makedirs(cfg.out)
    reports = run_probes(cfg)
    files, figures = [], []
    for i, rep in enumerate(reports):
        stem = f"{rep.kind}-{i:03d}"
        path = os.path.join(cfg.out, stem + ".json")
        _write_text(path, dumps(validate(rep.to_dict(), "probe_report")))
        files.append(path)
    summary = os.path.join(cfg.out, "summary.csv")
    _write_text(summary, ex.summary_csv(reports))
    if cfg.figures:
        from .plotting import plot_report

        for i, rep in enumerate(reports):
            figures.append(plot_report(rep, os.path.join(cfg.out, f"{rep.kind}-{i:03d}.png")))
    manifest = {
        "config": cfg.to_dict(),
        "reports": files,
        "summary": summary,
        "figures": figures,
        "consistent": all(r.verdict_consistency for r in reports),
    }
    if cfg.timestamp:
        manifest["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    _write_text(os.path.join(cfg.out, "manifest.json"), dumps(validate(manifest, "manifest")))
    return reports, manifest


def _config_from_args(args):
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read {args.config}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"{args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise UsageError("run config must be a JSON object")
        cfg = RunConfig.from_dict(data)
    else:
        if args.probe is None:
            raise UsageError("give --probe or --config")
        cfg = RunConfig(probe=args.probe)
        for name in ("p", "q", "s", "alpha"):
            val = _split(getattr(args, name))
            if val is not None:
                setattr(cfg, name, val)
        cfg.lambdas = _split(args.lambdas)
        cfg.n = args.n
        cfg.family = args.family or cfg.family
        cfg.approx = args.approx
        if args.k is not None:
            cfg.k = args.k
        if args.trials is not None:
            cfg.trials = args.trials
    # flags override the file for the plumbing fields
    if args.grid_N is not None:
        cfg.grid = {**cfg.grid, "N": args.grid_N}
    if args.box_L is not None:
        cfg.grid = {**cfg.grid, "L": args.box_L}
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out is not None:
        cfg.out = args.out
    if args.no_timestamp:
        cfg.timestamp = False
    if args.no_figures:
        cfg.figures = False
    return cfg


def cmd_experiment(args):
    cfg = _config_from_args(args)
    reports, manifest = run_experiment(cfg)
    sys.stdout.write(ex.summary_csv(reports))
    return EXIT_OK if manifest["consistent"] else EXIT_INCONSISTENT


# ---------------------------------------------------------------------------
# entry point

def build_parser():
    parser = argparse.ArgumentParser(prog="modlab", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--approx", action="store_true", help="accept decimals, rounding them with a warning")

    v = sub.add_parser("verdict", help="decide an embedding or multiplier statement")
    v.add_argument("--p", required=True)
    v.add_argument("--q", required=True)
    v.add_argument("--s", default="0")
    v.add_argument("--n", type=int, default=1)
    v.add_argument("--alpha")
    v.add_argument("--dir", required=True, choices=DIRECTIONS)
    common(v)
    v.set_defaults(func=cmd_verdict)

    r = sub.add_parser("regions", help="write the region diagram (SVG) and sampled exponents (CSV)")
    r.add_argument("--out", default=".")
    r.add_argument("--resolution", type=int, default=12)
    r.add_argument("--figures", action="store_true", help="also render a PNG heatmap")
    r.set_defaults(func=cmd_regions)

    nm = sub.add_parser("norm", help="evaluate a norm of a tabulated function")
    nm.add_argument("input")
    nm.add_argument("--space", required=True, choices=("lebesgue", "sobolev", "modulation", "besov"))
    nm.add_argument("--p", required=True)
    nm.add_argument("--q")
    nm.add_argument("--s", default="0")
    nm.add_argument("--radius", type=int)
    nm.add_argument("--window", choices=("hat", "smoothed-hat"), default="hat")
    common(nm)
    nm.set_defaults(func=cmd_norm)

    e = sub.add_parser("experiment", help="run probes and write reports")
    e.add_argument("--config", help="RunConfig JSON file")
    e.add_argument("--probe", choices=PROBES)
    e.add_argument("--p", help="comma-separated exponents")
    e.add_argument("--q")
    e.add_argument("--s")
    e.add_argument("--alpha")
    e.add_argument("--n", type=int, default=1)
    e.add_argument("--family", choices=FAMILIES)
    e.add_argument("--lambdas", help="comma-separated dilation factors (or radii for the gabor family)")
    e.add_argument("--k", type=int)
    e.add_argument("--trials", type=int)
    e.add_argument("--grid-N", dest="grid_N", type=int)
    e.add_argument("--box-L", dest="box_L", type=float)
    e.add_argument("--seed", type=int)
    e.add_argument("--out")
    e.add_argument("--no-timestamp", action="store_true")
    e.add_argument("--no-figures", action="store_true")
    common(e)
    e.set_defaults(func=cmd_experiment)
    return parser


_NEGATIVE_VALUE = re.compile(r"^-\d+(/\d+)?(,-?\d+(/\d+)?)*$")


def _join_negative_values(argv):
    """``--s -1/4`` becomes ``--s=-1/4``: argparse only accepts plain negative
    numbers as option values and would read ``-1/4`` as an unknown flag."""
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEGATIVE_VALUE.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = _join_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            return args.func(args)
    except UsageError as exc:
        print(f"modlab: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except TruncationError as exc:
        print(f"modlab: truncation: {exc} (suggested radius {exc.suggested_radius})", file=sys.stderr)
        return EXIT_TRUNCATION
    except OSError as exc:
        print(f"modlab: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    except DomainError as exc:
        print(f"modlab: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ModlabError as exc:
        # aliasing and resolution guards: the request does not fit the grid
        print(f"modlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
