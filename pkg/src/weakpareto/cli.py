"""Command-line front end: ``weakpareto generate | volume | fit | evolve | metrics``.

Every CSV written here starts with ``#`` metadata lines (package version and
the effective configuration as JSON), then a header row. Floats are printed
with 17 significant digits so that files round-trip bit-exactly.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from math import comb
from pathlib import Path

import numpy as np

from . import __version__
from .core import FrontBounds, IndexSet
from .evolve import SELECTIONS, EvolutionConfig, run
from .metrics import BaselineSet, build_ideal_baseline, hypervolume, igd
from .problems import CATALOG_NAMES, CaseStudyFront, ProblemInstance, catalog, format_config, parse_config
from .regress import lasso_poly_fit, lowest_active_degree
from .volume import delta_sweep, growth_order, midline_sweep
from .wpb import count_drs, enumerate_wpbs, sample_wpb


class UsageError(Exception):
    """Invalid combination of command-line options."""


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def write_csv(path: Path, header: list[str], rows, config: dict) -> None:
    """Write ``rows`` under a metadata block and a header row."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(f"# weakpareto {__version__}\n")
        fh.write(f"# config: {json.dumps(config, sort_keys=True, default=_json_default)}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    """Header and rows of a CSV written by :func:`write_csv` (metadata skipped)."""
    with open(path, newline="") as fh:
        lines = [line for line in fh if not line.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    return header, [row for row in reader if row]


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"not serializable: {type(obj)}")


def _config_echo(args: argparse.Namespace, **extra) -> dict:
    echo = {k: v for k, v in vars(args).items() if k != "func"}
    echo.update(extra)
    return echo


def _floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _deltas(text: str) -> np.ndarray:
    """Either a comma list or ``start:stop:count`` (inclusive linear grid)."""
    if ":" in text:
        start, stop, count = text.split(":")
        return np.linspace(float(start), float(stop), int(count))
    return np.array(_floats(text))


def _load_instance(args: argparse.Namespace) -> ProblemInstance:
    if getattr(args, "config", None):
        return parse_config(Path(args.config).read_text())
    if not args.instance:
        raise UsageError("give --instance NAME or --config FILE")
    try:
        return catalog(args.instance, m=args.m)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None


def default_workers() -> int:
    return max(1, int(os.environ.get("WEAKPARETO_WORKERS", "1")))


# ---------------------------------------------------------------------------
# generate


def pf_divisions(instance: ProblemInstance, minimum: int | None = None) -> int:
    """Smallest lattice size whose PF sample has more than ``C(50+m-1, m-1)`` points."""
    m = instance.m
    target = comb(50 + m - 1, m - 1) if minimum is None else minimum
    H = 50
    while len(instance.sample_pf(H)) <= target:
        H += 5
    return H


def cmd_generate(args: argparse.Namespace) -> int:
    if args.resolution < 2:
        raise UsageError("--resolution must be at least 2")
    inst = _load_instance(args)
    out = Path(args.out)
    echo = _config_echo(args, instance_config=format_config(inst))
    m = inst.m
    cols = [f"f{i + 1}" for i in range(m)]
    write_csv(out / "pf.csv", cols, inst.sample_pf(args.divisions).tolist(), echo)
    for desc in enumerate_wpbs(inst):
        pts = sample_wpb(desc, args.resolution).points
        write_csv(out / f"wpb_{desc.label()}.csv", cols, pts.tolist(), dict(echo, index_set=desc.index_set.label()))
    (out / "instance.cfg").write_text(format_config(inst))
    return 0


# ---------------------------------------------------------------------------
# volume


def cmd_volume(args: argparse.Namespace) -> int:
    methods = [m.strip() for m in args.method.split(",") if m.strip()]
    for method in methods:
        if method not in ("exact", "mc", "scalarized"):
            raise UsageError(f"unknown method {method!r}")
        if method == "exact" and args.p != 1:
            raise UsageError("the exact method needs p = 1")
    front = CaseStudyFront(args.m, args.p)
    iset = IndexSet.parse(args.index_set) if args.index_set else IndexSet(tuple(range(args.nu)))
    if not 1 <= len(iset) <= args.m - 1:
        raise UsageError("nu must lie in [1, m-1]")
    echo = _config_echo(args)
    out = Path(args.out)
    curves = []
    for method in methods:
        if args.sweep == "delta":
            curve = delta_sweep(front, len(iset), iset, args.rfree, _deltas(args.deltas), method, args.samples, args.seed)
        else:
            curve = midline_sweep(front, iset, args.delta, _deltas(args.positions), args.rfree, method, args.samples, args.seed)
        curves.append(curve)
    header = ["delta_or_position", "volume", "std_error", "method", "m", "nu", "p", "r_free"]
    write_csv(out / "curve.csv", header, [row for c in curves for row in c.rows()], echo)
    if args.sweep == "delta" and args.fit:
        fit_rows, summary = [], []
        for c in curves:
            pos = c.x > 0
            fit = lasso_poly_fit(c.x[pos], c.values[pos], args.degree)
            tag = f"m{c.m}_nu{c.nu}_p{c.p:g}_rfree{c.r_free:g}_{c.method}"
            fit_rows += fit.rows(tag)
            try:
                order = growth_order(c)
            except ValueError:
                order = float("nan")
            summary.append((tag, c.method, order, lowest_active_degree(fit), fit.lam))
        write_csv(out / "fit.csv", ["degree", "coefficient", "lambda", "instance"], fit_rows, echo)
        write_csv(out / "summary.csv", ["instance", "method", "growth_order", "lowest_active_degree", "lambda"], summary, echo)
    return 0


# ---------------------------------------------------------------------------
# fit


def cmd_fit(args: argparse.Namespace) -> int:
    header, rows = read_csv(Path(args.curve))
    ix, iv = header.index("delta_or_position"), header.index("volume")
    methods = sorted({r[header.index("method")] for r in rows}) if "method" in header else [""]
    fit_rows = []
    for method in methods:
        sel = [r for r in rows if not method or r[header.index("method")] == method]
        x = np.array([float(r[ix]) for r in sel])
        v = np.array([float(r[iv]) for r in sel])
        pos = x > 0
        fit = lasso_poly_fit(x[pos], v[pos], args.degree, args.lam)
        fit_rows += fit.rows(args.tag or method)
    write_csv(Path(args.out), ["degree", "coefficient", "lambda", "instance"], fit_rows, _config_echo(args))
    return 0


# ---------------------------------------------------------------------------
# evolve


def _one_run(payload):
    inst, cfg = payload
    return run(inst, cfg)


def cmd_evolve(args: argparse.Namespace) -> int:
    inst = _load_instance(args)
    metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
    unknown = set(metrics) - {"igd", "igd_down", "hv"}
    if unknown:
        raise UsageError(f"unknown metrics: {sorted(unknown)}")
    if "igd_down" in metrics and not args.build_baseline:
        raise UsageError("igd_down needs an ideal baseline; add --build-baseline")
    cfg = EvolutionConfig(
        population_size=args.population,
        max_evaluations=args.evaluations,
        seed=args.seed,
        selection=args.select,
        delta=args.delta,
        rho=args.rho,
        neighborhood_size=args.neighborhood,
    )
    resolved = cfg.resolved(inst.m, inst.n)
    label = inst.name or "custom"
    echo = _config_echo(args, evolution=resolved.to_dict(), instance_config=format_config(inst))
    out = Path(args.out)
    seeds = [args.seed + k for k in range(args.runs)]
    payloads = [(inst, cfg.with_seed(s)) for s in seeds]
    workers = args.workers or default_workers()
    if workers > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(workers) as pool:
            records = list(pool.map(_one_run, payloads))
    else:
        records = [_one_run(p) for p in payloads]

    cols = ["generation", "member_index"] + [f"f{i + 1}" for i in range(inst.m)]
    for seed, rec in zip(seeds, records):
        rows = [(g, k, *f) for g, snap in enumerate(rec.snapshots) for k, f in enumerate(snap.tolist())]
        write_csv(out / f"run_{label}_{args.select}_{seed}.csv", cols, rows, dict(echo, run_seed=seed))

    samples = [sample_wpb(d, args.resolution) for d in enumerate_wpbs(inst)]
    gamma_rows = []
    for seed, rec in zip(seeds, records):
        for nu, count in sorted(count_drs(rec.snapshots, samples, args.threshold).items()):
            gamma_rows.append((label, args.select, seed, nu, count))
    write_csv(out / "gamma.csv", ["instance", "algorithm", "seed", "nu", "gamma"], gamma_rows, echo)

    metric_rows = []
    bounds = inst.bounds
    if "igd" in metrics:
        pf = BaselineSet(inst.sample_pf(pf_divisions(inst)), "pf_sample")
        metric_rows += [(label, args.select, s, "igd", igd(r.final_objectives, pf, bounds)) for s, r in zip(seeds, records)]
    if "igd_down" in metrics:
        base = build_ideal_baseline(inst, cfg, args.baseline_runs, args.seed)
        metric_rows += [(label, args.select, s, "igd_down", igd(r.final_objectives, base, bounds)) for s, r in zip(seeds, records)]
    if "hv" in metrics:
        ref = bounds.ideal + 1.1 * bounds.span
        metric_rows += [(label, args.select, s, "hv", hypervolume(r.final_objectives, ref)) for s, r in zip(seeds, records)]
    write_csv(out / "metrics.csv", ["instance", "algorithm", "seed", "metric_name", "value"], metric_rows, echo)
    summary = []
    for name in metrics:
        vals = np.array([row[4] for row in metric_rows if row[3] == name])
        summary.append((label, args.select, name, vals.mean(), vals.std(ddof=1) if len(vals) > 1 else 0.0))
    write_csv(out / "metrics_summary.csv", ["instance", "algorithm", "metric_name", "mean", "std"], summary, echo)
    return 0


# ---------------------------------------------------------------------------
# metrics


def _objective_block(path: Path) -> np.ndarray:
    header, rows = read_csv(path)
    cols = [i for i, name in enumerate(header) if name.startswith("f") and name[1:].isdigit()]
    if not cols:
        raise UsageError(f"{path} has no f1..fm columns")
    return np.array([[float(r[i]) for i in cols] for r in rows])


def cmd_metrics(args: argparse.Namespace) -> int:
    approx = _objective_block(Path(args.approx))
    if args.final_only:
        header, rows = read_csv(Path(args.approx))
        if "generation" in header:
            gen = np.array([int(r[header.index("generation")]) for r in rows])
            approx = approx[gen == gen.max()]
    m = approx.shape[1]
    if args.instance or args.config:
        bounds = _load_instance(args).bounds
    elif args.ideal and args.nadir:
        bounds = FrontBounds(np.array(_floats(args.ideal)), np.array(_floats(args.nadir)))
    else:
        bounds = FrontBounds.unit(m)
    rows = []
    if args.baseline:
        rows.append(("igd", igd(approx, BaselineSet(_objective_block(Path(args.baseline))), bounds)))
    if args.reference:
        rows.append(("hv", hypervolume(approx, np.array(_floats(args.reference)))))
    if not rows:
        raise UsageError("give --baseline and/or --reference")
    write_csv(Path(args.out), ["metric_name", "value"], rows, _config_echo(args))
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weakpareto", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_args(p):
        p.add_argument("--instance", help=f"catalog name ({CATALOG_NAMES[0]}..{CATALOG_NAMES[-1]})")
        p.add_argument("--config", help="instance config file (key = value lines)")
        p.add_argument("--m", type=int, default=3, help="objectives for EMOP instances")

    p = sub.add_parser("generate", help="write PF and WPB samples of an instance")
    instance_args(p)
    p.add_argument("--resolution", type=int, default=50, help="WPB grid points per dimension")
    p.add_argument("--divisions", type=int, default=50, help="simplex lattice divisions for the PF")
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("volume", help="enclosed-volume sweeps on the case-study front")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--nu", type=int, default=2)
    p.add_argument("--index-set", help="1-based constrained objectives, e.g. 1,2 (overrides --nu)")
    p.add_argument("--rfree", type=float, default=1.3, help="normalized value of the free objectives")
    p.add_argument("--method", default="mc", help="comma list of exact, mc, scalarized")
    p.add_argument("--sweep", choices=("delta", "midline"), default="delta")
    p.add_argument("--deltas", default="0.01:0.45:45", help="comma list or start:stop:count")
    p.add_argument("--delta", type=float, default=0.1, help="normal distance for midline sweeps")
    p.add_argument("--positions", default="0:1:21", help="midline positions, 0 = middle, 1 = edge")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fit", action="store_true", help="also fit Lasso polynomials and growth orders")
    p.add_argument("--degree", type=int, default=6)
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("fit", help="Lasso polynomial fit of a curve.csv")
    p.add_argument("--curve", required=True)
    p.add_argument("--degree", type=int, default=6)
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="penalty; cross-validated if omitted")
    p.add_argument("--tag", default="")
    p.add_argument("--out", default="fit.csv")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("evolve", help="seeded evolutionary runs with DRS counts and metrics")
    instance_args(p)
    p.add_argument("--select", choices=SELECTIONS, default="pareto_crowding")
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--population", type=int, default=None)
    p.add_argument("--evaluations", type=int, default=None)
    p.add_argument("--delta", type=float, default=0.1, help="cone parameter")
    p.add_argument("--rho", type=float, default=0.05, help="g_gen augmentation weight")
    p.add_argument("--neighborhood", type=int, default=20)
    p.add_argument("--threshold", type=float, default=0.05, help="distance below which a vector counts as a DRS")
    p.add_argument("--resolution", type=int, default=200, help="WPB sample resolution")
    p.add_argument("--metrics", default="igd,hv", help="comma list of igd, igd_down, hv")
    p.add_argument("--build-baseline", action="store_true", help="build the ideal baseline needed by igd_down")
    p.add_argument("--baseline-runs", type=int, default=30)
    p.add_argument("--workers", type=int, default=None, help="parallel runs (default: $WEAKPARETO_WORKERS or 1)")
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("metrics", help="hypervolume and IGD of an objective CSV")
    instance_args(p)
    p.add_argument("--approx", required=True)
    p.add_argument("--baseline")
    p.add_argument("--reference", help="comma list, for hypervolume")
    p.add_argument("--ideal")
    p.add_argument("--nadir")
    p.add_argument("--final-only", action="store_true", help="use only the last generation of a run file")
    p.add_argument("--out", default="metrics.csv")
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"weakpareto {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"weakpareto {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
