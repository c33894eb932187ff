"""Command-line interface.

Subcommands: generate (synthetic datasets), cluster (run one algorithm on a
CSV), evaluate (score an assignment against truth labels), field (export a
rounding vector field on the 2-simplex), experiment (run a JSON sweep spec).
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import _streams
from .dataset import load_assignments, load_csv, save_assignments, save_csv
from .engine import ClusteringConfig, run_softmodes
from .evaluation import accuracy, confusion_matrix
from .generators import BbmSpec, CcmSpec, generate_bbm, generate_ccm
from .harness import ExperimentSpec, emit_plot, run_experiment, write_results
from .rounding import RoundingSpec, field_grid
from .seeding import METHODS as SEEDING_METHODS


def _add_generate(sub: argparse._SubParsersAction) -> None:
    gen = sub.add_parser("generate", help="sample a synthetic labeled dataset")
    models = gen.add_subparsers(dest="model", required=True)

    bbm = models.add_parser("bbm", help="block model over {0,1}^d")
    bbm.add_argument("out", type=Path, help="output CSV path")
    bbm.add_argument("--n", type=int, required=True)
    bbm.add_argument("--d", type=int, required=True)
    bbm.add_argument("--k", type=int, required=True)
    bbm.add_argument("--p", type=float, default=None, help="diagonal bit probability")
    bbm.add_argument("--q", type=float, default=None, help="off-diagonal bit probability")
    bbm.add_argument("--pmatrix", type=Path, default=None,
                     help="CSV file with the full k x k probability matrix (overrides --p/--q)")
    bbm.add_argument("--seed", type=int, default=0)

    ccm = models.add_parser("ccm", help="corrupted codewords over {0,1}^d")
    ccm.add_argument("out", type=Path)
    ccm.add_argument("--n", type=int, required=True)
    ccm.add_argument("--d", type=int, required=True)
    ccm.add_argument("--k", type=int, required=True)
    ccm.add_argument("--eps", type=float, required=True, help="coordinate flip probability")
    ccm.add_argument("--rho", type=float, default=0.0, help="uniform-noise fraction")
    ccm.add_argument("--seed", type=int, default=0)


def _add_cluster(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("cluster", help="cluster a categorical CSV")
    p.add_argument("input", type=Path, help="input CSV path")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--rounding", choices=("plurality", "uniform", "soft"), default="soft")
    p.add_argument("--t", type=float, default=3.0, help="soft rounding exponent (>= 1)")
    p.add_argument("--seeding", choices=SEEDING_METHODS, default="dsample")
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=1,
                   help="independent runs; assignments come from the lowest-objective epoch")
    p.add_argument("--threads", default=1)
    p.add_argument("--has-header", action="store_true")
    p.add_argument("--label-col", default=None, help="ground-truth column name (needs --has-header)")
    p.add_argument("--label-col-index", type=int, default=None, help="ground-truth column index")
    p.add_argument("--assignments-out", type=Path, required=True)
    p.add_argument("--trace-out", type=Path, default=None,
                   help="per-iteration CSV: epoch, iteration, objective, accuracy")


def _add_evaluate(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("evaluate", help="score predictions against truth labels")
    p.add_argument("--pred", type=Path, required=True, help="one predicted cluster id per line")
    p.add_argument("--truth", type=Path, required=True, help="one true label per line")


def _add_field(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("field", help="rounding vector field on the 2-simplex")
    p.add_argument("out", type=Path)
    p.add_argument("--rounding", choices=("plurality", "uniform", "soft"), required=True)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--resolution", type=int, default=20)


def _add_experiment(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("experiment", help="run a JSON sweep spec")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--plot", choices=("line", "bar"), default="line")
    p.add_argument("--threads", default=1)


def _threads_arg(raw) -> int | str:
    return raw if raw == "auto" else int(raw)


def _cmd_generate(args: argparse.Namespace) -> int:
    if args.model == "bbm":
        if args.pmatrix is not None:
            with args.pmatrix.open(encoding="utf-8") as fh:
                probs = tuple(tuple(float(c) for c in row) for row in csv.reader(fh) if row)
            from .generators import near_equal_split

            spec = BbmSpec(
                n=args.n, d=args.d,
                cluster_sizes=near_equal_split(args.n, args.k),
                feature_block_sizes=near_equal_split(args.d, args.k),
                probs=probs, seed=args.seed,
            )
        else:
            if args.p is None or args.q is None:
                print("generate bbm: provide --p and --q, or --pmatrix", file=sys.stderr)
                return 2
            spec = BbmSpec.from_pq(args.n, args.d, args.k, args.p, args.q, seed=args.seed)
        ds = generate_bbm(spec)
    else:
        ds = generate_ccm(
            CcmSpec(n=args.n, d=args.d, k=args.k, epsilon=args.eps, rho=args.rho, seed=args.seed)
        )
    save_csv(ds, args.out)
    print(f"wrote {ds.n} x {ds.d} dataset with labels to {args.out}")
    return 0


def _cmd_cluster(args: argparse.Namespace) -> int:
    if args.label_col is not None and args.label_col_index is not None:
        print("cluster: pass --label-col or --label-col-index, not both", file=sys.stderr)
        return 2
    label = args.label_col if args.label_col is not None else args.label_col_index
    ds = load_csv(args.input, label_column=label, has_header=args.has_header)
    rounding = RoundingSpec.parse(args.rounding, args.t)

    best = None
    best_obj = None
    trace_rows = []
    for epoch in range(args.epochs):
        config = ClusteringConfig(
            k=args.k, rounding=rounding, seeding=args.seeding, max_iter=args.max_iter,
            seed=_streams.derive_seed(args.seed, _streams.RUN_SEED, 0, 0, epoch),
            n_threads=_threads_arg(args.threads),
        )
        result = run_softmodes(ds, config)
        for it, stats in enumerate(result.trace, start=1):
            trace_rows.append(
                (epoch, it, stats.objective, "" if stats.accuracy is None else f"{stats.accuracy:.10g}")
            )
        final_obj = result.trace[-1].objective
        if best_obj is None or final_obj < best_obj:
            best, best_obj = result, final_obj
    save_assignments(best.assignment, args.assignments_out)
    if args.trace_out is not None:
        with args.trace_out.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["epoch", "iteration", "objective", "accuracy"])
            writer.writerows(trace_rows)
    acc = "" if ds.labels is None else f", accuracy {accuracy(best.assignment, ds.labels):.4f}"
    print(
        f"clustered {ds.n} points into {args.k} clusters: objective {best_obj}, "
        f"{best.iterations} iterations{acc}"
    )
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    pred = load_assignments(args.pred)
    truth = load_assignments(args.truth)
    acc = accuracy(pred, truth)
    m = confusion_matrix(pred, truth)
    print(f"accuracy,{acc:.10g}")
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["pred\\truth"] + [str(b) for b in range(m.shape[1])])
    for a in range(m.shape[0]):
        writer.writerow([str(a)] + [str(int(v)) for v in m[a]])
    return 0


def _cmd_field(args: argparse.Namespace) -> int:
    spec = RoundingSpec.parse(args.rounding, args.t)
    points, deltas = field_grid(spec, args.resolution)
    with args.out.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x1", "x2", "x3", "dx1", "dx2", "dx3"])
        for x, dx in zip(points, deltas):
            writer.writerow([f"{v:.10g}" for v in (*x, *dx)])
    print(f"wrote {len(points)} grid points to {args.out}")
    return 0


def _cmd_experiment(args: argparse.Namespace) -> int:
    spec = ExperimentSpec.from_json(args.config)
    results, timings = run_experiment(spec, n_threads=_threads_arg(args.threads))
    results_path, timings_path = write_results(results, timings, args.out)
    plot_path = emit_plot(results, args.plot, Path(args.out) / "plot.svg")
    print(f"wrote {results_path}, {timings_path}, {plot_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="softmodes",
        description="Categorical clustering with soft-rounded center updates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_generate(sub)
    _add_cluster(sub)
    _add_evaluate(sub)
    _add_field(sub)
    _add_experiment(sub)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "generate": _cmd_generate,
        "cluster": _cmd_cluster,
        "evaluate": _cmd_evaluate,
        "field": _cmd_field,
        "experiment": _cmd_experiment,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
