"""Experiment orchestration: parameter sweeps, epoch aggregation, plot export.

An experiment sweeps one axis (a generator parameter, the soft exponent, or
iteration count), runs every configured algorithm for a number of
independent epochs per axis value, and writes tidy CSVs. Seeds for datasets
and runs are derived from the root seed by hashing the (axis index,
algorithm index, epoch) tuple, so re-running a spec reproduces results.csv
byte for byte. Wall-clock timings are inherently non-reproducible and go to
a separate timings.csv.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from . import _streams
from .dataset import CategoricalDataset, load_csv, one_hot
from .engine import ClusteringConfig, ClusteringResult, run_lloyd, run_softmodes
from .evaluation import accuracy
from .generators import BbmSpec, CcmSpec, generate_bbm, generate_ccm
from .rounding import RoundingSpec

AXES = ("k", "t", "p", "q", "rho", "iteration")
# Axes that are generator parameters, and the models they apply to. The k
# axis also works with a csv source (the dataset stays fixed, only the
# requested cluster count sweeps).
_PARAM_AXES = {"p": ("bbm",), "q": ("bbm",), "rho": ("ccm",), "k": ("bbm", "ccm")}

RESULT_COLUMNS = ("axis", "algorithm", "epoch", "accuracy", "iterations")
TIMING_COLUMNS = ("axis", "algorithm", "epoch", "seconds")

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


@dataclass(frozen=True)
class AlgorithmSpec:
    """One algorithm entry in an experiment.

    kind is "softmodes" (rounded-center iteration; rounding/t select the
    family member) or "lloyd" (k-means on the one-hot expansion). k
    overrides the generator's cluster count when set.
    """

    name: str
    kind: str = "softmodes"
    rounding: str = "soft"
    t: float = 3.0
    seeding: str = "dsample"
    max_iter: int = 100
    k: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in ("softmodes", "lloyd"):
            raise ValueError(f"unknown algorithm kind {self.kind!r}")
        if self.kind == "softmodes":
            RoundingSpec.parse(self.rounding, self.t)

    @classmethod
    def from_dict(cls, raw: dict) -> "AlgorithmSpec":
        allowed = {"name", "kind", "rounding", "t", "seeding", "max_iter", "k"}
        unknown = set(raw) - allowed
        if unknown:
            raise ValueError(f"unknown algorithm fields: {sorted(unknown)}")
        return cls(**raw)


@dataclass(frozen=True)
class ExperimentSpec:
    """Declarative description of a sweep.

    generator is either {"model": "bbm"|"ccm", ...parameters} or
    {"model": "csv", "path": ..., "label_col": ..., "has_header": ...}.
    axis picks the swept quantity; axis_values its grid.
    """

    generator: dict
    algorithms: tuple[AlgorithmSpec, ...]
    epochs: int
    axis: str
    axis_values: tuple
    seed: int = 0

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.axis not in AXES:
            raise ValueError(f"unknown sweep axis {self.axis!r}; expected one of {AXES}")
        if not self.axis_values:
            raise ValueError("axis_values must be non-empty")
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        model = self.generator.get("model")
        if model not in ("bbm", "ccm", "csv"):
            raise ValueError(f"unknown generator model {model!r}")
        if self.axis in ("p", "q", "rho"):
            required = _PARAM_AXES[self.axis]
            if model not in required:
                raise ValueError(f"axis {self.axis!r} requires a {required} generator")
        if self.axis == "iteration":
            if any(int(v) != v or v < 1 for v in self.axis_values):
                raise ValueError("iteration axis values must be positive integers")

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentSpec":
        allowed = {"generator", "algorithms", "epochs", "axis", "axis_values", "seed"}
        unknown = set(raw) - allowed
        if unknown:
            raise ValueError(f"unknown experiment fields: {sorted(unknown)}")
        algorithms = tuple(AlgorithmSpec.from_dict(a) for a in raw.get("algorithms", ()))
        return cls(
            generator=dict(raw["generator"]),
            algorithms=algorithms,
            epochs=int(raw.get("epochs", 1)),
            axis=raw["axis"],
            axis_values=tuple(raw["axis_values"]),
            seed=int(raw.get("seed", 0)),
        )

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> "ExperimentSpec":
        with Path(path).open(encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _dataset_for(spec: ExperimentSpec, axis_value, axis_index: int) -> CategoricalDataset:
    gen = dict(spec.generator)
    model = gen.pop("model")
    if model == "csv":
        return load_csv(
            gen["path"],
            label_column=gen.get("label_col"),
            has_header=bool(gen.get("has_header", True)),
        )
    # Dataset is regenerated per axis value only when the axis is a
    # generator parameter; otherwise one dataset is shared by the sweep.
    if spec.axis in _PARAM_AXES and model in _PARAM_AXES[spec.axis]:
        gen[spec.axis] = axis_value
        data_index = axis_index
    else:
        data_index = 0
    seed = _streams.derive_seed(spec.seed, _streams.GENERATE, data_index)
    if model == "bbm":
        return generate_bbm(
            BbmSpec.from_pq(
                n=int(gen["n"]), d=int(gen["d"]), k=int(gen["k"]),
                p=float(gen["p"]), q=float(gen["q"]), seed=seed,
            )
        )
    return generate_ccm(
        CcmSpec(
            n=int(gen["n"]), d=int(gen["d"]), k=int(gen["k"]),
            epsilon=float(gen.get("eps", gen.get("epsilon", 0.2))),
            rho=float(gen.get("rho", 0.0)),
            seed=seed,
        )
    )


def _resolve_k(spec: ExperimentSpec, alg: AlgorithmSpec, axis_value) -> int:
    if spec.axis == "k":
        return int(axis_value)
    if alg.k is not None:
        return int(alg.k)
    if "k" in spec.generator:
        return int(spec.generator["k"])
    raise ValueError(f"algorithm {alg.name!r} needs a cluster count: set k or use a generator with k")


def _run_one(
    alg: AlgorithmSpec,
    ds: CategoricalDataset,
    onehot_cache: dict,
    k: int,
    t_value: float,
    max_iter: int,
    run_seed: int,
    n_threads,
) -> tuple[ClusteringResult, float]:
    if alg.kind == "lloyd":
        if "oh" not in onehot_cache:
            onehot_cache["oh"] = one_hot(ds)
        config = ClusteringConfig(
            k=k, seeding=alg.seeding, max_iter=max_iter, seed=run_seed, n_threads=n_threads
        )
        start = time.perf_counter()
        result = run_lloyd(onehot_cache["oh"], config, labels=ds.labels)
    else:
        rounding = RoundingSpec.parse(alg.rounding, t_value)
        config = ClusteringConfig(
            k=k, rounding=rounding, seeding=alg.seeding,
            max_iter=max_iter, seed=run_seed, n_threads=n_threads,
        )
        start = time.perf_counter()
        result = run_softmodes(ds, config)
    return result, time.perf_counter() - start


def run_experiment(
    spec: ExperimentSpec, n_threads: Union[int, str] = 1
) -> tuple[list[dict], list[dict]]:
    """Execute a sweep; returns (result_rows, timing_rows).

    Result rows carry (axis, algorithm, epoch, accuracy, iterations); for
    the iteration axis the accuracy column holds the trace value at that
    iteration (carrying the final value forward for runs that converged
    earlier) and one timing row is written per run with an empty axis cell.
    """
    results: list[dict] = []
    timings: list[dict] = []
    trace_axis = spec.axis == "iteration"
    axis_loop = [None] if trace_axis else list(spec.axis_values)
    iteration_grid = sorted(int(v) for v in spec.axis_values) if trace_axis else None

    for axis_index, axis_value in enumerate(axis_loop):
        ds = _dataset_for(spec, axis_value, axis_index)
        onehot_cache: dict = {}
        for alg_index, alg in enumerate(spec.algorithms):
            k = _resolve_k(spec, alg, axis_value)
            t_value = float(axis_value) if spec.axis == "t" and alg.rounding == "soft" else alg.t
            max_iter = max(iteration_grid) if trace_axis else alg.max_iter
            for epoch in range(spec.epochs):
                run_seed = _streams.derive_seed(
                    spec.seed, _streams.RUN_SEED, axis_index, alg_index, epoch
                )
                result, seconds = _run_one(
                    alg, ds, onehot_cache, k, t_value, max_iter, run_seed, n_threads
                )
                final_acc = (
                    accuracy(result.assignment, ds.labels) if ds.labels is not None else None
                )
                if trace_axis:
                    trace_acc = [s.accuracy for s in result.trace]
                    for it in iteration_grid:
                        acc = trace_acc[min(it, len(trace_acc)) - 1]
                        results.append(
                            {
                                "axis": it,
                                "algorithm": alg.name,
                                "epoch": epoch,
                                "accuracy": acc,
                                "iterations": result.iterations,
                            }
                        )
                    timings.append(
                        {"axis": "", "algorithm": alg.name, "epoch": epoch, "seconds": seconds}
                    )
                else:
                    results.append(
                        {
                            "axis": axis_value,
                            "algorithm": alg.name,
                            "epoch": epoch,
                            "accuracy": final_acc,
                            "iterations": result.iterations,
                        }
                    )
                    timings.append(
                        {
                            "axis": axis_value,
                            "algorithm": alg.name,
                            "epoch": epoch,
                            "seconds": seconds,
                        }
                    )
    return results, timings


def _fmt(value) -> str:
    if value is None or value == "":
        return ""
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def _write_rows(path: Path, columns: Sequence[str], rows: list[dict]) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in columns])


def write_results(results: list[dict], timings: list[dict], out_dir: Union[str, Path]) -> tuple[Path, Path]:
    """Write results.csv (deterministic) and timings.csv (wall clock)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results_path = out_dir / "results.csv"
    timings_path = out_dir / "timings.csv"
    _write_rows(results_path, RESULT_COLUMNS, results)
    _write_rows(timings_path, TIMING_COLUMNS, timings)
    return results_path, timings_path


def _aggregate(rows: list[dict]) -> list[dict]:
    """Mean and population std of accuracy per (algorithm, axis value)."""
    groups: dict[tuple, list[float]] = {}
    order: list[tuple] = []
    for row in rows:
        if row["accuracy"] is None or row["accuracy"] == "":
            continue
        key = (str(row["algorithm"]), row["axis"])
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(float(row["accuracy"]))
    return [
        {
            "algorithm": alg,
            "axis": axis,
            "mean": float(np.mean(groups[(alg, axis)])),
            "std": float(np.std(groups[(alg, axis)])),
            "epochs": len(groups[(alg, axis)]),
        }
        for alg, axis in order
    ]


def emit_plot(rows: list[dict], kind: str, path: Union[str, Path]) -> Path:
    """Render mean +/- std accuracy per algorithm as a self-contained SVG.

    kind is "line" (numeric axis) or "bar". The aggregated table is written
    alongside as <stem>.csv; the SVG is a convenience view of it.
    """
    if kind not in ("line", "bar"):
        raise ValueError(f"plot kind must be 'line' or 'bar', got {kind!r}")
    agg = _aggregate(rows)
    if not agg:
        raise ValueError("nothing to plot: no rows with accuracy values")
    path = Path(path)

    series: dict[str, list[dict]] = {}
    for entry in agg:
        series.setdefault(entry["algorithm"], []).append(entry)
    axis_values = sorted({e["axis"] for e in agg}, key=lambda v: (0, float(v)) if _is_number(v) else (1, str(v)))
    numeric = all(_is_number(v) for v in axis_values) and kind == "line"

    width, height = 640, 420
    left, right, top, bottom = 60, 170, 30, 50
    plot_w, plot_h = width - left - right, height - top - bottom

    if numeric:
        xs = [float(v) for v in axis_values]
        lo, hi = min(xs), max(xs)
        span = hi - lo if hi > lo else 1.0
        xpos = {v: left + (float(v) - lo) / span * plot_w for v in axis_values}
    else:
        step = plot_w / len(axis_values)
        xpos = {v: left + step * (i + 0.5) for i, v in enumerate(axis_values)}

    tops = [e["mean"] + e["std"] for e in agg]
    lows = [e["mean"] - e["std"] for e in agg]
    y_hi = max(tops + [1e-9])
    y_lo = min(lows + [0.0])
    pad = 0.05 * (y_hi - y_lo if y_hi > y_lo else 1.0)
    y_hi += pad
    y_lo -= pad

    def ypix(v: float) -> float:
        return top + (y_hi - v) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" y2="{top + plot_h}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" stroke="black"/>',
    ]
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        val = y_lo + frac * (y_hi - y_lo)
        y = ypix(val)
        parts.append(f'<line x1="{left - 4}" y1="{y:.2f}" x2="{left}" y2="{y:.2f}" stroke="black"/>')
        parts.append(
            f'<text x="{left - 8}" y="{y + 4:.2f}" font-size="11" text-anchor="end">{val:.3g}</text>'
        )
    for v in axis_values:
        x = xpos[v]
        parts.append(
            f'<line x1="{x:.2f}" y1="{top + plot_h}" x2="{x:.2f}" y2="{top + plot_h + 4}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{top + plot_h + 18}" font-size="11" text-anchor="middle">{_fmt(v)}</text>'
        )

    names = list(series)
    for s_index, name in enumerate(names):
        color = _PALETTE[s_index % len(_PALETTE)]
        entries = sorted(series[name], key=lambda e: xpos[e["axis"]])
        if kind == "line":
            pts = " ".join(f"{xpos[e['axis']]:.2f},{ypix(e['mean']):.2f}" for e in entries)
            parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
            for e in entries:
                x = xpos[e["axis"]]
                parts.append(
                    f'<circle cx="{x:.2f}" cy="{ypix(e["mean"]):.2f}" r="2.5" fill="{color}"/>'
                )
                _error_bar(parts, x, ypix(e["mean"] - e["std"]), ypix(e["mean"] + e["std"]), color)
        else:
            group = plot_w / len(axis_values)
            bar_w = 0.8 * group / len(names)
            for e in entries:
                x = xpos[e["axis"]] - 0.4 * group + s_index * bar_w
                y = ypix(max(e["mean"], y_lo))
                base = ypix(max(0.0, y_lo))
                parts.append(
                    f'<rect x="{x:.2f}" y="{min(y, base):.2f}" width="{bar_w:.2f}" '
                    f'height="{abs(base - y):.2f}" fill="{color}"/>'
                )
                _error_bar(parts, x + bar_w / 2, ypix(e["mean"] - e["std"]), ypix(e["mean"] + e["std"]), "black")
        ly = top + 14 + 16 * s_index
        lx = left + plot_w + 12
        parts.append(f'<rect x="{lx}" y="{ly - 9}" width="10" height="10" fill="{color}"/>')
        parts.append(f'<text x="{lx + 14}" y="{ly}" font-size="12">{name}</text>')

    parts.append(
        f'<text x="{left + plot_w / 2:.0f}" y="{height - 12}" font-size="12" text-anchor="middle">axis</text>'
    )
    parts.append(
        f'<text x="16" y="{top + plot_h / 2:.0f}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + plot_h / 2:.0f})">accuracy</text>'
    )
    parts.append("</svg>")
    path.write_text("\n".join(parts) + "\n", encoding="utf-8")

    summary_path = path.with_suffix(".csv")
    with summary_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["axis", "algorithm", "mean_accuracy", "std_accuracy", "epochs"])
        for e in agg:
            writer.writerow([_fmt(e["axis"]), e["algorithm"], _fmt(e["mean"]), _fmt(e["std"]), e["epochs"]])
    return path


def _error_bar(parts: list, x: float, y_low: float, y_high: float, color: str) -> None:
    parts.append(f'<line x1="{x:.2f}" y1="{y_low:.2f}" x2="{x:.2f}" y2="{y_high:.2f}" stroke="{color}"/>')
    for y in (y_low, y_high):
        parts.append(f'<line x1="{x - 3:.2f}" y1="{y:.2f}" x2="{x + 3:.2f}" y2="{y:.2f}" stroke="{color}"/>')


def _is_number(v) -> bool:
    try:
        float(v)
        return True
    except (TypeError, ValueError):
        return False
