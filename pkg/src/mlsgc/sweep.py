"""Parameter sweeps: noise grids and weight lines with CSV/SVG artifacts.

The CSV file is the ground truth of a sweep; SVG figures are derived from
it. Cells are independent work items, so a bounded process pool can run
them in any order: every cell derives its seeds from the sweep seed root
and its own coordinates, never from scheduling order.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import svgplot
from .cluster import detectability, multilayer_sgc
from .generate import CorrelatedTwoLayerParams, generate_correlated_two_layer
from .phase import NoiseSpec, classify_regime, critical_weight, phase_report

NOISE_CSV_FIELDS = (
    "p1",
    "p2",
    "w1",
    "detect_mean",
    "detect_std",
    "t_w",
    "t_lb",
    "t_ub",
    "universal_lb",
    "regime",
    "reps",
)
WEIGHT_CSV_FIELDS = NOISE_CSV_FIELDS + ("w1_star_pred",)
GEOMEAN_CSV_FIELDS = ("p1", "p2", "detect_geomean", "universal_lb", "n_weights")

# Fields kept as text or integers when a sweep CSV is read back.
_STR_FIELDS = frozenset({"regime"})
_INT_FIELDS = frozenset({"reps", "n_weights"})


def float_range(lo: float, hi: float, step: float) -> tuple[float, ...]:
    """Inclusive grid lo, lo+step, ..., hi with rounding to kill drift."""
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    if hi < lo:
        raise ValueError(f"empty range [{lo}, {hi}]")
    count = int(math.floor((hi - lo) / step + 0.5)) + 1
    vals = [round(lo + i * step, 10) for i in range(count)]
    return tuple(v for v in vals if lo - 1e-12 <= v <= hi + 1e-12)


def cell_seeds(seed_root: int, coords: tuple[int, ...], rep: int) -> tuple[int, int]:
    """Derive the (generator, kmeans) seed pair for one sweep cell.

    SeedSequence hashing of (root, coordinates, repetition) makes the
    streams independent of worker scheduling and of each other.
    """
    gen_ss, km_ss = np.random.SeedSequence((seed_root, *coords, rep)).spawn(2)
    return int(gen_ss.generate_state(1)[0]), int(km_ss.generate_state(1)[0])


def resolve_workers(requested: int | None = None) -> int:
    """Worker count for a sweep; MLSGC_THREADS caps whatever is requested."""
    workers = requested if requested is not None else (os.cpu_count() or 1)
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {requested}")
    cap = os.environ.get("MLSGC_THREADS")
    if cap is not None:
        try:
            cap_n = int(cap)
        except ValueError:
            raise ValueError(f"MLSGC_THREADS must be an integer, got {cap!r}") from None
        if cap_n < 1:
            raise ValueError(f"MLSGC_THREADS must be >= 1, got {cap_n}")
        workers = min(workers, cap_n)
    return workers


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: a (p1, p2) noise grid or a w1 weight line.

    Noise grids evaluate every (p1, p2, w1) in the cross product of
    p_values x p_values x w1_values. Weight lines fix (p1, p2) and walk
    w1_values, reusing one generated graph per repetition across the whole
    line so the curve is paired.
    """

    mode: str
    sizes: tuple[int, ...] = (200, 200, 200)
    q11: float = 0.3
    q10: float = 0.2
    q01: float = 0.1
    q00: float = 0.4
    p_values: tuple[float, ...] = ()
    w1_values: tuple[float, ...] = ()
    p1: float | None = None
    p2: float | None = None
    reps: int = 10
    seed_root: int = 0
    restarts: int = 10
    workers: int | None = None
    csv_path: str | None = None
    svg_path: str | None = None

    def __post_init__(self):
        if self.mode not in ("noise-grid", "weight-line"):
            raise ValueError(f"unknown sweep mode {self.mode!r}")
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        object.__setattr__(self, "p_values", tuple(float(p) for p in self.p_values))
        object.__setattr__(self, "w1_values", tuple(float(v) for v in self.w1_values))
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if not self.w1_values:
            raise ValueError("w1_values must be non-empty")
        for name, vals in (("p_values", self.p_values), ("w1_values", self.w1_values)):
            for v in vals:
                if not 0.0 <= v <= 1.0:
                    raise ValueError(f"{name} entry {v} outside [0, 1]")
        if self.mode == "noise-grid":
            if not self.p_values:
                raise ValueError("noise-grid sweep needs p_values")
        else:
            if self.p1 is None or self.p2 is None:
                raise ValueError("weight-line sweep needs fixed p1 and p2")
            for name, p in (("p1", self.p1), ("p2", self.p2)):
                if not 0.0 <= p <= 1.0:
                    raise ValueError(f"{name}={p} outside [0, 1]")

    def generator_params(self, p1: float, p2: float, seed: int) -> CorrelatedTwoLayerParams:
        return CorrelatedTwoLayerParams(
            sizes=self.sizes,
            q11=self.q11,
            q10=self.q10,
            q01=self.q01,
            q00=self.q00,
            p1=p1,
            p2=p2,
            seed=seed,
        )


def _noise_cell(task: tuple[SweepSpec, int, int, int]) -> tuple[tuple[int, int, int], dict]:
    spec, ip1, ip2, iw1 = task
    p1 = spec.p_values[ip1]
    p2 = spec.p_values[ip2]
    w1 = spec.w1_values[iw1]
    w = (w1, 1.0 - w1)
    noise = NoiseSpec(p=(p1, p2))
    accs, t_ws, t_lbs, t_ubs, u_lbs = [], [], [], [], []
    for rep in range(spec.reps):
        gen_seed, km_seed = cell_seeds(spec.seed_root, (ip1, ip2, iw1), rep)
        g, truth = generate_correlated_two_layer(spec.generator_params(p1, p2, gen_seed))
        labels, _ = multilayer_sgc(g, w, truth.K, seed=km_seed, restarts=spec.restarts)
        accs.append(detectability(labels, truth))
        report = phase_report(g, truth, w, noise)
        t_ws.append(report.t_w)
        t_lbs.append(report.t_lb_w)
        t_ubs.append(report.t_ub_w)
        u_lbs.append(report.universal_lb)
    t_w = float(np.mean(t_ws))
    t_lb = float(np.mean(t_lbs))
    t_ub = float(np.mean(t_ubs))
    row = {
        "p1": p1,
        "p2": p2,
        "w1": w1,
        "detect_mean": float(np.mean(accs)),
        "detect_std": float(np.std(accs)),
        "t_w": t_w,
        "t_lb": t_lb,
        "t_ub": t_ub,
        "universal_lb": float(np.mean(u_lbs)),
        "regime": classify_regime(t_w, t_lb, t_ub),
        "reps": spec.reps,
    }
    return (iw1, ip1, ip2), row


def _weight_rep(task: tuple[SweepSpec, int]) -> tuple[int, dict]:
    spec, rep = task
    gen_seed, _ = cell_seeds(spec.seed_root, (0,), rep)
    g, truth = generate_correlated_two_layer(
        spec.generator_params(spec.p1, spec.p2, gen_seed)
    )
    noise = NoiseSpec(p=(spec.p1, spec.p2))
    out = {"acc": [], "t_w": [], "t_lb": [], "t_ub": [], "u_lb": []}
    for iw1, w1 in enumerate(spec.w1_values):
        _, km_seed = cell_seeds(spec.seed_root, (iw1,), rep)
        w = (w1, 1.0 - w1)
        labels, _ = multilayer_sgc(g, w, truth.K, seed=km_seed, restarts=spec.restarts)
        out["acc"].append(detectability(labels, truth))
        report = phase_report(g, truth, w, noise)
        out["t_w"].append(report.t_w)
        out["t_lb"].append(report.t_lb_w)
        out["t_ub"].append(report.t_ub_w)
        out["u_lb"].append(report.universal_lb)
    cw = critical_weight(g, truth, spec.p1, spec.p2)
    out["w1_star"] = cw.w1
    return rep, out


def _run_tasks(tasks, worker, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, tasks))


def run_noise_sweep(spec: SweepSpec) -> list[dict]:
    """Run a (p1, p2, w1) grid sweep; returns rows, writes CSV/SVG if asked.

    Rows are ordered by (w1, p1, p2) so each w1 panel is contiguous. Per
    cell: mean/std detectability over repetitions, the mean realized phase
    bounds, and the regime verdict from the mean values.
    """
    if spec.mode != "noise-grid":
        raise ValueError(f"expected a noise-grid spec, got mode {spec.mode!r}")
    workers = resolve_workers(spec.workers)
    tasks = [
        (spec, ip1, ip2, iw1)
        for iw1 in range(len(spec.w1_values))
        for ip1 in range(len(spec.p_values))
        for ip2 in range(len(spec.p_values))
    ]
    keyed = _run_tasks(tasks, _noise_cell, workers)
    keyed.sort(key=lambda kr: kr[0])
    rows = [row for _, row in keyed]
    if spec.csv_path:
        write_sweep_csv(rows, NOISE_CSV_FIELDS, spec.csv_path)
    if spec.svg_path:
        svgplot.render_noise_heatmap(rows, spec.svg_path)
    return rows


def run_weight_sweep(spec: SweepSpec) -> list[dict]:
    """Sweep w1 at fixed (p1, p2); returns one row per w1 value.

    Each repetition generates one graph and evaluates every w1 on it, so
    the curve is paired across the line. The predicted critical weight is
    solved per repetition on the realized graph; the reported value is the
    mean over repetitions where a root exists (blank otherwise).
    """
    if spec.mode != "weight-line":
        raise ValueError(f"expected a weight-line spec, got mode {spec.mode!r}")
    workers = resolve_workers(spec.workers)
    tasks = [(spec, rep) for rep in range(spec.reps)]
    keyed = _run_tasks(tasks, _weight_rep, workers)
    keyed.sort(key=lambda kr: kr[0])
    per_rep = [out for _, out in keyed]
    roots = [out["w1_star"] for out in per_rep if out["w1_star"] is not None]
    w1_star = float(np.mean(roots)) if roots else None
    rows = []
    for iw1, w1 in enumerate(spec.w1_values):
        accs = [out["acc"][iw1] for out in per_rep]
        t_w = float(np.mean([out["t_w"][iw1] for out in per_rep]))
        t_lb = float(np.mean([out["t_lb"][iw1] for out in per_rep]))
        t_ub = float(np.mean([out["t_ub"][iw1] for out in per_rep]))
        rows.append(
            {
                "p1": spec.p1,
                "p2": spec.p2,
                "w1": w1,
                "detect_mean": float(np.mean(accs)),
                "detect_std": float(np.std(accs)),
                "t_w": t_w,
                "t_lb": t_lb,
                "t_ub": t_ub,
                "universal_lb": float(np.mean([out["u_lb"][iw1] for out in per_rep])),
                "regime": classify_regime(t_w, t_lb, t_ub),
                "reps": spec.reps,
                "w1_star_pred": w1_star,
            }
        )
    if spec.csv_path:
        write_sweep_csv(rows, WEIGHT_CSV_FIELDS, spec.csv_path)
    if spec.svg_path:
        svgplot.render_weight_curve(rows, spec.svg_path)
    return rows


def geometric_mean_rows(rows: list[dict]) -> list[dict]:
    """Collapse noise-sweep rows to one per (p1, p2) by geometric mean.

    Reproduces the summary panel that aggregates detectability across the
    weight vectors: exp(mean(log detect_mean)) over every w1 present for
    the cell. Detectability is bounded below by 1/K, so the log is safe.
    """
    groups: dict[tuple[float, float], list[dict]] = {}
    for row in rows:
        groups.setdefault((row["p1"], row["p2"]), []).append(row)
    out = []
    for (p1, p2) in sorted(groups):
        cell = groups[(p1, p2)]
        vals = [r["detect_mean"] for r in cell]
        out.append(
            {
                "p1": p1,
                "p2": p2,
                "detect_geomean": float(np.exp(np.mean(np.log(vals)))),
                "universal_lb": float(np.mean([r["universal_lb"] for r in cell])),
                "n_weights": len(cell),
            }
        )
    return out


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    # repr round-trips floats exactly, which keeps derived SVGs identical
    # whether rendered from memory or from a re-read CSV.
    return repr(float(value))


def write_sweep_csv(rows: list[dict], fields: tuple[str, ...], path) -> None:
    """Write rows under the documented schema; float cells use exact repr."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fields)
        for row in rows:
            writer.writerow([_format_cell(row.get(f)) for f in fields])


def read_sweep_csv(path) -> list[dict]:
    """Read a sweep CSV back into typed rows (inverse of write_sweep_csv)."""
    rows = []
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for raw in reader:
            row = {}
            for key, text in raw.items():
                if text == "" or text is None:
                    row[key] = None
                elif key in _STR_FIELDS:
                    row[key] = text
                elif key in _INT_FIELDS:
                    row[key] = int(text)
                else:
                    row[key] = float(text)
            rows.append(row)
    return rows


def render_from_csv(csv_path, svg_path, kind: str) -> str:
    """Regenerate an SVG from a sweep CSV; kind selects the figure."""
    rows = read_sweep_csv(csv_path)
    if kind == "noise":
        return svgplot.render_noise_heatmap(rows, svg_path)
    if kind == "weight":
        return svgplot.render_weight_curve(rows, svg_path)
    if kind == "geomean":
        return svgplot.render_geomean_heatmap(rows, svg_path)
    raise ValueError(f"unknown figure kind {kind!r}")


def write_geomean_outputs(rows: list[dict], csv_path=None, svg_path=None) -> list[dict]:
    """Post-process noise rows to the geometric-mean summary artifacts."""
    gm = geometric_mean_rows(rows)
    if csv_path:
        write_sweep_csv(gm, GEOMEAN_CSV_FIELDS, csv_path)
    if svg_path:
        svgplot.render_geomean_heatmap(gm, svg_path)
    return gm
