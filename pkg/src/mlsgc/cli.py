"""Command-line interface: generators, clustering, bounds, and sweeps.

Every flag of every subcommand can also be supplied through a JSON config
file (--config); explicit flags override config values, which override the
built-in defaults. Exit codes: 0 success, 1 usage error, 2 numerical
failure. The MLSGC_THREADS environment variable caps sweep worker pools.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys

import numpy as np

from . import __version__
from .cluster import detectability, multilayer_sgc
from .generate import (
    CorrelatedTwoLayerParams,
    RIMParams,
    generate_correlated_two_layer,
    generate_rim,
    identical_noise_twin,
)
from .graph import GraphError, aggregate, laplacian
from .io import (
    GraphFormatError,
    read_graph,
    read_labels,
    write_graph,
    write_labels,
    write_sidecar,
)
from .phase import (
    DegenerateDeltaError,
    NoiseSpec,
    aggregated_noise,
    c_star,
    critical_bounds,
    layerwise_c_star_gap,
    phase_report,
    sin_theta_min_bound,
    sin_theta_upper_bound,
    universal_lower_bound,
)
from .spectral import EigensolverError, embedding, principal_angles
from .sweep import (
    SweepSpec,
    float_range,
    run_noise_sweep,
    run_weight_sweep,
    write_geomean_outputs,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


class UsageError(Exception):
    """Bad flags, bad config, or unreadable inputs; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; the contract here is 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _as_float_list(value, name: str) -> tuple[float, ...]:
    if isinstance(value, str):
        parts = [s.strip() for s in value.split(",") if s.strip()]
        try:
            return tuple(float(s) for s in parts)
        except ValueError:
            raise UsageError(f"{name}: cannot parse {value!r} as comma-separated floats")
    if isinstance(value, (list, tuple)):
        return tuple(float(x) for x in value)
    raise UsageError(f"{name}: expected a comma-separated string or list")


def _as_int_list(value, name: str) -> tuple[int, ...]:
    if isinstance(value, str):
        parts = [s.strip() for s in value.split(",") if s.strip()]
        try:
            return tuple(int(s) for s in parts)
        except ValueError:
            raise UsageError(f"{name}: cannot parse {value!r} as comma-separated ints")
    if isinstance(value, (list, tuple)):
        return tuple(int(x) for x in value)
    raise UsageError(f"{name}: expected a comma-separated string or list")


def _noise_layers(value, name: str):
    """Per-layer noise entries: scalars, or nested lists for block matrices."""
    if isinstance(value, str):
        return _as_float_list(value, name)
    if isinstance(value, (list, tuple)):
        return tuple(
            np.asarray(v, dtype=float) if isinstance(v, (list, tuple)) else float(v)
            for v in value
        )
    raise UsageError(f"{name}: expected a comma-separated string or list")


def _signal_spec(value, K: int, name: str) -> tuple:
    """Per-layer signal: a density per layer, or per-cluster lists."""
    if isinstance(value, str):
        return tuple((d,) * K for d in _as_float_list(value, name))
    if isinstance(value, (list, tuple)):
        layers = []
        for entry in value:
            if isinstance(entry, (list, tuple)):
                layers.append(tuple(entry))
            else:
                layers.append((float(entry),) * K)
        return tuple(layers)
    raise UsageError(f"{name}: expected densities per layer")


def _require(merged: dict, *keys: str) -> None:
    missing = [k for k in keys if merged.get(k) is None]
    if missing:
        flags = ", ".join("--" + k.replace("_", "-") for k in missing)
        raise UsageError(f"missing required value(s): {flags}")


def _merge_config(args: argparse.Namespace, defaults: dict) -> dict:
    merged = dict(defaults)
    cfg_path = getattr(args, "config", None)
    if cfg_path:
        try:
            with open(cfg_path, "r", encoding="utf-8") as fh:
                cfg = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read config {cfg_path}: {exc}")
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {cfg_path} is not valid JSON: {exc}")
        if not isinstance(cfg, dict):
            raise UsageError(f"config {cfg_path} must hold a JSON object")
        unknown = sorted(set(cfg) - set(defaults))
        if unknown:
            raise UsageError(f"config keys not recognized: {', '.join(unknown)}")
        merged.update(cfg)
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _emit(payload: dict, out_path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


# ---------------------------------------------------------------------------
# Subcommand handlers. Each receives the merged flag/config/default dict.

_GENERATE_DEFAULTS = {
    "model": "correlated",
    "sizes": "200,200,200",
    "q11": 0.3,
    "q10": 0.2,
    "q01": 0.1,
    "q00": 0.4,
    "p1": 0.1,
    "p2": 0.1,
    "signal": None,
    "noise_p": None,
    "noise_wbar": None,
    "weight_mode": "none",
    "seed": 0,
    "out": None,
    "labels_out": None,
    "sidecar": None,
}


def _cmd_generate(m: dict) -> int:
    _require(m, "out")
    sizes = _as_int_list(m["sizes"], "--sizes")
    if m["model"] == "correlated":
        params = CorrelatedTwoLayerParams(
            sizes=sizes,
            q11=float(m["q11"]),
            q10=float(m["q10"]),
            q01=float(m["q01"]),
            q00=float(m["q00"]),
            p1=float(m["p1"]),
            p2=float(m["p2"]),
            seed=int(m["seed"]),
        )
        g, truth = generate_correlated_two_layer(params)
        sidecar = params.to_dict()
    elif m["model"] == "rim":
        _require(m, "signal", "noise_p")
        noise = NoiseSpec(
            p=_noise_layers(m["noise_p"], "--noise-p"),
            wbar=None
            if m["noise_wbar"] is None
            else _noise_layers(m["noise_wbar"], "--noise-wbar"),
        )
        mode = None if m["weight_mode"] in (None, "none") else m["weight_mode"]
        params = RIMParams(
            sizes=sizes,
            signal=_signal_spec(m["signal"], len(sizes), "--signal"),
            noise=noise,
            weight_mode=mode,
            seed=int(m["seed"]),
        )
        g, truth = generate_rim(params)
        sidecar = params.to_dict()
    else:
        raise UsageError(f"unknown model {m['model']!r} (use correlated or rim)")
    write_graph(g, m["out"])
    print(f"wrote graph ({g.n} nodes, {g.L} layers) to {m['out']}")
    if m["labels_out"]:
        write_labels(truth.labels, m["labels_out"])
        print(f"wrote labels to {m['labels_out']}")
    if m["sidecar"]:
        write_sidecar(sidecar, m["sidecar"])
        print(f"wrote sidecar to {m['sidecar']}")
    return EXIT_OK


_CLUSTER_DEFAULTS = {
    "graph": None,
    "w": None,
    "k": None,
    "seed": 0,
    "restarts": 10,
    "out": None,
    "truth": None,
    "noise_p": None,
    "noise_wbar": None,
    "report": None,
}


def _cmd_cluster(m: dict) -> int:
    _require(m, "graph", "w", "k", "out")
    g = read_graph(m["graph"])
    w = _as_float_list(m["w"], "--w")
    K = int(m["k"])
    labels, _ = multilayer_sgc(g, w, K, seed=int(m["seed"]), restarts=int(m["restarts"]))
    write_labels(labels, m["out"])
    print(f"wrote predicted labels to {m['out']}")
    if m["truth"] is None:
        return EXIT_OK
    truth = read_labels(m["truth"])
    payload: dict = {"detectability": detectability(labels, truth)}
    if m["noise_p"] is not None:
        noise = NoiseSpec(
            p=_noise_layers(m["noise_p"], "--noise-p"),
            wbar=None
            if m["noise_wbar"] is None
            else _noise_layers(m["noise_wbar"], "--noise-wbar"),
        )
        payload.update(phase_report(g, truth, w, noise).to_dict())
    else:
        t_lb, t_ub = critical_bounds(g, truth, w)
        payload.update(
            {
                "t_lb_w": t_lb,
                "t_ub_w": t_ub,
                "universal_lb": universal_lower_bound(g, truth),
                "c_star_w": c_star(g, truth, w),
            }
        )
    _emit(payload, m["report"])
    return EXIT_OK


_BOUNDS_DEFAULTS = {
    "graph": None,
    "truth": None,
    "w": None,
    "noise_p": None,
    "noise_wbar": None,
    "out": None,
}


def _cmd_bounds(m: dict) -> int:
    _require(m, "graph", "truth", "w")
    g = read_graph(m["graph"])
    truth = read_labels(m["truth"])
    w = _as_float_list(m["w"], "--w")
    if m["noise_p"] is not None:
        noise = NoiseSpec(
            p=_noise_layers(m["noise_p"], "--noise-p"),
            wbar=None
            if m["noise_wbar"] is None
            else _noise_layers(m["noise_wbar"], "--noise-wbar"),
        )
        payload = phase_report(g, truth, w, noise).to_dict()
    else:
        t_lb, t_ub = critical_bounds(g, truth, w)
        payload = {
            "t_lb_w": t_lb,
            "t_ub_w": t_ub,
            "universal_lb": universal_lower_bound(g, truth),
            "c_star_w": c_star(g, truth, w),
        }
    payload["layerwise_c_star_gap"] = layerwise_c_star_gap(g, truth, w)
    _emit(payload, m["out"])
    return EXIT_OK


_SWEEP_NOISE_DEFAULTS = {
    "sizes": "200,200,200",
    "q11": 0.3,
    "q10": 0.2,
    "q01": 0.1,
    "q00": 0.4,
    "p_min": 0.0,
    "p_max": 1.0,
    "p_step": 0.05,
    "w1": "0,0.5,1",
    "reps": 10,
    "seed_root": 0,
    "restarts": 10,
    "workers": None,
    "csv": None,
    "svg": None,
    "geomean_csv": None,
    "geomean_svg": None,
}


def _cmd_sweep_noise(m: dict) -> int:
    _require(m, "csv")
    spec = SweepSpec(
        mode="noise-grid",
        sizes=_as_int_list(m["sizes"], "--sizes"),
        q11=float(m["q11"]),
        q10=float(m["q10"]),
        q01=float(m["q01"]),
        q00=float(m["q00"]),
        p_values=float_range(float(m["p_min"]), float(m["p_max"]), float(m["p_step"])),
        w1_values=_as_float_list(m["w1"], "--w1"),
        reps=int(m["reps"]),
        seed_root=int(m["seed_root"]),
        restarts=int(m["restarts"]),
        workers=None if m["workers"] is None else int(m["workers"]),
        csv_path=m["csv"],
        svg_path=m["svg"],
    )
    rows = run_noise_sweep(spec)
    print(f"wrote {len(rows)} noise-sweep rows to {m['csv']}")
    if m["svg"]:
        print(f"wrote heatmap to {m['svg']}")
    if m["geomean_csv"] or m["geomean_svg"]:
        write_geomean_outputs(rows, m["geomean_csv"], m["geomean_svg"])
        for key in ("geomean_csv", "geomean_svg"):
            if m[key]:
                print(f"wrote geometric-mean artifact to {m[key]}")
    return EXIT_OK


_SWEEP_WEIGHT_DEFAULTS = {
    "sizes": "200,200,200",
    "q11": 0.3,
    "q10": 0.2,
    "q01": 0.1,
    "q00": 0.4,
    "p1": None,
    "p2": None,
    "w1_min": 0.0,
    "w1_max": 1.0,
    "w1_step": 0.1,
    "reps": 10,
    "seed_root": 0,
    "restarts": 10,
    "workers": None,
    "csv": None,
    "svg": None,
}


def _cmd_sweep_weight(m: dict) -> int:
    _require(m, "p1", "p2", "csv")
    spec = SweepSpec(
        mode="weight-line",
        sizes=_as_int_list(m["sizes"], "--sizes"),
        q11=float(m["q11"]),
        q10=float(m["q10"]),
        q01=float(m["q01"]),
        q00=float(m["q00"]),
        w1_values=float_range(float(m["w1_min"]), float(m["w1_max"]), float(m["w1_step"])),
        p1=float(m["p1"]),
        p2=float(m["p2"]),
        reps=int(m["reps"]),
        seed_root=int(m["seed_root"]),
        restarts=int(m["restarts"]),
        workers=None if m["workers"] is None else int(m["workers"]),
        csv_path=m["csv"],
        svg_path=m["svg"],
    )
    rows = run_weight_sweep(spec)
    print(f"wrote {len(rows)} weight-sweep rows to {m['csv']}")
    if m["svg"]:
        print(f"wrote curve to {m['svg']}")
    return EXIT_OK


_SINTHETA_DEFAULTS = {
    "sizes": "200,200,200",
    "signal": "0.8,0.8",
    "noise_p": None,
    "noise_wbar": None,
    "weight_mode": "none",
    "w": None,
    "seed": 0,
    "grid_points": 50,
    "out": None,
}


def _cmd_sintheta(m: dict) -> int:
    _require(m, "noise_p", "w")
    sizes = _as_int_list(m["sizes"], "--sizes")
    noise = NoiseSpec(
        p=_noise_layers(m["noise_p"], "--noise-p"),
        wbar=None
        if m["noise_wbar"] is None
        else _noise_layers(m["noise_wbar"], "--noise-wbar"),
    )
    mode = None if m["weight_mode"] in (None, "none") else m["weight_mode"]
    params = RIMParams(
        sizes=sizes,
        signal=_signal_spec(m["signal"], len(sizes), "--signal"),
        noise=noise,
        weight_mode=mode,
        seed=int(m["seed"]),
    )
    g, truth = generate_rim(params)
    w = _as_float_list(m["w"], "--w")
    K = truth.K
    t_w, t_max_w = aggregated_noise(noise, w)
    L_w = laplacian(aggregate(g, w))
    counter = itertools.count()
    seed = int(m["seed"])

    def twin_laplacian(t: float) -> np.ndarray:
        twin_seed = int(np.random.SeedSequence((seed, 1, next(counter))).generate_state(1)[0])
        twin = identical_noise_twin(g, truth, t, seed=twin_seed)
        return laplacian(aggregate(twin, w))

    L_tilde = twin_laplacian(t_w)
    bound = sin_theta_upper_bound(L_w, L_tilde, t_w, K)
    empirical = principal_angles(embedding(L_w, K).Y, embedding(L_tilde, K).Y)
    grid_points = int(m["grid_points"])
    if grid_points < 1:
        raise UsageError(f"--grid-points must be >= 1, got {grid_points}")
    t_grid = [t_max_w * i / grid_points for i in range(1, grid_points + 1)]
    min_bound, min_t = sin_theta_min_bound(L_w, K, twin_laplacian, t_grid=t_grid)
    payload = {
        "t_w": t_w,
        "t_max_w": t_max_w,
        "bound_at_t_w": bound,
        "empirical_sin_theta": empirical.sin_theta_frobenius,
        "holds": bool(empirical.sin_theta_frobenius <= bound),
        "min_bound": min_bound,
        "min_bound_t": min_t,
    }
    _emit(payload, m["out"])
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser assembly.


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON file mirroring this subcommand's flags")


def _add_q_flags(sub: argparse.ArgumentParser) -> None:
    for name in ("q11", "q10", "q01", "q00"):
        sub.add_argument(f"--{name}", type=float, help=f"correlated-model {name}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mlsgc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"mlsgc {__version__}")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = subs.add_parser("generate", help="write a synthetic multilayer graph")
    _add_common(p)
    p.add_argument("--model", choices=("correlated", "rim"))
    p.add_argument("--sizes", help="cluster sizes, e.g. 200,200,200")
    _add_q_flags(p)
    p.add_argument("--p1", type=float, help="layer-1 between-cluster edge probability")
    p.add_argument("--p2", type=float, help="layer-2 between-cluster edge probability")
    p.add_argument("--signal", help="rim: within-cluster density per layer, e.g. 0.8,0.7")
    p.add_argument("--noise-p", help="rim: between-cluster p per layer")
    p.add_argument("--noise-wbar", help="rim: mean noise edge weight per layer")
    p.add_argument("--weight-mode", choices=("none", "uniform", "exponential"))
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="graph TSV output path")
    p.add_argument("--labels-out", help="ground-truth labels output path")
    p.add_argument("--sidecar", help="JSON parameter sidecar output path")
    p.set_defaults(handler=_cmd_generate, defaults=_GENERATE_DEFAULTS)

    p = subs.add_parser("cluster", help="cluster a graph file and write labels")
    _add_common(p)
    p.add_argument("--graph", help="input graph TSV")
    p.add_argument("--w", help="layer weights, e.g. 0.5,0.5")
    p.add_argument("--k", type=int, help="number of clusters")
    p.add_argument("--seed", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--out", help="predicted labels output path")
    p.add_argument("--truth", help="ground-truth labels path (enables the report)")
    p.add_argument("--noise-p", help="noise p per layer for a full phase report")
    p.add_argument("--noise-wbar", help="mean noise weight per layer")
    p.add_argument("--report", help="write the JSON report here as well")
    p.set_defaults(handler=_cmd_cluster, defaults=_CLUSTER_DEFAULTS)

    p = subs.add_parser("bounds", help="phase bounds and report for a graph + labels")
    _add_common(p)
    p.add_argument("--graph", help="input graph TSV")
    p.add_argument("--truth", help="ground-truth labels path")
    p.add_argument("--w", help="layer weights")
    p.add_argument("--noise-p", help="noise p per layer (scalar per layer)")
    p.add_argument("--noise-wbar", help="mean noise weight per layer")
    p.add_argument("--out", help="write the JSON report here as well")
    p.set_defaults(handler=_cmd_bounds, defaults=_BOUNDS_DEFAULTS)

    p = subs.add_parser("sweep-noise", help="detectability over a (p1, p2) grid")
    _add_common(p)
    p.add_argument("--sizes")
    _add_q_flags(p)
    p.add_argument("--p-min", type=float)
    p.add_argument("--p-max", type=float)
    p.add_argument("--p-step", type=float)
    p.add_argument("--w1", help="w1 panel values, e.g. 0,0.5,1")
    p.add_argument("--reps", type=int)
    p.add_argument("--seed-root", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--csv", help="output CSV path")
    p.add_argument("--svg", help="output heatmap SVG path")
    p.add_argument("--geomean-csv", help="geometric-mean summary CSV path")
    p.add_argument("--geomean-svg", help="geometric-mean summary SVG path")
    p.set_defaults(handler=_cmd_sweep_noise, defaults=_SWEEP_NOISE_DEFAULTS)

    p = subs.add_parser("sweep-weight", help="detectability along the w1 line")
    _add_common(p)
    p.add_argument("--sizes")
    _add_q_flags(p)
    p.add_argument("--p1", type=float)
    p.add_argument("--p2", type=float)
    p.add_argument("--w1-min", type=float)
    p.add_argument("--w1-max", type=float)
    p.add_argument("--w1-step", type=float)
    p.add_argument("--reps", type=int)
    p.add_argument("--seed-root", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--csv", help="output CSV path")
    p.add_argument("--svg", help="output curve SVG path")
    p.set_defaults(handler=_cmd_sweep_weight, defaults=_SWEEP_WEIGHT_DEFAULTS)

    p = subs.add_parser("sintheta", help="subspace perturbation bound vs. empirical")
    _add_common(p)
    p.add_argument("--sizes")
    p.add_argument("--signal", help="within-cluster density per layer")
    p.add_argument("--noise-p", help="noise p per layer")
    p.add_argument("--noise-wbar", help="mean noise weight per layer")
    p.add_argument("--weight-mode", choices=("none", "uniform", "exponential"))
    p.add_argument("--w", help="layer weights")
    p.add_argument("--seed", type=int)
    p.add_argument("--grid-points", type=int, help="grid size for the minimized bound")
    p.add_argument("--out", help="write the JSON result here as well")
    p.set_defaults(handler=_cmd_sintheta, defaults=_SINTHETA_DEFAULTS)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        merged = _merge_config(args, args.defaults)
        return args.handler(merged)
    except UsageError as exc:
        print(f"mlsgc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EigensolverError, DegenerateDeltaError, np.linalg.LinAlgError) as exc:
        print(f"mlsgc: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (GraphError, GraphFormatError, ValueError, OSError) as exc:
        print(f"mlsgc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
