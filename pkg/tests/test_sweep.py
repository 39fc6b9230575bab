"""Parameter sweeps: seeding, scheduling, CSV schema, plots."""

import math
import os

import numpy as np
import pytest
from scipy import stats

from mlsgc import (
    GEOMEAN_CSV_FIELDS,
    NOISE_CSV_FIELDS,
    WEIGHT_CSV_FIELDS,
    SweepSpec,
    cell_seeds,
    float_range,
    geometric_mean_rows,
    read_sweep_csv,
    render_from_csv,
    resolve_workers,
    run_noise_sweep,
    run_weight_sweep,
    write_geomean_outputs,
    write_sweep_csv,
)


class TestFloatRange:
    def test_inclusive_endpoints(self):
        assert float_range(0.0, 1.0, 0.25) == (0.0, 0.25, 0.5, 0.75, 1.0)

    def test_rounding_avoids_drift(self):
        # Naive repeated addition of 0.1 drifts; the grid must hit the
        # boundary exactly.
        grid = float_range(0.0, 1.0, 0.1)
        assert len(grid) == 11
        assert grid[-1] == 1.0
        assert grid[3] == 0.3

    def test_single_point(self):
        assert float_range(0.5, 0.5, 0.1) == (0.5,)

    def test_bad_step(self):
        with pytest.raises(ValueError):
            float_range(0.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            float_range(1.0, 0.0, 0.1)


class TestCellSeeds:
    def test_deterministic(self):
        assert cell_seeds(7, (1, 2, 3), 4) == cell_seeds(7, (1, 2, 3), 4)

    def test_distinct_across_cells_and_reps(self):
        seen = set()
        for coords in [(0, 0, 0), (0, 0, 1), (1, 0, 0)]:
            for rep in range(3):
                pair = cell_seeds(0, coords, rep)
                assert pair not in seen
                seen.add(pair)

    def test_generator_and_kmeans_seeds_differ(self):
        a, b = cell_seeds(0, (0, 0, 0), 0)
        assert a != b


class TestResolveWorkers:
    def test_default_is_one_without_env(self, monkeypatch):
        monkeypatch.delenv("MLSGC_THREADS", raising=False)
        assert resolve_workers(None) >= 1

    def test_env_caps_request(self, monkeypatch):
        monkeypatch.setenv("MLSGC_THREADS", "2")
        assert resolve_workers(8) == 2

    def test_request_below_cap_kept(self, monkeypatch):
        monkeypatch.setenv("MLSGC_THREADS", "4")
        assert resolve_workers(2) == 2

    def test_invalid_env_raises(self, monkeypatch):
        monkeypatch.setenv("MLSGC_THREADS", "lots")
        with pytest.raises(ValueError):
            resolve_workers(2)
        monkeypatch.setenv("MLSGC_THREADS", "0")
        with pytest.raises(ValueError):
            resolve_workers(2)


def tiny_noise_spec(**over):
    base = dict(
        mode="noise-grid",
        sizes=(20, 20, 20),
        p_values=(0.05, 0.9),
        w1_values=(0.5,),
        reps=2,
        seed_root=0,
        restarts=3,
    )
    base.update(over)
    return SweepSpec(**base)


class TestNoiseSweep:
    def test_row_schema_and_order(self):
        rows = run_noise_sweep(tiny_noise_spec())
        assert len(rows) == 4  # 2 p1 x 2 p2 x 1 w1
        for row in rows:
            assert tuple(row.keys()) == NOISE_CSV_FIELDS
        keys = [(r["w1"], r["p1"], r["p2"]) for r in rows]
        assert keys == sorted(keys)

    def test_deterministic_rerun(self):
        a = run_noise_sweep(tiny_noise_spec())
        b = run_noise_sweep(tiny_noise_spec())
        assert a == b

    def test_worker_count_does_not_change_rows(self, monkeypatch):
        monkeypatch.setenv("MLSGC_THREADS", "2")
        serial = run_noise_sweep(tiny_noise_spec(workers=1))
        parallel = run_noise_sweep(tiny_noise_spec(workers=2))
        assert serial == parallel

    def test_detection_tracks_regime(self):
        # Corner cells of the acceptance-scale grid: easy corner detects,
        # noisy corner does not.
        spec = SweepSpec(
            mode="noise-grid",
            sizes=(200, 200, 200),
            p_values=(0.05, 0.9),
            w1_values=(0.5,),
            reps=3,
            seed_root=1,
        )
        rows = {(r["p1"], r["p2"]): r for r in run_noise_sweep(spec)}
        easy = rows[(0.05, 0.05)]
        hard = rows[(0.9, 0.9)]
        assert easy["regime"] == "below"
        assert easy["detect_mean"] >= 0.95
        assert hard["regime"] == "above"
        assert hard["detect_mean"] <= 0.5

    def test_detection_correlates_with_bound_margin(self):
        # Spearman correlation between detectability and the margin
        # t_lb - t_w across a small grid; monotone by the phase picture.
        spec = SweepSpec(
            mode="noise-grid",
            sizes=(60, 60, 60),
            p_values=(0.05, 0.3, 0.6, 0.9),
            w1_values=(0.5,),
            reps=3,
            seed_root=2,
        )
        rows = run_noise_sweep(spec)
        margin = [r["t_lb"] - r["t_w"] for r in rows]
        detect = [r["detect_mean"] for r in rows]
        rho, pval = stats.spearmanr(margin, detect)
        assert rho > 0.0
        assert pval < 0.01


class TestGeometricMean:
    def test_hand_oracle(self):
        rows = [
            {"p1": 0.1, "p2": 0.2, "w1": 0.0, "detect_mean": 0.4, "universal_lb": 0.3},
            {"p1": 0.1, "p2": 0.2, "w1": 1.0, "detect_mean": 0.9, "universal_lb": 0.3},
            {"p1": 0.5, "p2": 0.2, "w1": 0.0, "detect_mean": 0.5, "universal_lb": 0.2},
        ]
        out = geometric_mean_rows(rows)
        assert tuple(out[0].keys()) == GEOMEAN_CSV_FIELDS
        by_cell = {(r["p1"], r["p2"]): r for r in out}
        g = by_cell[(0.1, 0.2)]
        assert g["detect_geomean"] == pytest.approx(math.sqrt(0.4 * 0.9))
        assert g["n_weights"] == 2
        assert by_cell[(0.5, 0.2)]["detect_geomean"] == pytest.approx(0.5)

    def test_full_pipeline_from_sweep(self, tmp_path):
        rows = run_noise_sweep(tiny_noise_spec(w1_values=(0.0, 1.0)))
        geo = write_geomean_outputs(
            rows,
            csv_path=tmp_path / "geo.csv",
            svg_path=tmp_path / "geo.svg",
        )
        assert len(geo) == 4
        again = read_sweep_csv(tmp_path / "geo.csv")
        assert again == geo
        svg = (tmp_path / "geo.svg").read_text()
        assert svg.startswith("<?xml") and "<svg" in svg


class TestCsvRoundtrip:
    def test_noise_rows_roundtrip_exactly(self, tmp_path):
        rows = run_noise_sweep(tiny_noise_spec())
        path = tmp_path / "sweep.csv"
        write_sweep_csv(rows, NOISE_CSV_FIELDS, path)
        header = path.read_text().splitlines()[0]
        assert header == ",".join(NOISE_CSV_FIELDS)
        assert read_sweep_csv(path) == rows

    def test_svg_regeneration_is_byte_identical(self, tmp_path):
        rows = run_noise_sweep(tiny_noise_spec())
        path = tmp_path / "sweep.csv"
        write_sweep_csv(rows, NOISE_CSV_FIELDS, path)
        svg1 = render_from_csv(path, tmp_path / "a.svg", kind="noise")
        svg2 = render_from_csv(path, tmp_path / "b.svg", kind="noise")
        assert svg1 == svg2
        assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()
        assert svg1.startswith("<?xml") and "<svg" in svg1

    def test_unknown_kind_rejected(self, tmp_path):
        rows = run_noise_sweep(tiny_noise_spec())
        path = tmp_path / "sweep.csv"
        write_sweep_csv(rows, NOISE_CSV_FIELDS, path)
        with pytest.raises(ValueError):
            render_from_csv(path, tmp_path / "x.svg", kind="contour")


class TestWeightSweep:
    def make_spec(self, **over):
        base = dict(
            mode="weight-line",
            sizes=(30, 30, 30),
            p1=0.1,
            p2=0.5,
            w1_values=(0.0, 0.5, 1.0),
            reps=2,
            seed_root=0,
            restarts=3,
        )
        base.update(over)
        return SweepSpec(**base)

    def test_schema_and_prediction_column(self):
        rows = run_weight_sweep(self.make_spec())
        assert len(rows) == 3
        for row in rows:
            assert tuple(row.keys()) == WEIGHT_CSV_FIELDS
            assert row["p1"] == 0.1 and row["p2"] == 0.5
        # One prediction per sweep, repeated on every row.
        preds = {row["w1_star_pred"] for row in rows}
        assert len(preds) == 1

    def test_prediction_blank_when_absent(self, tmp_path):
        # Symmetric strong layers: no crossing, root is None, CSV cell
        # is empty, and the roundtrip preserves None.
        rows = run_weight_sweep(self.make_spec(p1=0.1, p2=0.1))
        assert all(row["w1_star_pred"] is None for row in rows)
        path = tmp_path / "w.csv"
        write_sweep_csv(rows, WEIGHT_CSV_FIELDS, path)
        line = path.read_text().splitlines()[1]
        assert line.endswith(",")
        assert read_sweep_csv(path) == rows

    def test_deterministic(self):
        assert run_weight_sweep(self.make_spec()) == run_weight_sweep(self.make_spec())

    def test_weight_svg_renders(self, tmp_path):
        rows = run_weight_sweep(self.make_spec())
        path = tmp_path / "w.csv"
        write_sweep_csv(rows, WEIGHT_CSV_FIELDS, path)
        svg = render_from_csv(path, tmp_path / "w.svg", kind="weight")
        assert svg.startswith("<?xml") and "<svg" in svg
