"""End-to-end CLI behavior via in-process main(argv)."""

import json

import numpy as np
import pytest

from mlsgc import (
    DegenerateDeltaError,
    MultilayerGraph,
    read_labels,
    write_graph,
    write_labels,
)
from mlsgc import cli


def run(argv):
    return cli.main([str(a) for a in argv])


def last_json(capsys):
    out = capsys.readouterr().out
    start = out.index("{")
    return json.loads(out[start:])


def two_clique_graph_file(path):
    m = 10
    W = np.zeros((2 * m, 2 * m))
    W[:m, :m] = 1.0
    W[m:, m:] = 1.0
    np.fill_diagonal(W, 0.0)
    write_graph(MultilayerGraph([W, W.copy()]), path)
    return path


def write_truth(path, labels):
    write_labels(labels, path)
    return path


class TestExitCodes:
    def test_no_subcommand_is_usage_error(self):
        assert run([]) == 1

    def test_unknown_subcommand(self):
        assert run(["frobnicate"]) == 1

    def test_missing_required_flag(self):
        assert run(["cluster"]) == 1  # --graph/--w/--k/--out all absent

    def test_missing_graph_file(self, tmp_path):
        rc = run(
            ["cluster", "--graph", tmp_path / "nope.tsv", "--w", "0.5,0.5",
             "--k", "2", "--out", tmp_path / "labels.txt"]
        )
        assert rc == 1

    def test_off_simplex_weights(self, tmp_path):
        graph = two_clique_graph_file(tmp_path / "g.tsv")
        rc = run(
            ["cluster", "--graph", graph, "--w", "0.5,0.6", "--k", "2",
             "--out", tmp_path / "labels.txt"]
        )
        assert rc == 1

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run(["--version"])
        assert exc.value.code == 0
        assert "mlsgc" in capsys.readouterr().out

    def test_numerical_failure_maps_to_two(self, tmp_path, monkeypatch):
        def boom(*args, **kwargs):
            raise DegenerateDeltaError("spectral gap vanished")

        monkeypatch.setattr(cli, "sin_theta_upper_bound", boom)
        rc = run(
            ["sintheta", "--sizes", "10,10", "--signal", "0.9,0.9",
             "--noise-p", "0.05,0.05", "--w", "0.5,0.5", "--grid-points", "2"]
        )
        assert rc == 2


class TestGenerate:
    def test_correlated_roundtrip_with_cluster(self, tmp_path, capsys):
        graph = tmp_path / "g.tsv"
        labels = tmp_path / "truth.txt"
        sidecar = tmp_path / "params.json"
        rc = run(
            ["generate", "--model", "correlated", "--sizes", "40,40,40",
             "--p1", "0.05", "--p2", "0.05", "--seed", "3",
             "--out", graph, "--labels-out", labels, "--sidecar", sidecar]
        )
        assert rc == 0
        params = json.loads(sidecar.read_text())
        assert params["model"] == "correlated-two-layer"
        assert params["sizes"] == [40, 40, 40]
        capsys.readouterr()

        pred = tmp_path / "pred.txt"
        rc = run(
            ["cluster", "--graph", graph, "--w", "0.5,0.5", "--k", "3",
             "--out", pred, "--truth", labels, "--noise-p", "0.05,0.05"]
        )
        assert rc == 0
        report = last_json(capsys)
        assert report["detectability"] >= 0.95
        assert report["regime"] == "below"
        assert len(read_labels(pred).labels) == 120

    def test_rim_generate(self, tmp_path):
        graph = tmp_path / "g.tsv"
        sidecar = tmp_path / "params.json"
        rc = run(
            ["generate", "--model", "rim", "--sizes", "20,20",
             "--signal", "0.8,0.6", "--noise-p", "0.1,0.2", "--seed", "1",
             "--out", graph, "--sidecar", sidecar]
        )
        assert rc == 0
        params = json.loads(sidecar.read_text())
        assert params["model"] == "rim"
        assert params["noise_p"] == [0.1, 0.2]


class TestCluster:
    def test_without_truth_no_report(self, tmp_path, capsys):
        graph = two_clique_graph_file(tmp_path / "g.tsv")
        pred = tmp_path / "pred.txt"
        rc = run(
            ["cluster", "--graph", graph, "--w", "0.5,0.5", "--k", "2",
             "--out", pred]
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert "{" not in out
        assert pred.exists()

    def test_two_cliques_detected_exactly(self, tmp_path, capsys):
        graph = two_clique_graph_file(tmp_path / "g.tsv")
        truth = write_truth(tmp_path / "truth.txt", [1] * 10 + [2] * 10)
        rc = run(
            ["cluster", "--graph", graph, "--w", "0.5,0.5", "--k", "2",
             "--out", tmp_path / "pred.txt", "--truth", truth]
        )
        assert rc == 0
        report = last_json(capsys)
        assert report["detectability"] == 1.0
        # Without --noise-p the report carries only noise-free quantities.
        assert "t_lb_w" in report and "regime" not in report

    def test_report_file_written(self, tmp_path, capsys):
        graph = two_clique_graph_file(tmp_path / "g.tsv")
        truth = write_truth(tmp_path / "truth.txt", [1] * 10 + [2] * 10)
        report_path = tmp_path / "report.json"
        rc = run(
            ["cluster", "--graph", graph, "--w", "0.5,0.5", "--k", "2",
             "--out", tmp_path / "pred.txt", "--truth", truth,
             "--noise-p", "0.0,0.0", "--report", report_path]
        )
        assert rc == 0
        on_disk = json.loads(report_path.read_text())
        assert on_disk == last_json(capsys)
        assert on_disk["regime"] == "below"


class TestBounds:
    def test_fields_present(self, tmp_path, capsys):
        graph = two_clique_graph_file(tmp_path / "g.tsv")
        truth = write_truth(tmp_path / "truth.txt", [1] * 10 + [2] * 10)
        rc = run(["bounds", "--graph", graph, "--truth", truth, "--w", "0.5,0.5"])
        assert rc == 0
        payload = last_json(capsys)
        for key in ("t_lb_w", "t_ub_w", "universal_lb", "c_star_w",
                    "layerwise_c_star_gap"):
            assert key in payload
        # Equal cliques of size 10: S_{2:2}/((K-1) n_max) = 10/10 = 1.
        assert payload["t_lb_w"] == pytest.approx(1.0)
        assert payload["t_ub_w"] == pytest.approx(1.0)

    def test_noise_enables_full_report(self, tmp_path, capsys):
        graph = two_clique_graph_file(tmp_path / "g.tsv")
        truth = write_truth(tmp_path / "truth.txt", [1] * 10 + [2] * 10)
        rc = run(
            ["bounds", "--graph", graph, "--truth", truth, "--w", "0.5,0.5",
             "--noise-p", "0.1,0.1"]
        )
        assert rc == 0
        payload = last_json(capsys)
        assert payload["regime"] == "below"
        assert payload["t_w"] == pytest.approx(0.1)


class TestSweepCli:
    def test_weight_line_with_config_precedence(self, tmp_path):
        # Config supplies p1 and p2; the explicit flag wins for p2.
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({
            "sizes": "15,15,15",
            "p1": 0.1,
            "p2": 0.9,
            "w1_min": 0.0,
            "w1_max": 1.0,
            "w1_step": 0.5,
            "reps": 1,
            "restarts": 2,
        }))
        csv_path = tmp_path / "line.csv"
        rc = run(
            ["sweep-weight", "--config", config, "--p2", "0.5",
             "--csv", csv_path]
        )
        assert rc == 0
        lines = csv_path.read_text().splitlines()
        assert len(lines) == 4  # header + 3 w1 values
        header = lines[0].split(",")
        for row in lines[1:]:
            cells = dict(zip(header, row.split(",")))
            assert float(cells["p1"]) == 0.1
            assert float(cells["p2"]) == 0.5

    def test_unknown_config_key_rejected(self, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"p_one": 0.1}))
        rc = run(["sweep-weight", "--config", config, "--csv", tmp_path / "x.csv"])
        assert rc == 1

    def test_config_must_be_json_object(self, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text("[1, 2, 3]")
        rc = run(["sweep-weight", "--config", config, "--csv", tmp_path / "x.csv"])
        assert rc == 1

    def test_noise_grid_writes_svg_and_geomean(self, tmp_path):
        csv_path = tmp_path / "grid.csv"
        svg_path = tmp_path / "grid.svg"
        gcsv = tmp_path / "geo.csv"
        rc = run(
            ["sweep-noise", "--sizes", "15,15,15", "--p-min", "0.05",
             "--p-max", "0.9", "--p-step", "0.85", "--w1", "0.5",
             "--reps", "1", "--restarts", "2", "--csv", csv_path,
             "--svg", svg_path, "--geomean-csv", gcsv]
        )
        assert rc == 0
        assert csv_path.read_text().startswith("p1,p2,w1,")
        assert svg_path.read_text().startswith("<?xml")
        assert gcsv.read_text().startswith("p1,p2,detect_geomean")

    def test_bad_thread_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("MLSGC_THREADS", "many")
        rc = run(
            ["sweep-weight", "--sizes", "15,15,15", "--p1", "0.1",
             "--p2", "0.5", "--w1-step", "1.0", "--reps", "1",
             "--restarts", "2", "--csv", tmp_path / "x.csv"]
        )
        assert rc == 1


class TestSinTheta:
    def test_bound_reported_and_holds(self, tmp_path, capsys):
        out = tmp_path / "st.json"
        rc = run(
            ["sintheta", "--sizes", "30,30,30", "--signal", "0.9,0.9",
             "--noise-p", "0.05,0.05", "--w", "0.5,0.5", "--seed", "0",
             "--grid-points", "5", "--out", out]
        )
        assert rc == 0
        payload = last_json(capsys)
        assert payload["holds"] is True
        assert payload["empirical_sin_theta"] <= payload["bound_at_t_w"]
        assert payload["min_bound"] > 0.0
        assert 0.0 < payload["min_bound_t"] <= payload["t_max_w"]
        assert json.loads(out.read_text()) == payload

    def test_grid_points_must_be_positive(self):
        rc = run(
            ["sintheta", "--sizes", "10,10", "--signal", "0.9,0.9",
             "--noise-p", "0.05,0.05", "--w", "0.5,0.5", "--grid-points", "0"]
        )
        assert rc == 1
