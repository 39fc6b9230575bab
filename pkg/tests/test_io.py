"""File formats: TSV edge lists, label files, JSON sidecars."""

import json

import numpy as np
import pytest

from mlsgc import (
    GraphFormatError,
    MultilayerGraph,
    NoiseSpec,
    RIMParams,
    generate_rim,
    read_graph,
    read_labels,
    write_graph,
    write_labels,
    write_sidecar,
)


def small_graph():
    W1 = np.zeros((4, 4))
    W1[0, 1] = W1[1, 0] = 1.5
    W2 = np.zeros((4, 4))
    W2[2, 3] = W2[3, 2] = 0.25
    return MultilayerGraph([W1, W2])


def test_roundtrip_small(tmp_path):
    g = small_graph()
    path = tmp_path / "g.tsv"
    write_graph(g, path)
    back = read_graph(path)
    assert back.n == g.n and back.L == g.L
    for ell in range(1, g.L + 1):
        np.testing.assert_array_equal(back.layer(ell), g.layer(ell))


def test_roundtrip_weighted_generated(tmp_path):
    # Random float weights exercise the exact-repr round trip.
    params = RIMParams(
        sizes=(15, 15),
        signal=((0.6, 0.6), (0.4, 0.4)),
        noise=NoiseSpec(p=(0.2, 0.3), wbar=(2.0, 0.5)),
        weight_mode="uniform",
        seed=11,
    )
    g, _ = generate_rim(params)
    path = tmp_path / "g.tsv"
    write_graph(g, path)
    back = read_graph(path)
    for ell in range(1, g.L + 1):
        np.testing.assert_array_equal(back.layer(ell), g.layer(ell))


def test_header_format(tmp_path):
    g = small_graph()
    path = tmp_path / "g.tsv"
    write_graph(g, path)
    assert path.read_text().splitlines()[0] == "#mlgraph n=4 L=2"


def write_lines(tmp_path, lines):
    path = tmp_path / "bad.tsv"
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.mark.parametrize(
    "lines",
    [
        ["#wrong n=2 L=1", "1\t0\t1\t1.0"],          # bad magic
        ["#mlgraph n=2", "1\t0\t1\t1.0"],              # missing L
        ["#mlgraph n=2 L=1", "2\t0\t1\t1.0"],          # layer out of range
        ["#mlgraph n=2 L=1", "0\t0\t1\t1.0"],          # layers are 1-based
        ["#mlgraph n=2 L=1", "1\t1\t0\t1.0"],          # u >= v
        ["#mlgraph n=2 L=1", "1\t0\t0\t1.0"],          # self-loop
        ["#mlgraph n=2 L=1", "1\t0\t2\t1.0"],          # node out of range
        ["#mlgraph n=2 L=1", "1\t0\t1\t-1.0"],         # negative weight
        ["#mlgraph n=2 L=1", "1\t0\t1\t1.0", "1\t0\t1\t2.0"],  # duplicate
        ["#mlgraph n=2 L=1", "1\t0\t1"],               # missing field
        ["#mlgraph n=2 L=1", "1\t0\t1\tabc"],          # non-numeric weight
    ],
)
def test_malformed_rejected(tmp_path, lines):
    with pytest.raises(GraphFormatError):
        read_graph(write_lines(tmp_path, lines))


def test_empty_file_rejected(tmp_path):
    path = tmp_path / "empty.tsv"
    path.write_text("")
    with pytest.raises(GraphFormatError):
        read_graph(path)


def test_labels_roundtrip(tmp_path):
    labels = np.array([1, 1, 2, 3, 3, 3])
    path = tmp_path / "labels.tsv"
    write_labels(labels, path)
    back = read_labels(path)
    np.testing.assert_array_equal(back.labels, labels)
    assert back.K == 3


def test_labels_missing_node_rejected(tmp_path):
    path = tmp_path / "labels.tsv"
    path.write_text("0\t1\n2\t2\n")  # node 1 missing
    with pytest.raises(GraphFormatError):
        read_labels(path)


def test_labels_duplicate_node_rejected(tmp_path):
    path = tmp_path / "labels.tsv"
    path.write_text("0\t1\n0\t2\n")
    with pytest.raises(GraphFormatError):
        read_labels(path)


def test_labels_gapped_cluster_ids_rejected(tmp_path):
    path = tmp_path / "labels.tsv"
    path.write_text("0\t1\n1\t3\n")
    with pytest.raises((GraphFormatError, ValueError)):
        read_labels(path)


def test_sidecar_is_sorted_json(tmp_path):
    path = tmp_path / "side.json"
    write_sidecar({"b": 2, "a": [1, 2]}, path)
    text = path.read_text()
    assert json.loads(text) == {"a": [1, 2], "b": 2}
    assert text.index('"a"') < text.index('"b"')
