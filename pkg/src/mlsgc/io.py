"""Edge-list serialization for multilayer graphs and label files.

Graph files are UTF-8 TSV with a single header line::

    #mlgraph n=<n> L=<L>
    <layer>\t<u>\t<v>\t<weight>

Layers are 1-based, node ids 0-based with ``u < v``; each symmetric pair is
stored once. Write order is deterministic: layer, then u, then v ascending.
Label files carry one ``<node>\t<cluster-id>`` line per node.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from .graph import ClusterAssignment, MultilayerGraph

_HEADER_RE = re.compile(r"^#mlgraph n=(\d+) L=(\d+)$")


class GraphFormatError(ValueError):
    """Raised when a graph or labels file violates the documented format."""


def write_graph(g: MultilayerGraph, path) -> None:
    """Write ``g`` in the TSV edge-list format (deterministic order)."""
    lines = [f"#mlgraph n={g.n} L={g.L}"]
    for ell in range(1, g.L + 1):
        W = g.layer(ell)
        # np.nonzero on the upper triangle yields row-major order: u, then v.
        us, vs = np.nonzero(np.triu(W, 1))
        # repr of the Python float round-trips the weight exactly.
        for u, v in zip(us, vs):
            lines.append(f"{ell}\t{u}\t{v}\t{float(W[u, v])!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_graph(path) -> MultilayerGraph:
    """Parse a TSV edge-list graph file.

    Rejects malformed headers, out-of-range node or layer ids, negative
    weights, and duplicate edges.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise GraphFormatError(f"{path}: empty file")
    m = _HEADER_RE.match(lines[0])
    if not m:
        raise GraphFormatError(f"{path}: malformed header {lines[0]!r}")
    n, L = int(m.group(1)), int(m.group(2))
    if n < 1 or L < 1:
        raise GraphFormatError(f"{path}: header requires n >= 1 and L >= 1")
    layers = [np.zeros((n, n)) for _ in range(L)]
    seen: set[tuple[int, int, int]] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise GraphFormatError(f"{path}:{lineno}: expected 4 tab-separated fields")
        try:
            ell, u, v = int(fields[0]), int(fields[1]), int(fields[2])
            weight = float(fields[3])
        except ValueError as exc:
            raise GraphFormatError(f"{path}:{lineno}: {exc}") from None
        if not 1 <= ell <= L:
            raise GraphFormatError(f"{path}:{lineno}: layer {ell} outside 1..{L}")
        if not (0 <= u < v < n):
            raise GraphFormatError(
                f"{path}:{lineno}: node pair ({u}, {v}) must satisfy 0 <= u < v < {n}"
            )
        if weight < 0:
            raise GraphFormatError(f"{path}:{lineno}: negative weight {weight}")
        key = (ell, u, v)
        if key in seen:
            raise GraphFormatError(f"{path}:{lineno}: duplicate edge {key}")
        seen.add(key)
        layers[ell - 1][u, v] = weight
        layers[ell - 1][v, u] = weight
    return MultilayerGraph(layers)


def write_labels(labels, path) -> None:
    """Write one ``<node>\\t<cluster-id>`` line per node, ascending by node."""
    if isinstance(labels, ClusterAssignment):
        labels = labels.labels
    labels = np.asarray(labels, dtype=int)
    lines = [f"{node}\t{label}" for node, label in enumerate(labels)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_labels(path) -> ClusterAssignment:
    """Parse a labels file into a ClusterAssignment.

    Every node id in ``0..n-1`` must appear exactly once.
    """
    text = Path(path).read_text(encoding="utf-8")
    entries: dict[int, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise GraphFormatError(f"{path}:{lineno}: expected 2 tab-separated fields")
        try:
            node, label = int(fields[0]), int(fields[1])
        except ValueError as exc:
            raise GraphFormatError(f"{path}:{lineno}: {exc}") from None
        if node in entries:
            raise GraphFormatError(f"{path}:{lineno}: duplicate node id {node}")
        entries[node] = label
    n = len(entries)
    if n == 0:
        raise GraphFormatError(f"{path}: empty labels file")
    if set(entries) != set(range(n)):
        raise GraphFormatError(f"{path}: node ids must be exactly 0..{n - 1}")
    return ClusterAssignment([entries[i] for i in range(n)])


def write_sidecar(params: dict, path) -> None:
    """Write generator parameters as a JSON provenance sidecar."""
    Path(path).write_text(
        json.dumps(params, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
