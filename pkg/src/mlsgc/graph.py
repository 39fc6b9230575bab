"""Core containers for multilayer graphs and the Laplacian operations on them.

A multilayer graph is a stack of symmetric nonnegative edge-weight matrices
over one shared node set. Convex aggregation collapses the stack into a
single weighted graph whose unnormalized Laplacian drives the spectral
clustering pipeline. All containers are immutable after construction and
safe to share across concurrent workers.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

import numpy as np

#: Absolute tolerance on the simplex constraint sum(w) == 1.
SIMPLEX_ATOL = 1e-12


class GraphError(ValueError):
    """Raised for malformed graphs, assignments, or layer weights."""


def _as_weight_matrix(W, name: str = "weight matrix") -> np.ndarray:
    """Validate and copy an edge-weight matrix.

    Requires a square symmetric matrix with nonnegative entries and an
    exactly zero diagonal. Returns a float64 copy.
    """
    W = np.array(W, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise GraphError(f"{name} must be square, got shape {W.shape}")
    if not np.array_equal(W, W.T):
        raise GraphError(f"{name} must be symmetric")
    if np.any(W < 0):
        raise GraphError(f"{name} has negative entries")
    if np.any(np.diag(W) != 0):
        raise GraphError(f"{name} has nonzero diagonal entries (self-loops)")
    return W


class MultilayerGraph:
    """A stack of L edge-weight matrices on a common set of n nodes.

    Each layer is an n x n symmetric nonnegative matrix with zero diagonal;
    the adjacency structure of a layer is the nonzero pattern of its weight
    matrix. Layers are stored densely and frozen (read-only) after
    construction.

    Parameters
    ----------
    layers : sequence of array-like
        One square weight matrix per layer, all of the same size.
    """

    def __init__(self, layers: Sequence):
        mats = [_as_weight_matrix(W, name=f"layer {i + 1}") for i, W in enumerate(layers)]
        if not mats:
            raise GraphError("a multilayer graph needs at least one layer")
        n = mats[0].shape[0]
        if n < 1:
            raise GraphError("a multilayer graph needs at least one node")
        for i, W in enumerate(mats):
            if W.shape[0] != n:
                raise GraphError(
                    f"layer {i + 1} has {W.shape[0]} nodes, expected {n}"
                )
            W.setflags(write=False)
        self._layers = tuple(mats)

    @property
    def n(self) -> int:
        """Number of nodes."""
        return self._layers[0].shape[0]

    @property
    def L(self) -> int:
        """Number of layers."""
        return len(self._layers)

    @property
    def layers(self) -> tuple[np.ndarray, ...]:
        """The layer weight matrices (read-only views)."""
        return self._layers

    def layer(self, ell: int) -> np.ndarray:
        """Return the weight matrix of layer ``ell`` (1-based)."""
        if not 1 <= ell <= self.L:
            raise GraphError(f"layer id {ell} outside 1..{self.L}")
        return self._layers[ell - 1]

    def __repr__(self) -> str:
        return f"MultilayerGraph(n={self.n}, L={self.L})"


class ClusterAssignment:
    """Ground-truth or predicted node-to-cluster labels.

    Cluster ids are 1-based and contiguous: every id in ``1..K`` must occur
    at least once. Derived size statistics (``n_min``, ``n_max`` and their
    ratio ``c``) feed the critical-value bounds.
    """

    def __init__(self, labels: Iterable[int]):
        labels = np.array(list(labels) if not isinstance(labels, np.ndarray) else labels)
        if labels.ndim != 1 or labels.size == 0:
            raise GraphError("labels must be a nonempty 1-D sequence")
        if not np.issubdtype(labels.dtype, np.integer):
            as_int = labels.astype(int)
            if not np.array_equal(as_int, labels):
                raise GraphError("labels must be integers")
            labels = as_int
        labels = labels.astype(int)
        K = int(labels.max(initial=0))
        if labels.min(initial=1) < 1:
            raise GraphError("cluster ids must be >= 1")
        sizes = np.bincount(labels, minlength=K + 1)[1:]
        if np.any(sizes == 0):
            missing = [k + 1 for k in np.flatnonzero(sizes == 0)]
            raise GraphError(f"cluster ids {missing} in 1..{K} never occur")
        labels.setflags(write=False)
        self._labels = labels
        self._sizes = tuple(int(s) for s in sizes)

    @property
    def labels(self) -> np.ndarray:
        return self._labels

    @property
    def n(self) -> int:
        return self._labels.size

    @property
    def K(self) -> int:
        return len(self._sizes)

    @property
    def sizes(self) -> tuple[int, ...]:
        """Cluster sizes n_1..n_K."""
        return self._sizes

    @property
    def n_min(self) -> int:
        return min(self._sizes)

    @property
    def n_max(self) -> int:
        return max(self._sizes)

    @property
    def c(self) -> float:
        """Size ratio n_min / n_max, in (0, 1]."""
        return self.n_min / self.n_max

    def indices(self, k: int) -> np.ndarray:
        """Node indices belonging to cluster ``k`` (1-based)."""
        if not 1 <= k <= self.K:
            raise GraphError(f"cluster id {k} outside 1..{self.K}")
        return np.flatnonzero(self._labels == k)

    def __repr__(self) -> str:
        return f"ClusterAssignment(n={self.n}, K={self.K}, sizes={self._sizes})"


class LayerWeights:
    """A point on the simplex used for convex layer aggregation.

    Entries must be nonnegative and sum to one within ``SIMPLEX_ATOL``.
    """

    def __init__(self, w: Iterable[float]):
        w = np.array(list(w) if not isinstance(w, np.ndarray) else w, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise GraphError("layer weights must be a nonempty 1-D sequence")
        if np.any(w < 0):
            raise GraphError("layer weights must be nonnegative")
        if abs(w.sum() - 1.0) > SIMPLEX_ATOL:
            raise GraphError(
                f"layer weights must sum to 1 within {SIMPLEX_ATOL}, got {float(w.sum())!r}"
            )
        w.setflags(write=False)
        self._w = w

    @property
    def w(self) -> np.ndarray:
        return self._w

    @property
    def L(self) -> int:
        return self._w.size

    def __len__(self) -> int:
        return self._w.size

    def __iter__(self):
        return iter(self._w)

    def __repr__(self) -> str:
        return f"LayerWeights({self._w.tolist()})"


def as_layer_weights(w) -> LayerWeights:
    """Coerce an array-like (or pass through a LayerWeights) to LayerWeights."""
    return w if isinstance(w, LayerWeights) else LayerWeights(w)


def aggregate(g: MultilayerGraph, w) -> np.ndarray:
    """Convex combination of the layer weight matrices.

    Returns ``W_agg = sum_l w_l * W_l``, which inherits symmetry,
    nonnegativity, and the zero diagonal from the layers.

    Raises
    ------
    GraphError
        If the weight vector length does not match the layer count.
    """
    w = as_layer_weights(w)
    if w.L != g.L:
        raise GraphError(f"{w.L} layer weights for a graph with {g.L} layers")
    out = np.zeros((g.n, g.n))
    for wl, W in zip(w.w, g.layers):
        if wl != 0.0:
            out += wl * W
    return out


def laplacian(W) -> np.ndarray:
    """Unnormalized graph Laplacian ``L = diag(W 1) - W``.

    The input must be a valid weight matrix (symmetric, nonnegative, zero
    diagonal); the result is positive semidefinite with row sums zero.
    """
    W = _as_weight_matrix(W)
    return np.diag(W.sum(axis=1)) - W


def within_cluster_laplacian(g: MultilayerGraph, part: ClusterAssignment, k: int, w) -> np.ndarray:
    """Laplacian of the aggregated subgraph induced on cluster ``k``.

    Only within-cluster edges contribute: the result equals
    ``sum_l w_l * laplacian(W_l[cluster k, cluster k])``.
    """
    if part.n != g.n:
        raise GraphError(f"assignment covers {part.n} nodes, graph has {g.n}")
    w = as_layer_weights(w)
    if w.L != g.L:
        raise GraphError(f"{w.L} layer weights for a graph with {g.L} layers")
    idx = part.indices(k)
    block = np.zeros((idx.size, idx.size))
    for wl, W in zip(w.w, g.layers):
        if wl != 0.0:
            block += wl * W[np.ix_(idx, idx)]
    return np.diag(block.sum(axis=1)) - block


def is_connected(W) -> bool:
    """Whether the graph on strictly positive edges has a single component.

    Breadth-first traversal from node 0; a single node is connected.
    """
    W = np.asarray(W, dtype=float)
    n = W.shape[0]
    if n == 1:
        return True
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    reached = 1
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(W[u] > 0):
            if not seen[v]:
                seen[v] = True
                reached += 1
                queue.append(v)
    return reached == n
