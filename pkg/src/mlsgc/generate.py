"""Synthetic multilayer graph generators.

Two families: the two-layer correlated model (one categorical draw per
within-cluster pair controls joint edge presence across both layers, plus
independent per-layer Bernoulli noise between clusters), and general
signal-plus-noise instances with arbitrary within-cluster signal and
block-wise identical or non-identical Bernoulli noise, optionally with
random edge weights on the noise edges.

Per-pair draws consume the generator stream in a fixed canonical order
(layer, then blocks row-major, then pairs lexicographic), so a seed
reproduces a graph bit-identically regardless of parallelism elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import ClusterAssignment, MultilayerGraph
from .phase import NoiseSpec

__all__ = [
    "CorrelatedTwoLayerParams",
    "RIMParams",
    "WeightSampler",
    "generate_correlated_two_layer",
    "generate_rim",
    "identical_noise_twin",
]


def _validate_sizes(sizes) -> tuple[int, ...]:
    sizes = tuple(int(s) for s in sizes)
    if len(sizes) < 2:
        raise ValueError("need at least two clusters")
    if any(s < 1 for s in sizes):
        raise ValueError(f"cluster sizes must be positive, got {sizes}")
    return sizes


def _block_labels(sizes: Sequence[int]) -> ClusterAssignment:
    return ClusterAssignment(np.repeat(np.arange(1, len(sizes) + 1), sizes))


def _cluster_slices(sizes: Sequence[int]) -> list[slice]:
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    return [slice(int(a), int(b)) for a, b in zip(offsets[:-1], offsets[1:])]


@dataclass(frozen=True)
class CorrelatedTwoLayerParams:
    """Parameters of the two-layer correlated generator.

    For every within-cluster node pair a single categorical draw decides
    joint presence: probability ``q11`` for an edge in both layers, ``q10``
    layer 1 only, ``q01`` layer 2 only, ``q00`` neither. Between-cluster
    pairs get independent Bernoulli(p1) and Bernoulli(p2) edges per layer.
    All edges have weight 1.
    """

    sizes: tuple[int, ...]
    q11: float = 0.3
    q10: float = 0.2
    q01: float = 0.1
    q00: float = 0.4
    p1: float = 0.1
    p2: float = 0.1
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "sizes", _validate_sizes(self.sizes))
        qs = (self.q11, self.q10, self.q01, self.q00)
        if any(not 0.0 <= q <= 1.0 for q in qs):
            raise ValueError(f"q probabilities must lie in [0, 1], got {qs}")
        if abs(sum(qs) - 1.0) > 1e-12:
            raise ValueError(f"q probabilities must sum to 1, got {sum(qs)!r}")
        for name, p in (("p1", self.p1), ("p2", self.p2)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name}={p} outside [0, 1]")

    @property
    def K(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    def to_dict(self) -> dict:
        return {
            "model": "correlated-two-layer",
            "sizes": list(self.sizes),
            "q11": self.q11,
            "q10": self.q10,
            "q01": self.q01,
            "q00": self.q00,
            "p1": self.p1,
            "p2": self.p2,
            "seed": self.seed,
        }


def generate_correlated_two_layer(
    params: CorrelatedTwoLayerParams,
) -> tuple[MultilayerGraph, ClusterAssignment]:
    """Draw one two-layer correlated instance; reproducible per seed.

    Nodes are ordered by cluster (first n_1 nodes form cluster 1, and so
    on). Draw order: within-cluster blocks ascending (one uniform per pair,
    upper triangle row-major), then between-cluster blocks row-major with
    the layer-1 rectangle drawn before the layer-2 rectangle.
    """
    rng = np.random.default_rng(params.seed)
    sizes = params.sizes
    n = params.n
    W1 = np.zeros((n, n))
    W2 = np.zeros((n, n))
    blocks = _cluster_slices(sizes)
    for k, sl in enumerate(blocks):
        nk = sizes[k]
        iu = np.triu_indices(nk, k=1)
        u = rng.random(iu[0].size)
        # Layer-1 marginal is q11 + q10, layer-2 is q11 + q01; the shared
        # uniform realizes the joint distribution.
        in1 = u < params.q11 + params.q10
        in2 = (u < params.q11) | ((u >= params.q11 + params.q10) & (u < 1.0 - params.q00))
        for W, present in ((W1, in1), (W2, in2)):
            block = np.zeros((nk, nk))
            block[iu] = present.astype(float)
            W[sl, sl] = block + block.T
    for i in range(len(sizes)):
        for j in range(i + 1, len(sizes)):
            shape = (sizes[i], sizes[j])
            for W, p in ((W1, params.p1), (W2, params.p2)):
                rect = (rng.random(shape) < p).astype(float)
                W[blocks[i], blocks[j]] = rect
                W[blocks[j], blocks[i]] = rect.T
    return MultilayerGraph([W1, W2]), _block_labels(sizes)


def _draw_weights(rng: np.random.Generator, mean: float, mode: str, size) -> np.ndarray:
    if mode == "uniform":
        return rng.uniform(0.0, 2.0 * mean, size)
    if mode == "exponential":
        return rng.exponential(mean, size)
    raise ValueError(f"unknown weight mode {mode!r}")


class WeightSampler:
    """Stream of positive edge weights with a prescribed mean.

    ``uniform`` samples on [0, 2 * mean] (all moments bounded),
    ``exponential`` has the prescribed mean. Deterministic per seed.
    """

    def __init__(self, mean: float, mode: str = "uniform", seed=None):
        if mean <= 0.0:
            raise ValueError(f"mean weight must be positive, got {mean}")
        if mode not in ("uniform", "exponential"):
            raise ValueError(f"unknown weight mode {mode!r}")
        self.mean = float(mean)
        self.mode = mode
        self._rng = np.random.default_rng(seed)

    def sample(self, size: int) -> np.ndarray:
        return _draw_weights(self._rng, self.mean, self.mode, size)

    def __iter__(self):
        while True:
            yield float(self.sample(1)[0])


@dataclass(frozen=True)
class RIMParams:
    """Parameters of a general signal-plus-noise instance.

    ``signal`` gives, per layer, one entry per cluster: either a float
    (Erdos-Renyi density of unweighted within-cluster edges) or an explicit
    symmetric nonnegative within-block weight matrix. ``noise`` carries the
    between-cluster Bernoulli parameters and mean weights per layer.
    ``weight_mode`` draws random weights for present noise edges (None
    keeps weight ``wbar``, matching the constant-mean case).
    """

    sizes: tuple[int, ...]
    signal: tuple
    noise: NoiseSpec
    weight_mode: str | None = None
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "sizes", _validate_sizes(self.sizes))
        K = len(self.sizes)
        if self.noise.L != len(self.signal):
            raise ValueError(
                f"signal spec covers {len(self.signal)} layers, noise {self.noise.L}"
            )
        normalized = []
        for ell, layer_spec in enumerate(self.signal, start=1):
            if len(layer_spec) != K:
                raise ValueError(f"layer {ell} signal spec needs {K} cluster entries")
            entries = []
            for k, spec in enumerate(layer_spec, start=1):
                if np.isscalar(spec):
                    d = float(spec)
                    if not 0.0 <= d <= 1.0:
                        raise ValueError(f"layer {ell} cluster {k}: density {d} outside [0, 1]")
                    entries.append(d)
                else:
                    B = np.array(spec, dtype=float)
                    nk = self.sizes[k - 1]
                    if B.shape != (nk, nk):
                        raise ValueError(
                            f"layer {ell} cluster {k}: block shape {B.shape}, expected ({nk}, {nk})"
                        )
                    if not np.array_equal(B, B.T) or np.any(B < 0) or np.any(np.diag(B) != 0):
                        raise ValueError(
                            f"layer {ell} cluster {k}: block must be symmetric, "
                            "nonnegative, zero-diagonal"
                        )
                    B.setflags(write=False)
                    entries.append(B)
            normalized.append(tuple(entries))
        object.__setattr__(self, "signal", tuple(normalized))
        for ell in range(1, self.noise.L + 1):
            p = self.noise.p(ell)
            if not np.isscalar(p) and p.shape[0] != K:
                raise ValueError(
                    f"layer {ell}: noise blocks are {p.shape[0]}x{p.shape[0]}, expected {K}x{K}"
                )
        if self.weight_mode not in (None, "uniform", "exponential"):
            raise ValueError(f"unknown weight mode {self.weight_mode!r}")

    @property
    def K(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def L(self) -> int:
        return self.noise.L

    def to_dict(self) -> dict:
        signal = [
            [s if np.isscalar(s) else "explicit-block" for s in layer]
            for layer in self.signal
        ]
        noise_p = [
            self.noise.p(ell) if np.isscalar(self.noise.p(ell)) else self.noise.p(ell).tolist()
            for ell in range(1, self.L + 1)
        ]
        noise_wbar = [
            self.noise.wbar(ell)
            if np.isscalar(self.noise.wbar(ell))
            else self.noise.wbar(ell).tolist()
            for ell in range(1, self.L + 1)
        ]
        return {
            "model": "rim",
            "sizes": list(self.sizes),
            "signal": signal,
            "noise_p": noise_p,
            "noise_wbar": noise_wbar,
            "weight_mode": self.weight_mode,
            "seed": self.seed,
        }


def _block_noise(noise: NoiseSpec, ell: int, i: int, j: int) -> tuple[float, float]:
    p, wb = noise.p(ell), noise.wbar(ell)
    if np.isscalar(p):
        return float(p), float(wb)
    return float(p[i, j]), float(wb[i, j])


def generate_rim(params: RIMParams) -> tuple[MultilayerGraph, ClusterAssignment]:
    """Draw one signal-plus-noise instance; reproducible per seed.

    Draw order per layer: blocks (i <= j) row-major. Diagonal blocks take
    the signal draws (density case: one uniform per pair, upper triangle
    row-major; explicit blocks consume no randomness). Off-diagonal blocks
    take presence uniforms for the full rectangle, then, when weighted,
    one weight draw per pair (absent pairs still consume a draw, keeping
    the stream layout independent of the presence pattern).
    """
    rng = np.random.default_rng(params.seed)
    sizes = params.sizes
    K = params.K
    n = params.n
    blocks = _cluster_slices(sizes)
    layers = []
    for ell in range(1, params.L + 1):
        W = np.zeros((n, n))
        for i in range(K):
            for j in range(i, K):
                if i == j:
                    spec = params.signal[ell - 1][i]
                    nk = sizes[i]
                    if np.isscalar(spec):
                        iu = np.triu_indices(nk, k=1)
                        block = np.zeros((nk, nk))
                        block[iu] = (rng.random(iu[0].size) < spec).astype(float)
                        W[blocks[i], blocks[i]] = block + block.T
                    else:
                        W[blocks[i], blocks[i]] = spec
                else:
                    p, wbar = _block_noise(params.noise, ell, i, j)
                    shape = (sizes[i], sizes[j])
                    present = rng.random(shape) < p
                    if params.weight_mode is None:
                        rect = present * wbar
                    else:
                        rect = present * _draw_weights(rng, wbar, params.weight_mode, shape)
                    W[blocks[i], blocks[j]] = rect
                    W[blocks[j], blocks[i]] = rect.T
        layers.append(W)
    return MultilayerGraph(layers), _block_labels(sizes)


def identical_noise_twin(
    g: MultilayerGraph,
    truth: ClusterAssignment,
    t: float,
    seed=None,
) -> MultilayerGraph:
    """Rebuild ``g`` with its signal blocks and fresh identical noise level t.

    Within-cluster blocks are copied from ``g`` verbatim; every
    between-cluster entry in every layer is redrawn as Bernoulli(p) with
    constant weight t / p, where p = min(t, 1), so each layer's noise level
    equals t and any convex aggregation has t_w = t. Draw order: layer,
    blocks (i < j) row-major, presence uniforms per rectangle.
    """
    if t <= 0.0:
        raise ValueError(f"noise level t={t} must be positive")
    if truth.n != g.n:
        raise ValueError(f"assignment covers {truth.n} nodes, graph has {g.n}")
    # Cluster membership must be contiguous for block copying.
    sizes = truth.sizes
    expected = np.repeat(np.arange(1, truth.K + 1), sizes)
    if not np.array_equal(truth.labels, expected):
        raise ValueError("identical_noise_twin expects block-contiguous labels")
    rng = np.random.default_rng(seed)
    p = min(t, 1.0)
    weight = t / p
    blocks = _cluster_slices(sizes)
    layers = []
    for W_src in g.layers:
        W = np.zeros_like(W_src)
        for i, sl in enumerate(blocks):
            W[sl, sl] = W_src[sl, sl]
        for i in range(truth.K):
            for j in range(i + 1, truth.K):
                rect = (rng.random((sizes[i], sizes[j])) < p) * weight
                W[blocks[i], blocks[j]] = rect
                W[blocks[j], blocks[i]] = rect.T
        layers.append(W)
    return MultilayerGraph(layers)
