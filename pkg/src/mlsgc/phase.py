"""Closed-form phase-transition quantities for aggregated-noise clustering.

Against ground-truth clusters, this module evaluates everything the theory
predicts in closed form: aggregated noise levels, the critical-value bound
pair and its weight-independent universal lower bound, the predicted
normalized partial-eigenvalue-sum line in each regime, row-coherence
diagnostics of the embedding, the sin-Theta subspace perturbation bound,
and the two-layer critical weight. It is a theory-validation tool: all
bound computations require planted labels, and noise parameters are inputs,
never inferred.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .graph import (
    ClusterAssignment,
    GraphError,
    MultilayerGraph,
    aggregate,
    as_layer_weights,
    is_connected,
    laplacian,
    within_cluster_laplacian,
)
from .spectral import TIE_RTOL, partial_eigenvalue_sum, smallest_eigenpairs

#: Below this value delta in the sin-Theta bound counts as degenerate.
DELTA_FLOOR = 1e-12

REGIME_BELOW = "below"
REGIME_ABOVE = "above"
REGIME_BOUNDARY = "boundary"
REGIME_INDETERMINATE = "indeterminate"


class DegenerateDeltaError(ArithmeticError):
    """The sin-Theta denominator delta is zero; the bound is undefined."""


def _noise_matrix(value, name: str) -> np.ndarray:
    M = np.array(value, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} block matrix must be square, got {M.shape}")
    if M.shape[0] < 2:
        raise ValueError(f"{name} block matrix needs at least 2 clusters")
    if not np.array_equal(M, M.T):
        raise ValueError(f"{name} block matrix must be symmetric")
    M.setflags(write=False)
    return M


class NoiseSpec:
    """Between-cluster noise parameters, block-wise identical or not.

    Each layer carries either a single (p, wbar) pair (block-wise identical
    noise) or symmetric K x K block matrices of edge probabilities and mean
    weights. The per-block noise level is ``t_ij = p_ij * wbar_ij``.

    Parameters
    ----------
    p : sequence
        Per layer: a float in [0, 1] or a symmetric (K, K) matrix of them.
    wbar : sequence, optional
        Mean edge weights, same structure as ``p``; defaults to 1
        everywhere (the binary adjacency case).
    """

    def __init__(self, p: Sequence, wbar: Sequence | None = None):
        if len(p) == 0:
            raise ValueError("noise spec needs at least one layer")
        if wbar is None:
            wbar = [1.0 if np.isscalar(q) else np.ones_like(np.asarray(q, float)) for q in p]
        if len(wbar) != len(p):
            raise ValueError(f"{len(wbar)} wbar entries for {len(p)} layers")
        ps, wbars = [], []
        K = None
        for ell, (q, wb) in enumerate(zip(p, wbar), start=1):
            if np.isscalar(q) != np.isscalar(wb):
                raise ValueError(f"layer {ell}: p and wbar must both be scalar or both block-wise")
            if np.isscalar(q):
                q, wb = float(q), float(wb)
                if not 0.0 <= q <= 1.0:
                    raise ValueError(f"layer {ell}: p={q} outside [0, 1]")
                if wb <= 0.0:
                    raise ValueError(f"layer {ell}: wbar={wb} must be positive")
            else:
                q = _noise_matrix(q, f"layer {ell} p")
                wb = _noise_matrix(wb, f"layer {ell} wbar")
                if q.shape != wb.shape:
                    raise ValueError(f"layer {ell}: p and wbar shapes differ")
                if np.any(q < 0) or np.any(q > 1):
                    raise ValueError(f"layer {ell}: p entries outside [0, 1]")
                if np.any(wb <= 0):
                    raise ValueError(f"layer {ell}: wbar entries must be positive")
                if K is None:
                    K = q.shape[0]
                elif q.shape[0] != K:
                    raise ValueError("block matrices disagree on cluster count")
            ps.append(q)
            wbars.append(wb)
        self._p = tuple(ps)
        self._wbar = tuple(wbars)

    @property
    def L(self) -> int:
        return len(self._p)

    @property
    def identical(self) -> bool:
        """True when every layer is block-wise identical."""
        return all(np.isscalar(q) for q in self._p)

    def p(self, ell: int):
        return self._p[ell - 1]

    def wbar(self, ell: int):
        return self._wbar[ell - 1]

    def t(self, ell: int) -> float:
        """Scalar noise level of layer ``ell``.

        For a block-wise identical layer this is ``p * wbar``; for a
        non-identical layer the mean of the off-diagonal block levels is
        used (the theory states no scalar for that case).
        """
        q, wb = self._p[ell - 1], self._wbar[ell - 1]
        if np.isscalar(q):
            return q * wb
        t = q * wb
        off = ~np.eye(t.shape[0], dtype=bool)
        return float(t[off].mean())

    def t_max(self, ell: int) -> float:
        """Maximum off-diagonal block noise level of layer ``ell``."""
        q, wb = self._p[ell - 1], self._wbar[ell - 1]
        if np.isscalar(q):
            return q * wb
        t = q * wb
        off = ~np.eye(t.shape[0], dtype=bool)
        return float(t[off].max())


@dataclass(frozen=True)
class PhaseReport:
    """Aggregated noise, critical-value bounds, and the regime verdict."""

    t_w: float
    t_max_w: float
    t_lb_w: float
    t_ub_w: float
    universal_lb: float
    c_star_w: float
    predicted_s2k_per_n: tuple[float, float] | None
    regime: str
    connectivity_flag: bool
    tie_flag: bool

    def to_dict(self) -> dict:
        d = {
            "t_w": self.t_w,
            "t_max_w": self.t_max_w,
            "t_lb_w": self.t_lb_w,
            "t_ub_w": self.t_ub_w,
            "universal_lb": self.universal_lb,
            "c_star_w": self.c_star_w,
            "predicted_s2k_per_n": (
                list(self.predicted_s2k_per_n)
                if self.predicted_s2k_per_n is not None
                else None
            ),
            "regime": self.regime,
            "connectivity_flag": self.connectivity_flag,
            "tie_flag": self.tie_flag,
        }
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


@dataclass(frozen=True)
class SeparabilityDiagnostic:
    """Row-coherence statistics of the embedding per planted cluster.

    ``means[k, j]`` and ``stds[k, j]`` are the mean and standard deviation
    of column j of Y restricted to cluster k+1. Below the critical value
    the columns are cluster-wise constant (stds near zero, size-weighted
    column sums zero); above it the per-cluster means collapse to zero.
    """

    means: np.ndarray
    stds: np.ndarray
    weighted_col_sums: np.ndarray
    coherence: float


@dataclass(frozen=True)
class CriticalWeight:
    """Root of the two-layer critical-weight equation.

    ``w1`` is the crossing in [0, 1] if one exists, else None (both layers
    reliable or both unreliable for every weight). ``degenerate`` marks a
    vanishing linear coefficient, where the equation constrains nothing.
    """

    w1: float | None
    degenerate: bool


def aggregated_noise(noise: NoiseSpec, w) -> tuple[float, float]:
    """Convex combinations (t_w, t_max_w) of per-layer noise levels."""
    w = as_layer_weights(w)
    if w.L != noise.L:
        raise GraphError(f"{w.L} layer weights for a noise spec with {noise.L} layers")
    t_w = float(sum(wl * noise.t(ell) for ell, wl in enumerate(w.w, start=1)))
    t_max_w = float(sum(wl * noise.t_max(ell) for ell, wl in enumerate(w.w, start=1)))
    return t_w, t_max_w


def min_within_partial_sum(g: MultilayerGraph, truth: ClusterAssignment, w) -> float:
    """min over clusters of the partial eigenvalue sum of L_k under weights w."""
    if truth.K < 2:
        raise ValueError("bounds need at least K=2 clusters")
    return min(
        partial_eigenvalue_sum(within_cluster_laplacian(g, truth, k, w), truth.K)
        for k in range(1, truth.K + 1)
    )


def critical_bounds(g: MultilayerGraph, truth: ClusterAssignment, w) -> tuple[float, float]:
    """Bound pair (t_lb_w, t_ub_w) bracketing the critical noise level.

    Both bounds share the numerator ``min_k S_{2:K}(L_k^w)``; the lower
    divides by (K-1) n_max, the upper by (K-1) n_min, so they coincide
    exactly for equal cluster sizes.
    """
    s_min = min_within_partial_sum(g, truth, w)
    K = truth.K
    return s_min / ((K - 1) * truth.n_max), s_min / ((K - 1) * truth.n_min)


def universal_lower_bound(g: MultilayerGraph, truth: ClusterAssignment) -> float:
    """Weight-independent lower bound on t_lb_w.

    Minimizes the per-layer within-cluster partial eigenvalue sums over
    both clusters and layers: the least connected cluster in the weakest
    layer limits every convex aggregation.
    """
    if truth.K < 2:
        raise ValueError("bounds need at least K=2 clusters")
    basis = np.eye(g.L)
    s_min = min(
        partial_eigenvalue_sum(
            within_cluster_laplacian(g, truth, k, basis[ell]), truth.K
        )
        for ell in range(g.L)
        for k in range(1, truth.K + 1)
    )
    return s_min / ((truth.K - 1) * truth.n_max)


def c_star(g: MultilayerGraph, truth: ClusterAssignment, w) -> float:
    """Intercept of the above-threshold line: min_k S_{2:K}(L_k^w) / n.

    Computed directly from the aggregated within-cluster Laplacians (the
    quantity the phase-transition statement defines), not from the
    layer-wise sum form.
    """
    return min_within_partial_sum(g, truth, w) / truth.n


def layerwise_c_star_gap(g: MultilayerGraph, truth: ClusterAssignment, w) -> float:
    """Relative gap between the direct and layer-wise-sum forms of c_star.

    The aggregated form min_k S_{2:K}(L_k^w) and the layer-wise form
    min_k sum_l w_l S_{2:K}(L_k^(l)) coincide only when the minimizing
    eigenspaces align across layers; this reports |direct - layerwise|
    relative to the direct value for empirical monitoring, and logs a
    warning when the gap exceeds the 5% tolerance the theory is validated
    against.
    """
    w = as_layer_weights(w)
    direct = min_within_partial_sum(g, truth, w)
    basis = np.eye(g.L)
    per_layer = np.array(
        [
            [
                partial_eigenvalue_sum(
                    within_cluster_laplacian(g, truth, k, basis[ell]), truth.K
                )
                for ell in range(g.L)
            ]
            for k in range(1, truth.K + 1)
        ]
    )
    layerwise = float((per_layer @ w.w).min())
    gap = abs(direct - layerwise) / max(direct, 1e-300)
    if gap > 0.05:
        logging.getLogger(__name__).warning(
            "direct and layer-wise within-cluster sums disagree by %.1f%% "
            "(the minimizing eigenspaces do not align across layers)",
            100.0 * gap,
        )
    return gap


def predicted_partial_sum(
    t_w: float,
    c_star_w: float,
    K: int,
    n: int,
    n_min: int,
    n_max: int,
    regime: str,
) -> tuple[float, float] | None:
    """Predicted S_{2:K}(L^w) / n for the given regime.

    Below the critical value the prediction is the single value
    ``(K-1) t_w``; above it, the bracket with intercept c_star_w and slopes
    ``(K-1)(1 - n_max/n)`` to ``(K-1)(1 - n_min/n)``, which collapses to
    the slope ``(K-1)^2 / K`` line for equal cluster sizes. Boundary and
    indeterminate regimes carry no prediction.
    """
    if regime == REGIME_BELOW:
        v = (K - 1) * t_w
        return (v, v)
    if regime == REGIME_ABOVE:
        lo = c_star_w + (K - 1) * (1.0 - n_max / n) * t_w
        hi = c_star_w + (K - 1) * (1.0 - n_min / n) * t_w
        return (lo, hi)
    return None


def classify_regime(t_w: float, t_lb_w: float, t_ub_w: float) -> str:
    """Regime verdict: the critical value is only bracketed, so between the
    bounds no point estimate is claimed."""
    if t_w == t_lb_w or t_w == t_ub_w:
        return REGIME_BOUNDARY
    if t_w < t_lb_w:
        return REGIME_BELOW
    if t_w > t_ub_w:
        return REGIME_ABOVE
    return REGIME_INDETERMINATE


def separability_diagnostic(Y, truth: ClusterAssignment) -> SeparabilityDiagnostic:
    """Per-cluster row statistics of the embedding matrix.

    For each cluster k and embedding column j, reports the within-cluster
    mean and standard deviation, the size-weighted column sums
    ``sum_k n_k * mean_kj`` (near zero whenever Y is centered), and the
    coherence score ``max_kj std_kj``.
    """
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 2 or Y.shape[0] != truth.n:
        raise ValueError(f"Y has shape {Y.shape}, expected ({truth.n}, K-1)")
    K = truth.K
    means = np.empty((K, Y.shape[1]))
    stds = np.empty((K, Y.shape[1]))
    for k in range(1, K + 1):
        rows = Y[truth.indices(k)]
        means[k - 1] = rows.mean(axis=0)
        stds[k - 1] = rows.std(axis=0)
    weighted = np.asarray(truth.sizes, dtype=float) @ means
    return SeparabilityDiagnostic(
        means=means,
        stds=stds,
        weighted_col_sums=weighted,
        coherence=float(stds.max()),
    )


def _delta(L_w: np.ndarray, t_w: float, K: int) -> float:
    n = L_w.shape[0]
    vals, _ = smallest_eigenpairs(L_w, min(K + 1, n))
    if vals.size <= K:
        raise ValueError(f"need lambda_{K + 1}, but the graph has only {n} nodes")
    lam = float(vals[K]) / n
    return min(t_w, abs(lam - t_w))


def sin_theta_upper_bound(L_w, L_tilde_w, t_w: float, K: int) -> float:
    """Subspace perturbation bound ||L_w - L_tilde_w||_F / (n * delta).

    ``delta = min(t_w, |lambda_{K+1}(L_w / n) - t_w|)`` measures the
    eigengap protecting the embedding subspace. Raises
    DegenerateDeltaError when delta is not strictly positive rather than
    returning infinity.
    """
    L_w = np.asarray(L_w, dtype=float)
    L_t = np.asarray(L_tilde_w, dtype=float)
    if L_w.shape != L_t.shape:
        raise ValueError(f"shape mismatch: {L_w.shape} vs {L_t.shape}")
    n = L_w.shape[0]
    delta = _delta(L_w, t_w, K)
    if delta <= DELTA_FLOOR:
        raise DegenerateDeltaError(
            f"delta={delta:.3e} is degenerate (t_w sits on lambda_{K + 1}/n)"
        )
    return float(np.linalg.norm(L_w - L_t, "fro")) / (n * delta)


def sin_theta_min_bound(
    L_w,
    K: int,
    twin_laplacian: Callable[[float], np.ndarray],
    t_grid: Sequence[float] | None = None,
    t_max_w: float | None = None,
) -> tuple[float, float]:
    """Minimized sin-Theta bound over a grid of candidate noise levels.

    For each grid value t, ``twin_laplacian(t)`` must supply the Laplacian
    of an independently generated block-wise identical instance at
    aggregated noise t; the bound is evaluated there and the smallest one
    returned together with its t. When no explicit grid is given, 50
    uniform points in (0, t_max_w] are scanned. Grid points with
    degenerate delta are skipped; if every point degenerates,
    DegenerateDeltaError is raised.
    """
    if t_grid is None:
        if t_max_w is None or t_max_w <= 0.0:
            raise ValueError("need an explicit t_grid or a positive t_max_w")
        t_grid = [t_max_w * i / 50 for i in range(1, 51)]
    L_w = np.asarray(L_w, dtype=float)
    n = L_w.shape[0]
    vals, _ = smallest_eigenpairs(L_w, min(K + 1, n))
    if vals.size <= K:
        raise ValueError(f"need lambda_{K + 1}, but the graph has only {n} nodes")
    lam = float(vals[K]) / n
    best: tuple[float, float] | None = None
    for t in t_grid:
        delta = min(t, abs(lam - t))
        if delta <= DELTA_FLOOR:
            continue
        bound = float(np.linalg.norm(L_w - np.asarray(twin_laplacian(t), float), "fro")) / (
            n * delta
        )
        if best is None or bound < best[0]:
            best = (bound, float(t))
    if best is None:
        raise DegenerateDeltaError("every grid point has degenerate delta")
    return best


def critical_weight(
    g: MultilayerGraph,
    truth: ClusterAssignment,
    p1: float,
    p2: float,
) -> CriticalWeight:
    """Critical first-layer weight for a two-layer unweighted instance.

    Solves, exactly in w1, the linear condition equating the aggregated
    noise level with its aggregated critical bound::

        (K-1)/K * [w1 p1 + (1-w1) p2]
            = w1 * min_k S_{2:K}(L_k^(1)) / n + (1-w1) * min_k S_{2:K}(L_k^(2)) / n

    Returns the root when it lies in [0, 1]; None when the line never
    crosses (both layers reliable, or both unreliable); degenerate when
    the linear coefficient vanishes (symmetric layers).
    """
    if g.L != 2:
        raise GraphError(f"critical weight is defined for 2 layers, got {g.L}")
    for name, p in (("p1", p1), ("p2", p2)):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"{name}={p} outside [0, 1]")
    K = truth.K
    n = truth.n
    c1 = min_within_partial_sum(g, truth, [1.0, 0.0]) / n
    c2 = min_within_partial_sum(g, truth, [0.0, 1.0]) / n
    ratio = (K - 1) / K
    a = ratio * p1 - c1
    b = ratio * p2 - c2
    eps = 1e-12 * max(1.0, abs(a), abs(b))
    if abs(a - b) <= eps:
        return CriticalWeight(w1=None, degenerate=True)
    root = b / (b - a)
    if 0.0 <= root <= 1.0:
        return CriticalWeight(w1=float(root), degenerate=False)
    return CriticalWeight(w1=None, degenerate=False)


def phase_report(
    g: MultilayerGraph,
    truth: ClusterAssignment,
    w,
    noise: NoiseSpec,
) -> PhaseReport:
    """Assemble the full PhaseReport for one graph, weights, and noise spec."""
    w = as_layer_weights(w)
    if noise.L != g.L:
        raise GraphError(f"noise spec has {noise.L} layers, graph has {g.L}")
    t_w, t_max_w = aggregated_noise(noise, w)
    s_min = min_within_partial_sum(g, truth, w)
    K = truth.K
    t_lb = s_min / ((K - 1) * truth.n_max)
    t_ub = s_min / ((K - 1) * truth.n_min)
    regime = classify_regime(t_w, t_lb, t_ub)
    cw = s_min / truth.n
    predicted = predicted_partial_sum(
        t_w, cw, K, truth.n, truth.n_min, truth.n_max, regime
    )
    W_agg = aggregate(g, w)
    L_w = laplacian(W_agg)
    m = min(K + 1, g.n)
    vals, _ = smallest_eigenpairs(L_w, m)
    tie = bool(m > K and vals[K] - vals[K - 1] <= TIE_RTOL * max(1.0, float(vals[K])))
    return PhaseReport(
        t_w=t_w,
        t_max_w=t_max_w,
        t_lb_w=t_lb,
        t_ub_w=t_ub,
        universal_lb=universal_lower_bound(g, truth),
        c_star_w=cw,
        predicted_s2k_per_n=predicted,
        regime=regime,
        connectivity_flag=is_connected(W_agg),
        tie_flag=tie,
    )
