"""Eigendecomposition of graph Laplacians and subspace distances.

The clustering pipeline needs the few smallest Laplacian eigenpairs: the
eigenvector matrix Y (columns 2..K) embeds the nodes, and the partial
eigenvalue sum over lambda_2..lambda_K is the optimal value of the
orthonormal, centered trace minimization. Principal angles between two
embeddings quantify subspace perturbation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

#: Above this size the dense symmetric solver gives way to shifted Lanczos.
DENSE_EIG_LIMIT = 2000

#: Relative residual tolerance accepted per eigenpair.
RESIDUAL_RTOL = 1e-7

#: Relative gap under which the K-th eigenvalue counts as tied with the next.
TIE_RTOL = 1e-8


class EigensolverError(RuntimeError):
    """Eigensolver failed to converge or returned inaccurate pairs."""


@dataclass(frozen=True)
class SpectralEmbedding:
    """Smallest eigenvalues of an aggregated Laplacian and the embedding Y.

    ``eigenvalues`` holds lambda_1 <= ... <= lambda_K; ``Y`` is the
    n x (K-1) matrix whose column j is the eigenvector of lambda_{j+1}.
    ``tie_flag`` marks a (near-)degenerate tie between lambda_K and
    lambda_{K+1}, where the embedding basis is not unique and cluster
    separability becomes basis-dependent.
    """

    eigenvalues: np.ndarray
    Y: np.ndarray
    K: int
    tie_flag: bool = False


@dataclass(frozen=True)
class SubspaceDistance:
    """Principal angles between two embeddings and the sin-Theta distance.

    ``sin_theta_frobenius`` is the Frobenius norm of the entrywise sine of
    the diagonal principal-angle matrix; it lies in [0, sqrt(K-1)].
    """

    principal_angles: np.ndarray
    sin_theta_frobenius: float


def _check_laplacian(L) -> np.ndarray:
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ValueError(f"Laplacian must be square, got shape {L.shape}")
    if not np.array_equal(L, L.T):
        raise ValueError("Laplacian must be symmetric")
    return L


def _lambda_max_estimate(L: np.ndarray) -> float:
    # Gershgorin: every Laplacian eigenvalue is at most twice the max degree.
    return 2.0 * float(L.diagonal().max(initial=0.0))


def smallest_eigenpairs(L, m: int) -> tuple[np.ndarray, np.ndarray]:
    """The ``m`` smallest eigenpairs of a symmetric PSD matrix.

    Parameters
    ----------
    L : array-like, (n, n)
        Symmetric positive semidefinite matrix (a graph Laplacian).
    m : int
        Number of eigenpairs, ``1 <= m <= n``.

    Returns
    -------
    (eigenvalues, eigenvectors)
        Eigenvalues ascending, eigenvectors as columns, orthonormal.

    Raises
    ------
    EigensolverError
        On non-convergence or when a residual check fails; results are
        never silently truncated.
    """
    L = _check_laplacian(L)
    n = L.shape[0]
    if not 1 <= m <= n:
        raise ValueError(f"m={m} outside 1..{n}")
    if n <= DENSE_EIG_LIMIT:
        try:
            vals, vecs = scipy.linalg.eigh(L, subset_by_index=(0, m - 1))
        except scipy.linalg.LinAlgError as exc:
            raise EigensolverError(f"dense eigensolver failed: {exc}") from exc
    else:
        # Shifted Lanczos: L - sigma*I is positive definite for sigma < 0,
        # so shift-invert targets the smallest eigenvalues.
        sigma = -1e-3 * max(1.0, _lambda_max_estimate(L))
        try:
            vals, vecs = scipy.sparse.linalg.eigsh(
                scipy.sparse.csc_matrix(L), k=m, sigma=sigma, which="LM"
            )
        except scipy.sparse.linalg.ArpackNoConvergence as exc:
            raise EigensolverError(f"Lanczos iteration did not converge: {exc}") from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    tol = RESIDUAL_RTOL * max(1.0, _lambda_max_estimate(L))
    residuals = np.linalg.norm(L @ vecs - vecs * vals, axis=0)
    if np.any(residuals > tol):
        raise EigensolverError(
            f"eigenpair residual {residuals.max():.3e} exceeds tolerance {tol:.3e}"
        )
    return vals, vecs


def embedding(L, K: int) -> SpectralEmbedding:
    """Spectral embedding from the K smallest eigenpairs of ``L``.

    Column j of Y is the eigenvector of lambda_{j+1}; the trivial constant
    eigenvector of lambda_1 = 0 is dropped by index. If lambda_2 is
    numerically zero the underlying graph is disconnected and a warning is
    issued (columns of Y then need not be orthogonal to the ones vector).
    """
    L = _check_laplacian(L)
    n = L.shape[0]
    if K < 2:
        raise ValueError(f"cluster count K={K} must be at least 2")
    if K > n:
        raise ValueError(f"cluster count K={K} exceeds node count {n}")
    m = min(K + 1, n)
    vals, vecs = smallest_eigenpairs(L, m)
    scale = max(1.0, float(vals[K - 1]))
    if vals[1] <= 1e-8 * scale:
        warnings.warn(
            "lambda_2 is numerically zero: the aggregated graph looks "
            "disconnected and the embedding basis is not unique",
            RuntimeWarning,
            stacklevel=2,
        )
    tie = bool(m > K and vals[K] - vals[K - 1] <= TIE_RTOL * max(1.0, float(vals[K])))
    return SpectralEmbedding(
        eigenvalues=vals[:K].copy(), Y=vecs[:, 1:K].copy(), K=K, tie_flag=tie
    )


def partial_eigenvalue_sum(L, K: int) -> float:
    """Sum of the 2nd through K-th smallest Laplacian eigenvalues.

    Equals the optimal value of the trace minimization over orthonormal,
    centered n x (K-1) matrices; clamped at zero against round-off.
    """
    L = _check_laplacian(L)
    n = L.shape[0]
    if K < 2:
        raise ValueError(f"cluster count K={K} must be at least 2")
    if K > n:
        raise ValueError(f"cluster count K={K} exceeds node count {n}")
    if n <= DENSE_EIG_LIMIT:
        vals = scipy.linalg.eigh(L, eigvals_only=True, subset_by_index=(0, K - 1))
    else:
        vals, _ = smallest_eigenpairs(L, K)
    return float(max(vals[1:K].sum(), 0.0))


def principal_angles(Y, Ytilde) -> SubspaceDistance:
    """Principal angles between the column spaces of two embeddings.

    Angles are the arccosines of the singular values of ``Y^T Ytilde``
    (clamped to [0, 1] against round-off); the sin-Theta distance is the
    Frobenius norm of their sines.

    Both inputs must have orthonormal columns (checked to Frobenius
    tolerance 1e-6) and identical shape.
    """
    Y = np.asarray(Y, dtype=float)
    Yt = np.asarray(Ytilde, dtype=float)
    if Y.ndim != 2 or Yt.ndim != 2 or Y.shape != Yt.shape:
        raise ValueError(f"shape mismatch: {Y.shape} vs {Yt.shape}")
    eye = np.eye(Y.shape[1])
    for name, M in (("Y", Y), ("Ytilde", Yt)):
        if np.linalg.norm(M.T @ M - eye) > 1e-6:
            raise ValueError(f"{name} does not have orthonormal columns")
    sigma = np.linalg.svd(Y.T @ Yt, compute_uv=False)
    sigma = np.clip(sigma, 0.0, 1.0)
    angles = np.arccos(sigma)
    dist = float(np.sqrt(np.sum(1.0 - sigma**2)))
    return SubspaceDistance(principal_angles=angles, sin_theta_frobenius=dist)
