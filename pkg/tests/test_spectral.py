"""Eigensolver wrapper, spectral embedding, partial sums, principal angles."""

import numpy as np
import pytest

import mlsgc.spectral as spectral
from mlsgc import (
    EigensolverError,
    embedding,
    laplacian,
    partial_eigenvalue_sum,
    principal_angles,
    smallest_eigenpairs,
)


def path_laplacian(n):
    W = np.zeros((n, n))
    for i in range(n - 1):
        W[i, i + 1] = W[i + 1, i] = 1.0
    return laplacian(W)


def complete_laplacian(m):
    return laplacian(np.ones((m, m)) - np.eye(m))


def random_laplacian(n, seed, density=0.5):
    rng = np.random.default_rng(seed)
    A = rng.random((n, n)) * (rng.random((n, n)) < density)
    W = np.triu(A, 1) + np.triu(A, 1).T
    return laplacian(W)


class TestSmallestEigenpairs:
    def test_zero_matrix(self):
        vals, vecs = smallest_eigenpairs(np.zeros((3, 3)), 2)
        np.testing.assert_allclose(vals, [0.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(vecs.T @ vecs, np.eye(2), atol=1e-10)

    def test_path_spectrum(self):
        vals, _ = smallest_eigenpairs(path_laplacian(3), 3)
        np.testing.assert_allclose(vals, [0.0, 1.0, 3.0], atol=1e-10)

    def test_complete_graph_spectrum(self):
        # Closed form: K_m Laplacian has eigenvalues 0 and m (m-1 times).
        m = 6
        vals, _ = smallest_eigenpairs(complete_laplacian(m), m)
        np.testing.assert_allclose(vals, [0.0] + [float(m)] * (m - 1), atol=1e-9)

    def test_matches_full_dense_oracle(self):
        for seed in range(5):
            L = random_laplacian(12, seed)
            full = np.linalg.eigvalsh(L)
            vals, vecs = smallest_eigenpairs(L, 5)
            np.testing.assert_allclose(vals, full[:5], atol=1e-9)
            # Residual check: these are true eigenpairs.
            np.testing.assert_allclose(L @ vecs, vecs * vals, atol=1e-8)

    def test_sparse_path_above_dense_limit(self):
        # Disjoint triangles push n past the dense cutoff; spectrum known.
        n = spectral.DENSE_EIG_LIMIT + 1
        n -= n % 3
        blocks = n // 3
        W = np.zeros((n, n))
        tri = np.ones((3, 3)) - np.eye(3)
        for b in range(blocks):
            W[3 * b : 3 * b + 3, 3 * b : 3 * b + 3] = tri
        vals, vecs = smallest_eigenpairs(laplacian(W), 4)
        np.testing.assert_allclose(vals, [0.0, 0.0, 0.0, 0.0], atol=1e-8)
        np.testing.assert_allclose(vecs.T @ vecs, np.eye(4), atol=1e-8)

    def test_m_out_of_range(self):
        with pytest.raises(ValueError):
            smallest_eigenpairs(np.zeros((3, 3)), 0)
        with pytest.raises(ValueError):
            smallest_eigenpairs(np.zeros((3, 3)), 4)

    def test_asymmetric_rejected(self):
        M = np.zeros((3, 3))
        M[0, 1] = 1.0
        with pytest.raises(ValueError):
            smallest_eigenpairs(M, 1)


class TestEmbedding:
    def test_two_cliques_bridge_sign_pattern(self):
        # Fiedler vector of two cliques plus a weak bridge separates them.
        m = 5
        W = np.zeros((2 * m, 2 * m))
        clique = np.ones((m, m)) - np.eye(m)
        W[:m, :m] = clique
        W[m:, m:] = clique
        W[m - 1, m] = W[m, m - 1] = 0.1
        emb = embedding(laplacian(W), 2)
        col = emb.Y[:, 0]
        assert np.all(np.sign(col[:m]) == np.sign(col[0]))
        assert np.all(np.sign(col[m:]) == -np.sign(col[0]))

    def test_complete_graph_lambda2(self):
        n = 7
        emb = embedding(complete_laplacian(n), 2)
        assert emb.eigenvalues[1] == pytest.approx(n, rel=1e-9)

    def test_orthonormal_and_centered(self):
        L = path_laplacian(30)
        emb = embedding(L, 4)
        Y = emb.Y
        np.testing.assert_allclose(Y.T @ Y, np.eye(3), atol=1e-9)
        np.testing.assert_allclose(Y.T @ np.ones(30), 0.0, atol=1e-9)

    def test_disconnected_graph_warns(self):
        W = np.zeros((6, 6))
        W[0, 1] = W[1, 0] = 1.0
        W[2, 3] = W[3, 2] = 1.0
        W[4, 5] = W[5, 4] = 1.0
        with pytest.warns(RuntimeWarning):
            emb = embedding(laplacian(W), 3)
        np.testing.assert_allclose(emb.Y.T @ emb.Y, np.eye(2), atol=1e-9)

    def test_tie_flag_on_degenerate_gap(self):
        # K_5 with K=3: lambda_3 = lambda_4 = 5 exactly.
        emb = embedding(complete_laplacian(5), 3)
        assert emb.tie_flag

    def test_k_bounds(self):
        with pytest.raises(ValueError):
            embedding(np.zeros((3, 3)), 1)
        with pytest.raises(ValueError):
            embedding(np.zeros((3, 3)), 4)


class TestPartialEigenvalueSum:
    def test_path_k2(self):
        assert partial_eigenvalue_sum(path_laplacian(3), 2) == pytest.approx(1.0)

    def test_path_k3(self):
        assert partial_eigenvalue_sum(path_laplacian(3), 3) == pytest.approx(4.0)

    def test_zero_matrix(self):
        assert partial_eigenvalue_sum(np.zeros((5, 5)), 3) == 0.0

    def test_matches_brute_force(self):
        for seed in range(10):
            L = random_laplacian(9, seed)
            full = np.sort(np.linalg.eigvalsh(L))
            for K in (2, 3, 5):
                assert partial_eigenvalue_sum(L, K) == pytest.approx(
                    full[1:K].sum(), abs=1e-9
                )

    def test_courant_fischer_identity(self):
        # trace(Y^T L Y) over the embedding equals the partial sum.
        for seed in range(5):
            L = random_laplacian(10, seed, density=0.9)
            K = 4
            Y = embedding(L, K).Y
            assert np.trace(Y.T @ L @ Y) == pytest.approx(
                partial_eigenvalue_sum(L, K), abs=1e-8
            )


class TestPrincipalAngles:
    def orthonormal(self, n, k, seed):
        rng = np.random.default_rng(seed)
        Q, _ = np.linalg.qr(rng.standard_normal((n, k)))
        return Q

    def test_identity(self):
        Y = self.orthonormal(8, 3, 0)
        d = principal_angles(Y, Y)
        np.testing.assert_allclose(d.principal_angles, 0.0, atol=1e-7)
        assert d.sin_theta_frobenius == pytest.approx(0.0, abs=1e-7)

    def test_rotation_invariance(self):
        Y = self.orthonormal(8, 3, 1)
        Q = self.orthonormal(3, 3, 2)
        d = principal_angles(Y, Y @ Q)
        assert d.sin_theta_frobenius == pytest.approx(0.0, abs=1e-7)

    def test_orthogonal_complement(self):
        Y = np.array([[1.0], [0.0]])
        Z = np.array([[0.0], [1.0]])
        d = principal_angles(Y, Z)
        assert d.principal_angles[0] == pytest.approx(np.pi / 2)
        assert d.sin_theta_frobenius == pytest.approx(1.0)

    def test_known_angle(self):
        theta = 0.3
        Y = np.array([[1.0], [0.0]])
        Z = np.array([[np.cos(theta)], [np.sin(theta)]])
        d = principal_angles(Y, Z)
        assert d.principal_angles[0] == pytest.approx(theta, abs=1e-10)
        assert d.sin_theta_frobenius == pytest.approx(np.sin(theta), abs=1e-10)

    def test_rejects_non_orthonormal(self):
        Y = np.ones((4, 2))
        with pytest.raises(ValueError):
            principal_angles(Y, Y)
