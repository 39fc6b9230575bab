"""Spectral embedding and the partial eigenvalue sum.

The n x (K-1) embedding stacks eigenvectors 2..K of the Laplacian. Its
columns are orthonormal and orthogonal to the all-ones vector, and the
trace of Y^T L Y equals the sum of eigenvalues 2..K, which is the
quantity the phase analysis tracks.
"""

import numpy as np

from mlsgc import embedding, laplacian, partial_eigenvalue_sum

# A 10-node path: eigenvalues are 2 - 2 cos(pi k / n), all known.
n = 10
W = np.zeros((n, n))
for i in range(n - 1):
    W[i, i + 1] = W[i + 1, i] = 1.0
L = laplacian(W)

K = 4
emb = embedding(L, K)
Y = emb.Y

print("eigenvalues 1..K:", np.round(emb.eigenvalues, 6))
print("Y^T Y:\n", np.round(Y.T @ Y, 10))
print("1^T Y:", np.round(np.ones(n) @ Y, 10))

s = partial_eigenvalue_sum(L, K)
print("\npartial sum S_2..K:", s)
print("trace(Y^T L Y):   ", float(np.trace(Y.T @ L @ Y)))
exact = sum(2.0 - 2.0 * np.cos(np.pi * k / n) for k in range(1, K))
print("closed form:      ", exact)
