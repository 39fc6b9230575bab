"""Build a two-layer graph by hand and aggregate it.

The aggregated matrix is a convex combination of the layers; its Laplacian
keeps the properties the later analysis relies on (symmetry, zero row
sums, positive semidefiniteness).
"""

import numpy as np

from mlsgc import MultilayerGraph, aggregate, is_connected, laplacian

# Two 4-node layers: a square in layer 1, one diagonal in layer 2.
square = np.array(
    [
        [0.0, 1.0, 0.0, 1.0],
        [1.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 1.0],
        [1.0, 0.0, 1.0, 0.0],
    ]
)
diagonal = np.zeros((4, 4))
diagonal[0, 2] = diagonal[2, 0] = 2.0

g = MultilayerGraph([square, diagonal])
print(g)

for w in ((1.0, 0.0), (0.5, 0.5), (0.0, 1.0)):
    W = aggregate(g, w)
    L = laplacian(W)
    print(f"\nweights {w}")
    print("aggregated matrix:\n", W)
    print("row sums of L:", L.sum(axis=1))
    print("smallest eigenvalue of L:", np.linalg.eigvalsh(L)[0].round(12))
    print("connected:", is_connected(W))
