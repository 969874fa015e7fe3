"""k-nearest-neighbour scoring on the stored training matrix.

Euclidean distance on the scaled features; ties at the k-th distance are
broken by the smaller training-row index, exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_CHUNK = 2048


@dataclass
class KnnState:
    X: np.ndarray
    y: np.ndarray
    n_neighbors: int


def fit_knn(X: np.ndarray, y: np.ndarray, n_neighbors: int) -> KnnState:
    if n_neighbors > X.shape[0]:
        raise ValueError(
            f"n_neighbors={n_neighbors} exceeds the {X.shape[0]} training rows"
        )
    return KnnState(X=X.copy(), y=np.asarray(y, dtype=np.float64), n_neighbors=n_neighbors)


def knn_scores(state: KnnState, Q: np.ndarray) -> np.ndarray:
    """Positive-neighbour fraction among the k nearest training rows."""
    T = state.X
    y = state.y
    k = state.n_neighbors
    tt = np.einsum("ij,ij->i", T, T)
    out = np.empty(Q.shape[0])

    for start in range(0, Q.shape[0], _CHUNK):
        Qc = Q[start : start + _CHUNK]
        qq = np.einsum("ij,ij->i", Qc, Qc)
        d2 = qq[:, None] + tt[None, :] - 2.0 * (Qc @ T.T)
        kth = np.partition(d2, k - 1, axis=1)[:, k - 1]
        for r in range(Qc.shape[0]):
            row = d2[r]
            closer = row < kth[r]
            n_closer = int(closer.sum())
            pos = float(y[closer].sum())
            need = k - n_closer
            if need > 0:
                tied = np.nonzero(row == kth[r])[0][:need]  # ascending index order
                pos += float(y[tied].sum())
            out[start + r] = pos / k
    return out
