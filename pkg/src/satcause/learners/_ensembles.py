"""Random forests and stagewise gradient boosting over the CART builder."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..numerics import sigmoid
from ._tree import GINI, SSE, FlatTree, grow_tree

_HESS_FLOOR = 1e-12
_RESIDUAL_STOP = 1e-10


@dataclass
class ForestState:
    trees: list[FlatTree]


@dataclass
class BoostState:
    init_raw: float
    learning_rate: float
    trees: list[FlatTree]


def fit_forest(
    X: np.ndarray,
    y: np.ndarray,
    *,
    n_trees: int,
    max_depth: int,
    features_per_split: int | None,
    bootstrap: bool,
    seed: int,
) -> ForestState:
    """Bootstrap rows per tree; features sampled per node.

    Tree t uses the generator seeded with seed + t for both its bootstrap
    draw and its per-node feature subsets, so trees are independent and
    the whole fit is reproducible tree by tree.
    """
    n, p = X.shape
    fps = features_per_split if features_per_split is not None else max(1, math.isqrt(p))
    trees = []
    for t in range(n_trees):
        rng = np.random.default_rng(seed + t)
        if bootstrap:
            idx = rng.integers(0, n, size=n)
            Xt, yt = X[idx], y[idx]
        else:
            Xt, yt = X, y
        trees.append(
            grow_tree(
                Xt,
                np.asarray(yt, dtype=np.float64),
                criterion=GINI,
                max_depth=max_depth,
                rng=rng,
                features_per_split=fps if fps < p else None,
            )
        )
    return ForestState(trees=trees)


def forest_scores(state: ForestState, X: np.ndarray) -> np.ndarray:
    total = np.zeros(X.shape[0])
    for tree in state.trees:
        total += tree.predict_value(X)
    return total / len(state.trees)


def fit_boosting(
    X: np.ndarray,
    y: np.ndarray,
    *,
    n_stages: int,
    max_depth: int,
    learning_rate: float,
) -> BoostState:
    """Logistic-loss boosting: each stage fits a squared-error tree to the
    negative gradient (y - p) and sets leaf values by a Newton step
    (sum residual / sum p(1-p) within the leaf)."""
    y1 = np.asarray(y, dtype=np.float64)
    n_pos = float(y1.sum())
    n_neg = float(y1.shape[0] - n_pos)
    if n_pos == 0.0 or n_neg == 0.0:
        raise ValueError("gradient boosting needs both classes in the training set")
    init_raw = math.log(n_pos / n_neg)

    raw = np.full(y1.shape[0], init_raw)
    trees: list[FlatTree] = []
    for _ in range(n_stages):
        prob = sigmoid(raw)
        residual = y1 - prob
        if float(np.abs(residual).max()) < _RESIDUAL_STOP:
            break
        hess = prob * (1.0 - prob)

        def newton_leaf(rows: np.ndarray) -> float:
            return float(residual[rows].sum()) / max(float(hess[rows].sum()), _HESS_FLOOR)

        tree = grow_tree(
            X,
            residual,
            criterion=SSE,
            max_depth=max_depth,
            leaf_value=newton_leaf,
        )
        raw = raw + learning_rate * tree.predict_value(X)
        trees.append(tree)
    return BoostState(init_raw=init_raw, learning_rate=learning_rate, trees=trees)


def boosting_scores(state: BoostState, X: np.ndarray) -> np.ndarray:
    raw = np.full(X.shape[0], state.init_raw)
    for tree in state.trees:
        raw += state.learning_rate * tree.predict_value(X)
    return sigmoid(raw)
