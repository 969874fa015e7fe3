"""Feature attribution: impurity-based importance and Shapley values.

Shapley values use the hybrid-row value function: v(S) is the mean model
score over background rows with the instance's values patched in on the
coalition S. Exhaustive mode enumerates all coalitions (p <= 12); sampled
mode averages marginal contributions over seeded random permutations,
drawn in antithetic pairs (a permutation and its reverse) to cut variance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .learners import TREE_FAMILIES, TrainedModel, predict_scores
from .preprocess import FeatureMatrix
from .seeding import derive_seed

_MAX_EXHAUSTIVE = 12
_EVAL_ROW_CAP = 200_000

GINI_METHOD = "gini"
SHAPLEY_METHOD = "shapley_mean_absolute"


@dataclass
class ImportanceTable:
    feature_names: tuple[str, ...]
    values: np.ndarray
    method: str
    normalized: bool

    def ranked(self) -> list[tuple[str, float]]:
        order = np.argsort(-self.values, kind="stable")
        return [(self.feature_names[i], float(self.values[i])) for i in order]

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "normalized": self.normalized,
            "importances": {n: float(v) for n, v in zip(self.feature_names, self.values)},
            "ranking": [n for n, _ in self.ranked()],
        }


def gini_importance(model: TrainedModel) -> ImportanceTable:
    """Impurity-decrease importance for tree-based models.

    importance[j] = sum over nodes splitting on j of
    (node fraction of the root) * impurity decrease, averaged over trees
    and normalized to sum 1. A model with no splits keeps all-zero values
    and normalized=False.
    """
    family = model.spec.family
    if family not in TREE_FAMILIES:
        raise ValueError(f"gini importance needs a tree-based model, got {family}")
    if family == "decision_tree":
        trees = [model.state]
    else:
        trees = model.state.trees

    p = model.n_features
    total = np.zeros(p)
    for tree in trees:
        root_n = float(tree.n_node[0])
        internal = tree.feature >= 0
        contrib = (tree.n_node[internal] / root_n) * tree.gain[internal]
        np.add.at(total, tree.feature[internal], contrib)
    if trees:
        total /= len(trees)

    mass = float(total.sum())
    if mass > 0.0:
        return ImportanceTable(model.feature_names, total / mass, GINI_METHOD, True)
    return ImportanceTable(model.feature_names, total, GINI_METHOD, False)


@dataclass
class AttributionVector:
    """Per-feature signed contributions for one instance.

    Contributions sum to instance_value - baseline_value (exactly for
    exhaustive mode, up to float accumulation for sampled mode).
    standard_errors is None in exhaustive mode.
    """

    contributions: np.ndarray
    baseline_value: float
    instance_value: float
    mode: str
    n_samples: int
    standard_errors: np.ndarray | None = None


ScoreFn = Callable[[np.ndarray], np.ndarray]


def _as_score_fn(model: TrainedModel | ScoreFn) -> ScoreFn:
    if isinstance(model, TrainedModel):
        return lambda X: np.asarray(predict_scores(model, X), dtype=np.float64)
    return lambda X: np.asarray(model(X), dtype=np.float64)


def _as_background(background: FeatureMatrix | np.ndarray) -> np.ndarray:
    B = background.X if isinstance(background, FeatureMatrix) else np.asarray(background, dtype=np.float64)
    if B.ndim != 2 or B.shape[0] == 0:
        raise ValueError("background must be a non-empty 2-d row set")
    return B


def shapley_values(
    model: TrainedModel | ScoreFn,
    instance: np.ndarray,
    background: FeatureMatrix | np.ndarray,
    n_samples: int = 200,
    seed: int = 0,
    mode: str = "sampled",
) -> AttributionVector:
    score_fn = _as_score_fn(model)
    bg = _as_background(background)
    x = np.asarray(instance, dtype=np.float64).reshape(-1)
    if x.shape[0] != bg.shape[1]:
        raise ValueError("instance width does not match background width")
    if mode == "exhaustive":
        return _shapley_exhaustive(score_fn, x, bg)
    if mode == "sampled":
        return _shapley_sampled(score_fn, x, bg, n_samples, seed)
    raise ValueError(f"unknown mode {mode!r}")


def _coalition_values(score_fn: ScoreFn, x: np.ndarray, bg: np.ndarray, masks: np.ndarray) -> np.ndarray:
    """Mean score per coalition mask; masks has shape (n_masks, p)."""
    n_masks = masks.shape[0]
    B = bg.shape[0]
    out = np.empty(n_masks)
    step = max(1, _EVAL_ROW_CAP // B)
    for start in range(0, n_masks, step):
        chunk = masks[start : start + step]
        hybrids = np.where(chunk[:, None, :], x[None, None, :], bg[None, :, :])
        scores = score_fn(hybrids.reshape(-1, x.shape[0]))
        out[start : start + chunk.shape[0]] = scores.reshape(chunk.shape[0], B).mean(axis=1)
    return out


def _shapley_exhaustive(score_fn: ScoreFn, x: np.ndarray, bg: np.ndarray) -> AttributionVector:
    p = x.shape[0]
    if p > _MAX_EXHAUSTIVE:
        raise ValueError(f"exhaustive mode supports at most {_MAX_EXHAUSTIVE} features, got {p}")
    n_masks = 1 << p
    masks = np.zeros((n_masks, p), dtype=bool)
    for j in range(p):
        masks[:, j] = (np.arange(n_masks) >> j) & 1
    v = _coalition_values(score_fn, x, bg, masks)

    fact = [math.factorial(i) for i in range(p + 1)]
    weights = [fact[s] * fact[p - 1 - s] / fact[p] for s in range(p)]
    sizes = masks.sum(axis=1)

    phi = np.zeros(p)
    for m in range(n_masks):
        s = int(sizes[m])
        for j in range(p):
            if not masks[m, j]:
                phi[j] += weights[s] * (v[m | (1 << j)] - v[m])

    return AttributionVector(
        contributions=phi,
        baseline_value=float(v[0]),
        instance_value=float(v[n_masks - 1]),
        mode="exhaustive",
        n_samples=n_masks,
    )


def _shapley_sampled(
    score_fn: ScoreFn, x: np.ndarray, bg: np.ndarray, n_samples: int, seed: int
) -> AttributionVector:
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    p = x.shape[0]
    B = bg.shape[0]
    rng = np.random.default_rng(seed)

    perms = np.empty((n_samples, p), dtype=np.int64)
    for i in range(0, n_samples, 2):
        perm = rng.permutation(p)
        perms[i] = perm
        if i + 1 < n_samples:
            perms[i + 1] = perm[::-1]

    marginals = np.empty((n_samples, p))
    batch = max(1, _EVAL_ROW_CAP // ((p + 1) * B))
    for start in range(0, n_samples, batch):
        pb = perms[start : start + batch]
        nb = pb.shape[0]
        masks = np.zeros((nb, p + 1, p), dtype=bool)
        rows = np.arange(nb)
        for t in range(1, p + 1):
            masks[:, t] = masks[:, t - 1]
            masks[rows, t, pb[:, t - 1]] = True
        v = _coalition_values(score_fn, x, bg, masks.reshape(-1, p)).reshape(nb, p + 1)
        steps = np.diff(v, axis=1)  # contribution of the feature added at step t
        for i in range(nb):
            marginals[start + i, pb[i]] = steps[i]

    phi = marginals.mean(axis=0)

    # antithetic pairs are the independent units for the error estimate
    n_pairs = n_samples // 2
    units = []
    if n_pairs:
        units.append(0.5 * (marginals[0 : 2 * n_pairs : 2] + marginals[1 : 2 * n_pairs : 2]))
    if n_samples % 2:
        units.append(marginals[-1:])
    unit_matrix = np.vstack(units)
    if unit_matrix.shape[0] >= 2:
        se = unit_matrix.std(axis=0, ddof=1) / math.sqrt(unit_matrix.shape[0])
    else:
        se = None

    baseline = float(score_fn(bg).mean())
    instance_value = float(score_fn(x.reshape(1, -1))[0])
    return AttributionVector(
        contributions=phi,
        baseline_value=baseline,
        instance_value=instance_value,
        mode="sampled",
        n_samples=n_samples,
        standard_errors=se,
    )


def shapley_summary(
    model: TrainedModel | ScoreFn,
    data: FeatureMatrix | np.ndarray,
    feature_names: Sequence[str],
    n_instances: int = 500,
    background_size: int = 100,
    n_samples: int = 200,
    seed: int = 0,
) -> tuple[ImportanceTable, np.ndarray, np.ndarray]:
    """Mean |shapley| per feature over a seeded evaluation subsample.

    Returns the table, the per-instance contribution matrix, and the row
    ids of the evaluated instances. Per-instance seeds derive from
    (seed, row id).
    """
    X = data.X if isinstance(data, FeatureMatrix) else np.asarray(data, dtype=np.float64)
    n = X.shape[0]
    bg_rng = np.random.default_rng(derive_seed(seed, "background"))
    bg_idx = bg_rng.choice(n, size=min(background_size, n), replace=False)
    eval_rng = np.random.default_rng(derive_seed(seed, "instances"))
    eval_idx = eval_rng.choice(n, size=min(n_instances, n), replace=False)
    background = X[bg_idx]

    rows = np.empty((eval_idx.size, X.shape[1]))
    for i, row_id in enumerate(eval_idx):
        vec = shapley_values(
            model,
            X[row_id],
            background,
            n_samples=n_samples,
            seed=derive_seed(seed, "shapley", int(row_id)),
            mode="sampled",
        )
        rows[i] = vec.contributions
    table = ImportanceTable(
        feature_names=tuple(feature_names),
        values=np.abs(rows).mean(axis=0),
        method=SHAPLEY_METHOD,
        normalized=False,
    )
    return table, rows, eval_idx
