"""Accuracy, k-fold CV, grid search, learning curves, and ROC/AUC."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .learners import ModelSpec, TrainedModel, fit, predict_labels
from .preprocess import FeatureMatrix


def accuracy(labels: Sequence[int], predictions: Sequence[int]) -> float:
    """Fraction of positions where predictions match labels."""
    labels = np.asarray(labels)
    predictions = np.asarray(predictions)
    if labels.shape != predictions.shape:
        raise ValueError(f"length mismatch: {labels.shape} vs {predictions.shape}")
    if labels.size == 0:
        raise ValueError("accuracy of an empty sequence is undefined")
    return float(np.mean(labels == predictions))


def kfold_split(n: int, k: int, seed: int) -> list[np.ndarray]:
    """Seeded shuffle then contiguous slices; fold sizes differ by at most 1."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > n:
        raise ValueError(f"cannot make {k} folds from {n} rows")
    perm = np.random.default_rng(seed).permutation(n)
    base = n // k
    extra = n % k
    folds = []
    start = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        folds.append(np.sort(perm[start : start + size]))
        start += size
    return folds


@dataclass
class CvReport:
    """Grid-search record: identical folds for every candidate."""

    family: str
    candidates: list[dict[str, Any]]
    fold_accuracies: list[list[float]]
    mean_accuracies: list[float]
    selected_index: int
    selected: dict[str, Any]
    holdout_accuracy: float | None = None

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "candidates": self.candidates,
            "fold_accuracies": self.fold_accuracies,
            "mean_accuracies": self.mean_accuracies,
            "selected_index": self.selected_index,
            "selected": self.selected,
            "holdout_accuracy": self.holdout_accuracy,
        }


def _candidate_key(candidate: dict[str, Any]) -> tuple:
    return tuple(sorted(candidate.items()))


def grid_search(
    family: str,
    grid: Sequence[dict[str, Any]],
    train: FeatureMatrix,
    k: int,
    seed: int,
    base_hyperparameters: dict[str, Any] | None = None,
) -> tuple[CvReport, TrainedModel]:
    """Evaluate every candidate on the same folds; refit the winner on all rows.

    Candidates are dicts merged over ``base_hyperparameters``. Ties on
    mean CV accuracy go to the smallest candidate (sorted by parameter
    name, then value), so grids over a single parameter pick the smallest
    winning value.
    """
    if not grid:
        raise ValueError("grid must be non-empty")
    base = dict(base_hyperparameters or {})
    candidates = sorted((dict(c) for c in grid), key=_candidate_key)
    specs = [ModelSpec(family, {**base, **c}, seed) for c in candidates]  # validate all first

    folds = kfold_split(train.n_rows, k, seed)
    all_rows = np.arange(train.n_rows)
    fold_train_idx = [np.setdiff1d(all_rows, f, assume_unique=True) for f in folds]

    fold_accuracies: list[list[float]] = []
    mean_accuracies: list[float] = []
    for spec in specs:
        accs = []
        for fold, tr_idx in zip(folds, fold_train_idx):
            model = fit(spec, train.take_rows(tr_idx))
            preds = predict_labels(model, train.X[fold])
            accs.append(accuracy(train.y[fold], preds))
        fold_accuracies.append(accs)
        mean_accuracies.append(float(np.mean(accs)))

    selected_index = 0
    for i in range(1, len(candidates)):
        if mean_accuracies[i] > mean_accuracies[selected_index]:
            selected_index = i

    report = CvReport(
        family=family,
        candidates=candidates,
        fold_accuracies=fold_accuracies,
        mean_accuracies=mean_accuracies,
        selected_index=selected_index,
        selected=candidates[selected_index],
    )
    best_model = fit(specs[selected_index], train)
    return report, best_model


@dataclass
class LearningCurve:
    """Mean train/validation accuracy as the training budget grows."""

    points: list[tuple[float, float, float]]  # (training_size, train_acc, val_acc)

    def to_rows(self) -> list[list[float]]:
        return [[p[0], p[1], p[2]] for p in self.points]


def learning_curve(
    spec: ModelSpec,
    train: FeatureMatrix,
    sizes: Sequence[float],
    k: int,
    seed: int,
) -> LearningCurve:
    """k-fold curve over nested subsamples of the per-fold training rows.

    Each fold's training rows are shuffled once (seeded); a size fraction
    takes a prefix of that shuffle, sorted back into row order. Smaller
    samples are therefore subsets of larger ones, and fraction 1.0
    reproduces plain k-fold CV exactly.
    """
    sizes = list(sizes)
    if not sizes:
        raise ValueError("sizes must be non-empty")
    if any(not (0.0 < s <= 1.0) for s in sizes):
        raise ValueError("every size fraction must lie in (0, 1]")
    if sorted(sizes) != sizes:
        raise ValueError("sizes must be increasing")

    folds = kfold_split(train.n_rows, k, seed)
    all_rows = np.arange(train.n_rows)
    shuffles = []
    rng = np.random.default_rng(seed)
    for f in folds:
        tr_idx = np.setdiff1d(all_rows, f, assume_unique=True)
        shuffles.append(rng.permutation(tr_idx))

    points = []
    for s in sizes:
        train_accs = []
        val_accs = []
        used_sizes = []
        for fold, shuffled in zip(folds, shuffles):
            m = int(np.floor(s * shuffled.size + 0.5))
            if m < 2:
                raise ValueError(f"size fraction {s} leaves fewer than 2 training rows")
            sub = np.sort(shuffled[:m])
            model = fit(spec, train.take_rows(sub))
            train_accs.append(accuracy(train.y[sub], predict_labels(model, train.X[sub])))
            val_accs.append(accuracy(train.y[fold], predict_labels(model, train.X[fold])))
            used_sizes.append(m)
        points.append(
            (float(np.mean(used_sizes)), float(np.mean(train_accs)), float(np.mean(val_accs)))
        )

    for prev, cur in zip(points, points[1:]):
        if cur[0] <= prev[0]:
            raise ValueError("size fractions round to non-increasing training sizes")
    return LearningCurve(points=points)


@dataclass
class RocResult:
    """ROC points from (0,0) to (1,1) plus the trapezoidal AUC."""

    points: list[tuple[float, float]]
    auc: float

    def to_rows(self) -> list[list[float]]:
        return [[fpr, tpr] for fpr, tpr in self.points]


def roc_curve(scores: Sequence[float], labels: Sequence[int]) -> RocResult:
    """Threshold sweep over distinct scores descending; ties share one step."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape:
        raise ValueError("scores and labels must have equal length")
    n_pos = int((labels == 1).sum())
    n_neg = int((labels == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC needs both classes present")

    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_pos = (labels[order] == 1).astype(np.int64)

    tp = np.cumsum(sorted_pos)
    fp = np.cumsum(1 - sorted_pos)
    # keep only the last index of each tied-score block
    distinct = np.nonzero(np.diff(sorted_scores))[0]
    cut = np.append(distinct, scores.size - 1)

    points = [(0.0, 0.0)]
    for i in cut:
        points.append((fp[i] / n_neg, tp[i] / n_pos))
    if points[-1] != (1.0, 1.0):
        points.append((1.0, 1.0))

    auc = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        auc += 0.5 * (y0 + y1) * (x1 - x0)
    return RocResult(points=points, auc=float(auc))
