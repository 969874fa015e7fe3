"""Treatment dichotomization, IPW, Horvitz-Thompson effects, and balance.

Weights invert the probability of the treatment level actually received:
1/e for treated rows and 1/(1-e) for control rows. Potential-outcome
means use the within-group normalized (ratio) form

    E_hat[Y_a] = sum_{i: A_i = a} w_i y_i / sum_{i: A_i = a} w_i

so uniform weights reduce exactly to group means. Propensities are
always clamped to [1e-6, 1 - 1e-6]; optional clip bounds tighten that
range further (the default applies no clipping).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import DataError
from .learners import (
    GRADIENT_BOOSTING,
    LOGISTIC_REGRESSION,
    RANDOM_FOREST,
    ModelSpec,
    TrainedModel,
    fit,
    predict_scores,
)
from .preprocess import FeatureMatrix
from .tabular import ORDINAL, Dataset

PROPENSITY_EPSILON = 1e-6
_CONSTANT_VARIANCE = 1e-12

PROPENSITY_FAMILIES = (LOGISTIC_REGRESSION, RANDOM_FOREST, GRADIENT_BOOSTING)

_DEFAULT_PROPENSITY_HP: dict[str, dict[str, Any]] = {
    LOGISTIC_REGRESSION: {"c_inverse_regularization": 1.0},
    RANDOM_FOREST: {"max_depth": 8, "n_trees": 50},
    GRADIENT_BOOSTING: {"max_depth": 3},
}


@dataclass
class TreatmentAssignment:
    """Binary treatment: rating >= threshold is treated."""

    source_column: str
    threshold: float
    indicator: np.ndarray
    n_treated: int
    n_control: int


def dichotomize(data: Dataset, column: str, threshold: float = 4) -> TreatmentAssignment:
    spec = data.spec(column)
    if spec.kind != ORDINAL:
        raise ValueError(f"treatment source {column!r} must be an ordinal column")
    values = data.columns[column]
    if np.isnan(values).any():
        raise DataError(f"treatment source {column!r} has missing values; impute first")
    indicator = (values >= threshold).astype(np.uint8)
    n_treated = int(indicator.sum())
    n_control = int(indicator.size - n_treated)
    if n_treated == 0 or n_control == 0:
        raise DataError(
            f"degenerate treatment: threshold {threshold} on {column!r} leaves "
            f"{n_treated} treated / {n_control} control"
        )
    return TreatmentAssignment(column, float(threshold), indicator, n_treated, n_control)


@dataclass
class PropensityResult:
    model: TrainedModel
    scores: np.ndarray
    covariate_names: tuple[str, ...]


def fit_propensity(
    family: str,
    covariates: FeatureMatrix,
    assignment: TreatmentAssignment,
    seed: int,
    hyperparameters: dict[str, Any] | None = None,
) -> PropensityResult:
    """Fit P(treated | covariates) and return clamped scores.

    The covariate matrix must not contain the treatment source column or
    anything derived from it (its one-hot expansions).
    """
    if family not in PROPENSITY_FAMILIES:
        raise ValueError(f"unsupported propensity family {family!r}")
    source = assignment.source_column
    derived = [
        name
        for name in covariates.feature_names
        if name == source or name.startswith(source + "=")
    ]
    if derived:
        raise ValueError(
            f"covariates contain the treatment source or its expansions: {derived}"
        )
    if covariates.n_features == 0:
        raise ValueError("propensity model needs at least one covariate")
    if covariates.n_rows != assignment.indicator.size:
        raise ValueError("covariates and treatment assignment have different lengths")

    hp = dict(_DEFAULT_PROPENSITY_HP[family])
    hp.update(hyperparameters or {})
    spec = ModelSpec(family, hp, seed)
    train = FeatureMatrix(covariates.feature_names, covariates.X, assignment.indicator)
    model = fit(spec, train)
    raw = predict_scores(model, covariates.X)
    scores = np.clip(raw, PROPENSITY_EPSILON, 1.0 - PROPENSITY_EPSILON)
    return PropensityResult(model=model, scores=scores, covariate_names=covariates.feature_names)


@dataclass
class WeightVector:
    weights: np.ndarray
    clip_bounds: tuple[float, float] | None
    max_weight: float
    min_weight: float
    effective_sample_size: float

    def summary(self) -> dict:
        return {
            "max_weight": self.max_weight,
            "min_weight": self.min_weight,
            "effective_sample_size": self.effective_sample_size,
            "clip_bounds": list(self.clip_bounds) if self.clip_bounds else None,
        }


def ipw_weights(
    propensity: PropensityResult | np.ndarray,
    assignment: TreatmentAssignment,
    clip: tuple[float, float] | None = None,
) -> WeightVector:
    """Inverse-probability weights for the received treatment level.

    With clip=(lo, hi) the propensities are clamped into [lo, hi] before
    inversion; by default no clipping is applied.
    """
    e = propensity.scores if isinstance(propensity, PropensityResult) else np.asarray(propensity)
    a = assignment.indicator
    if e.shape != a.shape:
        raise ValueError("propensity scores and assignment have different lengths")
    if clip is not None:
        lo, hi = clip
        if lo >= hi:
            raise ValueError(f"clip_min {lo} must be below clip_max {hi}")
        e = np.clip(e, lo, hi)
    w = np.where(a == 1, 1.0 / e, 1.0 / (1.0 - e))
    total = float(w.sum())
    return WeightVector(
        weights=w,
        clip_bounds=clip,
        max_weight=float(w.max()),
        min_weight=float(w.min()),
        effective_sample_size=total * total / float(w @ w),
    )


@dataclass
class CausalReport:
    ht_mean_treated: float
    ht_mean_control: float
    ate: float
    marginal_effect: float
    n_treated: int
    n_control: int
    weight_summary: dict

    def to_dict(self) -> dict:
        return {
            "ht_mean_treated": self.ht_mean_treated,
            "ht_mean_control": self.ht_mean_control,
            "ate": self.ate,
            "marginal_effect": self.marginal_effect,
            "n_treated": self.n_treated,
            "n_control": self.n_control,
            "weight_summary": self.weight_summary,
        }


def estimate_effects(
    y: np.ndarray, assignment: TreatmentAssignment, weights: WeightVector
) -> CausalReport:
    """Horvitz-Thompson potential-outcome means, ATE, and the raw contrast."""
    y = np.asarray(y, dtype=np.float64)
    a = assignment.indicator
    w = weights.weights
    if not (y.shape == a.shape == w.shape):
        raise ValueError("y, assignment, and weights must have equal lengths")

    means = {}
    for level in (0, 1):
        mask = a == level
        denom = float(w[mask].sum())
        if denom <= 0.0:
            raise DataError(f"zero total weight in treatment group {level}")
        means[level] = float((w[mask] * y[mask]).sum()) / denom

    marginal = float(y[a == 1].mean()) - float(y[a == 0].mean())
    return CausalReport(
        ht_mean_treated=means[1],
        ht_mean_control=means[0],
        ate=means[1] - means[0],
        marginal_effect=marginal,
        n_treated=assignment.n_treated,
        n_control=assignment.n_control,
        weight_summary=weights.summary(),
    )


@dataclass
class BalanceRecord:
    covariate: str
    smd_unweighted: float
    smd_weighted: float
    constant: bool = False

    def to_dict(self) -> dict:
        return {
            "covariate": self.covariate,
            "smd_unweighted": self.smd_unweighted,
            "smd_weighted": self.smd_weighted,
            "constant": self.constant,
        }


def _weighted_moments(x: np.ndarray, w: np.ndarray) -> tuple[float, float]:
    total = float(w.sum())
    mean = float((w * x).sum()) / total
    var = float((w * (x - mean) ** 2).sum()) / total
    return mean, var


def smd_balance(
    covariates: FeatureMatrix | np.ndarray,
    assignment: TreatmentAssignment,
    weights: WeightVector | None = None,
    feature_names: tuple[str, ...] | None = None,
) -> list[BalanceRecord]:
    """Absolute standardized mean difference per covariate.

    SMD = |mu_T - mu_C| / sqrt((var_T + var_C) / 2) with population
    variances; the weighted variant uses w-weighted moments within each
    group. Covariates with pooled variance below 1e-12 are flagged
    constant and recorded as 0. With weights=None the weighted column
    repeats the unweighted value (all-ones weights).
    """
    if isinstance(covariates, FeatureMatrix):
        X = covariates.X
        names = covariates.feature_names
    else:
        X = np.asarray(covariates, dtype=np.float64)
        names = feature_names or tuple(f"x{i}" for i in range(X.shape[1]))
    a = assignment.indicator
    if X.shape[0] != a.size:
        raise ValueError("covariates and assignment have different lengths")
    w = np.ones(a.size) if weights is None else weights.weights

    treated = a == 1
    control = ~treated
    records = []
    for j, name in enumerate(names):
        x = X[:, j]
        mu_t, var_t = _weighted_moments(x[treated], np.ones(int(treated.sum())))
        mu_c, var_c = _weighted_moments(x[control], np.ones(int(control.sum())))
        pooled = 0.5 * (var_t + var_c)
        if pooled < _CONSTANT_VARIANCE:
            records.append(BalanceRecord(name, 0.0, 0.0, constant=True))
            continue
        unweighted = abs(mu_t - mu_c) / np.sqrt(pooled)

        wmu_t, wvar_t = _weighted_moments(x[treated], w[treated])
        wmu_c, wvar_c = _weighted_moments(x[control], w[control])
        wpooled = 0.5 * (wvar_t + wvar_c)
        if wpooled < _CONSTANT_VARIANCE:
            records.append(BalanceRecord(name, float(unweighted), 0.0, constant=True))
            continue
        weighted = abs(wmu_t - wmu_c) / np.sqrt(wpooled)
        records.append(BalanceRecord(name, float(unweighted), float(weighted)))
    return records
