"""Classifier families behind one fit / predict_scores / predict_labels surface.

Families: decision_tree, random_forest, gradient_boosting, knn,
logistic_regression. All are deterministic given (spec, training data).
Scores are positive-class probabilities in [0, 1]; labels threshold at
0.5 with the tie going to 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from ..preprocess import FeatureMatrix
from ._ensembles import (
    BoostState,
    ForestState,
    boosting_scores,
    fit_boosting,
    fit_forest,
    forest_scores,
)
from ._knn import KnnState, fit_knn, knn_scores
from ._logistic import LogisticState, fit_logistic, logistic_scores
from ._tree import GINI, FlatTree, grow_tree, tree_from_obj, tree_to_obj

DECISION_TREE = "decision_tree"
RANDOM_FOREST = "random_forest"
GRADIENT_BOOSTING = "gradient_boosting"
KNN = "knn"
LOGISTIC_REGRESSION = "logistic_regression"

FAMILIES = (DECISION_TREE, RANDOM_FOREST, GRADIENT_BOOSTING, KNN, LOGISTIC_REGRESSION)
TREE_FAMILIES = (DECISION_TREE, RANDOM_FOREST, GRADIENT_BOOSTING)

_SERIAL_VERSION = 1

# required parameters, then optional ones with their defaults
_FAMILY_PARAMS: dict[str, tuple[tuple[str, ...], dict[str, Any]]] = {
    DECISION_TREE: (("max_depth",), {}),
    RANDOM_FOREST: (
        ("max_depth", "n_trees"),
        {"features_per_split": None, "bootstrap": True},
    ),
    GRADIENT_BOOSTING: (("max_depth",), {"n_stages": 100, "learning_rate": 0.1}),
    KNN: (("n_neighbors",), {}),
    LOGISTIC_REGRESSION: (
        ("c_inverse_regularization",),
        {"max_iterations": 10_000, "tolerance": 1e-6},
    ),
}


def _positive_int(hp: Mapping[str, Any], key: str) -> int:
    value = hp[key]
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 1:
        raise ValueError(f"{key} must be an integer >= 1, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class ModelSpec:
    """Family + hyperparameters + seed; validated and default-filled."""

    family: str
    hyperparameters: Mapping[str, Any]
    seed: int = 0

    def __post_init__(self) -> None:
        if self.family not in _FAMILY_PARAMS:
            raise ValueError(f"unknown model family {self.family!r}")
        required, optional = _FAMILY_PARAMS[self.family]
        hp = dict(self.hyperparameters)
        unknown = set(hp) - set(required) - set(optional)
        if unknown:
            raise ValueError(f"unknown hyperparameters for {self.family}: {sorted(unknown)}")
        for key in required:
            if key not in hp:
                raise ValueError(f"{self.family} requires hyperparameter {key!r}")
        for key, default in optional.items():
            hp.setdefault(key, default)

        if self.family in (DECISION_TREE, RANDOM_FOREST, GRADIENT_BOOSTING):
            _positive_int(hp, "max_depth")
        if self.family == RANDOM_FOREST:
            _positive_int(hp, "n_trees")
            if hp["features_per_split"] is not None:
                _positive_int(hp, "features_per_split")
            if not isinstance(hp["bootstrap"], bool):
                raise ValueError("bootstrap must be a bool")
        if self.family == GRADIENT_BOOSTING:
            _positive_int(hp, "n_stages")
            lr = hp["learning_rate"]
            if not (0.0 < lr <= 1.0):
                raise ValueError(f"learning_rate must lie in (0, 1], got {lr!r}")
        if self.family == KNN:
            _positive_int(hp, "n_neighbors")
        if self.family == LOGISTIC_REGRESSION:
            if not hp["c_inverse_regularization"] > 0:
                raise ValueError("c_inverse_regularization must be positive")
            _positive_int(hp, "max_iterations")
            if not hp["tolerance"] > 0:
                raise ValueError("tolerance must be positive")
        object.__setattr__(self, "hyperparameters", hp)

    def __getitem__(self, key: str) -> Any:
        return self.hyperparameters[key]


@dataclass
class TrainedModel:
    spec: ModelSpec
    feature_names: tuple[str, ...]
    state: Any

    @property
    def n_features(self) -> int:
        return len(self.feature_names)


def make_spec(family: str, seed: int = 0, **hyperparameters: Any) -> ModelSpec:
    return ModelSpec(family, hyperparameters, seed)


def fit(spec: ModelSpec, train: FeatureMatrix) -> TrainedModel:
    """Train one model; deterministic given (spec, train)."""
    X, y = train.X, train.y
    if X.shape[0] == 0:
        raise ValueError("training set is empty")
    if X.shape[1] == 0:
        raise ValueError("training set has no features")
    hp = spec.hyperparameters

    if spec.family == DECISION_TREE:
        state: Any = grow_tree(
            X, np.asarray(y, dtype=np.float64), criterion=GINI, max_depth=hp["max_depth"]
        )
    elif spec.family == RANDOM_FOREST:
        state = fit_forest(
            X,
            y,
            n_trees=hp["n_trees"],
            max_depth=hp["max_depth"],
            features_per_split=hp["features_per_split"],
            bootstrap=hp["bootstrap"],
            seed=spec.seed,
        )
    elif spec.family == GRADIENT_BOOSTING:
        state = fit_boosting(
            X,
            y,
            n_stages=hp["n_stages"],
            max_depth=hp["max_depth"],
            learning_rate=hp["learning_rate"],
        )
    elif spec.family == KNN:
        state = fit_knn(X, y, hp["n_neighbors"])
    else:
        state = fit_logistic(
            X,
            y,
            c_inverse_regularization=hp["c_inverse_regularization"],
            max_iterations=hp["max_iterations"],
            tolerance=hp["tolerance"],
        )
    return TrainedModel(spec=spec, feature_names=train.feature_names, state=state)


def _as_rows(model: TrainedModel, rows: FeatureMatrix | np.ndarray) -> np.ndarray:
    X = rows.X if isinstance(rows, FeatureMatrix) else np.ascontiguousarray(rows, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise ValueError(
            f"row width {X.shape[1] if X.ndim == 2 else '?'} does not match "
            f"the model's {model.n_features} features"
        )
    return X


def predict_scores(model: TrainedModel, rows: FeatureMatrix | np.ndarray) -> np.ndarray:
    """Positive-class probability per row."""
    X = _as_rows(model, rows)
    family = model.spec.family
    if family == DECISION_TREE:
        return model.state.predict_value(X)
    if family == RANDOM_FOREST:
        return forest_scores(model.state, X)
    if family == GRADIENT_BOOSTING:
        return boosting_scores(model.state, X)
    if family == KNN:
        return knn_scores(model.state, X)
    return logistic_scores(model.state, X)


def predict_labels(model: TrainedModel, rows: FeatureMatrix | np.ndarray) -> np.ndarray:
    """Hard labels; score >= 0.5 maps to 1."""
    return (predict_scores(model, rows) >= 0.5).astype(np.uint8)


# ---------------------------------------------------------------------------
# serialization


def model_to_json(model: TrainedModel) -> str:
    family = model.spec.family
    names = model.feature_names
    if family == DECISION_TREE:
        state = {"tree": tree_to_obj(model.state, names)}
    elif family == RANDOM_FOREST:
        state = {"trees": [tree_to_obj(t, names) for t in model.state.trees]}
    elif family == GRADIENT_BOOSTING:
        state = {
            "init_raw": model.state.init_raw,
            "learning_rate": model.state.learning_rate,
            "trees": [tree_to_obj(t, names) for t in model.state.trees],
        }
    elif family == KNN:
        state = {
            "X": [[float(v) for v in row] for row in model.state.X],
            "y": [float(v) for v in model.state.y],
            "n_neighbors": model.state.n_neighbors,
        }
    else:
        s = model.state
        state = {
            "coefficients": [float(v) for v in s.coefficients],
            "intercept": float(s.intercept),
            "objective_history": [float(v) for v in s.objective_history],
            "converged": bool(s.converged),
            "final_gradient_norm": float(s.final_gradient_norm),
            "n_iterations": int(s.n_iterations),
        }
    doc = {
        "version": _SERIAL_VERSION,
        "family": family,
        "hyperparameters": dict(model.spec.hyperparameters),
        "seed": model.spec.seed,
        "feature_names": list(names),
        "state": state,
    }
    return json.dumps(doc)


def model_from_json(text: str) -> TrainedModel:
    doc = json.loads(text)
    if doc.get("version") != _SERIAL_VERSION:
        raise ValueError(f"unsupported model document version {doc.get('version')!r}")
    spec = ModelSpec(doc["family"], doc["hyperparameters"], doc["seed"])
    names = tuple(doc["feature_names"])
    raw = doc["state"]
    family = doc["family"]
    if family == DECISION_TREE:
        state: Any = tree_from_obj(raw["tree"])
    elif family == RANDOM_FOREST:
        state = ForestState(trees=[tree_from_obj(t) for t in raw["trees"]])
    elif family == GRADIENT_BOOSTING:
        state = BoostState(
            init_raw=float(raw["init_raw"]),
            learning_rate=float(raw["learning_rate"]),
            trees=[tree_from_obj(t) for t in raw["trees"]],
        )
    elif family == KNN:
        state = KnnState(
            X=np.asarray(raw["X"], dtype=np.float64),
            y=np.asarray(raw["y"], dtype=np.float64),
            n_neighbors=int(raw["n_neighbors"]),
        )
    else:
        state = LogisticState(
            coefficients=np.asarray(raw["coefficients"], dtype=np.float64),
            intercept=float(raw["intercept"]),
            objective_history=[float(v) for v in raw["objective_history"]],
            converged=bool(raw["converged"]),
            final_gradient_norm=float(raw["final_gradient_norm"]),
            n_iterations=int(raw["n_iterations"]),
        )
    return TrainedModel(spec=spec, feature_names=names, state=state)


__all__ = [
    "FAMILIES",
    "TREE_FAMILIES",
    "DECISION_TREE",
    "RANDOM_FOREST",
    "GRADIENT_BOOSTING",
    "KNN",
    "LOGISTIC_REGRESSION",
    "ModelSpec",
    "TrainedModel",
    "make_spec",
    "fit",
    "predict_scores",
    "predict_labels",
    "model_to_json",
    "model_from_json",
    "FlatTree",
    "ForestState",
    "BoostState",
    "KnnState",
    "LogisticState",
]
