"""Transformation chain from a typed Dataset to a scaled numeric matrix.

Order used by the pipeline: deduplicate, split, impute (train medians),
encode, min-max scale (train ranges). Parameters are fit on training rows
only and replayed on held-out rows, so no statistic leaks across the
split. Every step also works standalone.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DataError
from .tabular import (
    NOMINAL,
    NUMERIC,
    ORDINAL,
    ColumnSpec,
    Dataset,
    pearson,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FeatureMatrix:
    """Fully numeric design matrix with a binary target (1 = positive)."""

    feature_names: tuple[str, ...]
    X: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        X = np.ascontiguousarray(self.X, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.uint8)
        if X.ndim != 2 or X.shape[1] != len(self.feature_names):
            raise ValueError("X shape does not match feature_names")
        if y.shape != (X.shape[0],):
            raise ValueError("y length does not match X")
        if np.isnan(X).any():
            raise ValueError("feature matrix contains missing values")
        if y.size and y.max() > 1:
            raise ValueError("target must be binary 0/1")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        X.setflags(write=False)
        y.setflags(write=False)

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def take_rows(self, idx: np.ndarray) -> "FeatureMatrix":
        return FeatureMatrix(self.feature_names, self.X[idx], self.y[idx])

    def drop_columns(self, names: Sequence[str]) -> "FeatureMatrix":
        drop = set(names)
        keep = [i for i, n in enumerate(self.feature_names) if n not in drop]
        kept_names = tuple(self.feature_names[i] for i in keep)
        return FeatureMatrix(kept_names, self.X[:, keep], self.y)


# ---------------------------------------------------------------------------
# deduplication


def _row_keys(data: Dataset) -> np.ndarray:
    """Integer key matrix where equal rows (missing included) get equal keys."""
    keys = []
    for spec in data.schema:
        col = data.columns[spec.name]
        if spec.kind in (NUMERIC, ORDINAL):
            # adding 0.0 collapses -0.0 into +0.0 before taking bit patterns
            keys.append((col + 0.0).view(np.int64))
        elif spec.kind == NOMINAL:
            lookup = {cat: i for i, cat in enumerate(spec.categories)}
            keys.append(np.asarray([-1 if v is None else lookup[v] for v in col], dtype=np.int64))
        else:
            keys.append(col.astype(np.int64))
    return np.column_stack(keys)


def deduplicate(data: Dataset) -> tuple[Dataset, int]:
    """Drop exact duplicate rows, keeping the first occurrence."""
    if data.n_rows == 0:
        return data, 0
    keys = _row_keys(data)
    _, first_idx = np.unique(keys, axis=0, return_index=True)
    keep = np.sort(first_idx)
    removed = data.n_rows - keep.size
    if removed == 0:
        return data, 0
    return data.take_rows(keep), int(removed)


# ---------------------------------------------------------------------------
# imputation


@dataclass(frozen=True)
class ImputationRecord:
    column: str
    median: float
    cells_filled: int


def impute_median(
    data: Dataset, columns: Sequence[str]
) -> tuple[Dataset, list[ImputationRecord]]:
    """Fill missing cells with each column's observed median.

    Even-count medians average the two central values. A column with no
    observed values raises DataError.
    """
    records = []
    out = data
    for name in columns:
        spec = data.spec(name)
        if spec.kind not in (NUMERIC, ORDINAL):
            raise ValueError(f"cannot impute non-numeric column {name!r}")
        col = out.columns[name]
        missing = np.isnan(col)
        observed = col[~missing]
        if observed.size == 0:
            raise DataError(f"column {name!r} has no observed values to impute from")
        median = float(np.median(observed))
        if missing.any():
            filled = col.copy()
            filled[missing] = median
            out = out.replace_column(name, filled)
        records.append(ImputationRecord(name, median, int(missing.sum())))
    return out, records


def apply_imputation(data: Dataset, medians: dict[str, float]) -> Dataset:
    """Replay previously fitted medians on another dataset."""
    out = data
    for name, median in medians.items():
        col = out.columns[name]
        missing = np.isnan(col)
        if missing.any():
            filled = col.copy()
            filled[missing] = median
            out = out.replace_column(name, filled)
    return out


# ---------------------------------------------------------------------------
# encoding


@dataclass
class EncodingMap:
    """How typed columns became numeric features.

    feature_names is the encoded column order; indicator_names maps each
    nominal column to its one-hot columns (lexicographic category order).
    """

    feature_names: list[str]
    ordinal_columns: list[str]
    indicator_names: dict[str, list[str]]
    indicator_categories: dict[str, list[str]]
    target_column: str | None
    positive_label: str | None
    missing_nominal_cells: dict[str, int] = field(default_factory=dict)

    def derived_from(self, source: str) -> list[str]:
        """Encoded feature names that came from one schema column."""
        if source in self.indicator_names:
            return list(self.indicator_names[source])
        return [source] if source in self.feature_names else []


def encode_features(data: Dataset) -> tuple[Dataset, EncodingMap]:
    """Encode to an all-numeric dataset.

    Ordinals keep their level codes; nominals expand to one-hot indicator
    columns named "<col>=<category>"; the target maps positive -> 1. A
    nominal value outside the declared categories raises; missing nominal
    cells become all-zero indicator rows (count recorded).
    """
    new_schema: list[ColumnSpec] = []
    new_columns: dict[str, np.ndarray] = {}
    feature_names: list[str] = []
    ordinal_columns: list[str] = []
    indicator_names: dict[str, list[str]] = {}
    indicator_categories: dict[str, list[str]] = {}
    missing_nominal: dict[str, int] = {}
    target_column = None
    positive_label = None

    for spec in data.schema:
        col = data.columns[spec.name]
        if spec.kind in (NUMERIC, ORDINAL):
            new_schema.append(ColumnSpec.numeric(spec.name))
            new_columns[spec.name] = np.asarray(col, dtype=np.float64)
            feature_names.append(spec.name)
            if spec.kind == ORDINAL:
                ordinal_columns.append(spec.name)
        elif spec.kind == NOMINAL:
            categories = sorted(spec.categories)
            names = [f"{spec.name}={cat}" for cat in categories]
            indicator_names[spec.name] = names
            indicator_categories[spec.name] = categories
            indicators = {n: np.zeros(data.n_rows, dtype=np.float64) for n in names}
            n_missing = 0
            for i, value in enumerate(col):
                if value is None:
                    n_missing += 1
                    continue
                if value not in spec.categories:
                    raise DataError(
                        f"unseen category {value!r} in nominal column {spec.name!r}"
                    )
                indicators[f"{spec.name}={value}"][i] = 1.0
            if n_missing:
                missing_nominal[spec.name] = n_missing
            for n in names:
                new_schema.append(ColumnSpec.numeric(n))
                new_columns[n] = indicators[n]
                feature_names.append(n)
        else:
            new_schema.append(spec)
            new_columns[spec.name] = col
            target_column = spec.name
            positive_label = spec.positive_label

    if missing_nominal:
        logger.info("missing nominal cells encoded as all-zero rows: %s", missing_nominal)

    encoding = EncodingMap(
        feature_names=feature_names,
        ordinal_columns=ordinal_columns,
        indicator_names=indicator_names,
        indicator_categories=indicator_categories,
        target_column=target_column,
        positive_label=positive_label,
        missing_nominal_cells=missing_nominal,
    )
    return Dataset(tuple(new_schema), new_columns, data.n_rows), encoding


# ---------------------------------------------------------------------------
# scaling


@dataclass
class ScalingParams:
    """Per-column training min/max; degenerate columns map to constant 0."""

    ranges: dict[str, tuple[float, float]]
    degenerate_columns: list[str] = field(default_factory=list)


def scale_minmax(
    data: Dataset, columns: Sequence[str]
) -> tuple[Dataset, ScalingParams]:
    """Scale columns to [0,1] with x' = (x - min)/(max - min)."""
    ranges: dict[str, tuple[float, float]] = {}
    degenerate: list[str] = []
    out = data
    for name in columns:
        col = out.columns[name]
        if np.isnan(col).any():
            raise DataError(f"column {name!r} has missing values; impute before scaling")
        lo = float(np.min(col))
        hi = float(np.max(col))
        ranges[name] = (lo, hi)
        if hi == lo:
            degenerate.append(name)
            out = out.replace_column(name, np.zeros_like(col))
        else:
            out = out.replace_column(name, (col - lo) / (hi - lo))
    if degenerate:
        logger.warning("degenerate constant column(s) scaled to 0: %s", degenerate)
    return out, ScalingParams(ranges=ranges, degenerate_columns=degenerate)


def apply_scaling(data: Dataset, params: ScalingParams) -> tuple[Dataset, int]:
    """Replay fitted ranges; out-of-range values clamp to [0,1] (count returned)."""
    out = data
    clamped = 0
    degenerate = set(params.degenerate_columns)
    for name, (lo, hi) in params.ranges.items():
        col = out.columns[name]
        if name in degenerate:
            out = out.replace_column(name, np.zeros_like(col))
            continue
        scaled = (col - lo) / (hi - lo)
        outside = (scaled < 0.0) | (scaled > 1.0)
        clamped += int(outside.sum())
        out = out.replace_column(name, np.clip(scaled, 0.0, 1.0))
    if clamped:
        logger.info("clamped %d out-of-range cell(s) while replaying scaling", clamped)
    return out, clamped


# ---------------------------------------------------------------------------
# collinearity screen


@dataclass(frozen=True)
class CollinearPair:
    col_a: str
    col_b: str
    pearson_r: float
    drop_for_linear: str


def correlation_screen(data: Dataset, threshold: float) -> list[CollinearPair]:
    """Flag numeric/ordinal pairs with |r| >= threshold.

    The later column in schema order is marked to drop for linear models;
    tree models keep everything.
    """
    if not (0.0 < threshold <= 1.0):
        raise ValueError("threshold must lie in (0, 1]")
    names = [c.name for c in data.schema if c.kind in (NUMERIC, ORDINAL)]
    pairs: list[CollinearPair] = []
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            r = pearson(data.columns[names[i]], data.columns[names[j]])
            if not math.isnan(r) and abs(r) >= threshold:
                pairs.append(CollinearPair(names[i], names[j], r, names[j]))
    return pairs


# ---------------------------------------------------------------------------
# train/test split


def _round_half_away(x: float) -> int:
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


def split_indices(
    n: int, test_fraction: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Seeded uniform partition of range(n); test gets round(n * fraction) rows."""
    if not (0.0 < test_fraction < 1.0):
        raise ValueError("test_fraction must lie in (0, 1)")
    if n < 2:
        raise ValueError("need at least 2 rows to split")
    n_test = _round_half_away(n * test_fraction)
    if n_test == 0 or n_test == n:
        raise ValueError(f"test_fraction {test_fraction} leaves an empty side for n={n}")
    perm = np.random.default_rng(seed).permutation(n)
    test = np.sort(perm[:n_test])
    train = np.sort(perm[n_test:])
    return train, test


def train_test_split(
    data: FeatureMatrix, test_fraction: float, seed: int
) -> tuple[FeatureMatrix, FeatureMatrix]:
    train_idx, test_idx = split_indices(data.n_rows, test_fraction, seed)
    return data.take_rows(train_idx), data.take_rows(test_idx)


# ---------------------------------------------------------------------------
# fitted pipeline


@dataclass
class PipelineParams:
    """Everything needed to replay the fitted transformation bit-identically."""

    medians: dict[str, float]
    encoding: EncodingMap
    scaling: ScalingParams

    def to_json(self) -> str:
        payload = {
            "version": 1,
            "medians": self.medians,
            "encoding": {
                "feature_names": self.encoding.feature_names,
                "ordinal_columns": self.encoding.ordinal_columns,
                "indicator_names": self.encoding.indicator_names,
                "indicator_categories": self.encoding.indicator_categories,
                "target_column": self.encoding.target_column,
                "positive_label": self.encoding.positive_label,
                "missing_nominal_cells": self.encoding.missing_nominal_cells,
            },
            "scaling": {
                "ranges": self.scaling.ranges,
                "degenerate_columns": self.scaling.degenerate_columns,
            },
        }
        return json.dumps(payload, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "PipelineParams":
        payload = json.loads(text)
        enc = payload["encoding"]
        encoding = EncodingMap(
            feature_names=list(enc["feature_names"]),
            ordinal_columns=list(enc["ordinal_columns"]),
            indicator_names={k: list(v) for k, v in enc["indicator_names"].items()},
            indicator_categories={
                k: list(v) for k, v in enc["indicator_categories"].items()
            },
            target_column=enc["target_column"],
            positive_label=enc["positive_label"],
            missing_nominal_cells={
                k: int(v) for k, v in enc["missing_nominal_cells"].items()
            },
        )
        scaling = ScalingParams(
            ranges={k: (float(v[0]), float(v[1])) for k, v in payload["scaling"]["ranges"].items()},
            degenerate_columns=list(payload["scaling"]["degenerate_columns"]),
        )
        return PipelineParams(
            medians={k: float(v) for k, v in payload["medians"].items()},
            encoding=encoding,
            scaling=scaling,
        )


@dataclass
class PreprocessReport:
    """Audit record of one fitted transformation chain."""

    duplicates_removed: int
    imputation: list[ImputationRecord]
    scaling: ScalingParams
    encoding: EncodingMap
    collinear_pairs: list[CollinearPair]
    dropped_for_linear: list[str]
    test_cells_clamped: int = 0

    def to_dict(self) -> dict:
        return {
            "duplicates_removed": self.duplicates_removed,
            "imputation": [vars(r) for r in self.imputation],
            "scaling": {
                "ranges": {k: list(v) for k, v in self.scaling.ranges.items()},
                "degenerate_columns": self.scaling.degenerate_columns,
            },
            "encoding": {
                "feature_names": self.encoding.feature_names,
                "indicator_names": self.encoding.indicator_names,
                "ordinal_columns": self.encoding.ordinal_columns,
                "target_column": self.encoding.target_column,
                "positive_label": self.encoding.positive_label,
                "missing_nominal_cells": self.encoding.missing_nominal_cells,
            },
            "collinear_pairs": [vars(p) for p in self.collinear_pairs],
            "dropped_for_linear": self.dropped_for_linear,
            "test_cells_clamped": self.test_cells_clamped,
        }


def _assemble_matrix(encoded: Dataset, encoding: EncodingMap) -> FeatureMatrix:
    X = np.column_stack([encoded.columns[n] for n in encoding.feature_names])
    if encoding.target_column is None:
        raise DataError("dataset has no binary_target column")
    y = encoded.columns[encoding.target_column]
    return FeatureMatrix(tuple(encoding.feature_names), X, y)


def fit_preprocess(
    train: Dataset,
) -> tuple[FeatureMatrix, PipelineParams, list[ImputationRecord]]:
    """Fit imputation medians, encoding, and scaling on training rows."""
    numeric_cols = [c.name for c in train.schema if c.kind in (NUMERIC, ORDINAL)]
    imputed, records = impute_median(train, numeric_cols)
    encoded, encoding = encode_features(imputed)
    scaled, scaling = scale_minmax(encoded, encoding.feature_names)
    params = PipelineParams(
        medians={r.column: r.median for r in records},
        encoding=encoding,
        scaling=scaling,
    )
    return _assemble_matrix(scaled, encoding), params, records


def apply_preprocess(params: PipelineParams, data: Dataset) -> tuple[FeatureMatrix, int]:
    """Replay fitted parameters on new rows; returns the clamp count."""
    imputed = apply_imputation(data, params.medians)
    encoded, _ = encode_features(imputed)
    scaled, clamped = apply_scaling(encoded, params.scaling)
    return _assemble_matrix(scaled, params.encoding), clamped
