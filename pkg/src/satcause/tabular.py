"""Typed tabular data model, CSV ingestion, and descriptive summaries.

A Dataset holds per-column numpy arrays typed by a declared schema. Missing
cells are first-class: numeric and ordinal columns store NaN for missing,
nominal columns store None. Ingestion only ever produces NaN for empty,
unparsable, or non-finite cells, so an observed value can never collide
with the missing marker.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError, SchemaError

logger = logging.getLogger(__name__)

NUMERIC = "numeric"
ORDINAL = "ordinal"
NOMINAL = "nominal"
BINARY_TARGET = "binary_target"

_KINDS = (NUMERIC, ORDINAL, NOMINAL, BINARY_TARGET)


@dataclass(frozen=True)
class ColumnSpec:
    """Declared type of one column.

    kind is one of "numeric", "ordinal", "nominal", "binary_target".
    Ordinal columns take levels 0..max_level; nominal columns take one of
    ``categories``; the binary target takes exactly the two labels.
    """

    name: str
    kind: str
    max_level: int | None = None
    categories: tuple[str, ...] | None = None
    positive_label: str | None = None
    negative_label: str | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise SchemaError("column name must be non-empty")
        if self.kind not in _KINDS:
            raise SchemaError(f"unknown column kind {self.kind!r} for {self.name!r}")
        if self.kind == ORDINAL:
            if self.max_level is None or self.max_level < 1:
                raise SchemaError(f"ordinal column {self.name!r} needs max_level >= 1")
        if self.kind == NOMINAL:
            if not self.categories:
                raise SchemaError(f"nominal column {self.name!r} needs categories")
            if len(set(self.categories)) != len(self.categories):
                raise SchemaError(f"nominal column {self.name!r} has duplicate categories")
        if self.kind == BINARY_TARGET:
            if not self.positive_label or not self.negative_label:
                raise SchemaError(f"target column {self.name!r} needs both labels")
            if self.positive_label == self.negative_label:
                raise SchemaError(f"target column {self.name!r} labels must differ")

    @staticmethod
    def numeric(name: str) -> "ColumnSpec":
        return ColumnSpec(name, NUMERIC)

    @staticmethod
    def ordinal(name: str, max_level: int = 5) -> "ColumnSpec":
        return ColumnSpec(name, ORDINAL, max_level=max_level)

    @staticmethod
    def nominal(name: str, categories: Iterable[str]) -> "ColumnSpec":
        return ColumnSpec(name, NOMINAL, categories=tuple(categories))

    @staticmethod
    def binary_target(name: str, positive_label: str, negative_label: str) -> "ColumnSpec":
        return ColumnSpec(
            name, BINARY_TARGET, positive_label=positive_label, negative_label=negative_label
        )


def validate_schema(schema: Sequence[ColumnSpec]) -> None:
    names = [c.name for c in schema]
    if len(set(names)) != len(names):
        raise SchemaError("schema column names must be unique")
    targets = [c for c in schema if c.kind == BINARY_TARGET]
    if len(targets) > 1:
        raise SchemaError("schema declares more than one binary_target column")


@dataclass(frozen=True)
class Dataset:
    """Immutable column store; all columns have length n_rows."""

    schema: tuple[ColumnSpec, ...]
    columns: dict[str, np.ndarray]
    n_rows: int

    def __post_init__(self) -> None:
        validate_schema(self.schema)
        for spec in self.schema:
            col = self.columns.get(spec.name)
            if col is None:
                raise SchemaError(f"missing column data for {spec.name!r}")
            if len(col) != self.n_rows:
                raise SchemaError(f"column {spec.name!r} has length {len(col)}, expected {self.n_rows}")
            if isinstance(col, np.ndarray):
                col.setflags(write=False)

    def spec(self, name: str) -> ColumnSpec:
        for c in self.schema:
            if c.name == name:
                return c
        raise KeyError(name)

    def column(self, name: str) -> np.ndarray:
        return self.columns[name]

    @property
    def target_spec(self) -> ColumnSpec | None:
        for c in self.schema:
            if c.kind == BINARY_TARGET:
                return c
        return None

    def take_rows(self, idx: np.ndarray) -> "Dataset":
        cols = {name: col[idx] for name, col in self.columns.items()}
        return Dataset(self.schema, cols, int(len(idx)))

    def replace_column(self, name: str, values: np.ndarray) -> "Dataset":
        cols = dict(self.columns)
        cols[name] = values
        return Dataset(self.schema, cols, self.n_rows)


def default_airline_schema() -> list[ColumnSpec]:
    """Schema for the public airline passenger satisfaction CSV (22 predictors)."""
    ratings = [
        "Inflight wifi service",
        "Departure/Arrival time convenient",
        "Ease of Online booking",
        "Gate location",
        "Food and drink",
        "Online boarding",
        "Seat comfort",
        "Inflight entertainment",
        "On-board service",
        "Leg room service",
        "Baggage handling",
        "Checkin service",
        "Inflight service",
        "Cleanliness",
    ]
    schema: list[ColumnSpec] = [
        ColumnSpec.nominal("Gender", ["Female", "Male"]),
        ColumnSpec.nominal("Customer Type", ["Loyal Customer", "disloyal Customer"]),
        ColumnSpec.numeric("Age"),
        ColumnSpec.nominal("Type of Travel", ["Business travel", "Personal Travel"]),
        ColumnSpec.nominal("Class", ["Business", "Eco", "Eco Plus"]),
        ColumnSpec.numeric("Flight Distance"),
    ]
    schema.extend(ColumnSpec.ordinal(name, 5) for name in ratings)
    schema.extend(
        [
            ColumnSpec.numeric("Departure Delay in Minutes"),
            ColumnSpec.numeric("Arrival Delay in Minutes"),
            ColumnSpec.binary_target("satisfaction", "satisfied", "neutral or dissatisfied"),
        ]
    )
    return schema


def schema_to_obj(schema: Sequence[ColumnSpec]) -> dict:
    """JSON-ready form of a schema."""
    columns = []
    for spec in schema:
        entry: dict = {"name": spec.name, "kind": spec.kind}
        if spec.kind == ORDINAL:
            entry["max_level"] = spec.max_level
        elif spec.kind == NOMINAL:
            entry["categories"] = list(spec.categories)
        elif spec.kind == BINARY_TARGET:
            entry["positive_label"] = spec.positive_label
            entry["negative_label"] = spec.negative_label
        columns.append(entry)
    return {"columns": columns}


def schema_from_obj(obj: dict) -> list[ColumnSpec]:
    """Parse a schema from its JSON form."""
    if "columns" not in obj:
        raise SchemaError('schema document must have a "columns" list')
    schema = []
    for entry in obj["columns"]:
        kind = entry.get("kind")
        name = entry.get("name")
        if kind == NUMERIC:
            schema.append(ColumnSpec.numeric(name))
        elif kind == ORDINAL:
            schema.append(ColumnSpec.ordinal(name, int(entry["max_level"])))
        elif kind == NOMINAL:
            schema.append(ColumnSpec.nominal(name, entry["categories"]))
        elif kind == BINARY_TARGET:
            schema.append(
                ColumnSpec.binary_target(name, entry["positive_label"], entry["negative_label"])
            )
        else:
            raise SchemaError(f"unknown column kind {kind!r} for {name!r}")
    validate_schema(schema)
    return schema


def _parse_float(cell: str) -> float:
    """Parse a numeric cell; empty, unparsable, or non-finite -> NaN."""
    text = cell.strip()
    if not text:
        return math.nan
    try:
        value = float(text)
    except ValueError:
        return math.nan
    return value if math.isfinite(value) else math.nan


def load_csv(path: str, schema: Sequence[ColumnSpec]) -> Dataset:
    """Read a CSV against a declared schema.

    The header must cover every schema column; extra CSV columns are
    dropped (count logged). Bad cells in predictor columns become the
    missing marker; a bad binary_target cell raises DataError with the
    1-based data row number.
    """
    validate_schema(schema)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file, expected a header row") from None
        header = [h.strip() for h in header]
        positions: dict[str, int] = {}
        for spec in schema:
            if spec.name not in header:
                raise SchemaError(f"header is missing declared column {spec.name!r}")
            positions[spec.name] = header.index(spec.name)
        extra = [h for h in header if h not in positions]
        if extra:
            logger.info("dropping %d column(s) not in schema: %s", len(extra), extra)

        raw: dict[str, list] = {spec.name: [] for spec in schema}
        out_of_range: dict[str, int] = {}
        n_rows = 0
        for row_no, row in enumerate(reader, start=1):
            if not row:
                continue
            n_rows += 1
            for spec in schema:
                pos = positions[spec.name]
                cell = row[pos] if pos < len(row) else ""
                if spec.kind == NUMERIC:
                    raw[spec.name].append(_parse_float(cell))
                elif spec.kind == ORDINAL:
                    value = _parse_float(cell)
                    if not math.isnan(value) and not (0.0 <= value <= spec.max_level):
                        out_of_range[spec.name] = out_of_range.get(spec.name, 0) + 1
                        value = math.nan
                    raw[spec.name].append(value)
                elif spec.kind == NOMINAL:
                    text = cell.strip()
                    if text in spec.categories:
                        raw[spec.name].append(text)
                    else:
                        if text:
                            out_of_range[spec.name] = out_of_range.get(spec.name, 0) + 1
                        raw[spec.name].append(None)
                else:  # binary target
                    text = cell.strip()
                    if text == spec.positive_label:
                        raw[spec.name].append(1)
                    elif text == spec.negative_label:
                        raw[spec.name].append(0)
                    else:
                        raise DataError(
                            f"{path}: row {row_no}: target column {spec.name!r} "
                            f"has invalid value {cell!r}"
                        )
    if out_of_range:
        logger.info("cells outside declared domain became missing: %s", out_of_range)

    columns: dict[str, np.ndarray] = {}
    for spec in schema:
        if spec.kind in (NUMERIC, ORDINAL):
            columns[spec.name] = np.asarray(raw[spec.name], dtype=np.float64)
        elif spec.kind == NOMINAL:
            columns[spec.name] = np.asarray(raw[spec.name], dtype=object)
        else:
            columns[spec.name] = np.asarray(raw[spec.name], dtype=np.uint8)
    return Dataset(tuple(schema), columns, n_rows)


def write_csv(data: Dataset, path: str) -> None:
    """Write a Dataset back to CSV; full-precision floats, missing as empty."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([spec.name for spec in data.schema])
        cols = [data.columns[spec.name] for spec in data.schema]
        for i in range(data.n_rows):
            row = []
            for spec, col in zip(data.schema, cols):
                v = col[i]
                if spec.kind in (NUMERIC, ORDINAL):
                    row.append("" if math.isnan(v) else repr(float(v)))
                elif spec.kind == NOMINAL:
                    row.append("" if v is None else v)
                else:
                    row.append(spec.positive_label if v else spec.negative_label)
            writer.writerow(row)


@dataclass(frozen=True)
class ColumnStats:
    count: int
    mean: float | None
    median: float | None
    variance: float | None
    min: float | None
    max: float | None


@dataclass
class SummaryReport:
    """Grouped descriptive statistics plus a correlation matrix.

    ``stats[group][column]`` covers numeric and ordinal columns, computed
    on observed cells only (population variance). The Pearson matrix uses
    pairwise-complete rows; constant columns are excluded and flagged.
    """

    group_column: str
    group_sizes: dict[str, int]
    stats: dict[str, dict[str, ColumnStats]]
    correlation_columns: list[str]
    correlation: np.ndarray
    constant_columns: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "group_column": self.group_column,
            "group_sizes": self.group_sizes,
            "stats": {
                g: {c: vars(s) for c, s in per.items()} for g, per in self.stats.items()
            },
            "correlation_columns": self.correlation_columns,
            "correlation": [[float(v) for v in row] for row in self.correlation],
            "constant_columns": self.constant_columns,
        }


def _group_labels(data: Dataset, spec: ColumnSpec) -> list[tuple[str, np.ndarray]]:
    col = data.columns[spec.name]
    if spec.kind == BINARY_TARGET:
        return [
            (spec.negative_label, np.asarray(col == 0)),
            (spec.positive_label, np.asarray(col == 1)),
        ]
    groups = [(cat, np.asarray([v == cat for v in col])) for cat in spec.categories]
    missing = np.asarray([v is None for v in col])
    if missing.any():
        groups.append(("(missing)", missing))
    return groups


def _column_stats(values: np.ndarray) -> ColumnStats:
    observed = values[~np.isnan(values)]
    if observed.size == 0:
        return ColumnStats(0, None, None, None, None, None)
    return ColumnStats(
        count=int(observed.size),
        mean=float(np.mean(observed)),
        median=float(np.median(observed)),
        variance=float(np.var(observed)),
        min=float(np.min(observed)),
        max=float(np.max(observed)),
    )


def pearson(x: np.ndarray, y: np.ndarray) -> float:
    """Pearson correlation over pairwise-complete rows; NaN when undefined."""
    ok = ~(np.isnan(x) | np.isnan(y))
    xs, ys = x[ok], y[ok]
    if xs.size < 2:
        return math.nan
    xc = xs - xs.mean()
    yc = ys - ys.mean()
    denom = math.sqrt(float(xc @ xc) * float(yc @ yc))
    if denom == 0.0:
        return math.nan
    return float(xc @ yc) / denom


def summarize(data: Dataset, group_by: str) -> SummaryReport:
    """Per-group statistics and the predictor correlation matrix."""
    spec = data.spec(group_by)
    if spec.kind not in (NOMINAL, BINARY_TARGET):
        raise ValueError(f"group_by column {group_by!r} must be nominal or binary_target")

    value_cols = [c for c in data.schema if c.kind in (NUMERIC, ORDINAL)]
    groups = _group_labels(data, spec)
    group_sizes = {label: int(mask.sum()) for label, mask in groups}
    stats = {
        label: {c.name: _column_stats(data.columns[c.name][mask]) for c in value_cols}
        for label, mask in groups
    }

    constant: list[str] = []
    kept: list[str] = []
    for c in value_cols:
        observed = data.columns[c.name]
        observed = observed[~np.isnan(observed)]
        if observed.size == 0 or np.all(observed == observed[0]):
            constant.append(c.name)
        else:
            kept.append(c.name)

    k = len(kept)
    corr = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            r = pearson(data.columns[kept[i]], data.columns[kept[j]])
            corr[i, j] = r
            corr[j, i] = r

    return SummaryReport(
        group_column=group_by,
        group_sizes=group_sizes,
        stats=stats,
        correlation_columns=kept,
        correlation=corr,
        constant_columns=constant,
    )
