import numpy as np
import pytest

from satcause.errors import DataError
from satcause.preprocess import (
    FeatureMatrix,
    PipelineParams,
    apply_preprocess,
    apply_scaling,
    correlation_screen,
    deduplicate,
    encode_features,
    fit_preprocess,
    impute_median,
    scale_minmax,
    split_indices,
    train_test_split,
)
from satcause.tabular import ColumnSpec, Dataset


def ds(columns, schema=None, n=None):
    if schema is None:
        schema = []
        for name, col in columns.items():
            if isinstance(col[0] if len(col) else 0.0, str):
                schema.append(ColumnSpec.nominal(name, sorted(set(col))))
            else:
                schema.append(ColumnSpec.numeric(name))
        schema = tuple(schema)
    cols = {}
    for name, col in columns.items():
        spec = next(s for s in schema if s.name == name)
        if spec.kind in ("numeric", "ordinal"):
            cols[name] = np.asarray(col, dtype=np.float64)
        elif spec.kind == "nominal":
            cols[name] = np.asarray(col, dtype=object)
        else:
            cols[name] = np.asarray(col, dtype=np.uint8)
    n = n if n is not None else len(next(iter(cols.values())))
    return Dataset(tuple(schema), cols, n)


# ---------------------------------------------------------------- dedup


def test_duplicate_rows_removed_keeping_first():
    data = ds({"a": [1.0, 2.0, 1.0], "b": [0.5, 0.5, 0.5]})
    out, removed = deduplicate(data)
    assert removed == 1
    assert out.n_rows == 2
    assert list(out.columns["a"]) == [1.0, 2.0]


def test_all_distinct_is_identity():
    data = ds({"a": [1.0, 2.0, 3.0]})
    out, removed = deduplicate(data)
    assert removed == 0
    assert out is data


def test_dedup_idempotent_and_missing_matches_missing():
    data = ds({"a": [np.nan, np.nan, 2.0]})
    once, removed = deduplicate(data)
    assert removed == 1
    twice, removed2 = deduplicate(once)
    assert removed2 == 0
    assert np.array_equal(once.columns["a"], twice.columns["a"], equal_nan=True)


# ---------------------------------------------------------------- impute


def test_impute_median_odd_count():
    data = ds({"a": [1.0, 2.0, np.nan, 100.0]})
    out, records = impute_median(data, ["a"])
    assert list(out.columns["a"]) == [1.0, 2.0, 2.0, 100.0]
    assert records[0].median == 2.0
    assert records[0].cells_filled == 1


def test_impute_no_missing_identity():
    data = ds({"a": [3.0, 1.0]})
    out, records = impute_median(data, ["a"])
    assert records[0].cells_filled == 0
    assert np.array_equal(out.columns["a"], data.columns["a"])


def test_impute_even_count_rule():
    data = ds({"a": [np.nan, 4.0, 8.0]})
    out, records = impute_median(data, ["a"])
    assert records[0].median == 6.0
    assert list(out.columns["a"]) == [6.0, 4.0, 8.0]


def test_impute_entirely_missing_errors():
    data = ds({"void": [np.nan, np.nan]})
    with pytest.raises(DataError, match="void"):
        impute_median(data, ["void"])


def test_impute_never_changes_observed_cells():
    rng = np.random.default_rng(4)
    col = rng.random(100)
    col[rng.choice(100, 20, replace=False)] = np.nan
    data = ds({"a": col})
    out, _ = impute_median(data, ["a"])
    observed = ~np.isnan(col)
    assert np.array_equal(out.columns["a"][observed], col[observed])


# ---------------------------------------------------------------- encode


def encode_schema():
    return (
        ColumnSpec.ordinal("rating", 5),
        ColumnSpec.nominal("Class", ["Business", "Eco", "Eco Plus"]),
        ColumnSpec.binary_target("satisfaction", "satisfied", "neutral or dissatisfied"),
    )


def test_encode_ordinal_passthrough_and_one_hot():
    data = ds(
        {
            "rating": [0.0, 3.0, 5.0],
            "Class": ["Business", "Eco", "Eco Plus"],
            "satisfaction": [1, 0, 1],
        },
        schema=encode_schema(),
    )
    encoded, enc = encode_features(data)
    assert list(encoded.columns["rating"]) == [0.0, 3.0, 5.0]
    assert enc.indicator_names["Class"] == ["Class=Business", "Class=Eco", "Class=Eco Plus"]
    assert list(encoded.columns["Class=Business"]) == [1.0, 0.0, 0.0]
    assert list(encoded.columns["Class=Eco"]) == [0.0, 1.0, 0.0]
    assert list(encoded.columns["Class=Eco Plus"]) == [0.0, 0.0, 1.0]
    assert list(encoded.columns["satisfaction"]) == [1, 0, 1]


def test_encode_unseen_category_errors():
    data = ds(
        {"rating": [1.0], "Class": ["First"], "satisfaction": [1]},
        schema=encode_schema(),
    )
    with pytest.raises(DataError, match="First.*Class"):
        encode_features(data)


def test_encode_missing_nominal_becomes_zero_row():
    data = ds(
        {"rating": [1.0, 2.0], "Class": ["Eco", None], "satisfaction": [1, 0]},
        schema=encode_schema(),
    )
    encoded, enc = encode_features(data)
    assert enc.missing_nominal_cells == {"Class": 1}
    row = [encoded.columns[n][1] for n in enc.indicator_names["Class"]]
    assert row == [0.0, 0.0, 0.0]


# ---------------------------------------------------------------- scale


def test_scale_minmax_basic():
    data = ds({"a": [2.0, 4.0, 6.0]})
    out, params = scale_minmax(data, ["a"])
    assert list(out.columns["a"]) == [0.0, 0.5, 1.0]
    assert params.ranges["a"] == (2.0, 6.0)


def test_scale_replay_clamps_out_of_range():
    train = ds({"a": [2.0, 6.0]})
    _, params = scale_minmax(train, ["a"])
    held = ds({"a": [8.0, 0.0, 4.0]})
    out, clamped = apply_scaling(held, params)
    assert list(out.columns["a"]) == [1.0, 0.0, 0.5]
    assert clamped == 2


def test_scale_constant_column_degenerates():
    data = ds({"a": [5.0, 5.0]})
    out, params = scale_minmax(data, ["a"])
    assert list(out.columns["a"]) == [0.0, 0.0]
    assert params.degenerate_columns == ["a"]


def test_scaling_monotone_property():
    rng = np.random.default_rng(8)
    col = rng.normal(size=200) * 40
    data = ds({"a": col})
    out, _ = scale_minmax(data, ["a"])
    scaled = out.columns["a"]
    order = np.argsort(col)
    diffs = np.diff(scaled[order])
    assert (diffs >= 0).all()
    assert np.array_equal(np.diff(col[order]) == 0, diffs == 0)


# ---------------------------------------------------------------- screen


def test_exact_linear_pair_flagged():
    x = np.arange(10, dtype=np.float64)
    data = ds({"x": x, "y": 2 * x, "z": np.cos(x)})
    pairs = correlation_screen(data, 0.9)
    flagged = {(p.col_a, p.col_b): p for p in pairs}
    assert ("x", "y") in flagged
    assert flagged[("x", "y")].pearson_r == pytest.approx(1.0, abs=1e-12)
    assert flagged[("x", "y")].drop_for_linear == "y"


def test_independent_columns_not_flagged():
    rng = np.random.default_rng(123)
    data = ds({"a": rng.random(10_000), "b": rng.random(10_000)})
    assert correlation_screen(data, 0.9) == []


def test_threshold_one_on_noisy_data():
    rng = np.random.default_rng(5)
    x = rng.random(100)
    data = ds({"a": x, "b": x + rng.normal(scale=1e-3, size=100)})
    assert correlation_screen(data, 1.0) == []
    assert len(correlation_screen(data, 0.99)) == 1


# ---------------------------------------------------------------- split


def test_split_sizes():
    train, test = split_indices(10, 0.2, seed=0)
    assert len(train) == 8 and len(test) == 2


def test_split_deterministic_and_partitions():
    a = split_indices(100, 0.3, seed=42)
    b = split_indices(100, 0.3, seed=42)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    union = np.sort(np.concatenate(a))
    assert np.array_equal(union, np.arange(100))


def test_split_rounding_rule_at_kaggle_scale():
    train, test = split_indices(103_904, 0.2, seed=1)
    assert len(train) == 83_123
    assert len(test) == 20_781


def test_split_errors():
    with pytest.raises(ValueError):
        split_indices(1, 0.2, seed=0)
    with pytest.raises(ValueError):
        split_indices(10, 0.0, seed=0)
    with pytest.raises(ValueError, match="empty side"):
        split_indices(2, 0.2, seed=0)


def test_train_test_split_on_matrix():
    X = np.arange(20, dtype=np.float64).reshape(10, 2)
    y = np.arange(10) % 2
    fm = FeatureMatrix(("a", "b"), X, y)
    train, test = train_test_split(fm, 0.2, seed=3)
    assert train.n_rows == 8 and test.n_rows == 2
    rows = {tuple(r) for r in np.vstack([train.X, test.X])}
    assert rows == {tuple(r) for r in X}


# ---------------------------------------------------------------- pipeline


def airline_like_dataset(n=60, seed=0, with_missing=True):
    rng = np.random.default_rng(seed)
    schema = (
        ColumnSpec.numeric("Age"),
        ColumnSpec.ordinal("Online boarding", 5),
        ColumnSpec.nominal("Class", ["Business", "Eco", "Eco Plus"]),
        ColumnSpec.binary_target("satisfaction", "satisfied", "neutral or dissatisfied"),
    )
    age = rng.random(n) * 60 + 18
    if with_missing:
        age[rng.choice(n, max(1, n // 10), replace=False)] = np.nan
    cols = {
        "Age": age,
        "Online boarding": rng.integers(0, 6, n).astype(np.float64),
        "Class": np.asarray(
            [["Business", "Eco", "Eco Plus"][i] for i in rng.integers(0, 3, n)], dtype=object
        ),
        "satisfaction": rng.integers(0, 2, n).astype(np.uint8),
    }
    return Dataset(schema, cols, n)


def test_full_chain_yields_complete_unit_matrix():
    data = airline_like_dataset()
    fm, params, records = fit_preprocess(data)
    assert not np.isnan(fm.X).any()
    assert fm.X.min() >= 0.0 and fm.X.max() <= 1.0
    assert set(fm.y.tolist()) <= {0, 1}
    filled = {r.column: r.cells_filled for r in records}
    assert filled["Age"] >= 1


def test_replay_is_bit_identical_via_sidecar():
    train = airline_like_dataset(seed=1)
    test = airline_like_dataset(seed=2)
    fm_train, params, _ = fit_preprocess(train)
    direct, _ = apply_preprocess(params, test)
    restored = PipelineParams.from_json(params.to_json())
    replayed, _ = apply_preprocess(restored, test)
    assert replayed.feature_names == direct.feature_names
    assert np.array_equal(replayed.X, direct.X)
    assert np.array_equal(replayed.y, direct.y)
