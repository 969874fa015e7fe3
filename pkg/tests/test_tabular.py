import json
import math

import numpy as np
import pytest

from satcause.errors import DataError, SchemaError
from satcause.tabular import (
    ColumnSpec,
    Dataset,
    default_airline_schema,
    load_csv,
    pearson,
    schema_from_obj,
    schema_to_obj,
    summarize,
    write_csv,
)


def small_schema():
    return [
        ColumnSpec.numeric("Age"),
        ColumnSpec.numeric("Arrival Delay"),
        ColumnSpec.ordinal("Rating", 5),
        ColumnSpec.nominal("Class", ["Business", "Eco", "Eco Plus"]),
        ColumnSpec.binary_target("satisfaction", "satisfied", "neutral or dissatisfied"),
    ]


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_missing_cell_becomes_marker(tmp_path):
    path = write(
        tmp_path,
        "Age,Arrival Delay,Rating,Class,satisfaction\n"
        "34,5,3,Eco,satisfied\n"
        "51,,4,Business,neutral or dissatisfied\n"
        "29,12,0,Eco Plus,satisfied\n",
    )
    ds = load_csv(path, small_schema())
    assert ds.n_rows == 3
    delay = ds.columns["Arrival Delay"]
    assert math.isnan(delay[1])
    assert delay[0] == 5.0 and delay[2] == 12.0


def test_header_missing_declared_column(tmp_path):
    path = write(tmp_path, "Arrival Delay,Rating,Class,satisfaction\n1,2,Eco,satisfied\n")
    with pytest.raises(SchemaError, match="Age"):
        load_csv(path, small_schema())


def test_bad_target_label_names_row(tmp_path):
    path = write(
        tmp_path,
        "Age,Arrival Delay,Rating,Class,satisfaction\n"
        "34,5,3,Eco,satisfied\n"
        "51,8,4,Business,maybe\n",
    )
    with pytest.raises(DataError, match="row 2"):
        load_csv(path, small_schema())


def test_extra_columns_dropped(tmp_path):
    path = write(
        tmp_path,
        "Unnamed: 0,id,Age,Arrival Delay,Rating,Class,satisfaction\n"
        "0,101,34,5,3,Eco,satisfied\n",
    )
    ds = load_csv(path, small_schema())
    assert set(ds.columns) == {"Age", "Arrival Delay", "Rating", "Class", "satisfaction"}


def test_unparsable_and_out_of_domain_cells(tmp_path):
    path = write(
        tmp_path,
        "Age,Arrival Delay,Rating,Class,satisfaction\n"
        "abc,nan,9,First,satisfied\n",
    )
    ds = load_csv(path, small_schema())
    assert math.isnan(ds.columns["Age"][0])  # unparsable
    assert math.isnan(ds.columns["Arrival Delay"][0])  # non-finite text
    assert math.isnan(ds.columns["Rating"][0])  # outside 0..5
    assert ds.columns["Class"][0] is None  # unknown category


def test_roundtrip_is_bit_exact(tmp_path):
    rng = np.random.default_rng(2)
    n = 50
    schema = small_schema()
    cols = {
        "Age": rng.random(n) * 80.0,
        "Arrival Delay": rng.random(n) * 500.0,
        "Rating": rng.integers(0, 6, n).astype(np.float64),
        "Class": np.asarray(
            [["Business", "Eco", "Eco Plus"][i % 3] for i in range(n)], dtype=object
        ),
        "satisfaction": rng.integers(0, 2, n).astype(np.uint8),
    }
    cols["Age"][3] = np.nan
    ds = Dataset(tuple(schema), cols, n)
    path = tmp_path / "roundtrip.csv"
    write_csv(ds, str(path))
    back = load_csv(str(path), schema)
    for name in ("Age", "Arrival Delay", "Rating"):
        a, b = ds.columns[name], back.columns[name]
        assert np.array_equal(a, b, equal_nan=True)
    assert list(back.columns["Class"]) == list(ds.columns["Class"])
    assert np.array_equal(back.columns["satisfaction"], ds.columns["satisfaction"])


def test_dataset_invariants():
    with pytest.raises(SchemaError, match="unique"):
        Dataset(
            (ColumnSpec.numeric("a"), ColumnSpec.numeric("a")),
            {"a": np.zeros(2)},
            2,
        )
    with pytest.raises(SchemaError, match="length"):
        Dataset((ColumnSpec.numeric("a"),), {"a": np.zeros(3)}, 2)


def test_columnspec_validation():
    with pytest.raises(SchemaError):
        ColumnSpec.ordinal("r", 0)
    with pytest.raises(SchemaError):
        ColumnSpec.nominal("c", [])
    with pytest.raises(SchemaError):
        ColumnSpec.nominal("c", ["x", "x"])
    with pytest.raises(SchemaError):
        ColumnSpec.binary_target("t", "same", "same")


def test_schema_json_roundtrip():
    schema = default_airline_schema()
    doc = json.loads(json.dumps(schema_to_obj(schema)))
    assert schema_from_obj(doc) == schema
    assert len([c for c in schema if c.kind != "binary_target"]) == 22


def group_dataset():
    # two groups of sizes 3 and 7
    n = 10
    schema = (
        ColumnSpec.numeric("x"),
        ColumnSpec.numeric("x2"),
        ColumnSpec.numeric("const"),
        ColumnSpec.binary_target("satisfaction", "satisfied", "neutral or dissatisfied"),
    )
    x = np.arange(n, dtype=np.float64)
    cols = {
        "x": x,
        "x2": 2.0 * x + 3.0,
        "const": np.full(n, 7.0),
        "satisfaction": np.asarray([1, 1, 1, 0, 0, 0, 0, 0, 0, 0], dtype=np.uint8),
    }
    return Dataset(schema, cols, n)


def test_group_counts_sum_to_n_rows():
    report = summarize(group_dataset(), "satisfaction")
    assert sum(report.group_sizes.values()) == 10
    assert report.group_sizes["satisfied"] == 3
    assert report.group_sizes["neutral or dissatisfied"] == 7


def test_constant_column_stats_and_exclusion():
    report = summarize(group_dataset(), "satisfaction")
    stats = report.stats["satisfied"]["const"]
    assert stats.variance == 0.0
    assert stats.min == stats.max == 7.0
    assert "const" in report.constant_columns
    assert "const" not in report.correlation_columns


def test_correlation_matrix_properties():
    report = summarize(group_dataset(), "satisfaction")
    corr = report.correlation
    assert np.allclose(corr, corr.T, atol=1e-12)
    assert np.allclose(np.diag(corr), 1.0, atol=1e-12)
    # x2 is an affine positive transform of x
    i = report.correlation_columns.index("x")
    j = report.correlation_columns.index("x2")
    assert corr[i, j] == pytest.approx(1.0, abs=1e-12)


def test_affine_transform_correlation_property():
    rng = np.random.default_rng(13)
    for _ in range(20):
        x = rng.normal(size=50)
        a = float(rng.random() * 5 + 0.1)
        b = float(rng.normal())
        assert pearson(x, a * x + b) == pytest.approx(1.0, abs=1e-12)


def test_group_by_numeric_rejected():
    with pytest.raises(ValueError, match="nominal or binary_target"):
        summarize(group_dataset(), "x")


def test_summarize_ignores_missing_cells():
    ds = group_dataset()
    x = ds.columns["x"].copy()
    x[0] = np.nan
    ds = ds.replace_column("x", x)
    report = summarize(ds, "satisfaction")
    st = report.stats["satisfied"]["x"]
    assert st.count == 2
    assert st.mean == pytest.approx(1.5)
