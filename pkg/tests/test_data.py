"""Loader, split, and fold tests, including frozen rows from the benchmark files."""

import numpy as np
import pytest

from sing.data import (
    CAR_ENCODINGS,
    CAR_FEATURE_NAMES,
    DataFormatError,
    Dataset,
    EncodingError,
    Schema,
    SplitSpec,
    halve,
    load_abalone,
    load_car,
    load_iris,
    split,
)

CAR_SAMPLE = """\
low,low,2,2,small,low,unacc
vhigh,med,3,4,big,high,acc
med,high,5more,more,med,med,good
low,med,4,4,small,high,vgood
"""

ABALONE_SAMPLE = """\
M,0.455,0.365,0.095,0.514,0.2245,0.101,0.15,15
F,0.35,0.265,0.09,0.2255,0.0995,0.0485,0.07,9
I,0.53,0.42,0.135,0.677,0.2565,0.1415,0.21,8
M,0.44,0.365,0.125,0.516,0.2155,0.114,0.155,29
"""


# ---------------------------------------------------------------- iris


def test_iris_file_shape(iris_dataset):
    assert len(iris_dataset) == 150
    assert iris_dataset.schema.feature_count == 4
    assert iris_dataset.schema.class_count == 3
    # labels 1..K with no gaps
    assert sorted(np.unique(iris_dataset.y)) == [1, 2, 3]
    assert list(iris_dataset.class_counts()) == [50, 50, 50]


def test_iris_row_encoding(tmp_path):
    path = tmp_path / "iris.data"
    path.write_text("5.9,3.0,5.1,1.8,Iris-virginica\n7.0,3.2,4.7,1.4,Iris-versicolor\n")
    ds = load_iris(path)
    assert np.allclose(ds.X[0], [5.9, 3.0, 5.1, 1.8])
    assert ds.y[0] == 3  # virginica
    assert ds.y[1] == 1  # versicolor
    assert ds.schema.class_name(1) == "Iris-versicolor"


def test_iris_last_row_matches_distribution(iris_dataset):
    assert np.allclose(iris_dataset.X[149], [5.9, 3.0, 5.1, 1.8])
    assert iris_dataset.y[149] == 3


def test_iris_empty_file(tmp_path):
    path = tmp_path / "iris.data"
    path.write_text("\n\n")
    with pytest.raises(DataFormatError, match="no samples"):
        load_iris(path)


def test_iris_malformed_row_names_line(tmp_path):
    path = tmp_path / "iris.data"
    path.write_text("5.1,3.5,1.4,0.2,Iris-setosa\n5.1,oops,1.4,0.2,Iris-setosa\n")
    with pytest.raises(DataFormatError, match="line 2"):
        load_iris(path)


def test_iris_unknown_species(tmp_path):
    path = tmp_path / "iris.data"
    path.write_text("5.1,3.5,1.4,0.2,Iris-unknownii\n")
    with pytest.raises(EncodingError, match="Iris-unknownii"):
        load_iris(path)


# ---------------------------------------------------------------- car


def test_car_encodings(tmp_path):
    path = tmp_path / "car.data"
    path.write_text(CAR_SAMPLE)
    ds = load_car(path)
    assert ds.schema.feature_count == 6
    assert ds.schema.class_count == 4
    # all-minimum row
    assert np.allclose(ds.X[0], [1, 1, 2, 2, 1, 1])
    assert ds.y[0] == 1
    # vhigh buying encodes to the top rank
    assert ds.X[1, 0] == 4.0
    assert list(ds.y) == [1, 2, 3, 4]
    assert np.allclose(ds.X[2], [2, 3, 5, 5, 2, 2])


def test_car_unknown_token_lists_column(tmp_path):
    path = tmp_path / "car.data"
    path.write_text("low,low,6doors,2,small,low,unacc\n")
    with pytest.raises(EncodingError, match="doors.*'6doors'"):
        load_car(path)


def test_car_round_trip_decoding(tmp_path):
    path = tmp_path / "car.data"
    path.write_text(CAR_SAMPLE)
    schema = load_car(path).schema
    for j, name in enumerate(CAR_FEATURE_NAMES):
        for token, value in CAR_ENCODINGS[j].items():
            assert schema.decode_feature(j, value) == token, name


def test_car_file_shape(car_dataset):
    assert len(car_dataset) == 1728
    assert sorted(np.unique(car_dataset.y)) == [1, 2, 3, 4]
    assert list(car_dataset.class_counts()) == [1210, 384, 69, 65]


# ---------------------------------------------------------------- abalone


def test_abalone_encoding_and_binning(tmp_path):
    path = tmp_path / "abalone.data"
    path.write_text(ABALONE_SAMPLE)
    ds = load_abalone(path)
    assert ds.schema.feature_count == 8
    assert np.allclose(ds.X[0], [1.0, 0.455, 0.365, 0.095, 0.514, 0.2245, 0.101, 0.15])
    # rings 15 -> band 2; 9 -> 2; 8 -> 1; 29 -> 3
    assert list(ds.y) == [2, 2, 1, 3]
    assert ds.X[1, 0] == 2.0 and ds.X[2, 0] == 3.0  # F, I
    assert ds.schema.decode_feature(0, 1.0) == "M"


def test_abalone_raw_rings(tmp_path):
    path = tmp_path / "abalone.data"
    path.write_text(ABALONE_SAMPLE)
    ds = load_abalone(path, bin_rings=False)
    assert list(ds.y) == [15, 9, 8, 29]
    assert ds.schema.class_count == 29


def test_abalone_non_integer_rings(tmp_path):
    path = tmp_path / "abalone.data"
    path.write_text("M,0.455,0.365,0.095,0.514,0.2245,0.101,0.15,9.5\n")
    with pytest.raises(DataFormatError, match="rings"):
        load_abalone(path)


def test_abalone_file_shape(abalone_dataset):
    assert len(abalone_dataset) == 4177
    assert sorted(np.unique(abalone_dataset.y)) == [1, 2, 3]


# ---------------------------------------------------------------- split


def test_split_stratified_counts(iris_dataset):
    train, test = split(iris_dataset, SplitSpec(seed=1, test_per_class=10))
    assert len(train) == 120 and len(test) == 30
    assert list(test.class_counts()) == [10, 10, 10]
    # train and test together restore the input multiset exactly
    from collections import Counter

    full = Counter(map(tuple, np.column_stack([iris_dataset.X, iris_dataset.y])))
    used = Counter(map(tuple, np.column_stack([train.X, train.y])))
    used.update(map(tuple, np.column_stack([test.X, test.y])))
    assert used == full


def test_split_empty_test(iris_dataset):
    train, test = split(iris_dataset, SplitSpec(seed=1, test_per_class=0))
    assert len(test) == 0 and len(train) == 150


def test_split_deterministic(iris_dataset):
    a = split(iris_dataset, SplitSpec(seed=7, test_per_class=10))
    b = split(iris_dataset, SplitSpec(seed=7, test_per_class=10))
    assert np.array_equal(a[0].X, b[0].X) and np.array_equal(a[1].X, b[1].X)
    assert np.array_equal(a[0].y, b[0].y) and np.array_equal(a[1].y, b[1].y)
    c = split(iris_dataset, SplitSpec(seed=8, test_per_class=10))
    assert not np.array_equal(a[1].X, c[1].X)


def test_split_leak_mode_keeps_training_complete(iris_dataset):
    train, test = split(iris_dataset, SplitSpec(seed=3, test_per_class=10, leak_test_from_full=True))
    assert len(train) == 150 and len(test) == 30


def test_split_counts_mode(iris_dataset):
    from collections import Counter

    spec = SplitSpec(seed=2, test_count=30, train_count=100, stratified=False)
    train, test = split(iris_dataset, spec)
    assert len(train) == 100 and len(test) == 30
    full = Counter(map(tuple, np.column_stack([iris_dataset.X, iris_dataset.y])))
    used = Counter(map(tuple, np.column_stack([train.X, train.y])))
    used.update(map(tuple, np.column_stack([test.X, test.y])))
    assert all(used[row] <= full[row] for row in used)  # disjoint draw from the file


def test_split_infeasible(iris_dataset):
    with pytest.raises(ValueError):
        split(iris_dataset, SplitSpec(seed=1, test_per_class=60))
    with pytest.raises(ValueError):
        split(iris_dataset, SplitSpec(seed=1, test_count=151))
    with pytest.raises(ValueError):
        SplitSpec(seed=1)
    with pytest.raises(ValueError):
        SplitSpec(seed=1, test_per_class=10, test_count=10)


# ---------------------------------------------------------------- halve


def test_halve_sizes_and_strata(iris_dataset):
    train, _ = split(iris_dataset, SplitSpec(seed=1, test_per_class=10))
    fold_i, fold_ii = halve(train, seed=1)
    assert len(fold_i) == 60 and len(fold_ii) == 60
    assert np.all(np.abs(fold_i.class_counts() - fold_ii.class_counts()) <= 1)


def test_halve_odd_sizes():
    schema = Schema(("x",), ("a", "b"))
    ds = Dataset(schema, np.array([[0.0], [1.0], [2.0]]), np.array([1, 1, 2]))
    with pytest.warns(UserWarning):
        fold_i, fold_ii = halve(ds, seed=0)
    assert {len(fold_i), len(fold_ii)} == {2, 1}


def test_halve_seed_changes_membership(iris_dataset):
    train, _ = split(iris_dataset, SplitSpec(seed=1, test_per_class=10))
    a_i, _ = halve(train, seed=1)
    b_i, _ = halve(train, seed=2)
    assert len(a_i) == len(b_i)
    assert not np.array_equal(a_i.X, b_i.X)
    # determinism for equal seeds
    c_i, _ = halve(train, seed=1)
    assert np.array_equal(a_i.X, c_i.X)


# ---------------------------------------------------------------- dataset invariants


def test_dataset_rejects_bad_values():
    schema = Schema(("x",), ("a", "b"))
    with pytest.raises(ValueError):
        Dataset(schema, np.array([[np.nan]]), np.array([1]))
    with pytest.raises(ValueError):
        Dataset(schema, np.array([[0.0]]), np.array([3]))
    with pytest.raises(ValueError):
        Dataset(schema, np.array([[0.0]]), np.array([0]))


def test_dataset_arrays_immutable(iris_dataset):
    with pytest.raises(ValueError):
        iris_dataset.X[0, 0] = 99.0
