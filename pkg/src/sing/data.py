"""Dataset loading, categorical encoding, and seeded splitting.

Loaders parse the three UCI benchmark files (iris, car evaluation, abalone)
exactly as distributed, apply fixed ordinal encodings, and return immutable
in-memory datasets.  Splitting and fold-halving are deterministic for a
given seed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class DataFormatError(ValueError):
    """A data file row could not be parsed."""


class EncodingError(DataFormatError):
    """A categorical token has no defined numeric encoding."""


# Ordinal encodings for the car-evaluation columns.  Only the spacing between
# values matters to the classifier; the half-widths are learned on this scale.
CAR_FEATURE_NAMES = ("buying", "maint", "doors", "persons", "lug_boot", "safety")
CAR_ENCODINGS: tuple[dict[str, float], ...] = (
    {"low": 1.0, "med": 2.0, "high": 3.0, "vhigh": 4.0},
    {"low": 1.0, "med": 2.0, "high": 3.0, "vhigh": 4.0},
    {"2": 2.0, "3": 3.0, "4": 4.0, "5more": 5.0},
    {"2": 2.0, "4": 4.0, "more": 5.0},
    {"small": 1.0, "med": 2.0, "big": 3.0},
    {"low": 1.0, "med": 2.0, "high": 3.0},
)
CAR_CLASSES = ("unacc", "acc", "good", "vgood")

IRIS_FEATURE_NAMES = ("sepal_length", "sepal_width", "petal_length", "petal_width")
IRIS_CLASSES = ("Iris-versicolor", "Iris-setosa", "Iris-virginica")
IRIS_SPECIES_TO_CLASS = {name: k + 1 for k, name in enumerate(IRIS_CLASSES)}

ABALONE_FEATURE_NAMES = (
    "sex",
    "length",
    "diameter",
    "height",
    "whole_weight",
    "shucked_weight",
    "viscera_weight",
    "shell_weight",
)
ABALONE_SEX_ENCODING = {"M": 1.0, "F": 2.0, "I": 3.0}
ABALONE_RING_BIN_CLASSES = ("rings_lt_9", "rings_9_to_17", "rings_ge_18")


@dataclass(frozen=True)
class Schema:
    """Feature/class naming plus the categorical encodings used at load time.

    ``encodings[j]`` is a token -> value map for categorical feature ``j``,
    or None when the feature is numeric.
    """

    feature_names: tuple[str, ...]
    class_names: tuple[str, ...]
    encodings: tuple[dict[str, float] | None, ...] | None = None

    def __post_init__(self):
        if len(self.class_names) < 2:
            raise ValueError("a schema needs at least two classes")
        if self.encodings is not None and len(self.encodings) != len(self.feature_names):
            raise ValueError("encodings must align with feature_names")

    @property
    def feature_count(self) -> int:
        return len(self.feature_names)

    @property
    def class_count(self) -> int:
        return len(self.class_names)

    def decode_feature(self, feature: int, value: float) -> str:
        """Map an encoded categorical value back to its original token."""
        enc = self.encodings[feature] if self.encodings else None
        if enc is None:
            raise EncodingError(f"feature {self.feature_names[feature]!r} is not categorical")
        for token, encoded in enc.items():
            if encoded == value:
                return token
        raise EncodingError(f"value {value!r} is not a code of feature {self.feature_names[feature]!r}")

    def class_name(self, label: int) -> str:
        return self.class_names[label - 1]


@dataclass(frozen=True)
class Dataset:
    """An encoded feature matrix with integer class labels in 1..K."""

    schema: Schema
    X: np.ndarray  # (n_samples, feature_count) float64
    y: np.ndarray  # (n_samples,) int64

    def __post_init__(self):
        X = np.ascontiguousarray(self.X, dtype=np.float64)
        y = np.ascontiguousarray(self.y, dtype=np.int64)
        if X.ndim != 2 or X.shape[1] != self.schema.feature_count:
            raise ValueError(f"feature matrix must be (n, {self.schema.feature_count})")
        if y.shape != (X.shape[0],):
            raise ValueError("labels must align with the feature matrix")
        if X.size and not np.all(np.isfinite(X)):
            raise ValueError("all feature values must be finite")
        if y.size and (y.min() < 1 or y.max() > self.schema.class_count):
            raise ValueError(f"labels must lie in 1..{self.schema.class_count}")
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    def __len__(self) -> int:
        return self.X.shape[0]

    def class_counts(self) -> np.ndarray:
        """Per-class sample counts, index k-1 for class k."""
        return np.bincount(self.y, minlength=self.schema.class_count + 1)[1:]

    def subset(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(self.schema, self.X[idx], self.y[idx])


@dataclass(frozen=True)
class SplitSpec:
    """How to carve a dataset into train and test.

    Exactly one of ``test_per_class`` (stratified draw) or ``test_count``
    (plain draw) selects the test set.  ``train_count`` optionally caps the
    training side; leftover rows are dropped.  With ``leak_test_from_full``
    the test rows are drawn from the full dataset while training keeps every
    row, so test rows may also appear in training.
    """

    seed: int
    test_per_class: int | None = None
    test_count: int | None = None
    train_count: int | None = None
    stratified: bool = True
    leak_test_from_full: bool = False

    def __post_init__(self):
        if (self.test_per_class is None) == (self.test_count is None):
            raise ValueError("specify exactly one of test_per_class or test_count")
        size = self.test_per_class if self.test_per_class is not None else self.test_count
        if size < 0:
            raise ValueError("test size must be >= 0")


def _parse_rows(path, expected_fields: int):
    """Yield (line_number, fields) for non-blank CSV rows; no quoting in UCI files."""
    text = Path(path).read_text(encoding="utf-8")
    seen = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != expected_fields:
            raise DataFormatError(f"{path}: line {lineno}: expected {expected_fields} fields, got {len(fields)}")
        seen = True
        yield lineno, fields
    if not seen:
        raise DataFormatError(f"{path}: no samples")


def _parse_float(path, lineno: int, token: str, column: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise DataFormatError(f"{path}: line {lineno}: bad {column} value {token!r}") from None
    if not math.isfinite(value):
        raise DataFormatError(f"{path}: line {lineno}: non-finite {column} value {token!r}")
    return value


def load_iris(path) -> Dataset:
    """Load the UCI iris file (4 numeric columns + species).

    Species are numbered Versicolor=1, Setosa=2, Virginica=3.
    """
    rows, labels = [], []
    for lineno, fields in _parse_rows(path, 5):
        rows.append([_parse_float(path, lineno, tok, name) for tok, name in zip(fields[:4], IRIS_FEATURE_NAMES)])
        species = fields[4]
        if species not in IRIS_SPECIES_TO_CLASS:
            raise EncodingError(f"{path}: line {lineno}: unknown species {species!r}")
        labels.append(IRIS_SPECIES_TO_CLASS[species])
    schema = Schema(IRIS_FEATURE_NAMES, IRIS_CLASSES)
    return Dataset(schema, np.array(rows), np.array(labels))


def load_car(path) -> Dataset:
    """Load the UCI car-evaluation file (6 categorical columns + class).

    Categories are mapped to the fixed ordinal codes in ``CAR_ENCODINGS``;
    classes are unacc=1, acc=2, good=3, vgood=4.
    """
    class_to_label = {name: k + 1 for k, name in enumerate(CAR_CLASSES)}
    rows, labels = [], []
    for lineno, fields in _parse_rows(path, 7):
        row = []
        for j, token in enumerate(fields[:6]):
            enc = CAR_ENCODINGS[j]
            if token not in enc:
                raise EncodingError(
                    f"{path}: line {lineno}: unknown {CAR_FEATURE_NAMES[j]} category {token!r}"
                )
            row.append(enc[token])
        if fields[6] not in class_to_label:
            raise EncodingError(f"{path}: line {lineno}: unknown class {fields[6]!r}")
        rows.append(row)
        labels.append(class_to_label[fields[6]])
    schema = Schema(CAR_FEATURE_NAMES, CAR_CLASSES, CAR_ENCODINGS)
    return Dataset(schema, np.array(rows), np.array(labels))


def load_abalone(path, bin_rings: bool = True) -> Dataset:
    """Load the UCI abalone file (sex letter + 7 numeric + integer rings).

    Sex is encoded M=1, F=2, I=3.  With ``bin_rings`` the label is the ring
    band (1: rings < 9, 2: 9 <= rings < 18, 3: rings >= 18); otherwise the
    label is the raw ring count.
    """
    rows, labels = [], []
    max_rings = 0
    for lineno, fields in _parse_rows(path, 9):
        sex = fields[0]
        if sex not in ABALONE_SEX_ENCODING:
            raise EncodingError(f"{path}: line {lineno}: unknown sex {sex!r}")
        row = [ABALONE_SEX_ENCODING[sex]]
        row += [
            _parse_float(path, lineno, tok, name)
            for tok, name in zip(fields[1:8], ABALONE_FEATURE_NAMES[1:])
        ]
        try:
            rings = int(fields[8])
        except ValueError:
            raise DataFormatError(f"{path}: line {lineno}: rings must be an integer, got {fields[8]!r}") from None
        if rings < 1:
            raise DataFormatError(f"{path}: line {lineno}: rings must be >= 1")
        rows.append(row)
        if bin_rings:
            labels.append(1 if rings < 9 else (2 if rings < 18 else 3))
        else:
            labels.append(rings)
            max_rings = max(max_rings, rings)
    encodings = (ABALONE_SEX_ENCODING,) + (None,) * 7
    if bin_rings:
        classes = ABALONE_RING_BIN_CLASSES
    else:
        classes = tuple(f"rings_{r}" for r in range(1, max_rings + 1))
    schema = Schema(ABALONE_FEATURE_NAMES, classes, encodings)
    return Dataset(schema, np.array(rows), np.array(labels))


def split(dataset: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    """Carve ``dataset`` into (train, test) per ``spec``, deterministically.

    Row order inside each side follows the original dataset order.  In the
    default (non-leak) mode train and test are disjoint and, when
    ``train_count`` is unset, cover the input.
    """
    rng = np.random.default_rng(spec.seed)
    n = len(dataset)
    if spec.test_per_class is not None:
        if not spec.stratified:
            raise ValueError("test_per_class requires stratified=True")
        test_idx = []
        for k in range(1, dataset.schema.class_count + 1):
            members = np.flatnonzero(dataset.y == k)
            if len(members) < spec.test_per_class:
                raise ValueError(
                    f"class {k} has {len(members)} samples, fewer than test_per_class={spec.test_per_class}"
                )
            test_idx.append(rng.permutation(members)[: spec.test_per_class])
        test_idx = np.sort(np.concatenate(test_idx))
    else:
        if spec.test_count > n:
            raise ValueError(f"test_count={spec.test_count} exceeds dataset size {n}")
        test_idx = np.sort(rng.permutation(n)[: spec.test_count])

    if spec.leak_test_from_full:
        train_pool = np.arange(n)
    else:
        mask = np.ones(n, dtype=bool)
        mask[test_idx] = False
        train_pool = np.flatnonzero(mask)
    if spec.train_count is not None:
        if spec.train_count > len(train_pool):
            raise ValueError(f"train_count={spec.train_count} exceeds available {len(train_pool)} rows")
        train_idx = np.sort(rng.permutation(train_pool)[: spec.train_count])
    else:
        train_idx = train_pool
    return dataset.subset(train_idx), dataset.subset(test_idx)


def halve(train: Dataset, seed: int) -> tuple[Dataset, Dataset]:
    """Split a training set into two stratified folds of sizes ceil(N/2), floor(N/2).

    Classes are halved individually; odd remainders alternate between folds
    so the overall sizes differ by at most one.  Deterministic per seed.
    """
    if len(train) < 2:
        raise ValueError("need at least 2 samples to halve")
    rng = np.random.default_rng(seed)
    first, second = [], []
    for k in range(1, train.schema.class_count + 1):
        members = rng.permutation(np.flatnonzero(train.y == k))
        take = len(members) // 2
        if len(members) % 2 == 1:
            # Give the odd sample to whichever fold is currently behind.
            if sum(map(len, first)) <= sum(map(len, second)):
                take += 1
        first.append(members[:take])
        second.append(members[take:])
    fold_i = train.subset(np.sort(np.concatenate(first)))
    fold_ii = train.subset(np.sort(np.concatenate(second)))
    for name, fold in (("fold I", fold_i), ("fold II", fold_ii)):
        missing = np.flatnonzero(fold.class_counts() == 0) + 1
        present = np.flatnonzero(train.class_counts() > 0) + 1
        absent = sorted(set(missing) & set(present))
        if absent:
            warnings.warn(f"{name} is missing class(es) {absent}; too few samples to stratify")
    return fold_i, fold_ii
