"""The SiNG group model: hyperboxes around training samples, vote prediction.

Each training sample becomes one group: an axis-aligned box of per-feature
half-width delta_j centered on the sample, carrying the sample's class
label.  A point is predicted by counting, per class, the groups whose box
contains it and taking the class with the highest count; a point covered by
no group gets the Unknown sentinel 0 and can be appended as a new group
("relearning").
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .data import Dataset, Schema

UNKNOWN = 0  # prediction sentinel, outside the 1..K class ids

ORIGIN_INITIAL = "initial"
ORIGIN_RELEARNED = "relearned"
_ORIGIN_CODES = {ORIGIN_INITIAL: 0, ORIGIN_RELEARNED: 1}
_ORIGIN_NAMES = (ORIGIN_INITIAL, ORIGIN_RELEARNED)


def unit_step(t: float) -> int:
    """Heaviside step with the value 1 at 0."""
    return 1 if t >= 0 else 0


def pulse_psi(x: float, center: float, delta: float) -> int:
    """Unit pulse of width 2*delta around ``center``, half-open at the right edge.

    Equals unit_step(x - (center - delta)) - unit_step(x - (center + delta)),
    i.e. 1 iff center - delta <= x < center + delta.
    """
    return 1 if center - delta <= x < center + delta else 0


def validate_delta(delta, n_features: int) -> np.ndarray:
    delta = np.ascontiguousarray(delta, dtype=np.float64)
    if delta.shape != (n_features,):
        raise ValueError(f"delta must have shape ({n_features},)")
    if not np.all(np.isfinite(delta)) or np.any(delta <= 0):
        raise ValueError("every delta component must be strictly positive and finite")
    return delta


@dataclass(frozen=True)
class Group:
    """One stored box: center vector, class label, and how it was created."""

    center: np.ndarray
    label: int
    origin: str = ORIGIN_INITIAL


@dataclass(frozen=True)
class Prediction:
    """Vote outcome for one point: winning label, per-class counts, total matches."""

    label: int
    counts: np.ndarray
    matched_groups: int


@dataclass(frozen=True)
class GroupStore:
    """All groups sharing one half-width vector; the fitted SiNG model."""

    schema: Schema
    centers: np.ndarray  # (n_groups, M) float64
    labels: np.ndarray  # (n_groups,) int64
    origins: np.ndarray  # (n_groups,) uint8, codes per _ORIGIN_NAMES
    delta: np.ndarray  # (M,) float64, strictly positive

    def __post_init__(self):
        centers = np.ascontiguousarray(self.centers, dtype=np.float64)
        labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        origins = np.ascontiguousarray(self.origins, dtype=np.uint8)
        delta = validate_delta(self.delta, self.schema.feature_count)
        if centers.ndim != 2 or centers.shape[1] != self.schema.feature_count:
            raise ValueError("group centers must be (n_groups, feature_count)")
        if labels.shape != (centers.shape[0],) or origins.shape != labels.shape:
            raise ValueError("labels/origins must align with centers")
        if labels.size and (labels.min() < 1 or labels.max() > self.schema.class_count):
            raise ValueError("group labels must lie in 1..class_count")
        for arr in (centers, labels, origins, delta):
            arr.flags.writeable = False
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "origins", origins)
        object.__setattr__(self, "delta", delta)

    def __len__(self) -> int:
        return self.centers.shape[0]

    def group(self, i: int) -> Group:
        return Group(self.centers[i], int(self.labels[i]), _ORIGIN_NAMES[self.origins[i]])

    @property
    def groups(self) -> list[Group]:
        return [self.group(i) for i in range(len(self))]

    def duplicate_group_count(self) -> int:
        """Number of groups sharing center and label with an earlier group."""
        if len(self) == 0:
            return 0
        stacked = np.column_stack([self.centers, self.labels.astype(np.float64)])
        return len(self) - np.unique(stacked, axis=0).shape[0]


def phi(x_vec, group: Group, delta) -> int:
    """Group output at a point: label inside the group's box, 0 outside."""
    value = group.label
    for x, c, d in zip(np.asarray(x_vec, dtype=float), group.center, np.asarray(delta, dtype=float)):
        value *= pulse_psi(float(x), float(c), float(d))
        if value == 0:
            break
    return int(value)


def build_groups(train: Dataset, delta) -> GroupStore:
    """One group per training sample, in sample order."""
    if len(train) == 0:
        raise ValueError("cannot build groups from an empty dataset")
    delta = validate_delta(delta, train.schema.feature_count)
    return GroupStore(
        schema=train.schema,
        centers=train.X.copy(),
        labels=train.y.copy(),
        origins=np.zeros(len(train), dtype=np.uint8),
        delta=delta,
    )


def _prediction_from_counts(counts: np.ndarray) -> Prediction:
    total = int(counts.sum())
    label = int(np.argmax(counts)) + 1 if total > 0 else UNKNOWN
    return Prediction(label=label, counts=counts, matched_groups=total)


def predict(store: GroupStore, x) -> Prediction:
    """Vote over all groups covering ``x``; ties go to the smallest class id."""
    x = np.asarray(x, dtype=np.float64).reshape(1, -1)
    if x.shape[1] != store.schema.feature_count:
        raise ValueError(f"point must have {store.schema.feature_count} features")
    counts = kernels.vote_counts(x, store.centers, store.labels, store.delta, store.schema.class_count)[0]
    return _prediction_from_counts(counts)


def relearn(store: GroupStore, x, true_label: int) -> GroupStore:
    """Return a store extended with a new group centered on ``x``."""
    if not 1 <= true_label <= store.schema.class_count:
        raise ValueError(f"label must lie in 1..{store.schema.class_count}")
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.shape != (store.schema.feature_count,):
        raise ValueError("point dimension mismatch")
    return GroupStore(
        schema=store.schema,
        centers=np.vstack([store.centers, x[None, :]]),
        labels=np.append(store.labels, np.int64(true_label)),
        origins=np.append(store.origins, np.uint8(_ORIGIN_CODES[ORIGIN_RELEARNED])),
        delta=store.delta,
    )


@dataclass(frozen=True)
class EvalResult:
    """Accuracy and squared-error loss of a store over a dataset."""

    accuracy: float
    error: float
    predictions: list[Prediction]
    store: GroupStore  # grown by relearning when it was enabled
    unknown_count: int


def evaluate(store: GroupStore, data: Dataset, relearn_flag: bool = False) -> EvalResult:
    """Score every sample in dataset order; optionally relearn uncovered ones.

    Each sample is scored before any mutation.  The loss is
    0.5 * sum((label - predicted)^2) with predicted = 0 for uncovered
    samples; with ``relearn_flag`` every uncovered sample is appended as a
    new group right after scoring, so later samples may match it.  The input
    store is never modified; the grown store is returned in the result.
    """
    if data.schema.feature_count != store.schema.feature_count:
        raise ValueError("dataset schema does not match the store")
    k = store.schema.class_count
    if relearn_flag:
        preds, counts, added_X, added_y = kernels.evaluate_relearn(
            data.X, data.y, store.centers, store.labels, store.delta, k
        )
        out_store = store
        if len(added_y):
            out_store = GroupStore(
                schema=store.schema,
                centers=np.vstack([store.centers, added_X]),
                labels=np.concatenate([store.labels, added_y]),
                origins=np.concatenate(
                    [store.origins, np.full(len(added_y), _ORIGIN_CODES[ORIGIN_RELEARNED], dtype=np.uint8)]
                ),
                delta=store.delta,
            )
    else:
        counts = kernels.vote_counts(data.X, store.centers, store.labels, store.delta, k)
        preds = kernels.predicted_labels(counts)
        out_store = store
    diff = (data.y - preds).astype(np.float64)
    error = 0.5 * float(diff @ diff)
    accuracy = float(np.mean(preds == data.y)) if len(data) else 0.0
    predictions = [_prediction_from_counts(counts[t]) for t in range(len(data))]
    return EvalResult(
        accuracy=accuracy,
        error=error,
        predictions=predictions,
        store=out_store,
        unknown_count=int(np.sum(preds == UNKNOWN)),
    )


def save_model(store: GroupStore, path) -> None:
    """Write a store as text: schema header, delta line, one group per line."""
    lines = [
        json.dumps(
            {
                "feature_names": list(store.schema.feature_names),
                "class_names": list(store.schema.class_names),
                "encodings": [dict(e) if e else None for e in store.schema.encodings]
                if store.schema.encodings
                else None,
            },
            sort_keys=True,
        ),
        ",".join(repr(float(d)) for d in store.delta),
    ]
    for i in range(len(store)):
        center = ",".join(repr(float(c)) for c in store.centers[i])
        lines.append(f"{int(store.labels[i])},{_ORIGIN_NAMES[store.origins[i]]},{center}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path) -> GroupStore:
    """Read back a store written by :func:`save_model`, losslessly."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if len(lines) < 2:
        raise ValueError(f"{path}: truncated model file")
    header = json.loads(lines[0])
    encodings = header.get("encodings")
    schema = Schema(
        feature_names=tuple(header["feature_names"]),
        class_names=tuple(header["class_names"]),
        encodings=tuple(dict(e) if e else None for e in encodings) if encodings else None,
    )
    delta = np.array([float(tok) for tok in lines[1].split(",")], dtype=np.float64)
    centers, labels, origins = [], [], []
    for line in lines[2:]:
        if not line.strip():
            continue
        fields = line.split(",")
        labels.append(int(fields[0]))
        origins.append(_ORIGIN_CODES[fields[1]])
        centers.append([float(tok) for tok in fields[2:]])
    m = schema.feature_count
    return GroupStore(
        schema=schema,
        centers=np.array(centers, dtype=np.float64).reshape(len(labels), m),
        labels=np.array(labels, dtype=np.int64),
        origins=np.array(origins, dtype=np.uint8),
        delta=delta,
    )
