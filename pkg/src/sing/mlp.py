"""Comparison network: a small MLP whose flat weight vector is fitted by MOST.

Layer stack: ReLU hidden layer, then a softmax layer, then an optional
linear output layer (present when a fourth layer size is given).  Weights
are stored flat, layer by layer, one row per output neuron with that
neuron's bias last, and are optimized derivative-free over the box
[-weight_bound, weight_bound]^d.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .most import MostConfig, OptimizeReport, SearchDomain, optimize


@dataclass(frozen=True)
class MlpSpec:
    """Layer sizes (input, hidden, softmax[, linear output]) and the weight box bound."""

    layer_sizes: tuple[int, ...]
    weight_bound: float = 2.0

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.layer_sizes)
        if len(sizes) not in (3, 4):
            raise ValueError("layer_sizes must list 3 or 4 layers")
        if any(s < 1 for s in sizes):
            raise ValueError("every layer needs at least one unit")
        if not self.weight_bound > 0:
            raise ValueError("weight_bound must be positive")
        object.__setattr__(self, "layer_sizes", sizes)

    @property
    def n_inputs(self) -> int:
        return self.layer_sizes[0]

    @property
    def n_classes(self) -> int:
        return self.layer_sizes[-1]


def weight_count(spec: MlpSpec) -> int:
    """Total weights including one bias per neuron: sum of (fan_in + 1) * fan_out."""
    sizes = spec.layer_sizes
    return sum((a + 1) * b for a, b in zip(sizes[:-1], sizes[1:]))


def _check_weights(spec: MlpSpec, weights) -> np.ndarray:
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    if weights.shape != (weight_count(spec),):
        raise ValueError(f"weights must have shape ({weight_count(spec)},)")
    return weights


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def _scores_many(spec: MlpSpec, weight_rows: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Class scores for a batch of weight vectors: (B, d) x (N, M) -> (B, N, K)."""
    sizes = spec.layer_sizes
    h = np.broadcast_to(X, (weight_rows.shape[0],) + X.shape)
    offset = 0
    for layer, (a, b) in enumerate(zip(sizes[:-1], sizes[1:])):
        chunk = weight_rows[:, offset : offset + (a + 1) * b].reshape(-1, b, a + 1)
        offset += (a + 1) * b
        w, bias = chunk[:, :, :a], chunk[:, :, a]
        z = np.einsum("pni,poi->pno", h, w, optimize=True) + bias[:, None, :]
        if layer == 0:
            h = np.maximum(z, 0.0)
        elif layer == 1:
            h = _softmax(z)
        else:
            h = z
    return h


def forward(spec: MlpSpec, weights, x) -> np.ndarray:
    """Class scores for a single input vector."""
    weights = _check_weights(spec, weights)
    x = np.asarray(x, dtype=np.float64).reshape(1, -1)
    if x.shape[1] != spec.n_inputs:
        raise ValueError(f"input must have {spec.n_inputs} features")
    return _scores_many(spec, weights[None, :], x)[0, 0]


def forward_batch(spec: MlpSpec, weights, X) -> np.ndarray:
    """Class scores for each row of ``X``: (N, M) -> (N, K)."""
    weights = _check_weights(spec, weights)
    X = np.ascontiguousarray(X, dtype=np.float64)
    return _scores_many(spec, weights[None, :], X)[0]


def predict_labels(spec: MlpSpec, weights, X) -> np.ndarray:
    """Class per row: argmax of the scores, ties to the smallest class id."""
    return np.argmax(forward_batch(spec, weights, X), axis=1).astype(np.int64) + 1


def _one_hot(y: np.ndarray, n_classes: int) -> np.ndarray:
    out = np.zeros((y.shape[0], n_classes))
    out[np.arange(y.shape[0]), y - 1] = 1.0
    return out


def nn_loss(spec: MlpSpec, weights, dataset: Dataset) -> float:
    """Squared error against one-hot targets: 0.5 * sum ||scores - onehot||^2."""
    if dataset.schema.class_count != spec.n_classes:
        raise ValueError("dataset classes do not match the output layer")
    scores = forward_batch(spec, weights, dataset.X)
    diff = scores - _one_hot(dataset.y, spec.n_classes)
    return 0.5 * float(np.sum(diff * diff))


class _NnObjective:
    """nn_loss as a batched function of the flat weight vector."""

    def __init__(self, spec: MlpSpec, dataset: Dataset):
        self._spec = spec
        self._X = dataset.X
        self._targets = _one_hot(dataset.y, spec.n_classes)

    def __call__(self, weights) -> float:
        return float(self.batch(np.asarray(weights, dtype=np.float64)[None, :])[0])

    def batch(self, weight_rows: np.ndarray) -> np.ndarray:
        scores = _scores_many(self._spec, np.ascontiguousarray(weight_rows, dtype=np.float64), self._X)
        diff = scores - self._targets[None, :, :]
        return 0.5 * np.sum(diff * diff, axis=(1, 2))


@dataclass(frozen=True)
class NnTrainReport:
    weights: np.ndarray
    train_accuracy: float
    train_error: float
    test_accuracy: float | None
    opt_report: OptimizeReport


def train_nn(
    train: Dataset, spec: MlpSpec, most_config: MostConfig, test: Dataset | None = None
) -> tuple[np.ndarray, NnTrainReport]:
    """Fit the flat weight vector with MOST over [-weight_bound, weight_bound]^d."""
    if train.schema.feature_count != spec.n_inputs:
        raise ValueError("dataset features do not match the input layer")
    if train.schema.class_count != spec.n_classes:
        raise ValueError("dataset classes do not match the output layer")
    d = weight_count(spec)
    bound = float(spec.weight_bound)
    domain = SearchDomain(np.full(d, -bound), np.full(d, bound))
    objective = _NnObjective(spec, train)
    weights, report = optimize(objective, domain, most_config)
    train_acc = float(np.mean(predict_labels(spec, weights, train.X) == train.y))
    test_acc = None
    if test is not None:
        test_acc = float(np.mean(predict_labels(spec, weights, test.X) == test.y))
    return weights, NnTrainReport(
        weights=weights,
        train_accuracy=train_acc,
        train_error=nn_loss(spec, weights, train),
        test_accuracy=test_acc,
        opt_report=report,
    )


def save_weights(spec: MlpSpec, weights, path) -> None:
    """Write the spec header then one weight per line, in flat order."""
    weights = _check_weights(spec, weights)
    lines = ["layer_sizes=" + ",".join(str(s) for s in spec.layer_sizes)]
    lines += [repr(float(w)) for w in weights]
    from pathlib import Path

    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_weights(path) -> tuple[tuple[int, ...], np.ndarray]:
    """Read back (layer_sizes, weights) written by :func:`save_weights`."""
    from pathlib import Path

    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("layer_sizes="):
        raise ValueError(f"{path}: missing spec header")
    sizes = tuple(int(tok) for tok in lines[0].split("=", 1)[1].split(","))
    weights = np.array([float(line) for line in lines[1:] if line.strip()], dtype=np.float64)
    return sizes, weights
