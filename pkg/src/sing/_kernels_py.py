"""Pure-NumPy vote-count kernels; fallback when the compiled twin is absent.

Semantics here are the reference: the Cython module mirrors these functions
exactly (same comparisons, same tie-breaks), so both backends return
bit-identical results.

A point x lies inside a group's box iff for every feature j
``center_j - delta_j <= x_j < center_j + delta_j`` (half-open edges).
"""

from __future__ import annotations

import numpy as np

# Cap on the elements of one coverage tensor chunk (rows x groups x features).
_CHUNK_ELEMENTS = 1 << 26


def _coverage(X, centers, delta):
    """Boolean (rows, groups) matrix: row t inside group g's box."""
    lo = centers - delta
    hi = centers + delta
    inside = (X[:, None, :] >= lo[None, :, :]) & (X[:, None, :] < hi[None, :, :])
    return inside.all(axis=2)


def vote_counts(X, centers, labels, delta, n_classes):
    """Per-class counts of covering groups for every row of ``X``.

    Returns an int64 array of shape (len(X), n_classes); column k-1 counts
    the groups with label k whose box contains the row.
    """
    X = np.asarray(X, dtype=np.float64)
    centers = np.asarray(centers, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    delta = np.asarray(delta, dtype=np.float64)
    n, g = X.shape[0], centers.shape[0]
    counts = np.zeros((n, n_classes), dtype=np.int64)
    if n == 0 or g == 0:
        return counts
    onehot = np.zeros((g, n_classes), dtype=np.int64)
    onehot[np.arange(g), labels - 1] = 1
    step = max(1, _CHUNK_ELEMENTS // max(1, g * X.shape[1]))
    for start in range(0, n, step):
        block = slice(start, min(start + step, n))
        counts[block] = _coverage(X[block], centers, delta).astype(np.int64) @ onehot
    return counts


def predicted_labels(counts):
    """Vote winner per row: smallest class id among the maxima, 0 when no group matched."""
    counts = np.asarray(counts)
    winners = np.argmax(counts, axis=1) + 1
    return np.where(counts.sum(axis=1) > 0, winners, 0).astype(np.int64)


def fold_errors(test_X, test_y, centers, labels, deltas, n_classes):
    """Squared-error objective for a batch of candidate half-width vectors.

    For each row of ``deltas`` builds counts of ``centers`` boxes over
    ``test_X`` and returns 0.5 * sum((y - predicted)^2) with predicted = 0
    for uncovered rows.
    """
    test_y = np.asarray(test_y, dtype=np.int64)
    deltas = np.asarray(deltas, dtype=np.float64)
    out = np.empty(deltas.shape[0], dtype=np.float64)
    for b in range(deltas.shape[0]):
        counts = vote_counts(test_X, centers, labels, deltas[b], n_classes)
        pred = predicted_labels(counts)
        diff = (test_y - pred).astype(np.float64)
        out[b] = 0.5 * float(diff @ diff)
    return out


def evaluate_relearn(X, y, centers, labels, delta, n_classes):
    """Sequential evaluation with relearning of uncovered rows.

    Rows are processed in order; each row is scored against the initial
    groups plus every group appended so far, then appended itself (with its
    true label) if no group covered it.

    Returns (predictions, counts, added_centers, added_labels).
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    delta = np.asarray(delta, dtype=np.float64)
    base = vote_counts(X, centers, labels, delta, n_classes)
    counts = np.empty_like(base)
    preds = np.empty(X.shape[0], dtype=np.int64)
    added_centers: list[np.ndarray] = []
    added_labels: list[int] = []
    for t in range(X.shape[0]):
        row = base[t].copy()
        for c, lab in zip(added_centers, added_labels):
            if np.all((c - delta <= X[t]) & (X[t] < c + delta)):
                row[lab - 1] += 1
        counts[t] = row
        total = int(row.sum())
        preds[t] = int(np.argmax(row)) + 1 if total > 0 else 0
        if total == 0:
            added_centers.append(X[t])
            added_labels.append(int(y[t]))
    if added_centers:
        added_X = np.array(added_centers, dtype=np.float64)
        added_y = np.array(added_labels, dtype=np.int64)
    else:
        added_X = np.empty((0, X.shape[1]), dtype=np.float64)
        added_y = np.empty(0, dtype=np.int64)
    return preds, counts, added_X, added_y
