# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled vote-count kernels (hot inner loops of prediction and training).

Mirrors ``_kernels_py`` exactly; see that module for the semantics.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef inline bint _inside(const double[:, ::1] X, Py_ssize_t t,
                         const double[:, ::1] centers, Py_ssize_t g,
                         const double* delta, Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t j
    cdef double c, d, x
    for j in range(m):
        c = centers[g, j]
        d = delta[j]
        x = X[t, j]
        if not (c - d <= x < c + d):
            return 0
    return 1


def vote_counts(X, centers, labels, delta, int n_classes):
    """Per-class counts of covering groups for every row of ``X``."""
    cdef const double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[:, ::1] cv = np.ascontiguousarray(centers, dtype=np.float64)
    cdef const long long[::1] lv = np.ascontiguousarray(labels, dtype=np.int64)
    cdef const double[::1] dv = np.ascontiguousarray(delta, dtype=np.float64)
    cdef Py_ssize_t n = Xv.shape[0], g = cv.shape[0], m = Xv.shape[1]
    counts = np.zeros((n, n_classes), dtype=np.int64)
    cdef long long[:, ::1] out = counts
    cdef Py_ssize_t t, i
    with nogil:
        for t in range(n):
            for i in range(g):
                if _inside(Xv, t, cv, i, &dv[0], m):
                    out[t, lv[i] - 1] += 1
    return counts


def predicted_labels(counts):
    """Vote winner per row: smallest class id among the maxima, 0 when no group matched."""
    cdef const long long[:, ::1] cnt = np.ascontiguousarray(counts, dtype=np.int64)
    cdef Py_ssize_t n = cnt.shape[0], k = cnt.shape[1]
    preds = np.empty(n, dtype=np.int64)
    cdef long long[::1] out = preds
    cdef Py_ssize_t t, j
    cdef long long best, best_count
    with nogil:
        for t in range(n):
            best = 0
            best_count = 0
            for j in range(k):
                if cnt[t, j] > best_count:
                    best_count = cnt[t, j]
                    best = j + 1
            out[t] = best
    return preds


def fold_errors(test_X, test_y, centers, labels, deltas, int n_classes):
    """Squared-error objective for a batch of candidate half-width vectors."""
    cdef const double[:, ::1] Xv = np.ascontiguousarray(test_X, dtype=np.float64)
    cdef const long long[::1] yv = np.ascontiguousarray(test_y, dtype=np.int64)
    cdef const double[:, ::1] cv = np.ascontiguousarray(centers, dtype=np.float64)
    cdef const long long[::1] lv = np.ascontiguousarray(labels, dtype=np.int64)
    cdef const double[:, ::1] dv = np.ascontiguousarray(deltas, dtype=np.float64)
    cdef Py_ssize_t n = Xv.shape[0], g = cv.shape[0], m = Xv.shape[1]
    cdef Py_ssize_t nb = dv.shape[0]
    errors = np.empty(nb, dtype=np.float64)
    cdef double[::1] out = errors
    counts_arr = np.zeros(n_classes + 1, dtype=np.int64)
    cdef long long[::1] counts = counts_arr
    cdef Py_ssize_t b, t, i, j
    cdef long long best, best_count, diff
    cdef double err
    with nogil:
        for b in range(nb):
            err = 0.0
            for t in range(n):
                for j in range(n_classes):
                    counts[j] = 0
                for i in range(g):
                    if _inside(Xv, t, cv, i, &dv[b, 0], m):
                        counts[lv[i] - 1] += 1
                best = 0
                best_count = 0
                for j in range(n_classes):
                    if counts[j] > best_count:
                        best_count = counts[j]
                        best = j + 1
                diff = yv[t] - best
                err += <double> (diff * diff)
            out[b] = 0.5 * err
    return errors


def evaluate_relearn(X, y, centers, labels, delta, int n_classes):
    """Sequential evaluation with relearning of uncovered rows.

    Returns (predictions, counts, added_centers, added_labels); see the
    NumPy twin for the exact contract.
    """
    cdef const double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef const long long[::1] yv = np.ascontiguousarray(y, dtype=np.int64)
    cdef const double[:, ::1] cv = np.ascontiguousarray(centers, dtype=np.float64)
    cdef const long long[::1] lv = np.ascontiguousarray(labels, dtype=np.int64)
    cdef const double[::1] dv = np.ascontiguousarray(delta, dtype=np.float64)
    cdef Py_ssize_t n = Xv.shape[0], g = cv.shape[0], m = Xv.shape[1]
    counts_out = np.zeros((n, n_classes), dtype=np.int64)
    preds_out = np.empty(n, dtype=np.int64)
    added_X = np.empty((n, m), dtype=np.float64)
    added_y = np.empty(n, dtype=np.int64)
    cdef long long[:, ::1] counts = counts_out
    cdef long long[::1] preds = preds_out
    cdef double[:, ::1] av = added_X
    cdef long long[::1] ay = added_y
    cdef Py_ssize_t n_added = 0
    cdef Py_ssize_t t, i, j
    cdef long long best, best_count, total
    with nogil:
        for t in range(n):
            for i in range(g):
                if _inside(Xv, t, cv, i, &dv[0], m):
                    counts[t, lv[i] - 1] += 1
            for i in range(n_added):
                if _inside(Xv, t, av, i, &dv[0], m):
                    counts[t, ay[i] - 1] += 1
            best = 0
            best_count = 0
            total = 0
            for j in range(n_classes):
                total += counts[t, j]
                if counts[t, j] > best_count:
                    best_count = counts[t, j]
                    best = j + 1
            preds[t] = best
            if total == 0:
                for j in range(m):
                    av[n_added, j] = Xv[t, j]
                ay[n_added] = yv[t]
                n_added += 1
    return preds_out, counts_out, added_X[:n_added].copy(), added_y[:n_added].copy()
