"""Half-width fitting: fold-swapped optimization of the per-feature deltas.

The teaching data is halved into two stratified folds.  Each direction
(build groups on one fold, score the squared prediction error on the other)
defines an objective over the delta vector; both are minimized with the
Monte-Carlo bisection optimizer and the final delta takes the element-wise
larger of the two optima.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .data import Dataset, halve
from .groups import build_groups, evaluate
from .most import MostConfig, OptimizeReport, SearchDomain, optimize


@dataclass(frozen=True)
class SingTrainConfig:
    """Training knobs: search box per feature, optimizer settings, seed.

    ``delta_max`` is a scalar or per-feature vector bounding the search box
    (0, delta_max] for each half-width.  ``seed`` drives both the fold split
    and the two optimizer runs; the seed inside ``most`` is overridden.
    With ``relearn_during_fit`` the fold objective appends uncovered fold
    samples while scoring (off by default, keeping the objective a pure
    function of delta).
    """

    delta_max: float | np.ndarray = 1.0
    most: MostConfig = field(default_factory=MostConfig)
    relearn_during_fit: bool = False
    seed: int = 0


@dataclass(frozen=True)
class SingTrainReport:
    delta: np.ndarray
    delta_i_to_ii: np.ndarray
    delta_ii_to_i: np.ndarray
    report_i_to_ii: OptimizeReport
    report_ii_to_i: OptimizeReport
    fold_sizes: tuple[int, int]
    teaching_accuracy: float
    teaching_error: float
    teaching_unknown: int
    duplicate_groups: int


class _FoldObjective:
    """Prediction error on one fold of groups built on the other, as a function of delta."""

    def __init__(self, store: Dataset, scored: Dataset, relearn: bool):
        self._store_X = store.X
        self._store_y = store.y
        self._eval_X = scored.X
        self._eval_y = scored.y
        self._classes = store.schema.class_count
        self._relearn = relearn

    def __call__(self, delta) -> float:
        return float(self.batch(np.asarray(delta, dtype=np.float64)[None, :])[0])

    def batch(self, deltas: np.ndarray) -> np.ndarray:
        deltas = np.ascontiguousarray(deltas, dtype=np.float64)
        if not self._relearn:
            return kernels.fold_errors(
                self._eval_X, self._eval_y, self._store_X, self._store_y, deltas, self._classes
            )
        out = np.empty(deltas.shape[0], dtype=np.float64)
        for b in range(deltas.shape[0]):
            preds, _, _, _ = kernels.evaluate_relearn(
                self._eval_X, self._eval_y, self._store_X, self._store_y, deltas[b], self._classes
            )
            diff = (self._eval_y - preds).astype(np.float64)
            out[b] = 0.5 * float(diff @ diff)
        return out


def train_sing(train: Dataset, config: SingTrainConfig) -> tuple[np.ndarray, SingTrainReport]:
    """Fit the delta vector on a teaching set and report teaching-set quality.

    Returns ``(delta, report)``.  The teaching numbers in the report come
    from rebuilding groups on the full teaching set with the fitted delta
    and scoring the teaching set itself.
    """
    if len(train) < 2:
        raise ValueError("training needs at least 2 samples")
    if np.unique(train.y).size < 2:
        raise ValueError("training needs at least 2 classes")
    m = train.schema.feature_count
    delta_max = np.broadcast_to(np.asarray(config.delta_max, dtype=np.float64), (m,)).copy()
    if not np.all(np.isfinite(delta_max)) or np.any(delta_max <= 0):
        raise ValueError("delta_max must be positive and finite per feature")

    fold_i, fold_ii = halve(train, config.seed)
    domain = SearchDomain(np.zeros(m), delta_max)
    best = []
    reports = []
    for direction, (store, scored) in enumerate([(fold_i, fold_ii), (fold_ii, fold_i)]):
        objective = _FoldObjective(store, scored, config.relearn_during_fit)
        most = replace(config.most, seed=(config.seed, direction + 1))
        point, report = optimize(objective, domain, most)
        best.append(point)
        reports.append(report)
    delta = np.maximum(best[0], best[1])  # the larger half-width per feature wins

    store = build_groups(train, delta)
    teaching = evaluate(store, train, relearn_flag=False)
    report = SingTrainReport(
        delta=delta,
        delta_i_to_ii=best[0],
        delta_ii_to_i=best[1],
        report_i_to_ii=reports[0],
        report_ii_to_i=reports[1],
        fold_sizes=(len(fold_i), len(fold_ii)),
        teaching_accuracy=teaching.accuracy,
        teaching_error=teaching.error,
        teaching_unknown=teaching.unknown_count,
        duplicate_groups=store.duplicate_group_count(),
    )
    return delta, report
