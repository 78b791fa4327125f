"""MOST: derivative-free minimization by Monte-Carlo region scores and bisection.

The search box is narrowed one variable at a time.  An optional initial scan
splits each variable's interval into equal parts, scores every part by the
Monte-Carlo mean of the objective (the other variables sampled uniformly over
their current intervals), and keeps the lowest-scoring part.  Then repeated
sweeps bisect each variable's interval, score both halves the same way, and
keep the lower one, until every interval is narrower than ``tolerance``
relative to its initial width.  The returned point is the midpoint of each
final interval.

Equal-width subregions are compared by the plain sample mean: mean, integral,
and any common normalization rank identical regions identically, and the rank
order is all the region selection uses.

Interval endpoints are tracked as dyadic fractions of the post-scan interval,
so after K bisections a variable's width is exactly its starting width times
2**-K and replays are bit-identical.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

GRID_ORACLE_BUDGET = 10**7
_GRID_CHUNK = 1 << 20


class ObjectiveError(ValueError):
    """The objective returned a non-finite value; ``point`` is the offending input."""

    def __init__(self, message, point):
        super().__init__(message)
        self.point = np.asarray(point, dtype=np.float64)


@dataclass(frozen=True)
class SearchDomain:
    """Per-variable box bounds: lower_j < upper_j, all finite."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.ascontiguousarray(self.lower, dtype=np.float64))
        upper = np.atleast_1d(np.ascontiguousarray(self.upper, dtype=np.float64))
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ValueError("lower and upper must be 1-D and aligned")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ValueError("domain bounds must be finite")
        if not np.all(lower < upper):
            raise ValueError("every variable needs lower < upper")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def n(self) -> int:
        return self.lower.shape[0]

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower


@dataclass(frozen=True)
class MostConfig:
    """Optimizer knobs.

    ``tolerance`` is relative: a variable is converged once its interval is
    narrower than tolerance times its initial width.  ``seed`` may be an int
    or a tuple of ints; every Monte-Carlo draw derives its own stream from
    (seed, phase, sweep/division, variable, half) so replays are exact.
    """

    initial_divisions: int = 20
    mc_samples: int = 50
    tolerance: float = 1e-6
    max_sweeps: int = 60
    seed: int | tuple = 0
    use_initial_scan: bool = True

    def __post_init__(self):
        if self.initial_divisions < 1:
            raise ValueError("initial_divisions must be >= 1")
        if self.mc_samples < 1:
            raise ValueError("mc_samples must be >= 1")
        if not (0.0 < self.tolerance < 1.0):
            raise ValueError("tolerance is relative and must lie in (0, 1)")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be >= 1")


@dataclass(frozen=True)
class ScanChoice:
    """Outcome of the initial scan for one variable."""

    variable: int
    division: int
    lower: float
    upper: float
    scores: np.ndarray


@dataclass(frozen=True)
class TraceRow:
    """One bisection comparison: parent interval, both scores, kept half."""

    sweep: int
    variable: int
    lower: float
    upper: float
    score_low: float
    score_high: float
    kept: str


@dataclass(frozen=True)
class OptimizeReport:
    best_point: np.ndarray
    final_widths: np.ndarray  # absolute widths of the final intervals
    rel_widths: np.ndarray  # final width / initial domain width, per variable
    bisections: np.ndarray  # bisection count per variable
    bisect_base_widths: np.ndarray  # interval width when bisection started
    sweeps_used: int
    converged: bool
    evaluations: int
    region_trace: list[TraceRow] = field(default_factory=list)
    scan_choices: list[ScanChoice] | None = None


def _seed_entropy(seed) -> tuple[int, ...]:
    parts = seed if isinstance(seed, tuple) else (seed,)
    out = []
    for p in parts:
        p = int(p)
        if p < 0:
            raise ValueError("seeds must be non-negative integers")
        out.append(p)
    return tuple(out)


def _stream(seed, *path: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(_seed_entropy(seed) + path))


def _eval_batch(objective, points: np.ndarray) -> np.ndarray:
    """Evaluate the objective on (P, n) points; error out on non-finite values."""
    batch = getattr(objective, "batch", None)
    if batch is not None:
        values = np.asarray(batch(points), dtype=np.float64)
    else:
        values = np.array([float(objective(p)) for p in points], dtype=np.float64)
    if values.shape != (points.shape[0],):
        raise ValueError("objective batch returned a misshapen result")
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise ObjectiveError(f"objective returned {values[bad[0]]!r}", points[bad[0]])
    return values


class _CountingObjective:
    """Forwards to the user objective while counting evaluations."""

    def __init__(self, objective):
        self._objective = objective
        self.calls = 0

    def __call__(self, point):
        return float(self._objective(np.asarray(point, dtype=np.float64)))

    def batch(self, points):
        self.calls += points.shape[0]
        return _eval_batch(self._objective, points)


def mc_score(objective, region: SearchDomain, mc_samples: int, rng: np.random.Generator) -> float:
    """Mean of the objective over points drawn uniformly from the region box.

    Samples are drawn up front and summed in draw order, so the result does
    not depend on how the objective evaluates them.
    """
    u = rng.random((mc_samples, region.n))
    points = region.lower + u * (region.upper - region.lower)
    return float(_eval_batch(objective, points).mean())


def _part_bounds(lower: float, width: float, divisions: int, d: int) -> tuple[float, float]:
    return lower + width * (d / divisions), lower + width * ((d + 1) / divisions)


def _scan_variable(objective, lows, highs, domain, config, j, score_fn) -> ScanChoice:
    scores = np.empty(config.initial_divisions, dtype=np.float64)
    span = float(domain.upper[j] - domain.lower[j])
    for d in range(config.initial_divisions):
        part_lo, part_hi = _part_bounds(float(domain.lower[j]), span, config.initial_divisions, d)
        region_lo = lows.copy()
        region_hi = highs.copy()
        region_lo[j], region_hi[j] = part_lo, part_hi
        rng = _stream(config.seed, 0, d, j, 0)
        scores[d] = score_fn(objective, SearchDomain(region_lo, region_hi), config.mc_samples, rng)
    best = int(np.argmin(scores))  # ties -> lowest index
    lo, hi = _part_bounds(float(domain.lower[j]), span, config.initial_divisions, best)
    return ScanChoice(variable=j, division=best, lower=lo, upper=hi, scores=scores)


def initial_scan(objective, domain: SearchDomain, config: MostConfig, variable: int):
    """Split one variable's interval into equal parts and keep the cheapest.

    The other variables are sampled uniformly over their full intervals.
    Returns a :class:`ScanChoice`.
    """
    if not config.use_initial_scan:
        raise ValueError("initial scan is disabled in this config")
    wrapped = _CountingObjective(objective)
    return _scan_variable(
        wrapped, domain.lower.copy(), domain.upper.copy(), domain, config, variable, mc_score
    )


def optimize(objective, domain: SearchDomain, config: MostConfig = MostConfig(), score_fn=None):
    """Minimize over a box; returns (best_point, report).

    ``score_fn(objective, region, mc_samples, rng) -> float`` scores one
    candidate region and defaults to :func:`mc_score`; tests may substitute
    deterministic quadrature.  Exhausting ``max_sweeps`` is reported via
    ``converged=False``, not raised.
    """
    if score_fn is None:
        score_fn = mc_score
    wrapped = _CountingObjective(objective)
    n = domain.n

    base_lo = domain.lower.astype(np.float64).copy()
    base_w = (domain.upper - domain.lower).astype(np.float64)
    rel_base = np.ones(n)
    num = [0] * n
    k = [0] * n

    def bounds(j: int) -> tuple[float, float]:
        scale = 2.0 ** -k[j]
        return base_lo[j] + base_w[j] * (num[j] * scale), base_lo[j] + base_w[j] * ((num[j] + 1) * scale)

    scan_choices = None
    if config.use_initial_scan and config.initial_divisions > 1:
        scan_choices = []
        for j in range(n):
            lows = np.array([bounds(i)[0] for i in range(n)])
            highs = np.array([bounds(i)[1] for i in range(n)])
            choice = _scan_variable(wrapped, lows, highs, domain, config, j, score_fn)
            scan_choices.append(choice)
            base_lo[j] = choice.lower
            base_w[j] = choice.upper - choice.lower
            rel_base[j] = 1.0 / config.initial_divisions

    def rel_width(j: int) -> float:
        return rel_base[j] * 2.0 ** -k[j]

    trace: list[TraceRow] = []
    sweeps = 0
    while sweeps < config.max_sweeps and any(rel_width(j) >= config.tolerance for j in range(n)):
        sweeps += 1
        for j in range(n):
            if rel_width(j) < config.tolerance:
                continue
            parent_lo, parent_hi = bounds(j)
            lows = np.array([bounds(i)[0] for i in range(n)])
            highs = np.array([bounds(i)[1] for i in range(n)])
            half_scores = []
            for half in (0, 1):
                region_lo = lows.copy()
                region_hi = highs.copy()
                scale = 2.0 ** -(k[j] + 1)
                region_lo[j] = base_lo[j] + base_w[j] * ((2 * num[j] + half) * scale)
                region_hi[j] = base_lo[j] + base_w[j] * ((2 * num[j] + half + 1) * scale)
                rng = _stream(config.seed, 1, sweeps, j, half)
                half_scores.append(score_fn(wrapped, SearchDomain(region_lo, region_hi), config.mc_samples, rng))
            keep_high = half_scores[1] < half_scores[0]  # tie -> keep the lower half
            num[j] = 2 * num[j] + (1 if keep_high else 0)
            k[j] += 1
            trace.append(
                TraceRow(
                    sweep=sweeps,
                    variable=j,
                    lower=parent_lo,
                    upper=parent_hi,
                    score_low=half_scores[0],
                    score_high=half_scores[1],
                    kept="high" if keep_high else "low",
                )
            )
    converged = all(rel_width(j) < config.tolerance for j in range(n))

    best = np.empty(n, dtype=np.float64)
    for j in range(n):
        best[j] = base_lo[j] + base_w[j] * ((num[j] + 0.5) * 2.0 ** -k[j])
    np.clip(best, domain.lower, domain.upper, out=best)
    report = OptimizeReport(
        best_point=best,
        final_widths=np.array([base_w[j] * 2.0 ** -k[j] for j in range(n)]),
        rel_widths=np.array([rel_width(j) for j in range(n)]),
        bisections=np.array(k, dtype=np.int64),
        bisect_base_widths=base_w.copy(),
        sweeps_used=sweeps,
        converged=converged,
        evaluations=wrapped.calls,
        region_trace=trace,
        scan_choices=scan_choices,
    )
    return best, report


def write_trace_csv(report: OptimizeReport, path) -> None:
    """Dump the bisection trace: sweep, variable, lower, upper, score_low, score_high, kept."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sweep", "variable", "lower", "upper", "score_low", "score_high", "kept"])
        for row in report.region_trace:
            writer.writerow(
                [row.sweep, row.variable, repr(row.lower), repr(row.upper), repr(row.score_low), repr(row.score_high), row.kept]
            )


def grid_oracle(objective, domain: SearchDomain, points_per_axis: int):
    """Exhaustive lattice search used as an independent check on optimize.

    Evaluates an inclusive regular lattice with ``points_per_axis`` points
    per variable and returns (best_point, best_value); the first lattice
    point attaining the minimum wins.  Guarded to at most 10**7 evaluations.
    """
    if points_per_axis < 2:
        raise ValueError("points_per_axis must be >= 2")
    n = domain.n
    total = points_per_axis**n
    if total > GRID_ORACLE_BUDGET:
        raise ValueError(f"grid of {total} points exceeds the {GRID_ORACLE_BUDGET} evaluation budget")
    axes = [np.linspace(domain.lower[j], domain.upper[j], points_per_axis) for j in range(n)]
    shape = (points_per_axis,) * n
    best_value = math.inf
    best_point = None
    for start in range(0, total, _GRID_CHUNK):
        flat = np.arange(start, min(start + _GRID_CHUNK, total))
        multi = np.unravel_index(flat, shape)
        points = np.column_stack([axes[j][multi[j]] for j in range(n)])
        values = _eval_batch(objective, points)
        local = int(np.argmin(values))
        if values[local] < best_value:
            best_value = float(values[local])
            best_point = points[local].copy()
    return best_point, best_value
