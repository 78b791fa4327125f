"""Built-in objective functions with oracle-checkable minima.

Five multimodal 1-D functions and three separable multi-D functions used to
exercise the optimizer: each comes with a search box and a lattice density
at which the grid oracle pins down the minimum well inside the comparison
band used by the demo and the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .most import GRID_ORACLE_BUDGET, MostConfig, SearchDomain, grid_oracle, optimize


@dataclass(frozen=True)
class BenchFunction:
    """A named objective with its search box and oracle lattice density."""

    name: str
    domain: SearchDomain
    oracle_points: int  # per-axis lattice density for the grid oracle

    def batch(self, points: np.ndarray) -> np.ndarray:
        return self._evaluate(np.atleast_2d(np.asarray(points, dtype=np.float64)))

    def __call__(self, x) -> float:
        return float(self.batch(np.asarray(x, dtype=np.float64).reshape(1, -1))[0])

    def _evaluate(self, points: np.ndarray) -> np.ndarray:  # pragma: no cover - overridden
        raise NotImplementedError


def _bench(name, lower, upper, oracle_points, fn):
    lower = np.atleast_1d(np.asarray(lower, dtype=np.float64))
    upper = np.atleast_1d(np.asarray(upper, dtype=np.float64))

    class _Fn(BenchFunction):
        def _evaluate(self, points):
            return fn(points)

    return _Fn(name=name, domain=SearchDomain(lower, upper), oracle_points=oracle_points)


def _damped_ripple(p):
    x = p[:, 0]
    return np.sin(3.0 * np.pi * x) * np.exp(-0.4 * x) + 0.25 * x


def _gramacy_lee(p):
    x = p[:, 0]
    return np.sin(10.0 * np.pi * x) / (2.0 * x) + (x - 1.0) ** 4


def _rippled_parabola(p):
    x = p[:, 0]
    return (x - 1.3) ** 2 + 0.3 * np.sin(9.0 * x)


def _two_wells(p):
    x = p[:, 0]
    return -1.5 * np.exp(-16.0 * (x - 0.45) ** 2) - 0.7 * np.exp(-25.0 * (x - 1.85) ** 2)


def _drifting_wave(p):
    x = p[:, 0]
    return 0.5 * x + np.sin(5.0 * x)


_SPHERE_CENTER = np.array([0.32, 0.57, 0.45, 0.68])
_RIPPLE_CENTER = np.array([0.4, 1.1, 1.9])
_RASTRIGIN_CENTER = np.array([0.3, -0.4])


def _sphere4(p):
    return np.sum((p - _SPHERE_CENTER) ** 2, axis=1)


def _ripple3(p):
    return np.sum((p - _RIPPLE_CENTER) ** 2 + 0.3 * np.sin(9.0 * p), axis=1)


def _rastrigin2(p):
    z = p - _RASTRIGIN_CENTER
    return np.sum(z * z - 0.8 * np.cos(2.0 * np.pi * z) + 0.8, axis=1)


BENCH_FUNCTIONS: tuple[BenchFunction, ...] = (
    _bench("damped_ripple", [0.0], [2.5], 100001, _damped_ripple),
    _bench("gramacy_lee", [0.5], [2.5], 100001, _gramacy_lee),
    _bench("rippled_parabola", [0.0], [2.5], 100001, _rippled_parabola),
    _bench("two_wells", [0.0], [2.5], 100001, _two_wells),
    _bench("drifting_wave", [0.0], [2.5], 100001, _drifting_wave),
    _bench("sphere4", [0.0] * 4, [1.0] * 4, 41, _sphere4),
    _bench("ripple3", [0.0] * 3, [2.5] * 3, 101, _ripple3),
    _bench("rastrigin2", [-1.5] * 2, [1.5] * 2, 801, _rastrigin2),
)


def lattice_range(fn: BenchFunction) -> tuple[float, float]:
    """(min, max) of the function over its oracle lattice, chunked like the oracle."""
    n = fn.domain.n
    total = fn.oracle_points**n
    if total > GRID_ORACLE_BUDGET:
        raise ValueError("oracle lattice exceeds the evaluation budget")
    axes = [np.linspace(fn.domain.lower[j], fn.domain.upper[j], fn.oracle_points) for j in range(n)]
    shape = (fn.oracle_points,) * n
    lo, hi = np.inf, -np.inf
    chunk = 1 << 20
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total))
        multi = np.unravel_index(flat, shape)
        values = fn.batch(np.column_stack([axes[j][multi[j]] for j in range(n)]))
        lo = min(lo, float(values.min()))
        hi = max(hi, float(values.max()))
    return lo, hi


@dataclass(frozen=True)
class SuiteResult:
    name: str
    best_point: np.ndarray
    best_value: float
    oracle_point: np.ndarray
    oracle_value: float
    value_range: float
    within_band: bool
    converged: bool
    rel_widths_ok: bool
    report: object


def run_suite(config: MostConfig, band_fraction: float = 1e-3) -> list[SuiteResult]:
    """Optimize every built-in function and compare against the grid oracle.

    A run is ``within_band`` when the found value is at most the oracle
    minimum plus ``band_fraction`` times the function's value range.
    """
    results = []
    for fn in BENCH_FUNCTIONS:
        best_point, report = optimize(fn, fn.domain, config)
        best_value = fn(best_point)
        oracle_point, oracle_value = grid_oracle(fn, fn.domain, fn.oracle_points)
        lo, hi = lattice_range(fn)
        band = band_fraction * (hi - lo)
        results.append(
            SuiteResult(
                name=fn.name,
                best_point=best_point,
                best_value=best_value,
                oracle_point=oracle_point,
                oracle_value=oracle_value,
                value_range=hi - lo,
                within_band=best_value <= oracle_value + band,
                converged=report.converged,
                rel_widths_ok=bool(np.all(report.rel_widths < config.tolerance)),
                report=report,
            )
        )
    return results
