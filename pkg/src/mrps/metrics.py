"""Regret measures, grid ground truth, Pareto fronts and hypervolume.

Ground-truth maximum regret sweeps a dense simplex grid: for each grid
weight the best representative in the sample set is compared against the
true optimal cost.  Solvers backed by an explicit candidate set are
evaluated in one vectorized pass; anything else goes through a per-weight
cache keyed by the exact weight components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import FeatureVector, Sample, SampleSet, WeightVector, simplex_grid
from .errors import (
    BadReference,
    DimensionError,
    DimensionMismatch,
    InvalidVector,
    ZeroOptimalCost,
)
from .problems.base import SolverInterface

_ZERO_COST = 1e-12   # optimal costs at or below this make ratios undefined

# Grid densities chosen so the sweep stays around 1e4 points per problem.
_DEFAULT_GRID = {2: 1000, 3: 100, 4: 40}


def default_grid_resolution(n: int) -> int:
    try:
        return _DEFAULT_GRID[n]
    except KeyError:
        raise DimensionError(f"no default grid resolution for n={n}") from None


@dataclass(frozen=True)
class RegretReport:
    max_regret: float
    argmax_weight: WeightVector
    max_relative_regret: float
    grid_resolution: int

    def __post_init__(self):
        if self.max_regret < -1e-7:
            raise InvalidVector(f"negative max regret {self.max_regret}")
        if not math.isnan(self.max_relative_regret) and self.max_relative_regret < 1.0 - 1e-7:
            raise InvalidVector(f"relative regret {self.max_relative_regret} below 1")

    def to_json(self) -> dict:
        return {
            "max_regret": self.max_regret,
            "argmax_weight": self.argmax_weight.to_json(),
            "max_relative_regret": self.max_relative_regret,
            "grid_resolution": self.grid_resolution,
        }


class CachedSolver(SolverInterface):
    """Memoizing wrapper; keys are the exact weight components.

    Values are deterministic, so concurrent insertion races are benign
    (last write wins with an identical value).
    """

    def __init__(self, solver: SolverInterface):
        self._solver = solver
        self._cache: dict[tuple[float, ...], Sample] = {}

    @property
    def dimension(self) -> int:
        return self._solver.dimension

    @property
    def wrapped(self) -> SolverInterface:
        return self._solver

    def solve(self, w: WeightVector) -> Sample:
        key = w.components
        hit = self._cache.get(key)
        if hit is None:
            hit = self._solver.solve(w)
            self._cache[key] = hit
        return hit

    def optimal_costs(self, weights: np.ndarray) -> np.ndarray:
        return self._solver.optimal_costs(weights)


def regret(w_prime_sample: Sample, w_star: WeightVector, solver: SolverInterface) -> float:
    """Extra cost under w_star of using the solution optimal for w_prime."""
    if w_prime_sample.weight.dimension != w_star.dimension:
        raise DimensionMismatch("sample and weight dimensions disagree")
    return w_prime_sample.features.dot(w_star) - solver.solve(w_star).cost


def relative_regret(w_prime_sample: Sample, w_star: WeightVector, solver: SolverInterface) -> float:
    """Ratio form: cost of the approximating solution over the optimum."""
    u_star = solver.solve(w_star).cost
    if u_star <= _ZERO_COST:
        raise ZeroOptimalCost(f"optimal cost {u_star} too small for a ratio")
    return w_prime_sample.features.dot(w_star) / u_star


def max_regret_given_set(
    omega: SampleSet, solver: SolverInterface, grid_resolution: int | None = None
) -> RegretReport:
    """Grid-measured worst-case regret of a sample set.

    For each grid weight w*, the regret of its best representative in
    omega is min over samples of  w* . f(sample) - u(w*);  the report
    carries the maximum, its grid weight, and the ratio analogue (over
    grid points where the optimal cost is positive).
    """
    if len(omega) == 0:
        raise InvalidVector("sample set is empty")
    n = omega.dimension
    m = grid_resolution if grid_resolution is not None else default_grid_resolution(n)
    grid = simplex_grid(n, m)
    g = np.array([w.components for w in grid])
    u = solver.optimal_costs(g)
    best = np.min(g @ omega.feature_matrix().T, axis=1)
    regrets = best - u
    idx = int(np.argmax(regrets))
    defined = u > _ZERO_COST
    max_rel = float(np.max(best[defined] / u[defined])) if np.any(defined) else float("nan")
    return RegretReport(
        max_regret=float(regrets[idx]),
        argmax_weight=grid[idx],
        max_relative_regret=max_rel,
        grid_resolution=m,
    )


@dataclass(frozen=True)
class ParetoFront2D:
    """Mutually non-dominated 2-D points, sorted by the first objective."""

    points: tuple[FeatureVector, ...]

    def __post_init__(self):
        for a, b in zip(self.points, self.points[1:]):
            if not (a.values[0] < b.values[0] and a.values[1] > b.values[1]):
                raise InvalidVector("front must increase in f1 and decrease in f2")

    def as_array(self) -> np.ndarray:
        return np.array([p.values for p in self.points]).reshape(-1, 2)


def pareto_front_2d(samples: Sequence[FeatureVector]) -> ParetoFront2D:
    """Maximal non-dominated subset under minimization, duplicates collapsed."""
    if any(p.dimension != 2 for p in samples):
        raise DimensionError("2-D front requires 2 objectives")
    ordered = sorted({p.values for p in samples})
    kept: list[tuple[float, float]] = []
    for f1, f2 in ordered:
        if kept and f2 >= kept[-1][1]:
            continue  # dominated by (or equal to) the previous kept point
        kept.append((f1, f2))
    return ParetoFront2D(tuple(FeatureVector(p) for p in kept))


def _check_reference(points: np.ndarray, reference: np.ndarray):
    if points.shape[1] != reference.shape[0]:
        raise DimensionMismatch("reference dimension disagrees with points")
    if np.any(points > reference[None, :]):
        raise BadReference("a point exceeds the reference in some coordinate")


def hypervolume(
    points: Sequence[FeatureVector],
    reference: FeatureVector,
    mc_samples: int = 200_000,
    seed: int = 0,
) -> float:
    """Measure of the region dominated by the points, below the reference.

    Exact staircase sweep for 2 objectives; seeded Monte Carlo estimate in
    the bounding box for 3 or more (mc_samples and seed are ignored in the
    exact case).
    """
    if not points:
        return 0.0
    ref = reference.as_array()
    pts = np.array([p.values for p in points])
    _check_reference(pts, ref)
    n = ref.shape[0]
    if n == 2:
        front = pareto_front_2d(list(points)).as_array()
        xs = np.append(front[:, 0], ref[0])
        return float(np.sum((xs[1:] - xs[:-1]) * (ref[1] - front[:, 1])))
    lower = pts.min(axis=0)
    box = float(np.prod(ref - lower))
    if box <= 0.0:
        return 0.0
    rng = np.random.default_rng(seed)
    draws = rng.uniform(lower, ref, size=(mc_samples, n))
    dominated = np.zeros(mc_samples, dtype=bool)
    for p in pts:
        dominated |= np.all(draws >= p, axis=1)
    return box * float(np.mean(dominated))


def default_reference(features) -> FeatureVector:
    """Component-wise maximum of the evaluated features, scaled by 1.1."""
    arr = np.asarray(features, dtype=float)
    arr = arr.reshape(-1, arr.shape[-1])
    return FeatureVector(arr.max(axis=0) * 1.1)
