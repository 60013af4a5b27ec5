"""Min-regret weight-simplex sampling and the uniform baseline.

The sampler keeps a partition of the weight simplex into neighborhoods,
each carrying an upper bound on the regret inside its hull.  Every
iteration splits the worst neighborhood at its witness weight, solves
the scalarized problem there once, and re-bounds the children.  The
maximum bound over live neighborhoods certifies the regret of the whole
sample set.

Bounds are computed once at neighborhood creation and never revised.
Two degeneracy rules keep the loop finite in floating point: a witness
that coincides with a vertex retires its neighborhood without a split,
and a witness that duplicates an existing sample reuses the cached
sample instead of re-solving.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .core import EPS_DUP, Neighborhood, Sample, SampleSet, WeightVector, is_neighborhood, simplex_grid
from .errors import BudgetTooSmall, InputError, WitnessOutsideHull
from .lp import neighborhood_regret_bound
from .problems.base import SolverInterface

# Hard ceiling on loop iterations; orders of magnitude above anything a
# converging run needs, only there to turn a numerics bug into an error.
_MAX_ITERATIONS = 200_000


@dataclass
class SamplerState:
    """Mutable state of one sampling run (single-owner)."""

    omega: list[Sample] = field(default_factory=list)
    live_neighborhoods: list[tuple[float, int, Neighborhood]] = field(default_factory=list)
    iteration: int = 0


@dataclass(frozen=True)
class SamplerReport:
    """Result of a sampling run.

    per_iteration_bounds[0] is the certified bound right after the basis
    initialization; later entries follow each loop iteration.  The
    parallel per_iteration_sizes records |omega| at the same instants.
    """

    omega: SampleSet
    certified_bound: float
    solver_calls: int
    per_iteration_bounds: tuple[float, ...]
    per_iteration_sizes: tuple[int, ...]
    method: str
    converged: bool = True

    def to_json(self) -> dict:
        return {
            "omega": self.omega.to_json(),
            "certified_bound": self.certified_bound,
            "solver_calls": self.solver_calls,
            "per_iteration_bounds": list(self.per_iteration_bounds),
            "per_iteration_sizes": list(self.per_iteration_sizes),
            "method": self.method,
            "converged": self.converged,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SamplerReport":
        samples = tuple(Sample.from_json(s) for s in data["omega"])
        bound = float(data["certified_bound"])
        return cls(
            omega=SampleSet(samples, bound if math.isfinite(bound) else math.inf,
                            samples[0].weight.dimension),
            certified_bound=bound,
            solver_calls=int(data["solver_calls"]),
            per_iteration_bounds=tuple(data["per_iteration_bounds"]),
            per_iteration_sizes=tuple(data["per_iteration_sizes"]),
            method=data["method"],
            converged=bool(data.get("converged", True)),
        )


def _evaluate(vertices, costs, features) -> tuple[float, WeightVector]:
    bound, witness = neighborhood_regret_bound(
        np.array([v.components for v in vertices]),
        np.array(costs),
        np.array([f.values for f in features]),
    )
    return bound, WeightVector(witness)


def _make_neighborhood(vertices, costs, features) -> Neighborhood:
    bound, witness = _evaluate(vertices, costs, features)
    return Neighborhood(tuple(vertices), tuple(costs), tuple(features), bound, witness)


def split_neighborhood(
    neighborhood: Neighborhood, witness: WeightVector, witness_sample: Sample
) -> list[Neighborhood]:
    """Children formed by replacing one vertex at a time with the witness.

    Children whose vertices become linearly dependent are dropped, as is
    any child identical to its parent (witness within EPS_DUP of the
    replaced vertex).  Each returned child carries a fresh bound and
    witness.
    """
    from .core import barycentric_coordinates  # local import avoids cycle at module load

    lam = barycentric_coordinates(witness, neighborhood)
    if any(l < -1e-7 for l in lam):
        raise WitnessOutsideHull(f"witness {witness} has barycentric coordinates {lam}")
    children = []
    n = neighborhood.dimension
    for i in range(n):
        if witness.distance_to(neighborhood.vertices[i]) <= EPS_DUP:
            continue  # child would equal the parent
        vertices = list(neighborhood.vertices)
        costs = list(neighborhood.vertex_costs)
        features = list(neighborhood.vertex_features)
        vertices[i] = witness
        costs[i] = witness_sample.cost
        features[i] = witness_sample.features
        if not is_neighborhood(vertices):
            continue
        children.append(_make_neighborhood(vertices, costs, features))
    return children


class _Run:
    """Shared engine behind the budget and tolerance entry points."""

    def __init__(self, solver: SolverInterface):
        self.solver = solver
        self.state = SamplerState()
        self.solver_calls = 0
        self.bounds_log: list[float] = []
        self.sizes_log: list[int] = []
        self._counter = itertools.count()

    def _obtain_sample(self, w: WeightVector) -> Sample:
        for s in self.state.omega:
            if s.weight.distance_to(w) <= EPS_DUP:
                return s
        sample = self.solver.solve(w)
        self.solver_calls += 1
        self.state.omega.append(sample)
        return sample

    def _push(self, nb: Neighborhood):
        heapq.heappush(self.state.live_neighborhoods, (-nb.bound, next(self._counter), nb))

    def _max_live_bound(self) -> float:
        heap = self.state.live_neighborhoods
        return -heap[0][0] if heap else 0.0

    def _log(self):
        self.bounds_log.append(self._max_live_bound())
        self.sizes_log.append(len(self.state.omega))

    def initialize(self):
        n = self.solver.dimension
        basis = [WeightVector.basis(n, i) for i in range(n)]
        samples = [self._obtain_sample(w) for w in basis]
        self._push(_make_neighborhood(
            basis, [s.cost for s in samples], [s.features for s in samples]))
        self._log()

    def run(self, budget: int, r_max: float | None) -> tuple[float, bool]:
        """Returns (certified_bound, converged)."""
        state = self.state
        while True:
            bound = self._max_live_bound()
            if not state.live_neighborhoods:
                return 0.0, True
            if bound <= 0.0:
                return 0.0, True
            if r_max is not None and bound <= r_max:
                return bound, True
            if len(state.omega) >= budget:
                return bound, r_max is None
            if state.iteration >= _MAX_ITERATIONS:
                raise RuntimeError("sampler failed to make progress; numerics bug")
            state.iteration += 1
            _, _, nb = heapq.heappop(state.live_neighborhoods)
            if min(nb.witness.distance_to(v) for v in nb.vertices) <= EPS_DUP:
                self._log()  # degenerate witness: retire without splitting
                continue
            witness_sample = self._obtain_sample(nb.witness)
            for child in split_neighborhood(nb, nb.witness, witness_sample):
                self._push(child)
            self._log()

    def report(self, certified: float, converged: bool, method: str) -> SamplerReport:
        omega = SampleSet(tuple(self.state.omega), certified, self.solver.dimension)
        return SamplerReport(
            omega=omega,
            certified_bound=certified,
            solver_calls=self.solver_calls,
            per_iteration_bounds=tuple(self.bounds_log),
            per_iteration_sizes=tuple(self.sizes_log),
            method=method,
            converged=converged,
        )


def mrps_sample(solver: SolverInterface, budget: int) -> SamplerReport:
    """Greedy min-regret sampling with a sample budget.

    Starts from the n basis weights, then repeatedly adds the witness of
    the worst live neighborhood until |omega| reaches the budget or every
    bound is 0.  The solver is called exactly once per element of omega.
    """
    n = solver.dimension
    if budget < n:
        raise BudgetTooSmall(f"budget {budget} < dimension {n}")
    run = _Run(solver)
    run.initialize()
    certified, converged = run.run(budget, None)
    return run.report(certified, converged, "mrps")


def mrps_sample_to_tolerance(
    solver: SolverInterface, r_max: float, hard_cap: int
) -> SamplerReport:
    """Same loop, stopping once the certified bound drops to r_max.

    hard_cap limits |omega| as a safety valve; if it triggers first the
    report is flagged not converged.
    """
    if r_max <= 0.0:
        raise InputError(f"tolerance must be positive, got {r_max}")
    n = solver.dimension
    if hard_cap < n:
        raise BudgetTooSmall(f"hard cap {hard_cap} < dimension {n}")
    run = _Run(solver)
    run.initialize()
    certified, converged = run.run(hard_cap, r_max)
    return run.report(certified, converged, "mrps")


def _largest_grid_resolution(n: int, budget: int) -> int:
    m = 1
    while math.comb(m + n, n - 1) <= budget:
        m += 1
    return m


def uniform_sample(
    solver: SolverInterface, budget: int, mode: str = "grid", seed: int = 0
) -> SamplerReport:
    """Uniform baseline: evenly spaced or uniformly random weights.

    grid: the densest simplex grid that fits the budget (basis vectors
    first, remaining grid points in grid order).  random: basis vectors
    plus budget-n draws from the flat Dirichlet via normalized unit-rate
    exponentials.  No regret certificate exists for either mode, so the
    certified bound is reported as +inf.
    """
    n = solver.dimension
    if budget < n:
        raise BudgetTooSmall(f"budget {budget} < dimension {n}")
    if mode not in ("grid", "random"):
        raise InputError(f"unknown uniform mode {mode!r}")

    weights = [WeightVector.basis(n, i) for i in range(n)]

    def is_new(w: WeightVector) -> bool:
        return all(w.distance_to(v) > EPS_DUP for v in weights)

    if mode == "grid":
        for w in simplex_grid(n, _largest_grid_resolution(n, budget)):
            if len(weights) >= budget:
                break
            if is_new(w):
                weights.append(w)
    else:
        rng = np.random.default_rng(seed)
        while len(weights) < budget:
            w = WeightVector(rng.exponential(size=n))
            if is_new(w):
                weights.append(w)

    samples = tuple(solver.solve(w) for w in weights)
    omega = SampleSet(samples, math.inf, n)
    return SamplerReport(
        omega=omega,
        certified_bound=math.inf,
        solver_calls=len(samples),
        per_iteration_bounds=(),
        per_iteration_sizes=(),
        method=f"uniform-{mode}",
    )
