"""Domain types and weight-simplex geometry.

Weights live on the (n-1)-simplex: nonnegative components summing to 1.
A neighborhood is a set of n linearly independent weights whose convex
hull tiles part of the simplex; the linear interpolation of the optimal
cost through its vertices underestimates the true optimal cost because
the optimal cost is concave in the weight.

All types are immutable after construction and all operations are pure,
so everything here is safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import (
    AllZero,
    InvalidVector,
    NegativeEntry,
    OutsideHull,
    SingularNeighborhood,
)

# Floating-point tolerances used throughout the package.  The math is exact;
# these make the invariants testable in floating point.
EPS_SUM = 1e-9      # |sum(w) - 1| slack for normalized weights
EPS_RANK = 1e-9     # minimum pivot magnitude for linear independence
EPS_DUP = 1e-9      # Euclidean distance under which weights count as equal
HULL_SLACK = 1e-7   # barycentric-coordinate slack for hull membership


def _as_float_tuple(values: Iterable[float]) -> tuple[float, ...]:
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class WeightVector:
    """Point on the weight simplex.

    The constructor normalizes: any nonnegative, not-all-zero input is
    scaled to sum to 1 (components in [-EPS_SUM, 0) are snapped to 0
    first, so vertices computed by the LP survive round-off).
    """

    components: tuple[float, ...]

    def __init__(self, components: Iterable[float]):
        raw = _as_float_tuple(components)
        if len(raw) < 2:
            raise InvalidVector(f"need at least 2 components, got {len(raw)}")
        if any(not math.isfinite(c) for c in raw):
            raise InvalidVector(f"non-finite component in {raw}")
        if any(c < -EPS_SUM for c in raw):
            raise NegativeEntry(f"negative component in {raw}")
        raw = tuple(0.0 if c < 0.0 else c for c in raw)
        total = math.fsum(raw)
        if total <= 0.0:
            raise AllZero("cannot normalize the all-zero weight vector")
        if abs(total - 1.0) > 1e-15:
            raw = tuple(c / total for c in raw)
        object.__setattr__(self, "components", raw)

    @property
    def dimension(self) -> int:
        return len(self.components)

    def as_array(self) -> np.ndarray:
        return np.array(self.components, dtype=float)

    def distance_to(self, other: "WeightVector") -> float:
        return math.dist(self.components, other.components)

    def to_json(self) -> list[float]:
        return list(self.components)

    @classmethod
    def from_json(cls, data: Sequence[float]) -> "WeightVector":
        return cls(data)

    @classmethod
    def basis(cls, n: int, i: int) -> "WeightVector":
        return cls(tuple(1.0 if j == i else 0.0 for j in range(n)))

    @classmethod
    def barycenter(cls, n: int) -> "WeightVector":
        return cls((1.0 / n,) * n)


@dataclass(frozen=True)
class FeatureVector:
    """Objective values of one solution, in problem-specific units."""

    values: tuple[float, ...]

    def __init__(self, values: Iterable[float]):
        vals = _as_float_tuple(values)
        if not vals:
            raise InvalidVector("feature vector must be nonempty")
        if any(not math.isfinite(v) for v in vals):
            raise InvalidVector(f"non-finite feature value in {vals}")
        object.__setattr__(self, "values", vals)

    @property
    def dimension(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    def dot(self, w: WeightVector) -> float:
        return float(np.dot(self.values, w.components))

    def to_json(self) -> list[float]:
        return list(self.values)

    @classmethod
    def from_json(cls, data: Sequence[float]) -> "FeatureVector":
        return cls(data)


@dataclass(frozen=True)
class Sample:
    """A sampled weight with its optimal solution, features and cost."""

    weight: WeightVector
    solution: Any
    features: FeatureVector
    cost: float

    def __post_init__(self):
        if self.weight.dimension != self.features.dimension:
            raise InvalidVector(
                f"weight dimension {self.weight.dimension} != "
                f"feature dimension {self.features.dimension}"
            )
        expected = self.features.dot(self.weight)
        if abs(self.cost - expected) > 1e-9:
            raise InvalidVector(
                f"cost {self.cost} disagrees with weight.features {expected}"
            )

    def to_json(self) -> dict:
        return {
            "weight": self.weight.to_json(),
            "features": self.features.to_json(),
            "cost": self.cost,
            "solution": self.solution,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Sample":
        return cls(
            weight=WeightVector(data["weight"]),
            solution=data["solution"],
            features=FeatureVector(data["features"]),
            cost=float(data["cost"]),
        )


def _pivot_magnitudes(matrix: np.ndarray) -> np.ndarray:
    """Pivot magnitudes of a partially pivoted Gaussian elimination.

    Cheap, deterministic surrogate for singular values: the matrix has
    full rank (under tolerance) iff every returned magnitude exceeds it.
    """
    a = np.array(matrix, dtype=float)
    m = a.shape[0]
    pivots = np.empty(m)
    for k in range(m):
        col = np.abs(a[k:, k])
        p = int(np.argmax(col)) + k
        pivots[k] = abs(a[p, k])
        if pivots[k] == 0.0:
            pivots[k:] = 0.0
            break
        if p != k:
            a[[k, p]] = a[[p, k]]
        a[k + 1:] -= np.outer(a[k + 1:, k] / a[k, k], a[k])
    return pivots


def is_neighborhood(weights: Sequence[WeightVector]) -> bool:
    """True iff the stacked weights form a full-rank n x n matrix."""
    n = weights[0].dimension
    if len(weights) != n:
        return False
    m = np.array([w.components for w in weights])
    return bool(np.min(_pivot_magnitudes(m)) > EPS_RANK)


@dataclass(frozen=True)
class Neighborhood:
    """n affinely spanning sampled weights with cached solver data.

    `bound` is the max-min upper regret bound over the hull and `witness`
    the weight attaining it; both come from the regret LP.
    """

    vertices: tuple[WeightVector, ...]
    vertex_costs: tuple[float, ...]
    vertex_features: tuple[FeatureVector, ...]
    bound: float
    witness: WeightVector

    def __post_init__(self):
        n = self.vertices[0].dimension
        if not (len(self.vertices) == len(self.vertex_costs) == len(self.vertex_features) == n):
            raise InvalidVector("neighborhood needs exactly n vertices, costs and features")
        if not is_neighborhood(self.vertices):
            raise SingularNeighborhood("vertices are linearly dependent")
        if self.bound < 0.0:
            raise InvalidVector(f"negative regret bound {self.bound}")
        lam = barycentric_coordinates(self.witness, self)
        if any(l < -HULL_SLACK or l > 1.0 + HULL_SLACK for l in lam):
            raise OutsideHull(f"witness {self.witness} outside hull (bary {lam})")

    @property
    def dimension(self) -> int:
        return self.vertices[0].dimension

    def vertex_matrix(self) -> np.ndarray:
        return np.array([v.components for v in self.vertices])

    def feature_matrix(self) -> np.ndarray:
        return np.array([f.values for f in self.vertex_features])


@dataclass(frozen=True)
class SampleSet:
    """Ordered collection of samples plus the certified regret bound."""

    samples: tuple[Sample, ...]
    certified_bound: float
    dimension: int

    def __post_init__(self):
        for s in self.samples:
            if s.weight.dimension != self.dimension:
                raise InvalidVector("sample dimension mismatch")
        if self.certified_bound < 0.0:
            raise InvalidVector(f"negative certified bound {self.certified_bound}")
        ws = [s.weight for s in self.samples]
        for i in range(len(ws)):
            for j in range(i + 1, len(ws)):
                if ws[i].distance_to(ws[j]) <= EPS_DUP:
                    raise InvalidVector(f"duplicate weights at indices {i}, {j}")

    def __len__(self) -> int:
        return len(self.samples)

    def weights(self) -> list[WeightVector]:
        return [s.weight for s in self.samples]

    def feature_matrix(self) -> np.ndarray:
        return np.array([s.features.values for s in self.samples])

    def to_json(self) -> list[dict]:
        return [s.to_json() for s in self.samples]


def normalize_weight(raw: Sequence[float]) -> WeightVector:
    """Scale a nonnegative vector onto the simplex.

    Raises NegativeEntry for any entry < 0 and AllZero when every entry
    is 0 (the scalarized cost is trivially 0 there; there is nothing to
    normalize).
    """
    vals = _as_float_tuple(raw)
    if any(v < 0.0 for v in vals):
        raise NegativeEntry(f"negative entry in {vals}")
    if all(v == 0.0 for v in vals):
        raise AllZero("all entries are zero")
    return WeightVector(vals)


def simplex_grid(n: int, resolution: int) -> list[WeightVector]:
    """All weights with components k/resolution, k integer.

    Enumerates the integer compositions of `resolution` into n parts in
    descending lexicographic order, so output is deterministic and
    contains exactly C(resolution + n - 1, n - 1) points.
    """
    if n < 2:
        raise InvalidVector(f"dimension must be >= 2, got {n}")
    if resolution < 1:
        raise InvalidVector(f"resolution must be >= 1, got {resolution}")
    out: list[WeightVector] = []
    comp = [0] * n

    def rec(pos: int, remaining: int):
        if pos == n - 1:
            comp[pos] = remaining
            out.append(WeightVector(tuple(k / resolution for k in comp)))
            return
        for k in range(remaining, -1, -1):
            comp[pos] = k
            rec(pos + 1, remaining - k)

    rec(0, resolution)
    return out


def barycentric_coordinates(w: WeightVector, neighborhood: Neighborhood | Sequence[WeightVector]) -> list[float]:
    """Coordinates lambda with sum(lambda) = 1 and sum(lambda_i v_i) = w.

    Solves the n x n system stacking the vertices as columns.  Values may
    be negative when w lies outside the hull; membership is the caller's
    check.
    """
    if isinstance(neighborhood, Neighborhood):
        vertices = neighborhood.vertices
    else:
        vertices = tuple(neighborhood)
    m = np.array([v.components for v in vertices]).T
    if np.min(_pivot_magnitudes(m)) <= EPS_RANK:
        raise SingularNeighborhood("vertex matrix is rank-deficient")
    lam = np.linalg.solve(m, w.as_array())
    return [float(v) for v in lam]


def interpolate_P(w: WeightVector, neighborhood: Neighborhood) -> float:
    """Linear interpolation of the optimal cost through the vertices.

    Lower-bounds the true optimal cost on the hull (concavity).  Raises
    OutsideHull when w is not a convex combination of the vertices.
    """
    lam = barycentric_coordinates(w, neighborhood)
    if any(l < -HULL_SLACK for l in lam):
        raise OutsideHull(f"{w} outside hull (bary {lam})")
    return float(np.dot(lam, neighborhood.vertex_costs))
