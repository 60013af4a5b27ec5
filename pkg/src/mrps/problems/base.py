"""Solver contract for linearly scalarized multi-objective problems.

A solver must be exact over its declared feasible set, deterministic,
and return finite objective values.  Every concrete problem in this
package reduces to an explicit finite candidate set, so exactness is an
argmin over rows of a candidate feature matrix; `solve` picks the
lowest-index minimizer, which makes the optimal solution single-valued.
"""

from __future__ import annotations

import abc
from typing import Any

import numpy as np

from ..core import FeatureVector, Sample, WeightVector
from ..errors import DimensionMismatch


class SolverInterface(abc.ABC):
    """Exact solver for one scalarized problem family."""

    @property
    @abc.abstractmethod
    def dimension(self) -> int:
        """Number of objectives n."""

    @abc.abstractmethod
    def solve(self, w: WeightVector) -> Sample:
        """Optimal sample for weight w over the declared feasible set."""

    def optimal_costs(self, weights: np.ndarray) -> np.ndarray:
        """Vector of optimal costs for a batch of weights (rows)."""
        return np.array([self.solve(WeightVector(row)).cost for row in weights])


class ExplicitFeatureSolver(SolverInterface):
    """Solver whose feasible set is an explicit candidate feature matrix."""

    _features: np.ndarray  # (num_candidates, n), set by subclasses

    @property
    def dimension(self) -> int:
        return self._features.shape[1]

    @property
    def candidate_features(self) -> np.ndarray:
        """All feasible feature vectors, one row per candidate."""
        return self._features

    def solution_payload(self, index: int) -> Any:
        """JSON-able description of candidate `index`; default is the index."""
        return index

    def solve(self, w: WeightVector) -> Sample:
        if w.dimension != self.dimension:
            raise DimensionMismatch(
                f"weight dimension {w.dimension} != problem dimension {self.dimension}"
            )
        arr = w.as_array()
        idx = int(np.argmin(self._features @ arr))
        features = FeatureVector(self._features[idx])
        return Sample(
            weight=w,
            solution=self.solution_payload(idx),
            features=features,
            cost=features.dot(w),
        )

    def optimal_costs(self, weights: np.ndarray) -> np.ndarray:
        return np.min(np.asarray(weights, dtype=float) @ self._features.T, axis=1)
