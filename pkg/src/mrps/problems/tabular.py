"""Finite-solution problems given directly by their feature rows.

The feasible set is the row list itself, so the solver is an argmin over
rows.  These instances are the workhorse for property tests: every
quantity (optimal cost, regret, bounds) can be brute-forced.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..core import Sample, WeightVector
from ..errors import ValidationError
from .base import ExplicitFeatureSolver


class TabularProblem(ExplicitFeatureSolver):
    def __init__(self, feature_rows: Sequence[Sequence[float]]):
        rows = np.array(feature_rows, dtype=float)
        if rows.ndim != 2 or rows.shape[0] < 1:
            raise ValidationError("feature rows must be a nonempty 2-D table")
        if rows.shape[1] < 2:
            raise ValidationError("need at least 2 objectives")
        if not np.all(np.isfinite(rows)):
            raise ValidationError("feature rows must be finite")
        rows.setflags(write=False)
        self._features = rows

    @property
    def num_solutions(self) -> int:
        return self._features.shape[0]

    def to_json(self) -> dict:
        return {"type": "tabular", "features": self._features.tolist()}


def tabular_solve(problem: TabularProblem, w: WeightVector) -> Sample:
    """Lowest-index row minimizing the scalarized cost."""
    return problem.solve(w)
