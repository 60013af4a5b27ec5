"""Dense linear programming and the max-min neighborhood regret bound.

The solver is a two-phase primal simplex on a dense tableau with Bland's
anti-cycling rule.  Problems here are tiny (a handful of variables), so
determinism and robustness matter more than speed.

The neighborhood bound maximizes, over weights w in the hull of a
neighborhood, the gap between the lowest vertex tangent plane and the
linear interpolation P of the optimal cost through the vertices.  Two
equivalent assemblies are provided: the full form with coupled variables
(w, lambda, x) mirroring the equality system

    sum(w) = 1,  sum(lambda) = 1,  w_j = sum_i lambda_i w_j^i,

and a reduced form that substitutes w away and keeps only (lambda, x).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import EPS_RANK, Neighborhood, WeightVector, _pivot_magnitudes
from .errors import DimensionMismatch, LPFailure, SingularNeighborhood

EPS_LP = 1e-8       # feasibility / optimality certification slack
_PIV_TOL = 1e-10    # reduced-cost and pivot-eligibility threshold
_SNAP = 1e-11       # |bound| below this is floating dust, snapped to 0


class LPStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """maximize objective . x  s.t.  a_eq x = b_eq,  a_ge x >= b_ge.

    Variables are nonnegative except those listed in `free`.
    """

    objective: np.ndarray
    a_eq: np.ndarray
    b_eq: np.ndarray
    a_ge: np.ndarray
    b_ge: np.ndarray
    free: frozenset[int] = frozenset()

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.objective, dtype=float))
        n = c.shape[0]
        a_eq = np.asarray(self.a_eq, dtype=float).reshape(-1, n) if np.size(self.a_eq) else np.zeros((0, n))
        a_ge = np.asarray(self.a_ge, dtype=float).reshape(-1, n) if np.size(self.a_ge) else np.zeros((0, n))
        b_eq = np.atleast_1d(np.asarray(self.b_eq, dtype=float)) if np.size(self.b_eq) else np.zeros(0)
        b_ge = np.atleast_1d(np.asarray(self.b_ge, dtype=float)) if np.size(self.b_ge) else np.zeros(0)
        if a_eq.shape[0] != b_eq.shape[0] or a_ge.shape[0] != b_ge.shape[0]:
            raise DimensionMismatch("row counts of matrices and rhs vectors disagree")
        for arr in (c, a_eq, b_eq, a_ge, b_ge):
            if not np.all(np.isfinite(arr)):
                raise DimensionMismatch("non-finite entry in linear program")
        if any(j < 0 or j >= n for j in self.free):
            raise DimensionMismatch("free-variable index out of range")
        for name, arr in (("objective", c), ("a_eq", a_eq), ("b_eq", b_eq),
                          ("a_ge", a_ge), ("b_ge", b_ge)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def num_vars(self) -> int:
        return self.objective.shape[0]


@dataclass(frozen=True, eq=False)
class LPSolution:
    status: LPStatus
    variables: np.ndarray | None
    objective_value: float

    @property
    def optimal(self) -> bool:
        return self.status is LPStatus.OPTIMAL


def _bland_simplex(tab: np.ndarray, rhs: np.ndarray, cost: np.ndarray, basis: list[int]):
    """Maximize cost.x over {tab x = rhs, x >= 0} from a basic feasible start.

    Mutates tab/rhs/basis in place.  Returns "optimal" or "unbounded".
    Entering variable: lowest index with positive reduced cost; leaving:
    lowest-index basic variable among minimum-ratio rows (Bland).
    """
    m, n = tab.shape
    while True:
        reduced = cost - cost[basis] @ tab
        reduced[basis] = 0.0
        enter = -1
        for j in range(n):
            if reduced[j] > _PIV_TOL:
                enter = j
                break
        if enter < 0:
            return "optimal"
        col = tab[:, enter]
        leave = -1
        best_ratio = np.inf
        for i in range(m):
            if col[i] > _PIV_TOL:
                ratio = rhs[i] / col[i]
                if ratio < best_ratio - 1e-12 or (
                    abs(ratio - best_ratio) <= 1e-12
                    and (leave < 0 or basis[i] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = i
        if leave < 0:
            return "unbounded"
        _pivot(tab, rhs, basis, leave, enter)


def _pivot(tab: np.ndarray, rhs: np.ndarray, basis: list[int], row: int, col: int):
    piv = tab[row, col]
    tab[row] /= piv
    rhs[row] /= piv
    factors = tab[:, col].copy()
    factors[row] = 0.0
    tab -= np.outer(factors, tab[row])
    rhs -= factors * rhs[row]
    tab[:, col] = 0.0
    tab[row, col] = 1.0
    basis[row] = col


def solve_lp(lp: LinearProgram) -> LPSolution:
    """Two-phase primal simplex with Bland's rule.

    Free variables are split into positive and negative parts; inequality
    rows get surplus variables; every row gets a phase-1 artificial.
    Deterministic for identical input.
    """
    n = lp.num_vars
    free = sorted(lp.free)
    neg_col = {j: n + k for k, j in enumerate(free)}
    n_split = n + len(free)

    a = np.vstack([lp.a_eq, lp.a_ge])
    b = np.concatenate([lp.b_eq, lp.b_ge])
    m = a.shape[0]
    n_ge = lp.a_ge.shape[0]

    # columns: original vars, negative parts of free vars, surplus for >= rows
    full = np.zeros((m, n_split + n_ge))
    full[:, :n] = a
    for j, col in neg_col.items():
        full[:, col] = -a[:, j]
    for k in range(n_ge):
        full[m - n_ge + k, n_split + k] = -1.0

    rhs = b.copy()
    flip = rhs < 0.0
    full[flip] *= -1.0
    rhs[flip] *= -1.0

    n_real = n_split + n_ge
    tab = np.hstack([full, np.eye(m)])
    basis = list(range(n_real, n_real + m))

    # phase 1: drive the artificials to zero
    cost1 = np.concatenate([np.zeros(n_real), -np.ones(m)])
    _bland_simplex(tab, rhs, cost1, basis)
    feas_tol = EPS_LP * (1.0 + float(np.max(np.abs(b), initial=0.0)))
    if float(np.dot(cost1[basis], rhs)) < -feas_tol:
        return LPSolution(LPStatus.INFEASIBLE, None, float("nan"))

    # pivot lingering zero-level artificials out; drop redundant rows
    keep_rows = np.ones(m, dtype=bool)
    for i in range(m):
        if basis[i] >= n_real:
            entry = -1
            for j in range(n_real):
                if abs(tab[i, j]) > _PIV_TOL:
                    entry = j
                    break
            if entry >= 0:
                _pivot(tab, rhs, basis, i, entry)
            else:
                keep_rows[i] = False
    if not np.all(keep_rows):
        tab = tab[keep_rows]
        rhs = rhs[keep_rows]
        basis = [bi for bi, k in zip(basis, keep_rows) if k]

    tab = tab[:, :n_real]
    cost2 = np.zeros(n_real)
    cost2[:n] = lp.objective
    for j, col in neg_col.items():
        cost2[col] = -lp.objective[j]

    if _bland_simplex(tab, rhs, cost2, basis) == "unbounded":
        return LPSolution(LPStatus.UNBOUNDED, None, float("nan"))

    x_std = np.zeros(n_real)
    x_std[basis] = rhs
    x = x_std[:n].copy()
    for j, col in neg_col.items():
        x[j] -= x_std[col]
    return LPSolution(LPStatus.OPTIMAL, x, float(np.dot(lp.objective, x)))


def _check_neighborhood_parts(vertices, costs, features):
    v = np.asarray(vertices, dtype=float)
    u = np.asarray(costs, dtype=float)
    f = np.asarray(features, dtype=float)
    n = v.shape[0]
    if v.shape != (n, n) or u.shape != (n,) or f.shape[0] != n:
        raise DimensionMismatch(
            f"expected n vertices/costs/features of dimension n, got {v.shape}, {u.shape}, {f.shape}"
        )
    if np.min(_pivot_magnitudes(v)) <= EPS_RANK:
        raise SingularNeighborhood("neighborhood vertices are linearly dependent")
    return v, u, f, n


def regret_lp_appendix(vertices, costs, features) -> LinearProgram:
    """Full assembly with variables (w_1..w_n, lambda_1..lambda_n, x)."""
    v, u, f, n = _check_neighborhood_parts(vertices, costs, features)
    nv = 2 * n + 1
    c = np.zeros(nv)
    c[n:2 * n] = -u
    c[2 * n] = 1.0

    a_ge = np.zeros((n, nv))
    a_ge[:, :n] = f
    a_ge[:, 2 * n] = -1.0
    b_ge = np.zeros(n)

    a_eq = np.zeros((n + 2, nv))
    a_eq[0, :n] = 1.0
    a_eq[1, n:2 * n] = 1.0
    b_eq = np.zeros(n + 2)
    b_eq[0] = 1.0
    b_eq[1] = 1.0
    for j in range(n):
        a_eq[2 + j, j] = -1.0
        a_eq[2 + j, n:2 * n] = v[:, j]
    return LinearProgram(c, a_eq, b_eq, a_ge, b_ge, free=frozenset({2 * n}))


def regret_lp_reduced(vertices, costs, features) -> LinearProgram:
    """Substituted assembly with variables (lambda_1..lambda_n, x)."""
    v, u, f, n = _check_neighborhood_parts(vertices, costs, features)
    nv = n + 1
    c = np.zeros(nv)
    c[:n] = -u
    c[n] = 1.0

    a_ge = np.zeros((n, nv))
    a_ge[:, :n] = f @ v.T    # row i: sum_j lambda_j (f_i . v^j) - x >= 0
    a_ge[:, n] = -1.0
    b_ge = np.zeros(n)

    a_eq = np.zeros((1, nv))
    a_eq[0, :n] = 1.0
    b_eq = np.ones(1)
    return LinearProgram(c, a_eq, b_eq, a_ge, b_ge, free=frozenset({n}))


def neighborhood_regret_bound(
    vertices, costs, features, form: str = "appendix"
) -> tuple[float, np.ndarray]:
    """Max-min regret bound and its witness weight over a vertex set.

    Returns (bound, witness) with bound >= 0; values within floating dust
    of 0 are snapped to exactly 0 so converged neighborhoods retire.
    """
    v, u, f, n = _check_neighborhood_parts(vertices, costs, features)
    if form == "appendix":
        lp = regret_lp_appendix(v, u, f)
    elif form == "reduced":
        lp = regret_lp_reduced(v, u, f)
    else:
        raise ValueError(f"unknown form {form!r}")
    sol = solve_lp(lp)
    if not sol.optimal:
        raise LPFailure(f"regret LP returned {sol.status.value}")
    if form == "appendix":
        witness = sol.variables[:n]
    else:
        witness = sol.variables[:n] @ v
    bound = sol.objective_value
    if bound < -1e-9:
        raise LPFailure(f"regret bound {bound} below provable minimum 0")
    if bound < _SNAP:
        bound = 0.0
    return bound, witness


def max_min_neighborhood_regret(neighborhood: Neighborhood, form: str = "appendix") -> tuple[float, WeightVector]:
    """Bound and witness for an assembled neighborhood."""
    bound, witness = neighborhood_regret_bound(
        neighborhood.vertex_matrix(),
        np.array(neighborhood.vertex_costs),
        neighborhood.feature_matrix(),
        form=form,
    )
    return bound, WeightVector(witness)
