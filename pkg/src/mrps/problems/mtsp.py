"""Exact multi-robot traveling salesman with sum/max tour-length objectives.

All tours start and end at a shared depot.  The feasible set is every
assignment of the non-depot vertices to robots, each robot visiting its
share in the optimal order.  Per-subset optimal tour costs come from one
Held-Karp sweep; assignments are enumerated as set partitions in
restricted-growth-string order, which fixes the lexicographic tie-break.
Instance sizes are capped so exact enumeration stays desk-scale.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..core import Sample, WeightVector
from ..errors import InstanceTooLarge, ValidationError
from .base import ExplicitFeatureSolver

MAX_NON_DEPOT = 10
MAX_ROBOTS = 4


def _held_karp(dist: np.ndarray, depot: int, cities: list[int]):
    """Optimal depot-rooted tour cost for every subset of `cities`.

    Returns (cost[mask], order_for(mask)) where order_for reconstructs
    the visiting sequence of one optimal tour.
    """
    k = len(cities)
    full = 1 << k
    inf = float("inf")
    dp = np.full((full, k), inf)
    parent = np.full((full, k), -1, dtype=int)
    for i, c in enumerate(cities):
        dp[1 << i, i] = dist[depot, c]
    for mask in range(1, full):
        for last in range(k):
            if not mask & (1 << last):
                continue
            base = dp[mask, last]
            if base == inf:
                continue
            for nxt in range(k):
                if mask & (1 << nxt):
                    continue
                cand = base + dist[cities[last], cities[nxt]]
                new_mask = mask | (1 << nxt)
                if cand < dp[new_mask, nxt]:
                    dp[new_mask, nxt] = cand
                    parent[new_mask, nxt] = last
    cost = np.zeros(full)
    closing = np.zeros(full, dtype=int)
    for mask in range(1, full):
        # close the tour back at the depot
        best_total = inf
        best_last = -1
        for last in range(k):
            if mask & (1 << last):
                total = dp[mask, last] + dist[cities[last], depot]
                if total < best_total:
                    best_total = total
                    best_last = last
        cost[mask] = best_total
        closing[mask] = best_last

    def order_for(mask: int) -> list[int]:
        seq = []
        last = closing[mask]
        cur = mask
        while last >= 0:
            seq.append(cities[last])
            nxt = parent[cur, last]
            cur ^= 1 << last
            last = nxt
        seq.reverse()
        return seq

    return cost, order_for


def _partitions(count: int, max_blocks: int):
    """Set partitions of range(count) into <= max_blocks blocks, as
    restricted growth strings, in lexicographic order."""
    rgs = [0] * count

    def rec(i: int, used: int):
        if i == count:
            yield tuple(rgs)
            return
        for b in range(min(used + 1, max_blocks)):
            rgs[i] = b
            yield from rec(i + 1, max(used, b + 1))

    if count == 0:
        yield ()
    else:
        yield from rec(0, 0)


class MTSPProblem(ExplicitFeatureSolver):
    """Two objectives: total tour length and maximum tour length."""

    def __init__(
        self,
        robots: int,
        depot: int = 0,
        coords: Sequence[Sequence[float]] | None = None,
        matrix: Sequence[Sequence[float]] | None = None,
    ):
        if (coords is None) == (matrix is None):
            raise ValidationError("provide exactly one of coords or matrix")
        if coords is not None:
            pts = np.array(coords, dtype=float)
            if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
                raise ValidationError("coords must be at least two (x, y) pairs")
            if not np.all(np.isfinite(pts)):
                raise ValidationError("coords must be finite")
            diff = pts[:, None, :] - pts[None, :, :]
            dist = np.sqrt(np.sum(diff * diff, axis=2))
        else:
            dist = np.array(matrix, dtype=float)
            if dist.ndim != 2 or dist.shape[0] != dist.shape[1] or dist.shape[0] < 2:
                raise ValidationError("matrix must be square with at least 2 vertices")
            if not np.all(np.isfinite(dist)):
                raise ValidationError("matrix must be finite")
            if np.any(dist < 0.0):
                raise ValidationError("costs must be nonnegative")
            if np.any(np.abs(dist - dist.T) > 1e-9):
                raise ValidationError("cost matrix must be symmetric")
            if np.any(np.diag(dist) != 0.0):
                raise ValidationError("cost matrix diagonal must be zero")
        num_vertices = dist.shape[0]
        if not isinstance(robots, int) or robots < 1:
            raise ValidationError(f"robots must be a positive integer, got {robots}")
        if robots > MAX_ROBOTS:
            raise InstanceTooLarge(f"robots {robots} exceeds cap {MAX_ROBOTS}")
        if not isinstance(depot, int) or not 0 <= depot < num_vertices:
            raise ValidationError(f"depot {depot} out of range")
        cities = [v for v in range(num_vertices) if v != depot]
        if len(cities) > MAX_NON_DEPOT:
            raise InstanceTooLarge(
                f"{len(cities)} non-depot vertices exceeds cap {MAX_NON_DEPOT}"
            )

        self.robots = robots
        self.depot = depot
        self.distances = dist
        self._cities = cities
        tour_cost, self._order_for = _held_karp(dist, depot, cities)

        self._assignments = list(_partitions(len(cities), robots))
        rows = np.zeros((len(self._assignments), 2))
        masks_per_assignment: list[tuple[int, ...]] = []
        for a_idx, rgs in enumerate(self._assignments):
            masks = [0] * robots
            for city_idx, block in enumerate(rgs):
                masks[block] |= 1 << city_idx
            masks_per_assignment.append(tuple(masks))
            costs = [tour_cost[m] for m in masks]
            rows[a_idx, 0] = sum(costs)
            rows[a_idx, 1] = max(costs) if costs else 0.0
        self._masks = masks_per_assignment
        rows.setflags(write=False)
        self._features = rows

    def solution_payload(self, index: int):
        tours = []
        for mask in self._masks[index]:
            if mask == 0:
                tours.append([self.depot, self.depot])
            else:
                tours.append([self.depot, *self._order_for(mask), self.depot])
        return {"tours": tours}

    def to_json(self) -> dict:
        return {
            "type": "mtsp",
            "matrix": self.distances.tolist(),
            "robots": self.robots,
            "depot": self.depot,
        }


def mtsp_solve(problem: MTSPProblem, w: WeightVector) -> Sample:
    """Exact argmin over all assignments and visiting orders."""
    return problem.solve(w)
