"""Shortest bounded-curvature trajectories and their comfort features.

For a fixed turn radius the shortest path between two poses is one of
six three-segment words (LSL, RSR, LSR, RSL, RLR, LRL).  The feasible
set of the scalarized planning problem is declared to be the finite set
of candidate radii, each contributing its shortest path, which keeps the
solver exact by construction.

Features are measured on an arc-length-uniform sampling of the path
traversed at constant speed: trajectory length is analytic, jerk-based
features come from third finite differences of the sampled positions,
and region avoidance is the sampled path length inside a rectangle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core import FeatureVector, Sample, WeightVector
from ..errors import NoFeasiblePath, ValidationError
from .base import ExplicitFeatureSolver

OBJECTIVES = ("length", "is_jerk", "max_jerk", "region_avoidance")

DEFAULT_RADII = tuple(np.logspace(math.log10(0.5), math.log10(20.0), 32))
DEFAULT_SPEED = 1.0
DEFAULT_STEP = 0.05

_TWO_PI = 2.0 * math.pi


def _mod2pi(angle: float) -> float:
    return angle % _TWO_PI


def _lsl(alpha, beta, d):
    p_sq = 2.0 + d * d - 2.0 * math.cos(alpha - beta) + 2.0 * d * (math.sin(alpha) - math.sin(beta))
    if p_sq < 0.0:
        return None
    tmp = math.atan2(math.cos(beta) - math.cos(alpha), d + math.sin(alpha) - math.sin(beta))
    return _mod2pi(tmp - alpha), math.sqrt(p_sq), _mod2pi(beta - tmp)


def _rsr(alpha, beta, d):
    p_sq = 2.0 + d * d - 2.0 * math.cos(alpha - beta) + 2.0 * d * (math.sin(beta) - math.sin(alpha))
    if p_sq < 0.0:
        return None
    tmp = math.atan2(math.cos(alpha) - math.cos(beta), d - math.sin(alpha) + math.sin(beta))
    return _mod2pi(alpha - tmp), math.sqrt(p_sq), _mod2pi(tmp - beta)


def _lsr(alpha, beta, d):
    p_sq = -2.0 + d * d + 2.0 * math.cos(alpha - beta) + 2.0 * d * (math.sin(alpha) + math.sin(beta))
    if p_sq < 0.0:
        return None
    p = math.sqrt(p_sq)
    tmp = math.atan2(-math.cos(alpha) - math.cos(beta), d + math.sin(alpha) + math.sin(beta)) - math.atan2(-2.0, p)
    return _mod2pi(tmp - alpha), p, _mod2pi(tmp - beta)


def _rsl(alpha, beta, d):
    p_sq = -2.0 + d * d + 2.0 * math.cos(alpha - beta) - 2.0 * d * (math.sin(alpha) + math.sin(beta))
    if p_sq < 0.0:
        return None
    p = math.sqrt(p_sq)
    tmp = math.atan2(math.cos(alpha) + math.cos(beta), d - math.sin(alpha) - math.sin(beta)) - math.atan2(2.0, p)
    return _mod2pi(alpha - tmp), p, _mod2pi(beta - tmp)


def _rlr(alpha, beta, d):
    tmp = (6.0 - d * d + 2.0 * math.cos(alpha - beta) + 2.0 * d * (math.sin(alpha) - math.sin(beta))) / 8.0
    if abs(tmp) > 1.0:
        return None
    p = _mod2pi(_TWO_PI - math.acos(tmp))
    t = _mod2pi(alpha - math.atan2(math.cos(alpha) - math.cos(beta), d - math.sin(alpha) + math.sin(beta)) + p / 2.0)
    return t, p, _mod2pi(alpha - beta - t + p)


def _lrl(alpha, beta, d):
    tmp = (6.0 - d * d + 2.0 * math.cos(alpha - beta) + 2.0 * d * (math.sin(beta) - math.sin(alpha))) / 8.0
    if abs(tmp) > 1.0:
        return None
    p = _mod2pi(_TWO_PI - math.acos(tmp))
    t = _mod2pi(-alpha + math.atan2(-math.cos(alpha) + math.cos(beta), d + math.sin(alpha) - math.sin(beta)) + p / 2.0)
    return t, p, _mod2pi(beta - alpha - t + p)


_PLANNERS = (("LSL", _lsl), ("RSR", _rsr), ("LSR", _lsr), ("RSL", _rsl), ("RLR", _rlr), ("LRL", _lrl))


@dataclass(frozen=True)
class DubinsPath:
    """One fixed-radius path: word, normalized segment lengths, start pose."""

    radius: float
    path_class: str
    params: tuple[float, float, float]
    start: tuple[float, float, float]

    @property
    def length(self) -> float:
        return sum(self.params) * self.radius

    def segments(self) -> list[tuple[str, float]]:
        """(segment type, metric length) triples."""
        return [
            (seg, par * self.radius)
            for seg, par in zip(self.path_class, self.params)
        ]

    def sample(self, step: float) -> tuple[np.ndarray, float]:
        """Positions at uniform arc-length spacing <= step.

        Returns (points (M, 2), actual spacing).  A zero-length path
        yields its start point and spacing 0.
        """
        total = self.length
        if total <= 0.0:
            return np.array([[self.start[0], self.start[1]]]), 0.0
        count = max(1, math.ceil(total / step))
        ds = total / count
        s = np.linspace(0.0, total, count + 1)
        xs = np.empty_like(s)
        ys = np.empty_like(s)
        x, y, theta = self.start
        offset = 0.0
        r = self.radius
        for seg, seg_len in self.segments():
            if seg_len <= 0.0:
                continue
            hi = offset + seg_len
            mask = (s >= offset) & (s <= hi) if hi < total else (s >= offset)
            local = s[mask] - offset
            if seg == "S":
                xs[mask] = x + local * math.cos(theta)
                ys[mask] = y + local * math.sin(theta)
                x += seg_len * math.cos(theta)
                y += seg_len * math.sin(theta)
            elif seg == "L":
                phi = local / r
                xs[mask] = x + r * (np.sin(theta + phi) - math.sin(theta))
                ys[mask] = y - r * (np.cos(theta + phi) - math.cos(theta))
                dphi = seg_len / r
                x += r * (math.sin(theta + dphi) - math.sin(theta))
                y -= r * (math.cos(theta + dphi) - math.cos(theta))
                theta += dphi
            else:
                phi = local / r
                xs[mask] = x - r * (np.sin(theta - phi) - math.sin(theta))
                ys[mask] = y + r * (np.cos(theta - phi) - math.cos(theta))
                dphi = seg_len / r
                x -= r * (math.sin(theta - dphi) - math.sin(theta))
                y += r * (math.cos(theta - dphi) - math.cos(theta))
                theta -= dphi
            offset = hi
        return np.column_stack([xs, ys]), ds

    def end_pose(self) -> tuple[float, float, float]:
        x, y, theta = self.start
        r = self.radius
        for seg, seg_len in self.segments():
            if seg == "S":
                x += seg_len * math.cos(theta)
                y += seg_len * math.sin(theta)
            elif seg == "L":
                dphi = seg_len / r
                x += r * (math.sin(theta + dphi) - math.sin(theta))
                y -= r * (math.cos(theta + dphi) - math.cos(theta))
                theta += dphi
            else:
                dphi = seg_len / r
                x -= r * (math.sin(theta - dphi) - math.sin(theta))
                y += r * (math.cos(theta - dphi) - math.cos(theta))
                theta -= dphi
        return x, y, theta


def shortest_path(start, goal, radius: float) -> DubinsPath | None:
    """Shortest of the six words for one radius; None if all infeasible."""
    dx = goal[0] - start[0]
    dy = goal[1] - start[1]
    dist = math.hypot(dx, dy)
    d = dist / radius
    theta = math.atan2(dy, dx) if dist > 0.0 else 0.0
    alpha = _mod2pi(start[2] - theta)
    beta = _mod2pi(goal[2] - theta)
    best: DubinsPath | None = None
    for name, planner in _PLANNERS:
        res = planner(alpha, beta, d)
        if res is None:
            continue
        candidate = DubinsPath(radius, name, tuple(res), tuple(start))
        if best is None or candidate.length < best.length:
            best = candidate
    return best


@dataclass(frozen=True)
class Rect:
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValidationError("rectangle must have positive extent")

    def to_json(self) -> dict:
        return {"xmin": self.xmin, "xmax": self.xmax, "ymin": self.ymin, "ymax": self.ymax}


class DubinsProblem(ExplicitFeatureSolver):
    """Pose-to-pose planning over a finite candidate radius set."""

    def __init__(
        self,
        start_pose: Sequence[float],
        goal_pose: Sequence[float],
        objectives: Sequence[str],
        candidate_radii: Sequence[float] | None = None,
        speed: float = DEFAULT_SPEED,
        discretization_step: float = DEFAULT_STEP,
        avoid_region: Rect | None = None,
    ):
        self.start_pose = tuple(float(v) for v in start_pose)
        self.goal_pose = tuple(float(v) for v in goal_pose)
        if len(self.start_pose) != 3 or len(self.goal_pose) != 3:
            raise ValidationError("poses are (x, y, heading) triples")
        radii = tuple(float(r) for r in (candidate_radii if candidate_radii is not None else DEFAULT_RADII))
        if not radii or any(r <= 0.0 for r in radii):
            raise ValidationError("candidate radii must be positive")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValidationError("candidate radii must be strictly increasing")
        self.candidate_radii = radii
        objectives = tuple(objectives)
        if not (2 <= len(objectives) <= 4):
            raise ValidationError("need between 2 and 4 objectives")
        if len(set(objectives)) != len(objectives):
            raise ValidationError("objectives must be distinct")
        for name in objectives:
            if name not in OBJECTIVES:
                raise ValidationError(f"unknown objective {name!r}")
        if ("region_avoidance" in objectives) != (avoid_region is not None):
            raise ValidationError("avoid_region is required iff region_avoidance is an objective")
        self.objectives = objectives
        if speed <= 0.0 or discretization_step <= 0.0:
            raise ValidationError("speed and step must be positive")
        self.speed = float(speed)
        self.discretization_step = float(discretization_step)
        self.avoid_region = avoid_region

        self._paths: list[DubinsPath] = []
        rows = []
        for r in radii:
            path = shortest_path(self.start_pose, self.goal_pose, r)
            if path is None:
                continue
            self._paths.append(path)
            rows.append(dubins_features(path, self).values)
        if not rows:
            raise NoFeasiblePath("no trajectory found for any candidate radius")
        features = np.array(rows)
        features.setflags(write=False)
        self._features = features

    def solution_payload(self, index: int):
        path = self._paths[index]
        return {
            "radius": path.radius,
            "path_class": path.path_class,
            "segments": list(path.params),
        }

    def path_for(self, index: int) -> DubinsPath:
        return self._paths[index]

    def to_json(self) -> dict:
        doc = {
            "type": "dubins",
            "start": list(self.start_pose),
            "goal": list(self.goal_pose),
            "radii": list(self.candidate_radii),
            "speed": self.speed,
            "step": self.discretization_step,
            "objectives": list(self.objectives),
        }
        if self.avoid_region is not None:
            doc["avoid_region"] = self.avoid_region.to_json()
        return doc


def dubins_features(path: DubinsPath, problem: DubinsProblem) -> FeatureVector:
    """Feature vector of one path, ordered per problem.objectives.

    Jerk features use the third forward difference of sampled positions
    divided by the cubed time step at constant speed; the integral of
    squared jerk sums the squared norms times the time step.
    """
    points, ds = path.sample(problem.discretization_step)
    dt = ds / problem.speed
    if len(points) >= 4 and dt > 0.0:
        third = points[3:] - 3.0 * points[2:-1] + 3.0 * points[1:-2] - points[:-3]
        norms = np.linalg.norm(third, axis=1) / dt**3
        is_jerk = float(np.sum(norms**2) * dt)
        max_jerk = float(np.max(norms))
    else:
        is_jerk = 0.0
        max_jerk = 0.0
    values = []
    for name in problem.objectives:
        if name == "length":
            values.append(path.length)
        elif name == "is_jerk":
            values.append(is_jerk)
        elif name == "max_jerk":
            values.append(max_jerk)
        else:
            rect = problem.avoid_region
            mid = (points[1:] + points[:-1]) / 2.0
            inside = (
                (mid[:, 0] >= rect.xmin) & (mid[:, 0] <= rect.xmax)
                & (mid[:, 1] >= rect.ymin) & (mid[:, 1] <= rect.ymax)
            )
            values.append(float(np.count_nonzero(inside)) * ds)
    return FeatureVector(values)


def dubins_solve(problem: DubinsProblem, w: WeightVector) -> Sample:
    """Candidate radius minimizing the scalarized features (ties: smallest)."""
    return problem.solve(w)
