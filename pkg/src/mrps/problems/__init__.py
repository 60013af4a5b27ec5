"""Concrete scalarized-problem solvers and the JSON problem loader."""

from __future__ import annotations

from typing import Any, Mapping

from ..errors import SchemaError
from .base import ExplicitFeatureSolver, SolverInterface
from .dubins import DubinsProblem, DubinsPath, Rect, dubins_features, dubins_solve, shortest_path
from .mtsp import MTSPProblem, mtsp_solve
from .tabular import TabularProblem, tabular_solve

__all__ = [
    "SolverInterface",
    "ExplicitFeatureSolver",
    "TabularProblem",
    "DubinsProblem",
    "DubinsPath",
    "MTSPProblem",
    "Rect",
    "tabular_solve",
    "dubins_solve",
    "dubins_features",
    "mtsp_solve",
    "shortest_path",
    "load_problem",
]

_SCHEMAS = {
    "tabular": {"required": {"features"}, "optional": set()},
    "dubins": {
        "required": {"start", "goal", "objectives"},
        "optional": {"radii", "speed", "step", "avoid_region"},
    },
    "mtsp": {"required": {"robots"}, "optional": {"coords", "matrix", "depot"}},
}


def _check_fields(doc: Mapping[str, Any], kind: str):
    schema = _SCHEMAS[kind]
    fields = set(doc) - {"type"}
    missing = schema["required"] - fields
    if missing:
        raise SchemaError(f"missing required field(s) {sorted(missing)}", field=kind)
    unknown = fields - schema["required"] - schema["optional"]
    if unknown:
        raise SchemaError(f"unknown field(s) {sorted(unknown)}", field=kind)


def load_problem(doc: Mapping[str, Any]) -> SolverInterface:
    """Build a solver from a problem document; validates all invariants.

    Schemas (exact field names):
      tabular  {type, features}
      dubins   {type, start, goal, objectives, radii?, speed?, step?, avoid_region?}
      mtsp     {type, robots, coords | matrix, depot?}
    Angles are radians.
    """
    if not isinstance(doc, Mapping):
        raise SchemaError("problem document must be a JSON object")
    kind = doc.get("type")
    if kind not in _SCHEMAS:
        raise SchemaError(f"unknown problem type {kind!r}", field="type")
    _check_fields(doc, kind)
    if kind == "tabular":
        return TabularProblem(doc["features"])
    if kind == "dubins":
        region = doc.get("avoid_region")
        if region is not None:
            extra = set(region) - {"xmin", "xmax", "ymin", "ymax"}
            if extra or len(region) != 4:
                raise SchemaError("avoid_region needs exactly xmin/xmax/ymin/ymax",
                                  field="avoid_region")
            region = Rect(**{k: float(v) for k, v in region.items()})
        return DubinsProblem(
            start_pose=doc["start"],
            goal_pose=doc["goal"],
            objectives=doc["objectives"],
            candidate_radii=doc.get("radii"),
            speed=float(doc.get("speed", 1.0)),
            discretization_step=float(doc.get("step", 0.05)),
            avoid_region=region,
        )
    return MTSPProblem(
        robots=doc["robots"],
        depot=doc.get("depot", 0),
        coords=doc.get("coords"),
        matrix=doc.get("matrix"),
    )
