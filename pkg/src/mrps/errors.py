"""Exception hierarchy for the mrps package.

Input/validation problems and solver-side failures are kept in separate
branches so the CLI can map them to distinct exit codes.
"""


class MrpsError(Exception):
    """Base class for all package errors."""


class InputError(MrpsError):
    """Malformed or invalid user input (weights, problem files, configs)."""


class AllZero(InputError):
    """Weight normalization requested for the all-zero vector."""


class NegativeEntry(InputError):
    """A raw weight entry is negative."""


class InvalidVector(InputError):
    """A vector violates a structural invariant (length, finiteness)."""


class SingularNeighborhood(InputError):
    """Neighborhood vertices are linearly dependent beyond tolerance."""


class OutsideHull(InputError):
    """Queried weight lies outside the neighborhood's convex hull."""


class DimensionMismatch(InputError):
    """Linear program pieces have inconsistent shapes."""


class BudgetTooSmall(InputError):
    """Sampling budget is below the problem dimension."""


class WitnessOutsideHull(InputError):
    """Split requested at a witness outside the neighborhood hull."""


class SchemaError(InputError):
    """Problem document does not match any known schema."""

    def __init__(self, message, field=None):
        self.field = field
        super().__init__(message if field is None else f"{field}: {message}")


class ValidationError(InputError):
    """Problem document is well-formed but semantically invalid."""


class InstanceTooLarge(InputError):
    """Problem exceeds the exact-enumeration size caps."""


class DimensionError(InputError):
    """Metric is only defined for a different number of objectives."""


class ZeroOptimalCost(InputError):
    """Relative regret is undefined because the optimal cost is ~0."""


class BadReference(InputError):
    """Hypervolume reference point does not bound the point set."""


class SolverFailure(MrpsError):
    """An underlying scalarized-problem solver failed."""


class NoFeasiblePath(SolverFailure):
    """No trajectory connects the requested poses for any candidate radius."""


class LPFailure(MrpsError):
    """Internal error: the regret LP returned a non-optimal status."""
