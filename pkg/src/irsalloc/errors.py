class IrsAllocError(Exception):
    """Base class for all library errors."""


class ConfigError(IrsAllocError):
    """Invalid or incomplete scenario configuration."""


class DistanceTooSmall(IrsAllocError):
    """A link distance violates the minimum (reference/far-field) distance."""


class DimensionMismatch(IrsAllocError):
    """Channel/reflection dimensions are inconsistent."""


class AmplitudeBelowOne(IrsAllocError):
    """Optimal amplification factor fell below 1 (infeasible operating point)."""


class ConditionUndefined(IrsAllocError):
    """The large-distance regime condition is undefined for these parameters."""


class InfeasibleBudget(IrsAllocError):
    """No feasible element allocation exists under the given budget."""


class SearchSpaceTooLarge(IrsAllocError):
    """Exhaustive enumeration would exceed the candidate-count guard."""


class NoFeasiblePlacement(IrsAllocError):
    """Every grid placement violates the minimum-distance constraint."""
