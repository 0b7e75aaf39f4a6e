"""Exception types shared across the package."""

from __future__ import annotations


class ListColorError(Exception):
    """Base class for all package errors."""


class GraphFormatError(ListColorError, ValueError):
    """An input document is malformed or describes an invalid instance."""


class BudgetExceeded(ListColorError, RuntimeError):
    """An enumeration or search would exceed its configured budget.

    Attributes:
        required: Size of the work that was requested (may be approximate).
        budget: The budget that was in force.
    """

    def __init__(self, what: str, required: int | float, budget: int) -> None:
        super().__init__(f"{what}: needs {required} items but the budget is {budget}")
        self.required = required
        self.budget = budget


class ParameterError(ListColorError, ValueError):
    """A parameter set violates a structural requirement."""


class SolvabilityError(ListColorError, ValueError):
    """The zero-round solvability condition l > m * |F| * d does not hold."""


class InvariantError(ListColorError, RuntimeError):
    """An internal guarantee was violated; this indicates a bug or a bad input."""


class SimulationError(ListColorError, RuntimeError):
    """A node program broke the rules of the round engine."""
