"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands do not live in the same space."""


class GroupSpecError(ValueError):
    """A group description string or element could not be parsed."""


class ConditioningError(ValueError):
    """A column set is too close to singular to be used as a basis."""


class BasisError(ValueError):
    """A basis failed one of its invariants.

    ``invariant`` names the check that failed, e.g. ``"unit_norm"``.
    """

    def __init__(self, invariant, message):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class ConvergenceError(RuntimeError):
    """An iterative linear-algebra routine did not converge."""


class NotConvergedError(RuntimeError):
    """The l1 solver hit its iteration cap before reaching tolerance."""

    def __init__(self, message, residuals):
        super().__init__(message)
        self.residuals = residuals


class InfeasibleError(ValueError):
    """The measurements are not in the range of the measurement matrix."""


class InvariantError(AssertionError):
    """A mathematical invariant that must hold was violated."""
