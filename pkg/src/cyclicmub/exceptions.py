class ShapeError(ValueError):
    """Operand dimensions do not conform."""


class SingularMatrixError(ArithmeticError):
    """Inverse requested for a singular GF(2) matrix."""


class ValidationError(ValueError):
    """Input violates a structural precondition (e.g. B not symmetric)."""


class BudgetError(RuntimeError):
    """Requested size exceeds the enumeration/dense-construction cap."""


class ConsistencyError(AssertionError):
    """Two independent routes to the same fact disagreed."""


class ConjectureError(ArithmeticError):
    """An unproven closed form (global phase, spectrum) failed for this input."""
