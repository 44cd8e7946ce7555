class NumericalError(Exception):
    """Base class of every error raised by nonlocal_momentum.

    ``exit_code`` is what the command line returns when the error reaches
    it: 2 for rejected input, 3 for a numerical failure.
    """

    exit_code = 3


class ValidationError(NumericalError):
    """Raised when an argument is invalid."""

    exit_code = 2


class DomainMismatchError(NumericalError):
    """Raised when functions living on the axis and on [0, 1] are mixed."""

    exit_code = 2


class OffAxisRequiredError(NumericalError):
    """Raised when a resolvent quantity is requested at a real z."""

    exit_code = 2

    def __init__(self, z):
        super().__init__(f"Im z must be nonzero, got z = {z}")
        self.z = z


class VariantUnavailableError(NumericalError):
    exit_code = 2


class EvaluationError(NumericalError):
    """Raised when an integrand returns a non-finite value."""

    def __init__(self, node, value=None):
        super().__init__(f"non-finite integrand {value} at node {node}")
        self.node = node
        self.value = value


class BudgetExceededError(NumericalError):
    """Raised when an iteration did not converge within its budget."""

    def __init__(self, best, message="iteration budget exceeded"):
        super().__init__(f"{message}, best iterate {best}")
        self.best = best


class SingularSystemError(NumericalError):
    def __init__(self, det):
        super().__init__(f"system is numerically singular, det = {det}")
        self.det = det


class PoleError(NumericalError):
    """Raised when z sits on a pole of the interval Green's function."""

    def __init__(self, nearest, z=None):
        super().__init__(f"z = {z} is within tolerance of the pole {nearest}")
        self.nearest = nearest
        self.z = z


class TruncationError(NumericalError):
    def __init__(self, tail, length):
        super().__init__(
            f"potential mass {tail:.3e} lies outside the box [-{length}, {length}]"
        )
        self.tail = tail
        self.length = length


class OracleError(NumericalError):
    """Raised when the discrete eigen-solver fails."""
