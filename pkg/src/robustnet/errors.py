"""Exception types shared across the toolkit."""


class RobustnetError(Exception):
    """Base class for all toolkit errors."""


class EdgeListParseError(RobustnetError):
    """Raised when an edge-list stream cannot be parsed.

    ``line`` is the 1-based line number of the offending line, or None when
    the problem is not tied to a single line (e.g. empty input).
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ParameterError(RobustnetError, ValueError):
    """A parameter or precondition was violated (bad value, missing node, ...)."""


class ContractError(RobustnetError):
    """An internal numerical contract was violated (e.g. asymmetric matrix)."""


class ConvergenceError(RobustnetError):
    """Iterative eigensolver failed to converge within its iteration cap."""

    def __init__(self, message: str, best_residual: float | None = None):
        self.best_residual = best_residual
        if best_residual is not None:
            message = f"{message} (best residual {best_residual:.3e})"
        super().__init__(message)


class DomainError(RobustnetError):
    """A measure is undefined on the supplied graph (too small, disconnected, ...)."""


class DisconnectedGraphError(DomainError):
    """Raised when a measure requires a connected graph (infinite resistance)."""


class FeasibilityError(RobustnetError):
    """A randomized graph edit could not find a feasible action within its retry budget."""
