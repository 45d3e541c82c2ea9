"""Exception and warning types shared across the package."""


class OpaError(Exception):
    """Base class for package-specific errors."""


class InvalidArgumentError(OpaError, ValueError):
    """An argument violates a documented precondition."""


class ParseError(InvalidArgumentError):
    """Syntax error in a function expression; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnsupportedInputError(OpaError):
    """Input is structurally valid but outside the supported regime."""


class IllConditionedError(OpaError):
    """A linear system was too close to singular to solve reliably."""


class SingularSystemError(OpaError):
    """A structured linear system is exactly singular."""


class DegenerateSystemError(OpaError):
    """The two-by-two update system degenerated during iteration."""


class InconsistencyError(OpaError):
    """Numerical results violate an exact mathematical relation."""


class QuadratureAccuracyWarning(UserWarning):
    """The doubled-grid integral check disagreed beyond the aliasing tolerance."""


class ConvergenceWarning(UserWarning):
    """An iterative routine stopped short of its convergence target."""
