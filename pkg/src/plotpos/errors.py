"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SolverError(RuntimeError):
    """An iterative solver stopped without meeting its convergence test.

    ``bracket`` holds the last interval known to contain the root, when the
    solver maintains one.
    """

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket
