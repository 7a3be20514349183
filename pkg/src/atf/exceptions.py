"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(ArithmeticError):
    """An iterative numerical method failed to reach its tolerance."""


class FormulaDiscrepancy(ArithmeticError):
    """A closed-form expression could not be evaluated where the oracle can.

    Both values are attached so callers can report them.
    """

    def __init__(self, message, closed_form=None, oracle=None, level=None):
        super().__init__(message)
        self.closed_form = closed_form
        self.oracle = oracle
        self.level = level
