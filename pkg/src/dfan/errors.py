"""Exception types shared across the package."""


class BudgetExceeded(RuntimeError):
    """A bounded computation ran out of steps.

    ``partial`` carries whatever the computation had built so far (a
    truncated division, a partial basis, a reduction trace).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class InvariantViolation(AssertionError):
    """An internal consistency check failed; the result must not be trusted."""


class ParseError(ValueError):
    def __init__(self, message, line=None, col=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        super().__init__(where + message)
        self.msg = message
        self.line = line
        self.col = col
