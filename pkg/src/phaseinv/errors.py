"""Exception hierarchy shared by all pipeline stages."""


class InversionError(Exception):
    """Base class. ``stage`` names the pipeline stage that raised, when known."""

    def __init__(self, message, stage=None, diagnostics=None):
        super().__init__(message)
        self.stage = stage
        self.diagnostics = diagnostics or {}

    def __str__(self):
        msg = super().__str__()
        if self.stage:
            return f"[{self.stage}] {msg}"
        return msg


class DomainError(InversionError, ValueError):
    """An argument lies outside the supported domain."""


class ParseError(InversionError, ValueError):
    def __init__(self, message, line=None, path=None):
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if where:
            message = f"{':'.join(where)}: {message}"
        super().__init__(message, stage="parse")
        self.line = line


class NumericalError(InversionError, ArithmeticError):
    """A computation failed or produced an unusable result."""


class PoleError(NumericalError):
    """Phase shift places the m-function at a pole (exterior node at r=a)."""


class SingularMomentError(NumericalError):
    pass


class DegenerateNodesError(NumericalError):
    """Cauchy nodes coincide or a row/column node pair sums to zero."""


class IndeterminateLambdaError(NumericalError):
    """The coefficient sum does not depend on the trial bound-state parameter."""


class ConvergenceError(NumericalError):
    pass


class NonUniqueSolutionError(NumericalError):
    """The discretized Gel'fand-Levitan operator is numerically singular."""


class SearchFailedError(NumericalError):
    pass
