"""Exception hierarchy shared by every module of the package."""


class NullHelixError(Exception):
    """Base class for all errors raised by nullhelix."""


class PreconditionError(NullHelixError, ValueError):
    pass


class DegenerateSpan(NullHelixError):
    pass


class ExprSyntaxError(NullHelixError, ValueError):
    """Malformed expression text. ``position`` is a 0-based character offset."""

    def __init__(self, message, position=None, text=None):
        self.message = message
        self.position = position
        self.text = text
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class UnknownIdentifier(ExprSyntaxError):
    pass


class DomainError(NullHelixError, ArithmeticError):
    pass


class NotNull(NullHelixError):
    pass


class NotPseudoArc(NullHelixError):
    pass


class DegeneratePseudoArc(NullHelixError):
    pass


class BadInitialFrame(NullHelixError):
    pass


class CurvatureDegenerate(NullHelixError):
    pass


class CurvatureNotZero(NullHelixError):
    pass


class HessianNotZero(NullHelixError):
    pass


class SchemaError(NullHelixError, ValueError):
    """Invalid job file. ``location`` names the offending field."""

    def __init__(self, message, location=None):
        self.location = location
        prefix = f"{location}: " if location else ""
        super().__init__(prefix + message)
