"""Exception hierarchy shared by all modules."""


class CarGeomError(Exception):
    """Base class for every error raised by cargeom."""


class ExprSyntaxError(CarGeomError, ValueError):
    """Malformed expression text. ``position`` is the 0-based character offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class UnknownVariableError(ExprSyntaxError):
    def __init__(self, name, position, chart):
        super().__init__(f"unknown variable {name!r} (chart is {tuple(chart)})", position)
        self.name = name


class MalformedPowerError(ExprSyntaxError):
    pass


class DomainError(CarGeomError, ArithmeticError):
    """A value lies outside the domain of an operation."""


class PoleError(DomainError):
    """Division by (near) zero, or a tan/sec pole, at the evaluation point."""


class FlowError(PoleError):
    def __init__(self, message, step):
        super().__init__(f"{message} (integration step {step})")
        self.step = step


class PreconditionError(CarGeomError, ValueError):
    """Input violates a documented precondition."""


class OffsetTooLargeError(PreconditionError):
    pass


class NotOnQuadricError(PreconditionError):
    pass


class NotPolynomialError(PreconditionError):
    pass


class NotSubalgebraError(PreconditionError):
    pass


class NotSymplecticError(PreconditionError):
    pass


class DegenerateError(PreconditionError):
    pass


class RankDeficientError(PreconditionError):
    pass


class ClosureError(CarGeomError):
    """Brackets of the generators are not constant combinations of them."""


class ExpansionError(CarGeomError):
    """A matrix could not be expanded over the sp(2,R) basis."""
