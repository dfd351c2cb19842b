"""Exception hierarchy shared by all modules."""


class QxentError(Exception):
    """Base class for every error raised by qxent."""


class DimensionError(QxentError, ValueError):
    pass


class HermiticityError(QxentError, ValueError):
    pass


class UnitarityError(QxentError, ValueError):
    pass


class ParameterError(QxentError, ValueError):
    pass


class NumericalError(QxentError, ArithmeticError):
    """A computation produced a non-finite value."""


class InvariantViolation(QxentError, RuntimeError):
    """An identity that holds by construction was found broken."""


class SpecialCaseViolation(QxentError, ValueError):
    """Preconditions of a special-case identity are not met."""
