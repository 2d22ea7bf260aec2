"""Exception hierarchy shared by every module."""


class SkeinError(Exception):
    """Base class for all errors raised by skeinym."""


class DomainError(SkeinError, ValueError):
    pass


class AdmissibilityError(SkeinError, ValueError):
    pass


class DegenerateError(SkeinError, ZeroDivisionError):
    pass


class InternalError(SkeinError, AssertionError):
    pass


class SpineError(SkeinError, ValueError):
    pass


class GenusError(SkeinError, ValueError):
    pass


class DivergenceError(SkeinError, ArithmeticError):
    pass


class RegimeError(SkeinError, ValueError):
    pass
