from __future__ import annotations


class LoxodromicError(Exception):
    """Base class for every error raised by the package."""


class ZeroInput(LoxodromicError, ValueError):
    pass


class ZeroPolynomial(LoxodromicError, ValueError):
    pass


class NotLoxodromic(LoxodromicError, ValueError):
    pass


class ConeExit(LoxodromicError, ValueError):
    pass


class CharacteristicMismatch(LoxodromicError, ValueError):
    pass


class IncompatibleDegrees(LoxodromicError, ValueError):
    pass


class VanishingLeadingCoefficient(LoxodromicError, ValueError):
    pass


class PeriodicStartPoint(LoxodromicError, ValueError):
    """The index projection of an intersection is undefined for periodic starts."""


class InvariantViolation(LoxodromicError, ValueError):
    pass


class SpecParseError(LoxodromicError, ValueError):
    pass


class OverflowGuard(LoxodromicError, ArithmeticError):
    """A coordinate outgrew the configured digit or degree budget.

    ``partial`` carries whatever was computed before the limit was hit.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
