"""Exception types shared across the package."""

from __future__ import annotations


class AbelcertError(Exception):
    """Base class for all library errors."""


class ZeroInverse(AbelcertError, ZeroDivisionError):
    pass


class NoSuchRoot(AbelcertError, ValueError):
    pass


class RingMismatch(AbelcertError, ValueError):
    pass


class ArityMismatch(AbelcertError, ValueError):
    pass


class NotUnivariate(AbelcertError, ValueError):
    pass


class PointNotOnVariety(AbelcertError, ValueError):
    pass


class ParseError(AbelcertError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GroebnerTimeout(AbelcertError, TimeoutError):
    pass


class OddLevel(AbelcertError, ValueError):
    pass


class NotInNormalizerClass(AbelcertError, ValueError):
    pass


class NotSkew(AbelcertError, ValueError):
    pass


class OddSize(AbelcertError, ValueError):
    pass


class ParameterRejected(AbelcertError, ValueError):
    pass


class PreconditionError(AbelcertError, ValueError):
    pass
