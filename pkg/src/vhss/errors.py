"""Exception hierarchy shared by every module."""


class VhssError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(VhssError, ValueError):
    """Ring elements with different N or modulus were combined."""


class ParameterError(VhssError, ValueError):
    """A parameter set or argument violates a structural requirement."""


class DomainError(VhssError, ValueError):
    """A value does not lie in the ring it was declared to live in."""


class ValidationError(VhssError, ValueError):
    """A program failed static validation."""


class DecodeError(VhssError, ValueError):
    """Bytes do not form a well-formed object encoding."""
