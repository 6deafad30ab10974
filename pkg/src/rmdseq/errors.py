"""Exception taxonomy shared by the whole package."""


class RmdError(Exception):
    """Base class for all errors raised by rmdseq."""


class ConfigurationError(RmdError, ValueError):
    """A code family or parameter combination that cannot be supported."""


class CapacityError(RmdError, OverflowError):
    """A value or stream exceeds a hard size limit."""


class InvalidCodewordError(RmdError, ValueError):
    """A bit pattern that is not a codeword of the given family."""


class InsufficientContextError(RmdError, ValueError):
    """A boundary decision was requested with too few lookahead bits."""


class CorruptionError(RmdError, ValueError):
    """A stream, index or container that violates its own format."""


class PhaseError(CorruptionError):
    """A start phase pointing past the number of starts in a byte."""


class BoundsError(RmdError, IndexError):
    """An element or byte position outside the addressable range."""
