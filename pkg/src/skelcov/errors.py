"""Exception hierarchy shared by every skelcov module."""


class SkelcovError(Exception):
    """Base class for all library errors."""


class InvalidInput(SkelcovError, ValueError):
    """An object or argument violates an operation's precondition."""


class ResourceBoundExceeded(SkelcovError):
    """A search or enumeration would exceed its configured bound."""
