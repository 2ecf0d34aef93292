"""
Error handling and custom exceptions for the cache simulator.
"""


class PopCacheError(Exception):
    """Base exception for simulator errors."""

    pass


class InvalidArgumentError(PopCacheError, ValueError):
    """Raised when a scalar argument is outside its valid range."""

    pass


class ConfigError(PopCacheError):
    """Raised when an experiment configuration fails validation."""

    pass


class TraceError(PopCacheError):
    """Base class for trace ingestion failures."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class TraceParseError(TraceError):
    """Raised when a trace line cannot be parsed."""

    pass


class TraceOrderError(TraceError):
    """Raised when trace timestamps go backwards."""

    pass


class OutOfOrderError(PopCacheError):
    """Raised when a request belongs to an epoch that was already closed."""

    pass


class EpochNotClosedError(PopCacheError):
    """Raised when a request belongs to a future epoch that was not rolled over yet."""

    pass


class ShapeError(PopCacheError, ValueError):
    """Raised on dimension mismatches between arrays or networks."""

    pass


class StaleCacheError(PopCacheError):
    """Raised when backward is called with activations from other parameters."""

    pass


class UndefinedResultError(PopCacheError):
    """Raised when a statistic is requested over no data."""

    pass


def exit_code_for(error: Exception) -> int:
    """
    Map an exception to the process exit code used by the command line.

    Args:
        error: The exception that aborted the command

    Returns:
        1 for configuration, trace and simulation errors, 3 for anything unexpected
    """
    if isinstance(error, PopCacheError):
        return 1
    if isinstance(error, (OSError, ValueError)):
        return 1
    return 3
