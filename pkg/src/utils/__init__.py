"""
Utility modules for the cache simulator.
"""

from .config import SimulatorConfig, config
from .errors import (
    PopCacheError,
    InvalidArgumentError,
    ConfigError,
    TraceError,
    TraceParseError,
    TraceOrderError,
    OutOfOrderError,
    EpochNotClosedError,
    ShapeError,
    StaleCacheError,
    UndefinedResultError,
    exit_code_for,
)
from .logger import setup_logging, get_logger
from .seeding import make_rng
from .files import atomic_write, write_csv, write_json

__all__ = [
    "SimulatorConfig",
    "config",
    "PopCacheError",
    "InvalidArgumentError",
    "ConfigError",
    "TraceError",
    "TraceParseError",
    "TraceOrderError",
    "OutOfOrderError",
    "EpochNotClosedError",
    "ShapeError",
    "StaleCacheError",
    "UndefinedResultError",
    "exit_code_for",
    "setup_logging",
    "get_logger",
    "make_rng",
    "atomic_write",
    "write_csv",
    "write_json",
]
