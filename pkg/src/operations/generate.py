"""
Trace generation operation.
"""

import logging

from ..models.synthetic import SyntheticConfig
from ..trace import gen_synthetic, write_trace_file

logger = logging.getLogger(__name__)


def generate_trace(cfg: SyntheticConfig, path: str) -> int:
    """
    Write a synthetic trace to a file.

    This is a wrapper function that delegates to the trace generator and writer.

    Parameters:
        cfg: Validated synthetic workload configuration.
        path: Destination CSV path.

    Returns:
        The number of events written.
    """
    logger.info(f"Generating trace to {path} (seed {cfg.seed})")
    return write_trace_file(gen_synthetic(cfg), path)
