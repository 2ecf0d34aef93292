"""
Single-run simulation operation.
"""

import logging
from typing import Optional

from .. import engine
from ..models.run import RunConfig
from ..utils.config import config

logger = logging.getLogger(__name__)


def output_stem(cfg: RunConfig) -> str:
    """Metrics path stem: the configured one, else a name under the output directory."""
    if cfg.output:
        return cfg.output
    return config.output_path("runs", f"{cfg.policy}-c{cfg.capacity}-s{cfg.seed}")


def simulate(cfg: RunConfig, progress: Optional[engine.ProgressCallback] = None) -> engine.Metrics:
    """
    Run one simulation and write its metrics.

    This is a wrapper function that delegates to engine.run and engine.write_metrics.

    Parameters:
        cfg: Validated run configuration.
        progress: Optional per-epoch callback.

    Returns:
        The run's Metrics.
    """
    logger.info(f"Simulating policy {cfg.policy} with capacity {cfg.capacity}")
    metrics = engine.run(cfg, progress=progress)
    engine.write_metrics(metrics, output_stem(cfg))
    return metrics
