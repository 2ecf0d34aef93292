"""
Policy comparison operation.
"""

import logging
from typing import List, Optional

from .. import engine
from ..models.run import CompareConfig
from ..utils.config import config

logger = logging.getLogger(__name__)


def compare_policies(cfg: CompareConfig, workers: Optional[int] = None) -> List[engine.ComparisonRow]:
    """
    Compare policies and capacities on one trace and write the table.

    This is a wrapper function that delegates to engine.compare.

    Parameters:
        cfg: Validated comparison configuration.
        workers: Parallel processes; defaults to POPCACHE_WORKERS.

    Returns:
        One ComparisonRow per (capacity, policy).
    """
    workers = workers if workers is not None else config.workers
    runs = cfg.run_configs()
    logger.info(f"Comparing policies {', '.join(cfg.policies)} at capacities {cfg.capacities}")
    rows = engine.compare(runs, workers=workers)
    engine.write_comparison(rows, cfg.output or config.output_path("comparisons", f"compare-s{cfg.seed}"))
    return rows
