"""
Predictor evaluation operation.
"""

import logging
from typing import List, Optional

from .. import engine
from ..models.predictor import PredictorConfig
from ..models.run import TraceSource
from ..utils.files import write_json

logger = logging.getLogger(__name__)


def evaluate_predictors(
    source: TraceSource,
    cfg: PredictorConfig,
    seed: int = 0,
    output: Optional[str] = None,
) -> List[engine.PredictorEvaluation]:
    """
    Score the FNN, LR and AVG predictors on a trace.

    This is a wrapper function that delegates to engine.eval_predictors.

    Parameters:
        source: Trace source.
        cfg: Predictor configuration.
        seed: Master seed.
        output: Optional JSON path for the results.

    Returns:
        One PredictorEvaluation per predictor.

    Raises:
        ConfigError: If a synthetic workload's epoch differs from cfg.T.
        UndefinedResultError: If the trace spans fewer than two epochs.
    """
    source.check_epochs(cfg.T)
    logger.info(f"Evaluating predictors on {source.describe()}")
    results = engine.eval_predictors(engine.events_for(source), cfg, seed=seed)
    if output:
        write_json(output, {"seed": seed, "predictor": cfg.to_dict(), "results": [r.to_dict() for r in results]})
    return results
