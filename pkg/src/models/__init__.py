"""
Configuration models

Validated configuration objects for workloads, predictors and experiments.
"""

from .synthetic import SyntheticConfig
from .predictor import PredictorConfig
from .run import CompareConfig, RunConfig, TraceSource, POLICIES, PREDICTOR_POLICIES

__all__ = [
    "SyntheticConfig",
    "PredictorConfig",
    "RunConfig",
    "CompareConfig",
    "TraceSource",
    "POLICIES",
    "PREDICTOR_POLICIES",
]
