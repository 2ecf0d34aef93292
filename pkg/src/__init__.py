"""
PopCache Package

A trace-driven cache simulator comparing popularity-prediction caching
(feedforward network, linear regression and moving-average predictors over a
min-heap cache) with the LRU and ARC baselines.
"""

from .engine import Metrics, Simulator, compare, eval_predictors, run
from .featurestore import FeatureDb
from .models import CompareConfig, PredictorConfig, RunConfig, SyntheticConfig, TraceSource
from .policies import ArcState, CacheHeap, LruState, PopularityPolicy, make_policy
from .predictors import AveragePredictor, FnnPredictor, LinearPredictor, StaticPredictor, make_predictor
from .trace import RequestEvent, gen_synthetic, read_trace
from .utils.errors import PopCacheError

__version__ = "1.0.0"
__all__ = [
    "Metrics",
    "Simulator",
    "run",
    "compare",
    "eval_predictors",
    "FeatureDb",
    "SyntheticConfig",
    "PredictorConfig",
    "RunConfig",
    "CompareConfig",
    "TraceSource",
    "CacheHeap",
    "LruState",
    "ArcState",
    "PopularityPolicy",
    "make_policy",
    "FnnPredictor",
    "LinearPredictor",
    "AveragePredictor",
    "StaticPredictor",
    "make_predictor",
    "RequestEvent",
    "gen_synthetic",
    "read_trace",
    "PopCacheError",
]
