"""
Cache replacement policies.
"""

from typing import Optional

import numpy as np

from ..featurestore import FeatureDb
from ..predictors import Predictor
from ..utils.errors import InvalidArgumentError
from .arc import ArcState, arc_access
from .base import AccessOutcome, AccessResult, CachePolicy
from .heap import CacheHeap, heap_refresh, heap_update_or_insert
from .lru import LruState, lru_access
from .popularity import PopularityPolicy, popularity_policy_on_request


def make_policy(
    name: str,
    capacity: int,
    predictor: Optional[Predictor] = None,
    features: Optional[FeatureDb] = None,
    refresh_size: int = 2,
    rng: Optional[np.random.Generator] = None,
) -> CachePolicy:
    """
    Build a policy by name.

    Args:
        name: lru, arc, or a predictor-backed policy (fnn, lr, avg, static)
        capacity: Cache size in contents
        predictor: Required for predictor-backed policies
        features: Feature store, required for predictor-backed policies
        refresh_size: Residents re-evaluated per request
        rng: Generator for the refresh sampling

    Raises:
        InvalidArgumentError: For an unknown name or a missing predictor
    """
    if name == "lru":
        return LruState(capacity)
    if name == "arc":
        return ArcState(capacity)
    if predictor is None or features is None:
        raise InvalidArgumentError(f"policy '{name}' needs a predictor and a feature store")
    return PopularityPolicy(capacity, predictor, features, refresh_size, rng)


__all__ = [
    "AccessOutcome",
    "AccessResult",
    "CachePolicy",
    "CacheHeap",
    "LruState",
    "ArcState",
    "PopularityPolicy",
    "make_policy",
    "heap_update_or_insert",
    "heap_refresh",
    "lru_access",
    "arc_access",
    "popularity_policy_on_request",
]
