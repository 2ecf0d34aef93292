"""
Popularity-driven caching.

Every request asks the predictor for the content's current popularity. The
estimate becomes the content's key in a bounded min-heap: residents get their
key updated, and a missed content replaces the heap minimum only if its
estimate is larger. A few random residents are re-evaluated on each request
so stale keys of contents that stopped being requested decay.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from ..featurestore import FeatureDb
from ..predictors import Predictor
from ..utils.seeding import make_rng
from .base import AccessResult, CachePolicy
from .heap import CacheHeap

logger = logging.getLogger(__name__)


class PopularityPolicy(CachePolicy):
    """
    Heap cache keyed by predicted popularity.

    Attributes:
        heap: The resident set
        predictor: Source of popularity estimates
        features: Feature store used to rebuild vectors of refreshed residents
        refresh_size: Residents re-evaluated per request
    """

    def __init__(
        self,
        capacity: int,
        predictor: Predictor,
        features: FeatureDb,
        refresh_size: int = 2,
        rng: Optional[np.random.Generator] = None,
    ):
        super().__init__(capacity)
        self.heap = CacheHeap(capacity)
        self.predictor = predictor
        self.features = features
        self.refresh_size = refresh_size
        self.rng = rng if rng is not None else make_rng(0, "refresh")
        self.name = predictor.name

    def __contains__(self, content_id: int) -> bool:
        return content_id in self.heap

    def __len__(self) -> int:
        return len(self.heap)

    def on_request(self, content_id: int, features: Sequence[float], t: float) -> AccessResult:
        estimate = self.predictor.predict(features, t, content_id)
        result = self.heap.offer(content_id, estimate)
        # Re-score a few random residents so stale keys age out
        if self.refresh_size:
            self.heap.refresh(self.refresh_size, lambda cid: self._reevaluate(cid, t), self.rng)
        return result

    def _reevaluate(self, content_id: int, t: float) -> float:
        return self.predictor.predict(self.features.feature_vector(content_id), t, content_id)


def popularity_policy_on_request(
    state: PopularityPolicy, content_id: int, features: Sequence[float], t: float
) -> AccessResult:
    """Module-level form of PopularityPolicy.on_request."""
    return state.on_request(content_id, features, t)
