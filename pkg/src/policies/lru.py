"""
Least Recently Used replacement.
"""

from collections import OrderedDict
from typing import Sequence

from .base import HIT, AccessResult, CachePolicy, miss


class LruState(CachePolicy):
    """
    Recency list over an OrderedDict; the last entry is the most recent.

    With capacity 0 every request is a miss and nothing is stored.
    """

    name = "lru"

    def __init__(self, capacity: int):
        super().__init__(capacity)
        self._recency: "OrderedDict[int, None]" = OrderedDict()

    def __contains__(self, content_id: int) -> bool:
        return content_id in self._recency

    def __len__(self) -> int:
        return len(self._recency)

    def order(self):
        """Residents, most recent first."""
        return list(reversed(self._recency))

    def access(self, content_id: int) -> AccessResult:
        if content_id in self._recency:
            self._recency.move_to_end(content_id)
            return HIT
        if self.capacity == 0:
            return miss(stored=False)
        self._recency[content_id] = None
        evicted = None
        if len(self._recency) > self.capacity:
            evicted, _ = self._recency.popitem(last=False)
        return miss(stored=True, evicted=evicted)

    def on_request(self, content_id: int, features: Sequence[float] = (), t: float = 0.0) -> AccessResult:
        return self.access(content_id)


def lru_access(state: LruState, content_id: int) -> AccessResult:
    """Module-level form of LruState.access."""
    return state.access(content_id)
