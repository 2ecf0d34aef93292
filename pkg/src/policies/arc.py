"""
Adaptive Replacement Cache.

Two resident lists split the cache between recency (T1: seen once recently)
and frequency (T2: seen at least twice). Two ghost lists (B1, B2) remember
ids recently evicted from each, and hits on them move the target size ``p``
of T1. Every OrderedDict keeps its least recent entry first.
"""

from collections import OrderedDict
from typing import Optional, Sequence

from .base import HIT, AccessResult, CachePolicy, miss


class ArcState(CachePolicy):
    """ARC directory of 2c ids, c of them resident."""

    name = "arc"

    def __init__(self, capacity: int):
        super().__init__(capacity)
        self.p = 0.0
        self.t1: "OrderedDict[int, None]" = OrderedDict()
        self.t2: "OrderedDict[int, None]" = OrderedDict()
        self.b1: "OrderedDict[int, None]" = OrderedDict()
        self.b2: "OrderedDict[int, None]" = OrderedDict()

    def __contains__(self, content_id: int) -> bool:
        return content_id in self.t1 or content_id in self.t2

    def __len__(self) -> int:
        return len(self.t1) + len(self.t2)

    def access(self, content_id: int) -> AccessResult:
        c = self.capacity
        if c == 0:
            return miss(stored=False)

        # Hit: promote to the frequency list
        if content_id in self.t1:
            del self.t1[content_id]
            self.t2[content_id] = None
            return HIT
        if content_id in self.t2:
            self.t2.move_to_end(content_id)
            return HIT

        # Ghost hit in B1 favours recency, in B2 frequency
        if content_id in self.b1:
            self.p = min(float(c), self.p + max(1.0, len(self.b2) / len(self.b1)))
            evicted = self._replace(in_b2=False)
            del self.b1[content_id]
            self.t2[content_id] = None
            return miss(stored=True, evicted=evicted)

        if content_id in self.b2:
            self.p = max(0.0, self.p - max(1.0, len(self.b1) / len(self.b2)))
            evicted = self._replace(in_b2=True)
            del self.b2[content_id]
            self.t2[content_id] = None
            return miss(stored=True, evicted=evicted)

        # Complete miss: keep |T1|+|B1| <= c and the directory <= 2c
        evicted = None
        l1 = len(self.t1) + len(self.b1)
        if l1 == c:
            if len(self.t1) < c:
                self.b1.popitem(last=False)
                evicted = self._replace(in_b2=False)
            else:
                evicted, _ = self.t1.popitem(last=False)
        else:
            total = l1 + len(self.t2) + len(self.b2)
            if total >= c:
                if total == 2 * c:
                    self.b2.popitem(last=False)
                evicted = self._replace(in_b2=False)
        self.t1[content_id] = None
        return miss(stored=True, evicted=evicted)

    def on_request(self, content_id: int, features: Sequence[float] = (), t: float = 0.0) -> AccessResult:
        return self.access(content_id)

    def _replace(self, in_b2: bool) -> Optional[int]:
        if len(self.t1) + len(self.t2) < self.capacity:
            return None
        n1 = len(self.t1)
        # An empty T2 only occurs when |T1| = c
        if n1 and (n1 > self.p or (in_b2 and n1 == self.p) or not self.t2):
            victim, _ = self.t1.popitem(last=False)
            self.b1[victim] = None
        else:
            victim, _ = self.t2.popitem(last=False)
            self.b2[victim] = None
        return victim

    def check_invariants(self) -> None:
        """
        Verify the directory bounds and list disjointness.

        Raises:
            AssertionError: On the first violation found
        """
        c = self.capacity
        t1, t2, b1, b2 = len(self.t1), len(self.t2), len(self.b1), len(self.b2)
        if t1 + t2 > c:
            raise AssertionError(f"|T1|+|T2| = {t1 + t2} exceeds {c}")
        if t1 + b1 > c:
            raise AssertionError(f"|T1|+|B1| = {t1 + b1} exceeds {c}")
        if t1 + t2 + b1 + b2 > 2 * c:
            raise AssertionError(f"directory size {t1 + t2 + b1 + b2} exceeds {2 * c}")
        if not 0.0 <= self.p <= c:
            raise AssertionError(f"p = {self.p} outside [0, {c}]")
        union = set(self.t1) | set(self.t2) | set(self.b1) | set(self.b2)
        if len(union) != t1 + t2 + b1 + b2:
            raise AssertionError("ARC lists are not disjoint")


def arc_access(state: ArcState, content_id: int) -> AccessResult:
    """Module-level form of ArcState.access."""
    return state.access(content_id)
