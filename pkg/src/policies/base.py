"""
Common cache policy interface.
"""

import enum
from abc import ABC, abstractmethod
from typing import NamedTuple, Optional, Sequence


class AccessOutcome(enum.Enum):
    """What a policy did with a request."""

    HIT = "hit"
    STORE = "store"
    BYPASS = "bypass"


class AccessResult(NamedTuple):
    """
    Outcome of one request.

    ``evicted`` names the content that left the cache to make room, if any.
    """

    outcome: AccessOutcome
    evicted: Optional[int] = None

    @property
    def hit(self) -> bool:
        return self.outcome is AccessOutcome.HIT


class CachePolicy(ABC):
    """
    A cache replacement policy over unit-size contents.

    Recency policies only look at the content id; the popularity policy also
    receives the content's feature vector and the time since the epoch start.
    """

    name = "policy"

    def __init__(self, capacity: int):
        self.capacity = capacity

    @abstractmethod
    def on_request(self, content_id: int, features: Sequence[float], t: float) -> AccessResult:
        """Serve one request and update the cache state."""

    @abstractmethod
    def __contains__(self, content_id: int) -> bool:
        ...

    @abstractmethod
    def __len__(self) -> int:
        ...

    def end_epoch(self, epoch_index: int) -> None:
        """Hook called after each epoch rollover."""


def miss(stored: bool, evicted: Optional[int] = None) -> AccessResult:
    return AccessResult(AccessOutcome.STORE if stored else AccessOutcome.BYPASS, evicted)


HIT = AccessResult(AccessOutcome.HIT)
