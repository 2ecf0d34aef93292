"""
Bounded binary min-heap keyed by estimated popularity.

The heap array holds ``(content_id, key)`` pairs and a position index maps
each resident id to its slot, so key updates are O(log n).
"""

import logging
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..utils.errors import InvalidArgumentError
from .base import HIT, AccessResult, miss

logger = logging.getLogger(__name__)


class CacheHeap:
    """
    Min-heap of at most ``capacity`` residents.

    Equal keys are ordered by position only: the entry at the top is evicted
    first, which is deterministic for a given operation sequence.
    """

    def __init__(self, capacity: int):
        if capacity < 0:
            raise InvalidArgumentError(f"capacity must be non-negative, got {capacity}")
        self.capacity = capacity
        self._entries: List[Tuple[int, float]] = []
        self._position: Dict[int, int] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, content_id: int) -> bool:
        return content_id in self._position

    def key_of(self, content_id: int) -> float:
        return self._entries[self._position[content_id]][1]

    def residents(self) -> List[int]:
        return [content_id for content_id, _ in self._entries]

    def peek_min(self) -> Optional[Tuple[int, float]]:
        return self._entries[0] if self._entries else None

    def pop_min(self) -> Tuple[int, float]:
        """
        Remove and return the entry with the smallest key.

        Raises:
            IndexError: If the heap is empty
        """
        if not self._entries:
            raise IndexError("pop from an empty cache heap")
        top = self._entries[0]
        last = self._entries.pop()
        del self._position[top[0]]
        if self._entries:
            self._entries[0] = last
            self._position[last[0]] = 0
            self._sift_down(0)
        return top

    def update(self, content_id: int, key: float) -> None:
        """Change a resident's key and restore the heap order."""
        index = self._position[content_id]
        self._entries[index] = (content_id, key)
        if not self._sift_up(index):
            self._sift_down(index)

    def offer(self, content_id: int, key: float) -> AccessResult:
        """
        Update a resident, or try to admit a new content.

        Returns:
            HIT if resident (key updated); STORE with the evicted id (if any)
            when admitted; BYPASS when the key does not beat the minimum
        """
        if content_id in self._position:
            self.update(content_id, key)
            return HIT
        if self.capacity == 0:
            return miss(stored=False)
        if len(self._entries) < self.capacity:
            self._push(content_id, key)
            return miss(stored=True)
        if key > self._entries[0][1]:
            evicted, _ = self.pop_min()
            self._push(content_id, key)
            return miss(stored=True, evicted=evicted)
        return miss(stored=False)

    def refresh(self, sample_size: int, reevaluate: Callable[[int], float], rng: np.random.Generator) -> List[int]:
        """
        Re-evaluate the keys of randomly chosen residents.

        Args:
            sample_size: Residents to sample (without replacement)
            reevaluate: Maps a content id to its new key
            rng: Random generator for the sampling

        Returns:
            The refreshed content ids
        """
        count = min(sample_size, len(self._entries))
        if count <= 0:
            return []
        picks = rng.choice(len(self._entries), size=count, replace=False)
        chosen = [self._entries[int(i)][0] for i in picks]
        for content_id in chosen:
            self.update(content_id, reevaluate(content_id))
        return chosen

    def check_invariants(self) -> None:
        """
        Verify heap order, index consistency and the capacity bound.

        Raises:
            AssertionError: On the first violation found
        """
        entries = self._entries
        if len(entries) > self.capacity:
            raise AssertionError(f"{len(entries)} residents exceed capacity {self.capacity}")
        if len(self._position) != len(entries):
            raise AssertionError("position index and heap array differ in size")
        for index, (content_id, key) in enumerate(entries):
            if self._position.get(content_id) != index:
                indexed = self._position.get(content_id)
                raise AssertionError(f"content {content_id} indexed at {indexed}, stored at {index}")
            if index and entries[(index - 1) // 2][1] > key:
                raise AssertionError(f"heap order violated at slot {index}")

    def _push(self, content_id: int, key: float) -> None:
        self._entries.append((content_id, key))
        self._position[content_id] = len(self._entries) - 1
        self._sift_up(len(self._entries) - 1)

    def _swap(self, i: int, j: int) -> None:
        entries = self._entries
        entries[i], entries[j] = entries[j], entries[i]
        self._position[entries[i][0]] = i
        self._position[entries[j][0]] = j

    def _sift_up(self, index: int) -> bool:
        moved = False
        while index:
            parent = (index - 1) // 2
            if self._entries[parent][1] <= self._entries[index][1]:
                break
            self._swap(index, parent)
            index = parent
            moved = True
        return moved

    def _sift_down(self, index: int) -> None:
        entries = self._entries
        size = len(entries)
        while True:
            smallest = index
            for child in (2 * index + 1, 2 * index + 2):
                if child < size and entries[child][1] < entries[smallest][1]:
                    smallest = child
            if smallest == index:
                return
            self._swap(index, smallest)
            index = smallest


def heap_update_or_insert(heap: CacheHeap, content_id: int, key: float) -> AccessResult:
    """Module-level form of CacheHeap.offer."""
    return heap.offer(content_id, key)


def heap_refresh(
    heap: CacheHeap, sample_size: int, reevaluate: Callable[[int], float], rng: np.random.Generator
) -> List[int]:
    """Module-level form of CacheHeap.refresh."""
    return heap.refresh(sample_size, reevaluate, rng)
