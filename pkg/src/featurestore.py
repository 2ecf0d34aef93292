"""
Feature Database Module

Keeps, for every content, the popularities of the last K-1 finalized epochs
and the request count of the current epoch. Popularity means the fraction of
an epoch's requests that were for the content.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from .trace import epoch_of
from .utils.errors import EpochNotClosedError, InvalidArgumentError, OutOfOrderError

logger = logging.getLogger(__name__)


@dataclass
class ContentFeatures:
    """Popularity history of one content, oldest epoch first."""

    past_popularities: np.ndarray
    current_count: int = 0

    def has_history(self) -> bool:
        return self.current_count > 0 or bool(np.any(self.past_popularities > 0.0))


@dataclass
class FeatureDb:
    """
    Feature vectors for the whole catalogue.

    Contents never requested are not stored; their features are all zero.
    """

    K: int
    T: float
    epoch_index: int = 0
    total_current_count: int = 0
    contents: Dict[int, ContentFeatures] = field(default_factory=dict)

    def __post_init__(self):
        if self.K < 1:
            raise InvalidArgumentError(f"K must be at least 1, got {self.K}")
        if self.T <= 0:
            raise InvalidArgumentError(f"epoch duration must be positive, got {self.T}")
        self._zero_history = np.zeros(self.K - 1, dtype=np.float64)

    def __len__(self) -> int:
        return len(self.contents)

    def epoch_start(self) -> float:
        return self.epoch_index * self.T

    def record_request(self, content_id: int, time: float) -> np.ndarray:
        """
        Count a request and return the content's feature vector.

        Args:
            content_id: Requested content
            time: Request time in seconds since the trace start

        Returns:
            Array [p_-(K-1), ..., p_-1, p_0] with p_0 including this request

        Raises:
            OutOfOrderError: If time belongs to an epoch already rolled over
            EpochNotClosedError: If time belongs to a later epoch (roll over first)
        """
        epoch = epoch_of(time, self.T)
        if epoch < self.epoch_index:
            raise OutOfOrderError(
                f"request at {time}s belongs to epoch {epoch}, current epoch is {self.epoch_index}"
            )
        if epoch > self.epoch_index:
            raise EpochNotClosedError(
                f"request at {time}s belongs to epoch {epoch}; roll over epoch {self.epoch_index} first"
            )
        features = self.contents.get(content_id)
        if features is None:
            features = ContentFeatures(past_popularities=self._zero_history.copy())
            self.contents[content_id] = features
        features.current_count += 1
        self.total_current_count += 1
        return self._vector(features)

    def current_popularity(self, content_id: int) -> float:
        """
        Fraction of this epoch's requests so far that were for the content.

        Returns 0 for unseen contents and for an epoch without requests.
        """
        if self.total_current_count == 0:
            return 0.0
        features = self.contents.get(content_id)
        if features is None:
            return 0.0
        return features.current_count / self.total_current_count

    def feature_vector(self, content_id: int) -> np.ndarray:
        """Read-only feature vector of a content at the current instant."""
        features = self.contents.get(content_id)
        if features is None:
            return np.zeros(self.K, dtype=np.float64)
        return self._vector(features)

    def rollover(self) -> Dict[int, float]:
        """
        Close the current epoch.

        Every content's finalized popularity is shifted into its history
        (the oldest entry drops out), counts reset and the epoch index advances.
        Contents whose whole history became zero are forgotten.

        Returns:
            Finalized popularity of every content requested in the closing epoch
        """
        total = self.total_current_count
        finalized: Dict[int, float] = {}
        stale = []
        for content_id, features in self.contents.items():
            popularity = features.current_count / total if total else 0.0
            if features.current_count:
                finalized[content_id] = popularity
            if self.K > 1:
                history = features.past_popularities
                history[:-1] = history[1:]
                history[-1] = popularity
            features.current_count = 0
            if not features.has_history():
                stale.append(content_id)
        for content_id in stale:
            del self.contents[content_id]

        logger.debug(
            f"Rolled over epoch {self.epoch_index}: {total} requests, "
            f"{len(finalized)} distinct contents, {len(stale)} forgotten"
        )
        if total == 0:
            logger.warning(f"Epoch {self.epoch_index} had no requests")
        self.total_current_count = 0
        self.epoch_index += 1
        return finalized

    def advance_to(self, epoch: int) -> int:
        """
        Roll over until ``epoch`` is current.

        Returns:
            Number of rollovers performed
        """
        count = 0
        while self.epoch_index < epoch:
            self.rollover()
            count += 1
        return count

    def _vector(self, features: ContentFeatures) -> np.ndarray:
        vector = np.empty(self.K, dtype=np.float64)
        vector[:-1] = features.past_popularities
        vector[-1] = features.current_count / self.total_current_count if self.total_current_count else 0.0
        return vector


def record_request(db: FeatureDb, content_id: int, time: float) -> np.ndarray:
    """Module-level form of FeatureDb.record_request."""
    return db.record_request(content_id, time)


def current_popularity(db: FeatureDb, content_id: int) -> float:
    """Module-level form of FeatureDb.current_popularity."""
    return db.current_popularity(content_id)


def rollover(db: FeatureDb) -> Dict[int, float]:
    """Module-level form of FeatureDb.rollover."""
    return db.rollover()
