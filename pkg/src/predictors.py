"""
Popularity Predictor Module

Three predictors share one interface:

- FNN: feedforward network over [t/T, F(p_-(K-1)), ..., F(p_0)]
- LR: the same network with every activation removed (an affine map)
- AVG: arithmetic mean of the K feature popularities, no training

Networks regress the transformed popularity F(p) = -ln(p + c); predictions
are mapped back with F^-1(y) = max(0, e^-y - c) and clamped to [0, 1].

Samples are collected once per request during an epoch. When the epoch ends
their targets become F(final popularity of the requested content), and the
network is trained on the new dataset and on up to H older ones, the dataset
i epochs old with learning rate gamma^i * eta.
"""

import json
import logging
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .models.predictor import PredictorConfig
from .neuralnet import Mlp, backward, clip_gradients, forward, init_weights, mse_loss, sgd_step
from .utils.errors import InvalidArgumentError, ShapeError, UndefinedResultError
from .utils.files import atomic_write
from .utils.seeding import make_rng

logger = logging.getLogger(__name__)

# Predicted-vs-final popularity pairs kept per closed epoch
POPULARITY_SAMPLE_SIZE = 100


def transform(p, c: float):
    """F(p) = -ln(p + c); elementwise on arrays."""
    if np.isscalar(p):
        return float(-np.log(float(p) + c))
    return -np.log(np.asarray(p, dtype=np.float64) + c)


def inverse_transform(y, c: float):
    """F^-1(y) = max(0, e^-y - c); elementwise on arrays."""
    if np.isscalar(y):
        return max(0.0, float(np.exp(-float(y))) - c)
    return np.maximum(0.0, np.exp(-np.asarray(y, dtype=np.float64)) - c)


def build_input(features, t: float, cfg: PredictorConfig) -> np.ndarray:
    """
    Network input for one content.

    Args:
        features: The K popularities, oldest first, current epoch last
        t: Seconds since the start of the current epoch
        cfg: Predictor configuration

    Returns:
        Vector [t/T, F(p_-(K-1)), ..., F(p_0)]

    Raises:
        InvalidArgumentError: If t is outside [0, T]
        ShapeError: If features does not hold K values
    """
    if not 0.0 <= t <= cfg.T:
        raise InvalidArgumentError(f"time since epoch start must lie in [0, {cfg.T}], got {t}")
    features = np.asarray(features, dtype=np.float64)
    if features.shape != (cfg.K,):
        raise ShapeError(f"expected {cfg.K} popularities, got shape {features.shape}")
    vector = np.empty(cfg.K + 1, dtype=np.float64)
    vector[0] = t / cfg.T
    vector[1:] = -np.log(features + cfg.c)
    return vector


@dataclass
class TrainingSample:
    """One request's network input and its end-of-epoch target."""

    input: np.ndarray
    target: float
    epoch_index: int


@dataclass
class EpochDataset:
    """
    Resolved samples of one epoch.

    ``holdout`` marks the validation share; replay trains on the rest.
    """

    epoch_index: int
    inputs: np.ndarray
    targets: np.ndarray
    holdout: np.ndarray

    @classmethod
    def empty(cls, epoch_index: int, width: int) -> "EpochDataset":
        return cls(
            epoch_index=epoch_index,
            inputs=np.zeros((0, width), dtype=np.float64),
            targets=np.zeros(0, dtype=np.float64),
            holdout=np.zeros(0, dtype=bool),
        )

    def __len__(self) -> int:
        return int(self.targets.shape[0])

    def training_part(self) -> Tuple[np.ndarray, np.ndarray]:
        keep = ~self.holdout
        return self.inputs[keep], self.targets[keep]

    def holdout_part(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.inputs[self.holdout], self.targets[self.holdout]

    def samples(self) -> List[TrainingSample]:
        return [
            TrainingSample(input=self.inputs[i], target=float(self.targets[i]), epoch_index=self.epoch_index)
            for i in range(len(self))
        ]


@dataclass
class LossPoint:
    """One point of the iteration-indexed learning curve."""

    iteration: int
    train_loss: float
    validation_loss: Optional[float] = None


@dataclass
class TrainingReport:
    """
    Outcome of one end-of-epoch training phase.

    Attributes:
        epoch_index: Epoch whose dataset was the newest
        train_losses: Mean minibatch loss per replayed dataset (index = age), None when skipped
        validation_loss: Holdout MSE of the newest dataset after training
        eval_mse: MSE on the newest dataset with the parameters used during the epoch
        loss_curve: Learning curve of the newest-dataset pass
        iterations: Minibatch updates performed
        popularity_pairs: (predicted, final) popularities of held-out requests, predicted
            with the parameters used during the epoch
    """

    epoch_index: int
    train_losses: List[Optional[float]] = field(default_factory=list)
    validation_loss: Optional[float] = None
    eval_mse: Optional[float] = None
    loss_curve: List[LossPoint] = field(default_factory=list)
    iterations: int = 0
    popularity_pairs: List[Tuple[float, float]] = field(default_factory=list)

    @property
    def train_mse(self) -> Optional[float]:
        return self.train_losses[0] if self.train_losses else None


class Predictor(ABC):
    """
    Common interface of the popularity predictors.

    Subclasses implement ``output`` (transformed-space prediction for a batch
    of network inputs); the base class provides sample collection, target
    resolution, evaluation and the replay training loop.
    """

    name = "predictor"
    collects_samples = True
    trainable = False

    def __init__(self, config: PredictorConfig, seed: int = 0):
        self.config = config
        self.seed = seed
        self.iteration = 0
        self.replay: Deque[EpochDataset] = deque(maxlen=config.H + 1)
        self._pending: Deque[Tuple[np.ndarray, int]] = deque(maxlen=config.max_samples_per_epoch)
        self._dropped = 0
        self._split_rng = make_rng(seed, "split")
        self._shuffle_rng = make_rng(seed, "shuffle")

    @abstractmethod
    def output(self, inputs: np.ndarray) -> np.ndarray:
        """Transformed-space predictions for a batch of inputs, shape (n,)."""

    def predict(self, features, t: float, content_id: Optional[int] = None) -> float:
        """
        Estimated current popularity of one content.

        Args:
            features: K popularities, current epoch last
            t: Seconds since the start of the current epoch
            content_id: Requested content (only used by the static oracle)

        Returns:
            Estimate clamped to [0, 1]
        """
        y = self.output(build_input(features, t, self.config)[None, :])[0]
        return min(1.0, inverse_transform(float(y), self.config.c))

    def collect_sample(self, features, t: float, content_id: int) -> None:
        """Store an unresolved sample for the request being processed."""
        if len(self._pending) == self._pending.maxlen:
            self._dropped += 1
        self._pending.append((build_input(features, t, self.config), int(content_id)))

    @property
    def pending_samples(self) -> int:
        return len(self._pending)

    def resolve_targets(self, finalized: Mapping[int, float], epoch_index: int) -> EpochDataset:
        """
        Turn the epoch's collected samples into a dataset.

        Args:
            finalized: Final popularity of every content requested in the epoch
            epoch_index: The epoch being closed

        Returns:
            EpochDataset with targets F(final popularity) and a deterministic holdout
        """
        width = self.config.K + 1
        if not self._pending:
            return EpochDataset.empty(epoch_index, width)
        if self._dropped:
            logger.warning(f"Epoch {epoch_index}: kept the last {len(self._pending)} samples, dropped {self._dropped}")
        inputs = np.stack([sample for sample, _ in self._pending])
        popularity = np.array([finalized.get(cid, 0.0) for _, cid in self._pending], dtype=np.float64)
        targets = transform(popularity, self.config.c)
        holdout = np.zeros(len(targets), dtype=bool)
        n_holdout = int(len(targets) * self.config.validation_fraction)
        if n_holdout:
            holdout[self._split_rng.choice(len(targets), size=n_holdout, replace=False)] = True
        self._pending.clear()
        self._dropped = 0
        return EpochDataset(epoch_index=epoch_index, inputs=inputs, targets=targets, holdout=holdout)

    def eval_mse(self, dataset: EpochDataset) -> float:
        """
        Transformed-space MSE of the current predictor on a resolved dataset.

        Raises:
            UndefinedResultError: If the dataset is empty
        """
        if len(dataset) == 0:
            raise UndefinedResultError(f"epoch {dataset.epoch_index} has no samples to evaluate")
        return mse_loss(self.output(dataset.inputs), dataset.targets)

    def popularity_sample(
        self, dataset: EpochDataset, limit: int = POPULARITY_SAMPLE_SIZE
    ) -> List[Tuple[float, float]]:
        """
        Predicted and final popularities for up to ``limit`` requests of a dataset.

        Held-out requests are used when the dataset has any, otherwise the
        first requests of the epoch.

        Returns:
            (predicted, final) pairs, both clamped to [0, 1]
        """
        inputs, targets = dataset.holdout_part()
        if len(targets) == 0:
            inputs, targets = dataset.inputs, dataset.targets
        inputs, targets = inputs[:limit], targets[:limit]
        if len(targets) == 0:
            return []
        predicted = np.minimum(1.0, inverse_transform(self.output(inputs), self.config.c))
        final = np.minimum(1.0, inverse_transform(targets, self.config.c))
        return [(float(p), float(f)) for p, f in zip(predicted, final)]

    def train_epoch_end(self, datasets: Sequence[EpochDataset]) -> TrainingReport:
        """
        Discounted replay training; a no-op for predictors without parameters.

        Args:
            datasets: Newest first; datasets[i] is i epochs old
        """
        epoch_index = datasets[0].epoch_index if datasets else -1
        return TrainingReport(epoch_index=epoch_index)

    def end_epoch(self, finalized: Mapping[int, float], epoch_index: int) -> TrainingReport:
        """
        Close an epoch: resolve targets, measure the online error, then train.

        Returns:
            TrainingReport whose eval_mse uses the parameters of the closed epoch
        """
        dataset = self.resolve_targets(finalized, epoch_index)
        # Score with the parameters used during the epoch, before any update
        eval_mse = self.eval_mse(dataset) if len(dataset) else None
        pairs = self.popularity_sample(dataset)
        if self.trainable:
            self.replay.appendleft(dataset)
        report = self.train_epoch_end(list(self.replay) or [dataset])
        report.epoch_index = epoch_index
        report.eval_mse = eval_mse
        report.popularity_pairs = pairs
        return report


class NetworkPredictor(Predictor):
    """Predictor backed by an Mlp trained with SGD."""

    trainable = True
    hidden_activation = True

    def __init__(self, config: PredictorConfig, seed: int = 0, net: Optional[Mlp] = None):
        super().__init__(config, seed)
        dims = [config.K + 1] + list(config.hidden_layers) + [1]
        self.net = net if net is not None else init_weights(
            dims, seed, alpha=config.alpha, hidden_activation=self.hidden_activation
        )
        if self.net.dims != dims:
            raise ShapeError(f"network dims {self.net.dims} do not match the configuration {dims}")

    def output(self, inputs: np.ndarray) -> np.ndarray:
        out, _ = forward(self.net, inputs)
        return out[:, 0]

    def train_epoch_end(self, datasets: Sequence[EpochDataset]) -> TrainingReport:
        cfg = self.config
        report = TrainingReport(epoch_index=datasets[0].epoch_index if datasets else -1)
        depth = min(cfg.H, len(datasets) - 1)
        # Newest dataset first; older ones replay at geometrically smaller rates
        for age in range(depth + 1):
            rate = (cfg.gamma ** age) * cfg.eta
            inputs, targets = datasets[age].training_part()
            if rate == 0 or len(targets) == 0:
                report.train_losses.append(None)
                continue
            holdout = datasets[0].holdout_part() if age == 0 else None
            mean_loss = self._train_pass(inputs, targets, rate, report, holdout)
            report.train_losses.append(mean_loss)
            logger.debug(
                f"Epoch {report.epoch_index}: replayed dataset of age {age} "
                f"({len(targets)} samples, rate {rate:.3g}), mean loss {mean_loss:.4f}"
            )
        if datasets:
            hold_inputs, hold_targets = datasets[0].holdout_part()
            if len(hold_targets):
                report.validation_loss = mse_loss(self.output(hold_inputs), hold_targets)
        return report

    def _train_pass(
        self,
        inputs: np.ndarray,
        targets: np.ndarray,
        rate: float,
        report: TrainingReport,
        holdout: Optional[Tuple[np.ndarray, np.ndarray]],
    ) -> float:
        cfg = self.config
        order = self._shuffle_rng.permutation(len(targets))
        losses = []
        window: List[float] = []
        for start in range(0, len(order), cfg.batch_size):
            batch = order[start:start + cfg.batch_size]
            out, cache = forward(self.net, inputs[batch])
            batch_targets = targets[batch][:, None]
            loss = mse_loss(out, batch_targets)
            # Global-norm clip before each step
            grads, _ = clip_gradients(backward(self.net, cache, batch_targets), cfg.max_grad_norm)
            sgd_step(self.net, grads, rate)
            self.iteration += 1
            report.iterations += 1
            losses.append(loss)
            if holdout is not None:
                window.append(loss)
                if self.iteration % cfg.validation_interval == 0:
                    report.loss_curve.append(self._loss_point(window, holdout))
                    window = []
        return float(np.mean(losses))

    def _loss_point(self, window: List[float], holdout: Tuple[np.ndarray, np.ndarray]) -> LossPoint:
        hold_inputs, hold_targets = holdout
        validation = mse_loss(self.output(hold_inputs), hold_targets) if len(hold_targets) else None
        return LossPoint(iteration=self.iteration, train_loss=float(np.mean(window)), validation_loss=validation)


class FnnPredictor(NetworkPredictor):
    """Leaky-ReLU feedforward network."""

    name = "fnn"


class LinearPredictor(NetworkPredictor):
    """The FNN architecture with activations removed (linear regression)."""

    name = "lr"
    hidden_activation = False


class AveragePredictor(Predictor):
    """Mean of the K feature popularities, current partial epoch included."""

    name = "avg"

    def predict(self, features, t: float, content_id: Optional[int] = None) -> float:
        features = np.asarray(features, dtype=np.float64)
        if features.shape != (self.config.K,):
            raise ShapeError(f"expected {self.config.K} popularities, got shape {features.shape}")
        return min(1.0, max(0.0, float(np.mean(features))))

    def output(self, inputs: np.ndarray) -> np.ndarray:
        popularities = inverse_transform(inputs[:, 1:], self.config.c)
        return transform(np.mean(popularities, axis=1), self.config.c)


class StaticPredictor(Predictor):
    """
    Frozen oracle that returns given per-content probabilities.

    Used to measure how close the heap policy gets to the best static
    allocation when true popularities are known.
    """

    name = "static"
    collects_samples = False

    def __init__(self, config: PredictorConfig, probabilities: Mapping[int, float], seed: int = 0):
        super().__init__(config, seed)
        self.probabilities = dict(probabilities)

    def predict(self, features, t: float, content_id: Optional[int] = None) -> float:
        if content_id is None:
            raise InvalidArgumentError("the static predictor needs the content id")
        return min(1.0, max(0.0, float(self.probabilities.get(int(content_id), 0.0))))

    def output(self, inputs: np.ndarray) -> np.ndarray:
        raise UndefinedResultError("the static predictor has no transformed-space output for feature inputs")

    def end_epoch(self, finalized: Mapping[int, float], epoch_index: int) -> TrainingReport:
        self._pending.clear()
        return TrainingReport(epoch_index=epoch_index)


_PREDICTORS = {
    "fnn": FnnPredictor,
    "lr": LinearPredictor,
    "avg": AveragePredictor,
}


def make_predictor(name: str, config: PredictorConfig, seed: int = 0) -> Predictor:
    """
    Build a predictor by policy name.

    Raises:
        InvalidArgumentError: For an unknown name
    """
    try:
        return _PREDICTORS[name](config, seed)
    except KeyError:
        raise InvalidArgumentError(f"unknown predictor '{name}', expected one of {', '.join(_PREDICTORS)}")


def save_checkpoint(predictor: Predictor, path: str) -> None:
    """Write the predictor kind, its configuration and its network (if any) as JSON."""
    payload: Dict[str, object] = {
        "kind": predictor.name,
        "config": predictor.config.to_dict(),
        "seed": predictor.seed,
        "iteration": predictor.iteration,
        "network": predictor.net.to_dict() if isinstance(predictor, NetworkPredictor) else None,
    }
    with atomic_write(path) as handle:
        json.dump(payload, handle)
    logger.info(f"Saved {predictor.name} checkpoint to {path}")


def load_checkpoint(path: str) -> Predictor:
    """Rebuild a predictor written by save_checkpoint."""
    with open(path, "r", encoding="utf-8") as handle:
        payload = json.load(handle)
    config = PredictorConfig.from_dict(payload["config"])
    kind = payload["kind"]
    seed = int(payload.get("seed", 0))
    if kind in ("fnn", "lr"):
        predictor: Predictor = _PREDICTORS[kind](config, seed, Mlp.from_dict(payload["network"]))
    else:
        predictor = make_predictor(kind, config, seed)
    predictor.iteration = int(payload.get("iteration", 0))
    return predictor
