"""
Simulation Engine Module

Drives request events through the feature store, the predictor and a cache
policy, closing epochs as time crosses their boundaries and accumulating
hit and prediction-error metrics.
"""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence

from .featurestore import FeatureDb
from .models.predictor import PredictorConfig
from .models.run import RunConfig, TraceSource
from .policies import AccessOutcome, CachePolicy, make_policy
from .predictors import LossPoint, Predictor, make_predictor
from .trace import RequestEvent, epoch_of, gen_synthetic, open_trace
from .utils.errors import InvalidArgumentError, UndefinedResultError
from .utils.files import write_csv, write_json
from .utils.seeding import make_rng

logger = logging.getLogger(__name__)

CSV_FIELDS = ["epoch", "requests", "hits", "hit_rate", "train_mse", "val_mse"]

ProgressCallback = Callable[["EpochMetrics"], None]


@dataclass
class EpochMetrics:
    """Counters and training errors of one closed epoch."""

    epoch: int
    requests: int = 0
    hits: int = 0
    stores: int = 0
    train_mse: Optional[float] = None
    val_mse: Optional[float] = None
    eval_mse: Optional[float] = None

    @property
    def hit_rate(self) -> float:
        return self.hits / self.requests if self.requests else 0.0

    def to_row(self) -> Dict[str, Any]:
        return {
            "epoch": self.epoch,
            "requests": self.requests,
            "hits": self.hits,
            "hit_rate": self.hit_rate,
            "train_mse": self.train_mse,
            "val_mse": self.val_mse,
        }


@dataclass
class Metrics:
    """
    Results of one run.

    ``wall_clock`` is excluded from equality so that repeated runs compare equal.
    """

    policy: str
    capacity: int
    seed: int
    hits: int = 0
    misses: int = 0
    epochs: List[EpochMetrics] = field(default_factory=list)
    loss_curve: List[LossPoint] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)
    wall_clock: float = field(default=0.0, compare=False)

    @property
    def requests(self) -> int:
        return self.hits + self.misses

    @property
    def hit_rate(self) -> float:
        return self.hits / self.requests if self.requests else 0.0

    @property
    def post_warmup_hit_rate(self) -> Optional[float]:
        """Hit rate over every epoch after the first; None without such epochs."""
        later = self.epochs[1:]
        requests = sum(e.requests for e in later)
        return sum(e.hits for e in later) / requests if requests else None

    def mean_after_warmup(self, attribute: str) -> Optional[float]:
        return _mean(getattr(e, attribute) for e in self.epochs[1:])

    def to_rows(self) -> List[Dict[str, Any]]:
        return [epoch.to_row() for epoch in self.epochs]

    def summary(self) -> Dict[str, Any]:
        return {
            "policy": self.policy,
            "capacity": self.capacity,
            "seed": self.seed,
            "requests": self.requests,
            "hits": self.hits,
            "misses": self.misses,
            "hit_rate": self.hit_rate,
            "post_warmup_hit_rate": self.post_warmup_hit_rate,
            "epochs": len(self.epochs),
            "mean_train_mse": self.mean_after_warmup("train_mse"),
            "mean_val_mse": self.mean_after_warmup("val_mse"),
            "mean_eval_mse": self.mean_after_warmup("eval_mse"),
            "eval_mse_per_epoch": [e.eval_mse for e in self.epochs],
            "mse_averaging": "per-epoch mean over epochs after the first",
            "loss_curve": [
                {"iteration": p.iteration, "train_loss": p.train_loss, "val_loss": p.validation_loss}
                for p in self.loss_curve
            ],
            "wall_clock_seconds": self.wall_clock,
            "config": self.config,
        }


class Simulator:
    """
    State of one simulation run.

    Args:
        cfg: Run configuration
        predictor: Predictor to use instead of the one named by ``cfg.policy``
        progress: Called with each closed epoch's metrics
    """

    def __init__(
        self,
        cfg: RunConfig,
        predictor: Optional[Predictor] = None,
        progress: Optional[ProgressCallback] = None,
    ):
        self.cfg = cfg
        pcfg = cfg.predictor
        self.features = FeatureDb(K=pcfg.K, T=pcfg.T)
        if predictor is None and cfg.uses_predictor:
            predictor = make_predictor(cfg.policy, pcfg, cfg.seed)
        self.predictor = predictor
        self.policy: CachePolicy = make_policy(
            cfg.policy if predictor is None else predictor.name,
            cfg.capacity,
            predictor=predictor,
            features=self.features,
            refresh_size=cfg.refresh_size,
            rng=make_rng(cfg.seed, "refresh"),
        )
        self.progress = progress
        self.metrics = Metrics(
            policy=self.policy.name, capacity=cfg.capacity, seed=cfg.seed, config=cfg.to_dict()
        )
        self._current = EpochMetrics(epoch=0)
        self._seen_events = False
        if cfg.capacity == 0:
            logger.warning("Cache capacity is 0: every request will miss")

    def process(self, event: RequestEvent) -> AccessOutcome:
        """Feed one event; closes any epochs the event's time has moved past."""
        content_id = event.content_id
        epoch = epoch_of(event.time, self.features.T)
        # Close every epoch the stream skipped, empty ones included
        if epoch > self.features.epoch_index:
            while self.features.epoch_index < epoch:
                self.close_epoch()
        features = self.features.record_request(content_id, event.time)
        t = min(max(event.time - self.features.epoch_start(), 0.0), self.features.T)
        if self.predictor is not None and self.predictor.collects_samples:
            self.predictor.collect_sample(features, t, content_id)
        result = self.policy.on_request(content_id, features, t)

        self._seen_events = True
        current = self._current
        current.requests += 1
        if result.hit:
            current.hits += 1
            self.metrics.hits += 1
        else:
            self.metrics.misses += 1
            if result.outcome is AccessOutcome.STORE:
                current.stores += 1
        return result.outcome

    def close_epoch(self) -> EpochMetrics:
        """Roll over the feature store and train the predictor on the closed epoch."""
        epoch = self.features.epoch_index
        finalized = self.features.rollover()
        current = self._current
        if self.predictor is not None:
            report = self.predictor.end_epoch(finalized, epoch)
            current.train_mse = report.train_mse
            current.val_mse = report.validation_loss
            current.eval_mse = report.eval_mse
            self.metrics.loss_curve.extend(report.loss_curve)
        self.policy.end_epoch(epoch)
        self.metrics.epochs.append(current)
        logger.info(
            f"Epoch {epoch} closed: {current.requests} requests, hit rate {current.hit_rate:.4f}, "
            f"cache {len(self.policy)}/{self.cfg.capacity}"
        )
        if self.progress is not None:
            self.progress(current)
        self._current = EpochMetrics(epoch=epoch + 1)
        return current

    def run(self, events: Iterable[RequestEvent]) -> Metrics:
        """
        Process a whole stream, then close the epoch holding its last event.

        Returns:
            The run's Metrics
        """
        started = time.perf_counter()
        for event in events:
            self.process(event)
        if self._seen_events:
            self.close_epoch()
        self.metrics.wall_clock = time.perf_counter() - started
        logger.info(
            f"Run finished: policy={self.metrics.policy}, capacity={self.cfg.capacity}, "
            f"requests={self.metrics.requests}, hit rate={self.metrics.hit_rate:.4f}"
        )
        return self.metrics


def events_for(source: TraceSource) -> Iterator[RequestEvent]:
    """Event stream of a trace source; synthetic streams are regenerated from their seed."""
    if source.file is not None:
        return open_trace(source.file)
    return gen_synthetic(source.synthetic)


def run(cfg: RunConfig, progress: Optional[ProgressCallback] = None) -> Metrics:
    """
    Simulate one policy over the configured trace.

    Args:
        cfg: Validated run configuration
        progress: Optional per-epoch callback

    Returns:
        Metrics of the run
    """
    logger.info(f"Starting run: policy={cfg.policy}, capacity={cfg.capacity}, trace={cfg.trace.describe()}")
    return Simulator(cfg, progress=progress).run(events_for(cfg.trace))


@dataclass
class ComparisonRow:
    """One (policy, capacity) line of a comparison."""

    policy: str
    capacity: int
    requests: int
    hits: int
    hit_rate: float
    post_warmup_hit_rate: Optional[float]
    mean_eval_mse: Optional[float]
    mean_val_mse: Optional[float]

    @classmethod
    def from_metrics(cls, metrics: Metrics) -> "ComparisonRow":
        return cls(
            policy=metrics.policy,
            capacity=metrics.capacity,
            requests=metrics.requests,
            hits=metrics.hits,
            hit_rate=metrics.hit_rate,
            post_warmup_hit_rate=metrics.post_warmup_hit_rate,
            mean_eval_mse=metrics.mean_after_warmup("eval_mse"),
            mean_val_mse=metrics.mean_after_warmup("val_mse"),
        )

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


COMPARISON_FIELDS = [
    "policy",
    "capacity",
    "requests",
    "hits",
    "hit_rate",
    "post_warmup_hit_rate",
    "mean_eval_mse",
    "mean_val_mse",
]


def compare(cfgs: Sequence[RunConfig], workers: int = 1) -> List[ComparisonRow]:
    """
    Run several configurations over the same trace.

    Each run regenerates (or re-reads) the event stream itself, so runs share
    nothing and may execute in separate processes.

    Args:
        cfgs: Run configurations sharing trace source and seed
        workers: Parallel processes (1 runs sequentially)

    Returns:
        One row per configuration, in input order

    Raises:
        InvalidArgumentError: If the configurations disagree on trace or seed
    """
    if not cfgs:
        return []
    first = cfgs[0]
    for cfg in cfgs[1:]:
        if cfg.trace != first.trace or cfg.seed != first.seed:
            raise InvalidArgumentError(
                f"compared runs must share one trace and seed: {first.trace.describe()} (seed {first.seed}) "
                f"vs {cfg.trace.describe()} (seed {cfg.seed})"
            )
    logger.info(f"Comparing {len(cfgs)} runs on {first.trace.describe()} with {workers} worker(s)")
    if workers > 1 and len(cfgs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, cfgs))
    else:
        results = [run(cfg) for cfg in cfgs]
    return [ComparisonRow.from_metrics(metrics) for metrics in results]


@dataclass
class PredictorEvaluation:
    """Online prediction error of one predictor over a trace."""

    predictor: str
    mean_eval_mse: float
    eval_mse_per_epoch: List[Optional[float]]
    mean_val_mse: Optional[float]
    popularity_samples: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def eval_predictors(
    events: Iterable[RequestEvent],
    cfg: PredictorConfig,
    seed: int = 0,
    names: Sequence[str] = ("fnn", "lr", "avg"),
) -> List[PredictorEvaluation]:
    """
    Measure transformed-space prediction error without a cache.

    All predictors see the same requests. Each epoch's samples are scored with
    the parameters used during that epoch, before training on them; the
    reported MSE averages those per-epoch scores over the epochs after the first.

    Each result also carries, per epoch, a sample of predicted popularities
    next to the final popularities they were estimating.

    Args:
        events: Request stream
        cfg: Predictor configuration
        seed: Master seed
        names: Predictors to evaluate

    Returns:
        One PredictorEvaluation per name

    Raises:
        UndefinedResultError: If the trace spans fewer than two epochs
    """
    db = FeatureDb(K=cfg.K, T=cfg.T)
    predictors = [make_predictor(name, cfg, seed) for name in names]
    per_epoch: Dict[str, List[Optional[float]]] = {p.name: [] for p in predictors}
    validation: Dict[str, List[Optional[float]]] = {p.name: [] for p in predictors}
    samples: Dict[str, List[Dict[str, Any]]] = {p.name: [] for p in predictors}
    seen = False

    def close() -> None:
        epoch = db.epoch_index
        finalized = db.rollover()
        for predictor in predictors:
            report = predictor.end_epoch(finalized, epoch)
            per_epoch[predictor.name].append(report.eval_mse)
            validation[predictor.name].append(report.validation_loss)
            if report.popularity_pairs:
                samples[predictor.name].append({"epoch": epoch, "pairs": [list(p) for p in report.popularity_pairs]})
        logger.info(f"Evaluation epoch {epoch} closed: {len(finalized)} distinct contents")

    for event in events:
        epoch = epoch_of(event.time, cfg.T)
        while db.epoch_index < epoch:
            close()
        features = db.record_request(event.content_id, event.time)
        t = min(max(event.time - db.epoch_start(), 0.0), cfg.T)
        for predictor in predictors:
            predictor.collect_sample(features, t, event.content_id)
        seen = True
    if seen:
        close()

    if db.epoch_index < 2:
        raise UndefinedResultError(f"predictor evaluation needs at least 2 epochs, the trace spans {db.epoch_index}")

    results = []
    for predictor in predictors:
        scores = per_epoch[predictor.name]
        mean_eval = _mean(scores[1:])
        if mean_eval is None:
            raise UndefinedResultError("no requests after the first epoch to evaluate")
        results.append(
            PredictorEvaluation(
                predictor=predictor.name,
                mean_eval_mse=mean_eval,
                eval_mse_per_epoch=scores,
                mean_val_mse=_mean(validation[predictor.name][1:]),
                popularity_samples=samples[predictor.name],
            )
        )
        logger.info(f"Predictor {predictor.name}: mean online MSE {mean_eval:.4f}")
    return results


def write_metrics(metrics: Metrics, stem: str) -> List[str]:
    """
    Write ``<stem>.csv`` (one row per epoch) and ``<stem>.json`` (summary).

    Returns:
        The written paths
    """
    csv_path, json_path = f"{stem}.csv", f"{stem}.json"
    write_csv(csv_path, CSV_FIELDS, metrics.to_rows())
    write_json(json_path, metrics.summary())
    logger.info(f"Wrote metrics to {csv_path} and {json_path}")
    return [csv_path, json_path]


def write_comparison(rows: Sequence[ComparisonRow], stem: str) -> List[str]:
    """Write a comparison table as ``<stem>.csv`` and ``<stem>.json``."""
    csv_path, json_path = f"{stem}.csv", f"{stem}.json"
    write_csv(csv_path, COMPARISON_FIELDS, [row.to_dict() for row in rows])
    write_json(json_path, {"rows": [row.to_dict() for row in rows]})
    logger.info(f"Wrote comparison to {csv_path} and {json_path}")
    return [csv_path, json_path]


def format_table(rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> str:
    """Render rows as a whitespace-aligned text table."""
    cells = [[_format_cell(row.get(col)) for col in columns] for row in rows]
    widths = [max([len(col)] + [len(r[i]) for r in cells]) for i, col in enumerate(columns)]
    lines = ["  ".join(col.ljust(w) for col, w in zip(columns, widths))]
    lines.extend("  ".join(cell.ljust(w) for cell, w in zip(r, widths)) for r in cells)
    return "\n".join(lines)


def _format_cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def _mean(values: Iterable[Optional[float]]) -> Optional[float]:
    present = [v for v in values if v is not None]
    return math.fsum(present) / len(present) if present else None
