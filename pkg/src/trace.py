"""
Request Trace Module

Generates the two-class Zipf workload and reads/writes trace files.

Trace files are header-less UTF-8 CSV with one ``<time>,<content_id>`` event
per line, times in seconds since the start of the trace and non-decreasing.
"""

import logging
import math
from typing import BinaryIO, Iterable, Iterator, NamedTuple, TextIO, Union

import numpy as np

from .models.synthetic import SyntheticConfig
from .utils.errors import InvalidArgumentError, TraceOrderError, TraceParseError
from .utils.files import atomic_write
from .utils.seeding import make_rng

logger = logging.getLogger(__name__)

# Share of the request mass carried by each of the two classes
CLASS_MASS = 0.5

# Events drawn per vectorised block
_BLOCK = 4096


class RequestEvent(NamedTuple):
    """One content request."""

    time: float
    content_id: int


def zipf_weights(n: int, s: float) -> np.ndarray:
    """
    Zipf probabilities over ranks 1..n.

    Args:
        n: Number of ranks
        s: Exponent (0 gives the uniform distribution)

    Returns:
        Array whose entry i-1 is i^-s / sum_j j^-s

    Raises:
        InvalidArgumentError: If n < 1 or s < 0
    """
    if n < 1:
        raise InvalidArgumentError(f"zipf_weights needs n >= 1, got {n}")
    if s < 0:
        raise InvalidArgumentError(f"zipf_weights needs s >= 0, got {s}")
    raw = np.arange(1, n + 1, dtype=np.float64) ** (-float(s))
    return raw / math.fsum(raw)


def epoch_of(time: float, T: float) -> int:
    """
    Index of the epoch containing ``time``; epochs are [l*T, (l+1)*T).

    Raises:
        InvalidArgumentError: If T <= 0 or time < 0
    """
    if T <= 0:
        raise InvalidArgumentError(f"epoch duration must be positive, got {T}")
    if time < 0:
        raise InvalidArgumentError(f"time must be non-negative, got {time}")
    return int(math.floor(time / T))


def class_permutation(cfg: SyntheticConfig, epoch: int) -> np.ndarray:
    """
    Rank-to-id assignment of the second class during one epoch.

    Entry r is the offset (from ``cfg.class1_size``) of the content holding
    within-class rank r+1. Identity when ``cfg.permute`` is off.
    """
    if not cfg.permute:
        return np.arange(cfg.class2_size)
    return make_rng(cfg.seed, "permutation", epoch).permutation(cfg.class2_size)


def stationary_probabilities(cfg: SyntheticConfig) -> np.ndarray:
    """
    Per-id request probabilities of the workload with the permutation off.

    With ``cfg.permute`` on, the class-1 entries still hold for every epoch;
    the class-2 entries then describe the un-permuted assignment only.
    """
    probs = np.empty(cfg.catalogue_size, dtype=np.float64)
    probs[: cfg.class1_size] = CLASS_MASS * zipf_weights(cfg.class1_size, cfg.zipf_exponent)
    probs[cfg.class1_size:] = (1.0 - CLASS_MASS) * zipf_weights(cfg.class2_size, cfg.zipf_exponent)
    return probs


def gen_synthetic(cfg: SyntheticConfig) -> Iterator[RequestEvent]:
    """
    Generate the synthetic request stream.

    Requests arrive as a Poisson process of rate ``arrival_rate``. Each request
    picks a class with probability 1/2, then a rank from the class's Zipf law.
    Class-1 ranks map to fixed ids; class-2 ranks are re-assigned to ids by a
    fresh uniform permutation at every epoch boundary.

    Args:
        cfg: Validated workload configuration

    Yields:
        RequestEvent in increasing time order, for times in [0, duration)
    """
    cfg.validate()
    rng = make_rng(cfg.seed, "trace")
    n1, n2 = cfg.class1_size, cfg.class2_size
    cdf1 = np.cumsum(zipf_weights(n1, cfg.zipf_exponent))
    cdf2 = np.cumsum(zipf_weights(n2, cfg.zipf_exponent))
    scale = 1.0 / cfg.arrival_rate

    logger.info(
        f"Generating synthetic trace: catalogue={cfg.catalogue_size}, "
        f"rate={cfg.arrival_rate}/s, duration={cfg.duration}s, seed={cfg.seed}"
    )

    clock = 0.0
    current_epoch = -1
    permutation = np.arange(n2)
    emitted = 0
    while True:
        times = clock + np.cumsum(rng.exponential(scale, size=_BLOCK))
        clock = float(times[-1])
        in_class1 = rng.random(_BLOCK) < CLASS_MASS
        draws = rng.random(_BLOCK)
        rank1 = np.minimum(np.searchsorted(cdf1, draws * cdf1[-1], side="right"), n1 - 1)
        rank2 = np.minimum(np.searchsorted(cdf2, draws * cdf2[-1], side="right"), n2 - 1)

        for j in range(_BLOCK):
            time = float(times[j])
            if time >= cfg.duration:
                logger.info(f"Synthetic trace complete: {emitted} events")
                return
            if in_class1[j]:
                content_id = int(rank1[j])
            else:
                epoch = epoch_of(time, cfg.epoch_duration)
                if epoch != current_epoch:
                    current_epoch = epoch
                    permutation = class_permutation(cfg, epoch)
                content_id = n1 + int(permutation[rank2[j]])
            emitted += 1
            yield RequestEvent(time, content_id)


def read_trace(source: Union[TextIO, BinaryIO, Iterable[str]]) -> Iterator[RequestEvent]:
    """
    Parse a trace stream.

    Args:
        source: Text or binary stream (or any iterable of lines) in the trace format

    Yields:
        RequestEvent in file order

    Raises:
        TraceParseError: On a malformed line or invalid UTF-8 (names the 1-based line number)
        TraceOrderError: When a timestamp is smaller than the previous one
    """
    previous = 0.0
    for line_number, raw in enumerate(source, start=1):
        # Binary lines are decoded one at a time so bad bytes report their line
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                raise TraceParseError(f"invalid UTF-8 at byte {e.start}", line_number)
        line = raw.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise TraceParseError(f"expected '<time>,<content_id>', got {line!r}", line_number)
        try:
            time = float(parts[0])
            content_id = int(parts[1])
        except ValueError:
            raise TraceParseError(f"malformed field in {line!r}", line_number)
        if not math.isfinite(time) or time < 0:
            raise TraceParseError(f"time must be a non-negative number, got {parts[0]!r}", line_number)
        if content_id < 0:
            raise TraceParseError(f"content id must be non-negative, got {content_id}", line_number)
        if time < previous:
            raise TraceOrderError(f"time {time} precedes previous time {previous}", line_number)
        previous = time
        yield RequestEvent(time, content_id)


def open_trace(path: str) -> Iterator[RequestEvent]:
    """Read a trace file lazily, closing it when the stream is exhausted."""
    logger.info(f"Reading trace file {path}")
    with open(path, "rb") as handle:
        yield from read_trace(handle)


def write_trace(events: Iterable[RequestEvent], sink: TextIO) -> int:
    """
    Serialise events in the trace format.

    Times are written with ``repr`` so reading back yields identical floats.

    Returns:
        Number of events written
    """
    count = 0
    for time, content_id in events:
        sink.write(f"{float(time)!r},{int(content_id)}\n")
        count += 1
    return count


def write_trace_file(events: Iterable[RequestEvent], path: str) -> int:
    """Write a trace file atomically and return the number of events."""
    with atomic_write(path) as handle:
        count = write_trace(events, handle)
    logger.info(f"Wrote {count} events to {path}")
    return count


__all__ = [
    "RequestEvent",
    "SyntheticConfig",
    "zipf_weights",
    "epoch_of",
    "class_permutation",
    "stationary_probabilities",
    "gen_synthetic",
    "read_trace",
    "open_trace",
    "write_trace",
    "write_trace_file",
]
