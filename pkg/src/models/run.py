"""
Experiment-level configuration: one run, or a comparison of several runs.
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional

from ..utils.errors import ConfigError
from .predictor import PredictorConfig
from .synthetic import SyntheticConfig

POLICIES = ("fnn", "lr", "avg", "lru", "arc")
PREDICTOR_POLICIES = ("fnn", "lr", "avg")


@dataclass(frozen=True)
class TraceSource:
    """Exactly one of a synthetic workload or a trace file."""

    synthetic: Optional[SyntheticConfig] = None
    file: Optional[str] = None

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TraceSource":
        if not isinstance(data, dict):
            raise ConfigError("trace must be an object with 'synthetic' or 'file'")
        unknown = sorted(set(data) - {"synthetic", "file"})
        if unknown:
            raise ConfigError(f"Unknown trace keys: {', '.join(unknown)}")
        if ("synthetic" in data) == ("file" in data):
            raise ConfigError("trace must name exactly one of 'synthetic' or 'file'")
        if "file" in data:
            return cls(file=str(data["file"]))
        return cls(synthetic=SyntheticConfig.from_dict(data["synthetic"]))

    def describe(self) -> str:
        if self.file is not None:
            return f"file:{self.file}"
        return f"synthetic(seed={self.synthetic.seed}, catalogue={self.synthetic.catalogue_size})"

    def check_epochs(self, T: float) -> None:
        """
        Require a synthetic workload to reshuffle on the predictor's epoch grid.

        Raises:
            ConfigError: If the workload epoch differs from T
        """
        if self.synthetic is not None and self.synthetic.epoch_duration != T:
            raise ConfigError(
                f"synthetic epoch_duration ({self.synthetic.epoch_duration}) must equal predictor T ({T})"
            )

    def to_dict(self) -> Dict[str, Any]:
        if self.file is not None:
            return {"file": self.file}
        return {"synthetic": self.synthetic.to_dict()}


@dataclass(frozen=True)
class RunConfig:
    """
    Knobs of a single simulation run.

    Attributes:
        trace: Where the events come from
        policy: One of fnn, lr, avg, lru, arc
        capacity: Cache size in contents
        predictor: Predictor parameters (used by fnn, lr, avg)
        refresh_size: Residents re-evaluated per request by the popularity policy
        output: Output path stem for metrics (``<stem>.csv`` and ``<stem>.json``)
        seed: Master seed for predictor and policy randomness
    """

    trace: TraceSource
    policy: str = "fnn"
    capacity: int = 100
    predictor: PredictorConfig = field(default_factory=PredictorConfig)
    refresh_size: int = 2
    output: Optional[str] = None
    seed: int = 0

    @classmethod
    def from_dict(cls, data: Dict[str, Any], overrides: Optional[Dict[str, Any]] = None) -> "RunConfig":
        """
        Build a validated run config from a JSON object and command-line overrides.

        Args:
            data: Mapping mirroring the RunConfig fields
            overrides: capacity/policy/seed/output values taking precedence (None ignored)

        Returns:
            Validated RunConfig

        Raises:
            ConfigError: On unknown keys, a missing trace, or invalid values
        """
        merged = dict(data)
        merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
        allowed = {"trace", "policy", "capacity", "predictor", "refresh_size", "output", "seed"}
        unknown = sorted(set(merged) - allowed)
        if unknown:
            raise ConfigError(f"Unknown run config keys: {', '.join(unknown)}")
        if "trace" not in merged:
            raise ConfigError("run config requires a 'trace' source")
        try:
            cfg = cls(
                trace=TraceSource.from_dict(merged["trace"]),
                policy=str(merged.get("policy", "fnn")).lower(),
                capacity=int(merged.get("capacity", 100)),
                predictor=PredictorConfig.from_dict(merged.get("predictor", {})),
                refresh_size=int(merged.get("refresh_size", 2)),
                output=merged.get("output"),
                seed=int(merged.get("seed", 0)),
            )
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid run config value: {e}")
        cfg.validate()
        return cfg

    def validate(self) -> bool:
        """
        Check the run invariants.

        Returns:
            True if valid

        Raises:
            ConfigError: If validation fails
        """
        if self.policy not in POLICIES:
            raise ConfigError(f"policy must be one of {', '.join(POLICIES)}, got '{self.policy}'")
        if self.capacity < 0:
            raise ConfigError("capacity must be non-negative")
        if self.refresh_size < 0:
            raise ConfigError("refresh_size must be non-negative")
        if (self.trace.synthetic is None) == (self.trace.file is None):
            raise ConfigError("exactly one trace source is required")
        self.predictor.validate()
        self.trace.check_epochs(self.predictor.T)
        return True

    @property
    def uses_predictor(self) -> bool:
        return self.policy in PREDICTOR_POLICIES

    def with_overrides(self, **changes: Any) -> "RunConfig":
        cfg = replace(self, **changes)
        cfg.validate()
        return cfg

    def to_dict(self) -> Dict[str, Any]:
        return {
            "trace": self.trace.to_dict(),
            "policy": self.policy,
            "capacity": self.capacity,
            "predictor": self.predictor.to_dict(),
            "refresh_size": self.refresh_size,
            "output": self.output,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class CompareConfig:
    """Several policies and capacities over one shared trace."""

    trace: TraceSource
    policies: List[str] = field(default_factory=lambda: ["fnn", "lr", "avg", "arc", "lru"])
    capacities: List[int] = field(default_factory=lambda: [100])
    predictor: PredictorConfig = field(default_factory=PredictorConfig)
    refresh_size: int = 2
    output: Optional[str] = None
    seed: int = 0

    @classmethod
    def from_dict(cls, data: Dict[str, Any], overrides: Optional[Dict[str, Any]] = None) -> "CompareConfig":
        """
        Build a validated comparison config.

        ``capacity`` may be a single integer or a list (capacity sweep).

        Raises:
            ConfigError: On unknown keys or invalid values
        """
        merged = dict(data)
        merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
        allowed = {"trace", "policies", "capacity", "predictor", "refresh_size", "output", "seed"}
        unknown = sorted(set(merged) - allowed)
        if unknown:
            raise ConfigError(f"Unknown compare config keys: {', '.join(unknown)}")
        if "trace" not in merged:
            raise ConfigError("compare config requires a 'trace' source")
        capacity = merged.get("capacity", [100])
        capacities = capacity if isinstance(capacity, list) else [capacity]
        try:
            cfg = cls(
                trace=TraceSource.from_dict(merged["trace"]),
                policies=[str(p).lower() for p in merged.get("policies", list(POLICIES))],
                capacities=[int(c) for c in capacities],
                predictor=PredictorConfig.from_dict(merged.get("predictor", {})),
                refresh_size=int(merged.get("refresh_size", 2)),
                output=merged.get("output"),
                seed=int(merged.get("seed", 0)),
            )
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid compare config value: {e}")
        if not cfg.policies or not cfg.capacities:
            raise ConfigError("compare needs at least one policy and one capacity")
        for run_cfg in cfg.run_configs():
            run_cfg.validate()
        return cfg

    def run_configs(self) -> List[RunConfig]:
        """Expand into one RunConfig per (capacity, policy)."""
        return [
            RunConfig(
                trace=self.trace,
                policy=policy,
                capacity=capacity,
                predictor=self.predictor,
                refresh_size=self.refresh_size,
                seed=self.seed,
            )
            for capacity in self.capacities
            for policy in self.policies
        ]
