"""
Synthetic workload configuration.
"""

from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Optional

from ..utils.errors import ConfigError


@dataclass(frozen=True)
class SyntheticConfig:
    """
    Parameters of the two-class Zipf workload.

    The defaults reproduce about 2x10^5 requests per 200 s epoch over a
    catalogue of 10^4 contents.
    """

    catalogue_size: int = 10000
    zipf_exponent: float = 0.8
    arrival_rate: float = 1000.0
    duration: float = 2000.0
    epoch_duration: float = 200.0
    class_split: float = 0.5
    seed: int = 0
    permute: bool = True

    @property
    def class1_size(self) -> int:
        """Number of contents with fixed popularity (ids 0 .. class1_size-1)."""
        return min(self.catalogue_size - 1, max(1, int(round(self.catalogue_size * self.class_split))))

    @property
    def class2_size(self) -> int:
        return self.catalogue_size - self.class1_size

    @classmethod
    def from_dict(cls, data: Dict[str, Any], overrides: Optional[Dict[str, Any]] = None) -> "SyntheticConfig":
        """
        Build a validated config from a JSON object.

        Args:
            data: Mapping with SyntheticConfig field names
            overrides: Values taking precedence over ``data`` (None entries ignored)

        Returns:
            Validated SyntheticConfig

        Raises:
            ConfigError: On unknown keys or invalid values
        """
        merged = dict(data)
        merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(merged) - known)
        if unknown:
            raise ConfigError(f"Unknown synthetic config keys: {', '.join(unknown)}")
        try:
            cfg = cls(
                catalogue_size=int(merged.get("catalogue_size", cls.catalogue_size)),
                zipf_exponent=float(merged.get("zipf_exponent", cls.zipf_exponent)),
                arrival_rate=float(merged.get("arrival_rate", cls.arrival_rate)),
                duration=float(merged.get("duration", cls.duration)),
                epoch_duration=float(merged.get("epoch_duration", cls.epoch_duration)),
                class_split=float(merged.get("class_split", cls.class_split)),
                seed=int(merged.get("seed", cls.seed)),
                permute=bool(merged.get("permute", cls.permute)),
            )
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid synthetic config value: {e}")
        cfg.validate()
        return cfg

    def validate(self) -> bool:
        """
        Check the workload invariants.

        Returns:
            True if valid

        Raises:
            ConfigError: If validation fails
        """
        if self.catalogue_size < 2:
            raise ConfigError("catalogue_size must be at least 2")
        if not 0.0 < self.class_split < 1.0:
            raise ConfigError("class_split must lie strictly between 0 and 1")
        if self.arrival_rate <= 0:
            raise ConfigError("arrival_rate must be positive")
        if self.zipf_exponent < 0:
            raise ConfigError("zipf_exponent must be non-negative")
        if self.duration < 0:
            raise ConfigError("duration must be non-negative")
        if self.epoch_duration <= 0:
            raise ConfigError("epoch_duration must be positive")
        return True

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
