"""
Popularity predictor configuration.
"""

from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List

from ..utils.errors import ConfigError


@dataclass(frozen=True)
class PredictorConfig:
    """
    Predictor and training parameters.

    Attributes:
        K: Epochs per feature vector (K-1 finalized epochs plus the current one)
        c: Constant of the transform F(p) = -ln(p + c)
        alpha: Leaky ReLU negative slope
        eta: Learning rate
        gamma: Learning-rate discount per epoch of replay age
        H: Number of past epoch datasets replayed at each epoch end
        T: Epoch duration in seconds
        batch_size: Requests per SGD iteration
        validation_fraction: Share of the newest dataset held out
        hidden_layers: Hidden layer widths
        max_grad_norm: Global gradient-norm clip applied before each step (0 disables)
        validation_interval: Iterations between validation points of the loss curve
        max_samples_per_epoch: Cap on samples kept per epoch dataset (oldest dropped)
    """

    K: int = 4
    c: float = 1e-15
    alpha: float = 1e-2
    eta: float = 1e-4
    gamma: float = 0.5
    H: int = 9
    T: float = 200.0
    batch_size: int = 8
    validation_fraction: float = 0.1
    hidden_layers: List[int] = field(default_factory=lambda: [128, 128])
    max_grad_norm: float = 50.0
    validation_interval: int = 50
    max_samples_per_epoch: int = 200000

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PredictorConfig":
        """
        Build a validated config from a JSON object.

        Args:
            data: Mapping with PredictorConfig field names

        Returns:
            Validated PredictorConfig

        Raises:
            ConfigError: On unknown keys or invalid values
        """
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"Unknown predictor config keys: {', '.join(unknown)}")
        defaults = cls()
        try:
            cfg = cls(
                K=int(data.get("K", defaults.K)),
                c=float(data.get("c", defaults.c)),
                alpha=float(data.get("alpha", defaults.alpha)),
                eta=float(data.get("eta", defaults.eta)),
                gamma=float(data.get("gamma", defaults.gamma)),
                H=int(data.get("H", defaults.H)),
                T=float(data.get("T", defaults.T)),
                batch_size=int(data.get("batch_size", defaults.batch_size)),
                validation_fraction=float(data.get("validation_fraction", defaults.validation_fraction)),
                hidden_layers=[int(w) for w in data.get("hidden_layers", defaults.hidden_layers)],
                max_grad_norm=float(data.get("max_grad_norm", defaults.max_grad_norm)),
                validation_interval=int(data.get("validation_interval", defaults.validation_interval)),
                max_samples_per_epoch=int(data.get("max_samples_per_epoch", defaults.max_samples_per_epoch)),
            )
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid predictor config value: {e}")
        cfg.validate()
        return cfg

    def validate(self) -> bool:
        """
        Check the predictor invariants.

        Returns:
            True if valid

        Raises:
            ConfigError: If validation fails
        """
        if self.K < 1:
            raise ConfigError("K must be at least 1")
        if self.c <= 0:
            raise ConfigError("c must be positive")
        if not 0.0 < self.gamma <= 1.0:
            raise ConfigError("gamma must lie in (0, 1]")
        if self.H < 0:
            raise ConfigError("H must be non-negative")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be at least 1")
        if self.T <= 0:
            raise ConfigError("T must be positive")
        if self.alpha < 0:
            raise ConfigError("alpha must be non-negative")
        if self.eta < 0:
            raise ConfigError("eta must be non-negative")
        if not 0.0 <= self.validation_fraction < 1.0:
            raise ConfigError("validation_fraction must lie in [0, 1)")
        if any(width < 1 for width in self.hidden_layers):
            raise ConfigError("hidden layer widths must be positive")
        if self.max_grad_norm < 0:
            raise ConfigError("max_grad_norm must be non-negative")
        if self.validation_interval < 1:
            raise ConfigError("validation_interval must be at least 1")
        if self.max_samples_per_epoch < 1:
            raise ConfigError("max_samples_per_epoch must be at least 1")
        return True

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
