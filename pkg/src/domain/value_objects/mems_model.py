"""Synthetic MEMS reference gyroscope parameters."""

from dataclasses import dataclass, asdict
from typing import Any, Dict

from ..exceptions import ValidationError


@dataclass(frozen=True)
class MemsModel:
    """Angle random walk, bias instability (Gauss-Markov) and output rate.

    Defaults are placeholders for a consumer-grade device, not measured values.
    """

    arw: float = 0.1                          # deg/sqrt(s)
    bias_instability: float = 1.0 / 3600.0    # deg/s
    sample_rate: float = 100.0                # Hz
    correlation_time: float = 100.0           # s

    def __post_init__(self):
        for name, value in asdict(self).items():
            if value < 0:
                raise ValidationError(f"{name} cannot be negative, got {value}", field=name)

        if self.sample_rate == 0:
            raise ValidationError("sample_rate must be positive", field="sample_rate")

        if self.correlation_time == 0:
            raise ValidationError("correlation_time must be positive", field="correlation_time")

    @property
    def white_sigma(self) -> float:
        """Per-sample white-noise std (deg/s)."""
        return self.arw * self.sample_rate ** 0.5

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MemsModel":
        filtered_data = {k: float(v) for k, v in data.items() if v is not None}
        return cls(**filtered_data)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
