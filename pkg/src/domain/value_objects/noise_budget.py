"""Photon budget of the optical readout."""

import math
from dataclasses import dataclass, asdict, replace
from typing import Any, Dict

from ..exceptions import ValidationError


@dataclass(frozen=True)
class NoiseBudget:
    """Photons collected per readout arm, readout contrast and record period."""

    photons_per_readout: float = 1.0e8
    contrast: float = 0.02
    cycle_time: float = 1.0e-2

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be positive, got {value}", field=name)

        if self.contrast >= 1.0:
            raise ValidationError(f"contrast must be below 1, got {self.contrast}", field="contrast")

    @property
    def signal_sigma(self) -> float:
        """Shot-noise std of one referenced readout signal (normalised units)."""
        return math.sqrt(2.0) / (self.contrast * math.sqrt(self.photons_per_readout))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "NoiseBudget":
        filtered_data = {k: float(v) for k, v in data.items() if v is not None}
        return cls(**filtered_data)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def with_updates(self, **updates) -> "NoiseBudget":
        return replace(self, **updates)
