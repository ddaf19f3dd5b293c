"""Thermal transient model of the diamond after laser turn-on."""

import math
from dataclasses import dataclass, asdict, replace
from typing import Any, Dict

from ..exceptions import ValidationError


@dataclass(frozen=True)
class ThermalModel:
    """Exponential approach of the zero-field splitting to its warm value."""

    amplitude: float = 300e3      # Hz, asymptotic shift of D
    tau: float = 54.0             # s
    dT_total: float = -4.0        # K
    discard: float = 200.0        # s of startup excluded from analysis
    baseline_window: float = 10.0  # s after discard used for the field baseline

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value}", field=name)

        if self.tau <= 0:
            raise ValidationError(f"tau must be positive, got {self.tau}", field="tau")

        if self.discard < 0:
            raise ValidationError(f"discard cannot be negative, got {self.discard}", field="discard")

        if self.baseline_window <= 0:
            raise ValidationError(
                f"baseline_window must be positive, got {self.baseline_window}", field="baseline_window"
            )

        if (self.amplitude == 0) != (self.dT_total == 0):
            raise ValidationError("amplitude and dT_total must both be zero or both non-zero", field="dT_total")

    @property
    def coefficient(self) -> float:
        """Implied dD/dT (Hz/K); zero for an inactive model."""
        if self.dT_total == 0:
            return 0.0
        return self.amplitude / self.dT_total

    def is_consistent_with(self, dD_dT: float, rtol: float = 0.05) -> bool:
        """True when amplitude / dT_total matches the given thermal coefficient."""
        if self.amplitude == 0:
            return True
        return abs(self.coefficient - dD_dT) <= rtol * abs(dD_dT)

    @classmethod
    def inactive(cls, discard: float = 0.0, baseline_window: float = 10.0) -> "ThermalModel":
        return cls(amplitude=0.0, dT_total=0.0, discard=discard, baseline_window=baseline_window)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ThermalModel":
        filtered_data = {k: float(v) for k, v in data.items() if v is not None}
        return cls(**filtered_data)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def with_updates(self, **updates) -> "ThermalModel":
        return replace(self, **updates)
