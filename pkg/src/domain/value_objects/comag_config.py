"""Comagnetometer / cothermometer configuration."""

import math
from dataclasses import dataclass, asdict, replace
from typing import Any, Dict

from ..exceptions import ValidationError


def _is_integer(value: float, tol: float = 1e-9) -> bool:
    return abs(value - round(value)) <= tol * max(1.0, abs(value))


@dataclass(frozen=True)
class ComagConfig:
    """Square-wave FM lock-in settings for the two electron lines."""

    # Modulation
    f_mod_minus: float = 2.0e3
    f_mod_plus: float = 4.0e3
    span: float = 1.0e6
    acquisition: float = 3.0e-3
    sample_rate: float = 64.0e3

    # Lineshape
    line_width: float = 1.0e6
    line_contrast: float = 0.02
    photons_per_sample: float = 1.0e9

    # Tracking loop
    enabled: bool = True
    loop_gain: float = 1.0
    divergence_steps: int = 5
    strict: bool = False
    staleness: float = 0.05

    def __post_init__(self):
        """Validate the lock-in configuration."""
        for name in ("f_mod_minus", "f_mod_plus", "span", "acquisition", "sample_rate",
                     "line_width", "photons_per_sample", "staleness"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be positive, got {value}", field=name)

        if not 0.0 < self.line_contrast < 1.0:
            raise ValidationError(
                f"line_contrast must be between 0 and 1, got {self.line_contrast}", field="line_contrast"
            )

        if not 0.0 < self.loop_gain <= 2.0:
            raise ValidationError(f"loop_gain must be in (0, 2], got {self.loop_gain}", field="loop_gain")

        if self.divergence_steps < 1:
            raise ValidationError(
                f"divergence_steps must be at least 1, got {self.divergence_steps}", field="divergence_steps"
            )

        f_low = min(self.f_mod_minus, self.f_mod_plus)
        f_high = max(self.f_mod_minus, self.f_mod_plus)

        if not _is_integer(self.acquisition * f_low):
            raise ValidationError(
                f"acquisition ({self.acquisition} s) must span an integer number of "
                f"{f_low} Hz modulation cycles",
                field="acquisition",
            )

        ratio = f_high / f_low
        if not (_is_integer(ratio) and round(ratio) % 2 == 0):
            raise ValidationError(
                f"Modulation frequencies must differ by an even integer factor, got {ratio:g}",
                field="f_mod_plus",
            )

        if not _is_integer(self.sample_rate / (2.0 * f_high)):
            raise ValidationError(
                f"sample_rate must hold an integer number of samples per {f_high} Hz half-cycle",
                field="sample_rate",
            )

    @property
    def samples_per_acquisition(self) -> int:
        return int(round(self.acquisition * self.sample_rate))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ComagConfig":
        filtered_data = {k: v for k, v in data.items() if v is not None}
        return cls(**filtered_data)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def with_updates(self, **updates) -> "ComagConfig":
        return replace(self, **updates)
