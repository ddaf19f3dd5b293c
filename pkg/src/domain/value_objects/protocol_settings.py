"""Measurement protocol settings."""

import math
from dataclasses import dataclass, replace
from typing import Any, Dict, Optional

from ..exceptions import ValidationError
from .transition import MwPairing


@dataclass(frozen=True)
class ProtocolSettings:
    """Settings of the polarize / Ramsey / readout cycle."""

    # Polarization
    n_iter: int = 4
    q_preserve: float = 0.701
    pulse_fidelity: float = 0.9
    pairing: MwPairing = MwPairing.SELF_CONSISTENT

    # Ramsey and readout pulses
    ramsey_fidelity: float = 1.0
    readout_fidelity: float = 1.0
    readout_manifold: int = -1

    # Working point
    target_time: float = 2.0e-3
    phi0: Optional[float] = 0.0      # None: take the phase from the fringe fit
    calibration_points: int = 64

    # Drive strengths (Hz)
    mw_rabi: float = 100e3
    rf_rabi: float = 50e3

    # Cycle time budget (s)
    polarization_duration: float = 200e-6
    readout_duration: float = 20e-6

    def __post_init__(self):
        """Validate protocol settings."""
        if isinstance(self.pairing, str):
            object.__setattr__(self, "pairing", MwPairing(self.pairing))

        if self.n_iter < 0:
            raise ValidationError(f"n_iter cannot be negative, got {self.n_iter}", field="n_iter")

        for name in ("q_preserve", "pulse_fidelity", "ramsey_fidelity", "readout_fidelity"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name} must be between 0 and 1, got {value}", field=name)

        if self.readout_manifold not in (-1, 1):
            raise ValidationError(
                f"readout_manifold must be -1 or +1, got {self.readout_manifold}", field="readout_manifold"
            )

        for name in ("target_time", "mw_rabi", "rf_rabi"):
            value = getattr(self, name)
            if not value > 0:
                raise ValidationError(f"{name} must be positive, got {value}", field=name)

        for name in ("polarization_duration", "readout_duration"):
            value = getattr(self, name)
            if value < 0:
                raise ValidationError(f"{name} cannot be negative, got {value}", field=name)

        if self.phi0 is not None and not math.isfinite(self.phi0):
            raise ValidationError(f"phi0 must be finite, got {self.phi0}", field="phi0")

        if self.calibration_points < 8:
            raise ValidationError(
                f"calibration_points must be at least 8, got {self.calibration_points}", field="calibration_points"
            )

    def shot_time(self, tau: float) -> float:
        """Duration of one polarize / evolve / readout shot."""
        return self.polarization_duration + tau + self.readout_duration

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ProtocolSettings":
        filtered_data = {k: v for k, v in data.items() if v is not None or k == "phi0"}
        return cls(**filtered_data)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_iter": self.n_iter,
            "q_preserve": self.q_preserve,
            "pulse_fidelity": self.pulse_fidelity,
            "pairing": self.pairing.value,
            "ramsey_fidelity": self.ramsey_fidelity,
            "readout_fidelity": self.readout_fidelity,
            "readout_manifold": self.readout_manifold,
            "target_time": self.target_time,
            "phi0": self.phi0,
            "calibration_points": self.calibration_points,
            "mw_rabi": self.mw_rabi,
            "rf_rabi": self.rf_rabi,
            "polarization_duration": self.polarization_duration,
            "readout_duration": self.readout_duration,
        }

    def with_updates(self, **updates) -> "ProtocolSettings":
        return replace(self, **updates)
