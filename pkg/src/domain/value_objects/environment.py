"""Environment seen by the sensor."""

import math
from dataclasses import dataclass, replace
from typing import Any, Dict

from ..exceptions import ValidationError

# Turntable limit, 120 deg/s
MAX_ROTATION_RATE = 2.0 * math.pi / 3.0


@dataclass(frozen=True)
class Environment:
    """Magnetic field, temperature offset, rotation rate and wall-clock time."""

    B_z: float = 1.17e-3      # T, along the NV axis
    dT: float = 0.0           # K, offset from the reference temperature
    Omega: float = 0.0        # rad/s, about the NV axis
    t: float = 0.0            # s

    def __post_init__(self):
        """Validate the environment."""
        for name in ("B_z", "dT", "Omega", "t"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value}", field=name)

    @property
    def omega_dps(self) -> float:
        """Rotation rate in degrees per second."""
        return math.degrees(self.Omega)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Environment":
        """Create an Environment from a dictionary (rotation may be given in deg/s)."""
        filtered_data = {k: v for k, v in data.items() if v is not None}
        if "omega_dps" in filtered_data:
            filtered_data["Omega"] = math.radians(float(filtered_data.pop("omega_dps")))
        return cls(**{k: float(v) for k, v in filtered_data.items()})

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a dictionary."""
        return {"B_z": self.B_z, "dT": self.dT, "Omega": self.Omega, "t": self.t}

    def with_updates(self, **updates) -> "Environment":
        """Return a copy with updated values."""
        return replace(self, **updates)
