"""Physical constants of the NV electron / 14N nuclear spin system."""

import math
from dataclasses import dataclass, asdict, replace
from typing import Any, Dict

from ..exceptions import ValidationError


@dataclass(frozen=True)
class PhysicalConstants:
    """Ground-state spin Hamiltonian parameters.

    Frequencies are stored in Hz and gyromagnetic ratios in Hz/T. The 2π
    conversion to angular units happens where the Hamiltonian is built.
    """

    # Electron
    D: float = 2.870e9
    gamma_e: float = 28.024e9
    dD_dT: float = -75e3

    # Nucleus
    Q: float = -4.945e6
    gamma_n: float = 3.077e6
    dQ_dT: float = 0.0

    # Hyperfine
    A_par: float = -2.162e6
    A_perp: float = -2.70e6

    def __post_init__(self):
        """Validate the constants."""
        for name, value in asdict(self).items():
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value}", field=name)

        if self.gamma_e <= 0:
            raise ValidationError(f"gamma_e must be positive, got {self.gamma_e}", field="gamma_e")

        if self.gamma_n <= 0:
            raise ValidationError(f"gamma_n must be positive, got {self.gamma_n}", field="gamma_n")

        if self.gamma_e / self.gamma_n <= 1e3:
            raise ValidationError(
                f"gamma_e / gamma_n must exceed 1e3, got {self.gamma_e / self.gamma_n:.1f}",
                field="gamma_n",
            )

    @property
    def f5_nominal(self) -> float:
        """Nuclear transition frequency inside the m_s=0 manifold at zero field (Hz)."""
        return abs(self.Q)

    @property
    def f72_nominal(self) -> float:
        """Nuclear transition frequency shared by both m_s=±1 manifolds at zero field (Hz)."""
        return abs(self.Q + self.A_par)

    def d_at(self, dT: float) -> float:
        """Zero-field splitting at temperature offset dT (Hz)."""
        return self.D + self.dD_dT * dT

    def q_at(self, dT: float) -> float:
        """Quadrupole splitting at temperature offset dT (Hz)."""
        return self.Q + self.dQ_dT * dT

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PhysicalConstants":
        """Create PhysicalConstants from a dictionary."""
        filtered_data = {k: float(v) for k, v in data.items() if v is not None}
        return cls(**filtered_data)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a dictionary."""
        return asdict(self)

    def with_updates(self, **updates) -> "PhysicalConstants":
        """Return a copy with updated values."""
        return replace(self, **updates)
