"""Ramsey working point value object."""

import math
from dataclasses import dataclass, replace
from typing import Optional

from ..exceptions import ValidationError

LATTICE_TOLERANCE = 1e-6


def lattice_residual(phase: float, offset: float) -> float:
    """Distance (rad) of ``phase`` from the nearest point of the lattice offset + 2πN."""
    return abs(math.remainder(phase - offset, 2.0 * math.pi))


@dataclass(frozen=True)
class RamseyWorkingPoint:
    """Alternating-slope working point of the DQ Ramsey fringe.

    The fringe is S(t) = a·cos(Omega0·t + phi0) + b. ``t_n`` sits on a falling
    slope extremum, ``t_p`` on a rising one. When ``T2_star`` is set the
    oscillating term decays as exp(-t/T2_star) in ramsey_signal_model.
    """

    Omega0: float
    phi0: float
    t_n: float
    t_p: float
    a: float = 0.5
    b: float = 0.5
    T2_star: Optional[float] = None

    def __post_init__(self):
        if not self.Omega0 > 0:
            raise ValidationError(f"Omega0 must be positive, got {self.Omega0}", field="Omega0")

        if not self.a > 0:
            raise ValidationError(f"Fringe amplitude a must be positive, got {self.a}", field="a")

        if self.t_n <= 0 or self.t_p <= 0:
            raise ValidationError(f"Working times must be positive, got t_n={self.t_n}, t_p={self.t_p}")

        if lattice_residual(self.Omega0 * self.t_n + self.phi0, 0.5 * math.pi) > LATTICE_TOLERANCE:
            raise ValidationError(f"t_n={self.t_n} is not on a falling slope extremum", field="t_n")

        if lattice_residual(self.Omega0 * self.t_p + self.phi0, 1.5 * math.pi) > LATTICE_TOLERANCE:
            raise ValidationError(f"t_p={self.t_p} is not on a rising slope extremum", field="t_p")

        if self.T2_star is not None and not self.T2_star > 0:
            raise ValidationError(f"T2_star must be positive, got {self.T2_star}", field="T2_star")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.Omega0

    @property
    def total_time(self) -> float:
        return self.t_n + self.t_p

    @property
    def effective_amplitude(self) -> float:
        """Fringe amplitude at the mean working time, decay included."""
        if self.T2_star is None:
            return self.a
        return self.a * math.exp(-0.5 * self.total_time / self.T2_star)

    def with_updates(self, **updates) -> "RamseyWorkingPoint":
        return replace(self, **updates)
