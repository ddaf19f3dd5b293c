"""Results of spectral, stability and calibration analysis."""

from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

import numpy as np


@dataclass
class SpectralEstimate:
    """One-sided amplitude spectral density with its estimator metadata."""

    frequencies: np.ndarray
    asd: np.ndarray
    segment: int
    overlap: float
    window: str
    sample_rate: float
    unit: str = ""

    def floor(self, f_min: float = 0.0, f_max: float = np.inf) -> float:
        """Median ASD within [f_min, f_max], DC excluded."""
        mask = (self.frequencies > 0) & (self.frequencies >= f_min) & (self.frequencies <= f_max)
        return float(np.median(self.asd[mask]))

    def metadata(self) -> Dict[str, Any]:
        return {
            "segment": self.segment,
            "overlap": self.overlap,
            "window": self.window,
            "sample_rate": self.sample_rate,
            "unit": self.unit,
        }


@dataclass
class AllanCurve:
    """Overlapping Allan deviation."""

    taus: np.ndarray
    adev: np.ndarray
    counts: np.ndarray = field(default_factory=lambda: np.array([], dtype=int))


@dataclass(frozen=True)
class CalibrationResult:
    """Straight-line fit of measured vs reference rotation rate (deg/s)."""

    slope: float
    intercept: float
    r_squared: float
    slope_ci: Tuple[float, float]
    intercept_ci: Tuple[float, float]
    setpoints: int
    reference: str = "true"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "reference": self.reference,
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "slope_ci": list(self.slope_ci),
            "intercept_ci": list(self.intercept_ci),
            "setpoints": self.setpoints,
        }


@dataclass(frozen=True)
class RamseyFit:
    """Decaying cosine a·exp(-t/T2)·cos(2πf·t + phase) + offset."""

    amplitude: float
    frequency: float
    phase: float
    T2_star: float
    offset: float

    def envelope(self, t: float) -> float:
        return float(self.amplitude * np.exp(-t / self.T2_star))


@dataclass(frozen=True)
class ThermalFit:
    """Exponential thermal transient amplitude·(1 - exp(-t/tau))."""

    amplitude: float
    tau: float


@dataclass(frozen=True)
class PolarizationCalibration:
    """(q_preserve, pulse_fidelity) pair reproducing a target m_i=0 population."""

    q_preserve: float
    pulse_fidelity: float
    population: float
    sequence: Tuple[float, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q_preserve": self.q_preserve,
            "pulse_fidelity": self.pulse_fidelity,
            "population": self.population,
            "sequence": list(self.sequence),
        }
