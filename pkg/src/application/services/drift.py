"""Thermal transient model and comagnetometer compensation of the raw beat shift."""

import math
from typing import Iterable, Iterator, Sequence, TypeVar, Union

import numpy as np
import structlog
from scipy.optimize import curve_fit

from domain.entities.analysis import ThermalFit
from domain.entities.measurements import ComagReading
from domain.exceptions import NumericalError, StaleReadingError, ValidationError
from domain.value_objects.physical_constants import PhysicalConstants
from domain.value_objects.thermal_model import ThermalModel

logger = structlog.get_logger(__name__)

TWO_PI = 2.0 * math.pi

Record = TypeVar("Record")


def thermal_shift(m: ThermalModel, t: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Shift of D (Hz) at time t after laser turn-on: amplitude·(1 - exp(-t/tau))."""
    t_array = np.asarray(t, dtype=float)
    if np.any(t_array < 0):
        raise ValidationError(f"Time since turn-on cannot be negative, got {t}", field="t")
    shift = m.amplitude * -np.expm1(-t_array / m.tau)
    return float(shift) if shift.ndim == 0 else shift


def temperature_offset(m: ThermalModel, t: float, c: PhysicalConstants) -> float:
    """Temperature offset (K) producing thermal_shift through dD/dT."""
    if c.dD_dT == 0:
        return 0.0
    return thermal_shift(m, t) / c.dD_dT


def compensate(
    delta_omega_raw: float,
    comag: ComagReading,
    baseline_B: float,
    c: PhysicalConstants,
) -> float:
    """Rotation rate (rad/s) with the field excursion since the baseline removed.

    Ω_rot = ΔΩ_raw/2 - 2π·γn·(B_est - baseline_B); the factor ½ undoes the
    Δm_I = 2 doubling of the DQ phase.
    """
    return 0.5 * delta_omega_raw - TWO_PI * c.gamma_n * (comag.B_est - baseline_B)


def check_fresh(comag: ComagReading, t: float, staleness: float) -> ComagReading:
    """Return the reading if it is at most ``staleness`` seconds older than t."""
    age = t - comag.t
    if age > staleness:
        raise StaleReadingError(f"Comagnetometer reading from t={comag.t:.4f} s is {age:.4f} s old at t={t:.4f} s")
    return comag


def startup_gate(records: Iterable[Record], m: ThermalModel) -> Iterator[Record]:
    """Drop records with t < discard; the boundary itself passes."""
    for record in records:
        if record.t >= m.discard:
            yield record


def establish_baseline(readings: Sequence[ComagReading], m: ThermalModel) -> float:
    """Mean comagnetometer field over [discard, discard + baseline_window).

    Falls back to the first reading after the discard when the window is empty.
    """
    window_end = m.discard + m.baseline_window
    in_window = [r.B_est for r in readings if m.discard <= r.t < window_end]
    if in_window:
        return float(np.mean(in_window))

    after = [r for r in readings if r.t >= m.discard]
    if not after:
        raise ValidationError(
            f"No comagnetometer readings after the {m.discard} s discard window", field="readings"
        )
    logger.warning("baseline_window_empty", discard=m.discard, used_t=after[0].t)
    return after[0].B_est


def _transient(t, amplitude, tau):
    return amplitude * -np.expm1(-t / tau)


def fit_thermal_transient(t: Sequence[float], shift: Sequence[float]) -> ThermalFit:
    """Fit amplitude·(1 - exp(-t/tau)) to a measured line shift."""
    t = np.asarray(t, dtype=float)
    shift = np.asarray(shift, dtype=float)
    if t.size < 3 or t.size != shift.size:
        raise ValidationError(f"Need at least 3 matching samples, got {t.size}", field="t")

    span = float(t.max() - t.min())
    if span <= 0:
        raise ValidationError("Transient samples must span a positive time", field="t")

    try:
        params, _ = curve_fit(_transient, t, shift, p0=[float(shift[-1]) or 1.0, span / 5.0], maxfev=10000)
    except RuntimeError as e:
        raise NumericalError(f"Failed to fit thermal transient: {e}") from e

    amplitude, tau = params
    if not (np.isfinite(amplitude) and np.isfinite(tau) and tau > 0):
        raise NumericalError(f"Thermal transient fit is not physical: amplitude={amplitude}, tau={tau}")
    return ThermalFit(amplitude=float(amplitude), tau=float(tau))
