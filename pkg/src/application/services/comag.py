"""ODMR lineshape model and square-wave FM lock-in demodulation."""

from typing import Optional, Union

import numpy as np
import structlog

from domain.entities.time_series import TimeSeries
from domain.exceptions import ValidationError
from domain.value_objects.comag_config import ComagConfig
from domain.value_objects.odmr_lineshape import OdmrLineshape
from domain.value_objects.physical_constants import PhysicalConstants

logger = structlog.get_logger(__name__)

ArrayLike = Union[float, np.ndarray]

# Half-cycle boundaries are nudged by this fraction of a half-cycle
_EDGE_EPSILON = 1e-9

# Tolerance on the number of modulation cycles in a window
CYCLE_TOLERANCE = 1e-6


def lorentzian(x: ArrayLike, width: float) -> ArrayLike:
    """Lorentzian with unit peak and full width at half maximum ``width``."""
    return 1.0 / (1.0 + (2.0 * np.asarray(x, dtype=float) / width) ** 2)


def odmr_response(l: OdmrLineshape, f: ArrayLike) -> ArrayLike:
    """Relative fluorescence 1 - Σ contrast·weight·L(f - center)."""
    f = np.asarray(f, dtype=float)
    dip = np.zeros_like(f)
    for center, weight in zip(l.centers, l.weights):
        dip = dip + weight * lorentzian(f - center, l.width)
    response = 1.0 - l.contrast * dip
    return float(response) if response.ndim == 0 else response


def square_wave_reference(time: np.ndarray, f_mod: float, t0: float = 0.0) -> np.ndarray:
    """+1 during the first half of every modulation cycle after t0, -1 during the second."""
    half_cycles = np.floor((np.asarray(time, dtype=float) - t0) * 2.0 * f_mod + _EDGE_EPSILON)
    return np.where(half_cycles % 2 == 0, 1.0, -1.0)


def carrier_frequency(time: np.ndarray, center: float, span: float, f_mod: float, t0: float = 0.0) -> np.ndarray:
    """Square-wave FM carrier center ± span/2."""
    return center + 0.5 * span * square_wave_reference(time, f_mod, t0)


def fm_demodulate(samples: TimeSeries, f_mod: float) -> float:
    """mean(samples in +span/2 half-cycles) - mean(samples in -span/2 half-cycles).

    Positive when the carrier sits above the line center.
    """
    if len(samples) < 2:
        raise ValidationError("Need at least two samples to demodulate", field="samples")

    sample_rate = samples.sample_rate
    cycles = len(samples) * f_mod / sample_rate
    if abs(cycles - round(cycles)) > CYCLE_TOLERANCE or round(cycles) < 1:
        raise ValidationError(
            f"Samples cover {cycles:.6f} modulation cycles at {f_mod} Hz; need a whole number",
            field="samples",
        )

    reference = square_wave_reference(samples.time, f_mod, samples.time[0])
    return float(samples.value[reference > 0].mean() - samples.value[reference < 0].mean())


def dispersion_contour(lineshape: OdmrLineshape, span: float, freqs: ArrayLike) -> np.ndarray:
    """Noise-free lock-in output versus carrier center frequency."""
    freqs = np.asarray(freqs, dtype=float)
    return odmr_response(lineshape, freqs + 0.5 * span) - odmr_response(lineshape, freqs - 0.5 * span)


def discriminator_slope(lineshape: OdmrLineshape, center: float, span: float, step: float = 1.0e3) -> float:
    """d(lock-in output)/d(carrier) at ``center`` in 1/Hz."""
    upper, lower = dispersion_contour(lineshape, span, [center + step, center - step])
    return float((upper - lower) / (2.0 * step))


def synthesize_acquisition(
    lineshape: OdmrLineshape,
    f_minus: float,
    f_plus: float,
    config: ComagConfig,
    t0: float = 0.0,
    rng: Optional[np.random.Generator] = None,
) -> TimeSeries:
    """Fluorescence of one acquisition window with both lines probed at once.

    The m_s=-1 carrier is modulated at ``f_mod_minus`` and the m_s=+1 carrier
    at ``f_mod_plus``; both dips land on one photodetector channel. With a
    generator the samples carry Poisson noise at ``photons_per_sample``.
    """
    n_samples = config.samples_per_acquisition
    time = t0 + np.arange(n_samples) / config.sample_rate

    probe_minus = carrier_frequency(time, f_minus, config.span, config.f_mod_minus, t0)
    probe_plus = carrier_frequency(time, f_plus, config.span, config.f_mod_plus, t0)
    response = odmr_response(lineshape, probe_minus) + odmr_response(lineshape, probe_plus) - 1.0

    if rng is not None:
        photons = config.photons_per_sample
        response = rng.poisson(photons * response) / photons

    return TimeSeries(time=time, value=response, channel="fluorescence", unit="relative")


def equivalent_rotation_noise(dB: ArrayLike, c: PhysicalConstants) -> ArrayLike:
    """Magnetic field (T) expressed as the rotation rate (deg/s) giving the same nuclear phase."""
    return dB * c.gamma_n * 360.0


def equivalent_field(rate_dps: ArrayLike, c: PhysicalConstants) -> ArrayLike:
    """Inverse of equivalent_rotation_noise: deg/s to T."""
    return rate_dps / (c.gamma_n * 360.0)


def line_center_estimate(f_minus: float, f_plus: float, c: PhysicalConstants) -> tuple:
    """(B_z in T, dT in K) from the two m_i=0 electron lines.

    The nuclear Zeeman term is neglected; its relative bias is below γn/γe.
    """
    B = (f_plus - f_minus) / (2.0 * c.gamma_e)
    if c.dD_dT == 0:
        return B, 0.0
    dT = (0.5 * (f_plus + f_minus) - c.D) / c.dD_dT
    return B, dT
