"""Shot-noise propagation, spectral estimation and stability metrics."""

import math
from typing import Optional, Sequence

import numpy as np
import structlog
from scipy import signal

from domain.entities.analysis import AllanCurve, SpectralEstimate
from domain.entities.time_series import TimeSeries
from domain.exceptions import NumericalError, ValidationError
from domain.value_objects.noise_budget import NoiseBudget
from domain.value_objects.physical_constants import PhysicalConstants
from domain.value_objects.working_point import RamseyWorkingPoint

from .comag import equivalent_rotation_noise
from .protocol import ramsey_signal_model

logger = structlog.get_logger(__name__)

DEFAULT_WINDOW = "hann"
DEFAULT_OVERLAP = 0.5


def shot_noise_sigma(n: NoiseBudget, wp: RamseyWorkingPoint) -> float:
    """Per-cycle std (rad/s) of the recovered beat shift from photon shot noise.

    σ_ΔΩ = σ_S·√2 / (a·(t_p + t_n)), σ_S the std of one referenced readout.
    """
    return n.signal_sigma * math.sqrt(2.0) / (wp.effective_amplitude * wp.total_time)


def predicted_asd_floor(n: NoiseBudget, wp: RamseyWorkingPoint) -> float:
    """White ASD (rad/s/√Hz) of a beat-shift series recorded once per ``cycle_time``."""
    return shot_noise_sigma(n, wp) * math.sqrt(2.0 * n.cycle_time)


def simulate_shot_noise(
    budget: NoiseBudget,
    wp: RamseyWorkingPoint,
    n_cycles: int,
    rng: np.random.Generator,
    delta_omega: float = 0.0,
) -> np.ndarray:
    """Monte Carlo beat-shift estimates from Poisson-sampled referenced readouts.

    Both readout arms of each shot are drawn from their expected photon
    counts; the arm populations are split symmetrically about the expected
    signal.
    """
    if n_cycles < 1:
        raise ValidationError(f"n_cycles must be positive, got {n_cycles}", field="n_cycles")

    photons = budget.photons_per_readout
    contrast = budget.contrast

    def readout(expected_signal: float) -> np.ndarray:
        arm1 = photons * (1.0 - contrast * 0.5 * (1.0 + expected_signal))
        arm2 = photons * (1.0 - contrast * 0.5 * (1.0 - expected_signal))
        n1 = rng.poisson(arm1, size=n_cycles)
        n2 = rng.poisson(arm2, size=n_cycles)
        return (n2 - n1) / (contrast * photons)

    omega = wp.Omega0 + delta_omega
    s_n = readout(ramsey_signal_model(wp, omega, wp.t_n))
    s_p = readout(ramsey_signal_model(wp, omega, wp.t_p))
    return (s_p - s_n) / (wp.effective_amplitude * wp.total_time)


def welch_asd(
    series: TimeSeries,
    segment: int,
    overlap: float = DEFAULT_OVERLAP,
    window: str = DEFAULT_WINDOW,
) -> SpectralEstimate:
    """One-sided amplitude spectral density by Welch's averaged periodogram."""
    if segment < 2:
        raise ValidationError(f"Segment length must be at least 2, got {segment}", field="segment")
    if not 0.0 <= overlap < 1.0:
        raise ValidationError(f"Overlap must be in [0, 1), got {overlap}", field="overlap")
    if len(series) < 2 * segment:
        raise ValidationError(
            f"Series '{series.channel}' has {len(series)} samples; need at least {2 * segment}",
            field="series",
        )

    sample_rate = series.sample_rate
    frequencies, psd = signal.welch(
        series.value,
        fs=sample_rate,
        window=window,
        nperseg=segment,
        noverlap=int(overlap * segment),
        scaling="density",
    )
    return SpectralEstimate(
        frequencies=frequencies,
        asd=np.sqrt(psd),
        segment=segment,
        overlap=overlap,
        window=window,
        sample_rate=sample_rate,
        unit=f"{series.unit}/rtHz" if series.unit else "",
    )


def field_asd_to_rotation(estimate: SpectralEstimate, c: PhysicalConstants) -> SpectralEstimate:
    """Convert a field ASD (T/√Hz) bin by bin to equivalent rotation (deg/s/√Hz)."""
    return SpectralEstimate(
        frequencies=estimate.frequencies,
        asd=equivalent_rotation_noise(estimate.asd, c),
        segment=estimate.segment,
        overlap=estimate.overlap,
        window=estimate.window,
        sample_rate=estimate.sample_rate,
        unit="deg/s/rtHz",
    )


def _octave_factors(n_samples: int) -> np.ndarray:
    factors = []
    m = 1
    while 3 * m < n_samples:
        factors.append(m)
        m *= 2
    return np.array(factors, dtype=int)


def allan_deviation(series: TimeSeries, taus: Optional[Sequence[float]] = None) -> AllanCurve:
    """Overlapping Allan deviation.

    ``taus`` are rounded to whole sample multiples; averaging factors m with
    fewer than three samples per bin (3·m ≥ N) are omitted. Without ``taus``
    an octave grid is used.
    """
    sample_rate = series.sample_rate
    y = series.value
    n_samples = y.size

    if taus is None:
        factors = _octave_factors(n_samples)
    else:
        factors = np.unique(np.maximum(np.round(np.asarray(taus, dtype=float) * sample_rate), 1).astype(int))
        factors = factors[3 * factors < n_samples]

    phase = np.concatenate(([0.0], np.cumsum(y))) / sample_rate

    taus_out, adev, counts = [], [], []
    for m in factors:
        tau = m / sample_rate
        second_difference = phase[2 * m:] - 2.0 * phase[m:-m] + phase[:-2 * m]
        variance = np.sum(second_difference ** 2) / (2.0 * tau ** 2 * second_difference.size)
        taus_out.append(tau)
        adev.append(math.sqrt(variance))
        counts.append(second_difference.size)

    return AllanCurve(taus=np.array(taus_out), adev=np.array(adev), counts=np.array(counts, dtype=int))


def loglog_slope(curve: AllanCurve, tau_min: float = 0.0, tau_max: float = math.inf) -> float:
    """Slope of log(adev) against log(tau) within [tau_min, tau_max]."""
    mask = (curve.taus >= tau_min) & (curve.taus <= tau_max)
    if np.count_nonzero(mask) < 2:
        raise ValidationError("Need at least two Allan points in range to fit a slope", field="taus")
    if np.any(curve.adev[mask] <= 0):
        raise NumericalError("Allan deviation must be positive to fit a log-log slope")
    slope, _ = np.polyfit(np.log(curve.taus[mask]), np.log(curve.adev[mask]), 1)
    return float(slope)


def dominant_frequency(series: TimeSeries, pad_factor: int = 8) -> float:
    """Frequency (Hz) of the strongest spectral line, DC excluded.

    Hann-windowed, zero-padded FFT with a parabolic fit through the peak bin
    and its neighbours on the log magnitude.
    """
    sample_rate = series.sample_rate
    values = series.value - series.value.mean()
    n_fft = pad_factor * values.size

    spectrum = np.abs(np.fft.rfft(values * signal.get_window("hann", values.size), n=n_fft))
    frequencies = np.fft.rfftfreq(n_fft, 1.0 / sample_rate)

    peak = int(np.argmax(spectrum[1:])) + 1
    if peak >= spectrum.size - 1:
        return float(frequencies[peak])

    left, centre, right = np.log(spectrum[peak - 1:peak + 2] + 1e-300)
    denominator = left - 2.0 * centre + right
    offset = 0.5 * (left - right) / denominator if denominator != 0 else 0.0
    return float(frequencies[peak] + offset * (frequencies[1] - frequencies[0]))
