"""Gyroscope measurement protocol.

Recursive nuclear polarization, referenced readout, double-quantum Ramsey
at alternating fringe slopes and recovery of the rotation-induced beat shift.
"""

import math
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import structlog
from scipy.optimize import brentq, curve_fit

from domain.entities.analysis import PolarizationCalibration, RamseyFit
from domain.entities.measurements import ReadoutResult
from domain.entities.spin_state import SpinState
from domain.exceptions import NumericalError, ValidationError
from domain.value_objects.decoherence import DecoherenceParams
from domain.value_objects.environment import Environment
from domain.value_objects.noise_budget import NoiseBudget
from domain.value_objects.physical_constants import PhysicalConstants
from domain.value_objects.pulse import PulseChannel, PulseSpec
from domain.value_objects.transition import MwPairing, mw_label
from domain.value_objects.working_point import RamseyWorkingPoint

from ..interfaces.evolution_strategy import EvolutionStrategy
from .dynamics import apply_pulse, free_evolve, optical_pump

logger = structlog.get_logger(__name__)

# Saturation criterion used by calibrate_polarization
SATURATION_GAIN = 2.0e-3


def _mw_channel(m_s: int) -> PulseChannel:
    return PulseChannel.MW_PLUS if m_s == 1 else PulseChannel.MW_MINUS


def _apply(
    state: SpinState,
    pulse: PulseSpec,
    env: Optional[Environment],
    strategy: Optional[EvolutionStrategy],
) -> SpinState:
    if strategy is None:
        return apply_pulse(state, pulse)
    return strategy.apply_pulse(state, pulse, env or Environment())


# ---------------------------------------------------------------------------
# Polarization
# ---------------------------------------------------------------------------

def polarization_steps(
    state: SpinState,
    n_iter: int,
    q_preserve: float,
    pulse_fidelity: float,
    pairing: MwPairing = MwPairing.SELF_CONSISTENT,
    mw_fidelity: Optional[Dict[int, float]] = None,
    env: Optional[Environment] = None,
    strategy: Optional[EvolutionStrategy] = None,
) -> Iterator[SpinState]:
    """Yield the state after each polarization iteration.

    One iteration: MW π pulses move (m_s=0, m_i=±1) into the electron
    manifold given by ``pairing``, an RF π pulse at f7.2 moves both into
    m_i=0, and optical pumping returns the electron to m_s=0.
    ``mw_fidelity`` scales the MW fidelity per electron manifold.
    """
    if n_iter < 0:
        raise ValidationError(f"n_iter cannot be negative, got {n_iter}", field="n_iter")

    scale = mw_fidelity or {}
    for _ in range(n_iter):
        for m_i in (1, -1):
            m_s = pairing.manifold_for(m_i)
            fidelity = pulse_fidelity * scale.get(m_s, 1.0)
            state = _apply(state, PulseSpec.pi(_mw_channel(m_s), mw_label(m_s, m_i), fidelity=fidelity), env, strategy)
        state = _apply(state, PulseSpec.rf72_pi(pulse_fidelity), env, strategy)
        state = optical_pump(state, q_preserve)
        yield state


def polarize_nuclear(
    state: SpinState,
    n_iter: int,
    q_preserve: float,
    pulse_fidelity: float,
    pairing: MwPairing = MwPairing.SELF_CONSISTENT,
    mw_fidelity: Optional[Dict[int, float]] = None,
    env: Optional[Environment] = None,
    strategy: Optional[EvolutionStrategy] = None,
) -> SpinState:
    """Hyperpolarize the nucleus into m_i=0 with ``n_iter`` iterations."""
    for state in polarization_steps(state, n_iter, q_preserve, pulse_fidelity, pairing, mw_fidelity, env, strategy):
        pass
    return state


def polarization_recursion(p0: float, n_iter: int, q_preserve: float, pulse_fidelity: float) -> List[float]:
    """m_i=0 population after 0..n_iter iterations with ideal-pairing gates.

    p_{k+1} = q·(p_k + F²·(1 - p_k)) + (1 - q)/3
    """
    sequence = [p0]
    for _ in range(n_iter):
        p = sequence[-1]
        sequence.append(q_preserve * (p + pulse_fidelity ** 2 * (1.0 - p)) + (1.0 - q_preserve) / 3.0)
    return sequence


def calibrate_polarization(
    target: float = 0.77,
    n_iter: int = 4,
    p0: float = 1.0 / 3.0,
    saturation_gain: float = SATURATION_GAIN,
) -> PolarizationCalibration:
    """Brute-force (q_preserve, pulse_fidelity) so that p_n hits ``target`` and saturates at n.

    Saturation means the last iteration gains at most ``saturation_gain``
    while the one before still gains more.
    """
    if n_iter < 1:
        raise ValidationError(f"n_iter must be at least 1, got {n_iter}", field="n_iter")

    fidelity, q = np.meshgrid(np.linspace(0.5, 1.0, 101), np.linspace(0.0, 1.0, 1001), indexing="ij")
    sequence = [np.full(q.shape, p0)]
    for _ in range(n_iter):
        p = sequence[-1]
        sequence.append(q * (p + fidelity ** 2 * (1.0 - p)) + (1.0 - q) / 3.0)
    populations = np.stack(sequence)
    gains = np.diff(populations, axis=0)

    feasible = np.all(gains >= -1e-12, axis=0) & (gains[-1] <= saturation_gain)
    if n_iter >= 2:
        feasible &= gains[-2] > saturation_gain
    if not np.any(feasible):
        raise NumericalError(f"No polarization parameters saturate at {n_iter} iterations")

    error = np.where(feasible, np.abs(populations[-1] - target), np.inf)
    i, j = np.unravel_index(np.argmin(error), error.shape)

    result = PolarizationCalibration(
        q_preserve=float(q[i, j]),
        pulse_fidelity=float(fidelity[i, j]),
        population=float(populations[-1, i, j]),
        sequence=tuple(float(p) for p in populations[:, i, j]),
    )
    logger.debug("polarization_calibrated", **result.to_dict())
    return result


# ---------------------------------------------------------------------------
# Readout
# ---------------------------------------------------------------------------

def referenced_readout(
    state: SpinState,
    noise: NoiseBudget,
    rng: Optional[np.random.Generator] = None,
    shot_noise: bool = True,
    manifold: int = -1,
    fidelity: float = 1.0,
    env: Optional[Environment] = None,
    strategy: Optional[EvolutionStrategy] = None,
) -> ReadoutResult:
    """Two-arm readout of the m_i=0 population against the bright-state population.

    Arm 1 is a selective MW π on the central (m_i=0) line of ``manifold``
    followed by optical readout. Arm 2 is the same preceded by an RF π at
    f5. Counts are N·(1 - C·p) with p the population moved out of m_s=0.
    The referenced signal (n2 - n1)/(C·N) spans [-1, 1], twice the range of
    the unreferenced (N - n1)/(C·N).
    """
    photons = noise.photons_per_readout
    if not photons > 0:
        raise ValidationError(f"Photon budget must be positive, got {photons}", field="photons_per_readout")
    if shot_noise and rng is None:
        raise ValidationError("Shot-noise readout needs a random generator", field="rng")

    mw_pi = PulseSpec.pi(_mw_channel(manifold), mw_label(manifold, 0), fidelity=fidelity)

    arm1 = _apply(state, mw_pi, env, strategy)
    arm2 = _apply(_apply(state, PulseSpec.rf5_pi(fidelity), env, strategy), mw_pi, env, strategy)

    counts = []
    for arm in (arm1, arm2):
        bright_fraction = 1.0 - arm.electron_populations()[0]
        expected = photons * (1.0 - noise.contrast * bright_fraction)
        counts.append(float(rng.poisson(expected)) if shot_noise else expected)

    n1, n2 = counts
    scale = noise.contrast * photons
    return ReadoutResult(
        signal=(n2 - n1) / scale,
        photons=(n1, n2),
        unreferenced_signal=(photons - n1) / scale,
    )


# ---------------------------------------------------------------------------
# Ramsey working point
# ---------------------------------------------------------------------------

def select_working_points(Omega0: float, phi0: float, target: float = 2.0e-3) -> Tuple[float, float]:
    """Steepest-slope times (t_n, t_p) nearest ``target``.

    Slope extrema sit at Omega0·t + phi0 = π/2 + kπ; even k falls (t_n),
    odd k rises (t_p). The extremum nearest ``target`` is paired with
    whichever neighbour is closer to ``target``.
    """
    if not Omega0 > 0:
        raise ValidationError(f"Omega0 must be positive, got {Omega0}", field="Omega0")

    period = 2.0 * math.pi / Omega0
    if target < period:
        raise ValidationError(
            f"Target time {target} s is shorter than one fringe period {period} s", field="target"
        )

    def extremum(k: int) -> float:
        return (0.5 * math.pi + k * math.pi - phi0) / Omega0

    k = round((Omega0 * target + phi0 - 0.5 * math.pi) / math.pi)
    before, after = extremum(k - 1), extremum(k + 1)
    if before > 0 and abs(before - target) < abs(after - target):
        partner, k_partner = before, k - 1
    else:
        partner, k_partner = after, k + 1

    times = {k: extremum(k), k_partner: partner}
    t_n = next(t for index, t in times.items() if index % 2 == 0)
    t_p = next(t for index, t in times.items() if index % 2 != 0)
    return t_n, t_p


def ramsey_signal_model(wp: RamseyWorkingPoint, omega: float, t: float) -> float:
    """S_R = a·cos(omega·t + phi0)·decay + b, decay = exp(-t/T2*) when the working point carries T2*."""
    decay = 1.0 if wp.T2_star is None else math.exp(-t / wp.T2_star)
    return wp.a * math.cos(omega * t + wp.phi0) * decay + wp.b


def recover_rotation(S_p: float, S_n: float, wp: RamseyWorkingPoint) -> float:
    """Linearised beat shift ΔΩ = (S_p - S_n) / (a·(t_p + t_n)) in rad/s."""
    amplitude = wp.effective_amplitude
    if not amplitude > 0:
        raise ValidationError(f"Fringe amplitude must be positive, got {amplitude}", field="a")
    return (S_p - S_n) / (amplitude * wp.total_time)


def recover_rotation_exact(S_p: float, S_n: float, wp: RamseyWorkingPoint) -> float:
    """Invert a·(d_p·sin(ΔΩ·t_p) + d_n·sin(ΔΩ·t_n)) = S_p - S_n on the monotonic branch."""
    if wp.T2_star is None:
        d_n = d_p = 1.0
    else:
        d_n, d_p = math.exp(-wp.t_n / wp.T2_star), math.exp(-wp.t_p / wp.T2_star)

    difference = S_p - S_n

    def residual(x: float) -> float:
        return wp.a * (d_p * math.sin(x * wp.t_p) + d_n * math.sin(x * wp.t_n)) - difference

    bound = 0.5 * math.pi / max(wp.t_n, wp.t_p)
    if residual(-bound) * residual(bound) > 0:
        raise NumericalError(f"Signal difference {difference} is outside the invertible fringe range")
    return float(brentq(residual, -bound, bound, xtol=1e-14))


# ---------------------------------------------------------------------------
# Ramsey sequence, sweep and fit
# ---------------------------------------------------------------------------

def ramsey_sequence(
    state: SpinState,
    env: Environment,
    tau: float,
    decoherence: DecoherenceParams,
    constants: PhysicalConstants = PhysicalConstants(),
    fidelity: float = 1.0,
    strategy: Optional[EvolutionStrategy] = None,
) -> SpinState:
    """RF5 π, free evolution for tau, RF5 π."""
    state = _apply(state, PulseSpec.rf5_pi(fidelity), env, strategy)
    state = free_evolve(state, env, tau, decoherence, constants)
    return _apply(state, PulseSpec.rf5_pi(fidelity), env, strategy)


def ramsey_sweep(
    state: SpinState,
    env: Environment,
    taus: Sequence[float],
    decoherence: DecoherenceParams,
    noise: NoiseBudget,
    constants: PhysicalConstants = PhysicalConstants(),
    rng: Optional[np.random.Generator] = None,
    shot_noise: bool = False,
    ramsey_fidelity: float = 1.0,
    readout_fidelity: float = 1.0,
    manifold: int = -1,
    strategy: Optional[EvolutionStrategy] = None,
) -> np.ndarray:
    """Referenced readout signal after a Ramsey sequence at every tau."""
    signals = np.empty(len(taus))
    for index, tau in enumerate(taus):
        final = ramsey_sequence(state, env, float(tau), decoherence, constants, ramsey_fidelity, strategy)
        signals[index] = referenced_readout(
            final, noise, rng, shot_noise, manifold, readout_fidelity, env, strategy
        ).signal
    return signals


def _decaying_cosine(t, amplitude, frequency, phase, T2_star, offset):
    return amplitude * np.exp(-t / T2_star) * np.cos(2.0 * np.pi * frequency * t + phase) + offset


def fit_ramsey_fringe(
    taus: Sequence[float],
    signal: Sequence[float],
    frequency_guess: Optional[float] = None,
    T2_guess: Optional[float] = None,
) -> RamseyFit:
    """Least-squares fit of a·exp(-t/T2*)·cos(2πf·t + φ) + b.

    Without a frequency guess the FFT peak of the detrended signal is used.
    Several starting phases are tried and the best residual wins.
    """
    t = np.asarray(taus, dtype=float)
    y = np.asarray(signal, dtype=float)
    if t.size < 8 or t.size != y.size:
        raise ValidationError(f"Need at least 8 matching samples to fit a fringe, got {t.size}", field="taus")

    span = float(t[-1] - t[0])
    if frequency_guess is None:
        step = float(np.mean(np.diff(t)))
        spectrum = np.abs(np.fft.rfft(y - y.mean(), n=8 * t.size))
        frequency_guess = float(np.fft.rfftfreq(8 * t.size, step)[np.argmax(spectrum[1:]) + 1])
    T2_guess = T2_guess or span

    amplitude_guess = 0.5 * float(np.ptp(y)) or 1e-3
    best = None
    for phase in (0.0, 0.5 * np.pi, np.pi, -0.5 * np.pi):
        p0 = [amplitude_guess, frequency_guess, phase, T2_guess, float(y.mean())]
        try:
            params, _ = curve_fit(
                _decaying_cosine,
                t,
                y,
                p0=p0,
                bounds=([0.0, 0.0, -2.0 * np.pi, 1e-9, -np.inf], [np.inf, np.inf, 2.0 * np.pi, np.inf, np.inf]),
                maxfev=20000,
            )
        except (RuntimeError, ValueError) as e:
            logger.debug("ramsey_fit_start_failed", phase=phase, error=str(e))
            continue
        cost = float(np.sum((_decaying_cosine(t, *params) - y) ** 2))
        if best is None or cost < best[0]:
            best = (cost, params)

    if best is None:
        raise NumericalError("Ramsey fringe fit did not converge from any starting phase")

    amplitude, frequency, phase, T2_star, offset = best[1]
    return RamseyFit(
        amplitude=float(amplitude),
        frequency=float(frequency),
        phase=float(math.remainder(phase, 2.0 * math.pi)),
        T2_star=float(T2_star),
        offset=float(offset),
    )
