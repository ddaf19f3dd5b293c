"""Alternating-slope gyroscope cycle."""

import math
from typing import Callable, Dict, Iterator, Optional, Tuple

import numpy as np
import structlog

from domain.entities.analysis import RamseyFit
from domain.entities.measurements import GyroSample
from domain.entities.spin_state import SpinState
from domain.exceptions import NumericalError, ValidationError
from domain.value_objects.decoherence import DecoherenceParams
from domain.value_objects.environment import Environment
from domain.value_objects.noise_budget import NoiseBudget
from domain.value_objects.physical_constants import PhysicalConstants
from domain.value_objects.protocol_settings import ProtocolSettings
from domain.value_objects.working_point import RamseyWorkingPoint

from ..interfaces.evolution_strategy import EvolutionStrategy
from .protocol import (
    fit_ramsey_fringe,
    polarize_nuclear,
    ramsey_sequence,
    ramsey_sweep,
    recover_rotation,
    referenced_readout,
    select_working_points,
)

logger = structlog.get_logger(__name__)

TWO_PI = 2.0 * math.pi


def nominal_beat(constants: PhysicalConstants, env: Environment) -> float:
    """DQ beat frequency 2·(2π·γn·B_z + Ω) in rad/s."""
    return 2.0 * (TWO_PI * constants.gamma_n * env.B_z + env.Omega)


class GyroCycleRunner:
    """Polarize, RF5 π, free evolution at t_n or t_p, RF5 π, referenced readout.

    ``calibrate`` must run first: it sweeps the fringe around the working
    times and fixes a, b and the working point. Each ``measure`` call takes
    one shot on the falling slope and one on the rising slope and returns
    the linearised beat shift.
    """

    def __init__(
        self,
        constants: PhysicalConstants,
        protocol: ProtocolSettings,
        decoherence: DecoherenceParams,
        noise: NoiseBudget,
        shot_noise: bool = True,
        strategy: Optional[EvolutionStrategy] = None,
    ):
        self.constants = constants
        self.protocol = protocol
        self.decoherence = decoherence
        self.noise = noise
        self.shot_noise = shot_noise
        self.strategy = strategy
        self.working_point: Optional[RamseyWorkingPoint] = None
        self.fringe_fit: Optional[RamseyFit] = None
        self._polarized: Dict[Tuple[float, ...], SpinState] = {}

    def polarized_state(self, mw_fidelity: Optional[Dict[int, float]] = None, env: Optional[Environment] = None) -> SpinState:
        """Hyperpolarized starting state, cached per MW fidelity."""
        mw_fidelity = mw_fidelity or {}
        key = tuple(round(mw_fidelity.get(m_s, 1.0), 6) for m_s in (1, -1))
        if key not in self._polarized:
            settings = self.protocol
            self._polarized[key] = polarize_nuclear(
                SpinState.thermal_nuclear(),
                settings.n_iter,
                settings.q_preserve,
                settings.pulse_fidelity,
                settings.pairing,
                {1: key[0], -1: key[1]},
                env,
                self.strategy,
            )
        return self._polarized[key]

    def calibrate(self, env: Environment) -> RamseyWorkingPoint:
        """Fit the fringe around the target working time and fix the working point."""
        settings = self.protocol
        Omega0 = nominal_beat(self.constants, env)
        phi0 = settings.phi0 if settings.phi0 is not None else 0.0
        t_n, t_p = select_working_points(Omega0, phi0, settings.target_time)

        half_period = math.pi / Omega0
        taus = np.linspace(
            max(min(t_n, t_p) - half_period, 0.0), max(t_n, t_p) + half_period, settings.calibration_points
        )
        signal = ramsey_sweep(
            self.polarized_state(env=env),
            env,
            taus,
            self.decoherence,
            self.noise,
            self.constants,
            shot_noise=False,
            ramsey_fidelity=settings.ramsey_fidelity,
            readout_fidelity=settings.readout_fidelity,
            manifold=settings.readout_manifold,
            strategy=self.strategy,
        )

        fit = fit_ramsey_fringe(taus, signal, frequency_guess=Omega0 / TWO_PI, T2_guess=self.decoherence.T2_star_dq)
        if settings.phi0 is None:
            phi0 = fit.phase
            t_n, t_p = select_working_points(Omega0, phi0, settings.target_time)

        amplitude = fit.envelope(0.5 * (t_n + t_p))
        if not amplitude > 0:
            raise NumericalError(f"Calibrated fringe amplitude is not positive: {amplitude}")

        self.fringe_fit = fit
        self.working_point = RamseyWorkingPoint(
            Omega0=Omega0, phi0=phi0, t_n=t_n, t_p=t_p, a=amplitude, b=fit.offset
        )
        logger.debug(
            "working_point_calibrated",
            t_n=t_n,
            t_p=t_p,
            a=amplitude,
            b=fit.offset,
            fitted_frequency=fit.frequency,
            T2_star=fit.T2_star,
        )
        return self.working_point

    def _require_working_point(self) -> RamseyWorkingPoint:
        if self.working_point is None:
            raise ValidationError("Gyro cycle is not calibrated; call calibrate() first", field="working_point")
        return self.working_point

    @property
    def cycle_time(self) -> float:
        """Duration of one negative/positive slope pair."""
        wp = self._require_working_point()
        return self.protocol.shot_time(wp.t_n) + self.protocol.shot_time(wp.t_p)

    def shot(
        self,
        env: Environment,
        tau: float,
        rng: Optional[np.random.Generator] = None,
        mw_fidelity: Optional[Dict[int, float]] = None,
    ) -> float:
        """Referenced readout signal of one Ramsey shot at evolution time tau."""
        settings = self.protocol
        manifold = settings.readout_manifold
        readout_fidelity = settings.readout_fidelity * (mw_fidelity or {}).get(manifold, 1.0)

        state = ramsey_sequence(
            self.polarized_state(mw_fidelity, env),
            env,
            tau,
            self.decoherence,
            self.constants,
            settings.ramsey_fidelity,
            self.strategy,
        )
        return referenced_readout(
            state, self.noise, rng, self.shot_noise, manifold, readout_fidelity, env, self.strategy
        ).signal

    def measure(
        self,
        env_n: Environment,
        env_p: Environment,
        rng: Optional[np.random.Generator] = None,
        mw_fidelity: Optional[Dict[int, float]] = None,
    ) -> GyroSample:
        """One falling-slope and one rising-slope shot, and the recovered beat shift."""
        wp = self._require_working_point()
        s_n = self.shot(env_n, wp.t_n, rng, mw_fidelity)
        s_p = self.shot(env_p, wp.t_p, rng, mw_fidelity)
        return GyroSample(t=env_p.t, s_n=s_n, s_p=s_p, delta_omega=recover_rotation(s_p, s_n, wp))

    def run(
        self,
        environment_at: Callable[[float], Environment],
        start: float,
        cycles: int,
        rng: Optional[np.random.Generator] = None,
    ) -> Iterator[GyroSample]:
        """Back-to-back cycles starting at ``start``; the environment is sampled at each shot."""
        wp = self._require_working_point()
        shot_n = self.protocol.shot_time(wp.t_n)
        shot_p = self.protocol.shot_time(wp.t_p)

        t = start
        for _ in range(cycles):
            env_n = environment_at(t + shot_n)
            env_p = environment_at(t + shot_n + shot_p)
            yield self.measure(env_n, env_p, rng)
            t += shot_n + shot_p
