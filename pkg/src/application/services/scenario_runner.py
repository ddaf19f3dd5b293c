"""Scenario runner: interleaved comagnetometer and gyroscope cycles on one time axis."""

import math
from typing import Dict, List, Optional

import numpy as np
import structlog

from domain.entities.measurements import ComagReading, GyroSample, ScenarioRecord, ScenarioResult
from domain.entities.scenario import Scenario
from domain.exceptions import StaleReadingError
from domain.value_objects.comag_config import ComagConfig
from domain.value_objects.decoherence import DecoherenceParams
from domain.value_objects.environment import Environment
from domain.value_objects.mems_model import MemsModel
from domain.value_objects.physical_constants import PhysicalConstants
from domain.value_objects.protocol_settings import ProtocolSettings
from domain.value_objects.simulation_settings import SimulationSettings

from ..interfaces.evolution_strategy import EvolutionStrategy
from .comag import synthesize_acquisition
from .drift import check_fresh, compensate, establish_baseline, startup_gate, temperature_offset
from .dynamics import off_resonance_transfer
from .gyro_cycle import GyroCycleRunner
from .mems import MemsGyro
from .protocol import recover_rotation
from .resonance_tracker import ResonanceTracker
from .spin_core import central_line, odmr_spectrum

logger = structlog.get_logger(__name__)

# Independent random streams per scenario
GYRO_STREAM = 0
COMAG_STREAM = 1
MEMS_STREAM = 2


def derive_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for stream ``index`` of master ``seed``; streams never overlap."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


class ScenarioRunner:
    """Runs a Scenario and returns compensated rotation records.

    Every loop iteration is one comagnetometer acquisition followed by one
    falling-slope and one rising-slope gyro shot. The MW pulses sit on the
    tracked carriers, so tracking error lowers their fidelity. Output is
    deterministic for a given seed.
    """

    def __init__(
        self,
        constants: PhysicalConstants,
        protocol: ProtocolSettings,
        decoherence: DecoherenceParams,
        comag: ComagConfig,
        mems: MemsModel,
        simulation: SimulationSettings,
        environment: Environment = Environment(),
        strategy: Optional[EvolutionStrategy] = None,
    ):
        self.constants = constants
        self.protocol = protocol
        self.decoherence = decoherence
        self.comag = comag
        self.mems = mems
        self.simulation = simulation
        self.environment = environment
        self.strategy = strategy

    def environment_at(self, scenario: Scenario, t: float) -> Environment:
        """True environment at time t: field disturbances, thermal transient, commanded rotation."""
        return Environment(
            B_z=self.environment.B_z + scenario.delta_B_at(t),
            dT=self.environment.dT + temperature_offset(scenario.thermal, t, self.constants),
            Omega=math.radians(scenario.rate_at(t)),
            t=t,
        )

    def _mw_fidelity(self, tracker: ResonanceTracker, env: Environment) -> Dict[int, float]:
        detunings = {
            -1: tracker.f_minus - central_line(self.constants, env, -1),
            1: tracker.f_plus - central_line(self.constants, env, 1),
        }
        return {m_s: off_resonance_transfer(detuning, self.protocol.mw_rabi) for m_s, detuning in detunings.items()}

    def run(self, scenario: Scenario) -> ScenarioResult:
        """Simulate the whole timeline, then baseline, compensate and gate the output."""
        c = self.constants
        shot_noise = self.simulation.shot_noise
        gyro_rng = derive_rng(scenario.seed, GYRO_STREAM) if shot_noise else None
        comag_rng = derive_rng(scenario.seed, COMAG_STREAM) if shot_noise else None
        mems_rng = derive_rng(scenario.seed, MEMS_STREAM) if shot_noise else None

        nominal = self.environment.with_updates(Omega=0.0, t=0.0)
        gyro = GyroCycleRunner(c, self.protocol, self.decoherence, scenario.noise, shot_noise, self.strategy)
        wp = gyro.calibrate(nominal)

        populations = gyro.polarized_state(env=nominal).nuclear_populations()

        def lineshape(env: Environment):
            return odmr_spectrum(c, env, populations, self.comag.line_width, self.comag.line_contrast)

        tracker = ResonanceTracker.from_lineshape(
            c, self.comag, lineshape(nominal), central_line(c, nominal, -1), central_line(c, nominal, 1)
        )
        mems = MemsGyro(self.mems, mems_rng)

        shot_n = self.protocol.shot_time(wp.t_n)
        shot_p = self.protocol.shot_time(wp.t_p)
        acquisition = self.comag.acquisition if self.comag.enabled else 0.0

        logger.info(
            "scenario_started",
            scenario=scenario.name,
            seed=scenario.seed,
            duration=scenario.duration,
            t_n=wp.t_n,
            t_p=wp.t_p,
            a=wp.a,
        )

        readings: List[ComagReading] = []
        samples: List[GyroSample] = []
        mems_rates: List[float] = []
        last_good: Optional[ComagReading] = None

        t = 0.0
        while t < scenario.duration:
            if self.comag.enabled:
                acquired = synthesize_acquisition(
                    lineshape(self.environment_at(scenario, t)),
                    tracker.f_minus,
                    tracker.f_plus,
                    self.comag,
                    t0=t,
                    rng=comag_rng,
                )
                t += acquisition
                reading = tracker.update(acquired, t=t)
            else:
                reading = tracker.reading(t)

            if reading.locked or last_good is None:
                last_good = reading
            else:
                try:
                    check_fresh(last_good, t, self.comag.staleness)
                except StaleReadingError as e:
                    logger.warning("stale_comag_reading", error=str(e))
            readings.append(last_good)

            mw_fidelity = self._mw_fidelity(tracker, self.environment_at(scenario, t))
            env_n = self.environment_at(scenario, t + shot_n)
            env_p = self.environment_at(scenario, t + shot_n + shot_p)
            s_n = gyro.shot(env_n, wp.t_n, gyro_rng, mw_fidelity)
            s_p = gyro.shot(env_p, wp.t_p, gyro_rng, mw_fidelity)
            t += shot_n + shot_p

            samples.append(GyroSample(t=t, s_n=s_n, s_p=s_p, delta_omega=recover_rotation(s_p, s_n, wp)))
            mems_rates.append(mems.read(t, scenario.rate_at(t)))

        baseline_B = establish_baseline(readings, scenario.thermal)

        records = []
        for sample, reading, mems_rate in zip(samples, readings, mems_rates):
            omega_nv = compensate(sample.delta_omega, reading, baseline_B, c)
            records.append(
                ScenarioRecord(
                    t=sample.t,
                    omega_true=scenario.rate_at(sample.t),
                    omega_nv=math.degrees(omega_nv),
                    omega_raw=math.degrees(0.5 * sample.delta_omega),
                    omega_mems=mems_rate,
                    b_nt=(reading.B_est - self.environment.B_z) * 1e9,
                    dt_k=reading.dT_est,
                    s_n=sample.s_n,
                    s_p=sample.s_p,
                )
            )

        gated = list(startup_gate(records, scenario.thermal))
        logger.info(
            "scenario_completed",
            scenario=scenario.name,
            cycles=len(samples),
            records=len(gated),
            baseline_b_nt=(baseline_B - self.environment.B_z) * 1e9,
        )
        return ScenarioResult(
            records=gated, readings=readings, samples=samples, baseline_B=baseline_B, working_point=wp
        )
