"""Time-domain evolution in the rotating frame of the pulse carrier."""

import math
from typing import Dict, List, Tuple

import numpy as np
import structlog
from scipy.linalg import expm

from domain.entities.spin_state import DIMENSION, SpinState, basis_index
from domain.exceptions import NumericalError
from domain.value_objects.environment import Environment
from domain.value_objects.physical_constants import PhysicalConstants
from domain.value_objects.pulse import PulseSpec

from application.interfaces.evolution_strategy import EvolutionStrategy
from application.services.dynamics import CHANNEL_TRANSITIONS, apply_unitary, group_by_hub
from application.services.spin_core import secular_energy_differences

logger = structlog.get_logger(__name__)

TWO_PI = 2.0 * math.pi

# Spokes detuned by more than this many Rabi frequencies are left undriven
COUPLING_CUTOFF = 1.0e3


class TimeDomainStrategy(EvolutionStrategy):
    """Square pulse propagated under the RWA Hamiltonian of its channel.

    The carrier sits at the mean frequency of the targeted transitions and
    drives every transition of the channel with the same Rabi frequency, so
    spectator lines pick up off-resonant excitation. The pulse length gives
    the requested angle on the targeted bright state. Slow; meant for
    cross-checking the gate-level model.
    """

    def __init__(
        self,
        constants: PhysicalConstants = PhysicalConstants(),
        mw_rabi: float = 100e3,
        rf_rabi: float = 50e3,
    ):
        super().__init__(constants)
        self.mw_rabi = mw_rabi
        self.rf_rabi = rf_rabi

    def _rabi(self, pulse: PulseSpec) -> float:
        return self.mw_rabi if pulse.transitions[0].kind == "mw" else self.rf_rabi

    def rotating_frame_hamiltonian(self, pulse: PulseSpec, env: Environment) -> Tuple[np.ndarray, float]:
        """RWA Hamiltonian (rad/s) and the pulse duration (s)."""
        energy_gaps = secular_energy_differences(self.constants, env)
        rabi = TWO_PI * self._rabi(pulse)

        targets = pulse.transitions
        gaps = [energy_gaps[basis_index(*upper), basis_index(*lower)] for lower, upper in (t.levels for t in targets)]
        carrier = float(np.mean(np.abs(gaps)))

        # A negative angle is the same rotation with the carrier phase advanced by π
        phase = pulse.phase + (math.pi if pulse.angle < 0 else 0.0)

        H = np.zeros((DIMENSION, DIMENSION), dtype=complex)
        for hub, spokes in group_by_hub(CHANNEL_TRANSITIONS[pulse.channel]).items():
            h = basis_index(*hub)
            for spoke in spokes:
                k = basis_index(*spoke)
                gap = energy_gaps[k, h]
                detuning = gap - math.copysign(carrier, gap)
                if abs(detuning) > COUPLING_CUTOFF * rabi:
                    continue
                H[k, k] = detuning
                H[k, h] = 0.5 * rabi * np.exp(-1j * phase)
                H[h, k] = 0.5 * rabi * np.exp(1j * phase)

        hub_sizes: Dict[Tuple[int, int], List] = group_by_hub(targets)
        bright_size = max(len(spokes) for spokes in hub_sizes.values())
        duration = abs(pulse.angle) / (rabi * math.sqrt(bright_size))
        return H, duration

    def apply_pulse(self, state: SpinState, pulse: PulseSpec, env: Environment) -> SpinState:
        if pulse.angle == 0.0:
            return state

        H, duration = self.rotating_frame_hamiltonian(pulse, env)
        U = expm(-1j * H * duration)
        if not np.all(np.isfinite(U)):
            raise NumericalError(f"Propagator for {pulse.target} is not finite")

        logger.debug("time_domain_pulse", target=pulse.target, duration=duration)
        return apply_unitary(state, U, pulse.fidelity)

    def get_strategy_name(self) -> str:
        return "time-domain"

    def get_strategy_description(self) -> str:
        return "Rotating-frame square-pulse propagation including spectator transitions"
