"""Gate-level evolution: ideal conditional rotations with a fidelity knob."""

from domain.entities.spin_state import SpinState
from domain.value_objects.environment import Environment
from domain.value_objects.physical_constants import PhysicalConstants
from domain.value_objects.pulse import PulseSpec

from application.interfaces.evolution_strategy import EvolutionStrategy
from application.services.dynamics import apply_pulse


class GateLevelStrategy(EvolutionStrategy):
    """Pulses act instantaneously as defined by their intent.

    The environment is ignored: every targeted transition is assumed on resonance.
    """

    def __init__(self, constants: PhysicalConstants = PhysicalConstants()):
        super().__init__(constants)

    def apply_pulse(self, state: SpinState, pulse: PulseSpec, env: Environment) -> SpinState:
        return apply_pulse(state, pulse)

    def get_strategy_name(self) -> str:
        return "gate-level"

    def get_strategy_description(self) -> str:
        return "Ideal conditional rotations mixed with identity at (1 - fidelity)"
