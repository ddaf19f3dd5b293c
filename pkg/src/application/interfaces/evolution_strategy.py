"""Abstract pulse evolution strategy interface."""

from abc import ABC, abstractmethod

from domain.entities.spin_state import SpinState
from domain.value_objects.environment import Environment
from domain.value_objects.physical_constants import PhysicalConstants
from domain.value_objects.pulse import PulseSpec


class EvolutionStrategy(ABC):
    """Abstract interface for applying control pulses to a spin state."""

    def __init__(self, constants: PhysicalConstants):
        self.constants = constants

    @abstractmethod
    def apply_pulse(self, state: SpinState, pulse: PulseSpec, env: Environment) -> SpinState:
        """Apply one pulse at the given environment."""
        pass

    @abstractmethod
    def get_strategy_name(self) -> str:
        """Get the name of this strategy."""
        pass

    @abstractmethod
    def get_strategy_description(self) -> str:
        """Get a description of this strategy."""
        pass
