"""Strategy factory for managing pulse evolution strategies."""

from typing import Any, Dict, Optional, Type

from domain.exceptions import ConfigurationError
from domain.value_objects.physical_constants import PhysicalConstants

from ..interfaces.evolution_strategy import EvolutionStrategy
from .gate_level.strategy import GateLevelStrategy
from .time_domain.strategy import TimeDomainStrategy


class StrategyFactory:
    """Factory for creating and managing evolution strategies."""

    def __init__(self):
        self._strategies: Dict[str, Type[EvolutionStrategy]] = {}
        self._register_default_strategies()

    def _register_default_strategies(self):
        """Register the default strategies."""
        self.register_strategy("gate-level", GateLevelStrategy)
        self.register_strategy("time-domain", TimeDomainStrategy)

    def register_strategy(self, name: str, strategy_class: Type[EvolutionStrategy]):
        """Register a new strategy."""
        self._strategies[name] = strategy_class

    def get_available_strategies(self) -> Dict[str, str]:
        """Get registered strategies with descriptions."""
        return {name: strategy_class().get_strategy_description() for name, strategy_class in self._strategies.items()}

    def create_strategy(
        self,
        strategy_name: str,
        constants: Optional[PhysicalConstants] = None,
        protocol: Optional[Dict[str, Any]] = None,
    ) -> EvolutionStrategy:
        """Create a strategy instance."""
        if strategy_name not in self._strategies:
            available = ", ".join(self._strategies.keys())
            raise ConfigurationError(
                f"Unknown evolution strategy '{strategy_name}'. Available strategies: {available}"
            )

        strategy_class = self._strategies[strategy_name]
        constants = constants or PhysicalConstants()

        if strategy_name == "time-domain":
            protocol = protocol or {}
            return strategy_class(
                constants,
                mw_rabi=protocol.get("mw_rabi", 100e3),
                rf_rabi=protocol.get("rf_rabi", 50e3),
            )
        return strategy_class(constants)
