"""Dependency injection container."""

from dependency_injector import containers, providers
from pathlib import Path
from typing import Dict, Any

from application.services.gyro_cycle import GyroCycleRunner
from application.services.scenario_runner import ScenarioRunner
from application.strategies.strategy_factory import StrategyFactory
from domain.value_objects.comag_config import ComagConfig
from domain.value_objects.decoherence import DecoherenceParams
from domain.value_objects.environment import Environment
from domain.value_objects.mems_model import MemsModel
from domain.value_objects.noise_budget import NoiseBudget
from domain.value_objects.physical_constants import PhysicalConstants
from domain.value_objects.protocol_settings import ProtocolSettings
from domain.value_objects.simulation_settings import SimulationSettings
from domain.value_objects.thermal_model import ThermalModel
from .logging.structured_logger import StructuredLogger, LogLevel
from .storage.csv_storage import CsvStorage


class Container(containers.DeclarativeContainer):
    """Application dependency injection container."""

    # Configuration
    config = providers.Configuration()

    # Infrastructure
    logger = providers.Singleton(
        StructuredLogger,
        log_file=providers.Callable(lambda logs_dir: Path(logs_dir) / "nv-gyro.log", config.logs_dir),
        level=providers.Callable(LogLevel.from_name, config.log_level),
        enable_console=True
    )

    csv_storage = providers.Singleton(
        CsvStorage,
        base_path=providers.Callable(lambda output_dir: Path(output_dir), config.output_dir)
    )

    # Settings
    constants = providers.Singleton(PhysicalConstants.from_dict, config.constants)
    environment = providers.Singleton(Environment.from_dict, config.environment)
    decoherence = providers.Singleton(DecoherenceParams.from_dict, config.decoherence)
    protocol = providers.Singleton(ProtocolSettings.from_dict, config.protocol)
    comag = providers.Singleton(ComagConfig.from_dict, config.comag)
    thermal = providers.Singleton(ThermalModel.from_dict, config.thermal)
    noise = providers.Singleton(NoiseBudget.from_dict, config.noise)
    mems = providers.Singleton(MemsModel.from_dict, config.mems)
    simulation = providers.Singleton(SimulationSettings.from_dict, config.simulation)

    # Strategy factory
    strategy_factory = providers.Singleton(StrategyFactory)

    # Evolution strategy (selected by simulation.evolution)
    evolution_strategy = providers.Factory(
        lambda factory, simulation, constants, protocol:
        factory.create_strategy(simulation.evolution, constants, protocol),
        factory=strategy_factory,
        simulation=simulation,
        constants=constants,
        protocol=config.protocol
    )

    # Application services
    gyro_cycle_runner = providers.Factory(
        lambda constants, protocol, decoherence, noise, simulation, strategy: GyroCycleRunner(
            constants, protocol, decoherence, noise, shot_noise=simulation.shot_noise, strategy=strategy
        ),
        constants=constants,
        protocol=protocol,
        decoherence=decoherence,
        noise=noise,
        simulation=simulation,
        strategy=evolution_strategy
    )

    scenario_runner = providers.Factory(
        ScenarioRunner,
        constants=constants,
        protocol=protocol,
        decoherence=decoherence,
        comag=comag,
        mems=mems,
        simulation=simulation,
        environment=environment,
        strategy=evolution_strategy
    )

    @classmethod
    def create_from_config(cls, config_data: Dict[str, Any]) -> "Container":
        """Create container from configuration data."""
        container = cls()

        # Set configuration values
        container.config.from_dict(config_data)

        return container
