"""Configuration loader for reading from config.md frontmatter."""

import dataclasses
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from domain.entities.scenario import Scenario
from domain.exceptions import ConfigurationError, ValidationError
from domain.value_objects.comag_config import ComagConfig
from domain.value_objects.decoherence import DecoherenceParams
from domain.value_objects.environment import Environment
from domain.value_objects.mems_model import MemsModel
from domain.value_objects.noise_budget import NoiseBudget
from domain.value_objects.physical_constants import PhysicalConstants
from domain.value_objects.protocol_settings import ProtocolSettings
from domain.value_objects.simulation_settings import SimulationSettings
from domain.value_objects.thermal_model import ThermalModel

SECTIONS = {
    "constants": PhysicalConstants,
    "environment": Environment,
    "decoherence": DecoherenceParams,
    "protocol": ProtocolSettings,
    "comag": ComagConfig,
    "thermal": ThermalModel,
    "noise": NoiseBudget,
    "mems": MemsModel,
    "simulation": SimulationSettings,
}

SECTION_ALIASES = {"environment": {"omega_dps"}}

SCENARIO_KEYS = {"name", "segments", "field_events", "field_sine"}

INFRASTRUCTURE_DEFAULTS = {
    "output_dir": "Results",
    "logs_dir": "Logs",
    "log_level": "INFO",
}


@dataclass
class GyroConfig:
    """Typed view of a loaded configuration."""

    constants: PhysicalConstants = field(default_factory=PhysicalConstants)
    environment: Environment = field(default_factory=Environment)
    decoherence: DecoherenceParams = field(default_factory=DecoherenceParams)
    protocol: ProtocolSettings = field(default_factory=ProtocolSettings)
    comag: ComagConfig = field(default_factory=ComagConfig)
    thermal: ThermalModel = field(default_factory=ThermalModel)
    noise: NoiseBudget = field(default_factory=NoiseBudget)
    mems: MemsModel = field(default_factory=MemsModel)
    simulation: SimulationSettings = field(default_factory=SimulationSettings)
    scenario_data: Dict[str, Any] = field(default_factory=dict)
    infrastructure: Dict[str, Any] = field(default_factory=lambda: dict(INFRASTRUCTURE_DEFAULTS))

    def scenario(self) -> Scenario:
        """The configured scenario, seeded from the simulation settings."""
        try:
            return Scenario.from_dict(self.scenario_data, self.thermal, self.noise, self.simulation.seed)
        except ValidationError as e:
            raise ConfigurationError(_field_path("scenario", e)) from e
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"scenario: {e}") from e

    def with_overrides(
        self,
        seed: Optional[int] = None,
        shot_noise: Optional[bool] = None,
        output_dir: Optional[str] = None,
    ) -> "GyroConfig":
        """Apply command-line overrides."""
        updates = {}
        if seed is not None:
            updates["seed"] = seed
        if shot_noise is not None:
            updates["shot_noise"] = shot_noise
        try:
            simulation = self.simulation.with_updates(**updates)
        except ValidationError as e:
            raise ConfigurationError(_field_path("simulation", e)) from e

        infrastructure = dict(self.infrastructure)
        if output_dir is not None:
            infrastructure["output_dir"] = output_dir
        return dataclasses.replace(self, simulation=simulation, infrastructure=infrastructure)

    def to_container_dict(self) -> Dict[str, Any]:
        """Flat dictionary for the dependency injection container."""
        data = {name: getattr(self, name).to_dict() for name in SECTIONS}
        data.update(self.infrastructure)
        return data


def _field_path(section: str, error: ValidationError) -> str:
    if error.field:
        return f"{section}.{error.field}: {error}"
    return f"{section}: {error}"


class ConfigLoader:
    """Loads configuration from config.md frontmatter."""

    def __init__(self, config_file: str = "config.md"):
        self.config_file = Path(config_file)

    def load_config(self) -> Dict[str, Any]:
        """Load the raw configuration with infrastructure settings flattened to the top level."""
        if not self.config_file.exists():
            raise ConfigurationError(f"Configuration file not found: {self.config_file}")

        try:
            content = self.config_file.read_text(encoding='utf-8')
            frontmatter = self._extract_frontmatter(content)
            config_data = yaml.safe_load(frontmatter) or {}
        except ConfigurationError:
            raise
        except Exception as e:
            raise ConfigurationError(f"Failed to load configuration from {self.config_file}: {e}") from e

        if not isinstance(config_data, dict):
            raise ConfigurationError(f"Configuration in {self.config_file} must be a mapping")

        unknown = set(config_data) - set(SECTIONS) - {"scenario", "infrastructure"}
        if unknown:
            raise ConfigurationError(f"Unknown configuration sections: {', '.join(sorted(unknown))}")

        # Merge infrastructure settings with defaults
        infrastructure = config_data.pop('infrastructure', None) or {}
        unknown = set(infrastructure) - set(INFRASTRUCTURE_DEFAULTS)
        if unknown:
            raise ConfigurationError(f"infrastructure.{sorted(unknown)[0]}: unknown setting")
        config_data.update({key: infrastructure.get(key, default) for key, default in INFRASTRUCTURE_DEFAULTS.items()})

        return config_data

    def _extract_frontmatter(self, content: str) -> str:
        """Extract YAML frontmatter from markdown content."""
        # Match YAML frontmatter between --- markers
        pattern = r'^---\s*\n(.*?)\n---\s*(?:\n|$)'
        match = re.search(pattern, content, re.DOTALL)

        if not match:
            raise ConfigurationError(f"No YAML frontmatter found in {self.config_file}")

        return match.group(1)

    def build_section(self, name: str, data: Optional[Dict[str, Any]]):
        """Build one section's value object, reporting failures with the dotted field path."""
        section_class = SECTIONS[name]
        data = data or {}
        if not isinstance(data, dict):
            raise ConfigurationError(f"{name}: section must be a mapping")

        allowed = {f.name for f in dataclasses.fields(section_class)} | SECTION_ALIASES.get(name, set())
        unknown = sorted(set(data) - allowed)
        if unknown:
            raise ConfigurationError(f"{name}.{unknown[0]}: unknown setting")

        try:
            return section_class.from_dict(data)
        except ValidationError as e:
            raise ConfigurationError(_field_path(name, e)) from e
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"{name}: {e}") from e

    def load_settings(self) -> GyroConfig:
        """Load and validate every section."""
        config_data = self.load_config()
        sections = {name: self.build_section(name, config_data.get(name)) for name in SECTIONS}

        constants: PhysicalConstants = sections["constants"]
        thermal: ThermalModel = sections["thermal"]
        if not thermal.is_consistent_with(constants.dD_dT):
            raise ConfigurationError(
                f"thermal.amplitude: {thermal.amplitude} Hz over {thermal.dT_total} K implies "
                f"{thermal.coefficient:.0f} Hz/K, inconsistent with constants.dD_dT = {constants.dD_dT:.0f} Hz/K"
            )

        scenario_data = config_data.get("scenario") or {}
        if not isinstance(scenario_data, dict):
            raise ConfigurationError("scenario: section must be a mapping")
        unknown = sorted(set(scenario_data) - SCENARIO_KEYS)
        if unknown:
            raise ConfigurationError(f"scenario.{unknown[0]}: unknown setting")

        config = GyroConfig(
            scenario_data=scenario_data,
            infrastructure={key: config_data[key] for key in INFRASTRUCTURE_DEFAULTS},
            **sections,
        )
        if scenario_data:
            config.scenario()
        return config
