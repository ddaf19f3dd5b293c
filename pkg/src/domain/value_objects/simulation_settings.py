"""Run-level simulation settings."""

from dataclasses import dataclass, replace
from typing import Any, Dict

from ..exceptions import ValidationError

EVOLUTION_STRATEGIES = ("gate-level", "time-domain")


@dataclass(frozen=True)
class SimulationSettings:
    """Settings shared by every command."""

    seed: int = 12
    shot_noise: bool = True
    evolution: str = "gate-level"
    replicas: int = 1

    def __post_init__(self):
        if self.seed < 0:
            raise ValidationError(f"Seed cannot be negative, got {self.seed}", field="seed")

        if self.evolution not in EVOLUTION_STRATEGIES:
            raise ValidationError(
                f"Unknown evolution strategy '{self.evolution}'. Must be one of {EVOLUTION_STRATEGIES}",
                field="evolution",
            )

        if self.replicas < 1:
            raise ValidationError(f"replicas must be at least 1, got {self.replicas}", field="replicas")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SimulationSettings":
        filtered_data = {k: v for k, v in data.items() if v is not None}
        return cls(**filtered_data)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "shot_noise": self.shot_noise,
            "evolution": self.evolution,
            "replicas": self.replicas,
        }

    def with_updates(self, **updates) -> "SimulationSettings":
        return replace(self, **updates)
