"""Pulse specification value objects."""

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Tuple, Union

from ..exceptions import ValidationError
from .transition import F5, F72, TransitionLabel, expand_targets


class PulseChannel(Enum):
    """Drive channels available to the protocol."""

    MW_MINUS = "mw_minus"   # m_s=0 <-> m_s=-1
    MW_PLUS = "mw_plus"     # m_s=0 <-> m_s=+1
    RF5 = "rf5"             # nuclear lines inside m_s=0
    RF72 = "rf72"           # nuclear lines inside m_s=±1


@dataclass(frozen=True)
class PulseSpec:
    """A gate-level pulse: rotation by ``angle`` on the targeted transition(s)."""

    channel: PulseChannel
    target: Tuple[str, ...]
    angle: float = math.pi
    phase: float = 0.0
    fidelity: float = 1.0

    def __post_init__(self):
        """Validate the pulse and normalise the target to a tuple."""
        target: Union[str, Tuple[str, ...]] = self.target
        if isinstance(target, str):
            object.__setattr__(self, "target", (target,))

        if not self.target:
            raise ValidationError("Pulse target cannot be empty", field="target")

        if not math.isfinite(self.angle):
            raise ValidationError(f"Pulse angle must be finite, got {self.angle}", field="angle")

        if not math.isfinite(self.phase):
            raise ValidationError(f"Pulse phase must be finite, got {self.phase}", field="phase")

        if not 0.0 <= self.fidelity <= 1.0:
            raise ValidationError(f"Pulse fidelity must be between 0 and 1, got {self.fidelity}", field="fidelity")

        for label in self.transitions:
            self._check_channel(label)

    @property
    def transitions(self) -> Tuple[TransitionLabel, ...]:
        """Individual transitions addressed by this pulse."""
        return expand_targets(self.target)

    def _check_channel(self, label: TransitionLabel):
        channel = self.channel
        if channel is PulseChannel.MW_MINUS and not (label.kind == "mw" and label.m_s == -1):
            raise ValidationError(f"{label} is not an m_s=0 -> -1 line", field="target")
        if channel is PulseChannel.MW_PLUS and not (label.kind == "mw" and label.m_s == 1):
            raise ValidationError(f"{label} is not an m_s=0 -> +1 line", field="target")
        if channel is PulseChannel.RF5 and not (label.kind == "rf" and label.m_s == 0):
            raise ValidationError(f"{label} is not an m_s=0 nuclear line", field="target")
        if channel is PulseChannel.RF72 and not (label.kind == "rf" and label.m_s != 0):
            raise ValidationError(f"{label} is not an m_s=±1 nuclear line", field="target")

    @classmethod
    def pi(cls, channel: PulseChannel, *targets: str, fidelity: float = 1.0) -> "PulseSpec":
        """A π pulse on the given targets."""
        return cls(channel=channel, target=tuple(targets), angle=math.pi, fidelity=fidelity)

    @classmethod
    def rf5_pi(cls, fidelity: float = 1.0) -> "PulseSpec":
        """The DQ pulse between |m_i=0> and the bright state."""
        return cls.pi(PulseChannel.RF5, F5, fidelity=fidelity)

    @classmethod
    def rf72_pi(cls, fidelity: float = 1.0) -> "PulseSpec":
        """The broadband nuclear pulse at f7.2."""
        return cls.pi(PulseChannel.RF72, F72, fidelity=fidelity)

    def with_updates(self, **updates) -> "PulseSpec":
        """Return a copy with updated values."""
        return replace(self, **updates)
