"""Transition labels for MW (electron) and RF (nuclear) lines.

MW lines are labelled ``mw{m_s}:mi{m_i}`` for m_s=0 -> m_s at fixed m_i.
RF lines are labelled ``rf{m_s}:mi{m_i}`` for m_i=0 -> m_i inside manifold m_s.
Signs are always written, so m=0 reads ``+0``.
"""

import re
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Tuple

from ..exceptions import ValidationError

SPIN_PROJECTIONS = (1, 0, -1)

F5 = "f5"
F72 = "f7.2"

_LABEL_PATTERN = re.compile(r"^(mw|rf)([+-][01]):mi([+-][01])$")


class MwPairing(Enum):
    """Which electron manifold each nuclear projection is routed into during polarization."""

    SELF_CONSISTENT = "self-consistent"   # m_i=+1 -> m_s=+1, m_i=-1 -> m_s=-1
    AS_PRINTED = "as-printed"             # m_i=+1 -> m_s=-1, m_i=-1 -> m_s=+1

    def manifold_for(self, m_i: int) -> int:
        """Electron manifold that receives population with nuclear projection m_i."""
        if m_i not in (1, -1):
            raise ValidationError(f"Pairing is defined for m_i = ±1 only, got {m_i}", field="m_i")
        return m_i if self is MwPairing.SELF_CONSISTENT else -m_i


@dataclass(frozen=True)
class TransitionLabel:
    """Parsed transition label."""

    kind: str     # "mw" or "rf"
    m_s: int
    m_i: int

    def __post_init__(self):
        if self.kind not in ("mw", "rf"):
            raise ValidationError(f"Unknown transition kind: {self.kind}", field="kind")
        if self.kind == "mw" and (self.m_s == 0 or self.m_i not in SPIN_PROJECTIONS):
            raise ValidationError(f"Invalid MW transition m_s={self.m_s}, m_i={self.m_i}")
        if self.kind == "rf" and (self.m_s not in SPIN_PROJECTIONS or self.m_i == 0):
            raise ValidationError(f"Invalid RF transition m_s={self.m_s}, m_i={self.m_i}")

    @property
    def levels(self) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        """Lower and upper product-basis levels ((m_s, m_i), (m_s, m_i))."""
        if self.kind == "mw":
            return (0, self.m_i), (self.m_s, self.m_i)
        return (self.m_s, 0), (self.m_s, self.m_i)

    @property
    def m_s_pair(self) -> str:
        if self.kind == "mw":
            return f"0/{self.m_s:+d}"
        return f"{self.m_s:+d}"

    @property
    def m_i_pair(self) -> str:
        if self.kind == "mw":
            return f"{self.m_i:+d}"
        return f"0/{self.m_i:+d}"

    def __str__(self) -> str:
        return f"{self.kind}{self.m_s:+d}:mi{self.m_i:+d}"

    @classmethod
    def parse(cls, label: str) -> "TransitionLabel":
        """Parse a single-transition label."""
        match = _LABEL_PATTERN.match(label)
        if not match:
            raise ValidationError(f"Unknown transition label: {label!r}", field="target")
        kind, m_s, m_i = match.groups()
        return cls(kind=kind, m_s=int(m_s), m_i=int(m_i))


def mw_label(m_s: int, m_i: int) -> str:
    return str(TransitionLabel("mw", m_s, m_i))


def rf_label(m_s: int, m_i: int) -> str:
    return str(TransitionLabel("rf", m_s, m_i))


# Transition classes addressed by a single broadband RF carrier
TRANSITION_CLASSES: Dict[str, Tuple[str, ...]] = {
    F5: (rf_label(0, 1), rf_label(0, -1)),
    F72: (rf_label(1, 1), rf_label(-1, -1)),
}


def expand_targets(targets: Tuple[str, ...]) -> Tuple[TransitionLabel, ...]:
    """Expand class aliases and parse every label."""
    labels = []
    for target in targets:
        for label in TRANSITION_CLASSES.get(target, (target,)):
            labels.append(TransitionLabel.parse(label))
    return tuple(labels)
