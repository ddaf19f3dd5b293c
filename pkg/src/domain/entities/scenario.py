"""Rotation / field scenario definition."""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from ..exceptions import ValidationError
from ..value_objects.environment import MAX_ROTATION_RATE
from ..value_objects.noise_budget import NoiseBudget
from ..value_objects.thermal_model import ThermalModel

MAX_RATE_DPS = math.degrees(MAX_ROTATION_RATE)


@dataclass(frozen=True)
class RotationSegment:
    """Constant-rate turntable segment."""

    duration: float     # s
    rate_dps: float     # deg/s

    def __post_init__(self):
        if not self.duration > 0:
            raise ValidationError(f"Segment duration must be positive, got {self.duration}", field="duration")
        if abs(self.rate_dps) > MAX_RATE_DPS + 1e-9:
            raise ValidationError(
                f"Rotation rate {self.rate_dps} deg/s exceeds the {MAX_RATE_DPS:.0f} deg/s turntable limit",
                field="rate_dps",
            )


@dataclass(frozen=True)
class FieldEvent:
    """Step change of the bias field at ``time``; ``delta_B`` is relative to the nominal field."""

    time: float     # s
    delta_B: float  # T

    def __post_init__(self):
        if self.time < 0:
            raise ValidationError(f"Field event time cannot be negative, got {self.time}", field="time")


@dataclass(frozen=True)
class FieldSine:
    """Sinusoidal field disturbance."""

    amplitude: float    # T
    frequency: float    # Hz
    phase: float = 0.0

    def __post_init__(self):
        if self.frequency < 0:
            raise ValidationError(f"Disturbance frequency cannot be negative, got {self.frequency}", field="frequency")

    def at(self, t: float) -> float:
        return self.amplitude * math.sin(2.0 * math.pi * self.frequency * t + self.phase)


@dataclass
class Scenario:
    """A sequential timeline of rotation segments and field disturbances.

    The timeline opens with a stationary lead-in covering the thermal discard
    window and the baseline window; ``segments`` play back to back after it.
    Field event times are absolute.
    """

    segments: Tuple[RotationSegment, ...] = ()
    field_events: Tuple[FieldEvent, ...] = ()
    thermal: ThermalModel = field(default_factory=ThermalModel)
    seed: int = 12
    noise: NoiseBudget = field(default_factory=NoiseBudget)
    field_sine: Optional[FieldSine] = None
    name: str = "scenario"

    def __post_init__(self):
        self.segments = tuple(self.segments)
        self.field_events = tuple(sorted(self.field_events, key=lambda event: event.time))

        if not self.segments:
            raise ValidationError("Scenario needs at least one rotation segment", field="segments")

        if self.seed < 0:
            raise ValidationError(f"Seed cannot be negative, got {self.seed}", field="seed")

    @property
    def lead_in(self) -> float:
        return self.thermal.discard + self.thermal.baseline_window

    @property
    def duration(self) -> float:
        return self.lead_in + sum(segment.duration for segment in self.segments)

    def segment_bounds(self) -> List[Tuple[float, float, float]]:
        """(start, end, rate_dps) for each segment."""
        bounds = []
        start = self.lead_in
        for segment in self.segments:
            bounds.append((start, start + segment.duration, segment.rate_dps))
            start += segment.duration
        return bounds

    def rate_at(self, t: float) -> float:
        """Commanded rotation rate (deg/s) at time t."""
        for start, end, rate in self.segment_bounds():
            if start <= t < end:
                return rate
        return 0.0

    def delta_B_at(self, t: float) -> float:
        """Field offset from nominal (T) at time t."""
        delta = 0.0
        for event in self.field_events:
            if event.time <= t:
                delta = event.delta_B
            else:
                break
        if self.field_sine is not None:
            delta += self.field_sine.at(t)
        return delta

    @classmethod
    def from_dict(cls, data: Dict[str, Any], thermal: ThermalModel, noise: NoiseBudget, seed: int) -> "Scenario":
        """Build from the config ``scenario`` section.

        segments: [[duration_s, rate_dps], ...]; field_events: [[time_s, delta_nT], ...];
        field_sine: {amplitude_nt, frequency_hz, phase}.
        """
        segments = tuple(RotationSegment(float(d), float(r)) for d, r in data.get("segments", []))
        events = tuple(FieldEvent(float(t), float(b) * 1e-9) for t, b in data.get("field_events", []))
        sine_data = data.get("field_sine")
        field_sine = None
        if sine_data:
            field_sine = FieldSine(
                amplitude=float(sine_data.get("amplitude_nt", 0.0)) * 1e-9,
                frequency=float(sine_data.get("frequency_hz", 0.0)),
                phase=float(sine_data.get("phase", 0.0)),
            )
        return cls(
            segments=segments,
            field_events=events,
            thermal=thermal,
            seed=seed,
            noise=noise,
            field_sine=field_sine,
            name=data.get("name", "scenario"),
        )
