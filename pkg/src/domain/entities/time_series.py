"""Sampled signal channel."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..exceptions import ValidationError

UNIFORMITY_RTOL = 1e-6


@dataclass
class TimeSeries:
    """A channel of (time, value) samples."""

    time: np.ndarray
    value: np.ndarray
    channel: str = ""
    unit: str = ""

    def __post_init__(self):
        self.time = np.asarray(self.time, dtype=float)
        self.value = np.asarray(self.value, dtype=float)

        if self.time.ndim != 1 or self.value.ndim != 1:
            raise ValidationError("Time series must be one-dimensional")

        if self.time.shape != self.value.shape:
            raise ValidationError(
                f"Time and value lengths differ: {self.time.size} vs {self.value.size}"
            )

        if self.time.size > 1 and np.any(np.diff(self.time) < 0):
            raise ValidationError("Time stamps must be non-decreasing", field="time")

    def __len__(self) -> int:
        return int(self.time.size)

    @classmethod
    def uniform(cls, values, sample_rate: float, t0: float = 0.0, channel: str = "", unit: str = "") -> "TimeSeries":
        """Series sampled at a fixed rate starting at t0."""
        if not sample_rate > 0:
            raise ValidationError(f"sample_rate must be positive, got {sample_rate}", field="sample_rate")
        values = np.asarray(values, dtype=float)
        time = t0 + np.arange(values.size) / sample_rate
        return cls(time=time, value=values, channel=channel, unit=unit)

    @property
    def duration(self) -> float:
        if len(self) < 2:
            return 0.0
        return float(self.time[-1] - self.time[0])

    def is_uniform(self, rtol: float = UNIFORMITY_RTOL) -> bool:
        if len(self) < 2:
            return False
        steps = np.diff(self.time)
        mean_step = steps.mean()
        return bool(mean_step > 0 and np.all(np.abs(steps - mean_step) <= rtol * mean_step))

    @property
    def sample_rate(self) -> float:
        """Sampling rate of a uniform series (Hz)."""
        if not self.is_uniform():
            raise ValidationError(f"Series '{self.channel}' is not uniformly sampled")
        return float((len(self) - 1) / (self.time[-1] - self.time[0]))

    def between(self, t_min: Optional[float] = None, t_max: Optional[float] = None) -> "TimeSeries":
        """Samples with t_min <= t < t_max."""
        mask = np.ones(len(self), dtype=bool)
        if t_min is not None:
            mask &= self.time >= t_min
        if t_max is not None:
            mask &= self.time < t_max
        return TimeSeries(self.time[mask], self.value[mask], self.channel, self.unit)
