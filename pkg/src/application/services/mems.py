"""Synthetic MEMS reference gyroscope."""

import math
from typing import Optional

import numpy as np

from domain.exceptions import ValidationError
from domain.value_objects.mems_model import MemsModel


class MemsGyro:
    """Reference rate sensor sampled on a fixed tick grid.

    Each tick draws white noise of std arw·√fs and advances a first-order
    Gauss-Markov bias with std ``bias_instability``. ``read`` holds the
    latest tick. Without a generator the sensor is ideal.
    """

    def __init__(self, model: MemsModel, rng: Optional[np.random.Generator] = None):
        self.model = model
        self.rng = rng
        self._tick = 0
        self._bias = 0.0
        self._white = 0.0
        self._decay = math.exp(-1.0 / (model.sample_rate * model.correlation_time))
        self._bias_step = model.bias_instability * math.sqrt(1.0 - self._decay ** 2)
        if rng is not None:
            self._bias = model.bias_instability * rng.standard_normal()
            self._white = model.white_sigma * rng.standard_normal()

    def _advance(self):
        self._tick += 1
        if self.rng is None:
            return
        self._bias = self._decay * self._bias + self._bias_step * self.rng.standard_normal()
        self._white = self.model.white_sigma * self.rng.standard_normal()

    def read(self, t: float, rate_dps: float) -> float:
        """Measured rate (deg/s) at time t for the true rate ``rate_dps``."""
        tick = math.floor(t * self.model.sample_rate + 1e-9)
        if tick < self._tick:
            raise ValidationError(f"MEMS reads must move forward in time, got t={t}", field="t")
        while self._tick < tick:
            self._advance()
        return rate_dps + self._bias + self._white
