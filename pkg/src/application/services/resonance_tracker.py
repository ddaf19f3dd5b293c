"""Two-line integral tracking loop of the comagnetometer / cothermometer."""

from typing import List, Optional

import structlog

from domain.entities.measurements import ComagReading
from domain.entities.time_series import TimeSeries
from domain.exceptions import LoopDivergenceError, ValidationError
from domain.value_objects.comag_config import ComagConfig
from domain.value_objects.odmr_lineshape import OdmrLineshape
from domain.value_objects.physical_constants import PhysicalConstants

from .comag import discriminator_slope, fm_demodulate, line_center_estimate

logger = structlog.get_logger(__name__)

# Growth of corrections smaller than this fraction of the line width is noise
DIVERGENCE_FLOOR = 0.1


class ResonanceTracker:
    """Integral feedback that keeps both FM carriers on the m_i=0 electron lines.

    Each acquisition is demodulated at both modulation frequencies and each
    carrier moves by -gain·error/slope. Field and temperature follow from the
    differential and common-mode line positions.
    """

    def __init__(
        self,
        constants: PhysicalConstants,
        config: ComagConfig,
        f_minus: float,
        f_plus: float,
        slope_minus: Optional[float] = None,
        slope_plus: Optional[float] = None,
    ):
        self.constants = constants
        self.config = config
        self.f_minus = f_minus
        self.f_plus = f_plus

        reference = OdmrLineshape(centers=(0.0,), width=config.line_width, contrast=config.line_contrast)
        default_slope = discriminator_slope(reference, 0.0, config.span)
        self.slope_minus = slope_minus or default_slope
        self.slope_plus = slope_plus or default_slope
        if not (self.slope_minus > 0 and self.slope_plus > 0):
            raise ValidationError("Discriminator slopes must be positive", field="slope")

        self.locked = True
        self._growing = 0
        self._last_correction = 0.0
        self.history: List[ComagReading] = []

    @classmethod
    def from_lineshape(
        cls, constants: PhysicalConstants, config: ComagConfig, lineshape: OdmrLineshape, f_minus: float, f_plus: float
    ) -> "ResonanceTracker":
        """Tracker whose loop slopes are measured on ``lineshape`` at the starting carriers."""
        return cls(
            constants,
            config,
            f_minus,
            f_plus,
            slope_minus=discriminator_slope(lineshape, f_minus, config.span),
            slope_plus=discriminator_slope(lineshape, f_plus, config.span),
        )

    def reading(self, t: float, error_minus: float = 0.0, error_plus: float = 0.0) -> ComagReading:
        """Current carriers converted to a field / temperature reading."""
        B_est, dT_est = line_center_estimate(self.f_minus, self.f_plus, self.constants)
        return ComagReading(
            t=t,
            f_minus=self.f_minus,
            f_plus=self.f_plus,
            B_est=B_est,
            dT_est=dT_est,
            error_minus=error_minus,
            error_plus=error_plus,
            locked=self.locked,
        )

    def _check_divergence(self, t: float, correction: float):
        floor = DIVERGENCE_FLOOR * self.config.line_width
        if correction > self._last_correction and correction > floor:
            self._growing += 1
        else:
            self._growing = 0
        self._last_correction = correction

        if self._growing >= self.config.divergence_steps and self.locked:
            self.locked = False
            logger.warning("comag_loop_diverged", t=t, steps=self._growing, correction_hz=correction)
            if self.config.strict:
                raise LoopDivergenceError(
                    f"Comagnetometer loop error grew for {self._growing} consecutive acquisitions at t={t:.3f} s"
                )

    def update(self, acquisition: TimeSeries, t: Optional[float] = None) -> ComagReading:
        """Demodulate one acquisition, move both carriers and return the new reading."""
        t = float(acquisition.time[-1]) if t is None else t
        error_minus = fm_demodulate(acquisition, self.config.f_mod_minus)
        error_plus = fm_demodulate(acquisition, self.config.f_mod_plus)

        correction_minus = error_minus / self.slope_minus
        correction_plus = error_plus / self.slope_plus
        self._check_divergence(t, max(abs(correction_minus), abs(correction_plus)))

        gain = self.config.loop_gain
        self.f_minus -= gain * correction_minus
        self.f_plus -= gain * correction_plus

        reading = self.reading(t, error_minus, error_plus)
        self.history.append(reading)
        return reading
