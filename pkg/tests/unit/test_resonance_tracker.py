"""Unit tests for the two-line comagnetometer tracking loop."""

import pytest

from application.services.comag import discriminator_slope, synthesize_acquisition
from application.services.resonance_tracker import ResonanceTracker
from domain.exceptions import LoopDivergenceError, ValidationError
from domain.value_objects.comag_config import ComagConfig
from domain.value_objects.odmr_lineshape import OdmrLineshape


@pytest.fixture
def config():
    return ComagConfig()


@pytest.fixture
def lines(constants, environment):
    split = constants.gamma_e * environment.B_z
    return constants.D - split, constants.D + split


@pytest.fixture
def lineshape(lines, config):
    return OdmrLineshape(centers=lines, width=config.line_width, contrast=config.line_contrast)


def track(tracker, lineshape, steps, rng=None):
    reading = None
    for step in range(steps):
        acquisition = synthesize_acquisition(
            lineshape, tracker.f_minus, tracker.f_plus, tracker.config, t0=step * tracker.config.acquisition, rng=rng
        )
        reading = tracker.update(acquisition)
    return reading


class TestResonanceTracker:
    """Integral lock on both electron lines."""

    def test_default_slope_matches_single_line(self, constants, config):
        tracker = ResonanceTracker(constants, config, 2.8e9, 2.9e9)
        reference = OdmrLineshape(centers=(0.0,), width=config.line_width, contrast=config.line_contrast)
        assert tracker.slope_minus == pytest.approx(discriminator_slope(reference, 0.0, config.span))
        assert tracker.slope_minus > 0

    def test_rejects_negative_slope(self, constants, config):
        with pytest.raises(ValidationError, match="slopes"):
            ResonanceTracker(constants, config, 2.8e9, 2.9e9, slope_minus=-1.0)

    def test_converges_from_an_offset(self, constants, config, lineshape, lines):
        """Carriers started 50 kHz off settle on the line centers."""
        f_minus, f_plus = lines
        tracker = ResonanceTracker.from_lineshape(constants, config, lineshape, f_minus + 50e3, f_plus - 50e3)
        reading = track(tracker, lineshape, 12)
        assert reading.f_minus == pytest.approx(f_minus, abs=10.0)
        assert reading.f_plus == pytest.approx(f_plus, abs=10.0)
        assert reading.locked

    def test_reading_reports_field_and_temperature(self, constants, config, lineshape, lines, environment):
        tracker = ResonanceTracker.from_lineshape(constants, config, lineshape, *lines)
        reading = track(tracker, lineshape, 3)
        assert reading.B_est == pytest.approx(environment.B_z, rel=1e-6)
        assert reading.dT_est == pytest.approx(0.0, abs=1e-3)

    def test_follows_a_thermal_shift(self, constants, config, lineshape, lines):
        """A +300 kHz common-mode move is read back as -4 K."""
        tracker = ResonanceTracker.from_lineshape(constants, config, lineshape, *lines)
        reading = track(tracker, lineshape.shifted(300e3), 20)
        assert reading.dT_est == pytest.approx(-4.0, abs=0.1)

    def test_history_is_kept(self, constants, config, lineshape, lines):
        tracker = ResonanceTracker.from_lineshape(constants, config, lineshape, *lines)
        track(tracker, lineshape, 4)
        assert len(tracker.history) == 4
        assert tracker.history[-1].t == pytest.approx(4 * config.acquisition - 1 / config.sample_rate)

    def test_noisy_lock_stays_near_center(self, constants, config, lineshape, lines, rng):
        tracker = ResonanceTracker.from_lineshape(constants, config, lineshape, *lines)
        reading = track(tracker, lineshape, 20, rng)
        assert reading.f_minus == pytest.approx(lines[0], abs=5e3)
        assert reading.locked


class TestDivergence:
    """Loss-of-lock detection."""

    def _overdriven(self, constants, config, lineshape, lines):
        f_minus, f_plus = lines
        true_minus = discriminator_slope(lineshape, f_minus, config.span)
        true_plus = discriminator_slope(lineshape, f_plus, config.span)
        return ResonanceTracker(
            constants, config, f_minus + 50e3, f_plus + 50e3, slope_minus=true_minus / 3, slope_plus=true_plus / 3
        )

    def test_growing_corrections_unlock(self, constants, lineshape, lines):
        """An over-driven loop is flagged and logged but keeps running."""
        config = ComagConfig(divergence_steps=2)
        tracker = self._overdriven(constants, config, lineshape, lines)
        reading = track(tracker, lineshape, 2)
        assert not tracker.locked
        assert not reading.locked

    def test_strict_mode_raises(self, constants, lineshape, lines):
        config = ComagConfig(divergence_steps=2, strict=True)
        tracker = self._overdriven(constants, config, lineshape, lines)
        with pytest.raises(LoopDivergenceError, match="consecutive"):
            track(tracker, lineshape, 2)
