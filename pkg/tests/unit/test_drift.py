"""Unit tests for the thermal transient and comagnetometer compensation."""

import math
from dataclasses import dataclass

import numpy as np
import pytest

from application.services.drift import (
    check_fresh,
    compensate,
    establish_baseline,
    fit_thermal_transient,
    startup_gate,
    temperature_offset,
    thermal_shift,
)
from domain.entities.measurements import ComagReading
from domain.exceptions import StaleReadingError, ValidationError
from domain.value_objects.thermal_model import ThermalModel

TWO_PI = 2.0 * math.pi


@dataclass
class Stamped:
    t: float


def reading(t: float, B: float = 1.17e-3) -> ComagReading:
    return ComagReading(t=t, f_minus=2.8e9, f_plus=2.9e9, B_est=B, dT_est=0.0)


class TestThermalShift:
    """Exponential approach after laser turn-on."""

    def test_one_time_constant(self):
        """At t = tau the shift is 300 kHz·(1 - 1/e) ≈ 189.6 kHz."""
        assert thermal_shift(ThermalModel(), 54.0) == pytest.approx(189.6e3, abs=100.0)

    def test_asymptote(self):
        assert thermal_shift(ThermalModel(), 1e4) == pytest.approx(300e3, rel=1e-9)

    def test_starts_at_zero(self):
        assert thermal_shift(ThermalModel(), 0.0) == 0.0

    def test_array_input(self):
        shifts = thermal_shift(ThermalModel(), np.array([0.0, 54.0, 108.0]))
        assert shifts.shape == (3,)
        assert np.all(np.diff(shifts) > 0)

    def test_negative_time(self):
        with pytest.raises(ValidationError, match="negative"):
            thermal_shift(ThermalModel(), -1.0)

    def test_temperature_reaches_minus_four_kelvin(self, constants):
        assert temperature_offset(ThermalModel(), 1e4, constants) == pytest.approx(-4.0, rel=1e-6)

    def test_inactive_model(self, constants):
        model = ThermalModel.inactive()
        assert thermal_shift(model, 100.0) == 0.0
        assert temperature_offset(model, 100.0, constants) == 0.0


class TestThermalModel:
    def test_default_is_consistent(self, constants):
        """300 kHz over -4 K is -75 kHz/K."""
        model = ThermalModel()
        assert model.coefficient == pytest.approx(-75e3)
        assert model.is_consistent_with(constants.dD_dT)

    def test_inconsistent_coefficient(self):
        assert not ThermalModel(amplitude=300e3, dT_total=-2.0).is_consistent_with(-75e3)

    def test_amplitude_and_temperature_go_together(self):
        with pytest.raises(ValidationError, match="both be zero"):
            ThermalModel(amplitude=0.0, dT_total=-4.0)

    def test_tau_must_be_positive(self):
        with pytest.raises(ValidationError, match="tau"):
            ThermalModel(tau=0.0)


class TestCompensate:
    """Removal of the field excursion from the raw beat shift."""

    def test_removes_field_excursion(self, constants):
        """A 10 nT excursion on top of 0.5 rad/s comes back as 0.5 rad/s."""
        dB = 10e-9
        raw = 2.0 * (TWO_PI * constants.gamma_n * dB + 0.5)
        assert compensate(raw, reading(1.0, 1.17e-3 + dB), 1.17e-3, constants) == pytest.approx(0.5, rel=1e-9)

    def test_no_excursion_halves_the_beat(self, constants):
        assert compensate(1.0, reading(1.0), 1.17e-3, constants) == pytest.approx(0.5)

    def test_compensation_reduces_drift(self, constants, rng):
        """A slow field wander disappears from the compensated series."""
        t = np.linspace(0.0, 100.0, 500)
        field = 1.17e-3 + 50e-9 * np.sin(TWO_PI * t / 40.0)
        omega = 0.2
        raw = 2.0 * (TWO_PI * constants.gamma_n * (field - 1.17e-3) + omega) + rng.normal(0, 1e-3, t.size)
        readings = [reading(ti, Bi + rng.normal(0, 1e-10)) for ti, Bi in zip(t, field)]

        compensated = np.array([compensate(r, c, 1.17e-3, constants) for r, c in zip(raw, readings)])
        assert np.std(compensated - omega) < 0.1 * np.std(0.5 * raw - omega)


class TestFreshness:
    def test_recent_reading_passes(self):
        comag = reading(1.00)
        assert check_fresh(comag, 1.04, 0.05) is comag

    def test_stale_reading_raises(self):
        with pytest.raises(StaleReadingError, match="old"):
            check_fresh(reading(1.00), 1.2, 0.05)


class TestStartupGate:
    def test_boundary_is_inclusive(self):
        """Records at exactly the discard time pass."""
        records = [Stamped(199.9), Stamped(200.0), Stamped(200.1)]
        kept = list(startup_gate(records, ThermalModel()))
        assert [r.t for r in kept] == [200.0, 200.1]

    def test_zero_discard_keeps_everything(self):
        records = [Stamped(0.0), Stamped(1.0)]
        assert len(list(startup_gate(records, ThermalModel.inactive()))) == 2


class TestBaseline:
    """Field baseline after the startup discard."""

    def test_mean_over_window(self):
        model = ThermalModel(discard=10.0, baseline_window=5.0)
        readings = [reading(5.0, 9.0), reading(11.0, 1.0), reading(14.0, 3.0), reading(20.0, 7.0)]
        assert establish_baseline(readings, model) == pytest.approx(2.0)

    def test_fallback_to_first_reading_after_discard(self):
        model = ThermalModel(discard=10.0, baseline_window=1.0)
        readings = [reading(5.0, 9.0), reading(12.0, 4.0), reading(13.0, 6.0)]
        assert establish_baseline(readings, model) == 4.0

    def test_no_reading_after_discard(self):
        with pytest.raises(ValidationError, match="discard"):
            establish_baseline([reading(5.0)], ThermalModel(discard=10.0))


class TestFitThermalTransient:
    def test_recovers_time_constant(self, rng):
        """A noisy simulated startup gives tau = 54 ± 2 s."""
        t = np.arange(0.0, 300.0, 1.0)
        shift = thermal_shift(ThermalModel(), t) + rng.normal(0.0, 1e3, t.size)
        fit = fit_thermal_transient(t, shift)
        assert fit.tau == pytest.approx(54.0, abs=2.0)
        assert fit.amplitude == pytest.approx(300e3, rel=0.02)

    def test_needs_three_points(self):
        with pytest.raises(ValidationError, match="at least 3"):
            fit_thermal_transient([0.0, 1.0], [0.0, 1.0])
