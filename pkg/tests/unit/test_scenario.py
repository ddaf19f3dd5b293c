"""Unit tests for the scenario timeline."""

import math

import pytest

from application.services.scenario_runner import derive_rng
from domain.entities.scenario import FieldEvent, FieldSine, RotationSegment, Scenario
from domain.exceptions import ValidationError
from domain.value_objects.noise_budget import NoiseBudget
from domain.value_objects.thermal_model import ThermalModel


@pytest.fixture
def scenario():
    return Scenario(
        segments=(RotationSegment(2.0, 30.0), RotationSegment(3.0, -60.0)),
        field_events=(FieldEvent(12.0, 20e-9), FieldEvent(11.0, 10e-9)),
        thermal=ThermalModel.inactive(discard=5.0, baseline_window=5.0),
    )


class TestScenario:
    """Segments, field disturbances and timing."""

    def test_lead_in_precedes_segments(self, scenario):
        assert scenario.lead_in == 10.0
        assert scenario.duration == 15.0
        assert scenario.segment_bounds() == [(10.0, 12.0, 30.0), (12.0, 15.0, -60.0)]

    def test_rate_at(self, scenario):
        assert scenario.rate_at(5.0) == 0.0
        assert scenario.rate_at(10.0) == 30.0
        assert scenario.rate_at(12.0) == -60.0
        assert scenario.rate_at(15.0) == 0.0

    def test_field_events_are_sorted_and_hold(self, scenario):
        assert [event.time for event in scenario.field_events] == [11.0, 12.0]
        assert scenario.delta_B_at(10.9) == 0.0
        assert scenario.delta_B_at(11.5) == pytest.approx(10e-9)
        assert scenario.delta_B_at(14.0) == pytest.approx(20e-9)

    def test_field_sine_adds_to_steps(self, scenario):
        scenario.field_sine = FieldSine(amplitude=5e-9, frequency=1.0)
        assert scenario.delta_B_at(11.25) == pytest.approx(15e-9)

    def test_needs_a_segment(self):
        with pytest.raises(ValidationError, match="at least one"):
            Scenario(segments=())

    def test_turntable_limit(self):
        with pytest.raises(ValidationError, match="turntable limit"):
            RotationSegment(1.0, 121.0)

    def test_segment_duration_must_be_positive(self):
        with pytest.raises(ValidationError):
            RotationSegment(0.0, 10.0)

    def test_from_dict_converts_units(self):
        data = {
            "name": "steps",
            "segments": [[1.0, 30], [2, -30]],
            "field_events": [[0.5, 10]],
            "field_sine": {"amplitude_nt": 2.0, "frequency_hz": 0.5},
        }
        built = Scenario.from_dict(data, ThermalModel.inactive(), NoiseBudget(), seed=3)
        assert built.name == "steps"
        assert built.seed == 3
        assert built.field_events[0].delta_B == pytest.approx(10e-9)
        assert built.field_sine.amplitude == pytest.approx(2e-9)
        assert built.field_sine.at(0.5) == pytest.approx(2e-9 * math.sin(math.pi * 0.5))


class TestDeriveRng:
    def test_streams_are_reproducible(self):
        assert derive_rng(7, 0).random() == derive_rng(7, 0).random()

    def test_streams_differ(self):
        assert derive_rng(7, 0).random() != derive_rng(7, 1).random()
        assert derive_rng(7, 0).random() != derive_rng(8, 0).random()
