"""Headline numbers of the simulator, checked end to end."""

import numpy as np
import pytest

from application.services.calibration import calibration_fit
from application.services.comag import equivalent_rotation_noise
from application.services.drift import fit_thermal_transient
from application.services.gyro_cycle import GyroCycleRunner
from application.services.noise_analysis import dominant_frequency
from application.services.protocol import polarization_recursion, ramsey_sweep
from application.services.scenario_runner import ScenarioRunner
from domain.entities.measurements import ScenarioRecord
from domain.entities.scenario import RotationSegment, Scenario
from domain.entities.spin_state import SpinState
from domain.entities.time_series import TimeSeries
from domain.value_objects.comag_config import ComagConfig
from domain.value_objects.mems_model import MemsModel
from domain.value_objects.protocol_settings import ProtocolSettings
from domain.value_objects.simulation_settings import SimulationSettings
from domain.value_objects.thermal_model import ThermalModel
from infrastructure.storage.csv_storage import render_csv

pytestmark = pytest.mark.slow


def make_runner(constants, protocol, decoherence, shot_noise=False):
    return ScenarioRunner(
        constants, protocol, decoherence, ComagConfig(), MemsModel(), SimulationSettings(shot_noise=shot_noise)
    )


class TestSpinPhysics:
    def test_fringe_at_7200_hz(self, constants, environment, no_decoherence, noise):
        """The double-quantum fringe over a 50 ms sweep sits at 2·γn·B = 7200 Hz within 0.1 %."""
        taus = np.arange(2000) * 25e-6
        signal = ramsey_sweep(SpinState.pure(0, 0), environment, taus, no_decoherence, noise, constants)
        series = TimeSeries.uniform(signal, 1.0 / 25e-6)
        assert dominant_frequency(series) == pytest.approx(2 * constants.gamma_n * environment.B_z, rel=1e-3)
        assert dominant_frequency(series) == pytest.approx(7200.0, rel=2e-3)

    def test_polarization_reaches_77_percent(self, constants, decoherence, noise):
        protocol = ProtocolSettings()
        runner = GyroCycleRunner(constants, protocol, decoherence, noise, shot_noise=False)
        p0 = runner.polarized_state().nuclear_populations()[0]
        assert p0 == pytest.approx(0.77, abs=0.005)
        assert p0 == pytest.approx(polarization_recursion(1.0 / 3.0, 4, 0.701, 0.9)[-1], abs=1e-9)

    def test_ten_nanotesla_is_eleven_degrees_per_second(self, constants):
        assert equivalent_rotation_noise(10e-9, constants) == pytest.approx(11.08, abs=0.005)


class TestScenarios:
    """Harness-level behavior."""

    def test_stationary_noise_free_run_reads_zero(self, constants, decoherence):
        scenario = Scenario(
            segments=(RotationSegment(1.0, 0.0),), thermal=ThermalModel.inactive(discard=0.5, baseline_window=0.5)
        )
        result = make_runner(constants, ProtocolSettings(), decoherence).run(scenario)
        for record in result.records:
            assert record.omega_true == 0.0
            assert record.omega_mems == 0.0
            assert abs(record.omega_nv) < 0.06
            assert abs(record.dt_k) < 0.01

    def test_same_seed_gives_identical_csv(self, constants, decoherence):
        scenario = Scenario(
            segments=(RotationSegment(0.2, 30.0),),
            thermal=ThermalModel.inactive(discard=0.1, baseline_window=0.1),
            seed=42,
        )

        def csv_text():
            result = make_runner(constants, ProtocolSettings(), decoherence, shot_noise=True).run(scenario)
            return render_csv(ScenarioRecord.CSV_HEADER, [record.to_row() for record in result.records])

        assert csv_text() == csv_text()

    def test_truth_against_truth_is_a_perfect_line(self):
        records = [
            ScenarioRecord(k * 0.1, rate, rate, rate, rate, 0.0, 0.0, 0.0, 0.0)
            for k, rate in enumerate([0.0] * 10 + [30.0] * 10 + [-60.0] * 10)
        ]
        result = calibration_fit(records, measured="omega_true")
        assert result.slope == pytest.approx(1.0)
        assert result.r_squared == pytest.approx(1.0)

    def test_cothermometer_recovers_the_warm_up(self, constants, decoherence):
        """A compressed warm-up (tau 2 s) is tracked to -4 K and its time constant recovered."""
        thermal = ThermalModel(tau=2.0, discard=10.0, baseline_window=0.5)
        scenario = Scenario(segments=(RotationSegment(0.5, 0.0),), thermal=thermal)
        result = make_runner(constants, ProtocolSettings(), decoherence).run(scenario)

        t = np.array([reading.t for reading in result.readings])
        shift = constants.dD_dT * np.array([reading.dT_est for reading in result.readings])
        fit = fit_thermal_transient(t, shift)
        assert fit.tau == pytest.approx(2.0, rel=0.02)
        assert fit.amplitude == pytest.approx(300e3, rel=0.02)
        assert result.readings[-1].dT_est == pytest.approx(-4.0, abs=0.05)
