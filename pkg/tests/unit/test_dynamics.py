"""Unit tests for pulses, free evolution and optical pumping."""

import math

import numpy as np
import pytest

from application.services.dynamics import (
    apply_pulse,
    free_evolve,
    group_by_hub,
    off_resonance_transfer,
    optical_pump,
    pulse_unitary,
)
from application.strategies.time_domain.strategy import TimeDomainStrategy
from domain.entities.spin_state import SpinState
from domain.exceptions import ValidationError
from domain.value_objects.decoherence import DecoherenceParams
from domain.value_objects.environment import Environment
from domain.value_objects.pulse import PulseChannel, PulseSpec
from domain.value_objects.transition import expand_targets

TWO_PI = 2.0 * math.pi


def bright_state() -> SpinState:
    return apply_pulse(SpinState.pure(0, 0), PulseSpec.rf5_pi())


def random_pulse(rng: np.random.Generator) -> PulseSpec:
    choices = [
        (PulseChannel.MW_MINUS, ("mw-1:mi+0",)),
        (PulseChannel.MW_PLUS, ("mw+1:mi+1",)),
        (PulseChannel.MW_PLUS, ("mw+1:mi-1", "mw+1:mi+0")),
        (PulseChannel.RF5, ("f5",)),
        (PulseChannel.RF72, ("f7.2",)),
    ]
    channel, target = choices[rng.integers(len(choices))]
    return PulseSpec(
        channel=channel,
        target=target,
        angle=float(rng.uniform(-2 * math.pi, 2 * math.pi)),
        phase=float(rng.uniform(0, 2 * math.pi)),
        fidelity=float(rng.uniform(0.5, 1.0)),
    )


class TestApplyPulse:
    """Gate-level pulses."""

    def test_rf5_pi_creates_bright_state(self):
        """RF5 π on |0,0> splits the population evenly onto m_i=±1."""
        nuclear = bright_state().nuclear_populations()
        assert nuclear[1] == pytest.approx(0.5, abs=1e-12)
        assert nuclear[0] == pytest.approx(0.0, abs=1e-12)
        assert nuclear[-1] == pytest.approx(0.5, abs=1e-12)

    def test_bright_state_coherence_is_symmetric(self):
        """<+1|ρ|-1> = 1/2 for the bright state."""
        coherence = bright_state().coherence((0, 1), (0, -1))
        assert coherence == pytest.approx(0.5, abs=1e-12)

    def test_zero_angle_is_identity(self):
        """A pulse with angle 0 returns the state unchanged."""
        state = SpinState.thermal_nuclear()
        pulse = PulseSpec(PulseChannel.RF5, ("f5",), angle=0.0)
        assert apply_pulse(state, pulse) is state

    def test_two_rf5_pi_pulses_return_population(self):
        """RF5 π twice maps |0,0> back onto itself."""
        state = apply_pulse(bright_state(), PulseSpec.rf5_pi())
        assert state.population(0, 0) == pytest.approx(1.0, abs=1e-12)

    def test_partial_fidelity_mixes_with_identity(self):
        """Fidelity F moves a fraction F of the population."""
        state = apply_pulse(SpinState.pure(0, 1), PulseSpec.pi(PulseChannel.MW_PLUS, "mw+1:mi+1", fidelity=0.8))
        assert state.population(1, 1) == pytest.approx(0.8, abs=1e-12)
        assert state.population(0, 1) == pytest.approx(0.2, abs=1e-12)

    def test_mw_pulse_is_nuclear_selective(self):
        """A selective MW π leaves other nuclear projections untouched."""
        state = apply_pulse(SpinState.thermal_nuclear(), PulseSpec.pi(PulseChannel.MW_MINUS, "mw-1:mi+0"))
        assert state.population(-1, 0) == pytest.approx(1 / 3, abs=1e-12)
        assert state.population(0, 1) == pytest.approx(1 / 3, abs=1e-12)
        assert state.population(0, -1) == pytest.approx(1 / 3, abs=1e-12)

    def test_rf72_moves_both_manifolds_to_mi0(self):
        """The f7.2 π moves (+1,+1) and (-1,-1) into m_i=0."""
        start = SpinState.from_populations({(1, 1): 0.5, (-1, -1): 0.5})
        state = apply_pulse(start, PulseSpec.rf72_pi())
        assert state.population(1, 0) == pytest.approx(0.5, abs=1e-12)
        assert state.population(-1, 0) == pytest.approx(0.5, abs=1e-12)

    def test_unknown_target_is_rejected(self):
        """A malformed label fails validation."""
        with pytest.raises(ValidationError, match="Unknown transition label"):
            PulseSpec(PulseChannel.RF5, ("rf+0:mi+2",))

    def test_target_on_wrong_channel_is_rejected(self):
        """MW lines cannot be driven on the RF5 channel."""
        with pytest.raises(ValidationError, match="not an m_s=0 nuclear line"):
            PulseSpec(PulseChannel.RF5, ("mw-1:mi+0",))

    def test_duplicate_target_is_rejected(self):
        """Targeting the same transition twice fails."""
        with pytest.raises(ValidationError, match="targeted twice"):
            group_by_hub(expand_targets(("f5", "rf+0:mi+1")))

    def test_ideal_pulses_are_unitary(self, rng):
        """Perfect pulses preserve purity."""
        for _ in range(50):
            pulse = random_pulse(rng).with_updates(fidelity=1.0)
            U = pulse_unitary(pulse.target, pulse.angle, pulse.phase)
            assert np.allclose(U @ U.conj().T, np.eye(9), atol=1e-12)

        state = SpinState.from_vector(rng.normal(size=9) + 1j * rng.normal(size=9))
        for _ in range(20):
            state = apply_pulse(state, random_pulse(rng).with_updates(fidelity=1.0))
        assert state.purity() == pytest.approx(1.0, abs=1e-10)


class TestFreeEvolve:
    """Free precession with dephasing."""

    def test_zero_time_is_identity(self, environment, decoherence):
        """tau = 0 returns the same state."""
        state = bright_state()
        assert free_evolve(state, environment, 0.0, decoherence) is state

    def test_negative_time_is_rejected(self, environment, decoherence):
        """tau < 0 fails."""
        with pytest.raises(ValidationError, match="negative"):
            free_evolve(bright_state(), environment, -1e-6, decoherence)

    def test_populations_are_unchanged(self, environment, decoherence):
        """Free evolution only touches coherences."""
        state = bright_state()
        evolved = free_evolve(state, environment, 1.3e-3, decoherence)
        assert np.allclose(evolved.populations(), state.populations(), atol=1e-15)

    def test_half_dq_period_reaches_dark_state(self, constants, environment, no_decoherence):
        """A DQ phase of π turns the bright state dark; RF5 π then leaves m_i=0 empty."""
        tau = math.pi / (2.0 * TWO_PI * constants.gamma_n * environment.B_z)
        evolved = free_evolve(bright_state(), environment, tau, no_decoherence, constants)
        assert evolved.coherence((0, 1), (0, -1)).real == pytest.approx(-0.5, abs=1e-9)

        final = apply_pulse(evolved, PulseSpec.rf5_pi())
        assert final.population(0, 0) == pytest.approx(0.0, abs=1e-9)

    def test_dq_coherence_decays_by_e_at_t2(self, environment, decoherence):
        """|<+1|ρ|-1>| falls to e^-1 after T2*_dq."""
        evolved = free_evolve(bright_state(), environment, decoherence.T2_star_dq, decoherence)
        magnitude = abs(evolved.coherence((0, 1), (0, -1)))
        assert magnitude == pytest.approx(0.5 * math.exp(-1.0), rel=1e-12)

    def test_sq_coherence_decays_with_sq_time(self, environment):
        """|Δm_i| = 1 coherences decay with T2*_sq."""
        d = DecoherenceParams(T2_star_dq=1e-3, T2_star_sq=4e-3)
        state = SpinState.from_vector([0, 1, 1, 0, 0, 0, 0, 0, 0])
        evolved = free_evolve(state, environment, 2e-3, d)
        assert abs(evolved.rho[1, 2]) == pytest.approx(0.5 * math.exp(-0.5), rel=1e-12)

    def test_rotation_advances_dq_phase(self, constants, environment, no_decoherence):
        """Rotation adds 2Ω·τ to the DQ phase."""
        tau = 1e-3
        still = free_evolve(bright_state(), environment, tau, no_decoherence, constants)
        rotating = free_evolve(bright_state(), environment.with_updates(Omega=10.0), tau, no_decoherence, constants)
        phase_still = np.angle(still.coherence((0, 1), (0, -1)))
        phase_rotating = np.angle(rotating.coherence((0, 1), (0, -1)))
        assert math.remainder(phase_still - phase_rotating, TWO_PI) == pytest.approx(2.0 * 10.0 * tau, abs=1e-9)

    def test_full_tensor_evolution_stays_physical(self, constants, environment, decoherence):
        """The full-tensor propagator keeps trace and positivity."""
        evolved = free_evolve(bright_state(), environment, 1e-3, decoherence, constants, secular=False)
        assert np.trace(evolved.rho).real == pytest.approx(1.0, abs=1e-12)
        assert evolved.is_physical()


class TestOpticalPump:
    """Electron reset with partial nuclear depolarization."""

    def test_full_preservation(self):
        """q = 1 keeps nuclear populations and resets the electron."""
        state = SpinState.from_populations({(1, 1): 0.2, (-1, 0): 0.5, (0, -1): 0.3})
        pumped = optical_pump(state, 1.0)
        assert pumped.electron_populations()[0] == pytest.approx(1.0)
        assert pumped.nuclear_populations() == pytest.approx({1: 0.2, 0: 0.5, -1: 0.3})

    def test_full_depolarization(self):
        """q = 0 leaves the nucleus maximally mixed."""
        pumped = optical_pump(SpinState.pure(1, 1), 0.0)
        assert pumped.nuclear_populations() == pytest.approx({1: 1 / 3, 0: 1 / 3, -1: 1 / 3})

    def test_partial_preservation(self):
        """q = 0.9 on {0, 1, 0} gives {1/30, 28/30, 1/30}."""
        pumped = optical_pump(SpinState.pure(0, 0), 0.9)
        assert pumped.nuclear_populations() == pytest.approx({1: 1 / 30, 0: 28 / 30, -1: 1 / 30})

    def test_coherences_are_erased(self):
        """The pumped state is diagonal."""
        pumped = optical_pump(bright_state(), 0.7)
        assert np.allclose(pumped.rho, np.diag(np.diag(pumped.rho)), atol=0)

    def test_invalid_probability(self):
        """q outside [0, 1] fails."""
        with pytest.raises(ValidationError, match="q_preserve"):
            optical_pump(SpinState.pure(0, 0), 1.5)


class TestStructuralInvariants:
    """Random operation sequences stay physical."""

    @pytest.mark.slow
    def test_random_sequences_preserve_trace_hermiticity_positivity(self, constants, decoherence, rng):
        """10⁴ random sequences of gate, time-domain and detuned pulses, evolution and pumping."""
        time_domain = TimeDomainStrategy(constants)
        for _ in range(10_000):
            state = SpinState.thermal_nuclear()
            env = Environment(B_z=float(rng.uniform(0, 2e-3)), Omega=float(rng.uniform(-2, 2)))
            for _ in range(8):
                choice = rng.integers(5)
                if choice == 0:
                    state = apply_pulse(state, random_pulse(rng))
                elif choice == 1:
                    state = time_domain.apply_pulse(state, random_pulse(rng), env)
                elif choice == 2:
                    transfer = off_resonance_transfer(float(rng.uniform(-500e3, 500e3)), 100e3)
                    state = apply_pulse(state, random_pulse(rng).with_updates(fidelity=transfer))
                elif choice == 3:
                    state = free_evolve(state, env, float(rng.uniform(0, 5e-3)), decoherence, constants)
                else:
                    state = optical_pump(state, float(rng.uniform(0, 1)))
            assert abs(np.trace(state.rho).real - 1.0) <= 1e-12
            assert np.max(np.abs(state.rho - state.rho.conj().T)) <= 1e-12
            assert state.is_physical()


class TestOffResonanceTransfer:
    """Detuned π pulse transfer."""

    def test_on_resonance(self):
        """Zero detuning transfers everything."""
        assert off_resonance_transfer(0.0, 100e3) == pytest.approx(1.0)

    def test_detuning_equal_to_rabi(self):
        """Δ = Ω_R gives sin²(π/√2)/2."""
        expected = math.sin(0.5 * math.pi * math.sqrt(2.0)) ** 2 / 2.0
        assert off_resonance_transfer(100e3, 100e3) == pytest.approx(expected)

    def test_small_detuning_is_quadratic(self):
        """A 1 kHz offset at 100 kHz Rabi costs well under 0.1 %."""
        assert 0.999 < off_resonance_transfer(1e3, 100e3) < 1.0

    def test_rabi_must_be_positive(self):
        with pytest.raises(ValidationError):
            off_resonance_transfer(0.0, 0.0)
