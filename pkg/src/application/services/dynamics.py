"""State evolution: gate-level pulses, free precession with dephasing, optical pumping."""

import math
from collections import defaultdict
from functools import lru_cache
from typing import Dict, List, Tuple

import numpy as np
import structlog

from domain.entities.spin_state import DIMENSION, SpinState, basis_index
from domain.exceptions import NumericalError, ValidationError
from domain.value_objects.decoherence import DecoherenceParams
from domain.value_objects.environment import Environment
from domain.value_objects.physical_constants import PhysicalConstants
from domain.value_objects.pulse import PulseChannel, PulseSpec
from domain.value_objects.transition import SPIN_PROJECTIONS, TransitionLabel, expand_targets

from .spin_core import M_I, build_gs_hamiltonian, secular_energy_differences

logger = structlog.get_logger(__name__)

Level = Tuple[int, int]

# Every transition a carrier on the channel can reach
CHANNEL_TRANSITIONS: Dict[PulseChannel, Tuple[TransitionLabel, ...]] = {
    PulseChannel.MW_MINUS: tuple(TransitionLabel("mw", -1, m_i) for m_i in SPIN_PROJECTIONS),
    PulseChannel.MW_PLUS: tuple(TransitionLabel("mw", 1, m_i) for m_i in SPIN_PROJECTIONS),
    PulseChannel.RF5: (TransitionLabel("rf", 0, 1), TransitionLabel("rf", 0, -1)),
    PulseChannel.RF72: tuple(TransitionLabel("rf", m_s, m_i) for m_s in (1, -1) for m_i in (1, -1)),
}


def group_by_hub(transitions: Tuple[TransitionLabel, ...]) -> Dict[Level, List[Level]]:
    """Map each shared lower level (hub) to the levels it is driven into.

    MW transitions share m_s=0 at fixed m_i, RF transitions share m_i=0
    inside one electron manifold.
    """
    hubs: Dict[Level, List[Level]] = defaultdict(list)
    for label in transitions:
        hub, spoke = label.levels
        if spoke in hubs[hub]:
            raise ValidationError(f"Transition {label} is targeted twice", field="target")
        hubs[hub].append(spoke)
    return dict(hubs)


@lru_cache(maxsize=256)
def pulse_unitary(targets: Tuple[str, ...], angle: float, phase: float) -> np.ndarray:
    """Ideal rotation exp(-i·angle/2·G) with G the hub-to-bright-state coupling.

    For a hub h driven into n spokes k, G = Σ_k (e^{-iφ}|k><h| + h.c.)/√n,
    so G² is the projector P onto span{h, bright} and
    U = I + Σ_hubs [(cos(θ/2) - 1)·P - i·sin(θ/2)·G].
    """
    U = np.eye(DIMENSION, dtype=complex)
    for hub, spokes in group_by_hub(expand_targets(targets)).items():
        h = basis_index(*hub)
        G = np.zeros((DIMENSION, DIMENSION), dtype=complex)
        for spoke in spokes:
            k = basis_index(*spoke)
            G[k, h] = np.exp(-1j * phase)
            G[h, k] = np.exp(1j * phase)
        G /= math.sqrt(len(spokes))
        P = G @ G
        U += (math.cos(angle / 2.0) - 1.0) * P - 1j * math.sin(angle / 2.0) * G

    U.setflags(write=False)
    return U


def _hermitian(rho: np.ndarray) -> np.ndarray:
    return 0.5 * (rho + rho.conj().T)


def apply_unitary(state: SpinState, U: np.ndarray, fidelity: float = 1.0) -> SpinState:
    """F·UρU† + (1 - F)·ρ."""
    rotated = U @ state.rho @ U.conj().T
    if fidelity >= 1.0:
        return SpinState(_hermitian(rotated))
    return SpinState(_hermitian(fidelity * rotated + (1.0 - fidelity) * state.rho))


def apply_pulse(state: SpinState, p: PulseSpec) -> SpinState:
    """Gate-level pulse: ideal rotation on the targeted subspace mixed with identity at 1 - fidelity.

    An RF5 π pulse maps |m_i=0> onto the bright state (|+1> + |-1>)/√2 inside m_s=0.
    """
    if p.angle == 0.0:
        return state
    return apply_unitary(state, pulse_unitary(p.target, float(p.angle), float(p.phase)), p.fidelity)


def _decay_mask(tau: float, d: DecoherenceParams) -> np.ndarray:
    delta_mi = np.abs(np.subtract.outer(M_I, M_I))
    mask = np.ones((DIMENSION, DIMENSION))
    mask[delta_mi == 1] = math.exp(-tau / d.T2_star_sq)
    mask[delta_mi == 2] = math.exp(-tau / d.T2_star_dq)
    return mask


def free_evolve(
    state: SpinState,
    env: Environment,
    tau: float,
    d: DecoherenceParams,
    c: PhysicalConstants = PhysicalConstants(),
    secular: bool = True,
) -> SpinState:
    """Free precession for ``tau`` seconds with nuclear dephasing.

    Populations are unchanged. Coherences with |Δm_i| = 2 decay as
    exp(-tau/T2*_dq), those with |Δm_i| = 1 as exp(-tau/T2*_sq).
    """
    if not tau >= 0:
        raise ValidationError(f"Evolution time cannot be negative, got {tau}", field="tau")
    if tau == 0:
        return state

    if secular:
        phases = np.exp(-1j * secular_energy_differences(c, env) * tau)
        rho = state.rho * phases
    else:
        energies, vectors = np.linalg.eigh(build_gs_hamiltonian(c, env, secular=False))
        U = vectors @ np.diag(np.exp(-1j * energies * tau)) @ vectors.conj().T
        rho = U @ state.rho @ U.conj().T

    rho = _hermitian(rho * _decay_mask(tau, d))
    if not np.all(np.isfinite(rho)):
        raise NumericalError(f"Free evolution produced non-finite entries at tau={tau}")
    return SpinState(rho)


def optical_pump(state: SpinState, q_preserve: float) -> SpinState:
    """Reset the electron to m_s=0.

    Nuclear populations survive with probability q_preserve and are spread
    uniformly otherwise; all coherences are erased.
    """
    if not 0.0 <= q_preserve <= 1.0:
        raise ValidationError(f"q_preserve must be between 0 and 1, got {q_preserve}", field="q_preserve")

    nuclear = state.nuclear_populations()
    return SpinState.from_populations(
        {(0, m_i): q_preserve * nuclear[m_i] + (1.0 - q_preserve) / 3.0 for m_i in SPIN_PROJECTIONS}
    )


def off_resonance_transfer(detuning: float, rabi: float) -> float:
    """Population transferred by a nominal π pulse whose carrier is detuned by ``detuning`` Hz."""
    if not rabi > 0:
        raise ValidationError(f"Rabi frequency must be positive, got {rabi}", field="rabi")
    ratio = (detuning / rabi) ** 2
    return float(math.sin(0.5 * math.pi * math.sqrt(1.0 + ratio)) ** 2 / (1.0 + ratio))
