"""Spin operators and ground-state Hamiltonian of the NV electron / 14N nuclear system."""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np
import qutip
import structlog

from domain.entities.measurements import TransitionLine
from domain.entities.spin_state import DIMENSION, basis_index, basis_labels
from domain.exceptions import NumericalError
from domain.value_objects.environment import Environment
from domain.value_objects.odmr_lineshape import OdmrLineshape
from domain.value_objects.physical_constants import PhysicalConstants
from domain.value_objects.transition import (
    F5,
    F72,
    SPIN_PROJECTIONS,
    TRANSITION_CLASSES,
    TransitionLabel,
    mw_label,
    rf_label,
)

logger = structlog.get_logger(__name__)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class SpinOperators:
    """Spin-1 operators of the electron (S) and the nucleus (I) on the 9-dim product space."""

    S_x: np.ndarray
    S_y: np.ndarray
    S_z: np.ndarray
    I_x: np.ndarray
    I_y: np.ndarray
    I_z: np.ndarray


@lru_cache(maxsize=1)
def spin1_operators() -> SpinOperators:
    """{S_x, S_y, S_z, I_x, I_y, I_z} as 9×9 matrices in the |m_s>⊗|m_i> basis."""
    identity = qutip.qeye(3)
    matrices = {}
    for axis in ("x", "y", "z"):
        matrices[f"S_{axis}"] = qutip.tensor(qutip.jmat(1, axis), identity).full()
        matrices[f"I_{axis}"] = qutip.tensor(identity, qutip.jmat(1, axis)).full()

    for matrix in matrices.values():
        matrix.setflags(write=False)

    return SpinOperators(**matrices)


def _quantum_numbers() -> Tuple[np.ndarray, np.ndarray]:
    labels = basis_labels()
    m_s = np.array([label[0] for label in labels], dtype=float)
    m_i = np.array([label[1] for label in labels], dtype=float)
    return m_s, m_i


M_S, M_I = _quantum_numbers()


def build_gs_hamiltonian(c: PhysicalConstants, env: Environment, secular: bool = True) -> np.ndarray:
    """Ground-state Hamiltonian in rad/s.

    H = 2π[(D + dD/dT·dT)S_z² + γe·B_z·S_z + A∥·S_z·I_z + Q·I_z² + γn·B_z·I_z] + Ω·I_z.
    With ``secular=False`` the transverse hyperfine A⊥(S_x·I_x + S_y·I_y) is added.
    """
    ops = spin1_operators()

    D = c.d_at(env.dT)
    Q = c.q_at(env.dT)

    H = TWO_PI * (
        D * ops.S_z @ ops.S_z
        + c.gamma_e * env.B_z * ops.S_z
        + c.A_par * ops.S_z @ ops.I_z
        + Q * ops.I_z @ ops.I_z
        + c.gamma_n * env.B_z * ops.I_z
    ) + env.Omega * ops.I_z

    if not secular:
        H = H + TWO_PI * c.A_perp * (ops.S_x @ ops.I_x + ops.S_y @ ops.I_y)

    H = 0.5 * (H + H.conj().T)
    if not np.all(np.isfinite(H)):
        raise NumericalError("Hamiltonian has non-finite entries")
    return H


def secular_energies(c: PhysicalConstants, env: Environment) -> np.ndarray:
    """Diagonal of the secular Hamiltonian (rad/s), indexed like the product basis."""
    D = c.d_at(env.dT)
    Q = c.q_at(env.dT)
    return TWO_PI * (
        D * M_S ** 2 + c.gamma_e * env.B_z * M_S + c.A_par * M_S * M_I + Q * M_I ** 2 + c.gamma_n * env.B_z * M_I
    ) + env.Omega * M_I


def secular_energy_differences(c: PhysicalConstants, env: Environment) -> np.ndarray:
    """Matrix of E_j - E_k (rad/s) built from quantum-number differences.

    Terms whose quantum numbers agree cancel exactly, so the DQ gap inside
    m_s=0 is exactly 2(2π·γn·B_z + Ω) in floating point.
    """
    D = c.d_at(env.dT)
    Q = c.q_at(env.dT)

    d_ms2 = np.subtract.outer(M_S ** 2, M_S ** 2)
    d_ms = np.subtract.outer(M_S, M_S)
    d_msmi = np.subtract.outer(M_S * M_I, M_S * M_I)
    d_mi2 = np.subtract.outer(M_I ** 2, M_I ** 2)
    d_mi = np.subtract.outer(M_I, M_I)

    return TWO_PI * (
        D * d_ms2 + c.gamma_e * env.B_z * d_ms + c.A_par * d_msmi + Q * d_mi2 + c.gamma_n * env.B_z * d_mi
    ) + env.Omega * d_mi


def eigenlevels(c: PhysicalConstants, env: Environment, secular: bool = True) -> Dict[Tuple[int, int], float]:
    """Energy (rad/s) of each level, labelled by its dominant product state."""
    if secular:
        energies = secular_energies(c, env)
        return {label: float(energies[basis_index(*label)]) for label in basis_labels()}

    values, vectors = np.linalg.eigh(build_gs_hamiltonian(c, env, secular=False))
    dominant = np.argmax(np.abs(vectors) ** 2, axis=0)
    if len(set(dominant.tolist())) != DIMENSION:
        raise NumericalError("Eigenstates are too strongly mixed to label by product state")

    labels = basis_labels()
    return {labels[index]: float(value) for index, value in zip(dominant, values)}


def transition_frequencies(c: PhysicalConstants, env: Environment, secular: bool = True) -> Dict[str, float]:
    """MW and RF line frequencies in Hz, plus the f5 and f7.2 class centers."""
    levels = eigenlevels(c, env, secular)
    frequencies: Dict[str, float] = {}

    for m_s in (-1, 1):
        for m_i in SPIN_PROJECTIONS:
            frequencies[mw_label(m_s, m_i)] = (levels[(m_s, m_i)] - levels[(0, m_i)]) / TWO_PI

    for m_s in SPIN_PROJECTIONS:
        for m_i in (1, -1):
            frequencies[rf_label(m_s, m_i)] = abs(levels[(m_s, m_i)] - levels[(m_s, 0)]) / TWO_PI

    for name, members in TRANSITION_CLASSES.items():
        frequencies[name] = float(np.mean([frequencies[label] for label in members]))

    return frequencies


def transition_table(c: PhysicalConstants, env: Environment, secular: bool = True) -> List[TransitionLine]:
    """Rows for the transition table output."""
    frequencies = transition_frequencies(c, env, secular)
    rows = []
    for label, frequency in frequencies.items():
        if label == F5:
            rows.append(TransitionLine(label, "0", "0/±1", frequency))
        elif label == F72:
            rows.append(TransitionLine(label, "±1", "0/±1", frequency))
        else:
            parsed = TransitionLabel.parse(label)
            rows.append(TransitionLine(label, parsed.m_s_pair, parsed.m_i_pair, frequency))
    return rows


def odmr_spectrum(
    c: PhysicalConstants,
    env: Environment,
    nuclear_populations: Optional[Dict[int, float]] = None,
    width: float = 1.0e6,
    contrast: float = 0.02,
    manifolds: Tuple[int, ...] = (-1, 1),
) -> OdmrLineshape:
    """ODMR lineshape of the MW lines with depths weighted by nuclear populations.

    Weights are 3·p(m_i), so a thermal nucleus gives unit weight per line.
    """
    populations = nuclear_populations or {m_i: 1.0 / 3.0 for m_i in SPIN_PROJECTIONS}
    frequencies = transition_frequencies(c, env)

    centers = []
    weights = []
    for m_s in manifolds:
        for m_i in SPIN_PROJECTIONS:
            centers.append(frequencies[mw_label(m_s, m_i)])
            weights.append(3.0 * populations[m_i])

    return OdmrLineshape(centers=tuple(centers), width=width, contrast=contrast, weights=tuple(weights))


def central_line(c: PhysicalConstants, env: Environment, m_s: int) -> float:
    """Frequency (Hz) of the m_i=0 electron line of manifold m_s."""
    return transition_frequencies(c, env)[mw_label(m_s, 0)]
