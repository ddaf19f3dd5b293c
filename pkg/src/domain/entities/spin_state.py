"""Density-matrix state of the electron (spin-1) ⊗ 14N (spin-1) system."""

from dataclasses import dataclass
from typing import Dict, Iterable, Optional

import numpy as np

from ..exceptions import ValidationError
from ..value_objects.transition import SPIN_PROJECTIONS

DIMENSION = 9
HERMITICITY_TOLERANCE = 1e-12
TRACE_TOLERANCE = 1e-12
POSITIVITY_TOLERANCE = 1e-10


def basis_index(m_s: int, m_i: int) -> int:
    """Index of |m_s>⊗|m_i> in the product basis ordered +1, 0, -1."""
    if m_s not in SPIN_PROJECTIONS or m_i not in SPIN_PROJECTIONS:
        raise ValidationError(f"Spin projections must be in {{-1, 0, 1}}, got ({m_s}, {m_i})")
    return (1 - m_s) * 3 + (1 - m_i)


def basis_labels() -> Iterable:
    """(m_s, m_i) for every basis index, in order."""
    return [(m_s, m_i) for m_s in SPIN_PROJECTIONS for m_i in SPIN_PROJECTIONS]


@dataclass(frozen=True, eq=False)
class SpinState:
    """9×9 density matrix in the |m_s>⊗|m_i> product basis.

    Construction checks shape, finiteness, Hermiticity and unit trace;
    ``is_physical`` additionally checks positivity.
    """

    rho: np.ndarray

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)

        if rho.shape != (DIMENSION, DIMENSION):
            raise ValidationError(f"Density matrix must be 9x9, got {rho.shape}", field="rho")

        if not np.all(np.isfinite(rho)):
            raise ValidationError("Density matrix contains non-finite entries", field="rho")

        if np.max(np.abs(rho - rho.conj().T)) > HERMITICITY_TOLERANCE:
            raise ValidationError("Density matrix is not Hermitian", field="rho")

        trace = np.trace(rho).real
        if abs(trace - 1.0) > TRACE_TOLERANCE:
            raise ValidationError(f"Density matrix trace must be 1, got {trace:.15f}", field="rho")

        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @classmethod
    def pure(cls, m_s: int, m_i: int) -> "SpinState":
        """The product state |m_s>⊗|m_i>."""
        rho = np.zeros((DIMENSION, DIMENSION), dtype=complex)
        index = basis_index(m_s, m_i)
        rho[index, index] = 1.0
        return cls(rho)

    @classmethod
    def from_vector(cls, psi: np.ndarray) -> "SpinState":
        """Projector onto a (normalised) state vector."""
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def from_populations(cls, populations: Dict[tuple, float]) -> "SpinState":
        """Diagonal state from {(m_s, m_i): population}."""
        rho = np.zeros((DIMENSION, DIMENSION), dtype=complex)
        for (m_s, m_i), population in populations.items():
            rho[basis_index(m_s, m_i), basis_index(m_s, m_i)] = population
        return cls(rho)

    @classmethod
    def thermal_nuclear(cls, m_s: int = 0) -> "SpinState":
        """Electron in m_s, nucleus maximally mixed."""
        return cls.from_populations({(m_s, m_i): 1.0 / 3.0 for m_i in SPIN_PROJECTIONS})

    def populations(self) -> np.ndarray:
        """Diagonal of rho (real)."""
        return np.real(np.diag(self.rho)).copy()

    def population(self, m_s: int, m_i: int) -> float:
        index = basis_index(m_s, m_i)
        return float(self.rho[index, index].real)

    def nuclear_populations(self, m_s: Optional[int] = None) -> Dict[int, float]:
        """Nuclear populations, marginal over the electron unless m_s is given."""
        manifolds = SPIN_PROJECTIONS if m_s is None else (m_s,)
        return {
            m_i: sum(self.population(ms, m_i) for ms in manifolds)
            for m_i in SPIN_PROJECTIONS
        }

    def electron_populations(self) -> Dict[int, float]:
        return {
            m_s: sum(self.population(m_s, m_i) for m_i in SPIN_PROJECTIONS)
            for m_s in SPIN_PROJECTIONS
        }

    def coherence(self, a: tuple, b: tuple) -> complex:
        """Matrix element <a|rho|b> for product levels a=(m_s, m_i), b=(m_s, m_i)."""
        return complex(self.rho[basis_index(*a), basis_index(*b)])

    def purity(self) -> float:
        return float(np.real(np.trace(self.rho @ self.rho)))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.rho)

    def is_physical(self) -> bool:
        """Positivity within tolerance (Hermiticity and trace hold by construction)."""
        return bool(np.min(self.eigenvalues()) >= -POSITIVITY_TOLERANCE)
