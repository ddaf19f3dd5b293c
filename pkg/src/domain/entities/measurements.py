"""Measurement records produced by the simulator."""

from dataclasses import dataclass
from typing import Any, List, Tuple

from ..exceptions import ValidationError


@dataclass(frozen=True)
class TransitionLine:
    """One row of the transition table."""

    label: str
    m_s_pair: str
    m_i: str
    frequency: float    # Hz


@dataclass(frozen=True)
class ReadoutResult:
    """Referenced readout of one state.

    ``photons`` holds the counts of the plain arm and of the arm preceded by
    the RF5 π pulse.
    """

    signal: float
    photons: Tuple[float, float]
    unreferenced_signal: float

    def __post_init__(self):
        if min(self.photons) < 0:
            raise ValidationError(f"Photon counts cannot be negative, got {self.photons}", field="photons")


@dataclass(frozen=True)
class ComagReading:
    """Tracked electron resonances and the field / temperature derived from them."""

    t: float
    f_minus: float
    f_plus: float
    B_est: float
    dT_est: float
    error_minus: float = 0.0
    error_plus: float = 0.0
    locked: bool = True


@dataclass(frozen=True)
class GyroSample:
    """One alternating-slope rotation measurement."""

    t: float
    s_n: float
    s_p: float
    delta_omega: float  # rad/s, doubled DQ beat shift


@dataclass(frozen=True)
class ScenarioRecord:
    """One row of the main scenario output. Rotation in deg/s."""

    t: float
    omega_true: float
    omega_nv: float
    omega_raw: float
    omega_mems: float
    b_nt: float
    dt_k: float
    s_n: float
    s_p: float

    CSV_HEADER = (
        "t_s",
        "omega_true_dps",
        "omega_nv_dps",
        "omega_raw_dps",
        "omega_mems_dps",
        "b_nt",
        "dt_k",
        "s_n",
        "s_p",
    )

    def to_row(self) -> List[float]:
        return [
            self.t,
            self.omega_true,
            self.omega_nv,
            self.omega_raw,
            self.omega_mems,
            self.b_nt,
            self.dt_k,
            self.s_n,
            self.s_p,
        ]


@dataclass
class ScenarioResult:
    """Everything a scenario run produced.

    ``records`` have passed the startup gate; ``readings`` and ``samples``
    cover the whole timeline.
    """

    records: List[ScenarioRecord]
    readings: List[ComagReading]
    samples: List[GyroSample]
    baseline_B: float
    working_point: Any = None

    def column(self, name: str) -> List[float]:
        """One output column of the gated records by CSV header name."""
        index = ScenarioRecord.CSV_HEADER.index(name)
        return [record.to_row()[index] for record in self.records]
