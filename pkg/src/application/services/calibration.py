"""Scale-factor calibration of the NV gyroscope against a reference."""

from typing import List, Sequence, Tuple

import numpy as np
import structlog
from scipy import stats

from domain.entities.analysis import CalibrationResult
from domain.entities.measurements import ScenarioRecord
from domain.exceptions import ValidationError

logger = structlog.get_logger(__name__)

REFERENCES = {"true": "omega_true", "mems": "omega_mems"}
MIN_SETPOINTS = 3


def segment_means(
    records: Sequence[ScenarioRecord],
    measured: str = "omega_nv",
    reference: str = "true",
    settle: float = 0.1,
) -> List[Tuple[float, float, float]]:
    """(setpoint, mean reference, mean measured) per constant-rate segment.

    Records within ``settle`` seconds of a setpoint change are left out.
    """
    if reference not in REFERENCES:
        raise ValidationError(f"Unknown reference '{reference}', expected one of {list(REFERENCES)}", field="reference")

    ordered = sorted(records, key=lambda record: record.t)
    if not ordered:
        return []

    changes = [
        ordered[i].t for i in range(1, len(ordered)) if ordered[i].omega_true != ordered[i - 1].omega_true
    ]

    segments: List[List[ScenarioRecord]] = [[]]
    previous = ordered[0].omega_true
    for record in ordered:
        if record.omega_true != previous:
            segments.append([])
            previous = record.omega_true
        if all(abs(record.t - change) >= settle for change in changes):
            segments[-1].append(record)

    means = []
    for segment in segments:
        if not segment:
            continue
        setpoint = segment[0].omega_true
        reference_mean = float(np.mean([getattr(r, REFERENCES[reference]) for r in segment]))
        measured_mean = float(np.mean([getattr(r, measured) for r in segment]))
        means.append((setpoint, reference_mean, measured_mean))
    return means


def calibration_fit(
    records: Sequence[ScenarioRecord],
    reference: str = "true",
    measured: str = "omega_nv",
    settle: float = 0.1,
    confidence: float = 0.95,
) -> CalibrationResult:
    """Least-squares line of per-segment mean measured rate against the reference rate."""
    means = segment_means(records, measured, reference, settle)
    setpoints = {round(setpoint, 9) for setpoint, _, _ in means}
    if len(setpoints) < MIN_SETPOINTS:
        raise ValidationError(
            f"Calibration needs at least {MIN_SETPOINTS} distinct rotation setpoints, got {len(setpoints)}",
            field="records",
        )

    x = np.array([reference_mean for _, reference_mean, _ in means])
    y = np.array([measured_mean for _, _, measured_mean in means])
    fit = stats.linregress(x, y)

    dof = len(x) - 2
    if dof > 0:
        t_value = float(stats.t.ppf(0.5 + 0.5 * confidence, dof))
        slope_half = t_value * fit.stderr
        intercept_half = t_value * fit.intercept_stderr
    else:
        slope_half = intercept_half = float("nan")

    result = CalibrationResult(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue ** 2),
        slope_ci=(float(fit.slope - slope_half), float(fit.slope + slope_half)),
        intercept_ci=(float(fit.intercept - intercept_half), float(fit.intercept + intercept_half)),
        setpoints=len(setpoints),
        reference=reference,
    )
    logger.debug("calibration_fit", **result.to_dict())
    return result
