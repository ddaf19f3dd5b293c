"""Dephasing parameters."""

import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

from ..exceptions import ValidationError


@dataclass(frozen=True)
class DecoherenceParams:
    """Inhomogeneous dephasing times of the nuclear coherences.

    ``T2_star_sq`` defaults to twice ``T2_star_dq``. Infinite values disable decay.
    """

    T2_star_dq: float = 2.37e-3
    T2_star_sq: Optional[float] = None

    def __post_init__(self):
        if self.T2_star_sq is None:
            object.__setattr__(self, "T2_star_sq", 2.0 * self.T2_star_dq)

        for name in ("T2_star_dq", "T2_star_sq"):
            value = getattr(self, name)
            if math.isnan(value) or value <= 0:
                raise ValidationError(f"{name} must be positive, got {value}", field=name)

    @classmethod
    def none(cls) -> "DecoherenceParams":
        """No dephasing."""
        return cls(T2_star_dq=math.inf, T2_star_sq=math.inf)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DecoherenceParams":
        filtered_data = {k: float(v) for k, v in data.items() if v is not None}
        return cls(**filtered_data)

    def to_dict(self) -> Dict[str, Any]:
        return {"T2_star_dq": self.T2_star_dq, "T2_star_sq": self.T2_star_sq}
