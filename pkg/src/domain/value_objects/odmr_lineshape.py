"""ODMR lineshape value object."""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from ..exceptions import ValidationError


@dataclass(frozen=True)
class OdmrLineshape:
    """Sum of Lorentzian fluorescence dips.

    ``contrast`` is the fractional dip of a line with unit weight; ``weights``
    scale individual lines (nuclear populations of a hyperfine triplet).
    """

    centers: Tuple[float, ...]
    width: float = 1.0e6
    contrast: float = 0.02
    weights: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "centers", tuple(float(c) for c in self.centers))
        if self.weights is None:
            object.__setattr__(self, "weights", tuple(1.0 for _ in self.centers))
        else:
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))

        if not self.centers:
            raise ValidationError("Lineshape needs at least one center", field="centers")

        if len(self.weights) != len(self.centers):
            raise ValidationError(
                f"Got {len(self.weights)} weights for {len(self.centers)} centers", field="weights"
            )

        if not all(math.isfinite(c) for c in self.centers):
            raise ValidationError("Line centers must be finite", field="centers")

        if any(w < 0 for w in self.weights):
            raise ValidationError("Line weights cannot be negative", field="weights")

        if not self.width > 0:
            raise ValidationError(f"Line width must be positive, got {self.width}", field="width")

        if not 0.0 < self.contrast < 1.0:
            raise ValidationError(f"Contrast must be between 0 and 1, got {self.contrast}", field="contrast")

    def shifted(self, offset: float) -> "OdmrLineshape":
        """The same lineshape moved by ``offset`` Hz."""
        return OdmrLineshape(
            centers=tuple(c + offset for c in self.centers),
            width=self.width,
            contrast=self.contrast,
            weights=self.weights,
        )
