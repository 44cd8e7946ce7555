from dataclasses import dataclass

import numpy as np

from nonlocal_momentum.errors import ValidationError


@dataclass(frozen=True)
class BoundaryPhase:
    """The phase alpha of the point interaction, reduced to [0, 2 pi)"""

    alpha: float

    def __post_init__(self):
        alpha = float(self.alpha)
        if not np.isfinite(alpha):
            raise ValidationError(f"alpha must be finite, got {self.alpha}")
        object.__setattr__(self, "alpha", alpha % (2.0 * np.pi))

    @classmethod
    def coerce(cls, alpha):
        if isinstance(alpha, BoundaryPhase):
            return alpha
        return cls(alpha)

    @property
    def phase(self):
        """e^{i alpha}"""
        return np.exp(1j * self.alpha)

    def near(self, value, tol):
        """True if alpha is within tol of value modulo 2 pi"""
        diff = (self.alpha - value) % (2.0 * np.pi)
        return min(diff, 2.0 * np.pi - diff) <= tol

    def __float__(self):
        return self.alpha
