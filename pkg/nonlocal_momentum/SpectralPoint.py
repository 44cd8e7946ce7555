from dataclasses import dataclass

import numpy as np

from nonlocal_momentum.errors import OffAxisRequiredError, ValidationError


@dataclass(frozen=True)
class SpectralPoint:
    """A non-real z, the argument of every resolvent formula"""

    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if not np.isfinite(z):
            raise ValidationError(f"z must be finite, got {self.z}")
        if z.imag == 0.0:
            raise OffAxisRequiredError(z)
        object.__setattr__(self, "z", z)

    @classmethod
    def coerce(cls, z):
        if isinstance(z, SpectralPoint):
            return z
        return cls(z)

    @property
    def sign_im(self):
        return 1 if self.z.imag > 0 else -1

    @property
    def upper(self):
        return self.z.imag > 0

    def conjugate(self):
        return SpectralPoint(self.z.conjugate())
