from dataclasses import dataclass, field

import numpy as np


@dataclass
class EigenResult:
    """
    A real eigenvalue with its multiplicity and eigenfunction samplers

    ``residuals`` holds the two acceptance defects (boundary conditions on
    the axis, characteristic-function or boundary-system defects on the
    interval). ``method`` records where the value came from, e.g.
    ``analytic``, ``characteristic``, ``oracle``.
    """

    lam: float
    multiplicity: int = 1
    eigenfunctions: list = field(default_factory=list)
    residuals: tuple = (0.0, 0.0)
    method: str = "analytic"
    diagnostics: dict = field(default_factory=dict)

    def sample(self, grid):
        grid = np.asarray(grid, dtype=float)
        return [np.asarray(f(grid), dtype=complex) for f in self.eigenfunctions]

    def as_dict(self):
        out = {
            "lambda": float(self.lam),
            "multiplicity": int(self.multiplicity),
            "residuals": [float(r) for r in self.residuals],
            "method": self.method,
        }
        if self.diagnostics:
            out["diagnostics"] = dict(self.diagnostics)
        return out


@dataclass
class Rejection:
    """A candidate that failed the eigenvalue test"""

    lam: float
    residuals: tuple
    reason: str = "boundary conditions not satisfied"

    def as_dict(self):
        return {
            "lambda": float(self.lam),
            "residuals": [float(r) for r in self.residuals],
            "reason": self.reason,
        }
