from enum import IntEnum

import numpy as np


class GammaVariant(IntEnum):
    AXIS_SINGLE_A = 0
    AXIS_SINGLE_B = 1
    AXIS_TWO = 2
    INTERVAL_TWO = 3
    INTERVAL_SINGLE_F = 4

    @classmethod
    def names(cls):
        return ["axis-single-A", "axis-single-B", "axis-two", "interval-two",
                "interval-single-F"]

    def __str__(self):
        return self.names()[self]


class GammaMatrix:
    """
    The 2x2 coupling matrix of a rank-two resolvent perturbation

    ``system`` is the matrix of the linear system the boundary unknowns
    satisfy; for every variant its determinant equals ``det``.
    """

    def __init__(self, entries, variant, z, system=None):
        self.entries = np.asarray(entries, dtype=complex).reshape(2, 2)
        self.variant = variant
        self.z = complex(z)
        self.system = None if system is None else np.asarray(system, complex)
        g = self.entries
        self.det = complex(g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0])

    @classmethod
    def from_system(cls, a, variant, z):
        """Gamma = adj(a), so that a^{-1} = Gamma / det"""
        a = np.asarray(a, dtype=complex)
        adjugate = np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]])
        return cls(adjugate, variant, z, system=a)

    def __getitem__(self, jk):
        """gamma_jk with one-based indices"""
        j, k = jk
        return self.entries[j - 1, k - 1]

    def det_defect(self):
        g = self.entries
        return abs(self.det - (g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]))

    def hermitian_defect(self, conjugate):
        """max |Gamma(z) - Gamma(conj z)^*| given the matrix at conj z"""
        return float(
            np.max(np.abs(self.entries - np.conj(conjugate.entries).T))
        )

    def c_matrix(self, L):
        """
        Expands sum_jk cal E_j gamma_jk conj(cal E_k) in the basis E_0, E_1,
        E_2 when cal E_j = sum_m L[j, m] E_m

        Returns the 3x3 matrix L^T Gamma conj(L).
        """
        L = np.asarray(L, dtype=complex)
        return L.T @ self.entries @ np.conj(L)

    def as_dict(self):
        return {
            "variant": str(self.variant),
            "entries": [[[float(e.real), float(e.imag)] for e in row]
                        for row in self.entries],
            "det": [self.det.real, self.det.imag],
        }

    def __repr__(self):
        return f"GammaMatrix({self.variant}, z={self.z}, det={self.det})"
