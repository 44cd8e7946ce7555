from dataclasses import dataclass

import numpy as np

from nonlocal_momentum.ComplexFunction import ComplexFunction
from nonlocal_momentum.Domain import Side
from nonlocal_momentum.transforms import inner_product


@dataclass(frozen=True)
class RankTerm:
    """coeff * left(x) * conj(right(y)); right is evaluated at conj z"""

    left: ComplexFunction
    coeff: complex
    right: ComplexFunction


@dataclass(frozen=True)
class LinearSystem:
    """
    The boundary unknowns u(psi) of the resolvent equation satisfy
    matrix @ u = (<h, f_1>, <h, f_2>)
    """

    matrix: np.ndarray
    unknowns: tuple
    rhs: tuple


class KernelModel:
    """A base Green's function plus finitely many rank-one terms"""

    def __init__(self, zp, base, terms, provenance, gamma, operator, system):
        self.zp = zp
        self.base = base
        self.terms = tuple(terms)
        self.provenance = provenance
        self.gamma = gamma
        self.operator = operator
        self.system = system
        self.domain = operator.domain

    def evaluate(self, x, y, side=None):
        x, y = np.broadcast_arrays(
            np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        )
        return self.base.evaluate(x, y, side) + self.perturbation(x, y, side)

    def perturbation(self, x, y, side=None):
        """The kernel minus its base"""
        x, y = np.broadcast_arrays(
            np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        )
        side = Side.PLUS if side is None else side
        total = np.zeros(x.shape, dtype=complex)
        for term in self.terms:
            total = total + term.coeff * term.left(x, side) * np.conj(
                term.right(y)
            )
        return total

    def sample(self, xs, ys):
        """K(x_i, y_j) as a matrix"""
        xs = np.asarray(xs, dtype=float)[:, np.newaxis]
        ys = np.asarray(ys, dtype=float)[np.newaxis, :]
        return self.evaluate(xs, ys)

    def apply(self, h, q=None):
        """psi(x) = integral of K(x, y) h(y) dy, h having a ``moment``"""
        base = self.base.apply(h)
        weights = [
            (term.coeff * inner_product(h, term.right, q), term.left)
            for term in self.terms
        ]

        def fn(x, side):
            total = base(x, side)
            for c, left in weights:
                total = total + c * left(x, side)
            return total

        breakpoints = np.concatenate(
            [base.breakpoints] + [t.left.breakpoints for t in self.terms]
        )
        return ComplexFunction(
            fn, self.domain, base.support, breakpoints, label="R_z h"
        )

    def __repr__(self):
        return (
            f"KernelModel({self.provenance}, z={self.zp.z}, "
            f"{len(self.terms)} rank terms)"
        )
