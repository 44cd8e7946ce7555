from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from nonlocal_momentum.BoundaryPhase import BoundaryPhase
from nonlocal_momentum.Domain import Domain, Side
from nonlocal_momentum.Potential import Potential
from nonlocal_momentum.errors import DomainMismatchError
from nonlocal_momentum.transforms import inner_product

FD_STEP = 1e-3


class OperatorKind(IntEnum):
    AXIS_SINGLE = 0
    AXIS_TWO = 1
    INTERVAL_SINGLE = 2
    INTERVAL_TWO = 3


@dataclass(frozen=True)
class Functional:
    """
    A linear functional sum c psi(x, side) + sum d <psi, v>

    ``points`` holds (c, x, side) triples and ``products`` (d, v) pairs.
    """

    points: tuple = ()
    products: tuple = ()

    def __call__(self, psi, q=None):
        value = 0j
        for c, x, side in self.points:
            value += c * complex(psi(x, side))
        for d, v in self.products:
            if not v.is_zero:
                value += d * inner_product(psi, v, q)
        return value


@dataclass
class SolverIntermediates:
    """Boundary unknowns of the resolvent equation, read off the solution"""

    psi1: complex
    psi2: complex
    psi_s: complex
    psi_g: complex
    w: complex
    system_defect: float = 0.0

    def as_dict(self):
        out = {}
        for key in ["psi1", "psi2", "psi_s", "psi_g", "w"]:
            value = getattr(self, key)
            out[key] = None if value is None else [value.real, value.imag]
        out["system_defect"] = self.system_defect
        return out


class NonlocalOperator:
    """
    i psi' + sum_k u_k(x) l_k(psi) with one boundary condition b(psi) = 0

    Every operator of the package has this shape. The single-potential
    operators are stored through their two-potential form with
    v1 = v/2, v2 = e^{-i alpha} v/2.
    """

    def __init__(self, kind, v1, v2, alpha, terms, boundary):
        self.kind = kind
        self.domain = Domain.AXIS if kind < 2 else Domain.INTERVAL
        self.v1 = v1
        self.v2 = v2
        self.alpha = BoundaryPhase.coerce(alpha)
        self.terms = tuple(terms)
        self.boundary = boundary

    # Constructors

    @classmethod
    def axis_single(cls, v, alpha):
        alpha = BoundaryPhase.coerce(alpha)
        _check_domain(Domain.AXIS, v)
        e = np.conj(alpha.phase)
        psi_s = Functional(((0.5, 0.0, Side.MINUS), (0.5 * e, 0.0, Side.PLUS)))
        boundary = Functional(
            ((1j, 0.0, Side.MINUS), (-1j * e, 0.0, Side.PLUS)), ((-1.0, v),)
        )
        v1, v2 = v.scaled(0.5), v.scaled(0.5 * e)
        return cls(OperatorKind.AXIS_SINGLE, v1, v2, alpha, [(v, psi_s)], boundary)

    @classmethod
    def axis_two(cls, v1, v2, alpha):
        alpha = BoundaryPhase.coerce(alpha)
        _check_domain(Domain.AXIS, v1, v2)
        phase = alpha.phase
        l1 = Functional(((1.0, 0.0, Side.MINUS),), ((0.5j, v1),))
        l2 = Functional(((1.0, 0.0, Side.PLUS),), ((-0.5j, v2),))
        boundary = Functional(
            ((1.0, 0.0, Side.PLUS), (-phase, 0.0, Side.MINUS)),
            ((-1j, v2), (-1j * phase, v1)),
        )
        return cls(
            OperatorKind.AXIS_TWO, v1, v2, alpha, [(v1, l1), (v2, l2)], boundary
        )

    @classmethod
    def interval_single(cls, v, alpha):
        alpha = BoundaryPhase.coerce(alpha)
        _check_domain(Domain.INTERVAL, v)
        phase = alpha.phase
        psi_s = Functional(
            ((0.5, 0.0, Side.PLUS), (0.5 * np.conj(phase), 1.0, Side.MINUS))
        )
        boundary = Functional(
            ((1.0, 1.0, Side.MINUS), (-phase, 0.0, Side.PLUS)),
            ((1j * phase, v),),
        )
        v1, v2 = v.scaled(0.5), v.scaled(0.5 * np.conj(phase))
        return cls(
            OperatorKind.INTERVAL_SINGLE, v1, v2, alpha, [(v, psi_s)], boundary
        )

    @classmethod
    def interval_two(cls, v1, v2, alpha):
        alpha = BoundaryPhase.coerce(alpha)
        _check_domain(Domain.INTERVAL, v1, v2)
        phase = alpha.phase
        l1 = Functional(((1.0, 0.0, Side.PLUS),), ((-0.5j, v1),))
        l2 = Functional(((1.0, 1.0, Side.MINUS),), ((0.5j, v2),))
        boundary = Functional(
            ((1.0, 1.0, Side.MINUS), (-phase, 0.0, Side.PLUS)),
            ((1j, v2), (1j * phase, v1)),
        )
        return cls(
            OperatorKind.INTERVAL_TWO, v1, v2, alpha, [(v1, l1), (v2, l2)],
            boundary,
        )

    # Evaluation

    def functionals(self):
        """l_1, l_2 of the two-potential form"""
        if self.domain is Domain.AXIS:
            return (
                Functional(((1.0, 0.0, Side.MINUS),), ((0.5j, self.v1),)),
                Functional(((1.0, 0.0, Side.PLUS),), ((-0.5j, self.v2),)),
            )
        return (
            Functional(((1.0, 0.0, Side.PLUS),), ((-0.5j, self.v1),)),
            Functional(((1.0, 1.0, Side.MINUS),), ((0.5j, self.v2),)),
        )

    def boundary_defect(self, psi, q=None):
        return self.boundary(psi, q)

    def nonlocal_part(self, psi, x, q=None):
        x = np.asarray(x, dtype=float)
        total = np.zeros(x.shape, dtype=complex)
        for u, functional in self.terms:
            if not u.is_zero:
                total = total + u(x) * functional(psi, q)
        return total

    def residual(self, psi, z, h, grid, q=None, step=FD_STEP):
        """
        i psi' + sum u_k l_k(psi) - z psi - h on the grid

        psi' by the five-point central difference; keep the grid at least
        two steps away from jumps and kinks.
        """
        grid = np.asarray(grid, dtype=float)
        derivative = (
            -psi(grid + 2 * step)
            + 8.0 * psi(grid + step)
            - 8.0 * psi(grid - step)
            + psi(grid - 2 * step)
        ) / (12.0 * step)
        h_values = 0.0 if h is None else h(grid)
        return (
            1j * derivative
            + self.nonlocal_part(psi, grid, q)
            - z * psi(grid)
            - h_values
        )

    def intermediates(self, psi, q=None):
        l1, l2 = self.functionals()
        psi1, psi2 = l1(psi, q), l2(psi, q)
        left, right = psi.boundary_values().as_list()
        e = np.conj(self.alpha.phase)
        psi_s = 0.5 * (left + e * right)
        psi_g = 1j * (left - right) if self.domain is Domain.AXIS else None
        w = self.alpha.phase * _product(psi, self.v1, q) + _product(
            psi, self.v2, q
        )
        return SolverIntermediates(psi1, psi2, psi_s, psi_g, w)

    def __repr__(self):
        return (
            f"NonlocalOperator({self.kind.name.lower()}, "
            f"alpha={self.alpha.alpha:.6g})"
        )


def _product(psi, v, q):
    return 0j if v.is_zero else inner_product(psi, v, q)


def _check_domain(domain, *potentials):
    for v in potentials:
        if not isinstance(v, Potential) or v.domain is not domain:
            raise DomainMismatchError(
                f"{v!r} does not live on the {domain.name.lower()}"
            )


def residual_grid(domain, n, breakpoints=(), margin=3 * FD_STEP, radius=10.0):
    """n points spread over the domain, kept clear of the breakpoints"""
    lo, hi = (-radius, radius) if domain is Domain.AXIS else (0.0, 1.0)
    grid = np.linspace(lo + margin, hi - margin, n)
    points = list(breakpoints) + ([0.0] if domain is Domain.AXIS else [])
    keep = np.ones(grid.shape, dtype=bool)
    for p in points:
        keep &= np.abs(grid - p) > margin
    return grid[keep]
