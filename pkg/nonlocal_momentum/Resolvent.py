import numpy as np

from nonlocal_momentum.BoundaryPhase import BoundaryPhase
from nonlocal_momentum.ComplexFunction import ComplexFunction, linear_combination
from nonlocal_momentum.Domain import Domain, check_same_domain
from nonlocal_momentum.GammaMatrix import GammaMatrix, GammaVariant
from nonlocal_momentum.GreenFunction import (
    FreeAxisGreen,
    IntervalGreen,
    PointGreen,
    g_axis,
)
from nonlocal_momentum.KernelModel import KernelModel, LinearSystem, RankTerm
from nonlocal_momentum.NonlocalOperator import NonlocalOperator, SolverIntermediates
from nonlocal_momentum.Parameters import Parameters
from nonlocal_momentum.SpectralPoint import SpectralPoint
from nonlocal_momentum.errors import VariantUnavailableError
from nonlocal_momentum.transforms import inner_product
from nonlocal_momentum.utility import solve_small

VARIANT_B_TOL = 1e-10


class Resolvent:
    """
    Gamma matrices and resolvent kernels of the perturbed momentum operators

    Every kernel is the base Green's function minus (or plus) a rank-two
    correction built from the functions E_j at z and at conj z.
    """

    def __init__(self, params=None):
        if params is None:
            params = Parameters(validate=False)
        self._params = params
        self._q = params.quadrature

    def _ip(self, f, g):
        return inner_product(f, g, self._q)

    # Axis, one potential

    def gamma_axis_single(self, zp, v, alpha, variant="A"):
        return self._axis_single(zp, v, alpha, variant)[0]

    def kernel_axis_single(self, zp, v, alpha, variant="A"):
        gamma, kernel = self._axis_single(zp, v, alpha, variant)
        return kernel

    def _axis_single(self, zp, v, alpha, variant):
        zp = SpectralPoint.coerce(zp)
        alpha = BoundaryPhase.coerce(alpha)
        operator = NonlocalOperator.axis_single(v, alpha)
        if str(variant).upper() == "A":
            return self._axis_single_a(zp, v, alpha, operator)
        if str(variant).upper() == "B":
            return self._axis_single_b(zp, v, alpha, operator)
        raise VariantUnavailableError(f"unknown variant {variant!r}")

    def _axis_single_a(self, zp, v, alpha, operator):
        point, point_c = PointGreen(zp, alpha), PointGreen(zp.conjugate(), alpha)
        E = [point.e0(), point.apply(v, "E2")]
        Ec = [point_c.e0(), point_c.apply(v, "E2")]
        g11 = -self._ip(E[1], v)
        g12 = 1.0 + np.conj(self._ip(Ec[0], v))
        g21 = 1.0 + self._ip(E[0], v)
        g22 = -0.5j * zp.sign_im
        system = np.array([[-g22, g12], [g21, -g11]])
        gamma = GammaMatrix(
            [[g11, g12], [g21, g22]], GammaVariant.AXIS_SINGLE_A, zp.z, system
        )
        unknowns = (lambda psi: self._ip(psi, v), _psi_s(alpha))
        kernel = self._kernel(
            zp, point, E, Ec, gamma, 1.0, "axis-single-A", operator,
            LinearSystem(system, unknowns, tuple(Ec)),
        )
        return gamma, kernel

    def _axis_single_b(self, zp, v, alpha, operator):
        if alpha.near(np.pi, VARIANT_B_TOL):
            raise VariantUnavailableError(
                "the free-kernel form needs 1 + e^{i alpha} != 0, use variant A"
            )
        free, free_c = FreeAxisGreen(zp), FreeAxisGreen(zp.conjugate())
        e = [_g_function(zp), free.apply(v, "e2")]
        ec = [_g_function(zp.conjugate()), free_c.apply(v, "e2")]
        phase = alpha.phase
        p = 1.0 if zp.upper else 0.0
        g11 = self._ip(e[1], v) + 2j * (phase - 1.0) / (phase + 1.0)
        g12 = -2.0 / (1.0 + np.conj(phase)) - np.conj(self._ip(ec[0], v))
        g21 = -2.0 / (1.0 + phase) - self._ip(e[0], v)
        g22 = 1j / (1.0 + np.conj(phase)) * (p - np.conj(phase) * (1.0 - p))
        system = np.array([[g22, -g12], [-g21, g11]])
        gamma = GammaMatrix(
            [[g11, g12], [g21, g22]], GammaVariant.AXIS_SINGLE_B, zp.z, system
        )
        unknowns = (_psi_g, _psi_s(alpha))
        kernel = self._kernel(
            zp, free, e, ec, gamma, -1.0, "axis-single-B", operator,
            LinearSystem(system, unknowns, tuple(ec)),
        )
        return gamma, kernel

    # Two potentials

    def gamma_axis_two(self, zp, v1, v2, alpha):
        return self._two(zp, v1, v2, alpha, Domain.AXIS)[0]

    def kernel_axis_two(self, zp, v1, v2, alpha):
        return self._two(zp, v1, v2, alpha, Domain.AXIS)[1]

    def gamma_interval(self, zp, v1, v2, alpha):
        return self._two(zp, v1, v2, alpha, Domain.INTERVAL)[0]

    def kernel_interval(self, zp, v1, v2, alpha):
        return self._two(zp, v1, v2, alpha, Domain.INTERVAL)[1]

    def c_matrix(self, zp, v1, v2, alpha, domain):
        """
        3x3 coefficients of the kernel correction in the basis E_0, E_1, E_2

        The first column is a combination of the other two.
        """
        gamma = self._two(zp, v1, v2, alpha, domain)[0]
        return gamma.c_matrix(expansion_rows(alpha, domain))

    def _two(self, zp, v1, v2, alpha, domain):
        zp = SpectralPoint.coerce(zp)
        alpha = BoundaryPhase.coerce(alpha)
        check_same_domain(v1, v2)
        if domain is Domain.AXIS:
            operator = NonlocalOperator.axis_two(v1, v2, alpha)
            base = PointGreen(zp, alpha)
            base_c = PointGreen(zp.conjugate(), alpha)
            scale = np.array([-2j, 2j])
            variant = GammaVariant.AXIS_TWO
        else:
            operator = NonlocalOperator.interval_two(v1, v2, alpha)
            base = IntervalGreen(zp, alpha, self._params.pole_tol)
            base_c = IntervalGreen(zp.conjugate(), alpha, self._params.pole_tol)
            scale = np.array([2j, -2j])
            variant = GammaVariant.INTERVAL_TWO
        rows = expansion_rows(alpha, domain)
        cal_E = _expand(base, v1, v2, rows)
        cal_Ec = _expand(base_c, v1, v2, rows)

        l1, l2 = operator.functionals()
        q = self._q
        M = np.array(
            [
                [1.0 + l1(cal_E[0], q), l1(cal_E[1], q)],
                [l2(cal_E[0], q), 1.0 + l2(cal_E[1], q)],
            ]
        )
        a = scale[:, np.newaxis] * M
        gamma = GammaMatrix.from_system(a, variant, zp.z)
        unknowns = (lambda psi: l1(psi, q), lambda psi: l2(psi, q))
        kernel = self._kernel(
            zp, base, cal_E, cal_Ec, gamma, -1.0, str(variant), operator,
            LinearSystem(a, unknowns, tuple(cal_Ec)),
        )
        return gamma, kernel

    # Interval, one potential

    def gamma_interval_single(self, zp, v, alpha):
        return self._interval_single(zp, v, alpha)[0]

    def kernel_interval_single(self, zp, v, alpha):
        return self._interval_single(zp, v, alpha)[1]

    def _interval_single(self, zp, v, alpha):
        zp = SpectralPoint.coerce(zp)
        alpha = BoundaryPhase.coerce(alpha)
        operator = NonlocalOperator.interval_single(v, alpha)
        g = IntervalGreen(zp, alpha, self._params.pole_tol)
        g_c = IntervalGreen(zp.conjugate(), alpha, self._params.pole_tol)
        e = [g.e0(), g.apply(v, "e2")]
        ec = [g_c.e0(), g_c.apply(v, "e2")]
        phase = alpha.phase
        f11 = self._ip(e[1], v)
        f12 = -(phase + np.conj(self._ip(ec[0], v)))
        f21 = -(np.conj(phase) + self._ip(e[0], v))
        f22 = interval_f22(zp.z, alpha)
        system = np.array([[f22, -f12], [-f21, f11]])
        gamma = GammaMatrix(
            [[f11, f12], [f21, f22]], GammaVariant.INTERVAL_SINGLE_F, zp.z,
            system,
        )
        unknowns = (lambda psi: phase * self._ip(psi, v), _psi_s(alpha))
        kernel = self._kernel(
            zp, g, e, ec, gamma, -1.0, "interval-single-F", operator,
            LinearSystem(system, unknowns, tuple(ec)),
        )
        return gamma, kernel

    # Shared

    def kernel(self, variant, zp, v1, v2, alpha):
        """Dispatch by variant; the single-potential variants read v1 only"""
        variant = GammaVariant(variant)
        if variant is GammaVariant.AXIS_SINGLE_A:
            return self.kernel_axis_single(zp, v1, alpha, "A")
        if variant is GammaVariant.AXIS_SINGLE_B:
            return self.kernel_axis_single(zp, v1, alpha, "B")
        if variant is GammaVariant.AXIS_TWO:
            return self.kernel_axis_two(zp, v1, v2, alpha)
        if variant is GammaVariant.INTERVAL_TWO:
            return self.kernel_interval(zp, v1, v2, alpha)
        return self.kernel_interval_single(zp, v1, alpha)

    def _kernel(self, zp, base, E, Ec, gamma, sign, provenance, operator, system):
        terms = [
            RankTerm(E[j], sign * gamma.entries[j, k] / gamma.det, Ec[k])
            for j in range(2)
            for k in range(2)
        ]
        return KernelModel(zp, base, terms, provenance, gamma, operator, system)

    def apply_resolvent(self, K, h):
        """
        psi = (A - z)^{-1} h together with its boundary unknowns

        The unknowns are read off psi and substituted back into the
        boundary system; the mismatch is reported as ``system_defect``.
        """
        psi = K.apply(h, self._q)
        intermediates = K.operator.intermediates(psi, self._q)
        unknowns = np.array([u(psi) for u in K.system.unknowns])
        rhs = np.array([self._ip(h, f) for f in K.system.rhs])
        defect = np.max(np.abs(K.system.matrix @ unknowns - rhs))
        intermediates.system_defect = float(defect)
        return psi, intermediates

    def solve_system(self, K, h):
        """The boundary unknowns from the linear system alone"""
        rhs = np.array([self._ip(h, f) for f in K.system.rhs])
        return solve_small(K.system.matrix, rhs, self._params.degeneracy_tol)

    def rank_two_update(self, base_apply, terms, h):
        """
        Resolvent of B + sum_j u_j <., w_j> from the resolvent of B

        psi = R h - sum_j c_j R u_j with (I + G) c = (<R h, w_k>) and
        G_kj = <R u_j, w_k>.
        """
        Rh = base_apply(h)
        Ru = [base_apply(u) for u, _ in terms]
        n = len(terms)
        G = np.array(
            [[self._ip(Ru[j], terms[k][1]) for j in range(n)] for k in range(n)]
        )
        b = np.array([self._ip(Rh, w) for _, w in terms])
        c = solve_small(np.eye(n) + G, b, self._params.degeneracy_tol)
        return linear_combination(
            [(1.0, Rh)] + [(-c[j], Ru[j]) for j in range(n)], label="R h"
        )


def expansion_rows(alpha, domain):
    """Rows L_j with cal E_j = sum_m L[j, m] E_m, basis E_0, E_1, E_2"""
    phase = BoundaryPhase.coerce(alpha).phase
    if domain is Domain.AXIS:
        return np.array([[2j, 1.0, 0.0], [-2j * np.conj(phase), 0.0, 1.0]])
    return np.array([[-2j * phase, 1.0, 0.0], [2j, 0.0, 1.0]])


def _expand(base, v1, v2, rows):
    E = [base.e0(), base.apply(v1, "E1"), base.apply(v2, "E2")]
    return [
        linear_combination(list(zip(row, E)), label=f"calE{j + 1}")
        for j, row in enumerate(rows)
    ]


def _g_function(zp):
    return ComplexFunction(
        lambda x, side: g_axis(zp, x, side), Domain.AXIS, breakpoints=[0.0],
        label="g_z",
    )


def _psi_s(alpha):
    e = np.conj(BoundaryPhase.coerce(alpha).phase)

    def psi_s(psi):
        left, right = psi.boundary_values().as_list()
        return 0.5 * (left + e * right)

    return psi_s


def _psi_g(psi):
    left, right = psi.boundary_values().as_list()
    return 1j * (left - right)


def interval_f22(z, alpha):
    """(i/2)(e^{-iz} + e^{i alpha})/(e^{-iz} - e^{i alpha}), overflow free"""
    phase = BoundaryPhase.coerce(alpha).phase
    z = complex(z)
    if z.imag > 0:
        t = phase * np.exp(1j * z)
        return 0.5j * (1.0 + t) / (1.0 - t)
    t = np.conj(phase) * np.exp(-1j * z)
    return 0.5j * (t + 1.0) / (t - 1.0)


def operator_difference_K(v1, v2, alpha, psi, q=None):
    """
    A(v1, v2, alpha) - A(v1 + e^{i alpha} v2, alpha) applied to psi

    The axis and interval operators place e^{+-i alpha} differently.
    """
    domain = check_same_domain(v1, v2)
    phase = BoundaryPhase.coerce(alpha).phase
    p1 = 0j if v1.is_zero else inner_product(psi, v1, q)
    p2 = 0j if v2.is_zero else inner_product(psi, v2, q)
    if domain is Domain.AXIS:
        c2, c1 = 0.5j * phase * p1, -0.5j * np.conj(phase) * p2
    else:
        c1, c2 = 0.5j * np.conj(phase) * p2, -0.5j * phase * p1
    return ComplexFunction(
        lambda x, side: c1 * v1(x, side) + c2 * v2(x, side),
        domain,
        breakpoints=np.concatenate([v1.breakpoints, v2.breakpoints]),
        label="K psi",
    )


def difference_terms(v1, v2, alpha):
    """The operator difference as pairs (u_j, w_j): K psi = sum u_j <psi, w_j>"""
    domain = check_same_domain(v1, v2)
    phase = BoundaryPhase.coerce(alpha).phase
    if domain is Domain.AXIS:
        return [(v2.scaled(0.5j * phase), v1),
                (v1.scaled(-0.5j * np.conj(phase)), v2)]
    return [(v1.scaled(0.5j * np.conj(phase)), v2),
            (v2.scaled(-0.5j * phase), v1)]


__all__ = [
    "Resolvent",
    "SolverIntermediates",
    "expansion_rows",
    "interval_f22",
    "operator_difference_K",
    "difference_terms",
]
