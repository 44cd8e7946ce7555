import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from nonlocal_momentum.BoundaryPhase import BoundaryPhase
from nonlocal_momentum.ComplexFunction import ComplexFunction, linear_combination
from nonlocal_momentum.DiscreteOperator import DiscreteOperator
from nonlocal_momentum.Domain import Domain
from nonlocal_momentum.EigenResult import EigenResult
from nonlocal_momentum.GreenFunction import free_spectrum_interval
from nonlocal_momentum.NonlocalOperator import NonlocalOperator, residual_grid
from nonlocal_momentum.Parameters import Parameters
from nonlocal_momentum.Potential import Potential
from nonlocal_momentum.RootFinder import RootFinder
from nonlocal_momentum.errors import DomainMismatchError, PoleError, ValidationError
from nonlocal_momentum.transforms import (
    combine,
    hat_v,
    tilde_v,
    vanishing_difference,
)
from nonlocal_momentum.utility import phi1, sinc

CHI_ACCEPT = 1e-6
REFINE_HALF_WIDTH = 0.02
RESIDUAL_TOL = 1e-6
RESIDUAL_POINTS = 64
FIGURE_POLE_GAP = 1e-3
CROSSING_POLE_GAP = 1e-9


@dataclass(frozen=True)
class CharacteristicEval:
    lam: float
    chi: complex
    tilde: complex
    hat: complex
    matrix: np.ndarray


@dataclass(frozen=True)
class SpectralCharacteristic:
    """S(V) = Im V - |V|^2/4 of a constant potential V on [0, 1]"""

    V: complex
    S: float
    resonant: bool

    @property
    def inverse(self):
        """1/S, None when S = 0"""
        return None if self.S == 0.0 else 1.0 / self.S


@dataclass
class Figure1Data:
    xi: np.ndarray
    F: np.ndarray
    inverse: float
    poles: np.ndarray
    intersections: np.ndarray
    characteristic: SpectralCharacteristic


class IntervalSpectrum:
    """
    Eigenvalues of the nonlocal operators on [0, 1]

    For A(v, 0, alpha) every eigenfunction has the form
        psi(x) = C1 e^{-i lam x} - i C2 int_0^x e^{-i lam (x - y)} v(y) dy
    and the boundary functionals give a 2x2 homogeneous system in (C1, C2),
    whose determinant is the characteristic function chi. Operators whose
    rank-two difference to A(v1 + e^{i alpha} v2, alpha) does not vanish have
    no such function and fall back to the discretisation.
    """

    def __init__(self, params=None):
        if params is None:
            params = Parameters(validate=False)
        self._params = params
        self._q = params.quadrature
        self._finder = RootFinder(params)

    # Characteristic functions

    def characteristic_matrix(self, lam, v, alpha):
        if v.domain is not Domain.INTERVAL:
            raise DomainMismatchError("the characteristic function lives on [0, 1]")
        phase = BoundaryPhase.coerce(alpha).phase
        lam = float(lam)
        if v.is_zero:
            tilde, hat = 0j, 0j
        else:
            tilde = complex(tilde_v(v, lam))
            hat = complex(hat_v(v, lam, self._q))
        e = np.exp(-1j * lam)
        matrix = np.array(
            [
                [
                    e - phase + 1j * phase * np.conj(tilde),
                    -1j * e * tilde + phase * hat,
                ],
                [2j + np.conj(tilde), 1j * (2.0 - hat)],
            ]
        )
        return matrix, tilde, hat

    def chi_general(self, lam, v, alpha):
        matrix, tilde, hat = self.characteristic_matrix(lam, v, alpha)
        chi = matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0]
        return CharacteristicEval(float(lam), complex(chi), tilde, hat, matrix)

    @staticmethod
    def chi_const(lam, V):
        """4 + 2 q (lam + conj V - V + i |V|^2 / 2) with q = (e^{-i lam} - 1)/lam"""
        lam = np.asarray(lam, dtype=float)
        V = complex(V)
        q = -1j * phi1(-1j * lam)
        return 4.0 + 2.0 * q * (lam + np.conj(V) - V + 0.5j * abs(V) ** 2)

    def spectral_characteristic(self, V):
        V = complex(V)
        S = V.imag - 0.25 * abs(V) ** 2
        resonant = abs(S - 1.0) <= self._params.resonance_tol
        return SpectralCharacteristic(V, float(S), bool(resonant))

    def F(self, xi):
        """tan(pi xi / 4)/(pi xi / 4), even, with F(0) = 1"""
        xi = np.asarray(xi, dtype=float)
        u = 0.25 * np.pi * xi
        near = np.abs(np.cos(u)) <= self._params.pole_tol
        if np.any(near):
            bad = np.atleast_1d(xi)[np.atleast_1d(near)][0]
            raise PoleError(2.0 + 4.0 * np.round((bad - 2.0) / 4.0), bad)
        safe = np.where(u == 0.0, 1.0, u)
        return np.where(u == 0.0, 1.0, np.tan(safe) / safe)

    # Constant potentials, alpha = pi

    @staticmethod
    def _secular(lam, S):
        """cos(lam/2) - S sinc(lam/2): pole free, same zeros as F(2 lam/pi) = 1/S"""
        return np.cos(0.5 * lam) - S * sinc(0.5 * lam)

    def eigenvalues_const(self, V, lam_range):
        lo, hi = _check_range(lam_range)
        sc = self.spectral_characteristic(V)
        if abs(sc.S) <= self._params.resonance_tol:
            return free_spectrum_interval(np.pi, lo, hi)

        top = max(abs(lo), abs(hi))
        odd = np.pi * np.arange(1, int(top / np.pi) + 2, 2)
        brackets = self._finder.make_brackets(0.0, top, cell_edges=odd)
        positive = self._finder.find_real_roots(
            lambda lam: self._secular(lam, sc.S), brackets
        )
        # the double root at 0 of the resonance is added explicitly
        positive = [r for r in positive if r > np.sqrt(self._params.root_tol)]

        v = _constant(V)
        results = []
        if sc.resonant and lo <= 0.0 <= hi:
            results.append(
                EigenResult(
                    0.0,
                    2,
                    [_polynomial(1.0, 0.0), _polynomial(-0.5, 1.0)],
                    (0.0, abs(complex(self.chi_const(0.0, V)))),
                    method="resonance",
                )
            )
        for r in positive:
            for lam in (-r, r):
                if lo <= lam <= hi:
                    functions = self._null_eigenfunctions(lam, v, np.pi)
                    results.append(
                        EigenResult(
                            float(lam),
                            1,
                            functions[:1],
                            (
                                abs(self._secular(lam, sc.S)),
                                abs(complex(self.chi_const(lam, V))),
                            ),
                            method="secular equation",
                        )
                    )
        return sorted(results, key=lambda e: e.lam)

    def eigenvalue_asymptotic(self, V, n):
        """
        Leading terms of the n-th positive eigenvalue: (2n+1) pi - 4/((2n+1) pi s)
        for s = 1/S >= 1, (2n-1) pi + 4/((2n-1) pi |s|) for s < 0
        """
        if int(n) != n or n < 1:
            raise ValidationError(f"n must be a positive integer, got {n}")
        sc = self.spectral_characteristic(V)
        if abs(sc.S) <= self._params.resonance_tol:
            return (2 * n - 1) * np.pi
        s = sc.inverse
        if s > 0:
            base = (2 * n + 1) * np.pi
            return base - 4.0 / (base * s)
        base = (2 * n - 1) * np.pi
        return base + 4.0 / (base * abs(s))

    # General potentials

    def _null_eigenfunctions(self, lam, v, alpha):
        """Eigenfunctions from the null space of the characteristic system"""
        matrix, _, _ = self.characteristic_matrix(lam, v, alpha)
        _, sigma, vh = np.linalg.svd(matrix)
        cutoff = self._params.rank_tol * max(1.0, sigma[0])
        null = [np.conj(vh[i]) for i in range(2) if sigma[i] <= cutoff]
        if not null:
            null = [np.conj(vh[-1])]
        return [_characteristic_function(lam, v, c1, c2) for c1, c2 in null]

    def characteristic_roots(self, v, alpha, lam_range):
        """Real zeros of chi for A(v, 0, alpha)"""
        lo, hi = _check_range(lam_range)
        alpha = BoundaryPhase.coerce(alpha)
        if v.is_zero:
            return free_spectrum_interval(alpha, lo, hi)

        def rotated(lam):
            chi = self.chi_general(lam, v, alpha).chi
            return np.exp(0.5j * (lam - alpha.alpha)) * chi

        # e^{i(lam - alpha)/2} chi is real in the cases worked out by hand;
        # otherwise follow whichever part carries the function
        sampled = np.array([rotated(lam) for lam in np.linspace(lo, hi, 7)])
        use_real = np.linalg.norm(sampled.real) >= np.linalg.norm(sampled.imag)

        def real_part(lam):
            value = rotated(lam)
            return value.real if use_real else value.imag

        edges = np.pi * np.arange(np.ceil(lo / np.pi), np.floor(hi / np.pi) + 1)
        brackets = self._finder.make_brackets(lo, hi, cell_edges=edges)
        results = []
        for root in self._finder.find_real_roots(real_part, brackets):
            ev = self.chi_general(root, v, alpha)
            scale = 1.0 + abs(ev.tilde) ** 2 + abs(ev.hat)
            if abs(ev.chi) > CHI_ACCEPT * scale:
                continue
            functions = self._null_eigenfunctions(root, v, alpha)
            results.append(
                EigenResult(
                    float(root),
                    len(functions),
                    functions,
                    (abs(real_part(root)), abs(ev.chi)),
                    method="characteristic",
                )
            )
        return results

    def boundary_system(self, lam, operator):
        """
        psi = C1 e^{-i lam x} + sum_k mu_k phi_k with i phi_k' - lam phi_k = u_k,
        phi_k(0) = 0. Rows mu_k + l_k(psi) = 0 and b(psi) = 0.
        """
        lam = float(lam)
        terms = [(u, l) for u, l in operator.terms if not u.is_zero]
        columns = [_plane_wave(lam)] + [_particular(lam, u) for u, _ in terms]
        functionals = [l for _, l in terms] + [operator.boundary]
        matrix = np.array(
            [[f(c, self._q) for c in columns] for f in functionals],
            dtype=complex,
        )
        for k in range(len(terms)):
            matrix[k, k + 1] += 1.0
        return matrix, columns

    def _smallest_singular(self, lam, operator):
        sigma = np.linalg.svd(self.boundary_system(lam, operator)[0], compute_uv=False)
        return sigma[-1] / max(sigma[0], 1.0)

    def refine(self, lam0, operator):
        """Minimises the boundary system's smallest singular value near lam0"""
        res = minimize_scalar(
            lambda lam: self._smallest_singular(lam, operator),
            bounds=(lam0 - REFINE_HALF_WIDTH, lam0 + REFINE_HALF_WIDTH),
            method="bounded",
            options={
                "xatol": self._params.root_tol,
                "maxiter": self._params.root_max_iterations,
            },
        )
        lam = float(res.x)
        matrix, columns = self.boundary_system(lam, operator)
        _, sigma, vh = np.linalg.svd(matrix)
        coeffs = np.conj(vh[-1])
        psi = linear_combination(
            list(zip(coeffs, columns)), label=f"psi_{lam:g}"
        )
        return lam, sigma[-1] / max(sigma[0], 1.0), psi

    def relative_residual(self, psi, lam, operator):
        breakpoints = np.concatenate(
            [operator.v1.breakpoints, operator.v2.breakpoints]
        )
        grid = residual_grid(Domain.INTERVAL, RESIDUAL_POINTS, breakpoints)
        residual = operator.residual(psi, lam, None, grid, self._q)
        size = np.max(np.abs(psi(grid))) * (1.0 + abs(lam))
        return float(np.max(np.abs(residual)) / size)

    def oracle_roots(self, v1, v2, alpha, lam_range):
        """Discretisation eigenvalues refined on the exact boundary system"""
        lo, hi = _check_range(lam_range)
        operator = NonlocalOperator.interval_two(v1, v2, alpha)
        D = DiscreteOperator.interval(v1, v2, alpha, self._params.oracle_n, self._params)
        combined = combine(v1, v2, alpha)
        warnings.warn(
            "no characteristic function for this pair of potentials; "
            "eigenvalues come from the discretisation and chi of the combined "
            "potential is reported as a diagnostic only",
            stacklevel=2,
        )
        results = []
        for lam0 in D.eigenvalues((lo - REFINE_HALF_WIDTH, hi + REFINE_HALF_WIDTH)):
            lam, defect, psi = self.refine(lam0, operator)
            if not lo <= lam <= hi:
                continue
            residual = self.relative_residual(psi, lam, operator)
            if defect > CHI_ACCEPT or residual > RESIDUAL_TOL:
                continue
            chi = self.chi_general(lam, combined, alpha).chi
            results.append(
                EigenResult(
                    lam,
                    1,
                    [psi],
                    (defect, residual),
                    method="oracle",
                    diagnostics={
                        "oracle_lambda": float(lam0),
                        "chi_combined": abs(chi),
                    },
                )
            )
        return results

    def eigenvalues_general(self, v1, v2, alpha, lam_range):
        lo, hi = _check_range(lam_range)
        alpha = BoundaryPhase.coerce(alpha)
        if v1.is_zero and v2.is_zero:
            return free_spectrum_interval(alpha, lo, hi)
        if not vanishing_difference(v1, v2, alpha, q=self._q):
            return self.oracle_roots(v1, v2, alpha, (lo, hi))
        v = combine(v1, v2, alpha)
        if v.is_zero:
            return free_spectrum_interval(alpha, lo, hi)
        V = v.constant_value()
        if V is not None and alpha.near(np.pi, self._params.degeneracy_tol):
            return self.eigenvalues_const(V, (lo, hi))
        return self.characteristic_roots(v, alpha, (lo, hi))

    # Figure data

    def figure1_data(self, V, xi_range=(-12.0, 12.0), samples=2001):
        """
        The graph of F, the level 1/S and their intersections
        xi_n = 2 lambda_n / pi, with F masked near its poles
        """
        lo, hi = _check_range(xi_range)
        if samples < 2:
            raise ValidationError(f"need at least two samples, got {samples}")
        sc = self.spectral_characteristic(V)
        xi = np.linspace(lo, hi, int(samples))
        finite = np.abs(np.cos(0.25 * np.pi * xi)) > FIGURE_POLE_GAP
        values = np.full(xi.shape, np.nan)
        values[finite] = self.F(xi[finite])
        first = np.ceil((lo - 2.0) / 4.0)
        poles = 2.0 + 4.0 * np.arange(first, np.floor((hi - 2.0) / 4.0) + 1)
        intersections = self.crossings(sc, (lo, hi), poles)
        return Figure1Data(xi, values, sc.inverse, poles, intersections, sc)

    def crossings(self, sc, xi_range, poles):
        """
        Solutions of F(xi) = 1/S in the range

        F is monotone on each side of 0 between consecutive poles, so every
        such piece holds at most one crossing. At S = 0 the level sits at
        infinity and the crossings are the poles; at the resonance the level
        touches F at its minimum xi = 0.
        """
        lo, hi = xi_range
        if abs(sc.S) <= self._params.resonance_tol:
            return np.asarray(poles, dtype=float)
        level = sc.inverse
        edges = np.unique(np.concatenate([[lo, hi], poles, [0.0] if lo < 0.0 < hi else []]))
        poles = set(np.asarray(poles, dtype=float).tolist())

        def gap(x):
            return float(self.F(x)) - level

        found = []
        if sc.resonant and lo <= 0.0 <= hi:
            found.append(0.0)
        for a, b in zip(edges[:-1], edges[1:]):
            if a in poles:
                a += CROSSING_POLE_GAP
            if b in poles:
                b -= CROSSING_POLE_GAP
            if not a < b:
                continue
            ga, gb = gap(a), gap(b)
            if ga == 0.0:
                root = a
            elif gb == 0.0:
                root = b
            elif ga * gb > 0.0:
                continue
            else:
                root = brentq(
                    gap,
                    a,
                    b,
                    xtol=self._params.root_tol,
                    maxiter=self._params.root_max_iterations,
                )
            if sc.resonant and abs(root) < np.sqrt(self._params.root_tol):
                continue
            if not found or abs(root - found[-1]) > self._params.root_tol:
                found.append(float(root))
        return np.array(sorted(found))


def _check_range(lam_range):
    lo, hi = float(lam_range[0]), float(lam_range[1])
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise ValidationError(f"need a finite range lo < hi, got {lam_range}")
    return lo, hi


def _constant(V):
    return Potential.constant(V)


def _polynomial(c0, c1):
    return ComplexFunction(
        lambda x, side: c0 + c1 * x + 0j,
        Domain.INTERVAL,
        (0.0, 1.0),
        label=f"{c0:g}+{c1:g}x",
    )


def _plane_wave(lam):
    return ComplexFunction(
        lambda x, side: np.exp(-1j * lam * x),
        Domain.INTERVAL,
        (0.0, 1.0),
        label=f"e^(-i{lam:g}x)",
    )


def _particular(lam, u):
    """-i int_0^x e^{-i lam (x - y)} u(y) dy"""
    return ComplexFunction(
        lambda x, side: -1j * u.moment(1j * lam, 0.0, x, shift=x),
        Domain.INTERVAL,
        (0.0, 1.0),
        u.breakpoints,
        label=f"phi[{u.label}]",
    )


def _characteristic_function(lam, v, c1, c2):
    wave, particular = _plane_wave(lam), _particular(lam, v)
    return linear_combination(
        [(c1, wave), (c2, particular)], label=f"psi_{lam:g}"
    )


def s_zero_family(phi):
    """V(phi) = 2 sin 2 phi + 4 i sin^2 phi, all with S(V) = 0"""
    phi = np.asarray(phi, dtype=float)
    return 2.0 * np.sin(2.0 * phi) + 4j * np.sin(phi) ** 2


def chi_general(lam, v, alpha, params=None):
    return IntervalSpectrum(params).chi_general(lam, v, alpha)


def chi_const(lam, V):
    return IntervalSpectrum.chi_const(lam, V)


def spectral_characteristic(V, params=None):
    return IntervalSpectrum(params).spectral_characteristic(V)


def F(xi, params=None):
    return IntervalSpectrum(params).F(xi)


def eigenvalues_const(V, lam_range, params=None):
    return IntervalSpectrum(params).eigenvalues_const(V, lam_range)


def eigenvalue_asymptotic(V, n, params=None):
    return IntervalSpectrum(params).eigenvalue_asymptotic(V, n)


def eigenvalues_general(v1, v2, alpha, lam_range, params=None):
    return IntervalSpectrum(params).eigenvalues_general(v1, v2, alpha, lam_range)


def figure1_data(V, xi_range=(-12.0, 12.0), samples=2001, params=None):
    return IntervalSpectrum(params).figure1_data(V, xi_range, samples)
