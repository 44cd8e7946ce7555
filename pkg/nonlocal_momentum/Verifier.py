import sys
from dataclasses import dataclass

import numpy as np

from nonlocal_momentum.AxisSpectrum import AxisSpectrum
from nonlocal_momentum.DiscreteOperator import DiscreteOperator
from nonlocal_momentum.Domain import Domain
from nonlocal_momentum.GammaMatrix import GammaVariant
from nonlocal_momentum.GreenFunction import FreeAxisGreen, IntervalGreen
from nonlocal_momentum.IntervalSpectrum import IntervalSpectrum, s_zero_family
from nonlocal_momentum.NonlocalOperator import residual_grid
from nonlocal_momentum.Parameters import Parameters
from nonlocal_momentum.Potential import Potential
from nonlocal_momentum.Quadrature import Quadrature
from nonlocal_momentum.Resolvent import Resolvent, expansion_rows
from nonlocal_momentum.SpectralPoint import SpectralPoint
from nonlocal_momentum.Timer import Timer
from nonlocal_momentum.errors import ValidationError
from nonlocal_momentum.transforms import inner_product
from nonlocal_momentum.utility import numerical_rank

SUITES = ["identities", "examples", "oracle", "all"]
GRID_POINTS = 32
SYMMETRY_POINTS = 8
RESIDUAL_POINTS = 48
IDENTITY_POINTS = 5

# bounds the verify command holds the package to
HERMITIAN_TOL = 1e-11
DET_TOL = 1e-13
SYMMETRY_TOL = 1e-10
C_MATRIX_TOL = 1e-12
RESIDUAL_TOL = 1e-6
BOUNDARY_TOL = 1e-8
ORACLE_TOL = 5e-3
RESOLVENT_IDENTITY_TOL = 1e-8

CORRECTION_RANK = 2


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float
    bound: float
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.name}: {self.value:.3e} "
            f"(bound {self.bound:.1e}, {self.seconds:.2f} s)"
        )

    def as_dict(self):
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "value": float(self.value),
            "bound": float(self.bound),
            "seconds": float(self.seconds),
        }


def gamma_limit(variant, alpha):
    """gamma(z) as Im z -> +infinity"""
    if variant in (GammaVariant.AXIS_TWO, GammaVariant.INTERVAL_TWO):
        return -4.0 + 0j
    if variant is GammaVariant.AXIS_SINGLE_B:
        return -2.0 / (1.0 + np.exp(-1j * alpha))
    return -1.0 + 0j


class Verifier:
    """Runs the identity, worked-example and oracle suites"""

    def __init__(self, params=None, samples=50, seed=20240101, verbose=False):
        if params is None:
            params = Parameters(validate=False)
        self._params = params
        self._q = params.quadrature
        self.samples = int(samples)
        self.rng = np.random.default_rng(seed)
        self.verbose = verbose
        self.resolvent = Resolvent(params)
        self.axis = AxisSpectrum(params)
        self.interval = IntervalSpectrum(params)
        self.timer = Timer()

    def print_info(self, message):
        if self.verbose:
            print(message, file=sys.stderr, flush=True)

    def run(self, suite):
        if suite not in SUITES:
            raise ValidationError(f"unknown suite {suite!r}, expected {SUITES}")
        if suite == "all":
            return self.identities() + self.examples() + self.oracle()
        return getattr(self, suite)()

    def _check(self, name, value, bound):
        seconds = self.timer.split()
        result = CheckResult(name, bool(value <= bound), float(value), bound, seconds)
        self.print_info(result.line())
        return result

    # Random inputs

    def _random_potential(self, domain):
        lo, hi = (0.0, 1.0) if domain is Domain.INTERVAL else (-1.0, 1.0)
        a, b = np.sort(self.rng.uniform(lo, hi, 2))
        if b - a < 0.1:
            a, b = lo, hi
        value = self.rng.uniform(0.2, 1.0) * np.exp(2j * np.pi * self.rng.uniform())
        if domain is Domain.AXIS and self.rng.uniform() < 0.5:
            rate = -self.rng.uniform(0.5, 2.0) + 1j * self.rng.normal()
            return Potential.exponential(value, rate, a, b)
        return Potential.constant(value, (a, b), domain)

    def _random_z(self):
        y = self.rng.uniform(0.3, 3.0) * self.rng.choice([-1.0, 1.0])
        return complex(self.rng.uniform(-3.0, 3.0), y)

    def _random_alpha(self, avoid_pi=False):
        alpha = self.rng.uniform(0.0, 2.0 * np.pi)
        if avoid_pi and abs(alpha - np.pi) < 0.3:
            alpha += 0.6
        return alpha

    def _random_case(self, variant):
        domain = (
            Domain.INTERVAL
            if variant in (GammaVariant.INTERVAL_TWO, GammaVariant.INTERVAL_SINGLE_F)
            else Domain.AXIS
        )
        v1 = self._random_potential(domain)
        v2 = self._random_potential(domain)
        alpha = self._random_alpha(avoid_pi=variant is GammaVariant.AXIS_SINGLE_B)
        return self._random_z(), v1, v2, alpha, domain

    # Identities

    def _sample_grids(self, domain, n):
        j = np.arange(n)
        if domain is Domain.INTERVAL:
            return (j + 0.25) / n, (j + 0.75) / n
        return -2.0 + 4.0 * (j + 0.25) / n, -2.0 + 4.0 * (j + 0.75) / n

    def identities(self):
        self.timer.start()
        results = []
        for variant in GammaVariant:
            worst = {"hermitian": 0.0, "det": 0.0, "symmetry": 0.0, "rank": 0.0}
            for _ in range(self.samples):
                z, v1, v2, alpha, domain = self._random_case(variant)
                zp = SpectralPoint(z)
                K = self.resolvent.kernel(variant, zp, v1, v2, alpha)
                Kc = self.resolvent.kernel(variant, zp.conjugate(), v1, v2, alpha)
                gamma = K.gamma
                worst["hermitian"] = max(
                    worst["hermitian"], gamma.hermitian_defect(Kc.gamma)
                )
                g = gamma.entries
                scale = max(abs(g[0, 0] * g[1, 1]), abs(g[0, 1] * g[1, 0]), 1.0)
                worst["det"] = max(
                    worst["det"],
                    abs(np.linalg.det(gamma.system) - gamma.det) / scale,
                )
                xs, ys = self._sample_grids(domain, SYMMETRY_POINTS)
                X, Y = np.meshgrid(xs, ys, indexing="ij")
                swap = np.max(np.abs(K.evaluate(X, Y) - np.conj(Kc.evaluate(Y, X))))
                worst["symmetry"] = max(worst["symmetry"], swap)
                xs, ys = self._sample_grids(domain, GRID_POINTS)
                X, Y = np.meshgrid(xs, ys, indexing="ij")
                rank = numerical_rank(K.perturbation(X, Y), self._params.rank_tol)
                worst["rank"] = max(worst["rank"], rank - CORRECTION_RANK)
            name = str(variant)
            results.append(self._check(f"{name} Gamma(conj z)^* = Gamma(z)",
                                       worst["hermitian"], HERMITIAN_TOL))
            results.append(self._check(f"{name} det consistency",
                                       worst["det"], DET_TOL))
            results.append(self._check(f"{name} kernel swap symmetry",
                                       worst["symmetry"], SYMMETRY_TOL))
            results.append(self._check(f"{name} correction rank excess",
                                       worst["rank"], 0.0))
        results += self._rank_checks()
        results += self._c_matrix_checks()
        results += self._resolvent_identity_checks()
        results += self._residual_checks()
        return results

    def _rank_checks(self):
        results = []
        worst_interval, worst_axis = 0, 0
        for _ in range(self.samples):
            z = self._random_z()
            alpha = self._random_alpha()
            xs, ys = self._sample_grids(Domain.INTERVAL, GRID_POINTS)
            X, Y = np.meshgrid(xs, ys, indexing="ij")
            difference = IntervalGreen(z, alpha).evaluate(X, Y) - FreeAxisGreen(
                z
            ).evaluate(X, Y)
            worst_interval = max(
                worst_interval, numerical_rank(difference, self._params.rank_tol) - 1
            )
            v1 = self._random_potential(Domain.AXIS)
            v2 = self._random_potential(Domain.AXIS)
            K = self.resolvent.kernel_axis_two(z, v1, v2, alpha)
            xs, ys = self._sample_grids(Domain.AXIS, GRID_POINTS)
            X, Y = np.meshgrid(xs, ys, indexing="ij")
            difference = K.evaluate(X, Y) - FreeAxisGreen(z).evaluate(X, Y)
            worst_axis = max(
                worst_axis, numerical_rank(difference, self._params.rank_tol) - 3
            )
        results.append(self._check("interval kernel - g_z rank excess",
                                   worst_interval, 0.0))
        results.append(self._check("axis-two kernel - g_z rank excess",
                                   worst_axis, 0.0))
        return results

    def _c_matrix_checks(self):
        worst = 0.0
        for _ in range(self.samples):
            for domain in (Domain.AXIS, Domain.INTERVAL):
                z = self._random_z()
                alpha = self._random_alpha()
                v1 = self._random_potential(domain)
                v2 = self._random_potential(domain)
                C = self.resolvent.c_matrix(z, v1, v2, alpha, domain)
                worst = max(worst, c_column_defect(C, expansion_rows(alpha, domain)))
        return [self._check("c-matrix first column identity", worst, C_MATRIX_TOL)]

    def _resolvent_identity_checks(self):
        quadrature = Quadrature(self._q)
        results = []
        for variant in GammaVariant:
            worst = 0.0
            for _ in range(self.samples):
                z, v1, v2, alpha, domain = self._random_case(variant)
                w = self._random_z()
                h = self._random_potential(domain)
                Kz = self.resolvent.kernel(variant, z, v1, v2, alpha)
                Kw = self.resolvent.kernel(variant, w, v1, v2, alpha)
                xs, _ = self._sample_grids(domain, IDENTITY_POINTS)
                worst = max(
                    worst,
                    resolvent_identity_defect(
                        Kz, Kw, h, quadrature, xs, self._params.truncation_radius
                    ),
                )
            results.append(self._check(f"{variant} R(z) - R(w) = (z - w) R(z) R(w)",
                                       worst, RESOLVENT_IDENTITY_TOL))
        return results

    def _residual_checks(self):
        results = []
        for variant in GammaVariant:
            _, v1, v2, alpha, domain = self._random_case(variant)
            K = self.resolvent.kernel(variant, 1j, v1, v2, alpha)
            h = Potential.constant(1.0, (0.0, 1.0), domain)
            psi, intermediates = self.resolvent.apply_resolvent(K, h)
            breakpoints = np.concatenate(
                [h.breakpoints, v1.breakpoints, v2.breakpoints]
            )
            grid = residual_grid(domain, RESIDUAL_POINTS, breakpoints, radius=3.0)
            residual = K.operator.residual(psi, 1j, h, grid, self._q)
            boundary = abs(K.operator.boundary_defect(psi, self._q))
            name = str(variant)
            results.append(self._check(f"{name} resolvent equation residual",
                                       float(np.max(np.abs(residual))),
                                       RESIDUAL_TOL))
            results.append(self._check(f"{name} resolvent boundary condition",
                                       boundary, BOUNDARY_TOL))
        return results

    # Worked examples

    def examples(self):
        self.timer.start()
        results = []
        alpha = 0.7
        phase = np.exp(1j * alpha)

        v = Potential.constant(2j * phase, (0.0, 1.0), Domain.AXIS)
        results += self._axis_example("constant on (0, 1)", v, alpha, [0.0])

        v = Potential.exp_decay(2j * phase, 0.5)
        results += self._axis_example("decaying exponential", v, alpha, [0.5])

        v = Potential.sign_exp()
        results += self._axis_example("sign exponential", v, 0.0, [-1.0, 1.0])
        for lam in (-1.0, 1.0):
            psi = self.axis.candidate(lam, v)
            product = inner_product(psi, v, self._q)
            results.append(self._check(
                f"sign exponential <psi, v> = 2 lambda at {lam:g}",
                abs(product - 2.0 * lam), 1e-10,
            ))

        eigen = self.interval.eigenvalues_const(2j, (-1.0, 12.0))
        zero = [e for e in eigen if e.lam == 0.0]
        results.append(self._check(
            "resonance V = 2i: double eigenvalue at 0",
            0.0 if zero and zero[0].multiplicity == 2 else 1.0, 0.0,
        ))
        first = [e.lam for e in eigen if e.lam > 0.0][0]
        results.append(self._check(
            "resonance V = 2i: first positive eigenvalue vs asymptotics",
            abs(first - self.interval.eigenvalue_asymptotic(2j, 1)), 0.02,
        ))

        S = [self.interval.spectral_characteristic(V).S for V in (4j, 0.0)]
        results.append(self._check("S(4i) = S(0) = 0", max(map(abs, S)), 1e-14))
        family = s_zero_family(np.linspace(0.0, np.pi, 41))
        S = [self.interval.spectral_characteristic(V).S for V in family]
        results.append(self._check("S vanishes on the family", max(map(abs, S)), 1e-14))
        V = self.rng.normal(size=1000) * 3 + 3j * self.rng.normal(size=1000)
        S = np.imag(V) - 0.25 * np.abs(V) ** 2
        results.append(self._check(
            "S(V) = 1 - |V - 2i|^2/4",
            float(np.max(np.abs(S - (1.0 - 0.25 * np.abs(V - 2j) ** 2)))), 1e-12,
        ))

        same = [
            [e.lam for e in self.interval.eigenvalues_const(V, (-20.0, 20.0))]
            for V in (4j, 0.0)
        ]
        gap = (
            np.max(np.abs(np.subtract(*same)))
            if len(same[0]) == len(same[1]) else np.inf
        )
        results.append(self._check("V = 4i and V = 0 share the spectrum", gap, 1e-10))
        return results

    def _axis_example(self, name, v, alpha, expected):
        found = self.axis.scan(v, alpha, (-10.0, 10.0))
        lams = [e.lam for e in found]
        if len(lams) != len(expected):
            return [self._check(f"{name}: eigenvalue count", abs(len(lams) - len(expected)), 0.0)]
        results = [self._check(
            f"{name}: eigenvalues", float(np.max(np.abs(np.subtract(lams, expected)))), 1e-8,
        )]
        defects = [self.axis.defects(lam, v, alpha) for lam in expected]
        results.append(self._check(
            f"{name}: boundary condition defects",
            max(max(abs(d1), abs(d2)) for d1, d2 in defects),
            self._params.condition_tol,
        ))
        return results

    # Discretisation

    def oracle(self, sizes=(4096, 8192, 16384), window=(-20.0, 20.0)):
        """chi roots for v = 1 on [0, 1], alpha = pi, against the box scheme"""
        self.timer.start()
        v = Potential.constant(1.0)
        zero = Potential.zero()
        roots = [e.lam for e in self.interval.characteristic_roots(v, np.pi, window)]
        errors = []
        results = []
        for N in sizes:
            D = DiscreteOperator.interval(v, zero, np.pi, N, self._params)
            discrete = np.array(D.eigenvalues(window))
            error = max(
                (float(np.min(np.abs(discrete - r))) if len(discrete) else np.inf)
                for r in roots
            )
            errors.append(error)
            results.append(self._check(f"chi roots vs box scheme at N = {N}",
                                       error, ORACLE_TOL))
        for (n0, e0), (n1, e1) in zip(zip(sizes, errors), zip(sizes[1:], errors[1:])):
            order = np.log(e0 / e1) / np.log(n1 / n0) if e1 > 0 else np.inf
            self.print_info(f"observed order {n0} -> {n1}: {order:.2f}")
            results.append(self._check(
                f"error decreases from N = {n0} to N = {n1}", e1 - e0, 0.0
            ))
        return results

    def oracle_table(self, sizes=(4096, 8192, 16384), window=(-20.0, 20.0)):
        """Rows (root, discrete eigenvalue at each size)"""
        v = Potential.constant(1.0)
        zero = Potential.zero()
        roots = [e.lam for e in self.interval.characteristic_roots(v, np.pi, window)]
        columns = []
        for N in sizes:
            discrete = np.array(
                DiscreteOperator.interval(v, zero, np.pi, N, self._params)
                .eigenvalues(window)
            )
            columns.append([discrete[np.argmin(np.abs(discrete - r))] for r in roots])
        return [[r] + [c[i] for c in columns] for i, r in enumerate(roots)]

    # Gamma asymptotics

    def gamma_decay_study(self, variant, heights=(10.0, 20.0, 40.0, 80.0, 100.0)):
        """
        |gamma(iy) - gamma_inf| and that times y for potentials bounded by 1
        on [0, 1]; a bounded second column means O(1/Im z) decay
        """
        variant = GammaVariant(variant)
        domain = (
            Domain.INTERVAL
            if variant in (GammaVariant.INTERVAL_TWO, GammaVariant.INTERVAL_SINGLE_F)
            else Domain.AXIS
        )
        alpha = self._random_alpha(avoid_pi=variant is GammaVariant.AXIS_SINGLE_B)
        value = np.exp(2j * np.pi * self.rng.uniform())
        v1 = Potential.constant(value, (0.0, 1.0), domain)
        v2 = Potential.constant(np.conj(value), (0.0, 1.0), domain)
        limit = gamma_limit(variant, alpha)
        rows = []
        for y in heights:
            K = self.resolvent.kernel(variant, 1j * y, v1, v2, alpha)
            gap = abs(K.gamma.det - limit)
            rows.append((float(y), float(gap), float(gap * y)))
        return rows


def c_column_defect(C, L):
    """
    max |c_0 - conj(L[0, 0]) c_1 - conj(L[1, 0]) c_2| over the rows; zero
    because cal E_j = L[j, 0] E_0 + E_j
    """
    C = np.asarray(C)
    combination = np.conj(L[0, 0]) * C[:, 1] + np.conj(L[1, 0]) * C[:, 2]
    scale = max(1.0, float(np.max(np.abs(C))))
    return float(np.max(np.abs(C[:, 0] - combination)) / scale)


def resolvent_identity_defect(Kz, Kw, h, quadrature, xs, radius=40.0):
    """
    max |R_z h - R_w h - (z - w) R_z R_w h| over xs, relative to the largest
    |R_z h - R_w h|

    R_z is applied to R_w h by quadrature of the kernel, split at x and at
    every jump of the integrand; on the axis the integral is cut at the
    radius.
    """
    z, w = Kz.zp.z, Kw.zp.z
    psi_z = Kz.apply(h, quadrature.spec)
    psi_w = Kw.apply(h, quadrature.spec)
    if Kz.domain is Domain.INTERVAL:
        lo, hi = 0.0, 1.0
        jumps = []
    else:
        lo, hi = -radius, radius
        jumps = [0.0]
    for f in [psi_w, h, Kz.operator.v1, Kz.operator.v2]:
        jumps += list(f.breakpoints)
    for term in Kz.terms:
        jumps += list(term.right.breakpoints)

    xs = np.asarray(xs, dtype=float)
    direct = psi_z(xs) - psi_w(xs)
    composed = np.array(
        [
            quadrature.integrate(
                lambda y, x=x: Kz.evaluate(x, y) * psi_w(y), lo, hi, jumps + [x]
            )
            for x in xs
        ]
    )
    scale = max(float(np.max(np.abs(direct))), np.finfo(float).tiny)
    return float(np.max(np.abs(direct - (z - w) * composed)) / scale)
