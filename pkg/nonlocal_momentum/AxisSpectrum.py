import numpy as np
from scipy.optimize import brentq, minimize_scalar

from nonlocal_momentum.BoundaryPhase import BoundaryPhase
from nonlocal_momentum.ComplexFunction import ComplexFunction
from nonlocal_momentum.Domain import Domain
from nonlocal_momentum.EigenResult import EigenResult, Rejection
from nonlocal_momentum.Parameters import Parameters
from nonlocal_momentum.Quadrature import Quadrature
from nonlocal_momentum.errors import DomainMismatchError, ValidationError
from nonlocal_momentum.transforms import inner_product

SCAN_CHUNK = 2000


class AxisSpectrum:
    """
    Eigenvalues of the one-potential operator on the axis

    There is no characteristic function on the axis. A real lambda is an
    eigenvalue exactly when the candidate psi_lambda built from v is square
    integrable and meets both boundary conditions, so the search scans a
    lambda grid for near-zeros of the first condition and refines them.
    """

    def __init__(self, params=None):
        if params is None:
            params = Parameters(validate=False)
        self._params = params
        self._q = params.quadrature

    def candidate(self, lam, v):
        """
        psi(x) = -i int_x^inf e^{-i lam (x - y)} v(y) dy for x > 0 and
        i int_-inf^x e^{-i lam (x - y)} v(y) dy for x < 0
        """
        if v.domain is not Domain.AXIS:
            raise DomainMismatchError("the axis eigenvalue test needs v on the axis")
        s = 1j * float(lam)

        def fn(x, side):
            right = (x > 0) | ((x == 0) & (side > 0))
            return np.where(
                right,
                -1j * v.moment(s, x, np.inf, shift=x),
                1j * v.moment(s, -np.inf, x, shift=x),
            )

        return ComplexFunction(
            fn, Domain.AXIS, v.support, np.append(v.breakpoints, 0.0),
            label=f"psi_{lam:g}",
        )

    def first_condition(self, lams, v, alpha):
        """psi(-0) + e^{-i alpha} psi(+0) - 2 for many lambda at once"""
        lams = np.asarray(lams, dtype=float)
        e = np.conj(BoundaryPhase.coerce(alpha).phase)
        out = np.empty(lams.shape, dtype=complex)
        flat = lams.ravel()
        for start in range(0, len(flat), SCAN_CHUNK):
            s = 1j * flat[start:start + SCAN_CHUNK]
            minus = 1j * v.moment(s, -np.inf, 0.0)
            plus = -1j * v.moment(s, 0.0, np.inf)
            out.ravel()[start:start + SCAN_CHUNK] = minus + e * plus - 2.0
        return out

    def defects(self, lam, v, alpha):
        """
        The two boundary conditions, both zero at an eigenvalue:
        psi(-0) + e^{-ia} psi(+0) - 2 and psi(-0) - e^{-ia} psi(+0) + i<psi, v>
        """
        e = np.conj(BoundaryPhase.coerce(alpha).phase)
        psi = self.candidate(lam, v)
        minus, plus = psi.boundary_values().as_list()
        d1 = minus + e * plus - 2.0
        product = 0j if v.is_zero else inner_product(psi, v, self._q)
        d2 = minus - e * plus + 1j * product
        return d1, d2

    def square_integrable(self, psi, v):
        """
        Relative mass of psi beyond half the support radius, when the support
        reaches that far
        """
        if v.is_zero:
            return True
        lo, hi = v.support
        radius = max(abs(lo), abs(hi))
        if radius < self._params.truncation_radius:
            return True
        quadrature = Quadrature(self._q)
        breakpoints = list(psi.breakpoints)

        def mass(a, b):
            if not a < b:
                return 0.0
            return quadrature.integrate(
                lambda x: np.abs(psi(x)) ** 2, a, b, breakpoints
            ).real

        total = mass(lo, hi)
        if total == 0.0:
            return True
        half = 0.5 * radius
        tail = mass(lo, min(-half, hi)) + mass(max(half, lo), hi)
        return tail <= self._params.tail_tol * total

    def eigen_test(self, lam, v, alpha):
        tol = self._params.condition_tol
        d1, d2 = self.defects(lam, v, alpha)
        residuals = (abs(d1), abs(d2))
        psi = self.candidate(lam, v)
        if not self.square_integrable(psi, v):
            return Rejection(lam, residuals, "candidate is not square integrable")
        if residuals[0] > tol or residuals[1] > tol:
            return Rejection(lam, residuals)
        return EigenResult(
            float(lam), 1, [psi], residuals, method="boundary conditions"
        )

    def polish(self, lam, v, alpha, bracket):
        """
        Zero of the first condition near lam, to root tolerance

        Near a real zero d1 is linear in lambda with a complex slope, so
        Re(conj(slope) d1) changes sign there and brentq can bracket it.
        Returns lam unchanged when the rotated condition has no sign change
        on the bracket.
        """
        a, b = bracket
        h = 1e-6 * max(1.0, abs(lam))
        d_lo, d_hi = self.first_condition([lam - h, lam + h], v, alpha)
        slope = (d_hi - d_lo) / (2.0 * h)
        if slope == 0.0:
            return lam
        rotation = np.conj(slope) / abs(slope)

        def rotated(x):
            return (rotation * self.first_condition([x], v, alpha)[0]).real

        fa, fb = rotated(a), rotated(b)
        if fa == 0.0:
            return a
        if fb == 0.0:
            return b
        if fa * fb > 0.0:
            return lam
        return brentq(
            rotated,
            a,
            b,
            xtol=self._params.root_tol,
            maxiter=self._params.root_max_iterations,
        )

    def scan(self, v, alpha, lam_range, step=None):
        """
        Every eigenvalue in the range: local minima of the first condition
        on a grid, located on the sum of both squared defects and polished
        to a zero of the first condition
        """
        lo, hi = lam_range
        if not lo < hi:
            raise ValidationError(f"empty range {lam_range}")
        if step is None:
            step = self._params.axis_scan_step
        n = int(np.ceil((hi - lo) / step)) + 1
        grid = np.linspace(lo, hi, n)
        if v.is_zero:
            return []
        d1 = self.first_condition(grid, v, alpha)

        results = []
        for i in _near_zero_minima(d1):
            a, b = grid[max(i - 1, 0)], grid[min(i + 1, n - 1)]

            def objective(lam):
                d1, d2 = self.defects(lam, v, alpha)
                return abs(d1) ** 2 + abs(d2) ** 2

            res = minimize_scalar(
                objective,
                bounds=(a, b),
                method="bounded",
                options={
                    "xatol": 1e-13,
                    "maxiter": self._params.root_max_iterations,
                },
            )
            outcome = self.eigen_test(self.polish(res.x, v, alpha, (a, b)), v, alpha)
            if isinstance(outcome, EigenResult):
                if results and abs(results[-1].lam - outcome.lam) < step:
                    continue
                results.append(outcome)
        return results


def _near_zero_minima(d1):
    """
    Grid indices of local minima of |d1| no larger than the change to a
    neighbour, as at a simple zero crossed between grid points
    """
    values = np.abs(d1)
    padded = np.concatenate([[np.inf], values, [np.inf]])
    minimum = (values < padded[:-2]) & (values <= padded[2:])
    steps = np.abs(np.diff(d1))
    jump = np.maximum(
        np.concatenate([[0.0], steps]), np.concatenate([steps, [0.0]])
    )
    return np.flatnonzero(minimum & (values <= jump))


def axis_candidate(lam, v, params=None):
    return AxisSpectrum(params).candidate(lam, v)


def axis_eigen_test(lam, v, alpha, params=None):
    return AxisSpectrum(params).eigen_test(lam, v, alpha)
