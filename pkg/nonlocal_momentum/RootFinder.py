from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from nonlocal_momentum.Parameters import Parameters
from nonlocal_momentum.errors import BudgetExceededError, ValidationError

TANGENT_SAMPLES = 33


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValidationError(f"bracket [{self.lo}, {self.hi}] is empty")


class RootFinder:
    """Bracketed real roots, including tangent (double) roots"""

    def __init__(self, params):
        self._params = params

    def make_brackets(self, lo, hi, cell_edges=(), subdivisions=None, margin=0.0):
        """
        Splits [lo, hi] at cell edges and subdivides each cell.

        Args:
            lo (float): start of the search range
            hi (float): end of the search range
            cell_edges (list): points the brackets must not straddle
            subdivisions (int): brackets per cell
            margin (float): gap left on either side of every cell edge

        Returns:
            list: Bracket list covering the range
        """
        if subdivisions is None:
            subdivisions = self._params.bracket_subdivisions
        edges = [lo] + [e for e in sorted(cell_edges) if lo < e < hi] + [hi]
        brackets = []
        for a, b in zip(edges[:-1], edges[1:]):
            a_in = a + margin if a != lo else a
            b_in = b - margin if b != hi else b
            if not a_in < b_in:
                continue
            points = np.linspace(a_in, b_in, subdivisions + 1)
            for p, q in zip(points[:-1], points[1:]):
                brackets.append(Bracket(float(p), float(q)))
        return brackets

    def find_real_roots(self, f, brackets, tol=None):
        if tol is None:
            tol = self._params.root_tol
        roots = []
        for bracket in brackets:
            roots += self._roots_in_bracket(f, bracket, tol)
        return self._merge(sorted(roots), tol)

    def _roots_in_bracket(self, f, bracket, tol):
        fa, fb = f(bracket.lo), f(bracket.hi)
        if fa == 0.0:
            return [bracket.lo]
        if fb == 0.0:
            return [bracket.hi]
        if np.sign(fa) != np.sign(fb):
            root, info = brentq(
                f,
                bracket.lo,
                bracket.hi,
                xtol=tol,
                maxiter=self._params.root_max_iterations,
                full_output=True,
                disp=False,
            )
            if not info.converged:
                raise BudgetExceededError(root)
            return [root]
        tangent = self._tangent_root(f, bracket, tol)
        return [] if tangent is None else [tangent]

    def _tangent_root(self, f, bracket, tol):
        x = np.linspace(bracket.lo, bracket.hi, TANGENT_SAMPLES)
        values = np.abs([f(xi) for xi in x])
        scale = max(np.max(values), 1.0)
        i = int(np.argmin(values))
        if i == 0 or i == len(x) - 1:
            return None
        res = minimize_scalar(
            lambda t: abs(f(t)),
            bounds=(x[i - 1], x[i + 1]),
            method="bounded",
            options={
                "xatol": tol,
                "maxiter": self._params.root_max_iterations,
            },
        )
        if not res.success:
            raise BudgetExceededError(res.x, "tangent search did not converge")
        if abs(f(res.x)) > tol * scale:
            return None
        delta = 0.25 * (x[1] - x[0])
        curvature = (
            abs(f(res.x - delta)) - 2.0 * abs(f(res.x)) + abs(f(res.x + delta))
        )
        if curvature <= 0.0:
            return None
        return float(res.x)

    @staticmethod
    def _merge(roots, tol):
        merged = []
        for r in roots:
            if merged and abs(r - merged[-1]) <= 10.0 * tol * max(1.0, abs(r)):
                continue
            merged.append(float(r))
        return merged

    @staticmethod
    def multiplicity(f, root, delta=None):
        """1 if f changes sign across the root, 2 if it only touches zero"""
        if delta is None:
            delta = 1e-4 * max(1.0, abs(root))
        left, right = f(root - delta), f(root + delta)
        if np.sign(left) != np.sign(right):
            return 1
        return 2


def find_real_roots(f, brackets, tol, params=None):
    if params is None:
        params = Parameters(validate=False)
    return RootFinder(params).find_real_roots(f, brackets, tol)
