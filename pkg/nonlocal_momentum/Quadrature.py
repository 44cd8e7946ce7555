from dataclasses import dataclass
from enum import IntEnum

import numpy as np
from scipy.special import roots_legendre

from nonlocal_momentum.errors import EvaluationError, ValidationError


class QuadratureRule(IntEnum):
    GAUSS_LEGENDRE = 0
    TRAPEZOID = 1

    @classmethod
    def names(cls):
        return ["gauss-legendre", "trapezoid"]

    @classmethod
    def from_name(cls, name):
        if isinstance(name, QuadratureRule):
            return name
        if name not in cls.names():
            raise ValidationError(f"unknown quadrature rule {name!r}")
        return cls(cls.names().index(name))

    def order(self, points):
        """Nominal convergence order in the panel width"""
        if self is QuadratureRule.GAUSS_LEGENDRE:
            return 2 * points
        return 2


@dataclass(frozen=True)
class QuadratureSpec:
    rule: QuadratureRule = QuadratureRule.GAUSS_LEGENDRE
    panels: int = 64
    points: int = 8

    def __post_init__(self):
        if self.panels < 1 or self.points < 1:
            raise ValidationError("panels and points must be positive")
        if self.panels * self.points < 2:
            raise ValidationError("quadrature needs at least two nodes")

    def __str__(self):
        name = QuadratureRule.names()[self.rule]
        return f"{name} {self.panels}x{self.points}"


class Quadrature:
    """Composite quadrature on intervals split at jump points"""

    def __init__(self, spec=None):
        if spec is None:
            spec = QuadratureSpec()
        self.spec = spec
        if spec.rule is QuadratureRule.GAUSS_LEGENDRE:
            t, wt = roots_legendre(spec.points)
            # Reference panel is [0, 1]
            self._ref_nodes = 0.5 * (t + 1.0)
            self._ref_weights = 0.5 * wt
            self.nodes = self._gauss_nodes
        else:
            self.nodes = self._trapezoid_nodes

    def _gauss_nodes(self, a, b, breakpoints=()):
        edges = self.piece_edges(a, b, breakpoints)
        xs, ws = [], []
        for lo, hi in zip(edges[:-1], edges[1:]):
            panel_edges = np.linspace(lo, hi, self.spec.panels + 1)
            width = np.diff(panel_edges)[:, np.newaxis]
            xs.append(
                (panel_edges[:-1, np.newaxis] + width * self._ref_nodes).ravel()
            )
            ws.append((width * self._ref_weights).ravel())
        return np.concatenate(xs), np.concatenate(ws)

    def _trapezoid_nodes(self, a, b, breakpoints=()):
        edges = self.piece_edges(a, b, breakpoints)
        n = self.spec.panels * self.spec.points
        xs, ws = [], []
        for lo, hi in zip(edges[:-1], edges[1:]):
            x = np.linspace(lo, hi, n + 1)
            w = np.full(n + 1, (hi - lo) / n)
            w[0] *= 0.5
            w[-1] *= 0.5
            xs.append(x)
            ws.append(w)
        return np.concatenate(xs), np.concatenate(ws)

    @staticmethod
    def piece_edges(a, b, breakpoints=()):
        if not a < b:
            raise ValidationError(f"empty integration range [{a}, {b}]")
        inner = [p for p in np.unique(breakpoints) if a < p < b]
        return np.array([a] + inner + [b], dtype=float)

    def batch_nodes(self, lo, hi):
        """
        Nodes and weights for many intervals [lo_i, hi_i] at once

        Empty intervals (hi_i <= lo_i) get zero weights.

        Returns:
            (np.ndarray, np.ndarray): nodes and weights of shape (n, m)
        """
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        length = np.maximum(hi - lo, 0.0)[:, np.newaxis]
        if self.spec.rule is QuadratureRule.GAUSS_LEGENDRE:
            panels = np.arange(self.spec.panels)
            ref = (
                (panels[:, np.newaxis] + self._ref_nodes) / self.spec.panels
            ).ravel()
            ref_w = np.tile(self._ref_weights, self.spec.panels) / self.spec.panels
        else:
            n = self.spec.panels * self.spec.points
            ref = np.linspace(0.0, 1.0, n + 1)
            ref_w = np.full(n + 1, 1.0 / n)
            ref_w[0] *= 0.5
            ref_w[-1] *= 0.5
        return lo[:, np.newaxis] + length * ref, length * ref_w

    def integrate(self, f, a, b, breakpoints=()):
        x, w = self.nodes(a, b, breakpoints)
        values = np.asarray(f(x))
        check_finite(values, x)
        return complex(np.sum(values * w))


def check_finite(values, nodes):
    if not np.all(np.isfinite(values)):
        idx = np.flatnonzero(~np.isfinite(np.ravel(values)))[0]
        raise EvaluationError(np.ravel(nodes)[idx], np.ravel(values)[idx])


def integrate(f, a, b, q=None, breakpoints=()):
    """Integrates a complex function of one real variable over [a, b]"""
    return Quadrature(q).integrate(f, a, b, breakpoints)
