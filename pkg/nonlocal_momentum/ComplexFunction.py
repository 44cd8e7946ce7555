import numpy as np

from nonlocal_momentum.Domain import BoundaryValuePair, Side, boundary_points


class ComplexFunction:
    """
    A complex function on the axis or on [0, 1], evaluated lazily

    Resolvent outputs, the functions E_j of the kernels and candidate
    eigenfunctions all take this form. ``support`` is None for functions
    living on the whole domain; ``breakpoints`` lists the jumps and kinks
    quadrature must split at.
    """

    def __init__(self, fn, domain, support=None, breakpoints=(), label="psi"):
        self._fn = fn
        self.domain = domain
        self.support = support
        self.breakpoints = np.unique(np.asarray(breakpoints, dtype=float))
        self.label = label

    def __call__(self, x, side=Side.PLUS):
        x = np.asarray(x, dtype=float)
        return np.asarray(self._fn(x, side), dtype=complex)

    def sample(self, grid, side=Side.PLUS):
        return self(np.asarray(grid, dtype=float), side)

    def boundary_values(self):
        """psi(-0), psi(+0) on the axis; psi(0), psi(1) on the interval"""
        (x0, s0), (x1, s1) = boundary_points(self.domain)
        return BoundaryValuePair(
            complex(self(x0, s0)), complex(self(x1, s1))
        )

    def scaled(self, c):
        return ComplexFunction(
            lambda x, side: c * self._fn(x, side),
            self.domain,
            self.support,
            self.breakpoints,
            self.label,
        )

    def __add__(self, other):
        return linear_combination([(1.0, self), (1.0, other)])

    def __sub__(self, other):
        return linear_combination([(1.0, self), (-1.0, other)])

    def __repr__(self):
        return f"ComplexFunction({self.label})"


def linear_combination(terms, label="combination"):
    """sum of c * f for (c, f) in terms, all on one domain"""
    terms = [(complex(c), f) for c, f in terms]
    domain = terms[0][1].domain
    supports = [f.support for _, f in terms]
    if any(s is None for s in supports):
        support = None
    else:
        support = (min(s[0] for s in supports), max(s[1] for s in supports))
    breakpoints = np.concatenate(
        [np.asarray(f.breakpoints, dtype=float) for _, f in terms]
    )

    def fn(x, side):
        total = np.zeros(np.shape(x), dtype=complex)
        for c, f in terms:
            if c != 0:
                total = total + c * f(x, side)
        return total

    return ComplexFunction(fn, domain, support, breakpoints, label)
