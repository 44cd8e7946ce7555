import warnings

import numpy as np

from nonlocal_momentum.BoundaryPhase import BoundaryPhase
from nonlocal_momentum.Domain import Domain, check_same_domain
from nonlocal_momentum.Potential import (
    ExponentialPiece,
    Potential,
    PotentialForm,
    exponential_integral,
)
from nonlocal_momentum.Quadrature import Quadrature
from nonlocal_momentum.errors import DomainMismatchError
from nonlocal_momentum.utility import phi2


def _overlap(*functions):
    """Intersection of the known supports, None if it is empty"""
    supports = [f.support for f in functions if f.support is not None]
    if any(getattr(f, "is_zero", False) for f in functions):
        return None
    if not supports:
        return None
    lo = max(s[0] for s in supports)
    hi = min(s[1] for s in supports)
    if not lo < hi:
        return None
    return lo, hi


def inner_product(psi, v, q=None):
    """
    <psi, v> = integral of psi(x) conj(v(x))

    Exact for two piecewise-exponential potentials, composite quadrature
    split at every known jump otherwise.
    """
    domain = check_same_domain(psi, v)
    if (
        isinstance(psi, Potential)
        and isinstance(v, Potential)
        and psi.is_closed_form
        and v.is_closed_form
    ):
        total = 0j
        for p in psi.pieces:
            for r in v.pieces:
                total += (
                    p.coeff
                    * np.conj(r.coeff)
                    * complex(
                        exponential_integral(
                            p.rate + np.conj(r.rate),
                            max(p.lo, r.lo),
                            min(p.hi, r.hi),
                        )
                    )
                )
        return total

    region = _overlap(psi, v)
    if region is None:
        return 0j
    breakpoints = list(psi.breakpoints) + list(v.breakpoints)
    if domain is Domain.AXIS:
        breakpoints.append(0.0)
    return Quadrature(q).integrate(
        lambda x: psi(x) * np.conj(v(x)), region[0], region[1], breakpoints
    )


def _require_interval(v):
    if v.domain is not Domain.INTERVAL:
        raise DomainMismatchError("the transform is defined on [0, 1]")


def tilde_v(v, lam):
    """integral over [0, 1] of e^{i lam y} v(y)"""
    _require_interval(v)
    value = v.moment(1j * np.asarray(lam, dtype=float), 0.0, 1.0)
    return complex(value) if np.ndim(value) == 0 else value


def hat_v(v, lam, q=None):
    """
    Double integral over 0 < y < x < 1 of e^{-i lam (x - y)} v(y) conj(v(x))

    Closed form for a constant on one interval, otherwise the outer
    integral is done by quadrature over the exact inner moment.
    """
    _require_interval(v)
    lam = float(lam)
    if v.is_zero:
        return 0j
    if v.form is PotentialForm.CONSTANT:
        p = v.pieces[0]
        length = p.hi - p.lo
        return complex(
            abs(p.coeff) ** 2 * length ** 2 * phi2(-1j * lam * length)
        )
    lo, hi = v.support
    return Quadrature(q).integrate(
        lambda x: np.conj(v(x)) * v.moment(1j * lam, 0.0, x, shift=x),
        lo,
        hi,
        v.breakpoints,
    )


def combine(v1, v2, alpha):
    """v1 + e^{i alpha} v2"""
    domain = check_same_domain(v1, v2)
    phase = BoundaryPhase.coerce(alpha).phase
    if v2.is_zero:
        return v1
    if v1.is_zero:
        return v2.scaled(phase)
    if v1.is_closed_form and v2.is_closed_form:
        pieces = list(v1.pieces) + [
            ExponentialPiece(phase * p.coeff, p.rate, p.lo, p.hi)
            for p in v2.pieces
        ]
        return Potential.from_pieces(
            domain, pieces, label=f"{v1.label}+e^ia*{v2.label}"
        )

    grids = [v.grid for v in (v1, v2) if v.grid is not None]
    step = min(np.min(np.diff(g)) for g in grids)
    # closed-form operands keep their whole support on the shared grid
    for v in (v1, v2):
        if v.grid is None:
            lo, hi = v.support
            n = int(np.ceil((hi - lo) / step)) + 1
            grids.append(np.linspace(lo, hi, n))
            grids.append(np.asarray(v.breakpoints, dtype=float))
    grid = np.unique(np.concatenate(grids))
    grid = grid[np.concatenate([[True], np.diff(grid) > 1e-12 * step])]
    for v in (v1, v2):
        if v.grid is None or len(v.grid) != len(grid):
            warnings.warn(
                f"combine resamples {v.label} onto {len(grid)} points",
                stacklevel=2,
            )
    return Potential.sampled(
        grid, v1(grid) + phase * v2(grid), domain, label="combined"
    )


def vanishing_difference(v1, v2, alpha, tol=1e-10, q=None):
    """
    True if the rank-two operator difference vanishes

    That is v1 conj(u)^T = u conj(v1)^T with u = e^{i alpha} v2, checked on
    quadrature nodes covering both supports.
    """
    domain = check_same_domain(v1, v2)
    phase = BoundaryPhase.coerce(alpha).phase
    if v1.is_zero and v2.is_zero:
        return True
    supports = [v.support for v in (v1, v2) if v.support is not None]
    lo = min(s[0] for s in supports)
    hi = max(s[1] for s in supports)
    breakpoints = list(v1.breakpoints) + list(v2.breakpoints)
    if domain is Domain.AXIS:
        breakpoints.append(0.0)
    x, _ = Quadrature(q).nodes(lo, hi, breakpoints)
    a = v1(x)
    u = phase * v2(x)
    difference = np.outer(a, np.conj(u)) - np.outer(u, np.conj(a))
    scale = max(1.0, np.max(np.abs(a)) * np.max(np.abs(u)))
    return bool(np.max(np.abs(difference)) <= tol * scale)
