import math

import numpy as np

from nonlocal_momentum.errors import (
    EvaluationError,
    SingularSystemError,
    ValidationError,
)

SERIES_RADIUS = 0.5
SERIES_TERMS = 20


def _series(w, offset):
    """Sum of w^k / (k + offset)! for k < SERIES_TERMS, by Horner"""
    total = np.zeros_like(w)
    for k in reversed(range(SERIES_TERMS)):
        total = total * w + 1.0 / math.factorial(k + offset)
    return total


def phi1(w):
    """(e^w - 1)/w, equal to 1 at w = 0"""
    w = np.asarray(w, dtype=complex)
    small = np.abs(w) < SERIES_RADIUS
    safe = np.where(small, 1.0, w)
    with np.errstate(over="ignore", invalid="ignore"):
        direct = (np.exp(safe) - 1.0) / safe
    return np.where(small, _series(w, 1), direct)


def phi2(w):
    """(e^w - 1 - w)/w^2, equal to 1/2 at w = 0"""
    w = np.asarray(w, dtype=complex)
    small = np.abs(w) < SERIES_RADIUS
    safe = np.where(small, 1.0, w)
    with np.errstate(over="ignore", invalid="ignore"):
        direct = (np.exp(safe) - 1.0 - safe) / safe ** 2
    return np.where(small, _series(w, 2), direct)


def sinc(u):
    """sin(u)/u with the value 1 at u = 0"""
    return np.sinc(np.asarray(u) / np.pi)


def solve_small(M, rhs, tol=1e-13):
    """
    Solves a 2x2 or 3x3 complex linear system

    Args:
        M (np.ndarray): system matrix
        rhs (np.ndarray): right hand side
        tol (float): relative degeneracy threshold on det M

    Returns:
        np.ndarray: solution vector
    """
    M = np.asarray(M, dtype=complex)
    rhs = np.asarray(rhs, dtype=complex)
    if M.shape not in [(2, 2), (3, 3)]:
        raise ValidationError(f"solve_small expects 2x2 or 3x3, got {M.shape}")
    det = np.linalg.det(M)
    scale = np.max(np.abs(M))
    if scale == 0.0 or abs(det) <= tol * scale ** M.shape[0]:
        raise SingularSystemError(det)
    return np.linalg.solve(M, rhs)


def numerical_rank(K, rel_tol=1e-8):
    """Number of singular values of K above rel_tol times the largest"""
    K = np.asarray(K)
    if K.ndim != 2 or min(K.shape) < 8:
        raise ValidationError("numerical_rank needs at least 8x8 samples")
    if not np.all(np.isfinite(K)):
        bad = np.argwhere(~np.isfinite(K))[0]
        raise EvaluationError(tuple(bad), K[tuple(bad)])
    sigma = np.linalg.svd(K, compute_uv=False)
    if sigma[0] == 0.0:
        return 0
    return int(np.sum(sigma >= rel_tol * sigma[0]))


def singular_value_ratios(K):
    sigma = np.linalg.svd(np.asarray(K), compute_uv=False)
    if sigma[0] == 0.0:
        return np.zeros_like(sigma)
    return sigma / sigma[0]


def parse_complex(token):
    """Parses ``a+bi``, ``bi``, ``a`` or ``i``"""
    text = token.strip().lower().replace(" ", "")
    if not text or "pi" in text:
        raise ValidationError(f"cannot parse complex number {token!r}")
    try:
        return complex(text.replace("i", "j"))
    except ValueError:
        raise ValidationError(f"cannot parse complex number {token!r}")


def parse_real(token):
    """Parses a float, allowing multiples of pi such as ``pi/2`` or ``-3pi``"""
    text = token.strip().lower().replace(" ", "")
    try:
        if "pi" not in text:
            return float(text)
        coeff, _, divisor = text.partition("pi")
        coeff = coeff.rstrip("*")
        if coeff in ["", "+"]:
            coeff = 1.0
        elif coeff == "-":
            coeff = -1.0
        else:
            coeff = float(coeff)
        if divisor:
            if not divisor.startswith("/"):
                raise ValueError
            return coeff * np.pi / float(divisor[1:])
        return coeff * np.pi
    except ValueError:
        raise ValidationError(f"cannot parse real number {token!r}")


def parse_pair(token):
    """Parses ``a,b`` into two reals"""
    parts = token.split(",")
    if len(parts) != 2:
        raise ValidationError(f"expected two comma separated values: {token!r}")
    lo, hi = parse_real(parts[0]), parse_real(parts[1])
    if not lo < hi:
        raise ValidationError(f"empty range {token!r}")
    return lo, hi


def complex_to_json(z):
    return [float(np.real(z)), float(np.imag(z))]
