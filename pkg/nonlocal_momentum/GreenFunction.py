import numpy as np

from nonlocal_momentum.BoundaryPhase import BoundaryPhase
from nonlocal_momentum.ComplexFunction import ComplexFunction
from nonlocal_momentum.Domain import Domain
from nonlocal_momentum.EigenResult import EigenResult
from nonlocal_momentum.SpectralPoint import SpectralPoint
from nonlocal_momentum.errors import PoleError, ValidationError

DEFAULT_POLE_TOL = 1e-12


def g_axis(zp, x, side=None):
    """
    g_z(x) = i sign(Im z) theta(-x Im z) e^{-izx}

    At x = 0 the side picks g_z(-0) = i theta(Im z) or
    g_z(+0) = -i theta(-Im z); without a side theta(0) = 0.
    """
    zp = SpectralPoint.coerce(zp)
    x = np.asarray(x, dtype=float)
    if zp.upper:
        active = x < 0
        at_zero = side is not None and side < 0
    else:
        active = x > 0
        at_zero = side is not None and side > 0
    if at_zero:
        active = active | (x == 0)
    arg = np.where(active, x, 0.0)
    return np.where(active, 1j * zp.sign_im * np.exp(-1j * zp.z * arg), 0.0)


def beta_point(zp, alpha):
    zp = SpectralPoint.coerce(zp)
    phase = BoundaryPhase.coerce(alpha).phase
    if zp.upper:
        return 1j * (1.0 - np.conj(phase))
    return 1j * (phase - 1.0)


def _point_weight(zp, alpha):
    """G_z(x, -0; alpha) = g_z(x) times this weight"""
    if zp.upper:
        return 1.0 + 0j
    return BoundaryPhase.coerce(alpha).phase


def _breakpoints(f, extra=()):
    return np.concatenate(
        [np.asarray(getattr(f, "breakpoints", ()), dtype=float), extra]
    )


class FreeAxisGreen:
    """The kernel g_z(x - y) of the free momentum operator on the axis"""

    domain = Domain.AXIS

    def __init__(self, zp):
        self.zp = SpectralPoint.coerce(zp)

    def evaluate(self, x, y, side=None):
        x, y = np.broadcast_arrays(
            np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        )
        return g_axis(self.zp, x - y, side)

    def convolve(self, f, x):
        """integral of g_z(x - y) f(y), f having a ``moment``"""
        s = 1j * self.zp.z
        if self.zp.upper:
            return 1j * f.moment(s, x, np.inf, shift=x)
        return -1j * f.moment(s, -np.inf, x, shift=x)

    def apply(self, f, label="g*f"):
        return ComplexFunction(
            lambda x, side: self.convolve(f, x),
            f.domain,
            breakpoints=_breakpoints(f),
            label=label,
        )


class PointGreen:
    """
    The kernel G_z(x, y; alpha) of the point interaction psi(+0) =
    e^{i alpha} psi(-0) at the origin
    """

    domain = Domain.AXIS

    def __init__(self, zp, alpha):
        self.zp = SpectralPoint.coerce(zp)
        self.alpha = BoundaryPhase.coerce(alpha)
        self.free = FreeAxisGreen(self.zp)
        self.beta = beta_point(self.zp, self.alpha)

    def evaluate(self, x, y, side=None):
        x, y = np.broadcast_arrays(
            np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        )
        return g_axis(self.zp, x - y) + g_axis(
            self.zp, x, side
        ) * self.beta * g_axis(self.zp, -y)

    def _origin_moment(self, f):
        """integral of g_z(-y) f(y)"""
        s = 1j * self.zp.z
        if self.zp.upper:
            return 1j * f.moment(s, 0.0, np.inf)
        return -1j * f.moment(s, -np.inf, 0.0)

    def apply(self, f, label="G*f"):
        jump = self.beta * complex(self._origin_moment(f))

        def fn(x, side):
            return self.free.convolve(f, x) + g_axis(self.zp, x, side) * jump

        return ComplexFunction(
            fn, Domain.AXIS, breakpoints=_breakpoints(f, [0.0]), label=label
        )

    def e0(self):
        """E_0(x, z) = G_z(x, -0; alpha)"""
        weight = _point_weight(self.zp, self.alpha)
        return ComplexFunction(
            lambda x, side: weight * g_axis(self.zp, x, side),
            Domain.AXIS,
            breakpoints=[0.0],
            label="E0",
        )


def check_pole(z, alpha, tol=DEFAULT_POLE_TOL):
    """Raises PoleError when z is within tol of -alpha + 2 pi n"""
    alpha = BoundaryPhase.coerce(alpha).alpha
    z = complex(z)
    n = np.round((z.real + alpha) / (2.0 * np.pi))
    nearest = -alpha + 2.0 * np.pi * n
    if abs(z - nearest) <= tol:
        raise PoleError(nearest, z)


class IntervalGreen:
    """
    The kernel g(x, y; z; alpha) of the momentum operator on [0, 1] with
    psi(1) = e^{i alpha} psi(0)

    z may be real as long as it avoids the free eigenvalues.
    """

    domain = Domain.INTERVAL

    def __init__(self, z, alpha, pole_tol=DEFAULT_POLE_TOL):
        self.z = complex(z.z if isinstance(z, SpectralPoint) else z)
        self.alpha = BoundaryPhase.coerce(alpha)
        check_pole(self.z, self.alpha, pole_tol)
        phase = self.alpha.phase
        with np.errstate(over="ignore", invalid="ignore"):
            denominator = np.exp(-1j * self.z) - phase
            self.beta = 1j * np.exp(-1j * self.z) / denominator
            # beta - i, written so it stays accurate for large Im z
            self.beta_below = 1j * phase / denominator
        if not (np.isfinite(self.beta) and np.isfinite(self.beta_below)):
            # |Im z| beyond exponent range
            upper = self.z.imag > 0
            self.beta = 1j if upper else 0j
            self.beta_below = 0j if upper else -1j

    def evaluate(self, x, y, side=None):
        x, y = np.broadcast_arrays(
            np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        )
        below = x > y
        if side is not None and side > 0:
            below = below | (x == y)
        coeff = np.where(below, self.beta_below, self.beta)
        return coeff * np.exp(-1j * self.z * (x - y))

    def convolve(self, f, x):
        s = 1j * self.z
        return self.beta_below * f.moment(
            s, 0.0, x, shift=x
        ) + self.beta * f.moment(s, x, 1.0, shift=x)

    def apply(self, f, label="g*f"):
        return ComplexFunction(
            lambda x, side: self.convolve(f, x),
            Domain.INTERVAL,
            support=(0.0, 1.0),
            breakpoints=_breakpoints(f),
            label=label,
        )

    def e0(self):
        """E_0(x, z) = g(x, 1; z; alpha) = beta e^{iz(1 - x)}"""
        return ComplexFunction(
            lambda x, side: self.beta * np.exp(1j * self.z * (1.0 - x)),
            Domain.INTERVAL,
            support=(0.0, 1.0),
            label="E0",
        )

    def rank_one_terms(self):
        """
        e(x, z) and w(z, alpha) with g - g_z(x - y) = e(x) w conj(e(y, conj z))
        off the diagonal
        """
        zp = SpectralPoint.coerce(self.z)
        phase = self.alpha.phase

        def e(zq):
            return ComplexFunction(
                lambda x, side: g_axis(zq, x) + g_axis(zq, x - 1.0),
                Domain.INTERVAL,
                support=(0.0, 1.0),
                label="e",
            )

        if zp.upper:
            w = 1j / (np.exp(1j * self.z) - np.conj(phase))
        else:
            w = -1j / (np.exp(-1j * self.z) - phase)
        return e(zp), w, e(zp.conjugate())


def G_point(zp, x, y, alpha, side=None):
    return PointGreen(zp, alpha).evaluate(x, y, side)


def g_interval(z, x, y, alpha, side=None, pole_tol=DEFAULT_POLE_TOL):
    return IntervalGreen(z, alpha, pole_tol).evaluate(x, y, side)


def interval_rank_one_terms(zp, alpha):
    return IntervalGreen(zp, alpha).rank_one_terms()


def free_spectrum_interval(alpha, lambda_min, lambda_max):
    """Eigenvalues -alpha + 2 pi n of the free operator in the range"""
    if not lambda_min < lambda_max:
        raise ValidationError(f"empty range [{lambda_min}, {lambda_max}]")
    alpha = BoundaryPhase.coerce(alpha).alpha
    n_lo = int(np.floor((lambda_min + alpha) / (2.0 * np.pi)))
    n_hi = int(np.ceil((lambda_max + alpha) / (2.0 * np.pi)))
    results = []
    for n in range(n_lo, n_hi + 1):
        lam = -alpha + 2.0 * np.pi * n
        if lambda_min <= lam <= lambda_max:
            results.append(
                EigenResult(
                    lam,
                    eigenfunctions=[_plane_wave(lam)],
                    method="free lattice",
                )
            )
    return results


def _plane_wave(lam):
    return lambda x: np.exp(-1j * lam * np.asarray(x, dtype=float))


def unitary_multiplier(alpha):
    """
    e^{i alpha} on x < 0 and 1 on x > 0

    Multiplying by it turns psi(+0) = e^{i alpha} psi(-0) into continuity.
    """
    phase = BoundaryPhase.coerce(alpha).phase

    def fn(x, side):
        left = (x < 0) | ((x == 0) & (side < 0))
        return np.where(left, phase, 1.0 + 0j)

    return ComplexFunction(fn, Domain.AXIS, breakpoints=[0.0], label="U")
