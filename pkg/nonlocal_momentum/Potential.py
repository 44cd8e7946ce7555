import csv
import warnings
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from nonlocal_momentum.Domain import Domain, Side
from nonlocal_momentum.Quadrature import Quadrature
from nonlocal_momentum.errors import DomainMismatchError, ValidationError
from nonlocal_momentum.utility import parse_complex, parse_pair, parse_real, phi1

DEFAULT_RADIUS = 40.0


class PotentialForm(IntEnum):
    ZERO = 0
    CONSTANT = 1
    EXP_DECAY = 2
    SIGN_EXP = 3
    SAMPLED = 4
    PIECEWISE = 5


@dataclass(frozen=True)
class ExponentialPiece:
    """coeff * exp(rate * y) for lo < y < hi"""

    coeff: complex
    rate: complex
    lo: float
    hi: float


def exponential_integral(rate, a, b):
    """
    Integral of exp(rate * y) over [a, b], zero for empty intervals

    The exponential is anchored at whichever end keeps it bounded so that
    large |Re rate| neither overflows nor cancels.
    """
    rate, a, b = np.broadcast_arrays(
        np.asarray(rate, dtype=complex),
        np.asarray(a, dtype=float),
        np.asarray(b, dtype=float),
    )
    length = np.maximum(b - a, 0.0)
    upper = np.real(rate) > 0
    anchor = np.where(upper, b, a)
    anchor = np.where(np.isfinite(anchor), anchor, 0.0)
    with np.errstate(over="ignore", invalid="ignore"):
        value = (
            np.exp(rate * anchor)
            * length
            * phi1(np.where(upper, -rate, rate) * length)
        )
    return np.where(length > 0, value, 0.0)


class Potential:
    """
    A complex L2 function on the axis or on [0, 1]

    Closed forms are stored as sums of exponential pieces so that the
    Green's-function convolutions have exact antiderivatives; sampled
    potentials are interpolated linearly and integrated by quadrature.
    """

    def __init__(
        self,
        domain,
        form,
        pieces=(),
        grid=None,
        values=None,
        label=None,
        quadrature=None,
    ):
        self.domain = domain
        self.form = form
        self.pieces = tuple(pieces)
        self.label = label if label is not None else form.name.lower()
        self._quadrature = quadrature if quadrature is not None else Quadrature()

        if form is PotentialForm.SAMPLED:
            self.grid = np.asarray(grid, dtype=float)
            self.values = np.asarray(values, dtype=complex)
            self._check_samples()
            self.support = (float(self.grid[0]), float(self.grid[-1]))
            self.breakpoints = np.array(self.support)
        else:
            self.grid = None
            self.values = None
            if self.pieces:
                self.support = (
                    min(p.lo for p in self.pieces),
                    max(p.hi for p in self.pieces),
                )
            else:
                self.support = None
            self.breakpoints = np.unique(
                [p.lo for p in self.pieces] + [p.hi for p in self.pieces]
            )
        self._check_support()

    # Constructors

    @classmethod
    def zero(cls, domain=Domain.INTERVAL):
        return cls(domain, PotentialForm.ZERO)

    @classmethod
    def constant(cls, value, support=(0.0, 1.0), domain=Domain.INTERVAL):
        value = complex(value)
        lo, hi = float(support[0]), float(support[1])
        if not lo < hi:
            raise ValidationError(f"empty support {support}")
        if value == 0:
            return cls.zero(domain)
        return cls(
            domain,
            PotentialForm.CONSTANT,
            [ExponentialPiece(value, 0.0, lo, hi)],
            label=f"const({value})@{lo:g},{hi:g}",
        )

    @classmethod
    def exp_decay(cls, k, gamma, radius=DEFAULT_RADIUS):
        """theta(x) k exp(-(1 + i gamma) x), truncated at the radius"""
        k = complex(k)
        return cls(
            Domain.AXIS,
            PotentialForm.EXP_DECAY,
            [ExponentialPiece(k, -(1.0 + 1j * gamma), 0.0, radius)],
            label=f"expdecay(k={k},gamma={gamma})",
        )

    @classmethod
    def sign_exp(cls, radius=DEFAULT_RADIUS):
        """2i sign(x) exp(-|x|), truncated at the radius"""
        return cls(
            Domain.AXIS,
            PotentialForm.SIGN_EXP,
            [
                ExponentialPiece(-2j, 1.0, -radius, 0.0),
                ExponentialPiece(2j, -1.0, 0.0, radius),
            ],
            label="signexp",
        )

    @classmethod
    def exponential(cls, coeff, rate, lo, hi, domain=Domain.AXIS):
        """coeff exp(rate x) on (lo, hi), e.g. a closed-form test function"""
        return cls(
            domain,
            PotentialForm.PIECEWISE,
            [ExponentialPiece(complex(coeff), complex(rate), lo, hi)],
            label=f"{coeff}*exp({rate}x)@{lo:g},{hi:g}",
        )

    @classmethod
    def sampled(cls, grid, values, domain=Domain.INTERVAL, label="sampled"):
        return cls(
            domain, PotentialForm.SAMPLED, grid=grid, values=values, label=label
        )

    @classmethod
    def from_pieces(cls, domain, pieces, label=None, tol=1e-15):
        """Sums pieces sharing rate and support and drops vanishing ones"""
        merged = {}
        for p in pieces:
            key = (p.rate, p.lo, p.hi)
            merged[key] = merged.get(key, 0.0) + p.coeff
        scale = max([abs(c) for c in merged.values()], default=0.0)
        kept = [
            ExponentialPiece(c, rate, lo, hi)
            for (rate, lo, hi), c in merged.items()
            if abs(c) > tol * max(scale, 1.0)
        ]
        if not kept:
            return cls.zero(domain)
        if len(kept) == 1 and kept[0].rate == 0:
            p = kept[0]
            return cls.constant(p.coeff, (p.lo, p.hi), domain)
        return cls(domain, PotentialForm.PIECEWISE, kept, label=label)

    @classmethod
    def from_literal(cls, text, domain, radius=DEFAULT_RADIUS):
        """
        Parses the command line syntax

        ``const:2i@0,1``, ``expdecay:k=2i,gamma=0.5``, ``signexp``, ``zero``
        and ``sampled:<path.csv>`` with rows x,re,im.
        """
        kind, _, rest = text.strip().partition(":")
        kind = kind.lower()
        if kind == "zero":
            return cls.zero(domain)
        if kind == "const":
            value, _, support = rest.partition("@")
            support = parse_pair(support) if support else (0.0, 1.0)
            return cls.constant(parse_complex(value), support, domain)
        if kind in ["expdecay", "signexp"]:
            if domain is not Domain.AXIS:
                raise DomainMismatchError(f"{kind} lives on the axis")
            if kind == "signexp":
                return cls.sign_exp(radius)
            fields = dict(
                item.split("=", 1) for item in rest.split(",") if "=" in item
            )
            if "k" not in fields or "gamma" not in fields:
                raise ValidationError("expdecay needs k=... and gamma=...")
            return cls.exp_decay(
                parse_complex(fields["k"]), parse_real(fields["gamma"]), radius
            )
        if kind == "sampled":
            return cls.from_csv(rest, domain)
        raise ValidationError(f"unknown potential literal {text!r}")

    @classmethod
    def from_csv(cls, path, domain):
        rows = []
        try:
            with open(path, newline="") as fp:
                for row in csv.reader(fp):
                    if not row or row[0].startswith("#"):
                        continue
                    try:
                        rows.append([float(entry) for entry in row[:3]])
                    except ValueError:
                        continue  # header
        except OSError as err:
            raise ValidationError(f"cannot read samples from {path!r}: {err}")
        if any(len(row) != 3 for row in rows):
            raise ValidationError(f"{path} rows must be x,re,im")
        if len(rows) < 2:
            raise ValidationError(f"{path} holds fewer than two samples")
        data = np.array(rows)
        return cls.sampled(
            data[:, 0], data[:, 1] + 1j * data[:, 2], domain, label=path
        )

    # Checks

    def _check_samples(self):
        if self.grid.ndim != 1 or self.grid.shape != self.values.shape:
            raise ValidationError("sample grid and values must match")
        if len(self.grid) < 2 or np.any(np.diff(self.grid) <= 0):
            raise ValidationError("sample grid must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("sampled potential has non-finite values")

    def _check_support(self):
        if self.domain is Domain.INTERVAL and self.support is not None:
            lo, hi = self.support
            if lo < 0.0 or hi > 1.0:
                raise DomainMismatchError(
                    f"support {self.support} is not inside [0, 1]"
                )

    # Evaluation

    @property
    def is_zero(self):
        return self.form is PotentialForm.ZERO

    @property
    def is_closed_form(self):
        return self.form is not PotentialForm.SAMPLED

    def __call__(self, x, side=Side.PLUS):
        return self.evaluate(x, side)

    def evaluate(self, x, side=Side.PLUS):
        """One-sided values, the side only matters at breakpoints"""
        x = np.asarray(x, dtype=float)
        if self.form is PotentialForm.SAMPLED:
            return self._evaluate_samples(x, side)
        out = np.zeros(x.shape, dtype=complex)
        for p in self.pieces:
            inside = (
                ((x > p.lo) & (x < p.hi))
                | ((x == p.lo) & (side > 0))
                | ((x == p.hi) & (side < 0))
            )
            arg = np.where(inside, x, 0.0)
            out += np.where(inside, p.coeff * np.exp(p.rate * arg), 0.0)
        return out

    def _evaluate_samples(self, x, side):
        re = np.interp(x, self.grid, self.values.real, left=0.0, right=0.0)
        im = np.interp(x, self.grid, self.values.imag, left=0.0, right=0.0)
        outside = ((x == self.grid[0]) & (side < 0)) | (
            (x == self.grid[-1]) & (side > 0)
        )
        return np.where(outside, 0.0, re + 1j * im)

    def constant_value(self):
        """V if this is the constant V on all of (0, 1), otherwise None"""
        if self.is_zero:
            return 0j
        if (
            len(self.pieces) == 1
            and self.pieces[0].rate == 0
            and (self.pieces[0].lo, self.pieces[0].hi) == (0.0, 1.0)
        ):
            return complex(self.pieces[0].coeff)
        return None

    def scaled(self, c):
        c = complex(c)
        if self.form is PotentialForm.SAMPLED:
            return Potential.sampled(
                self.grid, c * self.values, self.domain, self.label
            )
        return Potential.from_pieces(
            self.domain,
            [ExponentialPiece(c * p.coeff, p.rate, p.lo, p.hi) for p in self.pieces],
            label=f"{c}*{self.label}",
        )

    def moment(self, s, lo, hi, shift=0.0):
        """
        Integral of exp(s (y - shift)) v(y) over [lo, hi]

        All arguments broadcast. Every convolution of v with a free or
        point-interaction Green's function reduces to this.
        """
        s, lo, hi, shift = np.broadcast_arrays(
            np.asarray(s, dtype=complex),
            np.asarray(lo, dtype=float),
            np.asarray(hi, dtype=float),
            np.asarray(shift, dtype=float),
        )
        if self.is_zero:
            return np.zeros(s.shape, dtype=complex)
        if self.form is PotentialForm.SAMPLED:
            return self._sampled_moment(s, lo, hi, shift)
        out = np.zeros(s.shape, dtype=complex)
        for p in self.pieces:
            a = np.maximum(lo, p.lo)
            b = np.minimum(hi, p.hi)
            # exp(s(y - shift)) c exp(r y) = c exp(-s shift) exp((s + r) y)
            rate = s + p.rate
            length = np.maximum(b - a, 0.0)
            upper = np.real(rate) > 0
            anchor = np.where(upper, b, a)
            anchor = np.where(length > 0, anchor, 0.0)
            with np.errstate(over="ignore", invalid="ignore"):
                value = (
                    p.coeff
                    * np.exp(p.rate * anchor + s * (anchor - shift))
                    * length
                    * phi1(np.where(upper, -rate, rate) * length)
                )
            out += np.where(length > 0, value, 0.0)
        return out

    def _sampled_moment(self, s, lo, hi, shift):
        shape = s.shape
        a = np.maximum(lo, self.grid[0]).ravel()
        b = np.minimum(hi, self.grid[-1]).ravel()
        y, w = self._quadrature.batch_nodes(a, b)
        s_col = s.ravel()[:, np.newaxis]
        shift_col = shift.ravel()[:, np.newaxis]
        integrand = np.exp(s_col * (y - shift_col)) * self(y)
        return np.sum(w * integrand, axis=1).reshape(shape)

    def norm(self):
        if self.is_zero:
            return 0.0
        lo, hi = self.support
        return np.sqrt(
            self._quadrature.integrate(
                lambda x: np.abs(self(x)) ** 2, lo, hi, self.breakpoints
            ).real
        )

    def __repr__(self):
        return f"Potential({self.domain.name.lower()}, {self.label})"


def resample(v, grid):
    """Samples v on a grid, with a warning about the O(h^2) accuracy loss"""
    warnings.warn(
        f"resampling {v.label} onto a grid of {len(grid)} points",
        stacklevel=2,
    )
    return Potential.sampled(grid, v(grid), v.domain, label=f"resampled {v.label}")
