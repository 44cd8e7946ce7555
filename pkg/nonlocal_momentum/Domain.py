from dataclasses import dataclass
from enum import IntEnum

from nonlocal_momentum.errors import DomainMismatchError, ValidationError


class Domain(IntEnum):
    AXIS = 0
    INTERVAL = 1

    @classmethod
    def from_name(cls, name):
        names = {"axis": cls.AXIS, "interval": cls.INTERVAL}
        if name not in names:
            raise ValidationError(f"unknown model {name!r}")
        return names[name]


class Side(IntEnum):
    """Which one-sided limit to take at a jump point"""

    MINUS = -1
    PLUS = 1


def boundary_points(domain):
    """Returns the left and right boundary points as (x, side) pairs.

    On the axis these are -0 and +0, on the interval 0 and 1.
    """
    if domain is Domain.AXIS:
        return (0.0, Side.MINUS), (0.0, Side.PLUS)
    return (0.0, Side.PLUS), (1.0, Side.MINUS)


def check_same_domain(*functions):
    domains = {f.domain for f in functions if getattr(f, "domain", None) is not None}
    if len(domains) > 1:
        raise DomainMismatchError(
            "functions on the axis and on [0, 1] cannot be combined"
        )
    return domains.pop() if domains else None


@dataclass(frozen=True)
class BoundaryValuePair:
    """psi(-0), psi(+0) on the axis or psi(0), psi(1) on the interval"""

    minus: complex
    plus: complex

    def as_list(self):
        return [self.minus, self.plus]
