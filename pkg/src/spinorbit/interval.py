"""Closed real intervals with outward-rounded arithmetic.

An :class:`Interval` wraps an endpoint pair from :mod:`spinorbit.rmath` and
adds the set predicates, parsing and printing used by the proof layers.
Endpoints are always finite; every constructor rejects NaN/inf, which keeps
unbounded sets out of all model-facing code paths.

Empty intersections are represented by ``None`` (a legitimate outcome of
covering checks), never by a malformed interval.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, getcontext

from . import rmath
from .rmath import DomainError

getcontext().prec = 60

_COMPACT_RE = re.compile(r"^(-?)(\d+)\.(\d+)_(\d+)\^(\d+)$")


def _float_down(d: Decimal) -> float:
    f = float(d)
    return f if Decimal(f) <= d else rmath.down(f)


def _float_up(d: Decimal) -> float:
    f = float(d)
    return f if Decimal(f) >= d else rmath.up(f)


@dataclass(frozen=True, slots=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError(f"non-finite endpoints [{self.lo}, {self.hi}]")
        if self.lo > self.hi:
            raise DomainError(f"inverted endpoints [{self.lo}, {self.hi}]")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def point(x: float) -> "Interval":
        return Interval(x, x)

    @staticmethod
    def from_pair(p: tuple[float, float]) -> "Interval":
        return Interval(p[0], p[1])

    @staticmethod
    def parse(text: str) -> "Interval":
        """Parse a decimal literal, a pair "[a, b]", or compact notation.

        Decimal endpoints are rounded outward, so a re-parsed serialization
        always contains the original. Compact notation appends alternative
        final digits to a shared prefix: "1.2345_67^89" means
        [1.234567, 1.234589].
        """
        s = text.strip()
        if s.startswith("["):
            body = s[1:-1] if s.endswith("]") else s[1:]
            a, b = body.split(",")
            return Interval(_float_down(Decimal(a.strip())), _float_up(Decimal(b.strip())))
        m = _COMPACT_RE.match(s)
        if m:
            sign, ip, fp, lo_t, hi_t = m.groups()
            d_lo = Decimal(f"{sign}{ip}.{fp}{lo_t}")
            d_hi = Decimal(f"{sign}{ip}.{fp}{hi_t}")
            if d_lo > d_hi:
                d_lo, d_hi = d_hi, d_lo
            return Interval(_float_down(d_lo), _float_up(d_hi))
        d = Decimal(s)
        return Interval(_float_down(d), _float_up(d))

    # -- representation -----------------------------------------------------

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"

    def to_decimal_strings(self, digits: int = 17) -> tuple[str, str]:
        """Outward decimal serialization; re-parsing contains self."""
        q = Decimal(1).scaleb(-digits)
        lo = Decimal(self.lo).quantize(q, rounding=ROUND_FLOOR)
        hi = Decimal(self.hi).quantize(q, rounding=ROUND_CEILING)
        return format(lo, "f"), format(hi, "f")

    def pair(self) -> tuple[float, float]:
        return self.lo, self.hi

    # -- set predicates ------------------------------------------------------

    @property
    def width(self) -> float:
        """Diameter, rounded up."""
        return rmath.sub_up(self.hi, self.lo)

    def midpoint(self) -> float:
        m = 0.5 * (self.lo + self.hi)
        if not math.isfinite(m):
            m = self.lo + 0.5 * (self.hi - self.lo)
        return min(max(m, self.lo), self.hi)

    def mag(self) -> float:
        return max(abs(self.lo), abs(self.hi))

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def subset_interior(self, other: "Interval") -> bool:
        """Strict containment in the interior of ``other``."""
        return other.lo < self.lo and self.hi < other.hi

    def intersect(self, other: "Interval") -> "Interval | None":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return Interval(lo, hi)

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def inflate(self, r: float) -> "Interval":
        return Interval(rmath.sub_down(self.lo, r), rmath.add_up(self.hi, r))

    def is_point(self) -> bool:
        return self.lo == self.hi

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "Interval":
        if isinstance(x, Interval):
            return x
        return Interval(x, x)

    def __add__(self, other):
        o = self._coerce(other)
        return Interval.from_pair(rmath.iadd(self.pair(), o.pair()))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return Interval.from_pair(rmath.isub(self.pair(), o.pair()))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other):
        o = self._coerce(other)
        return Interval.from_pair(rmath.imul(self.pair(), o.pair()))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return Interval.from_pair(rmath.idiv(self.pair(), o.pair()))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def sqrt(self) -> "Interval":
        return Interval.from_pair(rmath.isqrt(self.pair()))

    def pow_int(self, n: int) -> "Interval":
        return Interval.from_pair(rmath.ipow(self.pair(), n))

    def sin(self) -> "Interval":
        return Interval.from_pair(rmath.isin(self.pair()))

    def cos(self) -> "Interval":
        return Interval.from_pair(rmath.icos(self.pair()))

    def abs(self) -> "Interval":
        return Interval.from_pair(rmath.iabs(self.pair()))


# module-level aliases matching the operation vocabulary used by callers
def hull(a: Interval, b: Interval) -> Interval:
    return a.hull(b)


def intersect(a: Interval, b: Interval) -> Interval | None:
    return a.intersect(b)


def subset_interior(a: Interval, b: Interval) -> bool:
    return a.subset_interior(b)


PI = Interval.from_pair(rmath.PI)
TWO_PI = Interval.from_pair(rmath.TWO_PI)
HALF_PI = Interval.from_pair(rmath.HALF_PI)
ZERO = Interval(0.0, 0.0)
ONE = Interval(1.0, 1.0)
