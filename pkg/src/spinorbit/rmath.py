"""Directed-rounding scalar and endpoint-pair primitives.

Every rigorous claim in this package reduces to the soundness of the
functions here. The contract, uniformly: ``*_down`` returns a double <= the
exact real result, ``*_up`` returns a double >= it. Directed rounding is
realized by next-representable-float nudging after each native operation,
tightened to the exact result whenever an error-free transform (TwoSum for
addition, Dekker's product for multiplication) certifies the native result
as exact or one-sided. No floating-point rounding-mode state is touched, so
results are deterministic across platforms and threads.

Endpoint pairs ``(lo, hi)`` with lo <= hi stand for closed real intervals.
The pair-level ops (iadd, imul, isin, ...) return enclosures of the exact
range. They are the common semantics shared by the pure-Python kernel and
(re-implemented in C, same algorithms and constants) by the compiled kernel.
"""

from __future__ import annotations

import math
from decimal import Decimal, getcontext

_INF = math.inf
_SPLIT = 134217729.0  # 2**27 + 1, Dekker splitting constant
_GUARD_LO = 1e-140
_GUARD_HI = 1e140


class DomainError(ArithmeticError):
    """An operation was applied outside its mathematical domain."""


def down(x: float) -> float:
    return math.nextafter(x, -_INF)


def up(x: float) -> float:
    return math.nextafter(x, _INF)


# ---------------------------------------------------------------------------
# error-free transforms
# ---------------------------------------------------------------------------

def _two_sum(a: float, b: float) -> tuple[float, float]:
    # Knuth: s + e == a + b exactly for finite doubles without overflow.
    s = a + b
    bp = s - a
    e = (a - (s - bp)) + (b - bp)
    return s, e


def _two_prod(a: float, b: float) -> tuple[float, float]:
    # Dekker: p + e == a * b exactly, valid away from over/underflow.
    p = a * b
    ca = _SPLIT * a
    ahi = ca - (ca - a)
    alo = a - ahi
    cb = _SPLIT * b
    bhi = cb - (cb - b)
    blo = b - bhi
    e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, e


def add_down(a: float, b: float) -> float:
    s, e = _two_sum(a, b)
    return s if e >= 0.0 else down(s)


def add_up(a: float, b: float) -> float:
    s, e = _two_sum(a, b)
    return s if e <= 0.0 else up(s)


def sub_down(a: float, b: float) -> float:
    return add_down(a, -b)


def sub_up(a: float, b: float) -> float:
    return add_up(a, -b)


def _prod_guarded(a: float, b: float) -> bool:
    aa = abs(a)
    ab = abs(b)
    return (aa == 0.0 or _GUARD_LO < aa < _GUARD_HI) and (
        ab == 0.0 or _GUARD_LO < ab < _GUARD_HI
    )


def mul_down(a: float, b: float) -> float:
    if not _prod_guarded(a, b):
        return down(a * b)
    p, e = _two_prod(a, b)
    return p if e >= 0.0 else down(p)


def mul_up(a: float, b: float) -> float:
    if not _prod_guarded(a, b):
        return up(a * b)
    p, e = _two_prod(a, b)
    return p if e <= 0.0 else up(p)


def _div_err_sign(q: float, a: float, b: float) -> int:
    """Sign of (q - a/b), or 0 if exact; 2 when undecidable cheaply."""
    if not _prod_guarded(q, b):
        return 2
    t, e = _two_prod(q, b)  # q*b == t + e exactly
    if t == 0.0 and a == 0.0:
        d = e
    else:
        if a == 0.0 or t == 0.0 or (t > 0.0) != (a > 0.0):
            return 2
        r = t / a
        if not (0.5 <= r <= 2.0):
            return 2  # Sterbenz subtraction not guaranteed exact
        d1 = t - a  # exact by Sterbenz
        if d1 == 0.0:
            d = e
        elif abs(d1) > 2.0 * abs(e):
            d = d1
        else:
            return 2
    # q*b - a = d (sign-exact);  q - a/b = d/b
    if d == 0.0:
        return 0
    s = 1 if d > 0.0 else -1
    return s if b > 0.0 else -s


def div_down(a: float, b: float) -> float:
    q = a / b
    s = _div_err_sign(q, a, b)
    if s == 0 or s == -1:
        return q
    return down(q)


def div_up(a: float, b: float) -> float:
    q = a / b
    s = _div_err_sign(q, a, b)
    if s == 0 or s == 1:
        return q
    return up(q)


def sqrt_down(a: float) -> float:
    if a < 0.0:
        raise DomainError(f"sqrt of negative lower bound {a}")
    if a == 0.0:
        return 0.0
    r = math.sqrt(a)
    if not _prod_guarded(r, r):
        return down(r)
    t, e = _two_prod(r, r)
    if 0.5 <= t / a <= 2.0:
        d1 = t - a
        if d1 == 0.0:
            d = e
        elif abs(d1) > 2.0 * abs(e):
            d = d1
        else:
            return down(r)
        if d <= 0.0:
            return r  # r*r <= a, so r <= sqrt(a)
        return down(r)
    return down(r)


def sqrt_up(a: float) -> float:
    if a == 0.0:
        return 0.0
    r = math.sqrt(a)
    if not _prod_guarded(r, r):
        return up(r)
    t, e = _two_prod(r, r)
    if 0.5 <= t / a <= 2.0:
        d1 = t - a
        if d1 == 0.0:
            d = e
        elif abs(d1) > 2.0 * abs(e):
            d = d1
        else:
            return up(r)
        if d >= 0.0:
            return r
        return up(r)
    return up(r)


# ---------------------------------------------------------------------------
# rigorous constants (pi family) derived from a frozen 40-digit expansion
# ---------------------------------------------------------------------------

_PI_DIGITS = "3.141592653589793238462643383279502884197169399375"


def _enclose_decimal(d: Decimal) -> tuple[float, float]:
    """Smallest float pair [lo, hi] containing the exact decimal d."""
    f = float(d)
    df = Decimal(f)  # exact binary value of f
    if df == d:
        return f, f
    if df < d:
        return f, up(f)
    return down(f), f


getcontext().prec = 60
_PI_D = Decimal(_PI_DIGITS)

PI = _enclose_decimal(_PI_D)
TWO_PI = _enclose_decimal(2 * _PI_D)
HALF_PI = _enclose_decimal(_PI_D / 2)

# double-double reduction constants: pi/2 = _HP_MAIN + [residual]
_HP_MAIN = math.pi / 2  # exact halving
_HP_RES = _enclose_decimal(_PI_D / 2 - Decimal(_HP_MAIN))

# series coefficients 1/k! enclosures, k = 0..22
_FACT_INV = []
_f = Decimal(1)
for _k in range(23):
    if _k > 0:
        _f *= _k
    _FACT_INV.append(_enclose_decimal(Decimal(1) / _f))

# alternating-series truncation bounds on |y| <= pi/4 + 2 ulp
_SIN_TAIL = 1e-21  # >= (pi/4)^21 / 21!
_COS_TAIL = 1e-22  # >= (pi/4)^22 / 22!


# ---------------------------------------------------------------------------
# endpoint-pair interval ops
# ---------------------------------------------------------------------------

def iadd(a, b):
    return add_down(a[0], b[0]), add_up(a[1], b[1])


def isub(a, b):
    return add_down(a[0], -b[1]), add_up(a[1], -b[0])


def ineg(a):
    return -a[1], -a[0]


def imul(a, b):
    alo, ahi = a
    blo, bhi = b
    lo = min(
        mul_down(alo, blo),
        mul_down(alo, bhi),
        mul_down(ahi, blo),
        mul_down(ahi, bhi),
    )
    hi = max(
        mul_up(alo, blo),
        mul_up(alo, bhi),
        mul_up(ahi, blo),
        mul_up(ahi, bhi),
    )
    return lo, hi


def idiv(a, b):
    blo, bhi = b
    if blo <= 0.0 <= bhi:
        raise DomainError(f"division by interval [{blo}, {bhi}] containing 0")
    alo, ahi = a
    if blo > 0.0:
        if alo >= 0.0:
            return div_down(alo, bhi), div_up(ahi, blo)
        if ahi <= 0.0:
            return div_down(alo, blo), div_up(ahi, bhi)
        return div_down(alo, blo), div_up(ahi, blo)
    # b strictly negative
    if alo >= 0.0:
        return div_down(ahi, bhi), div_up(alo, blo)
    if ahi <= 0.0:
        return div_down(ahi, blo), div_up(alo, bhi)
    return div_down(ahi, bhi), div_up(alo, bhi)


def isqrt(a):
    if a[0] < 0.0:
        raise DomainError(f"sqrt of interval [{a[0]}, {a[1]}] with negative part")
    return sqrt_down(a[0]), sqrt_up(a[1])


def _pow_scalar(x: float, n: int, want_up: bool) -> float:
    """Directed x**n for n >= 1 via repeated directed multiplication."""
    if x >= 0.0:
        acc = x
        if want_up:
            for _ in range(n - 1):
                acc = mul_up(acc, x)
        else:
            for _ in range(n - 1):
                acc = mul_down(acc, x)
        return acc
    m = -x
    # |x|^n rounded away from the final signed direction
    odd = n % 2 == 1
    inner_up = want_up != odd  # negation flips direction for odd powers
    acc = m
    if inner_up:
        for _ in range(n - 1):
            acc = mul_up(acc, m)
    else:
        for _ in range(n - 1):
            acc = mul_down(acc, m)
    return -acc if odd else acc


def ipow(a, n: int):
    """Range enclosure of {x**n : x in a} for integer n >= 0."""
    if n < 0:
        raise DomainError("negative exponents go through idiv")
    if n == 0:
        return 1.0, 1.0
    alo, ahi = a
    if n % 2 == 1 or alo >= 0.0:
        return _pow_scalar(alo, n, False), _pow_scalar(ahi, n, True)
    if ahi <= 0.0:
        return _pow_scalar(ahi, n, False), _pow_scalar(alo, n, True)
    # even power across zero
    return 0.0, max(_pow_scalar(alo, n, True), _pow_scalar(ahi, n, True))


def iabs(a):
    alo, ahi = a
    if alo >= 0.0:
        return alo, ahi
    if ahi <= 0.0:
        return -ahi, -alo
    return 0.0, max(-alo, ahi)


def imag(a) -> float:
    """Magnitude: max |x| over the pair (upper bound, exact)."""
    return max(abs(a[0]), abs(a[1]))


# ---------------------------------------------------------------------------
# sine and cosine
# ---------------------------------------------------------------------------

def _sin_core(y):
    """sin on a pair with |y| <= pi/4 + slop, via alternating Taylor series."""
    if y[0] == 0.0 and y[1] == 0.0:
        return 0.0, 0.0
    z = imul(y, y)
    # sum_{k=0..9} (-1)^k z^k / (2k+1)!
    acc = (0.0, 0.0)
    for k in range(9, -1, -1):
        c = _FACT_INV[2 * k + 1]
        c = c if k % 2 == 0 else ineg(c)
        acc = iadd(c, imul(z, acc))
    s = imul(y, acc)
    return add_down(s[0], -_SIN_TAIL), add_up(s[1], _SIN_TAIL)


def _cos_core(y):
    if y[0] == 0.0 and y[1] == 0.0:
        return 1.0, 1.0
    z = imul(y, y)
    # sum_{k=0..10} (-1)^k z^k / (2k)!
    acc = (0.0, 0.0)
    for k in range(10, -1, -1):
        c = _FACT_INV[2 * k]
        c = c if k % 2 == 0 else ineg(c)
        acc = iadd(c, imul(z, acc))
    return add_down(acc[0], -_COS_TAIL), add_up(acc[1], _COS_TAIL)


def _reduce_quadrant(a: float) -> tuple[int, tuple[float, float]]:
    """a = n*(pi/2) + y with |y| <= pi/4 + slop; returns (n mod 4, y pair)."""
    n = math.floor(a / _HP_MAIN + 0.5)
    nf = float(n)
    p = mul_down(nf, _HP_MAIN), mul_up(nf, _HP_MAIN)
    y = isub((a, a), p)
    y = isub(y, imul((nf, nf), _HP_RES))
    return n & 3, y


def _clamp_unit(pair):
    lo = max(pair[0], -1.0)
    hi = min(pair[1], 1.0)
    return lo, hi


def sin_point(a: float) -> tuple[float, float]:
    """Tight enclosure of sin(a) for a finite double."""
    if abs(a) > 1e9:
        return -1.0, 1.0
    q, y = _reduce_quadrant(a)
    if y[0] < -0.7855 or y[1] > 0.7855:
        return -1.0, 1.0  # reduction out of range, give the sound fallback
    if q == 0:
        r = _sin_core(y)
    elif q == 1:
        r = _cos_core(y)
    elif q == 2:
        r = ineg(_sin_core(y))
    else:
        r = ineg(_cos_core(y))
    return _clamp_unit(r)


def cos_point(a: float) -> tuple[float, float]:
    if abs(a) > 1e9:
        return -1.0, 1.0
    q, y = _reduce_quadrant(a)
    if y[0] < -0.7855 or y[1] > 0.7855:
        return -1.0, 1.0
    if q == 0:
        r = _cos_core(y)
    elif q == 1:
        r = ineg(_sin_core(y))
    elif q == 2:
        r = ineg(_cos_core(y))
    else:
        r = _sin_core(y)
    return _clamp_unit(r)


def _crit_extremes(a: float, b: float, offset: float) -> tuple[bool, bool]:
    """Whether [a,b] contains a point offset + m*pi with m even / m odd.

    Conservative: may report True for points just outside, never misses one.
    """
    mlo = math.ceil((a - offset) / math.pi - 1e-9)
    mhi = math.floor((b - offset) / math.pi + 1e-9)
    if mhi - mlo >= 3:
        return True, True
    has_even = has_odd = False
    for m in range(mlo, mhi + 1):
        if m % 2 == 0:
            has_even = True
        else:
            has_odd = True
    return has_even, has_odd


def isin(a):
    alo, ahi = a
    if not (math.isfinite(alo) and math.isfinite(ahi)):
        raise DomainError("sin of non-finite interval")
    if ahi - alo >= TWO_PI[0]:
        return -1.0, 1.0
    sa = sin_point(alo)
    sb = sin_point(ahi)
    lo = min(sa[0], sb[0])
    hi = max(sa[1], sb[1])
    # interior extremes at pi/2 + m*pi: +1 for m even, -1 for m odd
    has_even, has_odd = _crit_extremes(alo, ahi, _HP_MAIN)
    if has_even:
        hi = 1.0
    if has_odd:
        lo = -1.0
    return _clamp_unit((lo, hi))


def icos(a):
    alo, ahi = a
    if not (math.isfinite(alo) and math.isfinite(ahi)):
        raise DomainError("cos of non-finite interval")
    if ahi - alo >= TWO_PI[0]:
        return -1.0, 1.0
    ca = cos_point(alo)
    cb = cos_point(ahi)
    lo = min(ca[0], cb[0])
    hi = max(ca[1], cb[1])
    # interior extremes at m*pi: +1 for m even, -1 for m odd
    has_even, has_odd = _crit_extremes(alo, ahi, 0.0)
    if has_even:
        hi = 1.0
    if has_odd:
        lo = -1.0
    return _clamp_unit((lo, hi))
