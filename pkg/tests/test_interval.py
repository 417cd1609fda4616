import math
import random
from decimal import Decimal
from fractions import Fraction

import pytest

from spinorbit.errors import DomainError
from spinorbit.interval import Interval, PI, hull, intersect, subset_interior


def test_add_exact_integer_endpoints():
    assert (Interval(1, 2) + Interval(3, 4)) == Interval(4, 6)


def test_mul_endpoint_hull():
    assert (Interval(-1, 2) * Interval(3, 4)) == Interval(-4, 8)


def test_div_one_third():
    r = Interval(1, 1) / Interval(3, 3)
    assert r.hi > r.lo
    assert Fraction(r.lo) < Fraction(1, 3) < Fraction(r.hi)


def test_div_by_zero_interval():
    with pytest.raises(DomainError):
        Interval(1, 1) / Interval(-1, 1)


def test_pow_even_through_zero():
    assert Interval(-2, 1).pow_int(2) == Interval(0, 4)


def test_sqrt_exact():
    assert Interval(4, 9).sqrt() == Interval(2, 3)


def test_sqrt_negative_rejected():
    with pytest.raises(DomainError):
        Interval(-1, 1).sqrt()


def test_power_then_sqrt_oracle():
    # (1 - e^2)^(3/2) at e = 0.1: 0.99^1.5 = 0.98503756273555375518...
    e = Interval.parse("0.1")
    v = (Interval(1, 1) - e.pow_int(2)).pow_int(3).sqrt()
    truth = Decimal("0.98503756273555375518713502279119")
    assert Decimal(v.lo) < truth < Decimal(v.hi)
    assert v.width < 1e-15


def test_hull_and_intersect():
    assert hull(Interval(0, 1), Interval(2, 3)) == Interval(0, 3)
    assert intersect(Interval(0, 1), Interval(2, 3)) is None
    assert intersect(Interval(0, 2), Interval(1, 3)) == Interval(1, 2)


def test_subset_interior_boundary_contact_fails():
    assert subset_interior(Interval(1, 2), Interval(0, 3))
    assert not subset_interior(Interval(0, 2), Interval(0, 3))


def test_midpoint_diameter():
    a = Interval(1, 3)
    assert a.midpoint() == 2.0
    assert a.width >= 2.0


def test_nonfinite_rejected():
    with pytest.raises(DomainError):
        Interval(0.0, math.inf)
    with pytest.raises(DomainError):
        Interval(math.nan, 0.0)
    with pytest.raises(DomainError):
        Interval(2.0, 1.0)


def test_parse_decimal_outward():
    a = Interval.parse("0.1")
    assert Decimal(a.lo) < Decimal("0.1") < Decimal(a.hi)
    assert a.width <= 2 * math.ulp(0.1)
    b = Interval.parse("0.5")
    assert b.lo == 0.5 == b.hi  # representable stays a point


def test_parse_pair():
    a = Interval.parse("[-0.8, 0.8]")
    assert Decimal(a.lo) <= Decimal("-0.8") and Decimal(a.hi) >= Decimal("0.8")


def test_parse_compact_notation():
    a = Interval.parse("1.0989566711567_13^31")
    assert a.lo <= 1.098956671156713
    assert a.hi >= 1.098956671156731
    assert a.width < 3e-14
    b = Interval.parse("-0.7072570610_335054^281689")
    assert b.lo <= -0.7072570610335054
    assert b.hi >= -0.7072570610281689


def test_table_interval_contains_own_midpoint():
    t = Interval.parse("1.0989566711567_13^31")
    assert t.midpoint() in t


def test_serialization_roundtrip_contains():
    rng = random.Random(11)
    for _ in range(200):
        a = math.ldexp(rng.uniform(-1, 1), rng.randint(-20, 20))
        b = a + abs(math.ldexp(rng.uniform(0, 1), rng.randint(-30, 5)))
        x = Interval(a, b)
        for digits in (5, 12, 17, 20):
            lo_s, hi_s = x.to_decimal_strings(digits)
            y = Interval(
                float(Decimal(lo_s)) if Decimal(float(Decimal(lo_s))) <= Decimal(lo_s) else x.lo,
                x.hi,
            )
            z = Interval.parse(f"[{lo_s}, {hi_s}]")
            assert z.contains(x), (digits, x, z)


def test_containment_monotonicity_random():
    rng = random.Random(5)
    for _ in range(2000):
        xa = rng.uniform(-10, 10)
        xb = xa + rng.uniform(0, 5)
        ya = rng.uniform(-10, 10)
        yb = ya + rng.uniform(0, 5)
        X = Interval(xa, xb)
        Y = Interval(ya, yb)
        x = rng.uniform(xa, xb)
        y = rng.uniform(ya, yb)
        assert x + y in X + Y
        assert x - y in X - Y
        assert x * y in X * Y
        if not Y.contains(0.0):
            assert x / y in X / Y
        assert math.sin(x) in X.sin()
        assert math.cos(x) in X.cos()


def test_pi_enclosure():
    assert PI.lo <= math.pi <= PI.hi
    assert PI.width <= 2 * math.ulp(math.pi)
