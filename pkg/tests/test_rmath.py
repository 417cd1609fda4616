"""Soundness of the directed-rounding primitives against exact arithmetic."""

import math
import random
from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinorbit import rmath
from oracles import PI_D, dec_cos, dec_sin, dec_contains, frac_contains

finite = st.floats(
    allow_nan=False, allow_infinity=False, min_value=-1e30, max_value=1e30
)


@given(finite, finite)
def test_add_brackets_exact(a, b):
    exact = Fraction(a) + Fraction(b)
    assert Fraction(rmath.add_down(a, b)) <= exact <= Fraction(rmath.add_up(a, b))


@given(finite, finite)
def test_add_tight_when_exact(a, b):
    exact = Fraction(a) + Fraction(b)
    if Fraction(a + b) == exact:
        assert rmath.add_down(a, b) == a + b == rmath.add_up(a, b)


@given(finite, finite)
def test_mul_brackets_exact(a, b):
    exact = Fraction(a) * Fraction(b)
    assert Fraction(rmath.mul_down(a, b)) <= exact <= Fraction(rmath.mul_up(a, b))


@given(finite, st.floats(allow_nan=False, allow_infinity=False, min_value=-1e30, max_value=1e30).filter(lambda x: abs(x) > 1e-30))
def test_div_brackets_exact(a, b):
    exact = Fraction(a) / Fraction(b)
    assert Fraction(rmath.div_down(a, b)) <= exact <= Fraction(rmath.div_up(a, b))


@given(st.floats(allow_nan=False, allow_infinity=False, min_value=0.0, max_value=1e30))
def test_sqrt_brackets_exact(a):
    lo, hi = rmath.sqrt_down(a), rmath.sqrt_up(a)
    assert Fraction(lo) * Fraction(lo) <= Fraction(a) <= Fraction(hi) * Fraction(hi)
    assert lo <= hi


def test_exact_cases_stay_exact():
    assert rmath.add_down(1.0, 3.0) == 4.0 == rmath.add_up(1.0, 3.0)
    assert rmath.mul_down(2.0, 4.0) == 8.0 == rmath.mul_up(2.0, 4.0)
    assert rmath.div_down(1.0, 4.0) == 0.25 == rmath.div_up(1.0, 4.0)
    assert rmath.sqrt_down(9.0) == 3.0 == rmath.sqrt_up(9.0)


def test_third_is_strictly_bracketed():
    lo, hi = rmath.div_down(1.0, 3.0), rmath.div_up(1.0, 3.0)
    assert lo < hi
    assert Fraction(lo) < Fraction(1, 3) < Fraction(hi)
    assert hi - lo <= 2 * math.ulp(1.0 / 3.0)


def test_pi_constants():
    assert dec_contains(*rmath.PI, PI_D)
    assert dec_contains(*rmath.TWO_PI, 2 * PI_D)
    assert dec_contains(*rmath.HALF_PI, PI_D / 2)
    assert rmath.PI[1] - rmath.PI[0] <= 2 * math.ulp(math.pi)


@pytest.mark.parametrize("x", [0.0, 0.1, 1.0, -2.5, 3.14159, 10.0, -77.7, 62.8, 1e-12])
def test_sin_cos_point_enclose_truth(x):
    s = rmath.sin_point(x)
    c = rmath.cos_point(x)
    assert dec_contains(*s, dec_sin(Decimal(x)))
    assert dec_contains(*c, dec_cos(Decimal(x)))
    slack = 4 * math.ulp(max(1.0, abs(x)))
    assert s[1] - s[0] < slack
    assert c[1] - c[0] < slack


def test_sin_point_example_value():
    # sin(0.1) = 0.0998334166468281523...
    lo, hi = rmath.sin_point(0.1)
    assert dec_contains(lo, hi, Decimal("0.09983341664682815230681419841062"))
    assert hi - lo < 1e-16


def test_interval_sin_monotone_branch():
    lo, hi = rmath.isin((0.0, rmath.HALF_PI[0]))
    assert lo == 0.0
    assert hi == 1.0 or (hi < 1.0 and dec_contains(lo, hi, dec_sin(Decimal(rmath.HALF_PI[0]))))
    # upper endpoint just below pi/2: sup must reach sin of it
    assert hi >= 0.999999999999999


def test_interval_sin_hits_critical_point():
    lo, hi = rmath.isin((1.0, 2.5))  # contains pi/2
    assert hi == 1.0
    assert lo < math.sin(1.0)


def test_interval_cos_contains_minimum():
    lo, hi = rmath.icos((0.0, rmath.PI[0]))
    assert hi == 1.0
    assert lo == -1.0  # conservative: pi enclosure touches the endpoint


def test_interval_sin_range_soundness_random():
    rng = random.Random(42)
    for _ in range(500):
        a = rng.uniform(-40.0, 40.0)
        w = rng.uniform(0.0, 7.0)
        lo, hi = rmath.isin((a, a + w))
        for t in [a + w * k / 16.0 for k in range(17)]:
            assert lo <= math.sin(t) <= hi
        clo, chi = rmath.icos((a, a + w))
        for t in [a + w * k / 16.0 for k in range(17)]:
            assert clo <= math.cos(t) <= chi


@settings(max_examples=300)
@given(finite, finite, finite, finite)
def test_pair_ops_containment(a, b, c, d):
    x = (min(a, b), max(a, b))
    y = (min(c, d), max(c, d))
    for pick in (0.0, 0.25, 0.5, 0.75, 1.0):
        px = Fraction(x[0]) + Fraction(pick) * (Fraction(x[1]) - Fraction(x[0]))
        py = Fraction(y[0]) + Fraction(pick) * (Fraction(y[1]) - Fraction(y[0]))
        s = rmath.iadd(x, y)
        assert frac_contains(s[0], s[1], px + py)
        m = rmath.imul(x, y)
        assert frac_contains(m[0], m[1], px * py)
        sb = rmath.isub(x, y)
        assert frac_contains(sb[0], sb[1], px - py)


def test_idiv_rejects_zero():
    with pytest.raises(rmath.DomainError):
        rmath.idiv((1.0, 1.0), (-1.0, 1.0))


def test_ipow_even_across_zero():
    assert rmath.ipow((-2.0, 1.0), 2) == (0.0, 4.0)
    assert rmath.ipow((-2.0, 1.0), 3)[0] == -8.0
    assert rmath.ipow((2.0, 3.0), 0) == (1.0, 1.0)


def test_ipow_random_containment():
    rng = random.Random(7)
    for _ in range(300):
        lo = rng.uniform(-3, 3)
        hi = lo + rng.uniform(0, 2)
        n = rng.randint(0, 6)
        rlo, rhi = rmath.ipow((lo, hi), n)
        for t in [lo + (hi - lo) * k / 8 for k in range(9)]:
            assert Fraction(rlo) <= Fraction(t) ** n <= Fraction(rhi)


def test_inclusion_isotonicity_random():
    rng = random.Random(3)
    for _ in range(200):
        a = sorted(rng.uniform(-5, 5) for _ in range(2))
        b = sorted(rng.uniform(-5, 5) for _ in range(2))
        wide_a = (a[0] - rng.uniform(0, 1), a[1] + rng.uniform(0, 1))
        wide_b = (b[0] - rng.uniform(0, 1), b[1] + rng.uniform(0, 1))
        for op in (rmath.iadd, rmath.isub, rmath.imul):
            t = op(tuple(a), tuple(b))
            w = op(wide_a, wide_b)
            assert w[0] <= t[0] and t[1] <= w[1]
