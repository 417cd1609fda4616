"""Independent oracles used by the test suite.

Everything here deliberately avoids the package's own arithmetic:
- exact rational arithmetic via fractions.Fraction,
- high-precision elementary functions via Decimal Taylor series,
- a high-accuracy non-rigorous reference flow via scipy's DOP853.
"""

from __future__ import annotations

import math
from decimal import Decimal, getcontext
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp

getcontext().prec = 60

PI_D = Decimal("3.14159265358979323846264338327950288419716939937510582097494")


def dec_sin(x: Decimal, terms: int = 40) -> Decimal:
    """Taylor series sine, reduced mod 2*pi first."""
    two_pi = 2 * PI_D
    n = int((x / two_pi).to_integral_value())
    y = x - n * two_pi
    acc = Decimal(0)
    term = y
    k = 1
    for _ in range(terms):
        acc += term
        term *= -y * y / ((k + 1) * (k + 2))
        k += 2
    return acc


def dec_cos(x: Decimal, terms: int = 40) -> Decimal:
    two_pi = 2 * PI_D
    n = int((x / two_pi).to_integral_value())
    y = x - n * two_pi
    acc = Decimal(0)
    term = Decimal(1)
    k = 0
    for _ in range(terms):
        acc += term
        term *= -y * y / ((k + 1) * (k + 2))
        k += 2
    return acc


def dec_contains(lo: float, hi: float, value: Decimal) -> bool:
    return Decimal(lo) <= value <= Decimal(hi)


def frac_contains(lo: float, hi: float, value: Fraction) -> bool:
    return Fraction(lo) <= value <= Fraction(hi)


# ---------------------------------------------------------------------------
# reference (non-rigorous) flow of the rotation system
# ---------------------------------------------------------------------------

def field(t, s, e, w2):
    th, ph, f = s
    u = 1.0 + e * math.cos(f)
    k2 = w2 / (2.0 * (1.0 - e * e) ** 3)
    k3 = (1.0 - e * e) ** -1.5
    return [ph, -k2 * u**3 * math.sin(2.0 * (th - f)), k3 * u * u]


def flow(state, t, e=0.1, w2=0.79, rtol=1e-13):
    """Reference flow map at time t (DOP853, tolerance ~1e-13)."""
    if t == 0.0:
        return tuple(state)
    sol = solve_ivp(
        field,
        [0.0, t],
        list(state),
        args=(e, w2),
        method="DOP853",
        rtol=rtol,
        atol=1e-14,
        dense_output=False,
    )
    return tuple(sol.y[:, -1])


def poincare(theta, phi, k=1, e=0.1, w2=0.79, rtol=1e-13):
    """Reference k-th return to {f = 0 mod 2*pi}; returns (T, theta, phi)."""
    target = 2.0 * math.pi * k

    def event(t, s, *_):
        return s[2] - target

    event.terminal = True
    event.direction = 1
    sol = solve_ivp(
        field,
        [0.0, 40.0 * k],
        [theta, phi, 0.0],
        args=(e, w2),
        method="DOP853",
        rtol=rtol,
        atol=1e-14,
        events=event,
    )
    te = sol.t_events[0][0]
    ye = sol.y_events[0][0]
    return te, ye[0], ye[1]


def poincare_jacobian_fd(theta, phi, k=1, e=0.1, w2=0.79, h=1e-7):
    """Central finite-difference DP^k at a point."""
    out = np.zeros((2, 2))
    for j, (dt, dp) in enumerate([(h, 0.0), (0.0, h)]):
        _, ta, pa = poincare(theta + dt, phi + dp, k, e, w2)
        _, tb, pb = poincare(theta - dt, phi - dp, k, e, w2)
        out[0, j] = (ta - tb) / (2 * h)
        out[1, j] = (pa - pb) / (2 * h)
    return out


def return_time_quadrature(e=0.1, n=200001) -> float:
    """Simpson quadrature of dt = (1-e^2)^{3/2} / (1+e cos f)^2 df over a lap."""
    f = np.linspace(0.0, 2.0 * math.pi, n)
    g = (1.0 - e * e) ** 1.5 / (1.0 + e * np.cos(f)) ** 2
    h = f[1] - f[0]
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return float(h / 3.0 * np.dot(w, g))
