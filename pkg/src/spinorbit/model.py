"""The spin-orbit rotation model of an ellipsoidal satellite.

State is (theta, phi, f): rotation angle of the long axis against the orbit
major axis (mod pi), its time derivative, and the true anomaly along the
Kepler ellipse (mod 2*pi). With u = 1 + e*cos(f) the system reads

    theta' = phi
    phi'   = -(w2 / (2 r^3)) * sin(2*(theta - f)),   r = (1 - e^2) / u
    phi'   =  -K2 * u^3 * sin(2*(theta - f))         (equivalent product form)
    f'     =   K3 * u^2

where K2 = w2 / (2 (1-e^2)^3) and K3 = (1-e^2)^(-3/2). The product form has
no divisions, which keeps Taylor-coefficient recurrences tight; both forms
are tested against each other.

f' > 0 always (e < 1), so the section {f = 0 mod 2*pi} is crossed
transversally and return maps are well defined. The flow has the reversing
symmetry (theta, phi, f, t) -> (pi - theta, phi, -f, -t); restricted to the
section it is R(theta, phi) = (pi - theta, phi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError
from .interval import Interval, PI
from .linalg import IntervalMatrix, IntervalVector, matmul

DEFAULT_E = "0.1"
DEFAULT_OMEGA2 = "0.79"


def _as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    if isinstance(x, str):
        return Interval.parse(x)
    return Interval.point(float(x))


@dataclass(frozen=True)
class ModelParams:
    """Eccentricity e and oblateness parameter w2 (both dimensionless)."""

    e: Interval = field(default_factory=lambda: Interval.parse(DEFAULT_E))
    omega2: Interval = field(default_factory=lambda: Interval.parse(DEFAULT_OMEGA2))

    def __post_init__(self):
        object.__setattr__(self, "e", _as_interval(self.e))
        object.__setattr__(self, "omega2", _as_interval(self.omega2))
        if self.e.lo < 0.0 or self.e.hi >= 1.0:
            raise DomainError(f"eccentricity out of [0, 1): {self.e!r}")
        if self.omega2.lo < 0.0 or self.omega2.hi > 1.0:
            raise DomainError(f"omega^2 out of [0, 1]: {self.omega2!r}")

    @property
    def one_minus_e2(self) -> Interval:
        return Interval.point(1.0) - self.e.pow_int(2)

    @property
    def k2(self) -> Interval:
        """w2 / (2 (1-e^2)^3), the phi' coefficient in product form."""
        return self.omega2 / (self.one_minus_e2.pow_int(3) * 2.0)

    @property
    def k3(self) -> Interval:
        """(1-e^2)^(-3/2), the f' coefficient."""
        return Interval.point(1.0) / self.one_minus_e2.pow_int(3).sqrt()

    def kernel_pack(self, sign: float = 1.0) -> tuple[float, ...]:
        """Constant pack handed to the series kernels."""
        k2, k3 = self.k2, self.k3
        return (self.e.lo, self.e.hi, k2.lo, k2.hi, k3.lo, k3.hi, float(sign))

    def describe(self) -> dict:
        e = self.e.to_decimal_strings()
        w = self.omega2.to_decimal_strings()
        return {"e": list(e), "omega2": list(w)}


def radius(f: Interval, params: ModelParams) -> Interval:
    """Orbit radius (1-e^2)/(1+e*cos f); strictly positive for e < 1."""
    u = Interval.point(1.0) + params.e * f.cos()
    return params.one_minus_e2 / u


def vector_field(s: IntervalVector, params: ModelParams) -> IntervalVector:
    theta, phi, f = s
    u = Interval.point(1.0) + params.e * f.cos()
    s2 = ((theta - f) * 2.0).sin()
    return IntervalVector(
        [
            phi,
            -(params.k2 * u.pow_int(3) * s2),
            params.k3 * u.pow_int(2),
        ]
    )


def jacobian(s: IntervalVector, params: ModelParams) -> IntervalMatrix:
    """Exact symbolic Jacobian of the vector field."""
    theta, phi, f = s
    e, k2, k3 = params.e, params.k2, params.k3
    sf = f.sin()
    u = Interval.point(1.0) + e * f.cos()
    psi = (theta - f) * 2.0
    s2, c2 = psi.sin(), psi.cos()
    u2 = u.pow_int(2)
    u3 = u.pow_int(3)
    a21 = -(k2 * u3 * c2 * 2.0)
    a23 = -a21 + k2 * e * u2 * sf * s2 * 3.0
    a33 = -(k3 * e * u * sf * 2.0)
    z = Interval.point(0.0)
    one = Interval.point(1.0)
    return IntervalMatrix(
        [
            [z, one, z],
            [a21, z, a23],
            [z, z, a33],
        ]
    )


def variational_field(
    s: IntervalVector, v: IntervalMatrix, params: ModelParams
) -> tuple[IntervalVector, IntervalMatrix]:
    """Right-hand side of the flow + variational system: (field(s), J(s) V)."""
    return vector_field(s, params), matmul(jacobian(s, params), v)


def apply_R(p: IntervalVector) -> IntervalVector:
    """Reversing symmetry on the section: (theta, phi) -> (pi - theta, phi)."""
    return IntervalVector([PI - p[0], p[1]])


def apply_R_float(theta: float, phi: float) -> tuple[float, float]:
    return math.pi - theta, phi


# ---------------------------------------------------------------------------
# float path for oracles, scatter data and step-size heuristics
# ---------------------------------------------------------------------------

def field_float(state, e: float, w2: float):
    theta, phi, f = state
    one_m = 1.0 - e * e
    u = 1.0 + e * math.cos(f)
    k2 = w2 / (2.0 * one_m**3)
    k3 = one_m**-1.5
    return (
        phi,
        -k2 * u**3 * math.sin(2.0 * (theta - f)),
        k3 * u * u,
    )
