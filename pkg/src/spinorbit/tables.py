"""Reference verification targets and coordinate frames.

The three hyperbolic stationary points of the return map sit on the
theta = pi/2 axis; STATIONARY holds the reference localization intervals
of their phi coordinates, which the fixed-point proofs must land inside.
FRAMES holds the corresponding unstable/stable eigendirection matrices
(columns: unstable then stable) used as h-set coordinate frames.

Compact notation "1.2345_67^89" abbreviates [1.234567, 1.234589]; parsing
rounds outward, so every stored object encloses the printed decimal values.
"""

from __future__ import annotations

from .interval import Interval
from .linalg import IntervalMatrix, IntervalVector

STATIONARY: dict[str, Interval] = {
    "P1": Interval.parse("1.0989566711567_13^31"),
    "P2": Interval.parse("1.294511656257_196^254"),
    "P3": Interval.parse("1.712042516112_098^223"),
}

FRAMES: dict[str, IntervalMatrix] = {
    "M1": IntervalMatrix(
        [
            [
                Interval.parse("0.70695646939_59338^77127"),
                Interval.parse("0.70695646939_59345^77133"),
            ],
            [
                Interval.parse("0.7072570610_281695^335063"),
                Interval.parse("-0.7072570610_335054^281689"),
            ],
        ]
    ),
    "M2": IntervalMatrix(
        [
            [
                Interval.parse("0.7344289378_330728^407212"),
                Interval.parse("0.7344289378_330732^407215"),
            ],
            [
                Interval.parse("0.6786855938_153962^378076"),
                Interval.parse("-0.6786855938_378071^153957"),
            ],
        ]
    ),
    "M3": IntervalMatrix(
        [
            [
                Interval.parse("0.8837175133_17777^293314"),
                Interval.parse("0.8837175133_177765^293309"),
            ],
            [
                Interval.parse("0.4680206797_026127^366671"),
                Interval.parse("-0.4680206797_366677^026135"),
            ],
        ]
    ),
}


def symmetrized_frame(name: str) -> IntervalMatrix:
    """Frame with the stable column the exact mirror of the unstable one.

    At a stationary point on the symmetry axis the stable eigendirection is
    the reflection (negated first component) of the unstable one. Building
    the frame as [u | Ru] makes R(N)^T = N hold bit-exactly for square base
    boxes, which the symmetry-closure step of the chain proofs requires.
    The printed frames agree with this construction to ~1e-12.
    """
    m = FRAMES[name]
    u0, u1 = m[0, 0], m[1, 0]
    return IntervalMatrix([[u0, u0], [u1, Interval(-u1.hi, -u1.lo)]])


def stationary_seed(name: str, radius: float = 1e-9) -> IntervalVector:
    """Seed box around (pi/2, reference midpoint) for the Newton proof."""
    import math

    phi_mid = STATIONARY[name].midpoint()
    th = math.pi / 2
    return IntervalVector.box(
        [(th - radius, th + radius), (phi_mid - radius, phi_mid + radius)]
    )
