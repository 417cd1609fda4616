"""Non-rigorous exploration data: section scatter and invariant manifolds.

Nothing here carries proof weight; these produce CSV data for plotting the
phase portrait (chaotic sea, islands) and manifold fragments that motivate
the h-set constructions. Integration runs in the true anomaly f as the
independent variable, so section returns land exactly at multiples of
2*pi without event detection:

    dtheta/df = phi / g(f),  dphi/df = -K2 u^3 sin 2(theta - f) / g(f),
    g = K3 u^2,              u = 1 + e cos f.
"""

from __future__ import annotations

import math

import numpy as np

DEFAULT_STEPS_PER_LAP = 256


def _rhs(theta, phi, f, e, k2, k3):
    u = 1.0 + e * np.cos(f)
    g = k3 * u * u
    dth = phi / g
    dph = -k2 * u**3 * np.sin(2.0 * (theta - f)) / g
    return dth, dph


def section_orbits(
    seeds,
    iters: int,
    e: float = 0.1,
    w2: float = 0.79,
    steps_per_lap: int = DEFAULT_STEPS_PER_LAP,
):
    """Iterate the return map for each seed; yields rows (theta, phi, orbit).

    theta is reported mod pi. Vectorized fixed-step RK4 in f across all
    seeds simultaneously.
    """
    seeds = list(seeds)
    theta = np.array([s[0] for s in seeds], dtype=float)
    phi = np.array([s[1] for s in seeds], dtype=float)
    k2 = w2 / (2.0 * (1.0 - e * e) ** 3)
    k3 = (1.0 - e * e) ** -1.5
    h = 2.0 * math.pi / steps_per_lap
    rows = [(float(t) % math.pi, float(p), i) for i, (t, p) in enumerate(zip(theta, phi))]
    f = 0.0
    for _ in range(iters):
        for _ in range(steps_per_lap):
            k1t, k1p = _rhs(theta, phi, f, e, k2, k3)
            k2t, k2p = _rhs(theta + 0.5 * h * k1t, phi + 0.5 * h * k1p, f + 0.5 * h, e, k2, k3)
            k3t, k3p = _rhs(theta + 0.5 * h * k2t, phi + 0.5 * h * k2p, f + 0.5 * h, e, k2, k3)
            k4t, k4p = _rhs(theta + h * k3t, phi + h * k3p, f + h, e, k2, k3)
            theta = theta + (h / 6.0) * (k1t + 2 * k2t + 2 * k3t + k4t)
            phi = phi + (h / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p)
            f += h
        rows.extend(
            (float(t) % math.pi, float(p), i) for i, (t, p) in enumerate(zip(theta, phi))
        )
    return rows


def default_seeds(n: int = 12):
    """Seeds spread over the chaotic sea and islands at theta = pi/2."""
    phis = np.linspace(0.25, 2.3, n)
    return [(math.pi / 2, float(p)) for p in phis]


def _return_map_float(theta, phi, e, w2, steps_per_lap=DEFAULT_STEPS_PER_LAP, k=1):
    th = np.array([theta])
    ph = np.array([phi])
    k2 = w2 / (2.0 * (1.0 - e * e) ** 3)
    k3 = (1.0 - e * e) ** -1.5
    h = 2.0 * math.pi / steps_per_lap
    f = 0.0
    for _ in range(k * steps_per_lap):
        k1t, k1p = _rhs(th, ph, f, e, k2, k3)
        k2t, k2p = _rhs(th + 0.5 * h * k1t, ph + 0.5 * h * k1p, f + 0.5 * h, e, k2, k3)
        k3t, k3p = _rhs(th + 0.5 * h * k2t, ph + 0.5 * h * k2p, f + 0.5 * h, e, k2, k3)
        k4t, k4p = _rhs(th + h * k3t, ph + h * k3p, f + h, e, k2, k3)
        th = th + (h / 6.0) * (k1t + 2 * k2t + 2 * k3t + k4t)
        ph = ph + (h / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p)
        f += h
    return float(th[0]), float(ph[0])


def manifold_polylines(
    point_id: str,
    length: int,
    e: float = 0.1,
    w2: float = 0.79,
    seeds_per_branch: int = 400,
    offset: float = 1e-6,
):
    """Unstable/stable manifold fragments of P1, P2 or P3 (non-rigorous).

    Seeds a small segment along the eigendirection and iterates the float
    return map; the stable branch uses the reversing symmetry
    P^{-1} = R o P o R instead of backward integration. Yields rows
    (branch, step, theta mod pi, phi).
    """
    from .tables import FRAMES, STATIONARY

    name = point_id.upper()
    if name not in STATIONARY:
        raise ValueError(f"unknown point {point_id!r} (expected P1, P2 or P3)")
    theta0 = math.pi / 2
    phi0 = STATIONARY[name].midpoint()
    frame = FRAMES[{"P1": "M1", "P2": "M2", "P3": "M3"}[name]]
    u = (frame[0, 0].midpoint(), frame[1, 0].midpoint())
    s = (frame[0, 1].midpoint(), frame[1, 1].midpoint())

    rows = []
    ts = np.linspace(-offset, offset, seeds_per_branch)
    for branch, vec in (("unstable", u), ("stable", s)):
        pts = [(theta0 + t * vec[0], phi0 + t * vec[1]) for t in ts]
        for step in range(length + 1):
            for th, ph in pts:
                rows.append((branch, step, th % math.pi, ph))
            nxt = []
            for th, ph in pts:
                if branch == "unstable":
                    nxt.append(_return_map_float(th, ph, e, w2))
                else:
                    mt, mp = math.pi - th, ph
                    it, ip = _return_map_float(mt, mp, e, w2)
                    nxt.append((math.pi - it, ip))
            pts = nxt
    return rows
