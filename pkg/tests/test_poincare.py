import math
import random

import pytest

import oracles
from spinorbit.integrator import Settings
from spinorbit.interval import Interval, TWO_PI
from spinorbit.linalg import IntervalMatrix, IntervalVector
from spinorbit.model import ModelParams
from spinorbit.poincare import ReturnMap, SectionImage

P = ModelParams()
S = Settings()

P1_PHI = 1.098956671156722
P2_PHI = 1.294511656257225
P3_PHI = 1.7120425161121605


def tiny_box(theta, phi, r=0.0):
    return IntervalVector.box([(theta - r, theta + r), (phi - r, phi + r)])


def test_return_time_quadrature_oracle():
    # the f-reparametrized period integrates to exactly 2*pi
    t = oracles.return_time_quadrature(e=0.1)
    assert abs(t - 2 * math.pi) < 1e-12


def test_return_time_contains_two_pi():
    rm = ReturnMap(P, S)
    rng = random.Random(123)
    for _ in range(5):
        theta = rng.uniform(0.3, 2.8)
        phi = rng.uniform(0.3, 2.2)
        cr = rm.poincare_map(tiny_box(theta, phi), 1)
        assert cr.time.lo <= TWO_PI.lo and TWO_PI.hi <= cr.time.hi
        assert cr.time.width < 1e-8


def test_fixed_point_returns_into_box():
    rm = ReturnMap(P, S)
    box = IntervalVector.box(
        [
            (math.pi / 2 - 1e-10, math.pi / 2 + 1e-10),
            (P1_PHI - 1e-10, P1_PHI + 1e-10),
        ]
    )
    cr = rm.poincare_map(box, 1)
    # theta comes back wound by 2*pi
    shift = round((cr.state[0].midpoint() - math.pi / 2) / math.pi)
    assert shift == 2
    th = cr.state[0] - Interval.from_pair((math.pi, math.pi)) * float(shift)
    assert th.intersect(Interval(math.pi / 2 - 2e-9, math.pi / 2 + 2e-9)) is not None
    assert cr.state[1].intersect(box[1].inflate(1e-9)) is not None


def test_circular_resonant_orbit():
    # e=0 with theta0 - f0 = 0: the torque vanishes identically, phi stays 1
    p0 = ModelParams(e=0.0)
    rm = ReturnMap(p0, S)
    cr = rm.poincare_map(tiny_box(0.0, 1.0), 1)
    assert cr.state[1].contains(1.0)
    assert cr.state[1].width < 1e-10
    assert cr.state[0].contains(2 * math.pi)


def test_dp_contains_finite_difference():
    rm = ReturnMap(P, S)
    rng = random.Random(5)
    for _ in range(3):
        theta = rng.uniform(1.0, 2.0)
        phi = rng.uniform(0.8, 1.8)
        d = rm.d_poincare(tiny_box(theta, phi, 1e-9), 1)
        fd = oracles.poincare_jacobian_fd(theta, phi, 1)
        for i in range(2):
            for j in range(2):
                # fd error ~1e-6 absolute on O(1..10) entries
                tol = 1e-5 * max(1.0, abs(fd[i, j]))
                assert d[i, j].lo - tol <= fd[i, j] <= d[i, j].hi + tol


def test_det_dp_near_one_at_fixed_points():
    rm = ReturnMap(P, S)
    for phi in (P1_PHI, P2_PHI, P3_PHI):
        d = rm.d_poincare(tiny_box(math.pi / 2, phi, 1e-12), 1)
        det = d.det2()
        assert det.lo - 1e-6 < 1.0 < det.hi + 1e-6
        assert det.contains(1.0) or abs(det.midpoint() - 1.0) < 1e-6


def test_dp_chain_rule_containment():
    rm = ReturnMap(P, S)
    box = tiny_box(1.35, 1.0, 1e-11)
    one_shot = rm.d_poincare(box, 2)
    d1 = rm.poincare_map(box, 1, want_derivative=True)
    img_box = d1.state
    d2 = rm.d_poincare(img_box, 1)
    from spinorbit.linalg import matmul

    prod = matmul(d2, d1.derivative)
    for i in range(2):
        for j in range(2):
            assert prod[i, j].contains(one_shot[i, j]), (i, j)


def test_containment_under_subdivision():
    rm = ReturnMap(P, S)
    box = IntervalVector.box([(1.30, 1.31), (1.00, 1.01)])
    whole = rm.poincare_map(box, 1).state
    hull = None
    for sx in (0, 1):
        for sy in (0, 1):
            sub = IntervalVector.box(
                [
                    (1.30 + 0.005 * sx, 1.305 + 0.005 * sx),
                    (1.00 + 0.005 * sy, 1.005 + 0.005 * sy),
                ]
            )
            img = rm.poincare_map(sub, 1).state
            hull = img if hull is None else hull.hull(img)
    for i in range(2):
        assert whole[i].inflate(1e-12).contains(hull[i]), i


def test_affine_image_tighter_than_hull():
    # the affine center carries only the quadratic enclosure defect, which
    # shrinks ~4x when the source parallelogram is halved
    rm = ReturnMap(P, S)
    center = IntervalVector.from_floats([1.3, 1.0])
    img1 = rm.image_affine(center, IntervalMatrix.from_floats([[1e-3, 0], [0, 1e-3]]), 1)
    img2 = rm.image_affine(center, IntervalMatrix.from_floats([[25e-5, 0], [0, 25e-5]]), 1)
    assert isinstance(img1, SectionImage)
    assert img1.center[0].width < img1.hull()[0].width / 3
    assert img2.center[0].width < img1.center[0].width / 8
    assert img1.hull()[0].width > 1e-3  # matrix term dominates


def test_symmetry_check_consistent():
    rm = ReturnMap(P, S)
    rep = rm.symmetry_check(tiny_box(1.2, 0.9, 1e-10), 1)
    assert rep["consistent"]


def test_second_return_matches_reference():
    rm = ReturnMap(P, S)
    theta, phi = 1.45, 1.1
    cr = rm.poincare_map(tiny_box(theta, phi), 2)
    _, t_ref, p_ref = oracles.poincare(theta, phi, 2)
    assert cr.state[0].lo - 1e-9 <= t_ref <= cr.state[0].hi + 1e-9
    assert cr.state[1].lo - 1e-9 <= p_ref <= cr.state[1].hi + 1e-9
    assert cr.time.contains(4 * math.pi)
