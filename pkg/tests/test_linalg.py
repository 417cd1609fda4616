import random

import numpy as np
import pytest

from spinorbit.errors import SingularMatrixError
from spinorbit.interval import Interval
from spinorbit.linalg import (
    IntervalMatrix,
    IntervalVector,
    inverse,
    inverse2x2,
    matmul,
    matvec,
    mgs_orthonormalize,
)


def test_identity_matvec():
    v = IntervalVector.box([(1.0, 2.0), (-1.0, 0.5), (3.0, 3.0)])
    w = matvec(IntervalMatrix.identity(3), v)
    assert w.contains(v)
    assert all(b.width <= a.width + 1e-14 for a, b in zip(w, v))


def test_inverse2x2_diagonal():
    a = IntervalMatrix.from_floats([[2.0, 0.0], [0.0, 4.0]])
    inv = inverse2x2(a)
    assert inv.contains([[0.5, 0.0], [0.0, 0.25]])


def test_inverse2x2_singular():
    a = IntervalMatrix([[Interval(-1, 1), Interval.point(0)],
                        [Interval.point(0), Interval.point(1)]])
    with pytest.raises(SingularMatrixError):
        inverse2x2(a)


def test_inverse_contains_true_inverse():
    rng = random.Random(17)
    for n in (2, 3):
        for _ in range(100):
            m = np.array([[rng.uniform(-2, 2) for _ in range(n)] for _ in range(n)])
            if abs(np.linalg.det(m)) < 0.1:
                continue
            a = IntervalMatrix.from_floats(m.tolist())
            try:
                inv = inverse(a)
            except SingularMatrixError:
                continue
            true_inv = np.linalg.inv(m)
            slack = 1e-10
            for i in range(n):
                for j in range(n):
                    assert inv[i, j].lo - slack <= true_inv[i, j] <= inv[i, j].hi + slack


def test_inverse_times_matrix_contains_identity():
    a = IntervalMatrix.from_floats([[1.0, 0.3, -0.2], [0.1, 2.0, 0.4], [0.0, -0.5, 1.5]])
    prod = matmul(inverse(a), a)
    assert prod.contains([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_matvec_containment_random():
    rng = random.Random(23)
    for _ in range(200):
        m = [[rng.uniform(-2, 2) for _ in range(3)] for _ in range(3)]
        widths = [[rng.uniform(0, 0.1) for _ in range(3)] for _ in range(3)]
        a = IntervalMatrix(
            [[Interval(m[i][j] - widths[i][j], m[i][j] + widths[i][j]) for j in range(3)]
             for i in range(3)]
        )
        v = IntervalVector.box([(rng.uniform(-1, 0), rng.uniform(0, 1)) for _ in range(3)])
        pick_m = [[rng.uniform(a[i, j].lo, a[i, j].hi) for j in range(3)] for i in range(3)]
        pick_v = [rng.uniform(c.lo, c.hi) for c in v]
        w = matvec(a, v)
        exact = np.array(pick_m) @ np.array(pick_v)
        for i in range(3):
            assert w[i].lo <= exact[i] <= w[i].hi


def test_frame_scaled_column_enclosure():
    # a frame times a small box must contain every selected product
    a = IntervalMatrix.from_floats([[0.88371751, 0.88371751], [0.46802068, -0.46802068]])
    box = IntervalVector.box([(-1e-3, 1e-3), (-1e-3, 1e-3)])
    img = matvec(a, box)
    for sx in (-1e-3, 0.0, 1e-3):
        for sy in (-1e-3, 1e-3):
            z = (0.88371751 * sx + 0.88371751 * sy, 0.46802068 * sx - 0.46802068 * sy)
            assert img[0].lo <= z[0] <= img[0].hi
            assert img[1].lo <= z[1] <= img[1].hi


def test_mgs_orthonormal():
    rng = random.Random(3)
    for _ in range(50):
        cols = [[rng.uniform(-1, 1) for _ in range(3)] for _ in range(3)]
        q = mgs_orthonormalize(cols)
        qm = np.array(q).T  # columns
        assert np.allclose(qm.T @ qm, np.eye(3), atol=1e-12)
