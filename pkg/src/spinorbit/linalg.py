"""Small fixed-dimension interval linear algebra (dims 1..3).

Vectors and matrices are immutable tuples of :class:`Interval`. Products are
containment-monotone: exact results of any member selection lie inside the
returned enclosures. Inversion goes through the adjugate (2x2) or interval
Gauss-Jordan (general), raising :class:`SingularMatrixError` when a pivot or
determinant straddles zero.

Float helpers at the bottom (midpoint extraction, modified Gram-Schmidt)
are deliberately non-rigorous; they only ever choose coordinate frames and
centers, never bounds.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .errors import SingularMatrixError
from .interval import Interval


class IntervalVector:
    __slots__ = ("comps",)

    def __init__(self, comps: Iterable[Interval]):
        object.__setattr__(self, "comps", tuple(comps))

    def __setattr__(self, *_):
        raise AttributeError("IntervalVector is immutable")

    @staticmethod
    def from_floats(xs: Sequence[float]) -> "IntervalVector":
        return IntervalVector(Interval.point(float(x)) for x in xs)

    @staticmethod
    def box(pairs: Sequence[tuple[float, float]]) -> "IntervalVector":
        return IntervalVector(Interval(lo, hi) for lo, hi in pairs)

    def __len__(self) -> int:
        return len(self.comps)

    def __getitem__(self, i: int) -> Interval:
        return self.comps[i]

    def __iter__(self):
        return iter(self.comps)

    def __repr__(self) -> str:
        return f"IntervalVector({list(self.comps)!r})"

    def __add__(self, other: "IntervalVector") -> "IntervalVector":
        return IntervalVector(a + b for a, b in zip(self.comps, other.comps, strict=True))

    def __sub__(self, other: "IntervalVector") -> "IntervalVector":
        return IntervalVector(a - b for a, b in zip(self.comps, other.comps, strict=True))

    def __neg__(self) -> "IntervalVector":
        return IntervalVector(-a for a in self.comps)

    def scale(self, s) -> "IntervalVector":
        return IntervalVector(a * s for a in self.comps)

    def contains(self, other) -> bool:
        if isinstance(other, IntervalVector):
            return all(a.contains(b) for a, b in zip(self.comps, other.comps, strict=True))
        return all(a.contains(x) for a, x in zip(self.comps, other, strict=True))

    def subset_interior(self, other: "IntervalVector") -> bool:
        return all(a.subset_interior(b) for a, b in zip(self.comps, other.comps, strict=True))

    def intersect(self, other: "IntervalVector") -> "IntervalVector | None":
        out = []
        for a, b in zip(self.comps, other.comps, strict=True):
            c = a.intersect(b)
            if c is None:
                return None
            out.append(c)
        return IntervalVector(out)

    def hull(self, other: "IntervalVector") -> "IntervalVector":
        return IntervalVector(a.hull(b) for a, b in zip(self.comps, other.comps, strict=True))

    def midpoint(self) -> tuple[float, ...]:
        return tuple(a.midpoint() for a in self.comps)

    def widths(self) -> tuple[float, ...]:
        return tuple(a.width for a in self.comps)

    def max_width(self) -> float:
        return max(a.width for a in self.comps)


class IntervalMatrix:
    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable[Interval]]):
        object.__setattr__(self, "rows", tuple(tuple(r) for r in rows))
        n = len(self.rows[0])
        if any(len(r) != n for r in self.rows):
            raise ValueError("ragged interval matrix")

    def __setattr__(self, *_):
        raise AttributeError("IntervalMatrix is immutable")

    @staticmethod
    def from_floats(rows: Sequence[Sequence[float]]) -> "IntervalMatrix":
        return IntervalMatrix([[Interval.point(float(x)) for x in r] for r in rows])

    @staticmethod
    def identity(n: int) -> "IntervalMatrix":
        return IntervalMatrix(
            [[Interval.point(1.0 if i == j else 0.0) for j in range(n)] for i in range(n)]
        )

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij: tuple[int, int]) -> Interval:
        return self.rows[ij[0]][ij[1]]

    def __repr__(self) -> str:
        return f"IntervalMatrix({[list(r) for r in self.rows]!r})"

    def row(self, i: int) -> IntervalVector:
        return IntervalVector(self.rows[i])

    def col(self, j: int) -> IntervalVector:
        return IntervalVector(r[j] for r in self.rows)

    def __add__(self, other: "IntervalMatrix") -> "IntervalMatrix":
        return IntervalMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows, strict=True)]
        )

    def __sub__(self, other: "IntervalMatrix") -> "IntervalMatrix":
        return IntervalMatrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows, strict=True)]
        )

    def __neg__(self) -> "IntervalMatrix":
        return IntervalMatrix([[-a for a in r] for r in self.rows])

    def scale(self, s) -> "IntervalMatrix":
        return IntervalMatrix([[a * s for a in r] for r in self.rows])

    def transpose(self) -> "IntervalMatrix":
        n, m = self.shape
        return IntervalMatrix([[self.rows[i][j] for i in range(n)] for j in range(m)])

    def contains(self, other) -> bool:
        if isinstance(other, IntervalMatrix):
            return all(
                a.contains(b)
                for ra, rb in zip(self.rows, other.rows, strict=True)
                for a, b in zip(ra, rb)
            )
        return all(
            a.contains(float(x))
            for ra, rx in zip(self.rows, other, strict=True)
            for a, x in zip(ra, rx)
        )

    def intersects(self, other: "IntervalMatrix") -> bool:
        return all(
            a.intersect(b) is not None
            for ra, rb in zip(self.rows, other.rows, strict=True)
            for a, b in zip(ra, rb)
        )

    def midpoint(self) -> list[list[float]]:
        return [[a.midpoint() for a in r] for r in self.rows]

    def det2(self) -> Interval:
        r = self.rows
        return r[0][0] * r[1][1] - r[0][1] * r[1][0]

    def trace(self) -> Interval:
        return sum((self.rows[i][i] for i in range(len(self.rows))), Interval.point(0.0))


def matvec(a: IntervalMatrix, v: IntervalVector) -> IntervalVector:
    out = []
    for row in a.rows:
        acc = Interval.point(0.0)
        for x, y in zip(row, v.comps, strict=True):
            acc = acc + x * y
        out.append(acc)
    return IntervalVector(out)


def matmul(a: IntervalMatrix, b: IntervalMatrix) -> IntervalMatrix:
    n, k = a.shape
    k2, m = b.shape
    if k != k2:
        raise ValueError("shape mismatch")
    rows = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = Interval.point(0.0)
            for t in range(k):
                acc = acc + a.rows[i][t] * b.rows[t][j]
            row.append(acc)
        rows.append(row)
    return IntervalMatrix(rows)


def inverse2x2(a: IntervalMatrix) -> IntervalMatrix:
    d = a.det2()
    if d.contains(0.0):
        raise SingularMatrixError(f"2x2 determinant {d!r} contains 0")
    r = a.rows
    return IntervalMatrix(
        [
            [r[1][1] / d, -r[0][1] / d],
            [-r[1][0] / d, r[0][0] / d],
        ]
    )


def inverse(a: IntervalMatrix) -> IntervalMatrix:
    """Rigorous inverse enclosure via interval Gauss-Jordan with pivoting."""
    n, m = a.shape
    if n != m:
        raise ValueError("square matrix required")
    if n == 1:
        piv = a.rows[0][0]
        if piv.contains(0.0):
            raise SingularMatrixError("1x1 pivot contains 0")
        return IntervalMatrix([[Interval.point(1.0) / piv]])
    if n == 2:
        return inverse2x2(a)
    work = [list(r) for r in a.rows]
    aug = [
        [Interval.point(1.0 if i == j else 0.0) for j in range(n)] for i in range(n)
    ]
    for col in range(n):
        piv_row = max(
            range(col, n),
            key=lambda r: min(abs(work[r][col].lo), abs(work[r][col].hi))
            if not work[r][col].contains(0.0)
            else -1.0,
        )
        if work[piv_row][col].contains(0.0):
            raise SingularMatrixError(f"pivot in column {col} contains 0")
        if piv_row != col:
            work[col], work[piv_row] = work[piv_row], work[col]
            aug[col], aug[piv_row] = aug[piv_row], aug[col]
        piv = work[col][col]
        work[col] = [x / piv for x in work[col]]
        aug[col] = [x / piv for x in aug[col]]
        for r in range(n):
            if r == col:
                continue
            f = work[r][col]
            if f.lo == 0.0 and f.hi == 0.0:
                continue
            work[r] = [x - f * y for x, y in zip(work[r], work[col])]
            aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return IntervalMatrix(aug)


# ---------------------------------------------------------------------------
# non-rigorous float helpers (frame and center selection only)
# ---------------------------------------------------------------------------

def mgs_orthonormalize(cols: Sequence[Sequence[float]]) -> list[list[float]]:
    """Modified Gram-Schmidt on column vectors; returns orthonormal columns.

    Columns are processed in the given order; a degenerate column is replaced
    by the most orthogonal coordinate axis, so the result is always a full
    basis (floats, non-rigorous by design).
    """
    n = len(cols[0])
    out: list[list[float]] = []
    for c in cols:
        v = list(map(float, c))
        for q in out:
            dot = sum(v[i] * q[i] for i in range(n))
            for i in range(n):
                v[i] -= dot * q[i]
        nrm = math.sqrt(sum(x * x for x in v))
        if nrm < 1e-300:
            best, best_res = None, -1.0
            for axis in range(n):
                e = [1.0 if i == axis else 0.0 for i in range(n)]
                for q in out:
                    dot = q[axis]
                    for i in range(n):
                        e[i] -= dot * q[i]
                res = math.sqrt(sum(x * x for x in e))
                if res > best_res:
                    best, best_res = e, res
            v = best
            nrm = best_res
        out.append([x / nrm for x in v])
    return out


def fmat_mul(a: Sequence[Sequence[float]], b: Sequence[Sequence[float]]) -> list[list[float]]:
    n, k, m = len(a), len(b), len(b[0])
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def fmat_vec(a: Sequence[Sequence[float]], v: Sequence[float]) -> list[float]:
    return [sum(ai[j] * v[j] for j in range(len(v))) for ai in a]


def fmat_transpose(a: Sequence[Sequence[float]]) -> list[list[float]]:
    return [[a[i][j] for i in range(len(a))] for j in range(len(a[0]))]
