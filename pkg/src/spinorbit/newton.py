"""Interval-Newton fixed-point proofs and eigenstructure enclosures.

For F(x) = P^k(x) - shift - x on a 2-d section box X, the operator

    N(X) = m - [DF(X)]^{-1} F(m),   m = midpoint of X,

satisfies: every zero of F in X lies in N(X); if N(X) is contained in the
interior of X there is exactly one zero in X; if N(X) and X are disjoint
there is none (a rigorous negative). The shift removes the winding of the
unwrapped rotation angle, which advances by an integer multiple of pi per
return (the section lives on R mod pi).

Hyperbolicity certificates come from eigenvalue enclosures of DP^k via the
interval quadratic formula on (trace, determinant); eigenvector enclosures
solve (A - lambda I) v = 0 in whichever row is better conditioned, with
unit Euclidean norm and positive first component, ordered unstable then
stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SingularMatrixError
from .integrator import Settings
from .interval import Interval, PI
from .linalg import IntervalMatrix, IntervalVector, inverse, matmul, matvec
from .model import ModelParams
from .poincare import ReturnMap


@dataclass(frozen=True)
class EigenData:
    values: tuple[Interval, Interval]
    vectors: IntervalMatrix | None
    decided: bool


@dataclass(frozen=True)
class FixedPointProof:
    box: IntervalVector
    k: int
    winding: int
    newton_image: IntervalVector
    unique: bool
    exists_none: bool
    eigenvalues: tuple[Interval, Interval] | None
    eigenvectors: IntervalMatrix | None
    hyperbolic: bool
    derivative: IntervalMatrix | None
    iterations: int

    def describe(self) -> dict:
        out = {
            "k": self.k,
            "winding": self.winding,
            "unique": self.unique,
            "no_fixed_point": self.exists_none,
            "hyperbolic": self.hyperbolic,
            "iterations": self.iterations,
            "box": [list(c.to_decimal_strings()) for c in self.box],
        }
        if self.eigenvalues is not None:
            out["eigenvalues"] = [
                list(v.to_decimal_strings()) for v in self.eigenvalues
            ]
        if self.eigenvectors is not None:
            out["eigenvectors"] = [
                [list(self.eigenvectors[i, j].to_decimal_strings()) for j in range(2)]
                for i in range(2)
            ]
        return out


def newton_contract(
    f_mid: IntervalVector, df: IntervalMatrix, box: IntervalVector
) -> tuple[IntervalVector, str]:
    """One interval-Newton evaluation; returns (N(X), relation).

    relation is "interior" (unique zero proven), "disjoint" (no zero in X),
    or "overlap" (inconclusive; intersect and iterate).
    """
    mid = IntervalVector.from_floats([c.midpoint() for c in box])
    n_img = mid - matvec(inverse(df), f_mid)
    return n_img, _classify(n_img, box)


def _classify(n_img: IntervalVector, box: IntervalVector) -> str:
    if n_img.intersect(box) is None:
        return "disjoint"
    if n_img.subset_interior(box):
        return "interior"
    return "overlap"


def _newton_split(
    f_core: IntervalVector,
    res_frame: IntervalMatrix,
    res_vec: IntervalVector,
    df: IntervalMatrix,
    box: IntervalVector,
) -> tuple[IntervalVector, str]:
    """Newton evaluation with F(mid) = f_core + res_frame * res_vec.

    Multiplying DF^{-1} into res_frame before contracting against res_vec
    lets the stable/unstable structure cancel: the large unstable-direction
    residual is divided by (lambda_u - 1) instead of polluting both
    components of a pre-hulled box.
    """
    mid = IntervalVector.from_floats([c.midpoint() for c in box])
    inv = inverse(df)
    core_term = matvec(inv, f_core)
    res_term = matvec(matmul(inv, res_frame), res_vec)
    n_img = IntervalVector(
        [mid[i] - core_term[i] - res_term[i] for i in range(len(box))]
    )
    return n_img, _classify(n_img, box)


def _winding(theta_img: Interval, theta_ref: float) -> int:
    return round((theta_img.midpoint() - theta_ref) / math.pi)


def prove_fixed_point(
    box: IntervalVector,
    k: int,
    params: ModelParams,
    settings: Settings,
    max_iter: int = 8,
) -> FixedPointProof:
    """Existence/uniqueness proof for a fixed point of P^k in the box."""
    rm = ReturnMap(params, settings)
    cur = box
    unique = False
    winding = 0
    n_img = box
    dp = None
    iters = 0
    zero_frame = IntervalMatrix.from_floats([[0.0, 0.0], [0.0, 0.0]])
    for iters in range(1, max_iter + 1):
        mid = [c.midpoint() for c in cur]
        center_pt = IntervalVector.from_floats(mid)
        img = rm.image_affine(center_pt, zero_frame, k)
        dp_cr = rm.poincare_map(cur, k, want_derivative=True)
        dp = dp_cr.derivative
        winding = _winding(img.center[0], mid[0])
        if img.center[0].width > 1.0:
            raise SingularMatrixError("image too wide to fix the winding branch")
        # F(mid) kept in split affine form: core + res_frame * res_vec, so
        # the inverse-Jacobian contraction applies before any hulling
        f_core = IntervalVector(
            [
                img.center_core[0] - PI * float(winding) - mid[0],
                img.center_core[1] - mid[1],
            ]
        )
        one = Interval.point(1.0)
        df = IntervalMatrix(
            [
                [dp[0, 0] - one, dp[0, 1]],
                [dp[1, 0], dp[1, 1] - one],
            ]
        )
        n_img, rel = _newton_split(f_core, img.res_frame, img.res_vec, df, cur)
        if rel == "disjoint":
            return FixedPointProof(
                box=cur,
                k=k,
                winding=winding,
                newton_image=n_img,
                unique=False,
                exists_none=True,
                eigenvalues=None,
                eigenvectors=None,
                hyperbolic=False,
                derivative=dp,
                iterations=iters,
            )
        if rel == "interior":
            unique = True
        new_cur = n_img.intersect(cur)
        if new_cur is None:
            new_cur = cur
        improved = new_cur.max_width() < 0.9 * cur.max_width()
        cur = new_cur
        if unique and not improved:
            break

    eig = None
    vectors = None
    hyperbolic = False
    if unique:
        dp = rm.d_poincare(cur, k)
        eig_data = eigen_enclosure(dp)
        eig = eig_data.values
        vectors = eig_data.vectors
        if eig_data.decided:
            lu, ls = eig_data.values
            hyperbolic = _mag_lo(lu) > 1.0 and _mag_hi(ls) < 1.0
    return FixedPointProof(
        box=cur,
        k=k,
        winding=winding,
        newton_image=n_img,
        unique=unique,
        exists_none=False,
        eigenvalues=eig,
        eigenvectors=vectors,
        hyperbolic=hyperbolic,
        derivative=dp,
        iterations=iters,
    )


def _mag_lo(a: Interval) -> float:
    if a.lo > 0.0:
        return a.lo
    if a.hi < 0.0:
        return -a.hi
    return 0.0


def _mag_hi(a: Interval) -> float:
    return a.mag()


def eigen_enclosure(a: IntervalMatrix) -> EigenData:
    """Eigenvalue/eigenvector enclosures of a real 2x2 interval matrix.

    Requires a strictly positive discriminant enclosure for the eigenvector
    output; otherwise returns real-part enclosures flagged undecided.
    """
    tr = a[0, 0] + a[1, 1]
    det = a.det2()
    disc = tr.pow_int(2) - det * 4.0
    half = Interval.point(0.5)
    if disc.lo <= 0.0:
        # possibly complex; real parts are tr/2 +- sqrt(max(disc,0))/2
        top = Interval(0.0, max(disc.hi, 0.0)).sqrt()
        lam = tr * half
        spread = top * half
        pair = (lam + spread, lam - spread)
        return EigenData(values=pair, vectors=None, decided=False)
    sq = disc.sqrt()
    l1 = (tr + sq) * half
    l2 = (tr - sq) * half
    if abs(l1.midpoint()) >= abs(l2.midpoint()):
        lu, ls = l1, l2
    else:
        lu, ls = l2, l1
    vu = _eigenvector(a, lu)
    vs = _eigenvector(a, ls)
    vectors = None
    if vu is not None and vs is not None:
        vectors = IntervalMatrix([[vu[0], vs[0]], [vu[1], vs[1]]])
    return EigenData(values=(lu, ls), vectors=vectors, decided=True)


def _eigenvector(a: IntervalMatrix, lam: Interval) -> IntervalVector | None:
    """Unit eigenvector enclosure (first component positive) or None."""
    # (a00 - lam) v0 + a01 v1 = 0  or  a10 v0 + (a11 - lam) v1 = 0
    cand = []
    r0 = (a[0, 1], lam - a[0, 0])
    r1 = (lam - a[1, 1], a[1, 0])
    for v0, v1 in (r0, r1):
        size = min(v0.mag(), 1e30) + v1.mag()
        cand.append((size, v0, v1))
    cand.sort(key=lambda t: -t[0])
    for _, v0, v1 in cand:
        norm2 = v0.pow_int(2) + v1.pow_int(2)
        if norm2.lo <= 0.0:
            continue
        norm = norm2.sqrt()
        w0 = v0 / norm
        w1 = v1 / norm
        # sign: first component positive, falling back to the second when
        # the first straddles zero (axis-aligned directions)
        if w0.lo > 0.0:
            pass
        elif w0.hi < 0.0:
            w0, w1 = -w0, -w1
        elif w1.lo > 0.0:
            pass
        elif w1.hi < 0.0:
            w0, w1 = -w0, -w1
        else:
            continue
        return IntervalVector([w0, w1])
    return None
