"""Validated Taylor integration with doubleton wrapping control.

A propagated set is stored as

    X = center + init_frame * init_box + basis * residual

with a float center, float frames, a fixed interval box ``init_box``
(coordinates of the initial parallelogram, centered at 0) and an interval
``residual`` collecting all accumulated enclosure slack in the rotating
``basis``. One step of size h:

  1. validates a rough enclosure Z of all trajectories over [0, h]
     (first-order Picard test with bounded inflation retries),
  2. encloses the center image by an order-n Taylor sum at the center plus
     a Lagrange remainder of order n+1 evaluated on Z,
  3. encloses the one-step flow derivative J over the whole set by the
     variational Taylor sum plus its own remainder (matrix rough enclosure
     from a logarithmic-norm bound),
  4. pushes the affine pieces through the mean value form
     X' = image(center) + J*(init_frame*init_box + basis*residual),
     re-orthogonalizing the residual frame by modified Gram-Schmidt and
     absorbing midpoint split-offs into the residual.

The same J drives the optional propagation of the flow derivative
(monodromy) as a second doubleton, giving C1 enclosures.

Everything is deterministic: identical inputs and settings produce identical
bits, regardless of backend thread count (each integration is pure and
single-threaded).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import kernels, rmath
from .errors import StepSizeError
from .interval import Interval
from .linalg import (
    IntervalMatrix,
    IntervalVector,
    inverse,
    mgs_orthonormalize,
)
from .model import ModelParams, jacobian, vector_field

_IDENT9 = (1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True)
class Settings:
    """Integrator configuration; recorded verbatim in every certificate."""

    order: int = 20
    tol: float = 1e-14
    h_min: float = 1e-6
    h_max: float = 0.4
    h_init: float = 0.1
    picard_attempts: int = 18
    picard_time_factor: float = 1.08
    picard_abs: float = 1e-14
    max_steps: int = 20000
    max_subdiv_depth: int = 12
    blowup_width: float = 0.5  # abort a propagation whose set grows past this

    def describe(self) -> dict:
        return {
            "order": self.order,
            "tol": self.tol,
            "h_min": self.h_min,
            "h_max": self.h_max,
            "h_init": self.h_init,
            "picard_attempts": self.picard_attempts,
            "max_steps": self.max_steps,
            "max_subdiv_depth": self.max_subdiv_depth,
            "blowup_width": self.blowup_width,
            "kernel_backend": kernels.BACKEND,
        }


@dataclass(frozen=True)
class FlowEnclosure:
    """Doubleton set representation; see module docstring for semantics."""

    center: tuple[float, float, float]
    init_frame: tuple[tuple[float, ...], ...]
    init_box: IntervalVector
    basis: tuple[tuple[float, ...], ...]
    residual: IntervalVector
    time: Interval

    @property
    def absolute(self) -> IntervalVector:
        """Hull of init_frame * init_box (set = center + basis*residual + absolute)."""
        return _fmat_ivec(self.init_frame, self.init_box)

    def hull(self) -> IntervalVector:
        parts = []
        for i in range(3):
            acc = (self.center[i], self.center[i])
            for j in range(3):
                acc = rmath.iadd(
                    acc, rmath.imul(_pt(self.init_frame[i][j]), self.init_box[j].pair())
                )
            for j in range(3):
                acc = rmath.iadd(
                    acc, rmath.imul(_pt(self.basis[i][j]), self.residual[j].pair())
                )
            parts.append(Interval.from_pair(acc))
        return IntervalVector(parts)

    @staticmethod
    def from_affine(
        center: IntervalVector,
        frame: IntervalMatrix,
        box: IntervalVector,
    ) -> "FlowEnclosure":
        """Start set = center + frame * box (all interval-valued).

        The stored init_box is exactly centered: with mid_b = midpoints of
        box and C = midpoint frame,

            center + frame*box
              <=  mid(T) + C*(box - mid_b) + [(T - mid(T)) + (frame - C)*(box - mid_b)]

        where T = center + frame*mid_b encloses the translated base point.
        All interval slack lands in the residual, which always contains 0.
        """
        mid_box = [b.midpoint() for b in box]
        fmid = [[frame[i, j].midpoint() for j in range(3)] for i in range(3)]
        centered = [box[j] - mid_box[j] for j in range(3)]
        t = []
        for i in range(3):
            acc = center[i].pair()
            for j in range(3):
                acc = rmath.iadd(acc, rmath.imul(frame[i, j].pair(), _pt(mid_box[j])))
            t.append(acc)
        m = tuple(_mid(ti) for ti in t)
        resid = []
        for i in range(3):
            acc = rmath.isub(t[i], _pt(m[i]))
            for j in range(3):
                dfr = frame[i, j] - fmid[i][j]
                acc = rmath.iadd(acc, rmath.imul(dfr.pair(), centered[j].pair()))
            resid.append(Interval.from_pair(acc))
        return FlowEnclosure(
            center=m,
            init_frame=tuple(tuple(r) for r in fmid),
            init_box=IntervalVector(Interval(c.lo, c.hi) for c in centered),
            basis=((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)),
            residual=IntervalVector(resid),
            time=Interval.point(0.0),
        )

    @staticmethod
    def from_box(box: IntervalVector) -> "FlowEnclosure":
        zero = IntervalVector.from_floats([0.0, 0.0, 0.0])
        return FlowEnclosure.from_affine(zero, IntervalMatrix.identity(3), box)


@dataclass(frozen=True)
class C1FlowEnclosure:
    """FlowEnclosure plus a doubleton for the flow derivative from t=0."""

    base: FlowEnclosure
    dcenter: tuple[tuple[float, ...], ...] = field(
        default=((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
    )
    dbasis: tuple[tuple[float, ...], ...] = field(
        default=((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
    )
    dresidual: IntervalMatrix = field(
        default_factory=lambda: IntervalMatrix.from_floats(
            [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
        )
    )

    def dphi(self) -> IntervalMatrix:
        """Hull enclosure of the derivative matrix."""
        rows = []
        for i in range(3):
            row = []
            for j in range(3):
                acc = _pt(self.dcenter[i][j])
                for k in range(3):
                    acc = rmath.iadd(
                        acc,
                        rmath.imul(_pt(self.dbasis[i][k]), self.dresidual[k, j].pair()),
                    )
                row.append(Interval.from_pair(acc))
            rows.append(row)
        return IntervalMatrix(rows)


# ---------------------------------------------------------------------------
# small float/pair helpers
# ---------------------------------------------------------------------------

def _pt(x: float):
    return (x, x)


def _fmat_ivec(fm, v) -> IntervalVector:
    out = []
    for i in range(3):
        acc = (0.0, 0.0)
        for j in range(3):
            acc = rmath.iadd(acc, rmath.imul(_pt(fm[i][j]), v[j].pair()))
        out.append(Interval.from_pair(acc))
    return IntervalVector(out)


def _imat_fmat(a_pairs, fm):
    """(interval 3x3 as pair grid) * (float 3x3) -> pair grid."""
    out = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            acc = (0.0, 0.0)
            for k in range(3):
                acc = rmath.iadd(acc, rmath.imul(a_pairs[i][k], _pt(fm[k][j])))
            out[i][j] = acc
    return out


def _imat_imat(a_pairs, b_pairs):
    out = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            acc = (0.0, 0.0)
            for k in range(3):
                acc = rmath.iadd(acc, rmath.imul(a_pairs[i][k], b_pairs[k][j]))
            out[i][j] = acc
    return out


def _imat_ivecpairs(a_pairs, v_pairs):
    out = []
    for i in range(3):
        acc = (0.0, 0.0)
        for k in range(3):
            acc = rmath.iadd(acc, rmath.imul(a_pairs[i][k], v_pairs[k]))
        out.append(acc)
    return out


def _mid(pair) -> float:
    m = 0.5 * (pair[0] + pair[1])
    return min(max(m, pair[0]), pair[1])


# ---------------------------------------------------------------------------
# rough enclosures
# ---------------------------------------------------------------------------

def rough_enclosure(
    box: IntervalVector,
    h: float,
    params: ModelParams,
    settings: Settings,
    sign: float = 1.0,
) -> IntervalVector:
    """Set Z with box + [0,h]*sign*field(Z) strictly inside Z (Picard test).

    Z then contains every trajectory from ``box`` on [0, h] of the
    (optionally time-reversed) flow. Raises :class:`StepSizeError` when the
    bounded inflation loop fails, signalling the caller to halve h.
    """
    ht = Interval(0.0, h * settings.picard_time_factor) * sign
    guess = vector_field(box, params)
    cand = IntervalVector(
        (b + guess[i] * ht).inflate(settings.picard_abs) for i, b in enumerate(box)
    )
    span = Interval(0.0, h) * sign
    for _ in range(settings.picard_attempts):
        f_cand = vector_field(cand, params)
        need = IntervalVector(box[i] + f_cand[i] * span for i in range(3))
        if need.subset_interior(cand):
            return need
        cand = IntervalVector(
            n.hull(c).inflate(settings.picard_abs + 0.1 * n.hull(c).width)
            for n, c in zip(need, cand, strict=True)
        )
    raise StepSizeError(f"rough enclosure failed for h={h}")


def _variational_rough(
    z: IntervalVector, h: float, params: ModelParams
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Entrywise bound W on the one-step variational flow over [0, h].

    |V(t) - I|_max <= exp(t * mu) - 1 with mu an upper bound on the
    max-row-sum norm of the Jacobian over the rough enclosure z.
    """
    j = jacobian(z, params)
    mu = 0.0
    for i in range(3):
        acc = 0.0
        for k in range(3):
            acc = rmath.add_up(acc, j[i, k].mag())
        mu = max(mu, acc)
    em = math.exp(rmath.mul_up(h, mu))
    beta = rmath.add_up(rmath.up(rmath.up(em)), -1.0)
    lo = []
    hi = []
    for i in range(9):
        base = _IDENT9[i]
        lo.append(base - beta)
        hi.append(base + beta)
    return tuple(lo), tuple(hi)


# ---------------------------------------------------------------------------
# Taylor coefficients (module-level operation used by tests and callers)
# ---------------------------------------------------------------------------

def taylor_coefficients(
    s: IntervalVector, order: int, params: ModelParams, sign: float = 1.0
) -> list[IntervalVector]:
    if order < 1:
        raise ValueError("order >= 1 required")
    x6 = (s[0].lo, s[0].hi, s[1].lo, s[1].hi, s[2].lo, s[2].hi)
    rows = kernels.state_series(x6, order, params.kernel_pack(sign))
    return [
        IntervalVector(
            [Interval(r[0], r[1]), Interval(r[2], r[3]), Interval(r[4], r[5])]
        )
        for r in rows
    ]


# ---------------------------------------------------------------------------
# the step
# ---------------------------------------------------------------------------

class StepResult:
    __slots__ = ("enclosure", "rough", "err_estimate")

    def __init__(self, enclosure, rough, err_estimate):
        self.enclosure = enclosure
        self.rough = rough
        self.err_estimate = err_estimate


def step(
    enc: FlowEnclosure | C1FlowEnclosure,
    h: float,
    params: ModelParams,
    settings: Settings,
    sign: float = 1.0,
    rough: IntervalVector | None = None,
) -> StepResult:
    """Advance the enclosure by exactly h (validated); h >= 0.

    ``rough`` may supply a pre-validated enclosure over [0, h]. C1 input
    propagates the derivative doubleton as well.
    """
    want_c1 = isinstance(enc, C1FlowEnclosure)
    base = enc.base if want_c1 else enc
    n = settings.order
    pk = params.kernel_pack(sign)

    bbox = base.hull()
    if rough is None:
        rough = rough_enclosure(bbox, h, params, settings)
    z6 = (
        rough[0].lo,
        rough[0].hi,
        rough[1].lo,
        rough[1].hi,
        rough[2].lo,
        rough[2].hi,
    )
    m6 = (
        base.center[0],
        base.center[0],
        base.center[1],
        base.center[1],
        base.center[2],
        base.center[2],
    )
    b6 = (bbox[0].lo, bbox[0].hi, bbox[1].lo, bbox[1].hi, bbox[2].lo, bbox[2].hi)

    cm = kernels.state_series(m6, n, pk)
    _, vb = kernels.var_series(b6, (_IDENT9, _IDENT9), n, pk)
    w = _variational_rough(rough, h, params)
    cz, vz = kernels.var_series(z6, w, n + 1, pk)

    hp = _pt(h)

    # center image Delta = sum_i cm_i h^i + cz_{n+1} h^{n+1}
    delta = []
    for comp in range(3):
        acc = (cz[n + 1][2 * comp], cz[n + 1][2 * comp + 1])
        for i in range(n, -1, -1):
            acc = rmath.imul(acc, hp)
            acc = rmath.iadd(acc, (cm[i][2 * comp], cm[i][2 * comp + 1]))
        delta.append(acc)

    # one-step Jacobian over the whole set
    jpairs = [[None] * 3 for _ in range(3)]
    for r in range(3):
        for c in range(3):
            idx = 3 * r + c
            acc = (vz[n + 1][0][idx], vz[n + 1][1][idx])
            for i in range(n, -1, -1):
                acc = rmath.imul(acc, hp)
                acc = rmath.iadd(acc, (vb[i][0][idx], vb[i][1][idx]))
            jpairs[r][c] = acc

    # local error estimate for the step controller (not used for bounds)
    err = 0.0
    for comp in range(3):
        err = max(
            err,
            max(abs(cz[n + 1][2 * comp]), abs(cz[n + 1][2 * comp + 1]))
            * h ** (n + 1),
        )

    m_new = tuple(_mid(d) for d in delta)
    delta_r = [rmath.isub(delta[i], _pt(m_new[i])) for i in range(3)]

    chat = _imat_fmat(jpairs, base.init_frame)
    c_new = tuple(tuple(_mid(chat[i][j]) for j in range(3)) for i in range(3))
    c_spill = [
        [rmath.isub(chat[i][j], _pt(c_new[i][j])) for j in range(3)] for i in range(3)
    ]

    jb = _imat_fmat(jpairs, base.basis)
    jb_mid = [[_mid(jb[i][j]) for j in range(3)] for i in range(3)]
    q_cols = _order_columns(jb_mid, base.residual)
    q = mgs_orthonormalize(q_cols)
    q_rows = tuple(
        tuple(q[j][i] for j in range(3)) for i in range(3)
    )  # columns -> matrix
    qinv = inverse(IntervalMatrix.from_floats(q_rows))
    qinv_pairs = [[qinv[i, j].pair() for j in range(3)] for i in range(3)]

    spill_q0 = _imat_ivecpairs(
        _imat_imat(qinv_pairs, c_spill), [b.pair() for b in base.init_box]
    )
    r_terms = _imat_ivecpairs(
        _imat_imat(qinv_pairs, jb), [r.pair() for r in base.residual]
    )
    d_terms = _imat_ivecpairs(qinv_pairs, delta_r)
    r_new = IntervalVector(
        Interval.from_pair(
            rmath.iadd(rmath.iadd(spill_q0[i], r_terms[i]), d_terms[i])
        )
        for i in range(3)
    )

    new_base = FlowEnclosure(
        center=m_new,
        init_frame=c_new,
        init_box=base.init_box,
        basis=q_rows,
        residual=r_new,
        time=base.time + h,
    )

    if not want_c1:
        return StepResult(new_base, rough, err)

    dhat = _imat_fmat(jpairs, enc.dcenter)
    dc_new = tuple(tuple(_mid(dhat[i][j]) for j in range(3)) for i in range(3))
    d_spill = [
        [rmath.isub(dhat[i][j], _pt(dc_new[i][j])) for j in range(3)]
        for i in range(3)
    ]
    jbv = _imat_fmat(jpairs, enc.dbasis)
    jbv_mid = [[_mid(jbv[i][j]) for j in range(3)] for i in range(3)]
    qv_cols = _order_columns(jbv_mid, _matrix_row_mags(enc.dresidual))
    qv = mgs_orthonormalize(qv_cols)
    qv_rows = tuple(tuple(qv[j][i] for j in range(3)) for i in range(3))
    qvinv = inverse(IntervalMatrix.from_floats(qv_rows))
    qvinv_pairs = [[qvinv[i, j].pair() for j in range(3)] for i in range(3)]

    rv_pairs = [[enc.dresidual[i, j].pair() for j in range(3)] for i in range(3)]
    term1 = _imat_imat(qvinv_pairs, d_spill)
    term2 = _imat_imat(_imat_imat(qvinv_pairs, jbv), rv_pairs)
    rv_new = IntervalMatrix(
        [
            [Interval.from_pair(rmath.iadd(term1[i][j], term2[i][j])) for j in range(3)]
            for i in range(3)
        ]
    )
    return StepResult(
        C1FlowEnclosure(
            base=new_base, dcenter=dc_new, dbasis=qv_rows, dresidual=rv_new
        ),
        rough,
        err,
    )


def _matrix_row_mags(m: IntervalMatrix) -> IntervalVector:
    return IntervalVector(
        Interval(0.0, max(m[i, j].mag() for j in range(3))) for i in range(3)
    )


def _order_columns(fm, weights: IntervalVector):
    """Columns of fm sorted by residual-weighted norm, largest first."""
    cols = []
    for j in range(3):
        col = [fm[i][j] for i in range(3)]
        nrm = math.sqrt(sum(x * x for x in col)) * max(weights[j].mag(), 1e-300)
        cols.append((nrm, j, col))
    cols.sort(key=lambda t: (-t[0], t[1]))
    return [c[2] for c in cols]


def propose_h(err: float, h: float, settings: Settings) -> float:
    """Deterministic step-size controller (error-per-step target)."""
    n = settings.order
    if err <= 0.0:
        fac = 2.0
    else:
        fac = 0.85 * (settings.tol / err) ** (1.0 / (n + 1))
        fac = min(2.0, max(0.3, fac))
    return min(settings.h_max, max(settings.h_min, h * fac))


def step_c1(
    enc: C1FlowEnclosure,
    h: float,
    params: ModelParams,
    settings: Settings,
    sign: float = 1.0,
) -> StepResult:
    if not isinstance(enc, C1FlowEnclosure):
        raise TypeError("step_c1 expects a C1FlowEnclosure")
    return step(enc, h, params, settings, sign=sign)


def integrate_time(
    enc: FlowEnclosure | C1FlowEnclosure,
    t_total: float,
    params: ModelParams,
    settings: Settings,
    sign: float = 1.0,
):
    """Drive the enclosure to elapsed time ~t_total (within step rounding).

    Used by diagnostics and tests; the return-map driver in
    :mod:`spinorbit.poincare` controls its own stepping.
    """
    from .errors import IntegrationBudgetError

    t = 0.0
    h = settings.h_init
    for _ in range(settings.max_steps):
        if t >= t_total:
            return enc
        hh = min(h, t_total - t)
        try:
            res = step(enc, hh, params, settings, sign=sign)
        except StepSizeError:
            h = hh / 2.0
            if h < settings.h_min:
                raise
            continue
        enc = res.enclosure
        t += hh
        h = propose_h(res.err_estimate, hh, settings)
    if t < t_total:
        raise IntegrationBudgetError(f"did not reach time {t_total} (at {t})")
    return enc
