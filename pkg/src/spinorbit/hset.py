"""H-sets (parallelograms with exit/entry structure) and covering checks.

An h-set is support = p + A*b, where p is a small interval vector, A an
interval frame matrix whose first column spans the exit direction, and b an
absolute box (endpoints stored as interval enclosures of the printed
decimals). Exit dimension = entry dimension = 1: the exit set consists of
the two edges at the x-extremes of b, the entry set of the y-extreme edges.

A covering M => N under a map holds when, in N's frame coordinates,
 - entry: the image of all of M lies strictly between N's y-bounds, and
 - exit: the image of M's left x-edge lies strictly beyond one x-bound and
   the right edge strictly beyond the other (opposite sides, degree +-1).
These are the standard computable sufficient conditions for the topological
covering definition (they realize the required homotopy with the linear
model x -> +-2x); same-side edge images are rejected as degree 0.

Checks subdivide the source parallelogram adaptively (split the coordinate
contributing most to the violated bound, ties toward x, bounded depth) and
evaluate the map on each piece through an evaluator returning affine
enclosures. A piece whose image enclosure lies entirely outside the
required region is a definite violation and fails fast.

The reversing symmetry R(theta, phi) = (pi - theta, phi) transports
verified coverings to back-coverings of the mirrored transposed h-sets
without any integration: from M => N under P one gets
R(N)^T <= R(M)^T (equivalently, an orbit-tracking edge from R(N)^T to
R(M)^T), because R conjugates P to P^{-1} and transposition swaps the exit
and entry roles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from decimal import Decimal

from . import rmath
from .errors import IntegrationBudgetError, StepSizeError
from .interval import Interval, PI
from .linalg import IntervalMatrix, IntervalVector, inverse2x2, matmul, matvec
from .tables import FRAMES, STATIONARY, symmetrized_frame

_SCALE = Decimal("0.001")  # base boxes are printed in units of 10^-3


@dataclass(frozen=True)
class HSet:
    """Parallelogram h-set with exit (x) and entry (y) structure."""

    id: str
    p: IntervalVector
    frame: IntervalMatrix
    # box endpoint enclosures: ((x_lo, x_hi), (y_lo, y_hi)), absolute units
    bx: tuple[Interval, Interval]
    by: tuple[Interval, Interval]
    theta_half_pi: bool = False

    # -- parameterization (outer cover of the support) -----------------------

    def box_mid_rad(self) -> tuple[list[float], list[float]]:
        mids = []
        rads = []
        for lo, hi in (self.bx, self.by):
            m = 0.5 * (lo.lo + hi.hi)
            r = max(rmath.sub_up(hi.hi, m), rmath.sub_up(m, lo.lo))
            mids.append(m)
            rads.append(r)
        return mids, rads

    def source_center(self) -> IntervalVector:
        mids, _ = self.box_mid_rad()
        return self.p + matvec(self.frame, IntervalVector.from_floats(mids))

    def source_frame(self) -> IntervalMatrix:
        _, rads = self.box_mid_rad()
        return IntervalMatrix(
            [
                [self.frame[0, 0] * rads[0], self.frame[0, 1] * rads[1]],
                [self.frame[1, 0] * rads[0], self.frame[1, 1] * rads[1]],
            ]
        )

    def frame_inverse(self) -> IntervalMatrix:
        return inverse2x2(self.frame)

    def support_hull(self) -> IntervalVector:
        c = self.source_center()
        f = self.source_frame()
        out = []
        for i in range(2):
            acc = c[i].pair()
            for j in range(2):
                m = f[i, j].mag()
                acc = rmath.iadd(acc, (-m, m))
            out.append(Interval.from_pair(acc))
        return IntervalVector(out)

    def contains_point(self, z: IntervalVector) -> bool:
        """Whether z certainly lies in the support (frame-coordinate test)."""
        t = matvec(self.frame_inverse(), z - self.p)
        return (
            t[0].lo > self.bx[0].hi
            and t[0].hi < self.bx[1].lo
            and t[1].lo > self.by[0].hi
            and t[1].hi < self.by[1].lo
        )

    def describe(self) -> dict:
        return {
            "id": self.id,
            "p": [list(c.to_decimal_strings()) for c in self.p],
            "frame": [
                [list(self.frame[i, j].to_decimal_strings()) for j in range(2)]
                for i in range(2)
            ],
            "box": {
                "x": [list(self.bx[0].to_decimal_strings()), list(self.bx[1].to_decimal_strings())],
                "y": [list(self.by[0].to_decimal_strings()), list(self.by[1].to_decimal_strings())],
            },
            "theta_half_pi": self.theta_half_pi,
        }


# ---------------------------------------------------------------------------
# structural transforms
# ---------------------------------------------------------------------------

def transpose(n: HSet) -> HSet:
    """Swap exit and entry roles: columns of the frame and box axes."""
    fr = IntervalMatrix(
        [[n.frame[0, 1], n.frame[0, 0]], [n.frame[1, 1], n.frame[1, 0]]]
    )
    return replace(n, id=f"{n.id}^T", frame=fr, bx=n.by, by=n.bx)


def apply_R_hset(n: HSet) -> HSet:
    """Mirror through the theta = pi/2 symmetry line.

    Base points declared to sit exactly on the line keep their stored
    enclosure (pi - pi/2 = pi/2 holds symbolically, so no width is added).
    """
    if n.theta_half_pi:
        p = n.p
    else:
        p = IntervalVector([PI - n.p[0], n.p[1]])
    fr = IntervalMatrix(
        [[-n.frame[0, 0], -n.frame[0, 1]], [n.frame[1, 0], n.frame[1, 1]]]
    )
    return replace(n, id=f"R({n.id})", p=p, frame=fr)


def mirror_transpose(n: HSet) -> HSet:
    out = transpose(apply_R_hset(n))
    return replace(out, id=f"R({n.id})^T")


def _ivs_equal(a: Interval, b: Interval) -> bool:
    return a.lo == b.lo and a.hi == b.hi


def _neg(a: Interval) -> Interval:
    return Interval(-a.hi, -a.lo)


def equals_exact(a: HSet, b: HSet) -> bool:
    """Structural equality up to the coordinate flips q -> (+-x, +-y).

    Flips preserve the support and the exit/entry edge pairs, so h-sets
    equal in this sense are interchangeable in covering chains.
    """
    if a.theta_half_pi != b.theta_half_pi:
        return False
    if not (_ivs_equal(a.p[0], b.p[0]) and _ivs_equal(a.p[1], b.p[1])):
        return False
    for fx in (1.0, -1.0):
        for fy in (1.0, -1.0):
            col_x = (a.frame[0, 0], a.frame[1, 0])
            col_y = (a.frame[0, 1], a.frame[1, 1])
            if fx < 0:
                col_x = (_neg(col_x[0]), _neg(col_x[1]))
            if fy < 0:
                col_y = (_neg(col_y[0]), _neg(col_y[1]))
            if not (
                _ivs_equal(col_x[0], b.frame[0, 0])
                and _ivs_equal(col_x[1], b.frame[1, 0])
                and _ivs_equal(col_y[0], b.frame[0, 1])
                and _ivs_equal(col_y[1], b.frame[1, 1])
            ):
                continue
            ax = a.bx if fx > 0 else (_neg(a.bx[1]), _neg(a.bx[0]))
            ay = a.by if fy > 0 else (_neg(a.by[1]), _neg(a.by[0]))
            if (
                _ivs_equal(ax[0], b.bx[0])
                and _ivs_equal(ax[1], b.bx[1])
                and _ivs_equal(ay[0], b.by[0])
                and _ivs_equal(ay[1], b.by[1])
            ):
                return True
    return False


def is_R_T_invariant(n: HSet) -> bool:
    """Whether R(N)^T = N holds exactly (symmetry-closure precondition)."""
    return equals_exact(mirror_transpose(n), n)


# ---------------------------------------------------------------------------
# covering certificates
# ---------------------------------------------------------------------------

@dataclass
class CoveringCertificate:
    source: str
    target: str
    iterate: int
    direction: str  # "forward" | "symmetry-derived"
    verified: bool
    orientation: int = 0  # +1: left edge exits low side; -1: reversed
    subdivision_depth: int = 0
    pieces: int = 0
    integrations: int = 0
    entry_bounds: list | None = None
    edge_bounds: dict | None = None
    margin: float | None = None
    failure: str | None = None
    derived_from: str | None = None
    settings: dict = field(default_factory=dict)

    def describe(self) -> dict:
        out = {
            "source": self.source,
            "target": self.target,
            "iterate": self.iterate,
            "direction": self.direction,
            "verified": self.verified,
            "orientation": self.orientation,
            "subdivision_depth": self.subdivision_depth,
            "pieces": self.pieces,
            "integrations": self.integrations,
        }
        if self.entry_bounds is not None:
            out["entry_bounds"] = self.entry_bounds
        if self.edge_bounds is not None:
            out["edge_bounds"] = self.edge_bounds
        if self.margin is not None:
            out["margin"] = self.margin
        if self.failure is not None:
            out["failure"] = self.failure
        if self.derived_from is not None:
            out["derived_from"] = self.derived_from
        return out


class _Budget:
    __slots__ = ("pieces", "max_depth", "evals")

    def __init__(self):
        self.pieces = 0
        self.max_depth = 0
        self.evals = 0


def _wind_reduce(theta: Interval, ref: float) -> Interval:
    n = round((theta.midpoint() - ref) / math.pi)
    if n == 0:
        return theta
    return theta - PI * float(n)


def check_covering(
    source: HSet,
    target: HSet,
    evaluator,
    max_depth: int = 12,
    iterate: int = 1,
    settings_snapshot: dict | None = None,
    wrap_theta: bool = False,
) -> CoveringCertificate:
    """Verify source => target under the evaluator's map (P^iterate).

    evaluator(source, qbox) must return (c, M): an affine enclosure
    image(q) in c + M*(q - mid)/rad over the sub-box qbox of [-1,1]^2.
    wrap_theta reduces the first image coordinate modulo pi into the
    target's branch (the section lives on R mod pi); leave it off for maps
    of the plain plane. A wrong branch choice can only fail the check,
    never falsely verify it.
    """
    cert = CoveringCertificate(
        source=source.id,
        target=target.id,
        iterate=iterate,
        direction="forward",
        verified=False,
        settings=dict(settings_snapshot or {}),
    )
    ainv = target.frame_inverse()
    ref_theta = target.p[0].midpoint()
    budget = _Budget()

    def frame_coords(qbox):
        c, mat = evaluator(source, qbox)
        budget.evals += 1
        theta = _wind_reduce(c[0], ref_theta) if wrap_theta else c[0]
        shifted = IntervalVector([theta - target.p[0], c[1] - target.p[1]])
        t_c = matvec(ainv, shifted)
        t_m = matmul(ainv, mat)
        bounds = []
        for i in range(2):
            acc = t_c[i].pair()
            for j in range(2):
                mg = t_m[i, j].mag()
                acc = rmath.iadd(acc, (-mg, mg))
            bounds.append(Interval.from_pair(acc))
        return bounds, t_m

    x_lo, x_hi = target.bx
    y_lo, y_hi = target.by

    def entry_ok(b):
        return b[1].hi < y_hi.lo and b[1].lo > y_lo.hi

    def entry_bad(b):
        return b[1].lo > y_hi.hi or b[1].hi < y_lo.lo

    def exit_side(b):
        if b[0].hi < x_lo.lo:
            return -1
        if b[0].lo > x_hi.hi:
            return 1
        return 0

    def exit_bad(b):
        # whole image strictly inside the exit extent: cannot ever verify
        return b[0].lo > x_lo.hi and b[0].hi < x_hi.lo

    hulls: dict[str, Interval | None] = {"entry": None, "left": None, "right": None}
    margins: list[float] = []

    def note(tag, b, comp):
        hulls[tag] = b[comp] if hulls[tag] is None else hulls[tag].hull(b[comp])

    def split(qbox, t_m, row):
        contrib = []
        for j in range(2):
            r = (qbox[j].hi - qbox[j].lo) * 0.5
            contrib.append(t_m[row, j].mag() * r)
        axis = 0 if contrib[0] >= contrib[1] else 1
        if qbox[axis].width <= 1e-10:
            axis = 1 - axis
        a, b = qbox[axis].lo, qbox[axis].hi
        m = 0.5 * (a + b)
        lo_box = list(qbox)
        hi_box = list(qbox)
        lo_box[axis] = Interval(a, m)
        hi_box[axis] = Interval(m, b)
        return tuple(lo_box), tuple(hi_box)

    def split_both(qbox):
        # no image information (integration gave up): split the wider axis
        axis = 0 if qbox[0].width >= qbox[1].width else 1
        a, b = qbox[axis].lo, qbox[axis].hi
        m = 0.5 * (a + b)
        lo_box = list(qbox)
        hi_box = list(qbox)
        lo_box[axis] = Interval(a, m)
        hi_box[axis] = Interval(m, b)
        return tuple(lo_box), tuple(hi_box)

    def run_entry(qbox, depth):
        budget.max_depth = max(budget.max_depth, depth)
        try:
            b, t_m = frame_coords(qbox)
        except (IntegrationBudgetError, StepSizeError) as exc:
            if depth >= max_depth:
                return False, f"integration gave up on {_fmt_box(qbox)}: {exc}"
            lo_box, hi_box = split_both(qbox)
            ok, msg = run_entry(lo_box, depth + 1)
            if not ok:
                return ok, msg
            return run_entry(hi_box, depth + 1)
        if entry_ok(b):
            note("entry", b, 1)
            budget.pieces += 1
            margins.append(min(y_hi.lo - b[1].hi, b[1].lo - y_lo.hi))
            return True, None
        if entry_bad(b):
            return False, f"entry violated on {_fmt_box(qbox)}: y={b[1].pair()}"
        if depth >= max_depth:
            return False, (
                f"entry undecided at depth {depth} on {_fmt_box(qbox)}: "
                f"y={b[1].pair()} vs ({y_lo.hi}, {y_hi.lo})"
            )
        lo_box, hi_box = split(qbox, t_m, 1)
        ok, msg = run_entry(lo_box, depth + 1)
        if not ok:
            return ok, msg
        return run_entry(hi_box, depth + 1)

    def run_edge(x_fixed, tag, depth, qy, want_side):
        budget.max_depth = max(budget.max_depth, depth)
        qbox = (Interval.point(x_fixed), qy)
        try:
            b, t_m = frame_coords(qbox)
        except (IntegrationBudgetError, StepSizeError) as exc:
            if depth >= max_depth:
                return False, f"integration gave up on edge {tag}: {exc}"
            m = 0.5 * (qy.lo + qy.hi)
            ok, msg = run_edge(x_fixed, tag, depth + 1, Interval(qy.lo, m), want_side)
            if not ok:
                return ok, msg
            return run_edge(x_fixed, tag, depth + 1, Interval(m, qy.hi), want_side)
        side = exit_side(b)
        if side != 0:
            if side != want_side:
                return False, (
                    f"exit edge {tag} landed on side {side}, expected {want_side}"
                )
            note(tag, b, 0)
            budget.pieces += 1
            if want_side > 0:
                margins.append(b[0].lo - x_hi.hi)
            else:
                margins.append(x_lo.lo - b[0].hi)
            return True, None
        if exit_bad(b):
            return False, f"exit edge {tag} maps inside the exit extent: x={b[0].pair()}"
        if depth >= max_depth:
            return False, (
                f"exit edge {tag} undecided at depth {depth}: x={b[0].pair()}"
            )
        m = 0.5 * (qy.lo + qy.hi)
        ok, msg = run_edge(x_fixed, tag, depth + 1, Interval(qy.lo, m), want_side)
        if not ok:
            return ok, msg
        return run_edge(x_fixed, tag, depth + 1, Interval(m, qy.hi), want_side)

    try:
        # probe edge midpoints to fix the expected orientation
        probe_l, _ = frame_coords((Interval.point(-1.0), Interval.point(0.0)))
        probe_r, _ = frame_coords((Interval.point(1.0), Interval.point(0.0)))
        side_l = exit_side(probe_l)
        side_r = exit_side(probe_r)
        if side_l == 0 or side_r == 0:
            cert.failure = "edge midpoint probes undecided; box too coarse"
            return _finish(cert, budget, hulls, margins)
        if side_l == side_r:
            cert.failure = f"both exit edges map to side {side_l} (degree 0)"
            return _finish(cert, budget, hulls, margins)
        cert.orientation = -side_l

        ok, msg = run_entry((Interval(-1.0, 1.0), Interval(-1.0, 1.0)), 0)
        if not ok:
            cert.failure = msg
            return _finish(cert, budget, hulls, margins)
        full_y = Interval(-1.0, 1.0)
        ok, msg = run_edge(-1.0, "left", 0, full_y, side_l)
        if not ok:
            cert.failure = msg
            return _finish(cert, budget, hulls, margins)
        ok, msg = run_edge(1.0, "right", 0, full_y, side_r)
        if not ok:
            cert.failure = msg
            return _finish(cert, budget, hulls, margins)
    except (IntegrationBudgetError, StepSizeError) as exc:
        cert.failure = f"integration failed: {exc}"
        return _finish(cert, budget, hulls, margins)

    cert.verified = True
    return _finish(cert, budget, hulls, margins)


def _fmt_box(qbox) -> str:
    return f"[{qbox[0].lo:.4f},{qbox[0].hi:.4f}]x[{qbox[1].lo:.4f},{qbox[1].hi:.4f}]"


def _finish(cert, budget, hulls, margins):
    cert.subdivision_depth = budget.max_depth
    cert.pieces = budget.pieces
    cert.integrations = budget.evals
    if hulls["entry"] is not None:
        cert.entry_bounds = list(hulls["entry"].pair())
    eb = {}
    for tag in ("left", "right"):
        if hulls[tag] is not None:
            eb[tag] = list(hulls[tag].pair())
    cert.edge_bounds = eb or None
    cert.margin = min(margins) if margins else None
    return cert


def derive_backcovering_by_symmetry(
    cert: CoveringCertificate, source: HSet, target: HSet
) -> tuple[CoveringCertificate, HSet, HSet]:
    """Transport a verified forward covering through the reversing symmetry.

    From source => target under P^k, emit the orbit-tracking back-covering
    edge from R(target)^T to R(source)^T. Pure bookkeeping: no integration
    is performed (the returned certificate records zero integrations).
    """
    if not cert.verified:
        raise ValueError("refusing to derive from an unverified certificate")
    if cert.direction != "forward":
        raise ValueError("derive only from forward certificates")
    new_src = mirror_transpose(target)
    new_tgt = mirror_transpose(source)
    out = CoveringCertificate(
        source=new_src.id,
        target=new_tgt.id,
        iterate=cert.iterate,
        direction="symmetry-derived",
        verified=True,
        orientation=cert.orientation,
        subdivision_depth=0,
        pieces=0,
        integrations=0,
        derived_from=f"{cert.source}=>{cert.target}",
        settings=dict(cert.settings),
    )
    return out, new_src, new_tgt


# ---------------------------------------------------------------------------
# evaluators
# ---------------------------------------------------------------------------

class PoincareEvaluator:
    """Adapter: evaluates P^k over h-set pieces via the rigorous return map.

    Results are memoized per (set id, sub-box); relations sharing a source
    reuse the identical enclosures (purely functional, so the cache never
    changes results).
    """

    def __init__(self, return_map, k: int):
        self.rm = return_map
        self.k = k
        self._memo: dict = {}
        self.cache_hits = 0

    def __call__(self, source: HSet, qbox):
        key = (source.id, qbox[0].lo, qbox[0].hi, qbox[1].lo, qbox[1].hi)
        hit = self._memo.get(key)
        if hit is not None:
            self.cache_hits += 1
            return hit
        mids = [0.5 * (q.lo + q.hi) for q in qbox]
        rads = [0.5 * (q.hi - q.lo) for q in qbox]
        sc = source.source_center()
        sf = source.source_frame()
        center = IntervalVector(
            [
                sc[i] + sf[i, 0] * mids[0] + sf[i, 1] * mids[1]
                for i in range(2)
            ]
        )
        frame = IntervalMatrix(
            [[sf[i, 0] * rads[0], sf[i, 1] * rads[1]] for i in range(2)]
        )
        img = self.rm.image_affine(center, frame, self.k)
        out = (img.center, img.matrix)
        self._memo[key] = out
        return out


class LinearEvaluator:
    """Affine toy map z -> B z + offset for oracle-equivalence tests."""

    def __init__(self, b: IntervalMatrix, offset: IntervalVector):
        self.b = b
        self.offset = offset

    def __call__(self, source: HSet, qbox):
        mids = [0.5 * (q.lo + q.hi) for q in qbox]
        rads = [0.5 * (q.hi - q.lo) for q in qbox]
        sc = source.source_center()
        sf = source.source_frame()
        center = IntervalVector(
            [sc[i] + sf[i, 0] * mids[0] + sf[i, 1] * mids[1] for i in range(2)]
        )
        frame = IntervalMatrix(
            [[sf[i, 0] * rads[0], sf[i, 1] * rads[1]] for i in range(2)]
        )
        c = matvec(self.b, center) + self.offset
        m = matmul(self.b, frame)
        return c, m


# ---------------------------------------------------------------------------
# declarative table parsing
# ---------------------------------------------------------------------------

def _parse_base_point(token: str) -> tuple[IntervalVector, bool]:
    token = token.strip()
    if token in STATIONARY:
        return (
            IntervalVector([PI * 0.5, STATIONARY[token]]),
            True,
        )
    if token.startswith("(") and token.endswith(")"):
        a, b = token[1:-1].split(";")
        return (
            IntervalVector([Interval.parse(a.strip()), Interval.parse(b.strip())]),
            False,
        )
    raise ValueError(f"unparseable base point {token!r}")


def _parse_frame(token: str) -> IntervalMatrix:
    token = token.strip()
    if token in FRAMES:
        return FRAMES[token]
    if token.endswith("sym") and token[:-3] in FRAMES:
        return symmetrized_frame(token[:-3])
    if token.startswith("[["):
        rows = token[2:-2].split("],[")
        rr = []
        for row in rows:
            a, b = row.split(",")
            rr.append([Interval.parse(a.strip()), Interval.parse(b.strip())])
        return IntervalMatrix(rr)
    raise ValueError(f"unparseable frame {token!r}")


def _parse_box_axis(token: str) -> tuple[Interval, Interval]:
    lo_s, hi_s = token.strip()[1:-1].split(",")
    lo = _scaled_endpoint(lo_s)
    hi = _scaled_endpoint(hi_s)
    return lo, hi


def _scaled_endpoint(s: str) -> Interval:
    d = Decimal(s.strip()) * _SCALE
    return Interval.parse(format(d, "f"))


def parse_hset_line(tokens: dict[str, str], set_id: str) -> HSet:
    p, half_pi = _parse_base_point(tokens["p"])
    frame = _parse_frame(tokens["frame"])
    bx_s, by_s = tokens["b"].split("x")
    bx = _parse_box_axis(bx_s)
    by = _parse_box_axis(by_s)
    return HSet(id=set_id, p=p, frame=frame, bx=bx, by=by, theta_half_pi=half_pi)
