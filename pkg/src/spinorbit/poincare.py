"""Rigorous return map to the section {f = 0 mod 2*pi}.

f is strictly increasing along every trajectory, with a global rate bound
0 < fdot_min <= f' <= fdot_max (fdot = K3*(1+e cos f)^2). The k-th return
of a set X is therefore reached exactly when unwrapped f passes 2*pi*k, and
each point crosses exactly once. The driver:

  1. integrates the Lohner set until the center is one step away from the
     section, then lands the center on f = 2*pi*k by solving the center's
     Taylor polynomial for the step size (float Newton; accuracy only
     affects tightness, never soundness);
  2. bounds every individual crossing time around the landing time tau by
     |t(x) - tau| <= |f(tau, x) - 2*pi*k| / fdot_min =: delta, a consequence
     of global monotonicity, and validates rough enclosures Z of the set
     over [tau - delta, tau + delta] in both time directions;
  3. transports the set onto the section with the mean-value correction
     along the flow direction,

         P_i(x) = x_i(tau) - sgn * w_i * (sgn*f(tau, x) - 2*pi*k),
         w = field(Z) / field_f(Z),

     applied to the affine pieces of the doubleton, which preserves the
     correlation between the section defect and the transported coordinates
     (taking hulls first would square the width);
  4. refines the crossing-time interval by a Newton step on
     g(t) = sgn*f(t) - 2*pi*k using the rate enclosure on Z (two passes;
     the second is idempotent with the same enclosures and kept for the
     contract).

Output is affine: image(q) in center + matrix * q for q in [-1,1]^2, the
normalized coordinates of the source parallelogram. Derivatives (optional)
come from the monodromy doubleton projected onto the section:

    DP = [DPhi - w * (f-row of DPhi)] restricted to (theta, phi) rows/cols.

theta is returned unwrapped; callers reduce mod pi when testing membership.
direction=-1 evaluates the time-reversed map (P^{-1}); shipped proofs never
need it (backward information comes from the reversing symmetry), but it
backs the symmetry consistency diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import kernels, rmath
from .errors import IntegrationBudgetError, StepSizeError
from .integrator import (
    C1FlowEnclosure,
    FlowEnclosure,
    Settings,
    _variational_rough,
    propose_h,
    rough_enclosure,
    step,
)
from .interval import Interval, TWO_PI
from .linalg import IntervalMatrix, IntervalVector, matmul, matvec
from .model import ModelParams, apply_R, vector_field


@dataclass(frozen=True)
class SectionImage:
    """Affine enclosure of P^k over a parallelogram of section states.

    image(q) is contained in center + matrix*q for every normalized
    coordinate q in [-1,1]^2 of the source parallelogram. ``center``
    already includes all residual slack; the split pieces satisfy
    center = center_core + res_frame * res_vec and let callers apply a
    contracting matrix to the residual before hulling (the interval Newton
    operator needs this to divide the unstable-direction slack).
    """

    center: IntervalVector
    matrix: IntervalMatrix
    time: Interval
    iterate: int
    derivative: IntervalMatrix | None = None
    center_core: IntervalVector | None = None
    res_frame: IntervalMatrix | None = None
    res_vec: IntervalVector | None = None

    def hull(self) -> IntervalVector:
        out = []
        for i in range(2):
            acc = self.center[i].pair()
            for j in range(2):
                m = self.matrix[i, j]
                acc = rmath.iadd(acc, (-m.mag(), m.mag()))
            out.append(Interval.from_pair(acc))
        return IntervalVector(out)


@dataclass(frozen=True)
class SectionCrossing:
    """Hull form of a verified k-th return: time, state, optional DP^k."""

    time: Interval
    state: IntervalVector
    derivative: IntervalMatrix | None = None


class ReturnMap:
    """P^k evaluator for fixed parameters/settings; counts its integrations."""

    def __init__(
        self,
        params: ModelParams,
        settings: Settings,
        direction: int = 1,
    ):
        if direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")
        self.params = params
        self.settings = settings
        self.direction = direction
        self.steps_taken = 0
        self.map_calls = 0
        # rigorous global fdot range: K3 * [ (1-e)^2, (1+e)^2 ]
        e = params.e
        lo = params.k3 * (Interval.point(1.0) - e).pow_int(2)
        hi = params.k3 * (Interval.point(1.0) + e).pow_int(2)
        self._fdot_min = lo.lo
        self._fdot_max = hi.hi
        if self._fdot_min <= 0.0:
            raise IntegrationBudgetError("f-rate lower bound not positive")

    # -- core driver --------------------------------------------------------

    def image_affine(
        self,
        center: IntervalVector,
        frame: IntervalMatrix,
        k: int,
        want_derivative: bool = False,
    ) -> SectionImage:
        """Affine image of {center + frame*q : q in [-1,1]^2} under P^k."""
        if k < 1:
            raise ValueError("k >= 1 required")
        self.map_calls += 1
        st = self.settings
        params = self.params
        sgn = float(self.direction)

        center3 = IntervalVector([center[0], center[1], Interval.point(0.0)])
        zero = Interval.point(0.0)
        frame3 = IntervalMatrix(
            [
                [frame[0, 0], frame[0, 1], zero],
                [frame[1, 0], frame[1, 1], zero],
                [zero, zero, zero],
            ]
        )
        box3 = IntervalVector.box([(-1.0, 1.0), (-1.0, 1.0), (0.0, 0.0)])
        enc: FlowEnclosure | C1FlowEnclosure = FlowEnclosure.from_affine(
            center3, frame3, box3
        )
        if want_derivative:
            enc = C1FlowEnclosure(base=enc)

        target = TWO_PI * float(k)  # progress target, gamma = sgn*f
        target_mid = k * (math.pi + math.pi)
        pk = params.kernel_pack(sgn)

        h = st.h_init
        landed = False
        for _ in range(st.max_steps):
            base = enc.base if want_derivative else enc
            bbox = base.hull()
            if max(bbox[0].width, bbox[1].width) > st.blowup_width:
                raise IntegrationBudgetError(
                    "propagated set exceeded the blow-up width; subdivide the box"
                )
            m = base.center
            rate = _series_rate(m, pk)
            t_rem = (target_mid - sgn * m[2]) / rate
            if t_rem <= st.h_min:
                # already on (or numerically past) the section: transport as is
                landed = True
                break
            if t_rem <= 1.25 * min(h, st.h_max):
                h_land = _solve_landing(m, pk, target_mid, t_rem, st.order)
                if h_land is not None and 0.0 < h_land <= 1.6 * min(h, st.h_max):
                    try:
                        res = step(enc, h_land, params, st, sign=sgn)
                        enc = res.enclosure
                        self.steps_taken += 1
                        landed = True
                        break
                    except StepSizeError:
                        pass  # fall through to a normal shorter step
            h_try = min(h, max(0.9 * t_rem, st.h_min))
            try:
                res = step(enc, h_try, params, st, sign=sgn)
            except StepSizeError:
                h = h_try / 2.0
                if h < st.h_min:
                    raise IntegrationBudgetError(
                        "step size collapsed before the section"
                    )
                continue
            enc = res.enclosure
            self.steps_taken += 1
            h = propose_h(res.err_estimate, h_try, st)
        if not landed:
            raise IntegrationBudgetError(
                f"section not reached in {st.max_steps} steps"
            )
        return self._transport(enc, k, target, want_derivative)

    def _transport(
        self, enc, k: int, target: Interval, want_derivative: bool
    ) -> SectionImage:
        st = self.settings
        params = self.params
        sgn = float(self.direction)
        base = enc.base if want_derivative else enc
        bbox = base.hull()

        g_at_tau = bbox[2] * sgn - target
        delta = rmath.div_up(g_at_tau.mag(), self._fdot_min) + 1e-15
        z_fwd = rough_enclosure(bbox, delta, params, st, sign=sgn)
        z_bwd = rough_enclosure(bbox, delta, params, st, sign=-sgn)
        zone = z_fwd.hull(z_bwd)

        fz = vector_field(zone, params)
        gdot = fz[2]
        if gdot.lo <= 0.0:
            raise IntegrationBudgetError("f-rate not strictly positive on window")
        w = [fz[i] / gdot for i in range(3)]  # w[2] contains exactly 1

        # crossing-time refinement: t(x) - tau = -g(x)/gdot(xi)
        t_rel = Interval(-delta, delta)
        for _ in range(2):
            cand = -(g_at_tau / gdot)
            nxt = cand.intersect(t_rel)
            if nxt is None:
                raise IntegrationBudgetError("crossing-time refinement emptied")
            t_rel = nxt
        time_abs = base.time + t_rel

        # section transport of the affine pieces; sgn cancels in the matrix
        # and residual terms (gamma rows carry sgn, correction carries sgn)
        m = base.center
        defect = (Interval.point(m[2]) * sgn) - target
        c_img = [Interval.point(m[i]) - (w[i] * defect) * sgn for i in range(2)]
        mat_rows = []
        for i in range(2):
            row = []
            for j in range(2):
                cij = Interval.point(base.init_frame[i][j])
                cfj = Interval.point(base.init_frame[2][j])
                row.append(cij - w[i] * cfj)
            mat_rows.append(row)
        res_frame = IntervalMatrix(
            [
                [
                    Interval.point(base.basis[i][j]) - w[i] * Interval.point(base.basis[2][j])
                    for j in range(3)
                ]
                for i in range(2)
            ]
        )
        err = matvec(res_frame, base.residual)
        center_out = IntervalVector([c_img[0] + err[0], c_img[1] + err[1]])
        matrix_out = IntervalMatrix(mat_rows)

        # consistency: transported gamma must meet the target
        gval = Interval.point(m[2])
        for j in range(3):
            gval = gval + Interval.point(base.init_frame[2][j]) * base.init_box[j]
            gval = gval + Interval.point(base.basis[2][j]) * base.residual[j]
        gval = gval * sgn
        p_gamma = gval - w[2] * (gval - target)
        if p_gamma.intersect(target) is None:
            raise IntegrationBudgetError("section transport lost the target")

        deriv = None
        if want_derivative:
            dmid = enc.dphi()
            wlo, whi = _variational_rough(zone, delta, params)
            wc = IntervalMatrix(
                [
                    [Interval(wlo[3 * i + j], whi[3 * i + j]) for j in range(3)]
                    for i in range(3)
                ]
            )
            g_full = matmul(wc, dmid)
            deriv = IntervalMatrix(
                [
                    [g_full[i, j] - w[i] * g_full[2, j] for j in range(2)]
                    for i in range(2)
                ]
            )

        return SectionImage(
            center=center_out,
            matrix=matrix_out,
            time=time_abs,
            iterate=k,
            derivative=deriv,
            center_core=IntervalVector(c_img),
            res_frame=res_frame,
            res_vec=base.residual,
        )

    # -- hull-level operations ---------------------------------------------

    def poincare_map(
        self, box: IntervalVector, k: int, want_derivative: bool = False
    ) -> SectionCrossing:
        """Enclosure of P^k over an axis-aligned box of section states."""
        mid = [box[0].midpoint(), box[1].midpoint()]
        rad = [
            max(
                rmath.sub_up(box[i].hi, mid[i]),
                rmath.sub_up(mid[i], box[i].lo),
                0.0,
            )
            for i in range(2)
        ]
        center = IntervalVector.from_floats(mid)
        frame = IntervalMatrix.from_floats([[rad[0], 0.0], [0.0, rad[1]]])
        img = self.image_affine(center, frame, k, want_derivative=want_derivative)
        return SectionCrossing(
            time=img.time, state=img.hull(), derivative=img.derivative
        )

    def d_poincare(self, box: IntervalVector, k: int) -> IntervalMatrix:
        """DP^k enclosure valid for every point of the box."""
        return self.poincare_map(box, k, want_derivative=True).derivative

    def symmetry_check(self, box: IntervalVector, k: int = 1) -> dict:
        """Diagnostic: P(R(x)) and R(P^{-1}(x)) enclosures must intersect.

        Not a proof step; reports interval consistency of the reversing
        symmetry on a sample box.
        """
        fwd = ReturnMap(self.params, self.settings, direction=1)
        bwd = ReturnMap(self.params, self.settings, direction=-1)
        lhs = fwd.poincare_map(apply_R(box), k).state
        rhs = apply_R(bwd.poincare_map(box, k).state)
        from .interval import PI

        shift = round((lhs[0].midpoint() - rhs[0].midpoint()) / rmath.PI[0])
        rhs_theta = rhs[0] + PI * float(shift)
        ok = (
            lhs[0].intersect(rhs_theta) is not None
            and lhs[1].intersect(rhs[1]) is not None
        )
        return {
            "consistent": ok,
            "forward_of_mirror": [c.pair() for c in lhs],
            "mirror_of_backward": [rhs_theta.pair(), rhs[1].pair()],
        }


# ---------------------------------------------------------------------------
# landing helpers (float-only; affect tightness, never soundness)
# ---------------------------------------------------------------------------

def _series_rate(m, pk) -> float:
    """Float estimate of the progress rate at a point state."""
    e = 0.5 * (pk[0] + pk[1])
    k3 = 0.5 * (pk[4] + pk[5])
    u = 1.0 + e * math.cos(m[2])
    return max(k3 * u * u, 1e-12)


def _solve_landing(m, pk, target_mid: float, t_guess: float, order: int):
    """Step size landing the center's progress on the target (float Newton)."""
    m6 = (m[0], m[0], m[1], m[1], m[2], m[2])
    n = min(order, 14)
    rows = kernels.state_series(m6, n, pk)
    sgn = 1.0 if pk[6] > 0 else -1.0
    coeffs = [sgn * 0.5 * (r[4] + r[5]) for r in rows]
    h = max(t_guess, 0.0)
    for _ in range(8):
        val = coeffs[n]
        der = 0.0
        for i in range(n - 1, -1, -1):
            der = der * h + val
            val = val * h + coeffs[i]
        if der <= 0.0:
            return None
        h_new = h - (val - target_mid) / der
        if not math.isfinite(h_new) or h_new <= 0.0:
            return None
        if abs(h_new - h) < 1e-15 * max(1.0, h):
            return h_new
        h = h_new
    return h
