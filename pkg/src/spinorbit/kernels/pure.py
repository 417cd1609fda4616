"""Pure-Python Taylor-coefficient kernel for the rotation system.

Generates rigorous enclosures of time-Taylor coefficients of the solution
(and optionally of the variational matrix) through an interval state. All
auxiliary quantities are polynomial in the state trig series, so the
recurrences below use only +, *, and division by the order index:

    state series    TH, PH, F      (theta, phi, f)
    aux series      S  = sin f,  C  = cos f
                    S2 = sin 2(theta - f),  C2 = cos 2(theta - f)
                    U  = 1 + e C,  U2 = U*U,  U3 = U2*U,  U3S2 = U3*S2
    recurrences     TH' = sgn PH
                    PH' = -sgn K2 U3S2
                    F'  = sgn K3 U2

with K2 = w2/(2(1-e^2)^3), K3 = (1-e^2)^(-3/2), and sgn = -1 selecting the
time-reversed field. The variational series propagates V' = sgn A(t) V with
the nonzero Jacobian entries

    a12 = 1
    a21 = -2 K2 U3*C2
    a23 = -a21 + 3 e K2 U2*S*S2
    a33 = -2 e K3 U*S.

Interval endpoints are (lo, hi) float pairs with the shared directed-rounding
semantics of :mod:`spinorbit.rmath`. The compiled kernel mirrors this module
operation for operation; both produce identical bits.
"""

from __future__ import annotations

from ..rmath import (
    div_down,
    div_up,
    iadd,
    icos,
    imul,
    ineg,
    isin,
    isub,
    mul_down,
    mul_up,
)

ZERO = (0.0, 0.0)
ONE = (1.0, 1.0)


def _scale(a, w: float):
    # w > 0 exact small integer weight
    return mul_down(a[0], w), mul_up(a[1], w)


def _div(a, d: float):
    # d > 0
    return div_down(a[0], d), div_up(a[1], d)


def _series_core(x, n: int, pk, want_var: bool, v0=None):
    e = (pk[0], pk[1])
    k2 = (pk[2], pk[3])
    k3 = (pk[4], pk[5])
    neg = pk[6] < 0.0

    th = [(x[0], x[1])]
    ph = [(x[2], x[3])]
    f = [(x[4], x[5])]

    s = [isin(f[0])]
    c = [icos(f[0])]
    ps = [_scale(isub(th[0], f[0]), 2.0)]
    s2 = [isin(ps[0])]
    c2 = [icos(ps[0])]
    u = [iadd(ONE, imul(e, c[0]))]
    u2 = [imul(u[0], u[0])]
    u3 = [imul(u2[0], u[0])]
    u3s2 = [imul(u3[0], s2[0])]

    if want_var:
        # extra aux series for the Jacobian entries
        u3c2 = [imul(u3[0], c2[0])]
        t1 = [imul(u2[0], s[0])]
        t2 = [imul(t1[0], s2[0])]
        us = [imul(u[0], s[0])]
        vout = [[(v0[0][i], v0[1][i]) for i in range(9)]]

    for m in range(n):
        d = float(m + 1)
        # state coefficients of order m+1
        th_n = _div(ph[m], d)
        ph_n = ineg(_div(imul(k2, u3s2[m]), d))
        f_n = _div(imul(k3, u2[m]), d)
        if neg:
            th_n = ineg(th_n)
            ph_n = ineg(ph_n)
            f_n = ineg(f_n)
        th.append(th_n)
        ph.append(ph_n)
        f.append(f_n)
        ps.append(_scale(isub(th_n, f_n), 2.0))

        # trig series: s' = c f', c' = -s f' (and the psi pair alike)
        acc_s = ZERO
        acc_c = ZERO
        acc_s2 = ZERO
        acc_c2 = ZERO
        for j in range(m + 1):
            w = float(m + 1 - j)
            fw = _scale(f[m + 1 - j], w)
            acc_s = iadd(acc_s, imul(c[j], fw))
            acc_c = iadd(acc_c, imul(s[j], fw))
            pw = _scale(ps[m + 1 - j], w)
            acc_s2 = iadd(acc_s2, imul(c2[j], pw))
            acc_c2 = iadd(acc_c2, imul(s2[j], pw))
        s.append(_div(acc_s, d))
        c.append(ineg(_div(acc_c, d)))
        s2.append(_div(acc_s2, d))
        c2.append(ineg(_div(acc_c2, d)))

        u.append(imul(e, c[m + 1]))

        acc = ZERO
        for j in range(m + 2):
            acc = iadd(acc, imul(u[j], u[m + 1 - j]))
        u2.append(acc)
        acc = ZERO
        for j in range(m + 2):
            acc = iadd(acc, imul(u2[j], u[m + 1 - j]))
        u3.append(acc)
        acc = ZERO
        for j in range(m + 2):
            acc = iadd(acc, imul(u3[j], s2[m + 1 - j]))
        u3s2.append(acc)

        if want_var:
            acc = ZERO
            for j in range(m + 2):
                acc = iadd(acc, imul(u3[j], c2[m + 1 - j]))
            u3c2.append(acc)
            acc = ZERO
            for j in range(m + 2):
                acc = iadd(acc, imul(u2[j], s[m + 1 - j]))
            t1.append(acc)
            acc = ZERO
            for j in range(m + 2):
                acc = iadd(acc, imul(t1[j], s2[m + 1 - j]))
            t2.append(acc)
            acc = ZERO
            for j in range(m + 2):
                acc = iadd(acc, imul(u[j], s[m + 1 - j]))
            us.append(acc)

            # V_{m+1} = (1/(m+1)) sum_j A_j V_{m-j}; A row 1 is e_2 at j=0
            rows = list(vout[m][3:6])
            if neg:
                rows = [ineg(r) for r in rows]
            rows = rows + [ZERO] * 6  # rows[0:3] done; 3:6 row phi'; 6:9 row f'
            for j in range(m + 1):
                vj = vout[m - j]
                p21 = _scale(imul(k2, u3c2[j]), 2.0)
                p23x = _scale(imul(imul(e, k2), t2[j]), 3.0)
                p33 = _scale(imul(imul(e, k3), us[j]), 2.0)
                a21 = ineg(p21)
                a23 = iadd(p21, p23x)
                a33 = ineg(p33)
                if neg:
                    a21, a23, a33 = p21, ineg(a23), p33
                for col in range(3):
                    rows[3 + col] = iadd(
                        rows[3 + col],
                        iadd(imul(a21, vj[col]), imul(a23, vj[6 + col])),
                    )
                    rows[6 + col] = iadd(rows[6 + col], imul(a33, vj[6 + col]))
            vout.append([_div(r, d) for r in rows])

    coeffs = [
        (th[i][0], th[i][1], ph[i][0], ph[i][1], f[i][0], f[i][1])
        for i in range(n + 1)
    ]
    if not want_var:
        return coeffs
    var = [(tuple(p[0] for p in vr), tuple(p[1] for p in vr)) for vr in vout]
    return coeffs, var


def state_series(x, n: int, pk):
    """Coefficient enclosures of orders 0..n through the interval state x.

    x is (tlo, thi, plo, phi, flo, fhi); pk is ModelParams.kernel_pack().
    Returns a list of 6-tuples in the same endpoint layout.
    """
    return _series_core(x, n, pk, want_var=False)


def var_series(x, v0, n: int, pk):
    """State series plus variational-matrix coefficient enclosures.

    v0 is a pair (lo9, hi9) of row-major 3x3 endpoint tuples for the order-0
    matrix. Returns (state_coeffs, var_coeffs) with var_coeffs a list of
    (lo9, hi9) pairs.
    """
    return _series_core(x, n, pk, want_var=True, v0=v0)
