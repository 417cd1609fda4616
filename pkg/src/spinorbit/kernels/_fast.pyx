# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Taylor-coefficient kernel.

Mirrors :mod:`spinorbit.kernels.pure` operation for operation: the same
directed-rounding primitives (TwoSum / Dekker product tightened, nextafter
nudged), the same reduced-argument sine/cosine with constants imported from
:mod:`spinorbit.rmath` at module load, and the same recurrence evaluation
order. Both backends produce identical bits; tests assert it.
"""

from libc.math cimport nextafter, floor, ceil, fabs, isfinite

from .. import rmath as _rm

cdef double INF = float("inf")
cdef double SPLIT = 134217729.0
cdef double GUARD_LO = 1e-140
cdef double GUARD_HI = 1e140

# constants shared with the Python implementation
cdef double HP_MAIN = _rm._HP_MAIN
cdef double HP_RES_LO = _rm._HP_RES[0]
cdef double HP_RES_HI = _rm._HP_RES[1]
cdef double TWO_PI_LO = _rm.TWO_PI[0]
cdef double SIN_TAIL = _rm._SIN_TAIL
cdef double COS_TAIL = _rm._COS_TAIL
cdef double PI_F = 3.141592653589793

cdef double FACT_LO[23]
cdef double FACT_HI[23]
for _k in range(23):
    FACT_LO[_k] = _rm._FACT_INV[_k][0]
    FACT_HI[_k] = _rm._FACT_INV[_k][1]

cdef enum:
    MAXN = 66  # supports order <= 64 plus the remainder row


# ---------------------------------------------------------------------------
# directed-rounding primitives (see rmath for the soundness contract)
# ---------------------------------------------------------------------------

cdef inline double add_down(double a, double b) noexcept:
    cdef double s = a + b
    cdef double bp = s - a
    cdef double e = (a - (s - bp)) + (b - bp)
    if e >= 0.0:
        return s
    return nextafter(s, -INF)

cdef inline double add_up(double a, double b) noexcept:
    cdef double s = a + b
    cdef double bp = s - a
    cdef double e = (a - (s - bp)) + (b - bp)
    if e <= 0.0:
        return s
    return nextafter(s, INF)

cdef inline bint _guarded(double a, double b) noexcept:
    cdef double aa = fabs(a)
    cdef double ab = fabs(b)
    if aa != 0.0 and (aa <= GUARD_LO or aa >= GUARD_HI):
        return 0
    if ab != 0.0 and (ab <= GUARD_LO or ab >= GUARD_HI):
        return 0
    return 1

cdef inline double _prod_err(double a, double b, double p) noexcept:
    cdef double ca = SPLIT * a
    cdef double ahi = ca - (ca - a)
    cdef double alo = a - ahi
    cdef double cb = SPLIT * b
    cdef double bhi = cb - (cb - b)
    cdef double blo = b - bhi
    return ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo

cdef inline double mul_down(double a, double b) noexcept:
    cdef double p = a * b
    if not _guarded(a, b):
        return nextafter(p, -INF)
    if _prod_err(a, b, p) >= 0.0:
        return p
    return nextafter(p, -INF)

cdef inline double mul_up(double a, double b) noexcept:
    cdef double p = a * b
    if not _guarded(a, b):
        return nextafter(p, INF)
    if _prod_err(a, b, p) <= 0.0:
        return p
    return nextafter(p, INF)

cdef inline int _div_err_sign(double q, double a, double b) noexcept:
    # sign of (q - a/b); 0 exact; 2 undecided
    cdef double t, e, r, d1, d
    if not _guarded(q, b):
        return 2
    t = q * b
    e = _prod_err(q, b, t)
    if t == 0.0 and a == 0.0:
        d = e
    else:
        if a == 0.0 or t == 0.0 or ((t > 0.0) != (a > 0.0)):
            return 2
        r = t / a
        if r < 0.5 or r > 2.0:
            return 2
        d1 = t - a
        if d1 == 0.0:
            d = e
        elif fabs(d1) > 2.0 * fabs(e):
            d = d1
        else:
            return 2
    if d == 0.0:
        return 0
    if (d > 0.0) == (b > 0.0):
        return 1
    return -1

cdef inline double div_down(double a, double b) noexcept:
    cdef double q = a / b
    cdef int s = _div_err_sign(q, a, b)
    if s == 0 or s == -1:
        return q
    return nextafter(q, -INF)

cdef inline double div_up(double a, double b) noexcept:
    cdef double q = a / b
    cdef int s = _div_err_sign(q, a, b)
    if s == 0 or s == 1:
        return q
    return nextafter(q, INF)


# pair ops on (lo, hi) passed via pointers-by-value style helpers

cdef inline void p_add(double alo, double ahi, double blo, double bhi,
                       double* rlo, double* rhi) noexcept:
    rlo[0] = add_down(alo, blo)
    rhi[0] = add_up(ahi, bhi)

cdef inline void p_sub(double alo, double ahi, double blo, double bhi,
                       double* rlo, double* rhi) noexcept:
    rlo[0] = add_down(alo, -bhi)
    rhi[0] = add_up(ahi, -blo)

cdef inline void p_mul(double alo, double ahi, double blo, double bhi,
                       double* rlo, double* rhi) noexcept:
    cdef double l1 = mul_down(alo, blo)
    cdef double l2 = mul_down(alo, bhi)
    cdef double l3 = mul_down(ahi, blo)
    cdef double l4 = mul_down(ahi, bhi)
    cdef double u1 = mul_up(alo, blo)
    cdef double u2 = mul_up(alo, bhi)
    cdef double u3 = mul_up(ahi, blo)
    cdef double u4 = mul_up(ahi, bhi)
    cdef double lo = l1
    if l2 < lo: lo = l2
    if l3 < lo: lo = l3
    if l4 < lo: lo = l4
    cdef double hi = u1
    if u2 > hi: hi = u2
    if u3 > hi: hi = u3
    if u4 > hi: hi = u4
    rlo[0] = lo
    rhi[0] = hi

cdef inline void p_scale(double alo, double ahi, double w,
                         double* rlo, double* rhi) noexcept:
    # w > 0
    rlo[0] = mul_down(alo, w)
    rhi[0] = mul_up(ahi, w)

cdef inline void p_div_pos(double alo, double ahi, double d,
                           double* rlo, double* rhi) noexcept:
    # d > 0
    rlo[0] = div_down(alo, d)
    rhi[0] = div_up(ahi, d)


# ---------------------------------------------------------------------------
# sine / cosine, mirroring rmath
# ---------------------------------------------------------------------------

cdef void _sin_core(double ylo, double yhi, double* rlo, double* rhi) noexcept:
    cdef double zlo, zhi, alo, ahi, clo, chi
    cdef int k
    if ylo == 0.0 and yhi == 0.0:
        rlo[0] = 0.0
        rhi[0] = 0.0
        return
    p_mul(ylo, yhi, ylo, yhi, &zlo, &zhi)
    alo = 0.0
    ahi = 0.0
    for k in range(9, -1, -1):
        clo = FACT_LO[2 * k + 1]
        chi = FACT_HI[2 * k + 1]
        if k % 2 == 1:
            clo, chi = -chi, -clo
        p_mul(zlo, zhi, alo, ahi, &alo, &ahi)
        p_add(clo, chi, alo, ahi, &alo, &ahi)
    p_mul(ylo, yhi, alo, ahi, &alo, &ahi)
    rlo[0] = add_down(alo, -SIN_TAIL)
    rhi[0] = add_up(ahi, SIN_TAIL)

cdef void _cos_core(double ylo, double yhi, double* rlo, double* rhi) noexcept:
    cdef double zlo, zhi, alo, ahi, clo, chi
    cdef int k
    if ylo == 0.0 and yhi == 0.0:
        rlo[0] = 1.0
        rhi[0] = 1.0
        return
    p_mul(ylo, yhi, ylo, yhi, &zlo, &zhi)
    alo = 0.0
    ahi = 0.0
    for k in range(10, -1, -1):
        clo = FACT_LO[2 * k]
        chi = FACT_HI[2 * k]
        if k % 2 == 1:
            clo, chi = -chi, -clo
        p_mul(zlo, zhi, alo, ahi, &alo, &ahi)
        p_add(clo, chi, alo, ahi, &alo, &ahi)
    rlo[0] = add_down(alo, -COS_TAIL)
    rhi[0] = add_up(ahi, COS_TAIL)

cdef long _reduce(double a, double* ylo, double* yhi) noexcept:
    # a = n*(pi/2) + y; returns n, writes y enclosure
    cdef long n = <long>floor(a / HP_MAIN + 0.5)
    cdef double nf = <double>n
    cdef double plo = mul_down(nf, HP_MAIN)
    cdef double phi = mul_up(nf, HP_MAIN)
    cdef double t1lo, t1hi, t2lo, t2hi
    p_sub(a, a, plo, phi, &t1lo, &t1hi)
    p_mul(nf, nf, HP_RES_LO, HP_RES_HI, &t2lo, &t2hi)
    p_sub(t1lo, t1hi, t2lo, t2hi, ylo, yhi)
    return n

cdef void _sin_pt(double a, double* rlo, double* rhi) noexcept:
    cdef double ylo, yhi
    cdef long n, q
    if fabs(a) > 1e9:
        rlo[0] = -1.0
        rhi[0] = 1.0
        return
    n = _reduce(a, &ylo, &yhi)
    if ylo < -0.7855 or yhi > 0.7855:
        rlo[0] = -1.0
        rhi[0] = 1.0
        return
    q = n & 3
    if q == 0:
        _sin_core(ylo, yhi, rlo, rhi)
    elif q == 1:
        _cos_core(ylo, yhi, rlo, rhi)
    elif q == 2:
        _sin_core(ylo, yhi, rlo, rhi)
        ylo = rlo[0]
        rlo[0] = -rhi[0]
        rhi[0] = -ylo
    else:
        _cos_core(ylo, yhi, rlo, rhi)
        ylo = rlo[0]
        rlo[0] = -rhi[0]
        rhi[0] = -ylo
    if rlo[0] < -1.0: rlo[0] = -1.0
    if rhi[0] > 1.0: rhi[0] = 1.0

cdef void _cos_pt(double a, double* rlo, double* rhi) noexcept:
    cdef double ylo, yhi
    cdef long n, q
    if fabs(a) > 1e9:
        rlo[0] = -1.0
        rhi[0] = 1.0
        return
    n = _reduce(a, &ylo, &yhi)
    if ylo < -0.7855 or yhi > 0.7855:
        rlo[0] = -1.0
        rhi[0] = 1.0
        return
    q = n & 3
    if q == 0:
        _cos_core(ylo, yhi, rlo, rhi)
    elif q == 1:
        _sin_core(ylo, yhi, rlo, rhi)
        ylo = rlo[0]
        rlo[0] = -rhi[0]
        rhi[0] = -ylo
    elif q == 2:
        _cos_core(ylo, yhi, rlo, rhi)
        ylo = rlo[0]
        rlo[0] = -rhi[0]
        rhi[0] = -ylo
    else:
        _sin_core(ylo, yhi, rlo, rhi)
    if rlo[0] < -1.0: rlo[0] = -1.0
    if rhi[0] > 1.0: rhi[0] = 1.0

cdef void _crit(double a, double b, double offset, bint* has_even, bint* has_odd) noexcept:
    cdef double mlo_f = ceil((a - offset) / PI_F - 1e-9)
    cdef double mhi_f = floor((b - offset) / PI_F + 1e-9)
    cdef long mlo = <long>mlo_f
    cdef long mhi = <long>mhi_f
    cdef long m
    has_even[0] = 0
    has_odd[0] = 0
    if mhi - mlo >= 3:
        has_even[0] = 1
        has_odd[0] = 1
        return
    for m in range(mlo, mhi + 1):
        if m % 2 == 0:
            has_even[0] = 1
        else:
            has_odd[0] = 1

cdef void p_sin(double alo, double ahi, double* rlo, double* rhi):
    cdef double s1lo, s1hi, s2lo, s2hi
    cdef bint has_even, has_odd
    if not (isfinite(alo) and isfinite(ahi)):
        raise ValueError("sin of non-finite interval")
    if ahi - alo >= TWO_PI_LO:
        rlo[0] = -1.0
        rhi[0] = 1.0
        return
    _sin_pt(alo, &s1lo, &s1hi)
    _sin_pt(ahi, &s2lo, &s2hi)
    rlo[0] = s1lo if s1lo < s2lo else s2lo
    rhi[0] = s1hi if s1hi > s2hi else s2hi
    _crit(alo, ahi, HP_MAIN, &has_even, &has_odd)
    if has_even:
        rhi[0] = 1.0
    if has_odd:
        rlo[0] = -1.0
    if rlo[0] < -1.0: rlo[0] = -1.0
    if rhi[0] > 1.0: rhi[0] = 1.0

cdef void p_cos(double alo, double ahi, double* rlo, double* rhi):
    cdef double s1lo, s1hi, s2lo, s2hi
    cdef bint has_even, has_odd
    if not (isfinite(alo) and isfinite(ahi)):
        raise ValueError("cos of non-finite interval")
    if ahi - alo >= TWO_PI_LO:
        rlo[0] = -1.0
        rhi[0] = 1.0
        return
    _cos_pt(alo, &s1lo, &s1hi)
    _cos_pt(ahi, &s2lo, &s2hi)
    rlo[0] = s1lo if s1lo < s2lo else s2lo
    rhi[0] = s1hi if s1hi > s2hi else s2hi
    _crit(alo, ahi, 0.0, &has_even, &has_odd)
    if has_even:
        rhi[0] = 1.0
    if has_odd:
        rlo[0] = -1.0
    if rlo[0] < -1.0: rlo[0] = -1.0
    if rhi[0] > 1.0: rhi[0] = 1.0


# ---------------------------------------------------------------------------
# series kernels
# ---------------------------------------------------------------------------

cdef struct Series:
    double th_lo[MAXN]
    double th_hi[MAXN]
    double ph_lo[MAXN]
    double ph_hi[MAXN]
    double f_lo[MAXN]
    double f_hi[MAXN]
    double s_lo[MAXN]
    double s_hi[MAXN]
    double c_lo[MAXN]
    double c_hi[MAXN]
    double ps_lo[MAXN]
    double ps_hi[MAXN]
    double s2_lo[MAXN]
    double s2_hi[MAXN]
    double c2_lo[MAXN]
    double c2_hi[MAXN]
    double u_lo[MAXN]
    double u_hi[MAXN]
    double u2_lo[MAXN]
    double u2_hi[MAXN]
    double u3_lo[MAXN]
    double u3_hi[MAXN]
    double u3s2_lo[MAXN]
    double u3s2_hi[MAXN]
    double u3c2_lo[MAXN]
    double u3c2_hi[MAXN]
    double t1_lo[MAXN]
    double t1_hi[MAXN]
    double t2_lo[MAXN]
    double t2_hi[MAXN]
    double us_lo[MAXN]
    double us_hi[MAXN]


cdef void _run_series(Series* S, double* x, int n, double elo, double ehi,
                      double k2lo, double k2hi, double k3lo, double k3hi,
                      bint neg, bint want_var,
                      double* v_lo, double* v_hi):
    # v_lo/v_hi: (n+2) x 9 row-major scratch when want_var
    cdef int m, j, col
    cdef double d, wgt
    cdef double alo, ahi, blo, bhi, wlo, whi
    cdef double acc_s_lo, acc_s_hi, acc_c_lo, acc_c_hi
    cdef double acc_s2_lo, acc_s2_hi, acc_c2_lo, acc_c2_hi
    cdef double p21lo, p21hi, p23lo, p23hi, p33lo, p33hi
    cdef double a21lo, a21hi, a23lo, a23hi, a33lo, a33hi
    cdef double eklo, ekhi, ek3lo, ek3hi
    cdef double rows_lo[9]
    cdef double rows_hi[9]

    S.th_lo[0] = x[0]; S.th_hi[0] = x[1]
    S.ph_lo[0] = x[2]; S.ph_hi[0] = x[3]
    S.f_lo[0] = x[4]; S.f_hi[0] = x[5]

    p_sin(S.f_lo[0], S.f_hi[0], &S.s_lo[0], &S.s_hi[0])
    p_cos(S.f_lo[0], S.f_hi[0], &S.c_lo[0], &S.c_hi[0])
    p_sub(S.th_lo[0], S.th_hi[0], S.f_lo[0], S.f_hi[0], &alo, &ahi)
    p_scale(alo, ahi, 2.0, &S.ps_lo[0], &S.ps_hi[0])
    p_sin(S.ps_lo[0], S.ps_hi[0], &S.s2_lo[0], &S.s2_hi[0])
    p_cos(S.ps_lo[0], S.ps_hi[0], &S.c2_lo[0], &S.c2_hi[0])
    p_mul(elo, ehi, S.c_lo[0], S.c_hi[0], &alo, &ahi)
    p_add(1.0, 1.0, alo, ahi, &S.u_lo[0], &S.u_hi[0])
    p_mul(S.u_lo[0], S.u_hi[0], S.u_lo[0], S.u_hi[0], &S.u2_lo[0], &S.u2_hi[0])
    p_mul(S.u2_lo[0], S.u2_hi[0], S.u_lo[0], S.u_hi[0], &S.u3_lo[0], &S.u3_hi[0])
    p_mul(S.u3_lo[0], S.u3_hi[0], S.s2_lo[0], S.s2_hi[0], &S.u3s2_lo[0], &S.u3s2_hi[0])
    if want_var:
        p_mul(S.u3_lo[0], S.u3_hi[0], S.c2_lo[0], S.c2_hi[0], &S.u3c2_lo[0], &S.u3c2_hi[0])
        p_mul(S.u2_lo[0], S.u2_hi[0], S.s_lo[0], S.s_hi[0], &S.t1_lo[0], &S.t1_hi[0])
        p_mul(S.t1_lo[0], S.t1_hi[0], S.s2_lo[0], S.s2_hi[0], &S.t2_lo[0], &S.t2_hi[0])
        p_mul(S.u_lo[0], S.u_hi[0], S.s_lo[0], S.s_hi[0], &S.us_lo[0], &S.us_hi[0])

    for m in range(n):
        d = <double>(m + 1)
        # state order m+1
        p_div_pos(S.ph_lo[m], S.ph_hi[m], d, &alo, &ahi)
        if neg:
            S.th_lo[m + 1] = -ahi; S.th_hi[m + 1] = -alo
        else:
            S.th_lo[m + 1] = alo; S.th_hi[m + 1] = ahi
        p_mul(k2lo, k2hi, S.u3s2_lo[m], S.u3s2_hi[m], &alo, &ahi)
        p_div_pos(alo, ahi, d, &alo, &ahi)
        if neg:
            S.ph_lo[m + 1] = alo; S.ph_hi[m + 1] = ahi
        else:
            S.ph_lo[m + 1] = -ahi; S.ph_hi[m + 1] = -alo
        p_mul(k3lo, k3hi, S.u2_lo[m], S.u2_hi[m], &alo, &ahi)
        p_div_pos(alo, ahi, d, &alo, &ahi)
        if neg:
            S.f_lo[m + 1] = -ahi; S.f_hi[m + 1] = -alo
        else:
            S.f_lo[m + 1] = alo; S.f_hi[m + 1] = ahi
        p_sub(S.th_lo[m + 1], S.th_hi[m + 1], S.f_lo[m + 1], S.f_hi[m + 1], &alo, &ahi)
        p_scale(alo, ahi, 2.0, &S.ps_lo[m + 1], &S.ps_hi[m + 1])

        # trig recurrences
        acc_s_lo = 0.0; acc_s_hi = 0.0
        acc_c_lo = 0.0; acc_c_hi = 0.0
        acc_s2_lo = 0.0; acc_s2_hi = 0.0
        acc_c2_lo = 0.0; acc_c2_hi = 0.0
        for j in range(m + 1):
            wgt = <double>(m + 1 - j)
            p_scale(S.f_lo[m + 1 - j], S.f_hi[m + 1 - j], wgt, &wlo, &whi)
            p_mul(S.c_lo[j], S.c_hi[j], wlo, whi, &alo, &ahi)
            p_add(acc_s_lo, acc_s_hi, alo, ahi, &acc_s_lo, &acc_s_hi)
            p_mul(S.s_lo[j], S.s_hi[j], wlo, whi, &alo, &ahi)
            p_add(acc_c_lo, acc_c_hi, alo, ahi, &acc_c_lo, &acc_c_hi)
            p_scale(S.ps_lo[m + 1 - j], S.ps_hi[m + 1 - j], wgt, &wlo, &whi)
            p_mul(S.c2_lo[j], S.c2_hi[j], wlo, whi, &alo, &ahi)
            p_add(acc_s2_lo, acc_s2_hi, alo, ahi, &acc_s2_lo, &acc_s2_hi)
            p_mul(S.s2_lo[j], S.s2_hi[j], wlo, whi, &alo, &ahi)
            p_add(acc_c2_lo, acc_c2_hi, alo, ahi, &acc_c2_lo, &acc_c2_hi)
        p_div_pos(acc_s_lo, acc_s_hi, d, &S.s_lo[m + 1], &S.s_hi[m + 1])
        p_div_pos(acc_c_lo, acc_c_hi, d, &alo, &ahi)
        S.c_lo[m + 1] = -ahi; S.c_hi[m + 1] = -alo
        p_div_pos(acc_s2_lo, acc_s2_hi, d, &S.s2_lo[m + 1], &S.s2_hi[m + 1])
        p_div_pos(acc_c2_lo, acc_c2_hi, d, &alo, &ahi)
        S.c2_lo[m + 1] = -ahi; S.c2_hi[m + 1] = -alo

        p_mul(elo, ehi, S.c_lo[m + 1], S.c_hi[m + 1], &S.u_lo[m + 1], &S.u_hi[m + 1])

        acc_s_lo = 0.0; acc_s_hi = 0.0
        for j in range(m + 2):
            p_mul(S.u_lo[j], S.u_hi[j], S.u_lo[m + 1 - j], S.u_hi[m + 1 - j], &alo, &ahi)
            p_add(acc_s_lo, acc_s_hi, alo, ahi, &acc_s_lo, &acc_s_hi)
        S.u2_lo[m + 1] = acc_s_lo; S.u2_hi[m + 1] = acc_s_hi
        acc_s_lo = 0.0; acc_s_hi = 0.0
        for j in range(m + 2):
            p_mul(S.u2_lo[j], S.u2_hi[j], S.u_lo[m + 1 - j], S.u_hi[m + 1 - j], &alo, &ahi)
            p_add(acc_s_lo, acc_s_hi, alo, ahi, &acc_s_lo, &acc_s_hi)
        S.u3_lo[m + 1] = acc_s_lo; S.u3_hi[m + 1] = acc_s_hi
        acc_s_lo = 0.0; acc_s_hi = 0.0
        for j in range(m + 2):
            p_mul(S.u3_lo[j], S.u3_hi[j], S.s2_lo[m + 1 - j], S.s2_hi[m + 1 - j], &alo, &ahi)
            p_add(acc_s_lo, acc_s_hi, alo, ahi, &acc_s_lo, &acc_s_hi)
        S.u3s2_lo[m + 1] = acc_s_lo; S.u3s2_hi[m + 1] = acc_s_hi

        if want_var:
            acc_s_lo = 0.0; acc_s_hi = 0.0
            for j in range(m + 2):
                p_mul(S.u3_lo[j], S.u3_hi[j], S.c2_lo[m + 1 - j], S.c2_hi[m + 1 - j], &alo, &ahi)
                p_add(acc_s_lo, acc_s_hi, alo, ahi, &acc_s_lo, &acc_s_hi)
            S.u3c2_lo[m + 1] = acc_s_lo; S.u3c2_hi[m + 1] = acc_s_hi
            acc_s_lo = 0.0; acc_s_hi = 0.0
            for j in range(m + 2):
                p_mul(S.u2_lo[j], S.u2_hi[j], S.s_lo[m + 1 - j], S.s_hi[m + 1 - j], &alo, &ahi)
                p_add(acc_s_lo, acc_s_hi, alo, ahi, &acc_s_lo, &acc_s_hi)
            S.t1_lo[m + 1] = acc_s_lo; S.t1_hi[m + 1] = acc_s_hi
            acc_s_lo = 0.0; acc_s_hi = 0.0
            for j in range(m + 2):
                p_mul(S.t1_lo[j], S.t1_hi[j], S.s2_lo[m + 1 - j], S.s2_hi[m + 1 - j], &alo, &ahi)
                p_add(acc_s_lo, acc_s_hi, alo, ahi, &acc_s_lo, &acc_s_hi)
            S.t2_lo[m + 1] = acc_s_lo; S.t2_hi[m + 1] = acc_s_hi
            acc_s_lo = 0.0; acc_s_hi = 0.0
            for j in range(m + 2):
                p_mul(S.u_lo[j], S.u_hi[j], S.s_lo[m + 1 - j], S.s_hi[m + 1 - j], &alo, &ahi)
                p_add(acc_s_lo, acc_s_hi, alo, ahi, &acc_s_lo, &acc_s_hi)
            S.us_lo[m + 1] = acc_s_lo; S.us_hi[m + 1] = acc_s_hi

            # V_{m+1} = (1/(m+1)) sum_j A_j V_{m-j}
            if neg:
                rows_lo[0] = -v_hi[9 * m + 3]; rows_hi[0] = -v_lo[9 * m + 3]
                rows_lo[1] = -v_hi[9 * m + 4]; rows_hi[1] = -v_lo[9 * m + 4]
                rows_lo[2] = -v_hi[9 * m + 5]; rows_hi[2] = -v_lo[9 * m + 5]
            else:
                rows_lo[0] = v_lo[9 * m + 3]; rows_hi[0] = v_hi[9 * m + 3]
                rows_lo[1] = v_lo[9 * m + 4]; rows_hi[1] = v_hi[9 * m + 4]
                rows_lo[2] = v_lo[9 * m + 5]; rows_hi[2] = v_hi[9 * m + 5]
            for col in range(6):
                rows_lo[3 + col] = 0.0
                rows_hi[3 + col] = 0.0
            p_mul(elo, ehi, k2lo, k2hi, &eklo, &ekhi)
            p_mul(elo, ehi, k3lo, k3hi, &ek3lo, &ek3hi)
            for j in range(m + 1):
                p_mul(k2lo, k2hi, S.u3c2_lo[j], S.u3c2_hi[j], &alo, &ahi)
                p_scale(alo, ahi, 2.0, &p21lo, &p21hi)
                p_mul(eklo, ekhi, S.t2_lo[j], S.t2_hi[j], &alo, &ahi)
                p_scale(alo, ahi, 3.0, &p23lo, &p23hi)
                p_mul(ek3lo, ek3hi, S.us_lo[j], S.us_hi[j], &alo, &ahi)
                p_scale(alo, ahi, 2.0, &p33lo, &p33hi)
                a21lo = -p21hi; a21hi = -p21lo
                p_add(p21lo, p21hi, p23lo, p23hi, &a23lo, &a23hi)
                a33lo = -p33hi; a33hi = -p33lo
                if neg:
                    a21lo = p21lo; a21hi = p21hi
                    alo = a23lo; ahi = a23hi
                    a23lo = -ahi; a23hi = -alo
                    a33lo = p33lo; a33hi = p33hi
                for col in range(3):
                    # association matches the pure kernel exactly
                    p_mul(a21lo, a21hi, v_lo[9 * (m - j) + col], v_hi[9 * (m - j) + col], &alo, &ahi)
                    p_mul(a23lo, a23hi, v_lo[9 * (m - j) + 6 + col], v_hi[9 * (m - j) + 6 + col], &blo, &bhi)
                    p_add(alo, ahi, blo, bhi, &alo, &ahi)
                    p_add(rows_lo[3 + col], rows_hi[3 + col], alo, ahi,
                          &rows_lo[3 + col], &rows_hi[3 + col])
                    p_mul(a33lo, a33hi, v_lo[9 * (m - j) + 6 + col], v_hi[9 * (m - j) + 6 + col], &alo, &ahi)
                    p_add(rows_lo[6 + col], rows_hi[6 + col], alo, ahi,
                          &rows_lo[6 + col], &rows_hi[6 + col])
            for col in range(9):
                p_div_pos(rows_lo[col], rows_hi[col], d,
                          &v_lo[9 * (m + 1) + col], &v_hi[9 * (m + 1) + col])


def state_series(x, int n, pk):
    """Compiled equivalent of spinorbit.kernels.pure.state_series."""
    if n + 2 > MAXN:
        raise ValueError(f"order {n} exceeds compiled kernel bound")
    cdef Series S
    cdef double xv[6]
    cdef int i
    for i in range(6):
        xv[i] = x[i]
    cdef double elo = pk[0], ehi = pk[1]
    cdef double k2lo = pk[2], k2hi = pk[3]
    cdef double k3lo = pk[4], k3hi = pk[5]
    cdef bint neg = pk[6] < 0.0
    _run_series(&S, xv, n, elo, ehi, k2lo, k2hi, k3lo, k3hi, neg, 0, NULL, NULL)
    out = []
    for i in range(n + 1):
        out.append((S.th_lo[i], S.th_hi[i], S.ph_lo[i], S.ph_hi[i], S.f_lo[i], S.f_hi[i]))
    return out


def var_series(x, v0, int n, pk):
    """Compiled equivalent of spinorbit.kernels.pure.var_series."""
    if n + 2 > MAXN:
        raise ValueError(f"order {n} exceeds compiled kernel bound")
    cdef Series S
    cdef double xv[6]
    cdef double v_lo[MAXN * 9]
    cdef double v_hi[MAXN * 9]
    cdef int i, j
    for i in range(6):
        xv[i] = x[i]
    v0lo, v0hi = v0
    for i in range(9):
        v_lo[i] = v0lo[i]
        v_hi[i] = v0hi[i]
    cdef double elo = pk[0], ehi = pk[1]
    cdef double k2lo = pk[2], k2hi = pk[3]
    cdef double k3lo = pk[4], k3hi = pk[5]
    cdef bint neg = pk[6] < 0.0
    _run_series(&S, xv, n, elo, ehi, k2lo, k2hi, k3lo, k3hi, neg, 1, v_lo, v_hi)
    coeffs = []
    var = []
    for i in range(n + 1):
        coeffs.append((S.th_lo[i], S.th_hi[i], S.ph_lo[i], S.ph_hi[i], S.f_lo[i], S.f_hi[i]))
        row_lo = []
        row_hi = []
        for j in range(9):
            row_lo.append(v_lo[9 * i + j])
            row_hi.append(v_hi[9 * i + j])
        var.append((tuple(row_lo), tuple(row_hi)))
    return coeffs, var
