# cython: language_level=3
"""MPFR-backed hot loops: recurrence evaluation and orthogonality sums.

Operation-for-operation mirror of ``_purekernels.py`` (see there for the
contract).  Values cross the boundary as exact hex mantissa/exponent
strings, so no precision is lost in transit.
"""

from libc.stdlib cimport free, malloc

cdef extern from "gmp.h":
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct mpz_t[1]
    ctypedef __mpz_struct* mpz_ptr
    void mpz_init(mpz_t)
    void mpz_clear(mpz_t)
    size_t mpz_sizeinbase(mpz_t, int)
    char* mpz_get_str(char*, int, mpz_t)
    int mpz_sgn(mpz_t)

cdef extern from "mpfr.h":
    ctypedef struct __mpfr_struct:
        pass
    ctypedef __mpfr_struct mpfr_t[1]
    ctypedef __mpfr_struct* mpfr_ptr
    ctypedef enum mpfr_rnd_t:
        MPFR_RNDN
    ctypedef long mpfr_prec_t
    ctypedef long mpfr_exp_t
    void mpfr_init2(mpfr_t, mpfr_prec_t)
    void mpfr_clear(mpfr_t)
    int mpfr_set(mpfr_t, mpfr_t, mpfr_rnd_t)
    int mpfr_set_str(mpfr_t, const char*, int, mpfr_rnd_t)
    int mpfr_set_ui(mpfr_t, unsigned long, mpfr_rnd_t)
    int mpfr_set_si(mpfr_t, long, mpfr_rnd_t)
    int mpfr_add(mpfr_t, mpfr_t, mpfr_t, mpfr_rnd_t)
    int mpfr_sub(mpfr_t, mpfr_t, mpfr_t, mpfr_rnd_t)
    int mpfr_mul(mpfr_t, mpfr_t, mpfr_t, mpfr_rnd_t)
    int mpfr_add_ui(mpfr_t, mpfr_t, unsigned long, mpfr_rnd_t)
    int mpfr_sub_ui(mpfr_t, mpfr_t, unsigned long, mpfr_rnd_t)
    int mpfr_mul_si(mpfr_t, mpfr_t, long, mpfr_rnd_t)
    int mpfr_div_ui(mpfr_t, mpfr_t, unsigned long, mpfr_rnd_t)
    int mpfr_ui_div(mpfr_t, unsigned long, mpfr_t, mpfr_rnd_t)
    int mpfr_sqrt(mpfr_t, mpfr_t, mpfr_rnd_t)
    int mpfr_log(mpfr_t, mpfr_t, mpfr_rnd_t)
    int mpfr_exp(mpfr_t, mpfr_t, mpfr_rnd_t)
    int mpfr_mul_2si(mpfr_t, mpfr_t, long, mpfr_rnd_t)
    mpfr_exp_t mpfr_get_exp(mpfr_t)
    int mpfr_zero_p(mpfr_t)
    int mpfr_number_p(mpfr_t)
    mpfr_exp_t mpfr_get_z_2exp(mpz_t, mpfr_t)

cdef long RENORM_BITS = 16

KERNEL_BACKEND = "mpfr"


cdef int _set_from_hex(mpfr_t x, str s) except -1:
    cdef bytes b = s.encode("ascii")
    if mpfr_set_str(x, b, 16, MPFR_RNDN) != 0:
        raise ValueError(f"bad hex float literal: {s!r}")
    return 0


cdef tuple _to_man_exp(mpfr_t x):
    """Exact (hex mantissa string, exponent) of an mpfr value."""
    cdef mpz_t z
    cdef mpfr_exp_t e
    cdef size_t sz
    cdef char* buf
    if not mpfr_number_p(x):
        raise ArithmeticError("non-finite value in kernel")
    if mpfr_zero_p(x):
        return "0", 0
    mpz_init(z)
    e = mpfr_get_z_2exp(z, x)
    sz = mpz_sizeinbase(z, 16) + 3
    buf = <char*> malloc(sz)
    if buf == NULL:
        mpz_clear(z)
        raise MemoryError()
    mpz_get_str(buf, 16, z)
    out = (<bytes> buf).decode("ascii")
    free(buf)
    mpz_clear(z)
    return out, <long> e


def recurrence_eval(str x_re, str x_im, str alpha, long n, long prec):
    """Forward recurrence at prec bits; hex-string marshalling.

    Returns (pr_man, pr_exp, pi_man, pi_exp, cr_man, cr_exp, ci_man,
    ci_exp, scale_exp2) for (f_prev, f_curr).
    """
    cdef mpfr_t xr, xi, al, fpr, fpi, fcr, fci, s, p1, p2, tr, ti, ur, ui, wr, wi, nr, ni
    cdef long k, scale, e, ec
    cdef bint have
    if n < 0:
        raise ValueError("n must be >= 0")
    mpfr_init2(xr, prec); mpfr_init2(xi, prec); mpfr_init2(al, prec)
    mpfr_init2(fpr, prec); mpfr_init2(fpi, prec)
    mpfr_init2(fcr, prec); mpfr_init2(fci, prec)
    mpfr_init2(s, prec)
    mpfr_init2(p1, prec); mpfr_init2(p2, prec)
    mpfr_init2(tr, prec); mpfr_init2(ti, prec)
    mpfr_init2(ur, prec); mpfr_init2(ui, prec)
    mpfr_init2(wr, prec); mpfr_init2(wi, prec)
    mpfr_init2(nr, prec); mpfr_init2(ni, prec)
    try:
        _set_from_hex(xr, x_re)
        _set_from_hex(xi, x_im)
        _set_from_hex(al, alpha)
        scale = 0
        if n == 0:
            mpfr_set_ui(fpr, 0, MPFR_RNDN); mpfr_set_ui(fpi, 0, MPFR_RNDN)
            mpfr_set_ui(fcr, 1, MPFR_RNDN); mpfr_set_ui(fci, 0, MPFR_RNDN)
        else:
            mpfr_set_ui(fpr, 1, MPFR_RNDN); mpfr_set_ui(fpi, 0, MPFR_RNDN)
            mpfr_mul(fcr, al, xr, MPFR_RNDN)
            mpfr_mul(fci, al, xi, MPFR_RNDN)
            for k in range(1, n):
                mpfr_add_ui(s, al, <unsigned long> k, MPFR_RNDN)
                mpfr_mul(p1, xr, fcr, MPFR_RNDN)
                mpfr_mul(p2, xi, fci, MPFR_RNDN)
                mpfr_sub(tr, p1, p2, MPFR_RNDN)
                mpfr_mul(p1, xr, fci, MPFR_RNDN)
                mpfr_mul(p2, xi, fcr, MPFR_RNDN)
                mpfr_add(ti, p1, p2, MPFR_RNDN)
                mpfr_mul(ur, s, tr, MPFR_RNDN)
                mpfr_mul(ui, s, ti, MPFR_RNDN)
                mpfr_sub(wr, ur, fpr, MPFR_RNDN)
                mpfr_sub(wi, ui, fpi, MPFR_RNDN)
                mpfr_div_ui(nr, wr, <unsigned long> (k + 1), MPFR_RNDN)
                mpfr_div_ui(ni, wi, <unsigned long> (k + 1), MPFR_RNDN)
                mpfr_set(fpr, fcr, MPFR_RNDN); mpfr_set(fpi, fci, MPFR_RNDN)
                mpfr_set(fcr, nr, MPFR_RNDN); mpfr_set(fci, ni, MPFR_RNDN)
                # renormalize by an exact power of two when drifting
                have = False
                e = 0
                if not mpfr_zero_p(fpr):
                    e = mpfr_get_exp(fpr); have = True
                if not mpfr_zero_p(fpi):
                    ec = mpfr_get_exp(fpi)
                    if not have or ec > e: e = ec
                    have = True
                if not mpfr_zero_p(fcr):
                    ec = mpfr_get_exp(fcr)
                    if not have or ec > e: e = ec
                    have = True
                if not mpfr_zero_p(fci):
                    ec = mpfr_get_exp(fci)
                    if not have or ec > e: e = ec
                    have = True
                if have and (e > RENORM_BITS or e < -RENORM_BITS):
                    mpfr_mul_2si(fpr, fpr, -e, MPFR_RNDN)
                    mpfr_mul_2si(fpi, fpi, -e, MPFR_RNDN)
                    mpfr_mul_2si(fcr, fcr, -e, MPFR_RNDN)
                    mpfr_mul_2si(fci, fci, -e, MPFR_RNDN)
                    scale += e
        out = _to_man_exp(fpr) + _to_man_exp(fpi) + _to_man_exp(fcr) + _to_man_exp(fci) + (scale,)
    finally:
        mpfr_clear(xr); mpfr_clear(xi); mpfr_clear(al)
        mpfr_clear(fpr); mpfr_clear(fpi); mpfr_clear(fcr); mpfr_clear(fci)
        mpfr_clear(s); mpfr_clear(p1); mpfr_clear(p2)
        mpfr_clear(tr); mpfr_clear(ti); mpfr_clear(ur); mpfr_clear(ui)
        mpfr_clear(wr); mpfr_clear(wi); mpfr_clear(nr); mpfr_clear(ni)
    return out


def ortho_accumulate(str alpha, long deg, long k_lo, long k_hi, str log_fact_in, long prec):
    """Partial orthogonality sums over k in [k_lo, k_hi) at prec bits.

    Returns (pairs, sums, log_fact_out) where pairs is a list of (m, n)
    and sums the matching list of (hex mantissa, exponent) tuples.
    """
    cdef mpfr_t al, lf, s, t, xs, xk, a1, a2, lm, mass, q, pr
    cdef mpfr_t f[64]
    cdef mpfr_t coeff[64]
    cdef mpfr_t acc[2080]
    cdef long k, j, i, npairs, m, nn
    if deg < 0 or deg > 62:
        raise ValueError("deg out of range")
    if k_lo < 0 or k_hi < k_lo:
        raise ValueError("bad k range")
    pairs = [(m, nn) for m in range(deg + 1) for nn in range(m, deg + 1) if (m + nn) % 2 == 0]
    npairs = len(pairs)
    # flatten pair indices for the C loop (npairs <= (deg+1)(deg+2)/2 <= 2016)
    cdef long pm[2080]
    cdef long pn[2080]
    for i in range(npairs):
        pm[i] = pairs[i][0]
        pn[i] = pairs[i][1]

    mpfr_init2(al, prec); mpfr_init2(lf, prec); mpfr_init2(s, prec)
    mpfr_init2(t, prec); mpfr_init2(xs, prec); mpfr_init2(xk, prec)
    mpfr_init2(a1, prec); mpfr_init2(a2, prec); mpfr_init2(lm, prec)
    mpfr_init2(mass, prec); mpfr_init2(q, prec); mpfr_init2(pr, prec)
    for j in range(deg + 1):
        mpfr_init2(f[j], prec)
    for j in range(max(deg, 1)):
        mpfr_init2(coeff[j], prec)
    for i in range(npairs):
        mpfr_init2(acc[i], prec)
        mpfr_set_ui(acc[i], 0, MPFR_RNDN)
    try:
        _set_from_hex(al, alpha)
        _set_from_hex(lf, log_fact_in)
        for j in range(deg):
            mpfr_add_ui(coeff[j], al, <unsigned long> j, MPFR_RNDN)
        for k in range(k_lo, k_hi):
            mpfr_add_ui(s, al, <unsigned long> k, MPFR_RNDN)
            mpfr_log(t, s, MPFR_RNDN)
            mpfr_sqrt(xs, s, MPFR_RNDN)
            mpfr_ui_div(xk, 1, xs, MPFR_RNDN)
            if k > 0:
                mpfr_set_ui(q, <unsigned long> k, MPFR_RNDN)
                mpfr_log(q, q, MPFR_RNDN)
                mpfr_add(lf, lf, q, MPFR_RNDN)
            mpfr_mul_si(a1, t, k - 1, MPFR_RNDN)
            mpfr_sub_ui(a2, a1, <unsigned long> k, MPFR_RNDN)
            mpfr_sub(lm, a2, lf, MPFR_RNDN)
            mpfr_exp(mass, lm, MPFR_RNDN)
            mpfr_set_ui(f[0], 1, MPFR_RNDN)
            if deg >= 1:
                mpfr_mul(f[1], al, xk, MPFR_RNDN)
            for j in range(1, deg):
                mpfr_mul(q, xk, f[j], MPFR_RNDN)
                mpfr_mul(q, coeff[j], q, MPFR_RNDN)
                mpfr_sub(q, q, f[j - 1], MPFR_RNDN)
                mpfr_div_ui(f[j + 1], q, <unsigned long> (j + 1), MPFR_RNDN)
            for i in range(npairs):
                mpfr_mul(pr, f[pm[i]], f[pn[i]], MPFR_RNDN)
                mpfr_mul(pr, pr, mass, MPFR_RNDN)
                mpfr_add(acc[i], acc[i], pr, MPFR_RNDN)
        sums = [_to_man_exp(acc[i]) for i in range(npairs)]
        lf_out = _to_man_exp(lf)
    finally:
        mpfr_clear(al); mpfr_clear(lf); mpfr_clear(s); mpfr_clear(t)
        mpfr_clear(xs); mpfr_clear(xk); mpfr_clear(a1); mpfr_clear(a2)
        mpfr_clear(lm); mpfr_clear(mass); mpfr_clear(q); mpfr_clear(pr)
        for j in range(deg + 1):
            mpfr_clear(f[j])
        for j in range(max(deg, 1)):
            mpfr_clear(coeff[j])
        for i in range(npairs):
            mpfr_clear(acc[i])
    return pairs, sums, lf_out
