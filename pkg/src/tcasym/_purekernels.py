"""Pure-Python hot loops: recurrence evaluation and orthogonality sums.

These mirror the MPFR kernels in ``_kernels.pyx`` operation for operation.
Both sides perform the identical sequence of correctly-rounded ops at the
same mantissa width, so the recurrence path is reproducible bit for bit
across the two implementations (exp/log in the mass computation may differ
in the last ulp; tests compare those at tolerance).

Renormalization: whenever the largest component magnitude leaves
[2**-16, 2**16], the whole state is scaled by an exact power of two and
the exponent is accreted into ``scale_exp2``.
"""

from __future__ import annotations

import mpmath
from mpmath import mp

RENORM_BITS = 16


def _max_mag(*vals):
    """Largest ceil(log2|v|) over nonzero components, or None if all zero."""
    m = None
    for v in vals:
        if v:
            e = mpmath.mag(v)
            if m is None or e > m:
                m = e
    return m


def recurrence_eval(x, alpha, n, prec):
    """Forward three-term recurrence for f_n at complex x.

    Returns ``(f_prev, f_curr, scale_exp2)`` where the true values are
    ``f * 2**scale_exp2``.  All arithmetic at exactly ``prec`` bits.
    """
    with mp.workprec(prec):
        xr, xi = mpmath.mpf(x.real), mpmath.mpf(x.imag)
        alpha = mpmath.mpf(alpha)
        zero = mpmath.mpf(0)
        if n == 0:
            return mpmath.mpc(zero, zero), mpmath.mpc(1, 0), 0
        fpr, fpi = mpmath.mpf(1), zero
        fcr, fci = alpha * xr, alpha * xi
        scale = 0
        for k in range(1, n):
            s = k + alpha
            p1 = xr * fcr
            p2 = xi * fci
            tr = p1 - p2
            p3 = xr * fci
            p4 = xi * fcr
            ti = p3 + p4
            ur = s * tr
            ui = s * ti
            wr = ur - fpr
            wi = ui - fpi
            d = k + 1
            nr = wr / d
            ni = wi / d
            fpr, fpi = fcr, fci
            fcr, fci = nr, ni
            e = _max_mag(fpr, fpi, fcr, fci)
            if e is not None and (e > RENORM_BITS or e < -RENORM_BITS):
                fpr = mpmath.ldexp(fpr, -e)
                fpi = mpmath.ldexp(fpi, -e)
                fcr = mpmath.ldexp(fcr, -e)
                fci = mpmath.ldexp(fci, -e)
                scale += e
        return mpmath.mpc(fpr, fpi), mpmath.mpc(fcr, fci), scale


def ortho_accumulate(alpha, deg, k_lo, k_hi, log_fact, prec):
    """Partial orthogonality sums over nodes k in [k_lo, k_hi).

    Accumulates f_m(x_k) * f_n(x_k) * mass_k for every pair m <= n <= deg
    with m+n even.  ``log_fact`` must be log((k_lo - 1)!), i.e. 0 for
    k_lo <= 1.  Returns ``(sums_dict, log_fact_out)``.
    """
    with mp.workprec(prec):
        alpha = mpmath.mpf(alpha)
        log_fact = mpmath.mpf(log_fact)
        pairs = [(m, n) for m in range(deg + 1) for n in range(m, deg + 1) if (m + n) % 2 == 0]
        acc = {p: mpmath.mpf(0) for p in pairs}
        coeff = [j + alpha for j in range(deg)]
        f = [mpmath.mpf(0)] * (deg + 1)
        for k in range(k_lo, k_hi):
            s = k + alpha
            t = mpmath.log(s)
            xs = mpmath.sqrt(s)
            xk = 1 / xs
            if k > 0:
                log_fact = log_fact + mpmath.log(k)
            a1 = (k - 1) * t
            a2 = a1 - k
            lm = a2 - log_fact
            mass = mpmath.exp(lm)
            f[0] = mpmath.mpf(1)
            if deg >= 1:
                f[1] = alpha * xk
            for j in range(1, deg):
                q = xk * f[j]
                q = coeff[j] * q
                q = q - f[j - 1]
                f[j + 1] = q / (j + 1)
            for m, n in pairs:
                pr = f[m] * f[n]
                pr = pr * mass
                acc[(m, n)] = acc[(m, n)] + pr
        return acc, log_fact
