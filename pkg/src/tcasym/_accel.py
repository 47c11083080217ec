"""Kernel selection: compiled MPFR extension if importable, else pure Python.

Set ``TCASYM_PURE=1`` to force the pure path (used by the benchmark and by
tests that compare the two implementations).
"""

from __future__ import annotations

import os

import mpmath
from mpmath import mp

from . import _purekernels

try:
    if os.environ.get("TCASYM_PURE") == "1":
        raise ImportError("pure path forced by TCASYM_PURE=1")
    from . import _kernels  # compiled extension; absent if the build was skipped
except ImportError:
    _kernels = None

HAVE_COMPILED = _kernels is not None
BACKEND = "mpfr-kernels" if HAVE_COMPILED else "pure-python"


def mpf_to_hex(x) -> str:
    """Exact hex literal (mantissa p exponent) for a finite mpf."""
    # x._mpf_ is exact; mpmath.mpf(x) would re-round at ambient precision
    raw = x._mpf_ if hasattr(x, "_mpf_") else mpmath.mpf(x)._mpf_
    sign, man, exp, bc = raw
    if man == 0:
        if exp == 0:
            return "0"
        raise ValueError(f"non-finite value: {x}")
    return ("-" if sign else "") + "0x" + hex(man)[2:] + "p" + str(exp)


def man_exp_to_mpf(man_hex: str, exp: int):
    """Exact mpf from a hex mantissa string and binary exponent."""
    man = int(man_hex, 16)
    if man == 0:
        return mpmath.mpf(0)
    with mp.workprec(abs(man).bit_length() + 8):
        return mpmath.ldexp(mpmath.mpf(man), int(exp))


def _make_mpc_exact(re, im):
    # mpmath.mpc(re, im) would re-round both parts at ambient precision
    return mp.make_mpc((re._mpf_, im._mpf_))


def recurrence_eval(x, alpha, n, prec):
    """(f_prev, f_curr, scale_exp2) via the selected kernel."""
    if _kernels is None:
        return _purekernels.recurrence_eval(x, alpha, n, prec)
    out = _kernels.recurrence_eval(
        mpf_to_hex(x.real), mpf_to_hex(x.imag), mpf_to_hex(alpha), int(n), int(prec)
    )
    pr = _make_mpc_exact(man_exp_to_mpf(out[0], out[1]), man_exp_to_mpf(out[2], out[3]))
    cu = _make_mpc_exact(man_exp_to_mpf(out[4], out[5]), man_exp_to_mpf(out[6], out[7]))
    return pr, cu, int(out[8])


def ortho_accumulate(alpha, deg, k_lo, k_hi, log_fact, prec):
    """(pair sums dict, log_fact out) via the selected kernel."""
    if _kernels is None:
        return _purekernels.ortho_accumulate(alpha, deg, k_lo, k_hi, log_fact, prec)
    pairs, sums, lf = _kernels.ortho_accumulate(
        mpf_to_hex(alpha), int(deg), int(k_lo), int(k_hi), mpf_to_hex(log_fact), int(prec)
    )
    acc = {tuple(p): man_exp_to_mpf(s[0], s[1]) for p, s in zip(pairs, sums)}
    return acc, man_exp_to_mpf(lf[0], lf[1])
