import random

import mpmath
import pytest

from tcasym.mpnum import LogComplex, working


def rel_diff(a, b, prec=256):
    """Relative difference of two mpmath numbers at prec bits."""
    with working(prec):
        a, b = mpmath.mpc(a), mpmath.mpc(b)
        scale = max(abs(a), abs(b), mpmath.mpf(1e-300))
        return abs(a - b) / scale


def logc_rel_err(v_exact: LogComplex, v_other: LogComplex, prec=256):
    """|exp(log difference) - 1| between two LogComplex values."""
    with working(prec):
        d = mpmath.mpc(v_other.log_mod - v_exact.log_mod, v_other.phase - v_exact.phase)
        return abs(mpmath.exp(d) - 1)


@pytest.fixture
def rng():
    return random.Random(20260810)


def random_mpc(rng, re_range=(-4, 4), im_range=(-4, 4)):
    return mpmath.mpc(rng.uniform(*re_range), rng.uniform(*im_range))
