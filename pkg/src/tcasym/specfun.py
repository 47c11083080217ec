"""Complex Airy quartet and complex log-gamma at configurable precision.

Both functions are implemented from first principles on top of mpnum's
arithmetic and validated in the test suite against independent oracles
(re-summed Maclaurin series at elevated precision, reflection/recurrence
identities, and a third-party library at spot points).

Airy: Maclaurin series inside a precision-dependent crossover radius;
outside, the standard large-argument expansions in zeta = (2/3) z^{3/2}
with sector-correct connection formulas.  Sector membership is decided by
Arg z in (-pi, pi] alone, so behavior on the Stokes rays arg z = +-2pi/3
is deterministic (no averaging).

log-gamma: argument shift until Re z is inside the Stirling-valid zone,
reflection for Re z < 1/2, with the log-sin branch unwound so the result
is the branch of log Gamma continuous on C \\ (-inf, 0].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from .mpnum import (
    GUARD,
    PoleError,
    bits_of,
    round_to,
    round_to_mpc,
    to_mpc,
)

_LN2 = math.log(2.0)


# ----------------------------------------------------------------------
# Bernoulli numbers (exact rationals, cached)
# ----------------------------------------------------------------------

_bernoulli_cache = [Fraction(1), Fraction(-1, 2)]


def bernoulli_fraction(m: int) -> Fraction:
    """B_m as an exact Fraction (B_1 = -1/2 convention)."""
    while len(_bernoulli_cache) <= m:
        k = len(_bernoulli_cache)
        if k % 2 == 1:
            _bernoulli_cache.append(Fraction(0))
            continue
        # sum_{j=0}^{k} C(k+1, j) B_j = 0
        acc = Fraction(0)
        for j in range(k):
            acc += math.comb(k + 1, j) * _bernoulli_cache[j]
        _bernoulli_cache.append(-acc / (k + 1))
    return _bernoulli_cache[m]


# ----------------------------------------------------------------------
# log-gamma
# ----------------------------------------------------------------------

def _stirling_threshold(bits: int) -> int:
    # Shift until Re z >= 10 + bits/8: keeps the optimal Stirling truncation
    # error ~exp(-2*pi*Re z) far below the target precision.
    return 10 + bits // 8


def _stirling_loggamma(z):
    """Stirling series at the current mp precision; Re z must be large."""
    eps = mpmath.ldexp(mpmath.mpf(1), -(mp.prec + 4))
    out = (z - mpmath.mpf(1) / 2) * mpmath.log(z) - z + mpmath.log(2 * mpmath.pi) / 2
    zsq = z * z
    term_scale = abs(out) + 1
    pw = z
    j = 1
    prev = mpmath.inf
    while True:
        b = bernoulli_fraction(2 * j)
        term = mpmath.mpf(b.numerator) / (mpmath.mpf(b.denominator) * (2 * j) * (2 * j - 1)) / pw
        mag = abs(term)
        if mag < eps * term_scale:
            out += term
            break
        if mag > prev:
            # Series started diverging before reaching target accuracy;
            # the shift threshold is set so this cannot happen.
            raise ArithmeticError("Stirling series did not converge; argument shifted insufficiently")
        out += term
        prev = mag
        pw *= zsq
        j += 1
    return out


def _loggamma_shifted(z):
    """log Gamma for Re z >= 1/2 via recurrence shift + Stirling, at the
    caller's working precision."""
    t = _stirling_threshold(mp.prec)
    shift = int(max(0, math.ceil(t - z.real)))
    acc = mpmath.mpc(0)
    for j in range(shift):
        acc += mpmath.log(z + j)
    return _stirling_loggamma(z + shift) - acc


def _log_sin_pi(z):
    """Branch of log sin(pi z) that keeps log Gamma continuous off
    (-inf, 0], at the caller's working precision.

    For Im z >= 0: factor sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z});
    mirrored for Im z < 0.  Real z uses the upper-half limit.
    """
    ipi = mpmath.mpc(0, mpmath.pi)
    if z.imag >= 0:
        return -mpmath.log(2) + ipi / 2 - ipi * z + mpmath.log(1 - mpmath.exp(2 * ipi * z))
    return -mpmath.log(2) - ipi / 2 + ipi * z + mpmath.log(1 - mpmath.exp(-2 * ipi * z))


def log_gamma_complex(z, prec):
    """The branch of log Gamma continuous on C \\ (-inf, 0].

    Real z on the cut evaluates to the limit from the upper half-plane.
    Raises :class:`PoleError` at non-positive integers.
    """
    bits = bits_of(prec)
    z = to_mpc(z, prec)
    if z.imag == 0 and z.real <= 0 and z.real == mpmath.floor(z.real):
        raise PoleError(f"log_gamma_complex: pole at z={z}")
    guard = GUARD + 8 + max(0, int(abs(z.real)).bit_length())
    with mp.workprec(bits + guard):
        if z.real >= mpmath.mpf(1) / 2:
            w = _loggamma_shifted(z)
        else:
            w = mpmath.log(mpmath.pi) - _log_sin_pi(z) - _loggamma_shifted(1 - z)
    return round_to(prec, w)


def log_gamma_real(x, prec):
    """log Gamma for real x > 0 (mpf result)."""
    bits = bits_of(prec)
    with mp.workprec(bits + GUARD + 8):
        x = mpmath.mpf(x)
        if x <= 0:
            raise PoleError("log_gamma_real requires x > 0")
        w = _loggamma_shifted(mpmath.mpc(x)).real
    return round_to(prec, w)


# ----------------------------------------------------------------------
# Airy functions
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class AiryQuartet:
    """Ai, Bi and their derivatives at a common argument."""

    ai: mpmath.mpc
    bi: mpmath.mpc
    ai_d: mpmath.mpc
    bi_d: mpmath.mpc


def crossover_radius(prec) -> float:
    """Series/asymptotics dispatch radius.

    The nominal radius 9*(bits/128)^(2/3) balances series length against
    asymptotic truncation, but the asymptotic series has an optimal-
    truncation floor ~exp(-2|zeta|), so the radius is raised where needed
    to keep at least bits/2 + 16 correct bits on the asymptotic side.
    """
    bits = bits_of(prec)
    nominal = 9.0 * (bits / 128.0) ** (2.0 / 3.0)
    zeta_min = (bits / 2 + 16) * _LN2 / 2.0
    floor = (1.5 * zeta_min) ** (2.0 / 3.0)
    return max(nominal, floor)


def _airy_series(z, bits):
    """Maclaurin evaluation of the quartet; valid for any z, used inside
    the crossover radius.  Works at elevated precision to absorb the
    exp(4/3 |z|^{3/2}) cancellation in the growing direction."""
    r = abs(z)
    guard = GUARD + 24 + int(1.93 * float(r) ** 1.5)
    with mp.workprec(bits + guard):
        z = +z
        third = mpmath.mpf(1) / 3
        g13 = mpmath.exp(_loggamma_shifted(mpmath.mpc(third)).real)
        g23 = mpmath.exp(_loggamma_shifted(mpmath.mpc(2 * third)).real)
        c1 = mpmath.mpf(3) ** (-mpmath.mpf(2) / 3) / g23     # Ai(0)
        c2 = -(mpmath.mpf(3) ** (-third)) / g13              # Ai'(0)
        sq3 = mpmath.sqrt(mpmath.mpf(3))

        z3 = z ** 3
        eps = mpmath.ldexp(mpmath.mpf(1), -(mp.prec + 4))

        # f, g and their termwise derivatives share the cube-power ladder:
        #   f  terms  a_k   = a_{k-1} z^3 / ((3k-1)(3k))
        #   g  terms  b_k   = b_{k-1} z^3 / ((3k)(3k+1))
        #   f' terms  a'_k  = a'_{k-1} z^3 / ((3k-3)(3k-1)),  a'_1 = z^2/2
        #   g' terms  b'_k  = b'_{k-1} z^3 / ((3k-2)(3k))
        af = mpmath.mpc(1)
        bg = mpmath.mpc(z)
        afd = z * z / 2
        bgd = mpmath.mpc(1)
        f, g, fd, gd = af, bg, afd, bgd
        k = 1
        maxmag = mpmath.mpf(1) + abs(z)
        while True:
            af = af * z3 / ((3 * k - 1) * (3 * k))
            bg = bg * z3 / ((3 * k) * (3 * k + 1))
            bgd = bgd * z3 / ((3 * k - 2) * (3 * k))
            if k >= 2:
                afd = afd * z3 / ((3 * k - 3) * (3 * k - 1))
                fd += afd
            f += af
            g += bg
            gd += bgd
            t = max(abs(af), abs(bg), abs(bgd), abs(afd))
            m = max(abs(f), abs(g), abs(fd), abs(gd), maxmag)
            if t < eps * m:
                break
            k += 1
            if k > 100000:
                raise ArithmeticError("airy series failed to converge")
        ai = c1 * f + c2 * g
        aid = c1 * fd + c2 * gd
        bi = sq3 * (c1 * f - c2 * g)
        bid = sq3 * (c1 * fd - c2 * gd)
    return ai, bi, aid, bid


_TWO_THIRDS_PI = 2.0943951023931953  # float gate only; exact compare uses mpf


def _airy_asym_principal(z):
    """Large-|z| expansion of (Ai, Ai') at current precision.

    Only called with |Arg z| <= 2pi/3 (plus rounding slack), where the
    principal expansion is the numerically correct representation.
    """
    zeta = mpmath.mpf(2) / 3 * mpmath.exp(mpmath.mpf(3) / 2 * mpmath.log(z))
    eps = mpmath.ldexp(mpmath.mpf(1), -(mp.prec + 4))
    inv = 1 / zeta
    sp = mpmath.mpc(1)   # sum (-1)^k u_k zeta^-k
    sq = mpmath.mpc(1)   # sum (-1)^k v_k zeta^-k
    u = mpmath.mpf(1)
    pw = mpmath.mpc(1)
    k = 1
    prev = mpmath.inf
    while True:
        u = u * (6 * k - 5) * (6 * k - 1) / (72 * k)
        v = u * (6 * k + 1) / (1 - 6 * k)
        pw = pw * inv
        tp = u * pw
        tq = v * pw
        mag = abs(tp)
        if mag > prev:
            break  # optimal truncation reached; floor controlled by dispatch radius
        sign = -1 if k % 2 else 1
        sp += sign * tp
        sq += sign * tq
        if mag < eps:
            break
        prev = mag
        k += 1
    zq = mpmath.exp(mpmath.log(z) / 4)  # principal z^(1/4)
    pref = mpmath.exp(-zeta) / (2 * mpmath.sqrt(mpmath.pi))
    ai = pref / zq * sp
    aid = -pref * zq * sq
    return ai, aid


def _airy_ai_any(z):
    """(Ai, Ai') for any z via the rotation identity outside |arg z| <= 2pi/3."""
    a = mpmath.atan2(z.imag, z.real)
    lim = 2 * mpmath.pi / 3
    if a <= lim and a >= -lim:
        return _airy_asym_principal(z)
    w = mpmath.exp(mpmath.mpc(0, 2 * mpmath.pi / 3))     # omega
    wb = mpmath.conj(w)
    u_val = z * wb
    v_val = z * w
    ai_u, aid_u = _airy_asym_principal(u_val)
    ai_v, aid_v = _airy_asym_principal(v_val)
    # Ai(z) = -conj(w) Ai(z conj(w)) - w Ai(z w); chain rule for Ai'.
    ai = -wb * ai_u - w * ai_v
    aid = -w * aid_u - wb * aid_v
    return ai, aid


def airy_quartet(z, prec) -> AiryQuartet:
    """Ai, Bi, Ai', Bi' at a complex point, >= prec/2 correct bits each."""
    bits = bits_of(prec)
    z = to_mpc(z, prec)
    with mp.workprec(bits):
        small = abs(z) <= crossover_radius(bits)
    if small:
        with mp.workprec(bits + GUARD):
            vals = _airy_series(z, bits)
            ai, bi, aid, bid = (+v for v in vals)
    else:
        with mp.workprec(bits + GUARD + 16):
            z = +z
            ai, aid = _airy_ai_any(z)
            w = mpmath.exp(mpmath.mpc(0, 2 * mpmath.pi / 3))
            wb = mpmath.conj(w)
            e6 = mpmath.exp(mpmath.mpc(0, mpmath.pi / 6))
            e56 = mpmath.exp(mpmath.mpc(0, 5 * mpmath.pi / 6))
            ai_p, aid_p = _airy_ai_any(z * w)
            ai_m, aid_m = _airy_ai_any(z * wb)
            bi = e6 * ai_p + mpmath.conj(e6) * ai_m
            bid = e56 * aid_p + mpmath.conj(e56) * aid_m
    return AiryQuartet(
        round_to_mpc(prec, ai),
        round_to_mpc(prec, bi),
        round_to_mpc(prec, aid),
        round_to_mpc(prec, bid),
    )


def airy_series_reference(z, prec, extra_factor: int = 4):
    """Independent check value: the quartet re-summed at ``extra_factor`` times
    the working precision.  Used by tests as the series-side oracle."""
    bits = bits_of(prec)
    z = to_mpc(z, bits * extra_factor)
    with mp.workprec(bits * extra_factor):
        ai, bi, aid, bid = _airy_series(z, bits * extra_factor)
    return AiryQuartet(
        round_to_mpc(prec, ai),
        round_to_mpc(prec, bi),
        round_to_mpc(prec, aid),
        round_to_mpc(prec, bid),
    )
