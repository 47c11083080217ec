"""Region classification and region-wise asymptotic evaluation.

The rescaled monic polynomial is approximated by five closed-form leading
terms, one per region of the closed first quadrant (origin disk, band
strip B, turning-point disk C around 2, saturated strip D, outer region
A).  The full-plane dispatcher reduces any nonzero z to the first
quadrant through the parity and reflection symmetries, classifies it,
dispatches, and undoes the reduction on the LogComplex result, so the
symmetries hold bit for bit by construction.

Real arguments are evaluated as upper-half-plane boundary values; the
strip and origin formulas there combine two conjugate oscillatory terms
into a real value, which is asserted (imaginary residual <= 1e-8
relative) and then snapped onto the real axis.

Every result carries ``dropped_term_bound``: the log-magnitude of the
largest term the formula discards, so downstream error tables can
separate formula error from truncation error.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp

from .auxfun import _w_root, d_func, f_tilde_n, h_factor, phi
from .mpnum import (
    GUARD,
    ConfigError,
    DomainError,
    LogComplex,
    bits_of,
    logc_add,
    logc_mul,
    round_to,
    to_mpc,
    to_mpf,
    working,
)
from .specfun import airy_quartet, log_gamma_real

REAL_SNAP_TOL = 1e-8  # relative imaginary residual allowed at real arguments


@dataclass(frozen=True)
class Params:
    """Geometry of the region decomposition: strip height delta, disk radius eps."""

    delta: float = 0.25
    eps: float = 0.15

    def __post_init__(self):
        if not (0 < self.eps < self.delta):
            raise ConfigError(f"require 0 < eps < delta, got eps={self.eps}, delta={self.delta}")

    def k_edge(self, n: int, alpha, prec):
        """Right edge of the saturated strip: sqrt(n/alpha) + delta."""
        bits = bits_of(prec)
        with working(bits):
            v = mpmath.sqrt(n / to_mpf(alpha, bits)) + mpmath.mpf(self.delta)
        return round_to(bits, v)


@dataclass(frozen=True)
class RegionLabel:
    """Region tag plus the reflections the dispatcher applied."""

    tag: str
    negated: bool = False
    conjugated: bool = False


@dataclass(frozen=True)
class AsymResult:
    value: LogComplex
    region: RegionLabel
    dropped_term_bound: mpmath.mpf
    flags: tuple = ()


def classify_region(z, n: int, alpha, params: Params, prec=128) -> str:
    """Region tag for a point in the closed first quadrant.

    Ties resolve in the fixed order origin > C > B > D > A.
    """
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    if z.real < 0 or z.imag < 0:
        raise ConfigError("classify_region expects the closed first quadrant; use eval_asym for general z")
    with working(bits):
        eps = to_mpf(params.eps, bits)
        delta = to_mpf(params.delta, bits)
        if abs(z) < eps:
            return "origin"
        if abs(z - 2) <= eps:
            return "C"
        if z.imag <= delta:
            if eps <= z.real <= 2 - eps:
                return "B"
            if 2 + eps <= z.real <= params.k_edge(n, alpha, bits):
                return "D"
        return "A"


# ----------------------------------------------------------------------
# shared assembly pieces
# ----------------------------------------------------------------------

def _log_prefactor(n, alpha, bits):
    """log of Gamma(alpha) e^{n/2} / (sqrt(2 pi) n^{n/2+alpha-1/2}),
    evaluated at the caller's working precision."""
    a = to_mpf(alpha, bits)
    return (log_gamma_real(a, bits + GUARD) + mpmath.mpf(n) / 2
            - (mpmath.mpf(n) / 2 + a - mpmath.mpf(1) / 2) * mpmath.log(n)
            - mpmath.log(2 * mpmath.pi) / 2)


def _u_of(z):
    """u = Log((z + sqrt(z^2-4))/2) = log varphi(z/2); principal branch.

    On the closed first quadrant the argument never meets (-inf, 0], and
    band-real z picks up the upper-limit value automatically.
    """
    w = _w_root(z)
    return mpmath.log((z + w) / 2), w


def _phi_first_quadrant(n, alpha, z, bits):
    return phi(z, bits, half_plane="upper" if z.imag == 0 else "auto").value


def _quarter_root_log(z):
    """log of (z^2-4)^(-1/4) with product-principal factors."""
    return -(mpmath.log(z - 2) + mpmath.log(z + 2)) / 4


def _leading_exponent(n, alpha, z, bits):
    """Master exponent shared by the outer and saturated-strip formulas:
    prefactor / D * (z^2-4)^(-1/4) varphi(z/2)^(2a-1/2) e^{-n phi - a pi i + pi i/2}."""
    a = to_mpf(alpha, bits)
    dd = d_func(n, alpha, z, bits + GUARD, half_plane="upper" if z.imag == 0 else "auto")
    with working(bits, GUARD + 8):
        u, _ = _u_of(z)
        p = 2 * a - mpmath.mpf(1) / 2
        phv = _phi_first_quadrant(n, alpha, z, bits + GUARD)
        w = (_log_prefactor(n, alpha, bits) - mpmath.mpc(dd.log_mod, dd.phase)
             + _quarter_root_log(z) + p * u - n * phv
             + mpmath.mpc(0, mpmath.pi) * (mpmath.mpf(1) / 2 - a))
        w = mpmath.mpc(w)
    return w, phv


def _snap_real(value: LogComplex, bits, flags):
    """Assert a boundary value is real and snap its phase to 0 or pi."""
    with mp.workprec(bits):
        ph = value.wrapped_phase(bits)
        d0 = abs(ph)
        dpi = abs(abs(ph) - mpmath.pi)
        resid = min(d0, dpi)
        if resid > REAL_SNAP_TOL:
            raise ArithmeticError(
                f"boundary value expected real; imaginary residual {mpmath.nstr(resid, 5)}"
            )
        snapped = mpmath.mpf(0) if d0 <= dpi else +mpmath.pi
    return LogComplex(value.log_mod, snapped), flags + ("real-snapped",)


# ----------------------------------------------------------------------
# region evaluators
# ----------------------------------------------------------------------

def eval_region_a(n: int, alpha, z, prec) -> AsymResult:
    """Outer-region leading term; relative accuracy O(1/n)."""
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    w, _ = _leading_exponent(n, alpha, z, bits)
    value = LogComplex(round_to(bits, w.real), round_to(bits, w.imag))
    with working(bits):
        dropped = value.log_mod - mpmath.log(n)
    return AsymResult(value, RegionLabel("A"), round_to(bits, dropped))


def eval_region_d(n: int, alpha, z, prec) -> AsymResult:
    """Saturated-strip leading term.

    Identical in form to the outer region; the discarded correction is an
    absolute O(e^{n Re phi}), whose log-magnitude is reported and flagged
    if it is not negligible against the relative O(1/n).
    """
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    w, phv = _leading_exponent(n, alpha, z, bits)
    value = LogComplex(round_to(bits, w.real), round_to(bits, w.imag))
    flags = ()
    with working(bits):
        logn = mpmath.log(n)
        drop_rel = value.log_mod - logn
        drop_abs = _log_prefactor(n, alpha, bits) + n * phv.real
        dropped = max(drop_rel, drop_abs)
        if n * phv.real > -logn:
            flags = ("dropped-term-dominant",)
    return AsymResult(value, RegionLabel("D"), round_to(bits, dropped), flags)


def eval_region_b(n: int, alpha, z, prec) -> AsymResult:
    """Band-strip two-term oscillatory form, cancellation-guarded."""
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    a = to_mpf(alpha, bits)
    with working(bits, GUARD + 8):
        u, _ = _u_of(z)
        p = 2 * a - mpmath.mpf(1) / 2
        phv = _phi_first_quadrant(n, alpha, z, bits + GUARD)
        ipi = mpmath.mpc(0, mpmath.pi)
        wc = mpmath.mpc(_log_prefactor(n, alpha, bits) + _quarter_root_log(z))
        w1 = mpmath.mpc(p * u - n * phv - a * ipi + ipi / 2)
        w2 = mpmath.mpc(-p * u + n * phv + a * ipi)
    t1 = LogComplex(round_to(bits, w1.real), round_to(bits, w1.imag))
    t2 = LogComplex(round_to(bits, w2.real), round_to(bits, w2.imag))
    s, cancelled = logc_add(t1, t2, bits)
    value = logc_mul(LogComplex(round_to(bits, wc.real), round_to(bits, wc.imag)), s, bits)
    flags = ("cancel",) if cancelled else ()
    if z.imag == 0 and not value.is_zero():
        value, flags = _snap_real(value, bits, flags)
    with working(bits):
        dropped = wc.real + max(w1.real, w2.real) - mpmath.log(n)
    return AsymResult(value, RegionLabel("B"), round_to(bits, dropped), flags)


def eval_region_c(n: int, alpha, z, prec) -> AsymResult:
    """Turning-point (Airy) form, stable through z = 2.

    The bracket pairs (varphi^p -+ varphi^-p)(z^2-4)^(-1/4) ftilde^(-+1/4)
    are evaluated in the analytically reduced form
        2 sinh(p u)/w * (z+2)^(1/4) n^(-1/6) h^(-1/6)   and
        2 cosh(p u)   * (z+2)^(-1/4) n^(1/6) h^(1/6),
    with u = log varphi(z/2) and h the analytic cofactor of the
    turning-point map, so nothing blows up at the band edge.
    """
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    a = to_mpf(alpha, bits)
    if n < 1:
        raise ConfigError("eval_region_c requires n >= 1")
    ft = f_tilde_n(n, z, bits + GUARD)
    h = h_factor(z, bits + GUARD)
    quartet = airy_quartet(ft, bits + GUARD)
    with working(bits, GUARD + 8):
        p = 2 * a - mpmath.mpf(1) / 2
        u, w = _u_of(z)
        if w == 0:
            s_fac = mpmath.mpc(p)
            c_fac = mpmath.mpc(2)
        else:
            s_fac = 2 * mpmath.sinh(p * u) / w
            c_fac = 2 * mpmath.cosh(p * u)
        n6 = mpmath.mpf(n) ** (mpmath.mpf(1) / 6)
        h6 = mpmath.exp(mpmath.log(h) / 6)
        zp = mpmath.exp(mpmath.log(z + 2) / 4)
        tau = a * mpmath.pi - n * mpmath.pi / (z * z)
        ct, st = mpmath.cos(tau), mpmath.sin(tau)
        bracket_a = s_fac * zp / (n6 * h6) * (quartet.ai_d * ct + quartet.bi_d * st)
        bracket_b = c_fac * n6 * h6 / zp * (quartet.ai * ct + quartet.bi * st)
        m_sum = bracket_a + bracket_b
        m_scale = abs(bracket_a) + abs(bracket_b)
        log_pc = (log_gamma_real(a, bits + GUARD) + mpmath.mpf(n) / 2
                  - (mpmath.mpf(n) / 2 + a - mpmath.mpf(1) / 2) * mpmath.log(n)
                  - mpmath.log(2) / 2)
        cancelled = m_scale > 0 and (m_sum == 0 or abs(m_sum) < m_scale * mpmath.ldexp(1, -(bits // 2)))
        if m_sum == 0:
            value = LogComplex.zero()
        else:
            value = LogComplex(
                round_to(bits, log_pc + mpmath.log(abs(m_sum))),
                round_to(bits, mpmath.atan2(m_sum.imag, m_sum.real)),
            )
        dropped = log_pc + mpmath.log(m_scale) - mpmath.log(n)
    flags = ("cancel",) if cancelled else ()
    return AsymResult(value, RegionLabel("C"), round_to(bits, dropped), flags)


def eval_region_origin(n: int, alpha, z, prec) -> AsymResult:
    """Origin-disk two-term form (the node accumulation point).

    Valid on the closed upper half-disk minus 0; the lower half is served
    by the dispatcher through conjugation.
    """
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    a = to_mpf(alpha, bits)
    if z == 0:
        raise DomainError("eval_region_origin: z = 0 excluded")
    if z.imag < 0:
        raise DomainError("eval_region_origin expects Im z >= 0; use eval_asym for the lower half")
    with working(bits, GUARD + 8):
        u, _ = _u_of(z)
        p = 2 * a - mpmath.mpf(1) / 2
        phv = _phi_first_quadrant(n, alpha, z, bits + GUARD)
        ipi = mpmath.mpc(0, mpmath.pi)
        wc = mpmath.mpc(_log_prefactor(n, alpha, bits)
                        - (mpmath.log(2 - z) + mpmath.log(2 + z)) / 4)
        w1 = mpmath.mpc(ipi * (mpmath.mpf(1) / 4 - a) - n * phv + p * u)
        w2 = mpmath.mpc(-ipi * (mpmath.mpf(1) / 4 - a) + n * phv - p * u)
    t1 = LogComplex(round_to(bits, w1.real), round_to(bits, w1.imag))
    t2 = LogComplex(round_to(bits, w2.real), round_to(bits, w2.imag))
    s, cancelled = logc_add(t1, t2, bits)
    value = logc_mul(LogComplex(round_to(bits, wc.real), round_to(bits, wc.imag)), s, bits)
    flags = ("cancel",) if cancelled else ()
    if z.imag == 0 and not value.is_zero():
        value, flags = _snap_real(value, bits, flags)
    with working(bits):
        dropped = wc.real + max(w1.real, w2.real) - mpmath.log(n)
    return AsymResult(value, RegionLabel("origin"), round_to(bits, dropped), flags)


_EVALUATORS = {
    "origin": eval_region_origin,
    "A": eval_region_a,
    "B": eval_region_b,
    "C": eval_region_c,
    "D": eval_region_d,
}


def eval_asym(n: int, alpha, z, params: Params = None, prec=256) -> AsymResult:
    """Full-plane asymptotic value of the rescaled monic polynomial.

    Reduces z to the closed first quadrant via parity (phase shift by
    n pi) and Schwarz conjugation (phase negation), classifies, and
    dispatches; both reductions act exactly on the LogComplex fields.
    """
    bits = bits_of(prec)
    if params is None:
        params = Params()
    z = to_mpc(z, bits)
    if z == 0:
        raise DomainError("eval_asym: z = 0 excluded")
    if n < 1:
        raise ConfigError("eval_asym requires n >= 1")
    with mp.workprec(bits):
        negated = z.real < 0
        z1 = -z if negated else z
        conjugated = z1.imag < 0
        if conjugated:
            z1 = mpmath.conj(z1)
    tag = classify_region(z1, n, alpha, params, bits)
    res = _EVALUATORS[tag](n, alpha, z1, bits)
    value = res.value
    # parity shift first (one rounded add on the reduced phase), exact
    # conjugation last: each symmetry pair then differs by a single
    # identically-rounded operation and compares bit for bit.
    if negated:
        with mp.workprec(bits):
            value = LogComplex(value.log_mod, value.phase + n * mpmath.pi)
    if conjugated:
        value = value.conjugate()
    return AsymResult(
        value,
        RegionLabel(tag, negated, conjugated),
        res.dropped_term_bound,
        res.flags,
    )
