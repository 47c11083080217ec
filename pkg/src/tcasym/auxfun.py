"""Auxiliary functions feeding the region-wise asymptotic formulas.

Contents: the limiting zero density psi (band |x| <= 2, saturated
2/|x|^3 outside), the explicit derivative of the logarithmic potential,
the regularized phase functions phi-tilde / phi / phi-hat, the conformal
turning-point map, the Gamma-ratio D-functions with their algebraic E
prefactors, the node-counting trio (theta, gamma, Pi), and the Joukowski
inverse varphi.

Branch discipline: every power/log is a principal branch of an explicit
factor, chosen so each function is analytic exactly off its stated cut.
mpmath puts Arg on (-pi, pi], so evaluating *on* a cut yields the limit
from the upper half-plane; functions that are half-plane-specific take an
explicit ``half_plane`` override ('upper'/'lower') for boundary studies
and refuse real inputs otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath
from mpmath import mp

from .mpnum import (
    GUARD,
    ConfigError,
    DomainError,
    LogComplex,
    bits_of,
    cut_tolerance,
    dist_to_real_interval,
    require_off_cut,
    round_to,
    round_to_mpc,
    to_mpc,
    to_mpf,
    working,
)
from .specfun import log_gamma_complex, log_gamma_real

_INF = mpmath.inf


def _resolve_half(z, half_plane: str) -> str:
    if half_plane == "auto":
        if z.imag > 0:
            return "upper"
        if z.imag < 0:
            return "lower"
        raise DomainError(
            "real argument needs an explicit half_plane ('upper'/'lower') for a one-sided value"
        )
    if half_plane not in ("upper", "lower"):
        raise ConfigError(f"half_plane must be 'auto', 'upper' or 'lower', not {half_plane!r}")
    return half_plane


# ----------------------------------------------------------------------
# Density
# ----------------------------------------------------------------------

def density_psi(x, prec, zero_limit: bool = True):
    """Limiting zero-counting density.

    Band |x| <= 2:  (1/pi) (4 atan(|x|/sqrt(4-x^2)) / |x|^3 - sqrt(4-x^2)/x^2);
    saturated |x| > 2:  2/|x|^3.  Even in x; continuous (value 1/4) at the
    band edge.  At x = 0 the band branch has the finite limit 1/(3 pi),
    returned when ``zero_limit`` is set, else a DomainError.
    """
    bits = bits_of(prec)
    x = to_mpf(x, bits)
    with mp.workprec(bits):
        t = abs(x)
        sat = t > 2
        if sat:
            return 2 / (t * t * t)
    if t == 0 and not zero_limit:
        raise DomainError("density_psi: x = 0 excluded (zero_limit disabled)")
    # the two 2/t^2 singular parts cancel; near 0 switch to the expansion
    if t < mpmath.ldexp(mpmath.mpf(1), -(bits // 5)):
        with working(bits):
            t2 = t * t
            v = (mpmath.mpf(1) / 3 + t2 / 40 + 3 * t2 * t2 / 896) / mpmath.pi
        return round_to(bits, v)
    with mp.workprec(2 * bits + GUARD):
        r = mpmath.sqrt((2 - t) * (2 + t))
        v = (4 * mpmath.atan2(t, r) / (t * t * t) - r / (t * t)) / mpmath.pi
    return round_to(bits, v)


# ----------------------------------------------------------------------
# Square-root and Joukowski helpers (product-principal branches)
# ----------------------------------------------------------------------

def _w_root(z):
    """sqrt(z-2) sqrt(z+2), principal factors: analytic off [-2, 2], ~z at
    infinity; evaluated at the caller's working precision."""
    return mpmath.sqrt(z - 2) * mpmath.sqrt(z + 2)


def varphi(z, prec):
    """z + sqrt(z^2-1) with cut [-1, 1]; behaves like 2z at infinity."""
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    require_off_cut(z, -1, 1, bits, "varphi")
    with working(bits):
        v = z + mpmath.sqrt(z - 1) * mpmath.sqrt(z + 1)
    return round_to(bits, v)


def varphi_limit(x, prec, upper: bool = True):
    """One-sided limit of varphi on the cut: x +- i sqrt(1-x^2)."""
    bits = bits_of(prec)
    x = to_mpf(x, bits)
    with mp.workprec(bits):
        outside = abs(x) > 1
    if outside:
        return varphi(x, bits)
    with working(bits):
        r = mpmath.sqrt((1 - x) * (1 + x))
        v = mpmath.mpc(x, r if upper else -r)
    return round_to(bits, v)


# ----------------------------------------------------------------------
# Phase functions
# ----------------------------------------------------------------------

def g_prime(z, prec, half_plane: str = "auto"):
    """Derivative of the logarithmic potential, explicit closed form.

    4/z^3 log((z + sqrt(z^2-4))/2) + sqrt(z^2-4)/z^2 -+ 2 pi i / z^3 on the
    upper/lower half-plane.  Real z raises unless ``half_plane`` selects a
    one-sided limit (see :func:`g_prime_boundary`).
    """
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    if z.imag == 0:
        return g_prime_boundary(z.real, bits, upper=(_resolve_half(z, half_plane) == "upper"))
    half = _resolve_half(z, half_plane)
    with working(bits):
        w = _w_root(z)
        el = mpmath.log((z + w) / 2)
        sgn = 1 if half == "upper" else -1
        z3 = z * z * z
        v = 4 * el / z3 + w / (z * z) - sgn * 2 * mpmath.pi * 1j / z3
    return round_to(bits, v)


def g_prime_boundary(x, prec, upper: bool = True):
    """One-sided limits of g' on the real axis (poles at 0, +-2 excluded)."""
    bits = bits_of(prec)
    x = to_mpf(x, bits)
    with mp.workprec(bits):
        at_pole = x == 0 or abs(abs(x) - 2) < cut_tolerance(bits)
    if at_pole:
        raise DomainError("g_prime_boundary: x in {0, +-2}")
    with working(bits):
        z = mpmath.mpc(x, 0)
        w = _w_root(z)                      # upper limit on (-2,2) by Arg convention
        el = mpmath.log((z + w) / 2)
        z3 = z * z * z
        v = 4 * el / z3 + w / (z * z) - 2 * mpmath.pi * 1j / z3
        if not upper:
            v = mpmath.conj(v)
    return round_to(bits, v)


def phi_tilde(z, prec, on_cut: str = "reject"):
    """Regularized phase, analytic on C \\ (-inf, 2]; real negative on (2, inf).

    Closed form (2/z^2 - 1) log((z + sqrt(z^2-4))/2) + sqrt(z^2-4)/(2z).
    ``on_cut='upper'``/``'lower'`` permits band points x in (0, 2) and
    returns the one-sided limit; 'reject' (default) raises near the cut.
    """
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    near_cut = dist_to_real_interval(z, -_INF, 2, bits) < cut_tolerance(bits)
    if near_cut and not z.real > 2:
        if on_cut == "reject":
            raise DomainError(f"phi_tilde: z={z} on or too close to the cut (-inf, 2]")
        if on_cut not in ("upper", "lower"):
            raise ConfigError("on_cut must be 'reject', 'upper' or 'lower'")
        if not z.real > 0:
            raise DomainError("phi_tilde boundary values available only for Re z > 0")
        # dedicated boundary form on the band: the limit is purely
        # imaginary, +-i [ (2/x^2 - 1) acos(x/2) + sqrt(4-x^2)/(2x) ]
        with working(bits, GUARD + 8):
            x = z.real
            b = (2 / (x * x) - 1) * mpmath.acos(x / 2) \
                + mpmath.sqrt((2 - x) * (2 + x)) / (2 * x)
            v = mpmath.mpc(0, b if on_cut == "upper" else -b)
        return round_to(bits, v)
    with working(bits, GUARD + 8):
        w = _w_root(z)
        el = mpmath.log((z + w) / 2)
        v = (2 / (z * z) - 1) * el + w / (2 * z)
    return round_to(bits, v)


@dataclass(frozen=True)
class PhiValue:
    """A phi evaluation tagged with the half-plane whose branch was used."""

    value: mpmath.mpc
    half_plane: str


def phi(z, prec, half_plane: str = "auto") -> PhiValue:
    """phi = phi_tilde -+ i pi / z^2 on the upper/lower half-plane.

    Bounded near the origin (the i pi/z^2 singularities cancel); purely
    imaginary boundary values on the band.
    """
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    half = _resolve_half(z, half_plane)
    with working(bits, GUARD + 8):
        if z.imag == 0:
            pt = phi_tilde(z, bits + GUARD, on_cut=half) if z.real <= 2 else phi_tilde(z, bits + GUARD)
        else:
            pt = phi_tilde(z, bits + GUARD)
        sgn = 1 if half == "upper" else -1
        v = pt - sgn * mpmath.pi * 1j / (z * z)
    return PhiValue(round_to_mpc(bits, v), half)


def phi_hat(z, prec):
    """Phase regularized across the left saturated region: analytic on
    C \\ [-2, inf), equal to phi_tilde(-z) there, real negative on (-inf, -2)."""
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    if dist_to_real_interval(z, -2, _INF, bits) < cut_tolerance(bits):
        raise DomainError(f"phi_hat: z={z} on or too close to the cut [-2, inf)")
    with mp.workprec(bits):
        zn = -z
    return phi_tilde(zn, bits)


# ----------------------------------------------------------------------
# Turning-point map
# ----------------------------------------------------------------------

F_TILDE_RADIUS = 0.5
_H_SERIES_RADIUS = 1  # coefficient circle |z-2| = 1; h is analytic on |z-2| < 4


def _h_closed_form(z):
    """-(3/2) phi_tilde(z) (z-2)^(-3/2): the analytic cofactor of the
    turning-point map.  Valid off the real segment left of 2 (the two
    branch jumps cancel, so this continues analytically across the band)."""
    w = _w_root(z)
    el = mpmath.log((z + w) / 2)
    pt = (2 / (z * z) - 1) * el + w / (2 * z)
    return mpmath.mpf(-1.5) * pt * mpmath.exp(mpmath.mpf(-1.5) * mpmath.log(z - 2))


@lru_cache(maxsize=None)
def _h_series_coeffs(bits: int):
    """Real Taylor coefficients of h at 2, by trapezoidal Cauchy sums on the
    circle |z-2| = 1 (nodes offset off the real axis)."""
    nterms = max(48, bits // 3 + 24)
    m_nodes = 8
    while m_nodes < 4 * nterms:
        m_nodes *= 2
    work = bits + 96
    with mp.workprec(work):
        roots = [mpmath.exp(2j * mpmath.pi * (m + mpmath.mpf(1) / 2) / m_nodes) for m in range(m_nodes)]
        hvals = [_h_closed_form(2 + r) for r in roots]
        coeffs = []
        for j in range(nterms):
            s = mpmath.mpc(0)
            for m in range(m_nodes):
                s += hvals[m] * mpmath.conj(roots[m]) ** j
            # h is real-analytic: imaginary dust is quadrature noise
            coeffs.append(round_to(bits + 32, s.real / m_nodes))
    return tuple(coeffs)


def h_factor(z, prec):
    """h(z) with h(2) = 1, the analytic cofactor in the factorization of the
    turning-point map; evaluated by the cached Taylor series (|z-2| < 0.5)."""
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    with mp.workprec(bits):
        outside = abs(z - 2) >= F_TILDE_RADIUS
    if outside:
        raise DomainError(f"h_factor: |z-2| must be < {F_TILDE_RADIUS}")
    with working(bits, GUARD + 8):
        u = z - 2
        acc = mpmath.mpc(0)
        for c in reversed(_h_series_coeffs(bits)):
            acc = acc * u + c
    return round_to(bits, acc)


def f_tilde_n(n: int, z, prec):
    """The conformal map feeding the Airy functions: n^(2/3) (z-2) h(z)^(2/3).

    Analytic on |z-2| < 0.5, vanishing linearly at 2, positive on (2, 2.5).
    """
    bits = bits_of(prec)
    if n < 1:
        raise ConfigError("f_tilde_n requires n >= 1")
    z = to_mpc(z, bits)
    h = h_factor(z, bits + GUARD)
    with working(bits, GUARD):
        v = mpmath.mpf(n) ** (mpmath.mpf(2) / 3) * (z - 2) * mpmath.exp(mpmath.mpf(2) / 3 * mpmath.log(h))
    return round_to_mpc(bits, v)


# ----------------------------------------------------------------------
# D-functions (Gamma-ratio jump absorbers)
# ----------------------------------------------------------------------

def _half_log_twopi():
    # evaluated at the caller's working precision
    return mpmath.log(2 * mpmath.pi) / 2


def d_func(n: int, alpha, z, prec, half_plane: str = "auto") -> LogComplex:
    """D(z): Gamma(alpha - n/z^2) e^(-n/z^2) (-n/z^2)^(n/z^2-alpha+1/2) / sqrt(2 pi),
    with -1/z^2 read as e^(+-i pi)/z^2 on the upper/lower half-plane."""
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    half = _resolve_half(z, half_plane)
    a = to_mpf(alpha, bits)
    with working(bits, GUARD + 8):
        s = n / (z * z)
        sgn = 1 if half == "upper" else -1
        log_m = mpmath.log(mpmath.mpf(n)) + sgn * mpmath.pi * 1j - 2 * mpmath.log(z)
        w = log_gamma_complex(a - s, bits + GUARD) - s - _half_log_twopi() + (s - a + mpmath.mpf(1) / 2) * log_m
        w = mpmath.mpc(w)
    return LogComplex(round_to(bits, w.real), round_to(bits, w.imag))


def d_tilde_func(n: int, alpha, z, prec) -> LogComplex:
    """D-tilde(z): analytic and nonzero on C \\ (-inf, 0]; -> 1 for large n."""
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    if dist_to_real_interval(z, -_INF, 0, bits) < cut_tolerance(bits):
        raise DomainError(f"d_tilde_func: z={z} on or too close to the cut (-inf, 0]")
    a = to_mpf(alpha, bits)
    with working(bits, GUARD + 8):
        s = n / (z * z)
        log_p = mpmath.log(mpmath.mpf(n)) - 2 * mpmath.log(z)
        w = _half_log_twopi() - log_gamma_complex(1 + s - a, bits + GUARD) - s + (s - a + mpmath.mpf(1) / 2) * log_p
        w = mpmath.mpc(w)
    return LogComplex(round_to(bits, w.real), round_to(bits, w.imag))


def d_hat_func(n: int, alpha, z, prec) -> LogComplex:
    """D-hat(z): analytic on C \\ [0, inf); branch via arg(-z) in (-pi, pi)."""
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    if dist_to_real_interval(z, 0, _INF, bits) < cut_tolerance(bits):
        raise DomainError(f"d_hat_func: z={z} on or too close to the cut [0, inf)")
    a = to_mpf(alpha, bits)
    with working(bits, GUARD + 8):
        s = n / (z * z)
        log_p = mpmath.log(mpmath.mpf(n)) - 2 * mpmath.log(-z)
        w = _half_log_twopi() - log_gamma_complex(1 + s - a, bits + GUARD) - s + (s - a + mpmath.mpf(1) / 2) * log_p
        w = mpmath.mpc(w)
    return LogComplex(round_to(bits, w.real), round_to(bits, w.imag))


@dataclass(frozen=True)
class DTriple:
    """D, D-tilde, D-hat at a common (n, alpha, z), all as LogComplex."""

    d: LogComplex
    d_tilde: LogComplex
    d_hat: LogComplex


def d_triple(n: int, alpha, z, prec) -> DTriple:
    """All three D-functions; requires z off the real axis so every member
    is defined.  They satisfy
        D-tilde = D (1 - e^(-+ 2 i theta)),  D-hat = D (1 - e^(+- 2 i theta))
    on the upper/lower half-plane."""
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    with mp.workprec(bits):
        on_axis = abs(z.imag) < cut_tolerance(bits)
    if on_axis:
        raise DomainError("d_triple: z must be off the real axis")
    return DTriple(
        d_func(n, alpha, z, bits),
        d_tilde_func(n, alpha, z, bits),
        d_hat_func(n, alpha, z, bits),
    )


# ----------------------------------------------------------------------
# E-functions (algebraic prefactors)
# ----------------------------------------------------------------------

def _e_prefactor(alpha, bits):
    return _half_log_twopi() - log_gamma_real(alpha, bits + GUARD)


def e_func(alpha, z, prec) -> LogComplex:
    """E = sqrt(2 pi)/Gamma(alpha) (2-z)^(1/2-alpha) (z+2)^(1/2-alpha),
    principal factors; analytic off (-inf, -2) u (2, inf)."""
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    a = to_mpf(alpha, bits)
    p = mpmath.mpf(1) / 2 - a
    if p != 0:
        for lo, hi in ((-_INF, -2), (2, _INF)):
            if dist_to_real_interval(z, lo, hi, bits) < cut_tolerance(bits):
                raise DomainError(f"e_func: z={z} on or too close to a cut")
    with working(bits, GUARD):
        w = _e_prefactor(a, bits) + p * (mpmath.log(2 - z) + mpmath.log(z + 2))
        w = mpmath.mpc(w)
    return LogComplex(round_to(bits, w.real), round_to(bits, w.imag))


def e_tilde_func(alpha, z, prec) -> LogComplex:
    """E-tilde = sqrt(2 pi)/Gamma(alpha) (z^2-4)^(1/2-alpha), cut (-inf, 2)."""
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    a = to_mpf(alpha, bits)
    p = mpmath.mpf(1) / 2 - a
    if p != 0 and dist_to_real_interval(z, -_INF, 2, bits) < cut_tolerance(bits):
        raise DomainError(f"e_tilde_func: z={z} on or too close to the cut (-inf, 2)")
    with working(bits, GUARD):
        w = _e_prefactor(a, bits) + p * (mpmath.log(z - 2) + mpmath.log(z + 2))
        w = mpmath.mpc(w)
    return LogComplex(round_to(bits, w.real), round_to(bits, w.imag))


def e_hat_func(alpha, z, prec) -> LogComplex:
    """E-hat = sqrt(2 pi)/Gamma(alpha) (-z-2)^(1/2-alpha) (2-z)^(1/2-alpha),
    cut (-2, inf)."""
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    a = to_mpf(alpha, bits)
    p = mpmath.mpf(1) / 2 - a
    if p != 0 and dist_to_real_interval(z, -2, _INF, bits) < cut_tolerance(bits):
        raise DomainError(f"e_hat_func: z={z} on or too close to the cut (-2, inf)")
    with working(bits, GUARD):
        w = _e_prefactor(a, bits) + p * (mpmath.log(-z - 2) + mpmath.log(2 - z))
        w = mpmath.mpc(w)
    return LogComplex(round_to(bits, w.real), round_to(bits, w.imag))


def e_family(alpha, z, prec):
    """(E, E-tilde, E-hat) at a common point off the real axis."""
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    return e_func(alpha, z, bits), e_tilde_func(alpha, z, bits), e_hat_func(alpha, z, bits)


# ----------------------------------------------------------------------
# theta / gamma / Pi
# ----------------------------------------------------------------------

def theta_gamma_pi(n: int, alpha, z, prec):
    """theta = n pi / z^2 - pi alpha, gamma = -2 n pi / z^3, Pi = sin(theta)/gamma.

    Pi vanishes at every rescaled node sqrt(n)(k+alpha)^(-1/2), where the
    normalized slope [sin theta]'/gamma equals (-1)^k.
    """
    bits = bits_of(prec)
    z = to_mpc(z, bits)
    if z == 0:
        raise DomainError("theta_gamma_pi: pole at z = 0")
    a = to_mpf(alpha, bits)
    with working(bits, GUARD):
        th = n * mpmath.pi / (z * z) - mpmath.pi * a
        gz = -2 * n * mpmath.pi / (z * z * z)
        pi_z = mpmath.sin(th) / gz
    return round_to(bits, th), round_to(bits, gz), round_to(bits, pi_z)
