"""Configurable-precision complex arithmetic with explicit branch-cut handling.

Values are mpmath ``mpf``/``mpc`` numbers.  Every operation takes the target
mantissa width in bits explicitly, computes with guard bits and rounds the
result back, so no hidden global precision state needs configuring and the
same call always produces the same bits.

Quantities scaling like ``exp(+-n log n)`` travel as :class:`LogComplex`
pairs ``(log_mod, phase)``.  The phase is deliberately *not* reduced modulo
2*pi: windings must survive p-th powers of products.  Multiplication and
division act exactly on the fields; addition factors out the larger modulus
and reports a cancellation flag when the terms annihilate below
``2**(-bits/2)`` relative.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp

DEFAULT_PREC = 256
MIN_PREC = 64

# Guard bits used inside elementary operations before rounding to the
# requested width.
GUARD = 16


class DomainError(ValueError):
    """Input on (or within tolerance of) a branch cut or excluded set."""


class PoleError(DomainError):
    """Evaluation at a pole."""


class ConfigError(ValueError):
    """Invalid parameter combination."""


@dataclass(frozen=True)
class Precision:
    """Mantissa width in bits for all arithmetic downstream of a call."""

    bits: int

    def __post_init__(self):
        if int(self.bits) < MIN_PREC:
            raise ConfigError(f"precision must be >= {MIN_PREC} bits, got {self.bits}")


def bits_of(prec) -> int:
    """Normalize an ``int`` or :class:`Precision` to a bit count."""
    if isinstance(prec, Precision):
        return int(prec.bits)
    b = int(prec)
    if b < MIN_PREC:
        raise ConfigError(f"precision must be >= {MIN_PREC} bits, got {prec}")
    return b


def working(prec, guard: int = GUARD):
    """Context manager running the body at ``prec + guard`` bits."""
    return mp.workprec(bits_of(prec) + guard)


def to_mpf(x, prec) -> mpmath.mpf:
    """Round a real-valued input (int/float/str/mpf) to ``prec`` bits."""
    with mp.workprec(bits_of(prec)):
        v = mpmath.mpf(x)
    return v


def to_mpc(z, prec) -> mpmath.mpc:
    """Round a complex-valued input to ``prec`` bits per component."""
    with mp.workprec(bits_of(prec)):
        if isinstance(z, (tuple, list)) and len(z) == 2:
            v = mpmath.mpc(mpmath.mpf(z[0]), mpmath.mpf(z[1]))
        else:
            v = mpmath.mpc(z)
    return v


def round_to(prec, x):
    """Re-round a value (mpf or mpc) to ``prec`` bits."""
    with mp.workprec(bits_of(prec)):
        return +x


def round_to_mpc(prec, x) -> mpmath.mpc:
    """Re-round to ``prec`` bits, coercing to mpc inside the context (an
    mpc() conversion outside would round at the ambient precision)."""
    with mp.workprec(bits_of(prec)):
        return +mpmath.mpc(x)


def cut_tolerance(prec) -> mpmath.mpf:
    """Distance below which a point counts as lying on a branch cut."""
    return mpmath.ldexp(mpmath.mpf(1), -(bits_of(prec) // 2))


def raw_mpf(x):
    """The exact libmp tuple of a real value, never re-rounded."""
    if hasattr(x, "_mpf_"):
        return x._mpf_
    with mp.workprec(max(mp.prec, 512)):
        return mpmath.mpf(x)._mpf_


def neg_exact(x):
    """Sign flip without context rounding (mpmath's unary minus re-rounds)."""
    return mp.make_mpf(mpmath.libmp.mpf_neg(raw_mpf(x)))


def dist_to_real_interval(z, lo, hi, prec=128) -> mpmath.mpf:
    """Euclidean distance from ``z`` to the real segment ``[lo, hi]``.

    ``lo`` may be ``-inf`` and ``hi`` ``+inf`` for rays.  Computed at
    ``prec`` bits so domain checks do not depend on the caller's ambient
    mpmath context.
    """
    with mp.workprec(bits_of(prec) + GUARD):
        z = mpmath.mpc(z)
        x, y = z.real, z.imag
        if x < lo:
            dx = lo - x
        elif x > hi:
            dx = x - hi
        else:
            dx = mpmath.mpf(0)
        if dx == 0:
            return abs(y)
        return mpmath.hypot(dx, y)


def require_off_cut(z, lo, hi, prec, what: str):
    """Raise :class:`DomainError` if ``z`` is within cut tolerance of [lo,hi]."""
    if dist_to_real_interval(z, lo, hi, prec) < cut_tolerance(prec):
        raise DomainError(f"{what}: z={z} lies on or too close to the cut [{lo}, {hi}]")


# ----------------------------------------------------------------------
# LogComplex
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class LogComplex:
    """A complex value stored as exp(log_mod + i*phase).

    ``log_mod`` is the natural log of the modulus (``-inf`` encodes an exact
    zero); ``phase`` is in radians and unnormalized.
    """

    log_mod: mpmath.mpf
    phase: mpmath.mpf

    @classmethod
    def zero(cls) -> "LogComplex":
        return cls(mpmath.mpf("-inf"), mpmath.mpf(0))

    @classmethod
    def one(cls) -> "LogComplex":
        return cls(mpmath.mpf(0), mpmath.mpf(0))

    @classmethod
    def from_exponent(cls, w, prec) -> "LogComplex":
        """Represent exp(w) for a complex exponent w."""
        w = to_mpc(w, prec)
        return cls(w.real, w.imag)

    @classmethod
    def from_complex(cls, z, prec) -> "LogComplex":
        z = to_mpc(z, prec)
        if z == 0:
            return cls.zero()
        with working(prec):
            lm = mpmath.log(abs(z))
            ph = mpmath.atan2(z.imag, z.real)
        return cls(round_to(prec, lm), round_to(prec, ph))

    def is_zero(self) -> bool:
        return mpmath.isinf(self.log_mod) and self.log_mod < 0

    def to_complex(self, prec) -> mpmath.mpc:
        """Materialize as an mpc (mpf exponents are unbounded, so no overflow)."""
        if self.is_zero():
            return to_mpc(0, prec)
        with working(prec):
            r = mpmath.exp(self.log_mod)
            v = mpmath.mpc(r * mpmath.cos(self.phase), r * mpmath.sin(self.phase))
        return round_to(prec, v)

    def wrapped_phase(self, prec) -> mpmath.mpf:
        """Phase reduced to (-pi, pi] for display."""
        with working(prec):
            p = self.phase
            twopi = 2 * mpmath.pi
            # ceil form keeps odd multiples of pi on the +pi side
            p = p - twopi * mpmath.ceil((p - mpmath.pi) / twopi)
        return round_to(prec, p)

    def conjugate(self) -> "LogComplex":
        # exact phase negation; mpmath's unary minus would round at the
        # caller's ambient precision
        return LogComplex(self.log_mod, neg_exact(self.phase))


def logc_mul(a: LogComplex, b: LogComplex, prec) -> LogComplex:
    if a.is_zero() or b.is_zero():
        return LogComplex.zero()
    with mp.workprec(bits_of(prec)):
        return LogComplex(a.log_mod + b.log_mod, a.phase + b.phase)


def logc_div(a: LogComplex, b: LogComplex, prec) -> LogComplex:
    if b.is_zero():
        raise ZeroDivisionError("LogComplex division by exact zero")
    if a.is_zero():
        return LogComplex.zero()
    with mp.workprec(bits_of(prec)):
        return LogComplex(a.log_mod - b.log_mod, a.phase - b.phase)


def logc_pow(a: LogComplex, p, prec) -> LogComplex:
    """a**p for scalar p (complex allowed); uses the unnormalized phase."""
    if a.is_zero():
        p = to_mpc(p, prec)
        if p.real > 0:
            return LogComplex.zero()
        raise DomainError("0**p with Re p <= 0")
    with working(prec):
        p = mpmath.mpc(p)
        w = p * mpmath.mpc(a.log_mod, a.phase)
    return LogComplex(round_to(prec, w.real), round_to(prec, w.imag))


def logc_add(a: LogComplex, b: LogComplex, prec):
    """Cancellation-guarded addition.

    Returns ``(result, cancelled)``; ``cancelled`` is True when the relative
    residual is below ``2**(-bits/2)``.  Terms that annihilate to below one
    ulp of the working precision (opposite values up to rounding of pi)
    snap to the exact zero.
    """
    bits = bits_of(prec)
    if a.is_zero():
        return b, False
    if b.is_zero():
        return a, False
    if b.log_mod > a.log_mod:
        a, b = b, a
    with mp.workprec(bits + GUARD):
        d = b.log_mod - a.log_mod
        w = 1 + mpmath.exp(mpmath.mpc(d, b.phase - a.phase))
        if w == 0 or abs(w) < mpmath.ldexp(1, -(bits - 4)):
            return LogComplex.zero(), True
        lw = mpmath.log(abs(w))
        ph = a.phase + mpmath.atan2(w.imag, w.real)
        lm = a.log_mod + lw
        cancelled = lw < -(bits // 2) * mpmath.log(2)
    return LogComplex(round_to(prec, lm), round_to(prec, ph)), bool(cancelled)


# ----------------------------------------------------------------------
# Branch-cut-aware elementary functions
# ----------------------------------------------------------------------

def sqrt_zsq_minus4(z, prec) -> mpmath.mpc:
    """The branch of sqrt(z**2 - 4) analytic on C \\ [-2, 2] with value ~ z
    at infinity.

    Computed as sqrt(z-2)*sqrt(z+2) with principal square roots: the two
    cut contributions cancel on (-inf, -2), leaving exactly the segment
    [-2, 2] as the cut.  Points within ``2**(-bits/2)`` of the cut raise
    :class:`DomainError` rather than silently picking a side.
    """
    z = to_mpc(z, prec)
    require_off_cut(z, -2, 2, prec, "sqrt_zsq_minus4")
    with working(prec):
        w = mpmath.sqrt(z - 2) * mpmath.sqrt(z + 2)
    return round_to(prec, w)


def sqrt_zsq_minus4_limit(x, prec, upper: bool = True) -> mpmath.mpc:
    """One-sided limit of sqrt(z**2-4) on the cut: +-i*sqrt(4-x**2) for
    x in (-2, 2), approached from the upper (lower) half-plane."""
    x = to_mpf(x, prec)
    if not (-2 <= x <= 2):
        with working(prec):
            s = mpmath.sqrt(x - 2) * mpmath.sqrt(x + 2) if x > 2 else -mpmath.sqrt(mpmath.mpf(x) ** 2 - 4)
        return round_to_mpc(prec, s)
    with working(prec):
        r = mpmath.sqrt((2 - x) * (2 + x))
        v = mpmath.mpc(0, r if upper else -r)
    return round_to(prec, v)


def pow_principal(z, p, prec) -> LogComplex:
    """exp(p*Log z) with Arg z in (-pi, pi], returned in LogComplex form."""
    z = to_mpc(z, prec)
    if z == 0:
        p = to_mpc(p, prec)
        if p.real > 0:
            return LogComplex.zero()
        raise DomainError("pow_principal: 0**p with Re p <= 0")
    with working(prec):
        p = mpmath.mpc(p)
        logz = mpmath.mpc(mpmath.log(abs(z)), mpmath.atan2(z.imag, z.real))
        w = p * logz
    return LogComplex(round_to(prec, w.real), round_to(prec, w.imag))
