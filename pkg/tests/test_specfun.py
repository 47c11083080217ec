import mpmath
import pytest

from tcasym.mpnum import PoleError, working
from tcasym.specfun import (
    airy_quartet,
    airy_series_reference,
    bernoulli_fraction,
    crossover_radius,
    log_gamma_complex,
    log_gamma_real,
)

from conftest import rel_diff


class TestBernoulli:
    def test_known_values(self):
        from fractions import Fraction
        assert bernoulli_fraction(0) == 1
        assert bernoulli_fraction(1) == Fraction(-1, 2)
        assert bernoulli_fraction(2) == Fraction(1, 6)
        assert bernoulli_fraction(3) == 0
        assert bernoulli_fraction(12) == Fraction(-691, 2730)


class TestLogGamma:
    def test_gamma_one(self):
        v = log_gamma_complex(1, 128)
        assert abs(v) < mpmath.mpf(2) ** -120

    def test_factorial(self):
        v = log_gamma_complex(5, 128)
        with working(160):
            ref = mpmath.log(mpmath.mpf(24))
        assert rel_diff(v, ref, 128) < mpmath.mpf(2) ** -118

    def test_half_reflection_oracle(self):
        # Gamma(1/2) = sqrt(pi), via the reflection identity at s = 1/2:
        # Gamma(s) Gamma(1-s) = pi / sin(pi s) => Gamma(1/2)^2 = pi
        v = log_gamma_complex(mpmath.mpf(1) / 2, 128)
        with working(160):
            ref = mpmath.log(mpmath.pi) / 2
        assert rel_diff(v, ref, 128) < mpmath.mpf(2) ** -118

    def test_recurrence_property(self, rng):
        for _ in range(25):
            z = mpmath.mpc(rng.uniform(-8, 8), rng.uniform(-8, 8))
            if abs(z.imag) < 0.05:
                continue
            a = log_gamma_complex(z, 192)
            b = log_gamma_complex(z + 1, 192)
            with working(192):
                resid = abs(b - a - mpmath.log(z))
                scale = max(1, abs(b))
            assert resid / scale < mpmath.mpf(2) ** -(192 - 16)

    def test_schwarz(self, rng):
        for _ in range(15):
            z = mpmath.mpc(rng.uniform(-8, 8), rng.uniform(0.05, 6))
            a = log_gamma_complex(z, 128)
            b = log_gamma_complex(mpmath.conj(z), 128)
            assert a.real - b.real == 0 and a.imag + b.imag == 0

    def test_against_library(self, rng):
        # independent implementation cross-check at spot points
        pts = [mpmath.mpc(2, 3), mpmath.mpc(-5.3, 0.2), mpmath.mpc(-5.3, -0.2),
               mpmath.mpc(0.5, 0), mpmath.mpc(12, -40), mpmath.mpc(-30.2, 1e-3),
               mpmath.mpc(-0.5, 0)]
        for z in pts:
            mine = log_gamma_complex(z, 192)
            with working(256):
                ref = mpmath.loggamma(z)
                scale = max(1, abs(ref))
                assert abs(mine - ref) / scale < mpmath.mpf(2) ** -(192 - 12)

    def test_real_path_matches_complex(self):
        for x in ("0.75", "3.5", "1234.25"):
            a = log_gamma_real(mpmath.mpf(x), 160)
            b = log_gamma_complex(mpmath.mpf(x), 160)
            assert abs(a - b.real) <= abs(mpmath.ldexp(a, -150))

    @pytest.mark.parametrize("z", [0, -1, -7])
    def test_poles(self, z):
        with pytest.raises(PoleError):
            log_gamma_complex(z, 128)
        with pytest.raises(PoleError):
            log_gamma_real(0, 128)


class TestAiryQuartet:
    def test_value_at_zero(self):
        # Ai(0) = 3^(-2/3)/Gamma(2/3), Bi(0) = 3^(-1/6)/Gamma(2/3),
        # against the series oracle re-summed at 4x precision
        q = airy_quartet(0, 128)
        ref = airy_series_reference(0, 128)
        for got, want in ((q.ai, ref.ai), (q.bi, ref.bi), (q.ai_d, ref.ai_d), (q.bi_d, ref.bi_d)):
            assert rel_diff(got, want, 128) < mpmath.mpf(2) ** -120
        with working(192):
            third = mpmath.mpf(1) / 3
            ai0 = mpmath.mpf(3) ** (-2 * third) / mpmath.exp(log_gamma_real(2 * third, 192))
            bi0 = mpmath.mpf(3) ** (-third / 2) / mpmath.exp(log_gamma_real(2 * third, 192))
        assert rel_diff(q.ai, ai0, 128) < mpmath.mpf(2) ** -118
        assert rel_diff(q.bi, bi0, 128) < mpmath.mpf(2) ** -118

    def test_series_oracle_inside_radius(self, rng):
        for _ in range(10):
            z = mpmath.mpc(rng.uniform(-8, 8), rng.uniform(-8, 8))
            q = airy_quartet(z, 128)
            ref = airy_series_reference(z, 128)
            for got, want in ((q.ai, ref.ai), (q.bi, ref.bi), (q.ai_d, ref.ai_d), (q.bi_d, ref.bi_d)):
                assert rel_diff(got, want, 128) < mpmath.mpf(2) ** -96

    def test_rotation_identity(self):
        # Ai(z) + w Ai(w z) + w^2 Ai(w^2 z) = 0 with w = e^{2 pi i/3}
        with working(160):
            z = mpmath.mpc(1, 1)
            w = mpmath.exp(mpmath.mpc(0, 2 * mpmath.pi / 3))
            q0 = airy_quartet(z, 128)
            q1 = airy_quartet(w * z, 128)
            q2 = airy_quartet(w * w * z, 128)
            resid = abs(q0.ai + w * q1.ai + w * w * q2.ai)
            resid_d = abs(q0.ai_d + w * w * q1.ai_d + w * q2.ai_d)
        assert resid < mpmath.mpf(10) ** -20
        assert resid_d < mpmath.mpf(10) ** -20

    def test_wronskian_scaled(self, rng):
        # products reach e^{2|zeta|}; residual judged against their scale
        worst = mpmath.mpf(0)
        with working(256):
            for _ in range(100):
                z = mpmath.mpc(rng.uniform(-20, 20), rng.uniform(-20, 20))
                q = airy_quartet(z, 128)
                p1, p2 = q.ai * q.bi_d, q.ai_d * q.bi
                scale = max(1 / mpmath.pi, abs(p1) + abs(p2))
                worst = max(worst, abs(p1 - p2 - 1 / mpmath.pi) / scale)
        assert worst < mpmath.mpf(2) ** -64

    def test_wronskian_absolute_small_z(self, rng):
        worst = mpmath.mpf(0)
        with working(256):
            for _ in range(50):
                z = mpmath.mpc(rng.uniform(-5, 5), rng.uniform(-5, 5))
                q = airy_quartet(z, 128)
                worst = max(worst, abs(q.ai * q.bi_d - q.ai_d * q.bi - 1 / mpmath.pi) * mpmath.pi)
        assert worst < mpmath.mpf(10) ** -20

    def test_crossover_annulus(self):
        # both methods must agree near the dispatch radius, all sectors
        r0 = crossover_radius(128)
        with working(160):
            for rad in (r0 - 1, r0 + 1):
                for k in range(12):
                    th = 2 * mpmath.pi * k / 12 + mpmath.mpf("0.1")
                    z = rad * mpmath.exp(mpmath.mpc(0, th))
                    q = airy_quartet(z, 128)
                    ref = airy_series_reference(z, 128)
                    for got, want in ((q.ai, ref.ai), (q.bi, ref.bi),
                                      (q.ai_d, ref.ai_d), (q.bi_d, ref.bi_d)):
                        assert rel_diff(got, want, 128) < mpmath.mpf(10) ** -10

    def test_stokes_ray_deterministic(self):
        # points on arg z = 2pi/3 evaluate through a fixed sector choice
        with working(160):
            z = 15 * mpmath.exp(mpmath.mpc(0, 2 * mpmath.pi / 3))
        a = airy_quartet(z, 128)
        b = airy_quartet(z, 128)
        assert a.ai == b.ai and a.bi == b.bi
        ref = airy_series_reference(z, 128)
        assert rel_diff(a.ai, ref.ai, 128) < mpmath.mpf(10) ** -10

    def test_against_library_spot(self, rng):
        for _ in range(12):
            z = mpmath.mpc(rng.uniform(-25, 25), rng.uniform(-25, 25))
            q = airy_quartet(z, 160)
            with working(220):
                refs = (mpmath.airyai(z), mpmath.airybi(z),
                        mpmath.airyai(z, 1), mpmath.airybi(z, 1))
            for got, want in zip((q.ai, q.bi, q.ai_d, q.bi_d), refs):
                assert rel_diff(got, want, 160) < mpmath.mpf(2) ** -80

    def test_schwarz(self, rng):
        for _ in range(10):
            z = mpmath.mpc(rng.uniform(-15, 15), rng.uniform(0.1, 15))
            a = airy_quartet(z, 128)
            b = airy_quartet(mpmath.conj(z), 128)
            for u, v in ((a.ai, b.ai), (a.bi, b.bi), (a.ai_d, b.ai_d), (a.bi_d, b.bi_d)):
                with working(160):
                    assert abs(u - mpmath.conj(v)) <= mpmath.ldexp(abs(u), -110)
