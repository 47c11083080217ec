import mpmath
import pytest
from mpmath import mp

from tcasym import auxfun
from tcasym.auxfun import (
    d_func,
    d_hat_func,
    d_tilde_func,
    d_triple,
    density_psi,
    e_family,
    e_func,
    e_hat_func,
    e_tilde_func,
    f_tilde_n,
    g_prime,
    g_prime_boundary,
    h_factor,
    phi,
    phi_hat,
    phi_tilde,
    theta_gamma_pi,
    varphi,
    varphi_limit,
)
from tcasym.mpnum import DomainError, PoleError, working
from tcasym.specfun import log_gamma_real

from conftest import rel_diff


class TestDensity:
    def test_saturated_value_exact(self):
        with working(128, 0):
            assert density_psi(3, 128) == mpmath.mpf(2) / 27

    def test_band_edge_continuity(self):
        with working(256):
            band = density_psi(mpmath.mpf(2), 256)
            sat = density_psi(mpmath.mpf("2.000000000001"), 256)
            assert abs(band - mpmath.mpf(1) / 4) < 1e-12
            assert abs(band - sat) < 1e-11

    def test_zero_limit(self):
        with working(256):
            lim = density_psi(0, 256)
            assert rel_diff(lim, 1 / (3 * mpmath.pi), 256) < 1e-60
        with pytest.raises(DomainError):
            density_psi(0, 128, zero_limit=False)

    def test_series_branch_continuity(self):
        # values straddling the small-|x| switchover agree
        with working(256):
            a = density_psi(mpmath.mpf(2) ** -52, 256)
            b = density_psi(mpmath.mpf(2) ** -50, 256)
            lim = density_psi(0, 256)
            assert abs(a - lim) < 1e-30 and abs(b - lim) < 1e-29

    def test_normalization(self):
        # adaptive quadrature over the band + exact saturated tail 1/2
        with mp.workprec(100):
            band = mpmath.quad(lambda s: density_psi(s, 100), [-2, -1, 0, 1, 2])
            total = band + mpmath.mpf(1) / 2
            assert abs(total - 1) < 1e-8

    def test_below_constraint_inside_band(self):
        with working(128):
            for x in ("0.3", "0.9", "1.5", "1.9"):
                t = mpmath.mpf(x)
                assert density_psi(t, 128) < 2 / t ** 3

    def test_even(self):
        assert density_psi(mpmath.mpf("1.2"), 128) == density_psi(mpmath.mpf("-1.2"), 128)


class TestGPrime:
    def test_boundary_jump_matches_density(self):
        # lim g'(x + i eps) = -i pi psi(x), approached linearly in eps
        x = mpmath.mpf(1)
        with working(192):
            target = -mpmath.pi * 1j * density_psi(x, 192)
            gaps = []
            for k in (4, 8, 16):
                eps = mpmath.ldexp(1, -k)
                gaps.append(abs(g_prime(mpmath.mpc(x, eps), 192) - target))
            assert gaps[2] < gaps[1] < gaps[0]
            assert gaps[2] / gaps[1] < 0.6  # ~linear in eps
            alpha_free = g_prime_boundary(x, 192, upper=True)
            assert abs(alpha_free - target) < mpmath.mpf(2) ** -180

    def test_saturated_boundary(self):
        # on (2, inf) the one-sided values differ only by the -+ 2 pi i/z^3 term
        x = mpmath.mpf(3)
        up = g_prime_boundary(x, 160, upper=True)
        lo = g_prime_boundary(x, 160, upper=False)
        with working(160):
            assert abs(up - mpmath.conj(lo)) == 0
            assert rel_diff(up.imag, -2 * mpmath.pi / 27, 160) < mpmath.mpf(2) ** -140

    def test_schwarz(self, rng):
        for _ in range(10):
            z = mpmath.mpc(rng.uniform(-4, 4), rng.uniform(0.05, 3))
            a = g_prime(z, 128)
            b = g_prime(mpmath.conj(z), 128)
            assert a.real - b.real == 0 and a.imag + b.imag == 0

    def test_real_axis_needs_side(self):
        with pytest.raises(DomainError):
            g_prime(mpmath.mpc(1, 0), 128)


class TestPhiTilde:
    def test_limit_at_band_edge(self):
        with working(160):
            vals = [abs(phi_tilde(2 + mpmath.ldexp(1, -k), 160)) for k in (4, 8, 12)]
            assert vals[2] < vals[1] < vals[0]
            assert vals[2] < 1e-4

    def test_negative_on_saturated_axis(self):
        for x in ("2.5", "3", "10"):
            v = phi_tilde(mpmath.mpf(x), 128)
            assert v.imag == 0 and v.real < 0

    def test_lagrange_multiplier(self):
        with working(256):
            z = mpmath.mpf(10) ** 6
            l_val = 2 * (mpmath.log(z) + phi_tilde(z, 256))
            assert abs(l_val - 1) < 1e-6

    def test_cut_rejected(self):
        with pytest.raises(DomainError):
            phi_tilde(mpmath.mpf(1), 128)
        with pytest.raises(DomainError):
            phi_tilde(mpmath.mpf(-5), 128)

    def test_band_boundary_value_pure_imaginary(self):
        v = phi_tilde(mpmath.mpf(1), 160, on_cut="upper")
        assert v.real == 0 and v.imag > 0
        w = phi_tilde(mpmath.mpf(1), 160, on_cut="lower")
        assert w.imag + v.imag == 0

    def test_schwarz(self, rng):
        for _ in range(10):
            z = mpmath.mpc(rng.uniform(-1, 5), rng.uniform(0.05, 3))
            a = phi_tilde(z, 128)
            b = phi_tilde(mpmath.conj(z), 128)
            assert a.real - b.real == 0 and a.imag + b.imag == 0


class TestPhiConnection:
    def test_phi_negative_real_part_in_band(self):
        v = phi(mpmath.mpc(1, mpmath.mpf("0.001")), 192).value
        assert v.real < 0

    def test_phi_hat_real_on_left_saturated(self):
        v = phi_hat(mpmath.mpf(-3), 160)
        assert v.imag == 0 and v.real < 0

    def test_connection_formula(self, rng):
        # phi_hat(z) - phi(z) +- (1/z^2 - 1) pi i = 0 on the upper/lower half
        for _ in range(20):
            z = mpmath.mpc(rng.uniform(-4, -0.2), rng.choice([1, -1]) * rng.uniform(0.05, 3))
            ph = phi_hat(z, 192)
            p = phi(z, 192).value
            with working(192):
                sgn = 1 if z.imag > 0 else -1
                resid = abs(ph - p + sgn * (1 / (z * z) - 1) * mpmath.pi * 1j)
                assert resid < mpmath.mpf(10) ** -20

    def test_phi_schwarz(self, rng):
        for _ in range(10):
            z = mpmath.mpc(rng.uniform(-3, 3), rng.uniform(0.05, 3))
            a = phi(z, 128).value
            b = phi(mpmath.conj(z), 128).value
            assert a.real - b.real == 0 and a.imag + b.imag == 0

    def test_half_plane_override(self):
        up = phi(mpmath.mpf(1), 128, half_plane="upper").value
        lo = phi(mpmath.mpf(1), 128, half_plane="lower").value
        assert up.real == 0 and lo.imag + up.imag == 0

    def test_quadrature_oracle(self):
        # independent route: the potential integral against the density,
        # log|phi contribution| = l/2 - integral of log|z-s| psi(s) ds
        z = mpmath.mpc(1, 1)
        with mp.workprec(80):
            def integrand(s):
                return mpmath.log(abs(z - s)) * density_psi(s, 80)
            g_re = mpmath.quad(integrand, [-mpmath.inf, -2, -1, 0, 1, 2, mpmath.inf])
            phi_re = mpmath.mpf(1) / 2 - g_re
            closed = phi(z, 128).value.real
            assert abs(phi_re - closed) < 1e-8


class TestTurningPointMap:
    def test_positive_right_of_edge(self):
        v = f_tilde_n(100, mpmath.mpf("2.05"), 160)
        assert v.imag == 0 and v.real > 0

    def test_linearization(self):
        with working(192):
            for h in ("0.01", "0.0001"):
                z = 2 + mpmath.mpf(h)
                v = f_tilde_n(100, z, 192)
                ratio = v / (mpmath.mpf(100) ** (mpmath.mpf(2) / 3) * (z - 2))
                assert abs(ratio - 1) < 3 * mpmath.mpf(h)

    def test_schwarz(self, rng):
        for _ in range(10):
            z = mpmath.mpc(2 + rng.uniform(-0.3, 0.3), rng.uniform(0.01, 0.3))
            a = f_tilde_n(50, z, 128)
            b = f_tilde_n(50, mpmath.conj(z), 128)
            assert a.real - b.real == 0 and a.imag + b.imag == 0

    def test_series_matches_closed_form(self, rng):
        # the cached-series h against the raw ratio, off the band segment
        for _ in range(15):
            z = mpmath.mpc(2 + rng.uniform(-0.4, 0.4), rng.choice([1, -1]) * rng.uniform(0.02, 0.3))
            hs = h_factor(z, 192)
            with working(256):
                hc = auxfun._h_closed_form(mpmath.mpc(z))
                assert abs(hs - hc) < mpmath.mpf(2) ** -180

    def test_analytic_at_turning_point(self):
        # Cauchy-Riemann residual of the map on a small circle around 2
        n = 50
        with working(192):
            h = mpmath.ldexp(mpmath.mpf(1), -24)
            worst = mpmath.mpf(0)
            for k in range(8):
                z0 = 2 + mpmath.mpf("0.05") * mpmath.exp(2j * mpmath.pi * (k + mpmath.mpf(1) / 2) / 8)
                dx = (f_tilde_n(n, z0 + h, 192) - f_tilde_n(n, z0 - h, 192)) / (2 * h)
                dy = (f_tilde_n(n, z0 + 1j * h, 192) - f_tilde_n(n, z0 - 1j * h, 192)) / (2j * h)
                worst = max(worst, abs(dx - dy) / max(1, abs(dx)))
            assert worst < 1e-8

    def test_disk_bound(self):
        with pytest.raises(DomainError):
            f_tilde_n(100, mpmath.mpc("2.6", 0), 128)


class TestDFunctions:
    def test_identities_random(self, rng):
        worst = mpmath.mpf(0)
        with working(320):
            for _ in range(50):
                z = mpmath.mpc(rng.uniform(-4, 4), rng.choice([1, -1]) * rng.uniform(0.05, 3))
                n = rng.choice([20, 50, 137])
                a = rng.choice([1, mpmath.mpf("0.35"), mpmath.mpf("2.5")])
                t = d_triple(n, a, z, 128)
                th, _, _ = theta_gamma_pi(n, a, z, 320)
                sgn = 1 if z.imag > 0 else -1
                d = t.d.to_complex(320)
                dt = t.d_tilde.to_complex(320)
                dh = t.d_hat.to_complex(320)
                worst = max(worst, abs(dt - d * (1 - mpmath.exp(-sgn * 2j * th))) / abs(dt))
                worst = max(worst, abs(dh - d * (1 - mpmath.exp(sgn * 2j * th))) / abs(dh))
        assert worst < mpmath.mpf(10) ** -20

    def test_tends_to_one(self):
        # max |D-tilde - 1| on a compact halves when n doubles
        vals = []
        with working(192):
            for n in (200, 400):
                mx = mpmath.mpf(0)
                for k in range(8):
                    z = 1 + 1j + mpmath.mpf("0.1") * mpmath.exp(2j * mpmath.pi * k / 8)
                    mx = max(mx, abs(d_tilde_func(n, 1, z, 192).to_complex(192) - 1))
                vals.append(mx)
        assert 0.3 < vals[1] / vals[0] < 0.8

    def test_large_z_form(self):
        # D approaches Gamma(alpha)/sqrt(2 pi) n^(1/2-alpha) (-z^2)^(alpha-1/2)
        n, a = 50, mpmath.mpf("0.75")
        errs = []
        with working(192):
            for r in (50, 500):
                z = mpmath.mpc(r, mpmath.mpf("0.5"))
                dv = d_func(n, a, z, 192).to_complex(192)
                # Gamma(alpha)/sqrt(2 pi) (n / -z^2)^(1/2-alpha) with the
                # same branch convention as the D-function itself
                log_m = mpmath.log(n) + mpmath.pi * 1j - 2 * mpmath.log(z)
                ref = (mpmath.exp(log_gamma_real(a, 192)) / mpmath.sqrt(2 * mpmath.pi)
                       * mpmath.exp((mpmath.mpf(1) / 2 - a) * log_m))
                errs.append(abs(dv / ref - 1))
        assert errs[1] < errs[0] and errs[1] < 0.01

    def test_pole_detection(self):
        # exact hit: alpha - n/z^2 = 1 - 50/25 = -1 at z = 5
        with pytest.raises(PoleError):
            d_func(50, 1, mpmath.mpf(5), 128, half_plane="upper")

    def test_real_axis_guard(self):
        with pytest.raises(DomainError):
            d_triple(50, 1, mpmath.mpc(1.5, 0), 128)
        with pytest.raises(DomainError):
            d_tilde_func(50, 1, mpmath.mpf(-2), 128)
        with pytest.raises(DomainError):
            d_hat_func(50, 1, mpmath.mpf(2), 128)
        # allowed: d_tilde on (0, inf), d_hat on (-inf, 0)
        d_tilde_func(50, 1, mpmath.mpf("2.5"), 128)
        d_hat_func(50, 1, mpmath.mpf("-2.5"), 128)


class TestEFunctions:
    def test_constant_at_half(self):
        # exponent vanishes at alpha = 1/2: E = sqrt(2 pi)/Gamma(1/2) = sqrt(2)
        with working(160):
            for z in (mpmath.mpc(0, 0), mpmath.mpc(5, 1), mpmath.mpc(-7, -2)):
                v = e_func(mpmath.mpf("0.5"), z, 160)
                assert rel_diff(v.to_complex(160), mpmath.sqrt(mpmath.mpf(2)), 160) < mpmath.mpf(2) ** -140

    def test_value_at_origin(self):
        a = mpmath.mpf("1.25")
        v = e_func(a, 0, 160)
        with working(192):
            ref = mpmath.sqrt(2 * mpmath.pi) / mpmath.exp(log_gamma_real(a, 192)) \
                * mpmath.mpf(4) ** (mpmath.mpf(1) / 2 - a)
        assert rel_diff(v.to_complex(192), ref, 160) < mpmath.mpf(2) ** -140

    def test_e_tilde_relation_upper(self):
        # E = E-tilde e^{-pi i (1/2 - alpha)} on the upper half-plane
        a = mpmath.mpf("0.8")
        z = mpmath.mpc(3, 1)
        ev = e_func(a, z, 192).to_complex(256)
        et = e_tilde_func(a, z, 192).to_complex(256)
        with working(256):
            resid = abs(ev - et * mpmath.exp(-mpmath.pi * 1j * (mpmath.mpf(1) / 2 - a)))
            assert resid / abs(ev) < mpmath.mpf(2) ** -180

    def test_family_and_cuts(self):
        e1, e2, e3 = e_family(1, mpmath.mpc(1, 1), 160)
        for v in (e1, e2, e3):
            assert mpmath.isfinite(v.log_mod)
        with pytest.raises(DomainError):
            e_func(1, mpmath.mpf(3), 128)
        with pytest.raises(DomainError):
            e_tilde_func(1, mpmath.mpf(1), 128)
        with pytest.raises(DomainError):
            e_hat_func(1, mpmath.mpf(0), 128)
        # within-domain real points
        e_func(1, mpmath.mpf(1), 128)
        e_tilde_func(1, mpmath.mpf(3), 128)
        e_hat_func(1, mpmath.mpf(-3), 128)


class TestThetaGammaPi:
    def test_nodes_are_zeros(self):
        n, a = 100, mpmath.mpf(1)
        with working(192):
            for k in (0, 3, 10):
                xk = mpmath.sqrt(mpmath.mpf(n) / (k + a))
                th, gz, piz = theta_gamma_pi(n, a, xk, 192)
                assert abs(piz) < mpmath.ldexp(abs(1 / gz), -170)

    def test_slope_alternation(self):
        # [sin theta]'(X_k)/gamma = cos(theta(X_k)) = (-1)^k
        n, a, k = 100, mpmath.mpf(1), 3
        with working(192):
            xk = mpmath.sqrt(mpmath.mpf(n) / (k + a))
            th, gz, _ = theta_gamma_pi(n, a, xk, 192)
            slope = mpmath.cos(th)
            assert abs(slope - (-1) ** k) < mpmath.mpf(2) ** -160

    def test_real_for_real(self):
        th, gz, piz = theta_gamma_pi(60, 1, mpmath.mpf("1.7"), 128)
        assert th.imag == 0 and gz.imag == 0 and piz.imag == 0

    def test_pole_at_zero(self):
        with pytest.raises(DomainError):
            theta_gamma_pi(10, 1, 0, 128)


class TestVarphi:
    def test_rational_point(self):
        v = varphi(mpmath.mpf("1.25"), 128)
        assert v.imag == 0
        with working(160):
            assert rel_diff(v, mpmath.mpf(2), 128) < mpmath.mpf(2) ** -120

    def test_asymptotic(self):
        z = mpmath.mpf(10) ** 6
        v = varphi(z, 128)
        with working(160):
            assert abs(v / (2 * z) - 1) < 1e-6

    def test_root_product(self, rng):
        for _ in range(10):
            z = mpmath.mpc(rng.uniform(-3, 3), rng.choice([1, -1]) * rng.uniform(0.05, 2))
            v = varphi(z, 192)
            with working(192):
                w = v - z  # sqrt(z^2-1)
                assert abs(v * (z - w) - 1) < mpmath.mpf(2) ** -170

    def test_cut_and_limit(self):
        with pytest.raises(DomainError):
            varphi(mpmath.mpf("0.5"), 128)
        v = varphi_limit(mpmath.mpf("0.5"), 128, upper=True)
        with working(160):
            assert abs(abs(v) - 1) < mpmath.mpf(2) ** -120
            assert v.imag > 0
