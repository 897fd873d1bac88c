import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from needlets.specfun import (
    bessel_j0,
    gaussian_cdf,
    gaussian_pdf,
    hermite_eval,
    hilb_decompose,
    indicator_hermite_coeff,
    legendre_eval,
)


class TestLegendre:
    def test_value_at_one(self):
        for ell in (0, 1, 5, 17, 100):
            assert legendre_eval(ell, 1.0) == pytest.approx(1.0, abs=1e-13)

    def test_degree_two(self):
        # (3 t^2 - 1)/2 at t = 1/2
        assert legendre_eval(2, 0.5) == pytest.approx(-0.125, abs=1e-15)

    @given(st.floats(min_value=-1.0, max_value=1.0))
    @settings(max_examples=50, deadline=None)
    def test_odd_parity(self, x):
        assert legendre_eval(3, -x) == pytest.approx(-legendre_eval(3, x), abs=1e-13)

    def test_bounded_by_one(self):
        t = np.linspace(-1.0, 1.0, 2001)
        for ell in (3, 16, 129, 1024, 4096):
            assert np.max(np.abs(legendre_eval(ell, t))) <= 1.0 + 1e-10

    def test_domain_error(self):
        with pytest.raises(ValueError):
            legendre_eval(3, 1.1)

    def test_orthogonality_gauss(self):
        # exact Gauss integration of P_l P_l' over [-1, 1]
        x, w = np.polynomial.legendre.leggauss(65)
        vals = {ell: legendre_eval(ell, x) for ell in range(0, 65, 7)}
        for la in vals:
            for lb in vals:
                got = float(np.sum(w * vals[la] * vals[lb]))
                want = 2.0 / (2 * la + 1) if la == lb else 0.0
                assert got == pytest.approx(want, abs=1e-12)


class TestBesselJ0:
    def test_at_zero(self):
        assert bessel_j0(0.0) == 1.0

    def test_first_root(self):
        # root located by bisection on an independent high-precision series
        assert abs(bessel_j0(2.404825557695773)) < 1e-10

    def test_against_mpmath(self):
        xs = np.concatenate([np.linspace(0, 8, 300), np.linspace(8, 60, 300),
                             np.geomspace(60, 1e4, 60)])
        for x in xs:
            ref = float(mpmath.besselj(0, mpmath.mpf(float(x))))
            assert bessel_j0(float(x)) == pytest.approx(ref, abs=1e-12)

    def test_envelope_bounds(self):
        xs = np.linspace(1e-6, 500.0, 20000)
        v = bessel_j0(xs)
        assert np.all(np.abs(v) <= 1.0 + 1e-14)
        assert np.all(np.abs(v) <= xs ** -0.5 + 1e-14)
        assert abs(bessel_j0(50.0)) <= 50.0 ** -0.5

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            bessel_j0(-1.0)


class TestHermite:
    def test_order_zero(self):
        assert hermite_eval(0, 3.7) == 1.0

    def test_order_three(self):
        # x^3 - 3x at x = 2
        assert hermite_eval(3, 2.0) == pytest.approx(2.0, abs=1e-14)

    def test_gaussian_mean_h2(self):
        rng = np.random.default_rng(7)
        z = rng.standard_normal(10 ** 6)
        vals = hermite_eval(2, z)
        se = np.std(vals) / math.sqrt(len(z))
        assert abs(np.mean(vals)) < 4 * se

    def test_joint_gaussian_orthogonality(self):
        # E[H_n(Z1) H_m(Z2)] = n! rho^n delta_nm for correlated pairs
        rng = np.random.default_rng(11)
        rho = 0.6
        n_draw = 10 ** 6
        z1 = rng.standard_normal(n_draw)
        z2 = rho * z1 + math.sqrt(1 - rho ** 2) * rng.standard_normal(n_draw)
        for n, m in ((2, 2), (3, 3), (2, 3), (1, 4)):
            prod = hermite_eval(n, z1) * hermite_eval(m, z2)
            want = math.factorial(n) * rho ** n if n == m else 0.0
            se = np.std(prod) / math.sqrt(n_draw)
            assert abs(np.mean(prod) - want) < 4 * se


class TestGaussian:
    def test_pdf_peak(self):
        assert gaussian_pdf(0.0) == pytest.approx(0.3989422804014327, abs=1e-16)

    def test_cdf_center(self):
        assert gaussian_cdf(0.0) == 0.5

    def test_cdf_quantile_via_quadrature(self):
        # independent numerical integration of the density
        want, _ = quad(gaussian_pdf, -12.0, 1.959963985)
        assert gaussian_cdf(1.959963985) == pytest.approx(want, abs=1e-9)
        assert gaussian_cdf(1.959963985) == pytest.approx(0.975, abs=1e-9)

    def test_cdf_accuracy_sweep(self):
        for z in np.linspace(-8, 8, 81):
            ref = float(mpmath.ncdf(mpmath.mpf(float(z))))
            assert gaussian_cdf(float(z)) == pytest.approx(ref, abs=1e-12)


class TestIndicatorCoeffs:
    def test_first_order(self):
        assert indicator_hermite_coeff(1, 0.0) == pytest.approx(
            -0.3989422804014327, abs=1e-15)

    def test_second_order_vanishes(self):
        assert indicator_hermite_coeff(2, 0.0) == 0.0

    def test_matches_defining_integral(self):
        # adaptive quadrature of int 1{u <= z} H_4(u) phi(u) du
        want, _ = quad(lambda u: hermite_eval(4, u) * gaussian_pdf(u),
                       -14.0, 1.0, limit=200)
        assert indicator_hermite_coeff(4, 1.0) == pytest.approx(want, abs=1e-8)

    def test_order_zero_rejected(self):
        with pytest.raises(ValueError):
            indicator_hermite_coeff(0, 0.0)


class TestHilb:
    def test_reconstruction_identity(self):
        for ell, theta in ((5, 0.3), (64, 1.0), (600, 0.01)):
            h = hilb_decompose(ell, theta)
            assert h.main_term + h.error == pytest.approx(
                legendre_eval(ell, math.cos(theta)), abs=1e-14)

    def test_small_angle_branch(self):
        # theta < 1/ell: remainder is O(theta^2); constant measured with margin
        ell, theta = 64, 0.5 / 64
        h = hilb_decompose(ell, theta)
        assert abs(h.error) <= 1.0 * theta ** 2

    def test_large_angle_branch(self):
        ell, theta = 256, 0.3
        h = hilb_decompose(256, 0.3)
        assert abs(h.error) <= 1.0 * math.sqrt(theta) * ell ** -1.5

    def test_degenerate_low_degree(self):
        h = hilb_decompose(1, 1e-9)
        assert h.main_term == pytest.approx(1.0, abs=1e-9)
        assert abs(h.error) < 1e-9

    def test_domain(self):
        with pytest.raises(ValueError):
            hilb_decompose(5, 0.0)
        with pytest.raises(ValueError):
            hilb_decompose(5, 2.0)

    def test_envelope_ratio_uniform_in_degree(self):
        # sup over theta in (1/l, pi/2] of |error| / (theta^(1/2) l^(-3/2))
        # varies by less than a factor 3 across octaves of l
        sups = []
        for ell in (64, 128, 256, 512, 1024):
            thetas = np.geomspace(1.0 / ell * 1.01, math.pi / 2, 160)
            ratios = [abs(hilb_decompose(ell, float(t)).error)
                      / (math.sqrt(t) * ell ** -1.5) for t in thetas]
            sups.append(max(ratios))
        assert max(sups) / min(sups) < 3.0
