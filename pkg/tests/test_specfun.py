import math

import mpmath as mp
import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate

from singkern import specfun as sf
from singkern.errors import DomainError, PoleError

EULER_GAMMA = 0.5772156649015329


class TestGammaFamily:
    def test_log_gamma_factorial(self):
        val, sign = sf.log_gamma(5.0)
        assert sign == 1
        assert_allclose(val, math.log(24.0), rtol=1e-15)
        assert_allclose(sf.gamma(5.0), 24.0, rtol=1e-15)

    def test_half(self):
        assert_allclose(sf.gamma(0.5), 1.772453851, rtol=1e-9)

    def test_negative_half_integer(self):
        val, sign = sf.log_gamma(-1.5)
        assert sign == 1
        assert_allclose(math.exp(val), 2.363271801, rtol=1e-9)
        # recurrence from the x=0.5 value
        assert_allclose(sf.gamma(-1.5), sf.gamma(0.5) / (-1.5 * -0.5), rtol=1e-14)

    def test_sign_tracking(self):
        assert sf.log_gamma(-0.5)[1] == -1
        assert sf.gamma(-0.5) < 0

    @pytest.mark.parametrize("x", [0.0, -1.0, -4.0])
    def test_poles(self, x):
        with pytest.raises(PoleError):
            sf.gamma(x)
        assert sf.rgamma(x) == 0.0

    def test_gamma_ratio_large_arguments(self):
        # naive Gamma(180)/Gamma(178.5) overflows
        expected = float(mp.gamma(180) / mp.gamma(178.5))
        assert_allclose(sf.gamma_ratio([180.0], [178.5]), expected, rtol=1e-12)

    def test_gamma_ratio_signs(self):
        assert_allclose(sf.gamma_ratio([-0.5, 2.5], [1.5]), -2 * math.sqrt(math.pi) * 1.329340388 / 0.886226925,
                        rtol=1e-8)

    @pytest.mark.parametrize("x, expected", [
        (1.0, -EULER_GAMMA),
        (2.0, 1 - EULER_GAMMA),
        (0.5, -1.963510026),
    ])
    def test_digamma(self, x, expected):
        assert_allclose(sf.digamma(x), expected, rtol=1e-9)

    def test_digamma_pole(self):
        with pytest.raises(PoleError):
            sf.digamma(-2.0)


class TestIntegerHelpers:
    @pytest.mark.parametrize("a, m, expected", [(0.37, 0, 1), (1, 5, 120), (3, 2, 12), (-2, 3, 0)])
    def test_pochhammer(self, a, m, expected):
        assert sf.pochhammer(a, m) == expected

    def test_pochhammer_rejects_negative_m(self):
        with pytest.raises(DomainError):
            sf.pochhammer(1.0, -1)

    @pytest.mark.parametrize("m, expected", [(-1, 1), (0, 1), (5, 15), (6, 48), (7, 105)])
    def test_double_factorial(self, m, expected):
        assert sf.double_factorial(m) == expected

    def test_double_factorial_domain(self):
        with pytest.raises(DomainError):
            sf.double_factorial(-2)


class TestHyp1f1:
    def test_zero_argument(self):
        assert sf.hyp1f1(0.7, 1.3, 0.0) == 1.0

    def test_a_equals_c(self):
        assert_allclose(sf.hyp1f1(2.5, 2.5, 1.0), math.e, rtol=1e-14)

    def test_partial_sum_oracle(self):
        # 50-term partial sum of sum z^j/(j+1)!
        ref = sum(0.8 ** j / math.factorial(j + 1) for j in range(50))
        assert_allclose(ref, (math.exp(0.8) - 1) / 0.8, rtol=1e-15)
        assert_allclose(sf.hyp1f1(1.0, 2.0, 0.8), 1.5319261606155845, rtol=1e-14)

    @pytest.mark.parametrize("a, c, z", [(1.3, 2.5, -5.0), (0.5, 1.5, -30.0), (2.0, 3.0, 12.0), (-2.0, 1.5, 0.7)])
    def test_against_mpmath(self, a, c, z):
        assert_allclose(sf.hyp1f1(a, c, z), float(mp.hyp1f1(a, c, z)), rtol=1e-11)

    def test_diagnostics(self):
        val, d = sf.hyp1f1(1.0, 2.0, 0.8, full_output=True)
        assert d.branch is sf.Branch.DIRECT_SERIES
        assert d.terms_used > 0
        assert d.est_error < 1e-12 * val

    def test_pole(self):
        with pytest.raises(PoleError):
            sf.hyp1f1(1.0, -2.0, 0.5)


class TestHypU:
    def test_a_zero(self):
        assert sf.hypU(0.0, 2.5, 1.7) == 1.0

    def test_power_identity(self):
        assert_allclose(sf.hypU(1.5, 2.5, 2.0), 2.0 ** -1.5, rtol=1e-13)

    def test_integer_c_against_integral(self):
        a, c, z = 0.4, 1.0, 0.3
        f = lambda s: math.exp(-z * s) * s ** (a - 1) * (1 + s) ** (c - a - 1)
        ref = (integrate.quad(f, 0, 1, epsabs=0, epsrel=1e-13)[0]
               + integrate.quad(f, 1, np.inf, epsabs=0, epsrel=1e-13)[0]) / math.gamma(a)
        assert_allclose(ref, 1.3061714624613715, rtol=1e-12)
        assert_allclose(sf.hypU(a, c, z), ref, rtol=1e-10)

    def test_integer_c_limit_form(self):
        # U(a, 1, z) = -(log z + psi(a) + 2 gamma)/Gamma(a) + O(|z log z|)
        a = 0.4
        for z in (1e-2, 1e-3, 1e-4):
            lim = -(math.log(z) + sf.digamma(a) + 2 * EULER_GAMMA) / math.gamma(a)
            assert abs(sf.hypU(a, 1.0, z) - lim) <= 2 * abs(z * math.log(z))

    @pytest.mark.parametrize("a, c, z, expected", [
        (0.5, 1.5, 3.0, 0.5773502691896258),
        (0.3, 2.0, 0.1, 4.678634413233114),
        (0.7, 3.5, 0.05, 1946.0133517392923),
        (1.2, 1.0, 5.0, 0.11574357840641735),
        (0.25, 4.0, 2.0, 1.3293093593395895),
    ])
    def test_frozen_values(self, a, c, z, expected):
        assert_allclose(sf.hypU(a, c, z), expected, rtol=1e-11)

    @pytest.mark.parametrize("c", [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0])
    @pytest.mark.parametrize("z", [1e-3, 0.2, 1.0, 7.0, 40.0, 400.0])
    def test_heat_parameter_grid(self, c, z):
        for a in (0.1, 0.5, 0.9, 1.7):
            assert_allclose(sf.hypU(a, c, z), float(mp.hyperu(a, c, z)), rtol=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            sf.hypU(0.5, 1.5, -1.0)


class TestHyp2f1:
    def test_zero_argument(self):
        assert sf.hyp2f1(0.3, 1.1, 0.9, 0.0) == 1.0

    def test_log_closed_form(self):
        ref = sum(0.5 ** j / (j + 1) for j in range(60))
        assert_allclose(ref, -math.log(0.5) / 0.5, rtol=1e-15)
        assert_allclose(sf.hyp2f1(1.0, 1.0, 2.0, 0.5), 1.386294361, rtol=1e-9)

    @pytest.mark.parametrize("z", [0.0, 0.3, 0.9, 1.0])
    def test_b_zero(self, z):
        assert sf.hyp2f1(0.5, 0.0, 0.5, z) == 1.0

    def test_both_branches_at_three_quarters(self):
        val, d = sf.hyp2f1(0.25, 0.25, 0.5, 0.75, full_output=True)
        assert_allclose(val, 1.1774620518080674, rtol=1e-13)
        series, _ = sf.hyp2f1(0.25, 0.25, 0.5, 0.75, ctl=sf.SeriesControl(max_terms=5000), full_output=True)
        assert_allclose(series, val, rtol=1e-12)

    def test_tie_break_at_half(self):
        _, d = sf.hyp2f1(0.3, 0.6, 1.7, 0.5, full_output=True)
        assert d.branch is sf.Branch.DIRECT_SERIES

    @pytest.mark.parametrize("a, b, c, z, expected", [
        (0.3, 0.7, 1.5, 0.95, 1.3145776637094362),
        (0.25, 0.75, 2.0, 0.99, 1.1903357146454425),
        (1.5, 0.5, 2.0, 0.7, 1.516414778425047),
        (0.6, 0.2, -0.5, 0.4, 0.7621843237982923),
        (0.375, 0.25, -1.5, 0.9, 29.815259490072996),
    ])
    def test_frozen_values(self, a, b, c, z, expected):
        assert_allclose(sf.hyp2f1(a, b, c, z), expected, rtol=1e-11)

    def test_random_against_mpmath(self):
        rng = np.random.default_rng(5)
        for _ in range(300):
            a, b, c = rng.uniform(0.05, 3), rng.uniform(0.05, 3), rng.uniform(0.1, 4)
            z = rng.uniform(0.5, 0.999)
            assert_allclose(sf.hyp2f1(a, b, c, z), float(mp.hyp2f1(a, b, c, z)), rtol=1e-10)

    def test_near_integer_c_minus_a_minus_b(self):
        # the two connection terms nearly cancel here
        a, b, c, z = 1.0626, 0.9560, 3.0182570691011916, 0.7928523855606434
        assert_allclose(sf.hyp2f1(a, b, c, z), float(mp.hyp2f1(a, b, c, z)), rtol=1e-11)

    def test_logarithmic_case(self):
        # c - a - b = 0 exactly
        _, d = sf.hyp2f1(0.25, 0.25, 0.5, 0.97, full_output=True)
        assert d.branch is sf.Branch.LOG_SERIES
        assert_allclose(sf.hyp2f1(0.25, 0.25, 0.5, 0.97), float(mp.hyp2f1(0.25, 0.25, 0.5, 0.97)), rtol=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            sf.hyp2f1(0.5, 0.5, 1.5, 1.2)
        with pytest.raises(PoleError):
            sf.hyp2f1(0.5, 0.5, -1.0, 0.3)


class TestGaussPoint:
    def test_four_over_pi(self):
        assert_allclose(sf.hyp2f1_at_one(0.5, 0.5, 2.0), 4 / math.pi, rtol=1e-14)
        # series near 1 with Richardson in the distance to 1
        e1, e2 = 1e-4, 2.5e-5
        f1 = sf.hyp2f1(0.5, 0.5, 2.0, 1 - e1)
        f2 = sf.hyp2f1(0.5, 0.5, 2.0, 1 - e2)
        assert abs(f2 - 4 / math.pi) < abs(f1 - 4 / math.pi)

    @pytest.mark.parametrize("a, c", [(0.3, 1.5), (-0.5, 1.0), (-0.5, 3.0)])
    def test_b_zero(self, a, c):
        assert sf.hyp2f1_at_one(a, 0.0, c) == 1.0

    def test_divergent(self):
        with pytest.raises(DomainError):
            sf.hyp2f1_at_one(1.0, 1.0, 1.5)


def test_series_control_validation():
    with pytest.raises(DomainError):
        sf.SeriesControl(rel_tol=0)
    with pytest.raises(DomainError):
        sf.SeriesControl(max_terms=0)
