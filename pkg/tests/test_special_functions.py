"""Tests for the Gamma, Mittag-Leffler, and Wright evaluators."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracboussinesq.errors import ConvergenceError, DomainError, RefusalError
from fracboussinesq.special_functions import (
    MLQuery,
    WrightQuery,
    gamma_real,
    mittag_leffler,
    ml,
    ml_oracle,
    pskhu_image_of_power,
    wright,
    wright_series,
)

SQRT_PI = 1.7724538509055160273

# frozen from the 200-digit series oracle
ML_15_1_M2 = 0.029430685602826471728
# frozen from the 60-digit series oracle
ML_17_3_M50 = 0.023104373460669211017
# exp(-1/4)/sqrt(pi), the closed form of the half-order Wright kernel at -1
WRIGHT_HALF_M1 = 0.43939128946772239705


class TestGammaReal:
    def test_one(self):
        assert gamma_real(1.0) == 1.0

    def test_half_is_sqrt_pi(self):
        assert gamma_real(0.5) == pytest.approx(SQRT_PI, rel=1e-15)

    def test_three_halves(self):
        # Gamma(3 - 1.5), cross-checked against the arbitrary-precision value
        assert gamma_real(1.5) == pytest.approx(0.8862269254527580136, rel=1e-14)

    @pytest.mark.parametrize(
        "x,ref",
        [(-0.5, -3.5449077018110320546), (-2.5, -0.94530872048294188123), (7.5, 1871.2543057977883465)],
    )
    def test_reflection_values(self, x, ref):
        assert gamma_real(x) == pytest.approx(ref, rel=1e-14)

    @pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -17.0])
    def test_poles_raise(self, x):
        with pytest.raises(DomainError):
            gamma_real(x)

    def test_overflow(self):
        with pytest.raises(OverflowError):
            gamma_real(500.0)

    def test_recursion_property(self):
        for x in np.linspace(0.1, 30.0, 47):
            assert gamma_real(x + 1.0) == pytest.approx(x * gamma_real(x), rel=1e-13)


class TestMittagLefflerAnchors:
    def test_at_zero_is_reciprocal_gamma(self):
        for rho in (1.05, 1.3, 1.7, 2.0):
            for mu in (0.3, 1.0, 2.0, 3.7):
                assert mittag_leffler(rho, mu, 0.0) == pytest.approx(
                    1.0 / math.gamma(mu), rel=1e-15
                )

    def test_order_one_is_exp(self):
        assert mittag_leffler(1.0, 1.0, -1.0) == pytest.approx(math.exp(-1.0), rel=1e-15)

    def test_order_two_cos_zero(self):
        # E_{2,1}(-x^2) = cos x vanishes at x = pi/2
        assert abs(mittag_leffler(2.0, 1.0, -((math.pi / 2) ** 2))) <= 1e-12

    def test_moderate_argument_frozen_oracle(self):
        v = mittag_leffler(1.5, 1.0, -2.0)
        assert v == pytest.approx(ML_15_1_M2, rel=1e-13)
        assert abs(v) < 1.0

    def test_mu_three_bounded_frozen_oracle(self):
        v = mittag_leffler(1.7, 3.0, -50.0)
        assert v == pytest.approx(ML_17_3_M50, rel=1e-13)
        assert 0.0 < v < 0.5

    @pytest.mark.parametrize("x", np.linspace(0.07, 100.0, 61))
    def test_closed_forms(self, x):
        assert mittag_leffler(1.0, 1.0, -x) == pytest.approx(math.exp(-x), rel=1e-12)
        z = -x * x
        assert mittag_leffler(2.0, 1.0, z) == pytest.approx(math.cos(x), rel=1e-12, abs=1e-15)
        assert mittag_leffler(2.0, 2.0, z) == pytest.approx(
            math.sin(x) / x, rel=1e-12, abs=1e-15
        )
        stable = 2.0 * math.sin(0.5 * x) ** 2 / (x * x)
        assert mittag_leffler(2.0, 3.0, z) == pytest.approx(stable, rel=1e-12, abs=1e-15)

    def test_rejects_positive_argument(self):
        with pytest.raises(DomainError):
            mittag_leffler(1.5, 1.0, 0.5)

    def test_rejects_bad_order(self):
        with pytest.raises(DomainError):
            mittag_leffler(0.0, 1.0, -1.0)
        with pytest.raises(DomainError):
            mittag_leffler(2.5, 1.0, -1.0)
        with pytest.raises(DomainError):
            mittag_leffler(1.5, -1.0, -1.0)

    def test_query_interface(self):
        q = MLQuery(rho=1.5, mu=2.0, z=-3.0)
        assert ml(q) == mittag_leffler(1.5, 2.0, -3.0)


class TestMittagLefflerProperties:
    @settings(max_examples=40, deadline=None)
    @given(
        rho=st.floats(1.05, 2.0),
        mu=st.floats(0.1, 2.0),
        logz=st.floats(-3.0, 6.0),
    )
    def test_recurrence_shift(self, rho, mu, logz):
        z = -(10.0**logz)
        lhs = mittag_leffler(rho, mu, z)
        up = mittag_leffler(rho, mu + rho, z)
        c = 1.0 / math.gamma(mu)
        rhs = z * up + c
        scale = max(abs(lhs), abs(z * up), c)
        assert abs(lhs - rhs) <= 1e-10 * scale

    @pytest.mark.parametrize("rho", [1.1, 1.5, 1.9])
    def test_kernel_bounds_sampled(self, rho):
        for t in np.logspace(-3, 3, 25):
            z = -(t**rho)
            assert abs(mittag_leffler(rho, 1.0, z)) < 1.0
            assert abs(mittag_leffler(rho, 2.0, z)) < 1.0
            e3 = mittag_leffler(rho, 3.0, z)
            assert 0.0 < e3 < 0.5

    def test_against_oracle_spot_grid(self):
        for rho in (1.1, 1.5, 1.9):
            for mu in (1.0, 2.0, 3.0):
                for z in (-1e-3, -1.0, -20.0, -1e3, -1e6):
                    got = mittag_leffler(rho, mu, z)
                    ref = ml_oracle(MLQuery(rho, mu, z))
                    rel = abs(mp.mpf(got) - ref.value) / abs(ref.value)
                    assert rel <= 1e-12, (rho, mu, z, float(rel))

    @pytest.mark.parametrize("rho", [1.05, 1.95, 1.99, 2.0])
    @pytest.mark.parametrize("mu", [0.05, 1.0, 3.9])
    @pytest.mark.parametrize("lam", [7.0, 900.0, 1e6])
    def test_stress_corners_against_oracle(self, rho, mu, lam):
        # order near 2 keeps the damped oscillation alive far out; order near 1
        # squeezes the quadrature ridge; extreme mu exercises the climb chain
        got = mittag_leffler(rho, mu, -lam)
        try:
            ref = ml_oracle(MLQuery(rho, mu, -lam))
        except RefusalError:
            pytest.skip("oracle cannot certify relative digits here")
        rel = abs(mp.mpf(got) - ref.value) / abs(ref.value)
        assert rel <= 1e-11, float(rel)


class TestMlOracle:
    def test_exp_to_fifty_digits(self):
        res = ml_oracle(MLQuery(1.0, 1.0, -1.0), significant_digits=50)
        with mp.workdps(60):
            assert abs(res.value - mp.e**-1) < mp.mpf(10) ** -50

    def test_sinc_at_pi_is_zero_to_double(self):
        # E_{2,2}(-pi^2) = sin(pi)/pi collapses to the double-precision pi offset
        res = ml_oracle(MLQuery(2.0, 2.0, -(math.pi**2)), significant_digits=50)
        assert abs(res.value) < 1e-15

    def test_reports_error_bound(self):
        res = ml_oracle(MLQuery(1.5, 1.0, -2.0), significant_digits=200)
        assert res.error_bound < abs(res.value) * mp.mpf(10) ** -190
        assert res.method == "series"

    def test_series_asymptotic_overlap(self):
        # both certification routes cover this point; they must agree
        q = MLQuery(1.5, 2.0, -1800.0)
        series = ml_oracle(q, significant_digits=50, max_dps=2000)
        asym = ml_oracle(q, significant_digits=50, max_dps=60)
        assert asym.method == "asymptotic"
        assert series.method == "series"
        assert abs(series.value - asym.value) <= abs(series.value) * mp.mpf(10) ** -49

    def test_refusal_on_tight_budget(self):
        with pytest.raises(RefusalError):
            ml_oracle(MLQuery(1.9, 2.0, -40.0), significant_digits=200, max_dps=60)

    def test_rejects_low_digits(self):
        with pytest.raises(DomainError):
            ml_oracle(MLQuery(1.5, 1.0, -1.0), significant_digits=10)


class TestWright:
    def test_delta_zero_collapses_to_exp(self):
        assert wright_series(0.0, 1.0, 1.0) == pytest.approx(math.e, rel=1e-14)

    def test_k0_term_only_at_origin(self):
        assert wright_series(1.0, 1.0, 0.0) == 1.0
        assert wright_series(1.0, 2.0, 0.0) == pytest.approx(1.0, rel=1e-15)

    def test_half_order_kernel_closed_form(self):
        # phi(-1/2, 1/2; -x) = exp(-x^2/4)/sqrt(pi)
        assert wright_series(-0.5, 0.5, -1.0) == pytest.approx(WRIGHT_HALF_M1, rel=1e-12)

    @pytest.mark.parametrize("x", [4.0, 10.0])
    def test_half_order_kernel_deep_tail(self, x):
        # forces the precision escalation: the double sum cancels catastrophically
        ref = math.exp(-x * x / 4.0) / SQRT_PI
        assert wright_series(-0.5, 0.5, -x) == pytest.approx(ref, rel=1e-10)

    def test_pole_terms_drop_out(self):
        # beta = 0 makes the k = 0 term vanish through 1/Gamma
        v = wright_series(1.0, 0.0, 0.5)
        with mp.workdps(40):
            ref = mp.nsum(lambda k: mp.mpf(0.5) ** k / (mp.factorial(k) * mp.gamma(k)), [1, mp.inf])
            assert v == pytest.approx(float(ref), rel=1e-11)

    def test_domain(self):
        with pytest.raises(DomainError):
            wright_series(-1.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            WrightQuery(delta=-1.2, beta=1.0, z=0.0)
        q = WrightQuery(delta=0.0, beta=1.0, z=1.0)
        assert wright(q) == pytest.approx(math.e, rel=1e-14)

    def test_term_cap_raises(self):
        # delta next to -1 with a large argument needs astronomically many terms
        with pytest.raises(ConvergenceError):
            wright_series(-0.93, 0.5, -50.0)


class TestPskhuImage:
    def test_unit_case(self):
        res = pskhu_image_of_power(0.5, 1.0, 1.0, 1.0)
        assert res.value == pytest.approx(1.0 / gamma_real(1.5), rel=1e-8)
        assert res.tail_estimate < 1e-8

    def test_gamma_two_case(self):
        res = pskhu_image_of_power(0.5, 0.5, 2.0, 1.0)
        assert res.value == pytest.approx(gamma_real(2.0) / gamma_real(1.5), rel=1e-6)

    @pytest.mark.parametrize("alpha", [0.3, 0.7])
    @pytest.mark.parametrize("t", [0.5, 2.0])
    def test_gamma_one_general_form(self, alpha, t):
        beta = 1.0
        res = pskhu_image_of_power(alpha, beta, 1.0, t)
        ref = t ** (alpha + beta - 1.0) / gamma_real(alpha + beta)
        assert res.value == pytest.approx(ref, rel=1e-6)

    def test_domain(self):
        with pytest.raises(DomainError):
            pskhu_image_of_power(1.5, 1.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            pskhu_image_of_power(0.5, 1.0, -1.0, 1.0)
        with pytest.raises(DomainError):
            pskhu_image_of_power(0.5, 1.0, 1.0, 0.0)
