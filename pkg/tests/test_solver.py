"""Tests for the mode solver and the assembled series solution."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from fracboussinesq.errors import DomainError
from fracboussinesq.solver import (
    ModeSolution,
    ProblemSpec,
    classical_mode_denominator,
    effective_frequency,
    evaluate,
    evaluate_at,
    evaluate_mode,
    mode_coefficients,
    series_denominator,
    solve,
)
from fracboussinesq.special_functions import mittag_leffler
from fracboussinesq.spectral import PhiData, SpectrumModel, graded_norm


def _single_mode_spec(alpha=1.5, nu=1.0, T=1.0, k=1):
    return ProblemSpec(
        alpha=alpha,
        nu=nu,
        T=T,
        spectrum=SpectrumModel.dirichlet_1d(math.pi),
        phi=PhiData.from_coefficients({k: 1.0}),
        K=max(k, 1),
    )


class TestEffectiveFrequency:
    def test_balanced(self):
        assert effective_frequency(1.0, 1.0) == pytest.approx(0.5)

    def test_large_eigenvalue_limit(self):
        v = effective_frequency(2.0, 1e6)
        assert v < 4.0
        assert v == pytest.approx(4.0 * (1.0 - 1e-6), rel=1e-9)

    def test_three(self):
        assert effective_frequency(1.0, 3.0) == pytest.approx(0.75)

    def test_domain(self):
        with pytest.raises(DomainError):
            effective_frequency(0.0, 1.0)


class TestModeCoefficients:
    def test_zero_data_gives_zero_mode(self):
        a, b, d = mode_coefficients(1.5, 1.0, 1.0, 0.0)
        assert a == 0.0 and b == 0.0 and d > 0.0

    def test_against_linear_system_oracle(self):
        # solve the two defining conditions as a 2x2 system instead
        alpha, nu_k_sq, T, phi_k = 1.5, 1.0, 1.0, 1.0
        z = -nu_k_sq * T**alpha
        e1 = mittag_leffler(alpha, 1.0, z)
        e2 = mittag_leffler(alpha, 2.0, z)
        e3 = mittag_leffler(alpha, 3.0, z)
        mat = np.array([[1.0 - e1, -T * e2], [T * e2, T * T * e3]])
        rhs = np.array([0.0, phi_k])
        a_ref, b_ref = np.linalg.solve(mat, rhs)
        a, b, _ = mode_coefficients(alpha, nu_k_sq, T, phi_k)
        assert a == pytest.approx(a_ref, rel=1e-12)
        assert b == pytest.approx(b_ref, rel=1e-12)

    def test_linear_in_data(self):
        a1, b1, _ = mode_coefficients(1.3, 0.7, 2.0, 1.0)
        a2, b2, _ = mode_coefficients(1.3, 0.7, 2.0, 2.0)
        assert a2 == pytest.approx(2.0 * a1, rel=1e-15)
        assert b2 == pytest.approx(2.0 * b1, rel=1e-15)

    def test_integral_condition_holds(self):
        alpha, nu_k_sq, T, phi_k = 1.7, 2.5, 3.0, 0.8
        z = -nu_k_sq * T**alpha
        a, b, _ = mode_coefficients(alpha, nu_k_sq, T, phi_k)
        e2 = mittag_leffler(alpha, 2.0, z)
        e3 = mittag_leffler(alpha, 3.0, z)
        assert a * T * e2 + b * T * T * e3 == pytest.approx(phi_k, rel=1e-12)


class TestEvaluateMode:
    def _mode(self, alpha=1.5, nu_k_sq=0.5, T=1.0, phi_k=1.0):
        z = -nu_k_sq * T**alpha
        a, b, d = mode_coefficients(alpha, nu_k_sq, T, phi_k)
        return ModeSolution(
            k=1,
            lambda_k=1.0,
            nu_k_sq=nu_k_sq,
            E1=mittag_leffler(alpha, 1.0, z),
            E2=mittag_leffler(alpha, 2.0, z),
            E3=mittag_leffler(alpha, 3.0, z),
            D_k=d,
            a_k=a,
            b_k=b,
            phi_k=phi_k,
        )

    def test_value_at_origin_is_a(self):
        mode = self._mode()
        assert evaluate_mode(mode, 1.5, 0.0, 1.0) == mode.a_k

    def test_endpoints_agree(self):
        mode = self._mode(alpha=1.8, nu_k_sq=3.0, T=2.0)
        t0 = evaluate_mode(mode, 1.8, 0.0, 2.0)
        t1 = evaluate_mode(mode, 1.8, 2.0, 2.0)
        assert t1 == pytest.approx(t0, rel=1e-12)

    def test_zero_mode_is_zero(self):
        mode = self._mode(phi_k=0.0)
        for t in (0.0, 0.4, 1.0):
            assert evaluate_mode(mode, 1.5, t, 1.0) == 0.0

    def test_domain(self):
        mode = self._mode()
        with pytest.raises(DomainError):
            evaluate_mode(mode, 1.5, 1.5, 1.0)
        with pytest.raises(DomainError):
            evaluate_mode(mode, 1.5, -0.1, 1.0)


class TestSolve:
    def test_zero_data(self):
        spec = ProblemSpec(
            alpha=1.5,
            nu=1.0,
            T=1.0,
            spectrum=SpectrumModel.dirichlet_1d(math.pi),
            phi=PhiData.zero(),
            K=4,
        )
        sol = solve(spec)
        assert sol.tail_bound == 0.0
        assert np.all(evaluate(sol, 0.5) == 0.0)

    def test_single_mode_integral_condition_by_quadrature(self):
        sol = solve(_single_mode_spec())
        val, _ = quad(
            lambda t: evaluate_mode(sol.modes[0], 1.5, t, 1.0), 0.0, 1.0,
            limit=200, epsabs=1e-12,
        )
        assert val == pytest.approx(1.0, abs=1e-8)

    def test_truncation_below_support_gives_positive_tail(self):
        spec = ProblemSpec(
            alpha=1.5,
            nu=1.0,
            T=1.0,
            spectrum=SpectrumModel.dirichlet_1d(math.pi),
            phi=PhiData.from_coefficients({1: 1.0, 5: 0.25}),
            K=2,
        )
        sol = solve(spec)
        assert sol.tail_bound > 0.0

    def test_endpoint_vectors_agree(self):
        spec = ProblemSpec(
            alpha=1.2,
            nu=3.0,
            T=2.5,
            spectrum=SpectrumModel.synthetic(0.8, 1.5),
            phi=PhiData.from_coefficients({1: 1.0, 2: -0.4, 3: 0.1}),
            K=3,
        )
        sol = solve(spec)
        u0 = evaluate(sol, 0.0)
        uT = evaluate(sol, spec.T)
        np.testing.assert_allclose(uT, u0, rtol=1e-10, atol=1e-14)

    def test_linearity(self):
        base = dict(
            alpha=1.6, nu=2.0, T=1.5, spectrum=SpectrumModel.synthetic(), K=4
        )
        rng = np.random.default_rng(11)
        c1, c2 = rng.standard_normal(4), rng.standard_normal(4)
        s1 = solve(ProblemSpec(phi=PhiData.from_coefficients(dict(enumerate(c1, 1))), **base))
        s2 = solve(ProblemSpec(phi=PhiData.from_coefficients(dict(enumerate(c2, 1))), **base))
        s3 = solve(
            ProblemSpec(
                phi=PhiData.from_coefficients(dict(enumerate(2.0 * c1 - 0.5 * c2, 1))), **base
            )
        )
        for t in (0.0, 0.7, 1.5):
            np.testing.assert_allclose(
                evaluate(s3, t),
                2.0 * evaluate(s1, t) - 0.5 * evaluate(s2, t),
                rtol=1e-11,
                atol=1e-14,
            )

    def test_stability_envelope(self):
        from fracboussinesq.verification import empirical_c0

        spec = ProblemSpec(
            alpha=1.4,
            nu=2.0,
            T=2.0,
            spectrum=SpectrumModel.dirichlet_1d(math.pi),
            phi=PhiData.from_coefficients({1: 1.0, 2: 0.5, 3: 0.2}),
            K=3,
        )
        sol = solve(spec)
        lam = np.array([m.lambda_k for m in sol.modes])
        phi_vec = np.array([m.phi_k for m in sol.modes])
        c0 = empirical_c0(spec.alpha).c0
        bound = 2.0 / (c0 * spec.T) * graded_norm(phi_vec, lam, 1.0)
        for t in np.linspace(0.0, spec.T, 11):
            assert graded_norm(evaluate(sol, float(t)), lam, 1.0) <= bound

    def test_evaluate_at_node_of_eigenfunction(self):
        sol = solve(_single_mode_spec())
        # v_1 vanishes at both ends of (0, pi)
        assert evaluate_at(sol, 0.5, 0.0) == pytest.approx(0.0, abs=1e-14)

    def test_two_dimensional_spectrum_end_to_end(self):
        spec = ProblemSpec(
            alpha=1.4,
            nu=1.5,
            T=1.0,
            spectrum=SpectrumModel.dirichlet_2d(math.pi, math.pi),
            phi=PhiData.from_coefficients({1: 1.0, 3: -0.2}),
            K=4,
        )
        sol = solve(spec)
        np.testing.assert_allclose(evaluate(sol, 0.0), evaluate(sol, 1.0), rtol=1e-10)
        for m in sol.modes:
            e2 = mittag_leffler(spec.alpha, 2.0, -m.nu_k_sq)
            e3 = mittag_leffler(spec.alpha, 3.0, -m.nu_k_sq)
            assert m.a_k * e2 + m.b_k * e3 == pytest.approx(m.phi_k, rel=1e-12, abs=1e-15)
        # pointwise evaluation needs both coordinates
        v = evaluate_at(sol, 0.5, math.pi / 2.0, math.pi / 2.0)
        assert math.isfinite(v)
        with pytest.raises(DomainError):
            evaluate_at(sol, 0.5, math.pi / 2.0)

    def test_threads_env_garbage_falls_back_to_serial(self, monkeypatch):
        monkeypatch.setenv("FRACB_THREADS", "many")
        sol = solve(_single_mode_spec())
        assert len(sol.modes) == 1

    def test_threads_env_gives_identical_results(self, monkeypatch):
        spec = ProblemSpec(
            alpha=1.5,
            nu=1.0,
            T=1.0,
            spectrum=SpectrumModel.synthetic(),
            phi=PhiData.from_coefficients({1: 1.0, 2: 0.5, 3: 0.1, 4: 0.05}),
            K=4,
        )
        serial = solve(spec)
        monkeypatch.setenv("FRACB_THREADS", "3")
        threaded = solve(spec)
        for ms, mt in zip(serial.modes, threaded.modes):
            assert ms == mt

    def test_spec_validation(self):
        model = SpectrumModel.synthetic()
        phi = PhiData.zero()
        with pytest.raises(DomainError):
            ProblemSpec(alpha=2.0, nu=1.0, T=1.0, spectrum=model, phi=phi, K=1)
        with pytest.raises(DomainError):
            ProblemSpec(alpha=1.0, nu=1.0, T=1.0, spectrum=model, phi=phi, K=1)
        with pytest.raises(DomainError):
            ProblemSpec(alpha=1.5, nu=0.0, T=1.0, spectrum=model, phi=phi, K=1)
        with pytest.raises(DomainError):
            ProblemSpec(alpha=1.5, nu=1.0, T=1.0, spectrum=model, phi=phi, K=0)


class TestClassicalDenominator:
    def test_at_pi(self):
        assert classical_mode_denominator(math.pi) == pytest.approx(4.0 / math.pi**2, rel=1e-14)

    def test_resonance_zero(self):
        assert classical_mode_denominator(2.0 * math.pi) <= 1e-12

    def test_small_argument_limit(self):
        assert classical_mode_denominator(1e-4) == pytest.approx(1.0, abs=1e-8)

    def test_matches_series_denominator_at_order_two_limit(self):
        # alpha -> 2 of the fractional denominator approaches the closed form
        x = 2.0
        T = 1.0
        frac = series_denominator(1.9999, -((x / T) ** 2) * T**1.9999)
        assert frac == pytest.approx(classical_mode_denominator(x), rel=1e-3)

    def test_domain(self):
        with pytest.raises(DomainError):
            classical_mode_denominator(0.0)
