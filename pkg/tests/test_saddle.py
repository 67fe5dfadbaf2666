from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from qmdos import asymptotics as asy
from qmdos.saddle import (
    SaddleDomainError,
    SolverError,
    f_phase,
    f_prime,
    f_second,
    g_prefactor,
    parametric_pair,
    predict_omega,
    solve_saddle,
)

C2 = 2 * mpmath.sqrt(3) / mpmath.sqrt(mpmath.pi)


class TestPhase:
    def test_zero(self):
        assert f_phase(0, 2) == 0
        assert abs(f_phase(mpmath.mpf("1e-5"), 2)) < 1e-10

    def test_lambda1_alpha2(self):
        assert abs(f_phase(1, 2) + 2 * mpmath.log(mpmath.sinh(1))) < 1e-14

    def test_series_switch_continuous(self):
        for alpha in (2, 3):
            lo = f_phase(mpmath.mpf("0.00099999"), alpha)
            hi = f_phase(mpmath.mpf("0.00100001"), alpha)
            assert abs(lo - hi) < 1e-7

    def test_pole(self):
        with pytest.raises(SaddleDomainError):
            f_phase(1j * mpmath.pi, 3)


class TestDerivative:
    def test_limits(self):
        assert f_prime(0, 2) == 0
        assert f_prime(0, 3) == -1

    @pytest.mark.parametrize("lam", [0.3, -1.1, 2.5, 0.7 + 0.4j, -0.5 + 1.5j, 1e-4, -2e-4 + 1e-4j])
    @pytest.mark.parametrize("alpha", [2, 2.5, 3.7])
    def test_finite_difference(self, lam, alpha):
        with mpmath.workdps(40):
            h = mpmath.mpf("1e-8")
            lam = mpmath.mpmathify(lam)
            fd = (f_phase(lam + h, alpha) - f_phase(lam - h, alpha)) / (2 * h)
            assert abs(f_prime(lam, alpha) - fd) < 1e-14

    @pytest.mark.parametrize("lam", [0.4, -1.3, 1e-4])
    def test_second_derivative(self, lam):
        with mpmath.workdps(40):
            h = mpmath.mpf("1e-10")
            fd = (f_prime(lam + h, 3) - f_prime(lam - h, 3)) / (2 * h)
            assert abs(f_second(lam, 3) - fd) < 1e-15


class TestPrefactor:
    def test_limit_alpha2(self):
        assert abs(g_prefactor(0, 2, 1) + 2j / mpmath.pi) < 1e-12
        assert abs(g_prefactor(0, 2, 7) + 14j / mpmath.pi) < 1e-12

    def test_lambda1(self):
        # sinh(l)(1 - l - l coth l) = sinh l - l e^l identically, so g = alpha J / (i pi)
        assert abs(g_prefactor(1, 2, 1) - 2 / (1j * mpmath.pi)) < 1e-12

    def test_scaling_in_J(self):
        for lam in (0.5, -0.8 + 0.3j, 1e-4):
            assert abs(g_prefactor(lam, 3, 10) - 2 * g_prefactor(lam, 3, 5)) < 1e-12


class TestParametric:
    def test_origin(self):
        p = parametric_pair(0)
        assert p.r == 1 and p.s == 1

    def test_lambda1(self):
        p = parametric_pair(1)
        assert abs(p.r - mpmath.exp(-1) / mpmath.sinh(1)) < 1e-15
        assert abs(p.s - mpmath.e / mpmath.sinh(1)) < 1e-15
        assert p.residual < 1e-12

    @settings(max_examples=200, deadline=None)
    @given(st.floats(-2, 2), st.floats(-2, 2))
    def test_grid(self, re, im):
        lam = mpmath.mpc(re, im)
        if abs(lam) < 1e-12:
            return
        p = parametric_pair(lam)
        assert p.residual < 1e-10
        assert abs(p.s - p.r - 2 * lam) < 1e-12

    def test_sinh_zero(self):
        with pytest.raises(SaddleDomainError):
            parametric_pair(1j * mpmath.pi)


class TestSolve:
    def test_alpha2(self):
        res = solve_saddle(2)
        assert res.lambda0 == 0 and res.f_at_saddle == 0
        assert abs(res.f_second_at_saddle + mpmath.mpf(2) / 3) < 1e-12
        assert abs(res.prefactor_alpha2 - C2) < 1e-12

    def test_alpha3(self):
        res = solve_saddle(3)
        assert res.f_prime_residual < 1e-14
        assert res.lambda0 < 0 and res.f_at_saddle > 0
        assert res.prefactor_alpha2 is None

    def test_rate_monotone(self):
        rates = [solve_saddle(2.2 + 0.1 * i).predicted_rate for i in range(19)]
        assert all(b > a for a, b in zip(rates, rates[1:]))

    def test_no_bracket(self):
        with pytest.raises(SolverError):
            solve_saddle(3, lo=-0.5, hi=-0.1)

    def test_alpha_below_2(self):
        with pytest.raises(ValueError):
            solve_saddle(1.5)

    @pytest.mark.parametrize("alpha", ["5/2", "4"])
    def test_rate_vs_exact_series(self, alpha):
        t = asy.build_series(alpha, asy.valid_js(alpha, 60, 10))
        measured = asy.measure_decay_rate(t)
        predicted = solve_saddle(mpmath.mpf(float(Fraction(alpha)))).predicted_rate
        assert abs(measured - predicted) / predicted < 0.02


class TestPredict:
    def test_alpha2(self):
        assert abs(predict_omega(2, 100) - 10 * C2) < 1e-10
        assert abs(predict_omega(2, 1) - 2) < 0.1

    def test_alpha3_ratio(self):
        rate = solve_saddle(3).predicted_rate
        ratio = predict_omega(3, 25) / predict_omega(3, 15)
        assert abs(ratio - mpmath.exp(-10 * rate)) < 1e-15
