"""Exit criteria. Each test prints one PASS/FAIL line in the terminal summary."""

import csv
import time
from fractions import Fraction as F

import mpmath
from hypothesis import given, settings, strategies as st

from qmdos import asymptotics as asy
from qmdos import montecarlo as mc
from qmdos import saddle as sd
from qmdos import spectral as sp
from qmdos.cli import main

C2 = 2 * mpmath.sqrt(3) / mpmath.sqrt(mpmath.pi)


def test_c01_normalization():
    """C1 normalization: integrate_mu(n) == 1 exactly for n = 1..200, < 60 s"""
    t0 = time.perf_counter()
    bad = [n for n in range(1, 201) if sp.integrate_mu(n) != 1]
    elapsed = time.perf_counter() - t0
    assert bad == []
    assert elapsed < 60


def test_c02_discrete_difference():
    """C2 discrete-difference identity: lhs == (-1)^n n! exactly for n = 1..120, < 10 s"""
    t0 = time.perf_counter()
    for n in range(1, 121):
        lhs, rhs = sp.discrete_difference_identity(n)
        assert lhs == rhs
    assert time.perf_counter() - t0 < 10


def test_c03_richardson_constant():
    """C3 Richardson: omega_J(2)/sqrt(J), J = 4..64 step 4, order 4, within 1e-6 of 2 sqrt3/sqrt pi, < 120 s"""
    t0 = time.perf_counter()
    table = asy.build_series(2, range(4, 65, 4))
    est = asy.richardson(asy.scaled_alpha2_sequence(table), 4)
    assert abs(est - C2) <= 1e-6
    assert abs(C2 - mpmath.mpf("1.9544100476")) < 1e-10
    assert time.perf_counter() - t0 < 120


def test_c04_saddle_closed_form():
    """C4 saddle at alpha=2: lambda0 = 0, f = 0, f'' = -2/3, g(0) = -2iJ/pi, all within 1e-12"""
    res = sd.solve_saddle(2)
    assert abs(res.lambda0) <= 1e-12
    assert abs(res.f_at_saddle) <= 1e-12
    assert abs(res.f_second_at_saddle + mpmath.mpf(2) / 3) <= 1e-12
    for J in (1, 5, 40):
        assert abs(sd.g_prefactor(0, 2, J) + 2j * J / mpmath.pi) <= 1e-12


def test_c05_rate_alpha3():
    """C5 decay rate alpha=3: measured over J = 10..60 matches f(lambda0) within 2%, < 120 s"""
    t0 = time.perf_counter()
    table = asy.build_series(3, range(10, 61, 10))
    measured = asy.measure_decay_rate(table)
    predicted = sd.solve_saddle(3).predicted_rate
    assert abs(measured - predicted) / predicted < 0.02
    assert time.perf_counter() - t0 < 120


J_GRID = list(range(10, 61, 10))


def test_c06a_cancellation_alpha_5_2():
    """C6a cancellation alpha=5/2: max-term/|sum| > 1e6 at some J <= 60, every omega_J finite and > 0"""
    table = asy.build_series(F(5, 2), J_GRID)
    ratios = [r for _, r in asy.cancellation_profile(table)]
    assert max(ratios) > 1e6
    assert all(r.omega_exact > 0 and mpmath.isfinite(r.omega_float) for r in table.rows)


def test_c06b_no_deep_cancellation_alpha_4():
    """C6b cancellation alpha=4: max-term/|sum| < 10 for all tested J (J = 10..60)"""
    table = asy.build_series(4, J_GRID)
    ratios = {J: r for J, r in asy.cancellation_profile(table)}
    assert all(r < 10 for r in ratios.values()), {J: mpmath.nstr(r, 5) for J, r in ratios.items()}


def test_c07_monte_carlo():
    """C7 Monte Carlo: n in {1, 2}, N = 1e6, 100 bins, sup deviation <= 0.05, < 60 s"""
    t0 = time.perf_counter()
    for n in (1, 2):
        rep = mc.compare_density(mc.build_histogram(n, 10**6, 100, seed=20240), n)
        assert rep.sup_deviation <= 0.05
    assert time.perf_counter() - t0 < 60


def test_c08_concentration():
    """C8 delta limit: MC mass in [0.45, 0.55] rises over n = 3, 9, 27; exact mu_n(1/2) rises over n = 2..20 even"""
    masses = [mc.build_histogram(n, 10**6, 100, seed=8).mass(0.45, 0.55) for n in (3, 9, 27)]
    assert masses[0] < masses[1] < masses[2]
    peaks = [sp.mu_linear(n, F(1, 2)) for n in range(2, 21, 2)]
    assert all(b > a for a, b in zip(peaks, peaks[1:]))


def test_c09_figure1(tmp_path):
    """C9 figure 1: three symmetric curves, peaks rise with n, trapezoid integral 1 within 1e-3 on 501 points"""
    path = tmp_path / "figure1.csv"
    assert main(["figure1", "--points", "501", "--output", str(path)]) == 0
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["E", "mu_n3", "mu_n6", "mu_n9"]
    data = rows[1:]
    assert len(data) == 501
    h = 1 / 500
    peaks = []
    for col in (1, 2, 3):
        text = [r[col] for r in data]
        assert text == text[::-1]
        vals = [float(v) for v in text]
        assert abs(h * (sum(vals) - (vals[0] + vals[-1]) / 2) - 1) <= 1e-3
        peaks.append(vals[250])
        assert max(vals) == vals[250]
    assert peaks[0] < peaks[1] < peaks[2]


@settings(max_examples=150, deadline=None)
@given(
    st.integers(1, 24),
    st.fractions(min_value=0, max_value=1, max_denominator=80),
    st.fractions(min_value=2, max_value=5, max_denominator=3),
    st.integers(1, 4),
)
def test_c10_cross_path_equivalence(n, E, alpha, m):
    """C10 cross-path: mu_general == mu_linear == piecewise_mu, omega_j == mu_linear(alpha J, 1/alpha), exact"""
    ref = sp.mu_linear(n, E)
    assert sp.mu_general(sp.Spectrum.linear(n), E) == ref
    assert sp.piecewise_mu(n)(E) == ref
    J = alpha.denominator * m
    assert asy.omega_j(alpha, J) == sp.mu_linear(int(alpha * J), 1 / alpha)
