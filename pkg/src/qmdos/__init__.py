"""Exact density of states for the quantum microcanonical pure-state ensemble."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .asymptotics import (
    SeriesTable,
    build_series,
    cancellation_profile,
    measure_decay_rate,
    omega_j,
    richardson,
)
from .montecarlo import EmpiricalDensity, build_histogram, compare_density, sample_energy
from .saddle import (
    ParametricPair,
    SaddleResult,
    f_phase,
    f_prime,
    g_prefactor,
    parametric_pair,
    predict_omega,
    solve_saddle,
)
from .spectral import (
    DegenerateSpectrumError,
    DomainError,
    PiecewisePolynomial,
    Spectrum,
    delta_int,
    discrete_difference_identity,
    integrate_mu,
    mu_general,
    mu_linear,
    piecewise_mu,
)
