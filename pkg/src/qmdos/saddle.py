"""Steepest-descent apparatus for the large-J density at E = 1/alpha.

The integrand is written as ``g(lam) * exp(-J f(lam))`` in the parameter
``lam`` of the exact non-diagonal solution ``r = lam e^-lam / sinh lam``,
``s = lam e^lam / sinh lam`` of ``s e^r = r e^s``. Near ``lam = 0`` every
function switches to a Bernoulli series, since the closed forms are 0/0 or
cancel catastrophically there.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath

SERIES_RADIUS = mpmath.mpf("1e-3")
SERIES_TERMS = 12
DEFAULT_DPS = 40


class SaddleDomainError(ValueError):
    pass


class SolverError(RuntimeError):
    pass


@lru_cache(maxsize=None)
def _coth_coeffs(terms: int) -> tuple:
    # lam*coth(lam) = sum_k c_k lam^(2k),  c_k = 4^k B_2k / (2k)!
    return tuple(mpmath.mpf(4) ** k * mpmath.bernoulli(2 * k) / mpmath.factorial(2 * k) for k in range(terms + 1))


def _small(lam) -> bool:
    return abs(lam) < SERIES_RADIUS


def _inv_minus_coth(lam):
    """``1/lam - coth(lam)``, odd, ``-lam/3 + lam^3/45 - ...`` near 0."""
    if _small(lam):
        c = _coth_coeffs(SERIES_TERMS)
        return -sum(c[k] * lam ** (2 * k - 1) for k in range(1, SERIES_TERMS + 1))
    return 1 / lam - mpmath.coth(lam)


def _log_lam_over_sinh(lam):
    # d/dlam log(sinh lam / lam) = coth lam - 1/lam
    c = _coth_coeffs(SERIES_TERMS)
    return -sum(c[k] * lam ** (2 * k) / (2 * k) for k in range(1, SERIES_TERMS + 1))


def _check_pole(lam):
    # sinh vanishes at i*pi*m; m = 0 is the removable point handled by series
    m = int(mpmath.nint(mpmath.im(lam) / mpmath.pi))
    if m != 0 and abs(lam - 1j * mpmath.pi * m) < mpmath.mpf(10) ** (-mpmath.mp.dps + 3):
        raise SaddleDomainError(f"sinh vanishes at lambda={lam}")


def _num(x):
    if isinstance(x, (complex, mpmath.mpc)):
        return mpmath.mpc(x)
    return mpmath.mpf(x)


def f_phase(lam, alpha):
    """Phase ``log(lam e^lam / sinh lam) + (alpha-1) log(lam e^-lam / sinh lam)``.

    Principal branch for each logarithm; zero at ``lam = 0``.
    """
    lam, alpha = _num(lam), mpmath.mpf(alpha)
    if _small(lam):
        return alpha * _log_lam_over_sinh(lam) + (2 - alpha) * lam
    _check_pole(lam)
    sh = mpmath.sinh(lam)
    return mpmath.log(lam * mpmath.exp(lam) / sh) + (alpha - 1) * mpmath.log(lam * mpmath.exp(-lam) / sh)


def f_prime(lam, alpha):
    """``2 - alpha + alpha (1/lam - 1/tanh lam)``."""
    lam, alpha = _num(lam), mpmath.mpf(alpha)
    if not _small(lam):
        _check_pole(lam)
    return 2 - alpha + alpha * _inv_minus_coth(lam)


def f_second(lam, alpha):
    """``alpha (1/sinh^2 lam - 1/lam^2)``; equals ``-alpha/3`` at 0."""
    lam, alpha = _num(lam), mpmath.mpf(alpha)
    if _small(lam):
        c = _coth_coeffs(SERIES_TERMS)
        return -alpha * sum(c[k] * (2 * k - 1) * lam ** (2 * k - 2) for k in range(1, SERIES_TERMS + 1))
    _check_pole(lam)
    return alpha * (1 / mpmath.sinh(lam) ** 2 - 1 / lam**2)


@lru_cache(maxsize=None)
def _g_parts_coeffs(terms: int) -> tuple[tuple, tuple]:
    # Taylor coefficients (from lam^2 up) of
    #   N = sinh(lam) (1 - lam) - lam cosh(lam)    and    D = sinh(lam) - lam e^lam
    fac = mpmath.factorial
    num, den = [], []
    for k in range(2, terms + 2):
        sinh_k = 1 / fac(k) if k % 2 else 0
        lam_sinh_k = 1 / fac(k - 1) if (k - 1) % 2 else 0
        lam_cosh_k = 1 / fac(k - 1) if (k - 1) % 2 == 0 else 0
        num.append(sinh_k - lam_sinh_k - lam_cosh_k)
        den.append(sinh_k - 1 / fac(k - 1))
    return tuple(num), tuple(den)


def g_prefactor(lam, alpha, J):
    """``alpha J sinh lam (1 - lam - lam/tanh lam) / (i pi (sinh lam - lam e^lam))``."""
    lam, alpha = _num(lam), mpmath.mpf(alpha)
    pref = alpha * J / (1j * mpmath.pi)
    if _small(lam):
        num_c, den_c = _g_parts_coeffs(SERIES_TERMS)
        num = sum(c * lam**k for k, c in enumerate(num_c))
        den = sum(c * lam**k for k, c in enumerate(den_c))
        return mpmath.mpc(pref * num / den)
    sh = mpmath.sinh(lam)
    den = sh - lam * mpmath.exp(lam)
    if abs(den) < mpmath.mpf(10) ** (-mpmath.mp.dps + 5):
        raise SaddleDomainError(f"g has a pole at lambda={lam}")
    return mpmath.mpc(pref * sh * (1 - lam - lam / mpmath.tanh(lam)) / den)


@dataclass(frozen=True)
class ParametricPair:
    lam: mpmath.mpc
    r: mpmath.mpc
    s: mpmath.mpc

    @property
    def residual(self):
        """``|s e^r - r e^s|``."""
        return abs(self.s * mpmath.exp(self.r) - self.r * mpmath.exp(self.s))


def parametric_pair(lam) -> ParametricPair:
    """The off-diagonal solution of ``s e^r = r e^s`` at parameter ``lam``."""
    lam = mpmath.mpc(lam)
    if lam == 0:
        return ParametricPair(lam, mpmath.mpc(1), mpmath.mpc(1))
    _check_pole(lam)
    sh = mpmath.sinh(lam)
    return ParametricPair(lam, lam * mpmath.exp(-lam) / sh, lam * mpmath.exp(lam) / sh)


@dataclass(frozen=True)
class SaddleResult:
    alpha: mpmath.mpf
    lambda0: mpmath.mpf
    f_at_saddle: mpmath.mpf
    f_second_at_saddle: mpmath.mpf
    predicted_rate: mpmath.mpf
    f_prime_residual: mpmath.mpf
    prefactor_alpha2: mpmath.mpf | None = None


def _gaussian_prefactor(alpha, lam0, f2):
    """Coefficient of sqrt(J) from the Gaussian integral through a real saddle with f'' < 0.

    Steepest descent runs along ``lam = lam0 + i t``:
    ``g(lam0) * i * sqrt(2 pi / (J |f''|))``; ``g`` carries the factor ``J``.
    """
    g_per_J = g_prefactor(lam0, alpha, 1)
    val = g_per_J * 1j * mpmath.sqrt(2 * mpmath.pi / abs(f2))
    return mpmath.re(val)


def solve_saddle(alpha, lo=-10, hi=mpmath.mpf("-1e-6"), tol=mpmath.mpf("1e-30"), maxiter=200,
                 dps: int = DEFAULT_DPS) -> SaddleResult:
    """Real saddle of the phase: root of ``f_prime`` on the negative axis.

    alpha == 2 gives ``lambda0 = 0``. Otherwise the root is bracketed in
    ``[lo, hi]`` and refined with Newton steps, falling back to bisection
    whenever a step leaves the bracket.
    """
    with mpmath.workdps(dps):
        alpha = mpmath.mpf(alpha)
        if alpha < 2:
            raise ValueError("alpha must be >= 2")
        if alpha == 2:
            lam0 = mpmath.mpf(0)
            f2 = f_second(lam0, alpha)
            return SaddleResult(alpha, lam0, f_phase(lam0, alpha), f2, f_phase(lam0, alpha),
                                abs(f_prime(lam0, alpha)), _gaussian_prefactor(alpha, lam0, f2))
        a, b = mpmath.mpf(lo), mpmath.mpf(hi)
        fa, fb = f_prime(a, alpha), f_prime(b, alpha)
        if fa * fb > 0:
            raise SolverError(f"no sign change of f' on [{a}, {b}] for alpha={alpha}")
        x = (a + b) / 2
        for _ in range(maxiter):
            fx = f_prime(x, alpha)
            if fx == 0:
                break
            if (fx > 0) == (fa > 0):
                a, fa = x, fx
            else:
                b = x
            step = fx / f_second(x, alpha)
            nx = x - step
            if not (a < nx < b):
                nx = (a + b) / 2
            if abs(nx - x) < tol * (1 + abs(x)):
                x = nx
                break
            x = nx
        else:
            raise SolverError(f"no convergence for alpha={alpha} in [{lo}, {hi}]")
        fval = f_phase(x, alpha)
        return SaddleResult(alpha, x, fval, f_second(x, alpha), fval, abs(f_prime(x, alpha)))


def predict_omega(alpha, J, dps: int = DEFAULT_DPS):
    """Leading large-J estimate.

    alpha == 2: ``(2 sqrt 3 / sqrt pi) sqrt J`` from the Gaussian saddle.
    alpha > 2: ``exp(-f(lambda0) J)``, the rate only; the algebraic prefactor
    is not determined, so treat this as an order-of-magnitude estimate.
    """
    res = solve_saddle(alpha, dps=dps)
    with mpmath.workdps(dps):
        if res.prefactor_alpha2 is not None:
            return res.prefactor_alpha2 * mpmath.sqrt(J)
        return mpmath.exp(-res.predicted_rate * J)
