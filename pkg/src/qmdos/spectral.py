"""Exact density of states for nondegenerate spectra.

All scalars are :class:`fractions.Fraction`; nothing in this module rounds.
The normalising powers of pi cancel between the phase-space volume and the
unnormalised density, so pi never appears.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, lcm
from numbers import Rational
from typing import Iterable, Sequence

from . import _backend


class DegenerateSpectrumError(ValueError):
    """Raised when two energy levels coincide."""


class DomainError(ValueError):
    """Raised for an energy outside the rescaled range [0, 1]."""


def as_fraction(x) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string to an exact Fraction.

    Floats are rejected: every input to this module must be exact.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a valid rational")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    return factorial(n)


@dataclass(frozen=True)
class Spectrum:
    """Strictly increasing, exact energy eigenvalues ``E_0 < ... < E_n``."""

    levels: tuple[Fraction, ...]

    def __post_init__(self):
        levels = tuple(as_fraction(e) for e in self.levels)
        if len(levels) < 2:
            raise ValueError("a spectrum needs at least two levels (n >= 1)")
        if len(set(levels)) != len(levels):
            raise DegenerateSpectrumError("spectrum has repeated eigenvalues")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ValueError("levels must be given in increasing order")
        object.__setattr__(self, "levels", levels)

    @classmethod
    def linear(cls, n: int) -> "Spectrum":
        """The rescaled linear spectrum ``0, 1/n, ..., 1``."""
        return cls(tuple(Fraction(k, n) for k in range(n + 1)))

    @classmethod
    def from_values(cls, values: Iterable) -> "Spectrum":
        """Build from unsorted values; duplicates raise :class:`DegenerateSpectrumError`."""
        vals = [as_fraction(v) for v in values]
        if len(set(vals)) != len(vals):
            raise DegenerateSpectrumError("spectrum has repeated eigenvalues")
        return cls(tuple(sorted(vals)))

    @property
    def n(self) -> int:
        return len(self.levels) - 1

    @property
    def e_min(self) -> Fraction:
        return self.levels[0]

    @property
    def e_max(self) -> Fraction:
        return self.levels[-1]


def delta_int(x, n: int) -> Fraction:
    """n-fold integral of the Dirac delta: ``x**(n-1)/(n-1)!`` for x >= 0, else 0.

    ``0**0`` is taken as 1, so ``delta_int(0, 1) == 1``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    x = as_fraction(x)
    if x < 0:
        return Fraction(0)
    return x ** (n - 1) / _factorial(n - 1)


def mu_general(spec: Spectrum, E) -> Fraction:
    """Normalised density of states at energy ``E`` for an arbitrary spectrum.

    Outside ``[E_0, E_n]`` the density is 0. On the closed support the value
    is the limit from the interior, which only matters for n = 1 at the two
    endpoints (where the density is a step).
    """
    E = as_fraction(E)
    levels = spec.levels
    n = spec.n
    if E < levels[0] or E > levels[-1]:
        return Fraction(0)
    total = Fraction(0)
    for k, ek in enumerate(levels):
        x = ek - E
        # at the bottom edge take the right limit: drop the level sitting on E
        if x < 0 or (x == 0 and E == levels[0]):
            continue
        prod = Fraction(1)
        for l, el in enumerate(levels):
            if l != k:
                prod *= el - ek
        total += delta_int(x, n) / prod
    out = _factorial(n) * total
    return -out if n & 1 else out


def _linear_sum_parts(n: int, E: Fraction) -> tuple[int, int]:
    """Integer numerator of the alternating sum for the rescaled linear spectrum.

    With ``E = p/q`` returns ``(S, q)`` where
    ``sum_{k<=K} (-1)^k C(n,k) (k q - n p)^(n-1) = S`` and ``K = min(floor(nE), n-1)``.
    """
    p, q = E.numerator, E.denominator
    upto = min((n * p) // q, n - 1)
    return sum(_backend.alt_binom_terms(n, upto, q, n * p, n - 1)), q


def mu_linear(n: int, E) -> Fraction:
    """Density of states for ``n + 1`` equally spaced levels rescaled to [0, 1].

    The alternating sum runs over ``k <= floor(nE)`` with the top term
    ``k = n`` excluded; that term vanishes except for n = 1 at E = 1, where
    excluding it gives the closed-support value 1 instead of a dangling 0.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    E = as_fraction(E)
    if E < 0 or E > 1:
        raise DomainError(f"E = {E} lies outside [0, 1]")
    s, q = _linear_sum_parts(n, E)
    val = Fraction(n * n * s, _factorial(n) * q ** (n - 1))
    return val if n & 1 else -val


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Exact per-interval polynomials of the rescaled linear density.

    Internally piece ``j`` is stored as integer coefficients ``a[j][m]`` in
    ``u = nE`` with a shared rational ``scale``; :meth:`coefficients` gives
    the equivalent Fraction coefficients in ``E``.
    """

    n: int
    scale: Fraction
    int_pieces: tuple[tuple[int, ...], ...]

    @property
    def knots(self) -> list[Fraction]:
        return [Fraction(j, self.n) for j in range(self.n + 1)]

    @property
    def pieces(self) -> list[list[Fraction]]:
        return [self.coefficients(j) for j in range(self.n)]

    def coefficients(self, j: int) -> list[Fraction]:
        """Coefficients of ``E**m`` (ascending) on ``[j/n, (j+1)/n]``."""
        n = self.n
        return [self.scale * a * n**m for m, a in enumerate(self.int_pieces[j])]

    def piece_index(self, E: Fraction) -> int:
        return min(int(E * self.n), self.n - 1)

    def eval_piece(self, j: int, E) -> Fraction:
        E = as_fraction(E)
        u = self.n * E
        p, q = u.numerator, u.denominator
        row = self.int_pieces[j]
        deg = len(row) - 1
        # integer Horner: acc = sum a_m p^m q^(deg-m)
        acc = 0
        qpow = 1
        for a in reversed(row):
            acc = acc * p + a * qpow
            qpow *= q
        return self.scale * Fraction(acc, q**deg)

    def __call__(self, E) -> Fraction:
        E = as_fraction(E)
        if E < 0 or E > 1:
            return Fraction(0)
        return self.eval_piece(self.piece_index(E), E)

    def _antiderivative(self, j: int, u: Fraction) -> Fraction:
        row = self.int_pieces[j]
        return sum((Fraction(a, m + 1) * u ** (m + 1) for m, a in enumerate(row) if a), Fraction(0))

    def integrate(self, a=0, b=1) -> Fraction:
        """Exact integral of the density over ``[a, b]`` (clipped to [0, 1])."""
        a, b = as_fraction(a), as_fraction(b)
        if b < a:
            return -self.integrate(b, a)
        a, b = max(a, Fraction(0)), min(b, Fraction(1))
        if b <= a:
            return Fraction(0)
        n = self.n
        ua, ub = n * a, n * b
        total = Fraction(0)
        j = self.piece_index(a)
        while j < n and Fraction(j) < ub:
            lo = max(ua, Fraction(j))
            hi = min(ub, Fraction(j + 1))
            if hi > lo:
                total += self._antiderivative(j, hi) - self._antiderivative(j, lo)
            j += 1
        # dE = du / n
        return self.scale * total / n

    def total_integral(self) -> Fraction:
        """Exact integral over [0, 1] using whole-piece antiderivatives."""
        L = lcm(*range(1, self.n + 1))
        total = _backend.piece_integral_sum([list(r) for r in self.int_pieces], L)
        return self.scale * Fraction(total, L * self.n)


@lru_cache(maxsize=64)
def piecewise_mu(n: int) -> PiecewisePolynomial:
    """Exact piecewise-polynomial form of :func:`mu_linear` on the knots ``j/n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rows = _backend.piece_table(n)
    scale = Fraction(n * n, _factorial(n))
    if not n & 1:
        scale = -scale
    return PiecewisePolynomial(n=n, scale=scale, int_pieces=tuple(tuple(r) for r in rows))


def integrate_mu(n: int) -> Fraction:
    """Exact ``integral_0^1 mu(E) dE``; equals 1 for every n."""
    return piecewise_mu(n).total_integral()


def discrete_difference_identity(n: int) -> tuple[int, int]:
    """``(sum_k C(n,k) (-1)^k k^n, (-1)^n n!)``; the two must agree."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lhs = sum(_backend.alt_binom_terms(n, n, 1, 0, n))
    rhs = _factorial(n) if n % 2 == 0 else -_factorial(n)
    return lhs, rhs


def full_sum_unscaled(n: int, E) -> Fraction:
    """Summand of the unscaled linear-spectrum density summed over all k = 0..n.

    ``sum_k (-1)^k (k - E)^(n-1) / (k! (n-k)!)``; identically zero.
    """
    E = as_fraction(E)
    return sum(
        (Fraction((-1) ** k, _factorial(k) * _factorial(n - k)) * (k - E) ** (n - 1) for k in range(n + 1)),
        Fraction(0),
    )


def grid(points: int) -> list[Fraction]:
    """Uniform exact grid on [0, 1] with both endpoints."""
    if points < 2:
        raise ValueError("points must be >= 2")
    return [Fraction(i, points - 1) for i in range(points)]


def mu_on_grid(n: int, points: Sequence[Fraction]) -> list[Fraction]:
    return [mu_linear(n, E) for E in points]
