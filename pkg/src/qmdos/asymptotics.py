"""Large-J behaviour of the density at E = 1/alpha for n = alpha*J levels.

The alternating sum is evaluated exactly; only derived diagnostics (log
ratios, extrapolations) are carried in mpmath floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

import mpmath

from . import _backend
from .numeric import DEFAULT_DIGITS, to_mpf
from .spectral import as_fraction


class ParameterError(ValueError):
    """alpha < 2, or alpha*J not a positive integer."""


class InsufficientDataError(ValueError):
    pass


class DegenerateDataError(ValueError):
    pass


def check_alpha(alpha) -> Fraction:
    alpha = as_fraction(alpha)
    if alpha < 2:
        raise ParameterError(f"alpha must be >= 2, got {alpha}")
    return alpha


def level_count(alpha: Fraction, J: int) -> int:
    if J < 1:
        raise ParameterError("J must be a positive integer")
    n = alpha * J
    if n.denominator != 1:
        raise ParameterError(f"alpha*J = {n} is not an integer")
    return int(n)


def valid_js(alpha, jmax: int, step: int | None = None) -> list[int]:
    """All J <= jmax (multiples of ``step``) with alpha*J integral."""
    alpha = check_alpha(alpha)
    base = alpha.denominator
    step = step or base
    if step % base:
        raise ParameterError(f"J step {step} is not a multiple of {base}; alpha*J would not be integral")
    return list(range(step, jmax + 1, step))


def _terms(alpha: Fraction, J: int) -> tuple[list[int], Fraction]:
    """Integer terms ``(-1)^k C(n,k) (J-k)^(n-1)`` and the common scale ``alpha^2 J^2 / n!``."""
    n = level_count(alpha, J)
    # (J - k) = -(k - J): pull the sign out of the odd/even power
    terms = _backend.alt_binom_terms(n, J, 1, J, n - 1)
    if (n - 1) & 1:
        terms = [-t for t in terms]
    return terms, alpha * alpha * J * J / factorial(n)


def omega_j(alpha, J: int) -> Fraction:
    """Exact value of the density at E = 1/alpha for alpha*J + 1 levels."""
    alpha = check_alpha(alpha)
    terms, scale = _terms(alpha, J)
    return scale * sum(terms)


@dataclass
class SeriesRow:
    J: int
    omega_exact: Fraction
    omega_float: mpmath.mpf
    max_term_float: mpmath.mpf


@dataclass
class SeriesTable:
    alpha: Fraction
    rows: list[SeriesRow] = field(default_factory=list)
    digits: int = DEFAULT_DIGITS

    @property
    def js(self) -> list[int]:
        return [r.J for r in self.rows]


def build_series(alpha, J_list: Iterable[int], digits: int = DEFAULT_DIGITS) -> SeriesTable:
    """Exact omega_J for each J, with float projections and the largest |term|."""
    alpha = check_alpha(alpha)
    js = sorted(set(int(J) for J in J_list))
    table = SeriesTable(alpha=alpha, digits=digits)
    for J in js:
        terms, scale = _terms(alpha, J)
        exact = scale * sum(terms)
        biggest = max(abs(t) for t in terms)
        table.rows.append(
            SeriesRow(J, exact, to_mpf(exact, digits), to_mpf(scale * biggest, digits))
        )
    return table


def cancellation_profile(table: SeriesTable) -> list[tuple[int, mpmath.mpf]]:
    """Per row, ``max |term| / |omega|``: how much the alternating sum cancels."""
    if not table.rows:
        raise InsufficientDataError("empty table")
    out = []
    with mpmath.workdps(table.digits):
        for r in table.rows:
            if r.omega_exact == 0:
                out.append((r.J, mpmath.inf))
            else:
                out.append((r.J, r.max_term_float / abs(r.omega_float)))
    return out


def _neville_at_zero(xs: Sequence, ys: Sequence):
    p = list(ys)
    m = len(xs)
    for level in range(1, m):
        p = [(xs[i] * p[i + 1] - xs[i + level] * p[i]) / (xs[i] - xs[i + level]) for i in range(m - level)]
    return p[0]


def richardson(sequence: Sequence[tuple[int, object]], order: int, digits: int = DEFAULT_DIGITS) -> mpmath.mpf:
    """Limit of ``value(J)`` as J -> oo, assuming an expansion in powers of 1/J.

    Uses the ``order + 1`` largest indices and extrapolates the interpolating
    polynomial in ``1/J`` to zero. For consecutive integer indices this is the
    classical Richardson formula.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    seq = list(sequence)
    if len(seq) <= order:
        raise InsufficientDataError(f"need more than {order} points, got {len(seq)}")
    idx = [s[0] for s in seq]
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError("indices must be strictly increasing")
    tail = seq[-(order + 1):]
    with mpmath.workdps(digits):
        xs = [1 / mpmath.mpf(J) for J, _ in tail]
        ys = [mpmath.mpf(v) for _, v in tail]
        if all(y == ys[0] for y in ys):
            return +ys[0]
        return +_neville_at_zero(xs, ys)


def local_rates(table: SeriesTable) -> list[tuple[mpmath.mpf, mpmath.mpf]]:
    """``(J_mid, log(|w_J| / |w_J'|) / (J' - J))`` for successive rows."""
    rows = table.rows
    out = []
    with mpmath.workdps(table.digits):
        for a, b in zip(rows, rows[1:]):
            if a.omega_exact == 0 or b.omega_exact == 0:
                raise DegenerateDataError(f"omega vanishes at J={a.J if a.omega_exact == 0 else b.J}")
            rate = mpmath.log(abs(a.omega_float) / abs(b.omega_float)) / (b.J - a.J)
            out.append((mpmath.mpf(a.J + b.J) / 2, rate))
    return out


def measure_decay_rate(table: SeriesTable) -> mpmath.mpf:
    """Exponential decay rate of |omega_J| with the 1/J prefactor bias removed.

    Successive log-ratios behave like ``rate + c/J_mid``; one linear
    extrapolation in ``1/J_mid`` over the last two of them removes ``c``.
    """
    if len(table.rows) < 3:
        raise InsufficientDataError("need at least 3 rows")
    rates = local_rates(table)
    (m1, r1), (m2, r2) = rates[-2], rates[-1]
    with mpmath.workdps(table.digits):
        return (m2 * r2 - m1 * r1) / (m2 - m1)


def scaled_alpha2_sequence(table: SeriesTable) -> list[tuple[int, mpmath.mpf]]:
    """``(J, omega_J / sqrt(J))`` pairs, the sequence whose limit is the alpha=2 constant."""
    with mpmath.workdps(table.digits):
        return [(r.J, r.omega_float / mpmath.sqrt(r.J)) for r in table.rows]


def alpha2_constant(jmax: int = 64, step: int = 4, order: int = 4, digits: int = DEFAULT_DIGITS) -> mpmath.mpf:
    """Richardson estimate of ``lim omega_J(2) / sqrt(J)``."""
    table = build_series(2, range(step, jmax + 1, step), digits)
    return richardson(scaled_alpha2_sequence(table), order, digits)


def log_slope(js: Sequence[int], values: Sequence) -> float:
    """Least-squares slope of ``log|value|`` against J (regime diagnostics)."""
    logs = [float(mpmath.log(abs(v))) for v in values]
    mj = sum(js) / len(js)
    ml = sum(logs) / len(logs)
    num = sum((j - mj) * (l - ml) for j, l in zip(js, logs))
    den = sum((j - mj) ** 2 for j in js)
    return num / den
