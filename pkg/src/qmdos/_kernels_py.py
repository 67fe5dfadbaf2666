"""Pure-Python/numpy implementations of the hot kernels.

These mirror ``_kernels.pyx`` function for function and are used when the
compiled extension is unavailable (or when ``QMDOS_PURE_PYTHON=1``).
"""

from math import comb

import numpy as np

GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1
TWO_PI = 6.283185307179586
INV_2_53 = 1.0 / 9007199254740992.0


def alt_binom_terms(n, upto, q, c, power):
    """Return ``[(-1)**k * C(n, k) * (k*q - c)**power for k in 0..upto]``."""
    terms = []
    binom = 1
    for k in range(upto + 1):
        t = binom * (k * q - c) ** power
        terms.append(-t if k & 1 else t)
        binom = binom * (n - k) // (k + 1)
    return terms


def piece_table(n):
    """Integer coefficient table of the per-interval density polynomials.

    Row ``j`` holds ``a[j][m]`` such that on ``u = nE`` in ``[j, j+1]`` the
    unscaled density equals ``sum_m a[j][m] * u**m``.
    """
    d = n - 1
    # running S[e] = sum_{k<=j} (-1)^k C(n,k) k^e for e = 0..d
    running = [0] * (d + 1)
    weights = [comb(d, m) * (-1 if m & 1 else 1) for m in range(d + 1)]
    rows = []
    binom = 1
    for j in range(n):
        sign_binom = -binom if j & 1 else binom
        p = 1
        for e in range(d + 1):
            running[e] += sign_binom * p
            p *= j
        rows.append([weights[m] * running[d - m] for m in range(d + 1)])
        binom = binom * (n - j) // (j + 1)
    return rows


def piece_integral_sum(rows, lcm):
    """Return ``lcm * sum_j int_j^{j+1} sum_m a[j][m] u**m du`` as an int."""
    total = 0
    for j, row in enumerate(rows):
        lo = j
        hi = j + 1
        plo = lo
        phi = hi
        for m, a in enumerate(row):
            if a:
                total += a * (phi - plo) * (lcm // (m + 1))
            plo *= lo
            phi *= hi
    return total


def _mix64(x):
    x = (x ^ (x >> np.uint64(30))) * np.uint64(MIX1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(MIX2)
    return x ^ (x >> np.uint64(31))


def seed_key(seed):
    x = (int(seed) + GAMMA) & MASK64
    x = ((x ^ (x >> 30)) * MIX1) & MASK64
    x = ((x ^ (x >> 27)) * MIX2) & MASK64
    return x ^ (x >> 31)


def energy_samples(levels, start, count, seed, chunk=1 << 16):
    """Draw ``count`` energy expectations, sample indices ``start..start+count-1``."""
    levels = np.ascontiguousarray(levels, dtype=np.float64)
    width = levels.shape[0]
    key = np.uint64(seed_key(seed))
    out = np.empty(count, dtype=np.float64)
    lvl = np.arange(width, dtype=np.uint64)
    with np.errstate(over="ignore"):
        for lo in range(0, count, chunk):
            hi = min(count, lo + chunk)
            idx = np.arange(start + lo, start + hi, dtype=np.uint64)
            base = (idx[:, None] * np.uint64(width) + lvl[None, :]) * np.uint64(2)
            x0 = _mix64(key + (base + np.uint64(1)) * np.uint64(GAMMA))
            x1 = _mix64(key + (base + np.uint64(2)) * np.uint64(GAMMA))
            u0 = ((x0 >> np.uint64(11)).astype(np.float64) + 0.5) * INV_2_53
            u1 = ((x1 >> np.uint64(11)).astype(np.float64) + 0.5) * INV_2_53
            r = np.sqrt(-2.0 * np.log(u0))
            theta = TWO_PI * u1
            g1 = r * np.cos(theta)
            g2 = r * np.sin(theta)
            w = g1 * g1 + g2 * g2
            out[lo:hi] = (w @ levels) / w.sum(axis=1)
    return out
