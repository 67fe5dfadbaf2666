# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Semantics match ``_kernels_py`` exactly."""

from libc.math cimport cos, log, sin, sqrt
from libc.stdint cimport uint64_t

import numpy as np

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t MIX2 = 0x94D049BB133111EBULL
cdef double TWO_PI = 6.283185307179586
cdef double INV_2_53 = 1.0 / 9007199254740992.0


def alt_binom_terms(n, upto, q, c, power):
    cdef Py_ssize_t k, kmax = upto
    cdef list terms = []
    cdef object binom = 1
    cdef object t
    cdef object n_ = n, q_ = q, c_ = c, p_ = power
    for k in range(kmax + 1):
        t = binom * (k * q_ - c_) ** p_
        if k & 1:
            terms.append(-t)
        else:
            terms.append(t)
        binom = binom * (n_ - k) // (k + 1)
    return terms


def piece_table(Py_ssize_t n):
    cdef Py_ssize_t d = n - 1
    cdef Py_ssize_t j, e, m
    cdef list running = [0] * (d + 1)
    cdef list weights = []
    cdef list rows = []
    cdef object binom = 1
    cdef object sign_binom, p, w
    w = 1
    for m in range(d + 1):
        weights.append(-w if m & 1 else w)
        w = w * (d - m) // (m + 1)
    for j in range(n):
        sign_binom = -binom if j & 1 else binom
        p = 1
        for e in range(d + 1):
            running[e] = running[e] + sign_binom * p
            p = p * j
        rows.append([weights[m] * running[d - m] for m in range(d + 1)])
        binom = binom * (n - j) // (j + 1)
    return rows


def piece_integral_sum(list rows, lcm):
    cdef Py_ssize_t j, m, width
    cdef object total = 0
    cdef object plo, phi, a, lo, hi
    cdef list row
    cdef list quot = []
    if rows:
        width = len(<list>rows[0])
        for m in range(width):
            quot.append(lcm // (m + 1))
    for j in range(len(rows)):
        row = <list>rows[j]
        lo = j
        hi = j + 1
        plo = lo
        phi = hi
        for m in range(len(row)):
            a = row[m]
            if a:
                total += a * (phi - plo) * quot[m]
            plo = plo * lo
            phi = phi * hi
    return total


cdef inline uint64_t mix64(uint64_t x) nogil:
    x = (x ^ (x >> 30)) * MIX1
    x = (x ^ (x >> 27)) * MIX2
    return x ^ (x >> 31)


def seed_key(seed):
    cdef uint64_t x = (<uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)) + GAMMA
    return mix64(x)


def energy_samples(levels, Py_ssize_t start, Py_ssize_t count, seed):
    cdef double[::1] lv = np.ascontiguousarray(levels, dtype=np.float64)
    cdef Py_ssize_t width = lv.shape[0]
    cdef uint64_t key = seed_key(seed)
    out_arr = np.empty(count, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, l
    cdef uint64_t base
    cdef double u0, u1, r, theta, g1, g2, w, num, den
    with nogil:
        for i in range(count):
            num = 0.0
            den = 0.0
            for l in range(width):
                base = (<uint64_t>(start + i) * <uint64_t>width + <uint64_t>l) * 2
                u0 = (<double>(mix64(key + (base + 1) * GAMMA) >> 11) + 0.5) * INV_2_53
                u1 = (<double>(mix64(key + (base + 2) * GAMMA) >> 11) + 0.5) * INV_2_53
                r = sqrt(-2.0 * log(u0))
                theta = TWO_PI * u1
                g1 = r * cos(theta)
                g2 = r * sin(theta)
                w = g1 * g1 + g2 * g2
                num += w * lv[l]
                den += w
            out[i] = num / den
    return out_arr
