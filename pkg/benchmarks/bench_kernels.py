"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import timeit
from math import lcm

import numpy as np

from qmdos import _kernels_py

try:
    from qmdos import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def cases(mod):
    rows150 = mod.piece_table(150)
    L = lcm(*range(1, 151))
    levels = np.linspace(0.0, 1.0, 28)
    return {
        "omega terms (alpha=5/2, J=60)": lambda: mod.alt_binom_terms(150, 60, 1, 60, 149),
        "identity terms (n=120)": lambda: mod.alt_binom_terms(120, 120, 1, 0, 120),
        "piece_table (n=150)": lambda: mod.piece_table(150),
        "piece_integral_sum (n=150)": lambda: mod.piece_integral_sum(rows150, L),
        "energy_samples (2e5 draws, n=27)": lambda: mod.energy_samples(levels, 0, 200_000, 1),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    py = cases(_kernels_py)
    c = cases(_kernels_c) if _kernels_c else {}
    print(f"{'kernel':36s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s}")
    for name, fn in py.items():
        tp = min(timeit.repeat(fn, number=1, repeat=args.repeat))
        if name in c:
            tc = min(timeit.repeat(c[name], number=1, repeat=args.repeat))
            print(f"{name:36s} {tp:11.4f} {tc:11.4f} {tp / tc:7.1f}x")
        else:
            print(f"{name:36s} {tp:11.4f} {'n/a':>11s}")


if __name__ == "__main__":
    main()
