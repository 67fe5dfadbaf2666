"""Monte Carlo check of the density: sample uniform pure states, histogram <H>.

Amplitudes are complex Gaussians (two real normals per level), so the
normalised squared moduli are flat on the simplex. Random numbers come from
a counter-based stream: draw ``c`` of sample ``i`` at level ``l`` is a pure
function of ``(seed, i, l, c)``, so results do not depend on chunking.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import stats

from . import _backend
from .spectral import Spectrum, piecewise_mu

CHUNK = 1 << 18


class SamplingError(ValueError):
    pass


def _float_levels(spectrum: Spectrum) -> np.ndarray:
    return np.array([float(e) for e in spectrum.levels], dtype=np.float64)


def sample_energy(spectrum: Spectrum, seed: int, index: int = 0) -> float:
    """Draw number ``index`` of the stream ``seed``: one value of <H>."""
    return float(_backend.energy_samples(_float_levels(spectrum), index, 1, seed)[0])


def sample_energies(spectrum: Spectrum, count: int, seed: int, start: int = 0) -> np.ndarray:
    levels = _float_levels(spectrum)
    out = np.empty(count, dtype=np.float64)
    for lo in range(0, count, CHUNK):
        hi = min(count, lo + CHUNK)
        out[lo:hi] = _backend.energy_samples(levels, start + lo, hi - lo, seed)
    return out


@dataclass
class EmpiricalDensity:
    n: int
    bin_edges: np.ndarray
    counts: np.ndarray
    sample_count: int
    seed: int

    @property
    def bin_width(self) -> float:
        return float(self.bin_edges[1] - self.bin_edges[0])

    @property
    def normalized_heights(self) -> np.ndarray:
        return self.counts / (self.sample_count * self.bin_width)

    @property
    def bins(self) -> int:
        return len(self.counts)

    def mass(self, lo: float, hi: float) -> float:
        """Fraction of samples in the bins lying inside ``[lo, hi]``."""
        eps = 1e-12
        sel = (self.bin_edges[:-1] >= lo - eps) & (self.bin_edges[1:] <= hi + eps)
        return float(self.counts[sel].sum()) / self.sample_count


def build_histogram(n: int, N: int, bins: int, seed: int) -> EmpiricalDensity:
    """Histogram of N draws of <H> for the linear spectrum on [0, 1]."""
    if n < 1 or bins < 1:
        raise SamplingError("n and bins must be positive")
    if N < 100 * bins:
        raise SamplingError(f"N={N} is too small for {bins} bins (need >= {100 * bins})")
    spectrum = Spectrum.linear(n)
    edges = np.linspace(0.0, 1.0, bins + 1)
    counts = np.zeros(bins, dtype=np.int64)
    levels = _float_levels(spectrum)
    for lo in range(0, N, CHUNK):
        hi = min(N, lo + CHUNK)
        e = _backend.energy_samples(levels, lo, hi - lo, seed)
        idx = np.minimum((e * bins).astype(np.int64), bins - 1)
        counts += np.bincount(idx, minlength=bins)
    return EmpiricalDensity(n, edges, counts, N, seed)


def exact_bin_masses(n: int, bins: int) -> list[Fraction]:
    """Exact probability of each of ``bins`` equal bins on [0, 1]."""
    poly = piecewise_mu(n)
    return [poly.integrate(Fraction(i, bins), Fraction(i + 1, bins)) for i in range(bins)]


@dataclass
class DensityReport:
    n: int
    sup_deviation: float
    chi_square: float
    dof: int
    p_value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.sup_deviation <= self.tolerance


def compare_density(emp: EmpiricalDensity, n: int, tolerance: float = 0.05) -> DensityReport:
    """Compare a histogram to exact bin averages of the density."""
    if emp.n != n:
        raise SamplingError(f"histogram was built for n={emp.n}, not n={n}")
    masses = exact_bin_masses(n, emp.bins)
    probs = np.array([float(m) for m in masses])
    exact_heights = probs / emp.bin_width
    sup = float(np.max(np.abs(emp.normalized_heights - exact_heights)))
    expected = emp.sample_count * probs
    nz = expected > 0
    chi2 = float(np.sum((emp.counts[nz] - expected[nz]) ** 2 / expected[nz]))
    dof = emp.bins - 1
    return DensityReport(n, sup, chi2, dof, float(stats.chi2.sf(chi2, dof)), tolerance)
