"""Seeded random inputs: polynomials, zero-free analytic polynomials, band-limited bumps."""

from __future__ import annotations

import numpy as np

from .euclid import BandlimitedFn
from .spectral import TrigPoly

__all__ = ["random_poly", "random_analytic", "random_sparse_analytic", "zero_free_analytic",
           "smooth_bump", "random_bandlimited"]


def _complex_normal(rng: np.random.Generator, size) -> np.ndarray:
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def random_poly(rng: np.random.Generator, lo: int, hi: int, dim: int = 1) -> TrigPoly:
    """Dense Gaussian coefficients on the box ``[lo, hi]^dim``."""
    w = hi - lo + 1
    return TrigPoly.from_dense(_complex_normal(rng, (w,) * dim), offset=lo)


def random_analytic(rng: np.random.Generator, width: int, dim: int = 1) -> TrigPoly:
    return random_poly(rng, 0, width - 1, dim)


def random_sparse_analytic(rng: np.random.Generator, width: int, dim: int = 1,
                           terms: int = 16) -> TrigPoly:
    """``terms`` Gaussian coefficients at random points of ``[0, width)^dim``."""
    freqs = rng.integers(0, width, size=(terms, dim))
    return TrigPoly(freqs, _complex_normal(rng, terms), dim=dim)


def zero_free_analytic(rng: np.random.Generator, factors: int = 3, radius: float = 0.8
                       ) -> TrigPoly:
    """``c * prod_j (1 - a_j e_1)`` with ``|a_j| <= radius < 1``: no zeros on the circle."""
    c = np.array([complex(*rng.standard_normal(2))])
    for _ in range(factors):
        a = radius * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        c = np.convolve(c, [1.0, -a])
    return TrigPoly(np.arange(c.shape[0]), c)


def smooth_bump(xi, a: float, b: float):
    """C-infinity bump supported on ``(a, b)``, vanishing identically outside."""
    xi = np.asarray(xi, dtype=np.float64)
    s = (xi - a) / (b - a)
    inside = (s > 0) & (s < 1)
    out = np.zeros(np.broadcast(xi).shape)
    ss = s[inside]
    out[inside] = np.exp(-1.0 / (ss * (1.0 - ss)))
    return out


def random_bandlimited(rng: np.random.Generator, halfwidth: float = 64.0, resolution: int = 4096,
                       analytic: bool = True, dim: int = 1, band: float = 8.0) -> BandlimitedFn:
    """Two modulated smooth spectral bumps inside ``[0.1, band]`` (mirrored too if not analytic)."""
    bumps = []
    for _ in range(2):
        # widths stay >= 0.5 so the samples decay well inside the box
        width = rng.uniform(0.5, max(0.5, 0.25 * band))
        a = rng.uniform(0.1, max(0.1, band - width))
        b = a + width
        c = complex(*rng.standard_normal(2))
        shift = rng.uniform(-5, 5)
        bumps.append((a, b, c, shift))

    def spectrum(*xis):
        total = 1.0
        for xi in xis:
            axis_total = 0.0
            for a, b, c, shift in bumps:
                phase = np.exp(-2j * np.pi * xi * shift)
                axis_total = axis_total + c * smooth_bump(xi, a, b) * phase
                if not analytic:
                    axis_total = axis_total + np.conj(c) * smooth_bump(-xi, a, b) * phase
            total = total * axis_total
        return total

    return BandlimitedFn.from_spectrum(spectrum, halfwidth, resolution, dim=dim, decay_tol=1e-6)
