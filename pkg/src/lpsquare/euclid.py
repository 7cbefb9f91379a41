"""Band-limited functions on R^d: rough dyadic projections, Poisson extension, N(f).

A function is represented by samples on the periodized box ``[-L, L)^d`` with
``R`` points per axis. Its discrete spectrum lives on ``xi = m / (2L)``, so every
operator here is a Fourier multiplier applied with the FFT. Spatial decay at the
box boundary controls how well the periodic model stands in for the line.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import fft as sp_fft
from scipy.ndimage import maximum_filter1d

__all__ = [
    "BandlimitedFn",
    "ConeParams",
    "rough_project",
    "euclid_square_function",
    "poisson_extension",
    "nontangential_max",
    "box_lp_norm",
    "poisson_kernel",
]


@dataclass(frozen=True)
class BandlimitedFn:
    halfwidth: float
    samples: np.ndarray
    spectral_support: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        s = np.array(self.samples)
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        if self.spectral_support is not None:
            nyq = self.nyquist
            for lo, hi in self.spectral_support:
                if not (-nyq < lo <= hi < nyq):
                    raise ValueError(
                        f"spectral support [{lo}, {hi}] does not fit below the Nyquist "
                        f"frequency {nyq}")

    @property
    def dim(self) -> int:
        return self.samples.ndim

    @property
    def resolution(self) -> tuple[int, ...]:
        return self.samples.shape

    @property
    def spacing(self) -> float:
        return 2.0 * self.halfwidth / self.samples.shape[0]

    @property
    def nyquist(self) -> float:
        return 1.0 / (2.0 * self.spacing)

    def grid(self, axis: int = 0) -> np.ndarray:
        r = self.samples.shape[axis]
        return -self.halfwidth + np.arange(r) * (2.0 * self.halfwidth / r)

    def frequencies(self, axis: int = 0) -> np.ndarray:
        r = self.samples.shape[axis]
        return sp_fft.fftfreq(r, 2.0 * self.halfwidth / r)

    def spectrum(self) -> np.ndarray:
        """Unnormalized DFT of the samples (index order of ``fftfreq``)."""
        return sp_fft.fftn(self.samples, workers=-1)

    def with_spectrum(self, coeffs: np.ndarray, support=None) -> "BandlimitedFn":
        return BandlimitedFn(self.halfwidth, sp_fft.ifftn(coeffs, workers=-1), support)

    def boundary_ratio(self, fraction: float = 0.01) -> float:
        """Max modulus within ``fraction * L`` of the box boundary, relative to the global max."""
        a = np.abs(self.samples)
        peak = a.max()
        if peak == 0:
            return 0.0
        mask = np.zeros(a.shape, dtype=bool)
        for axis in range(self.dim):
            x = self.grid(axis)
            edge = np.abs(x) >= (1.0 - fraction) * self.halfwidth
            shape = [1] * self.dim
            shape[axis] = -1
            mask |= edge.reshape(shape)
        return float(a[mask].max() / peak)

    @classmethod
    def from_spectrum(cls, fn_hat: Callable, halfwidth: float, resolution: int, dim: int = 1,
                      decay_tol: float | None = None) -> "BandlimitedFn":
        """Sample ``f(x) = int fn_hat(xi) e^{2 pi i xi.x} dxi`` on the box by a Riemann sum in xi.

        ``fn_hat`` receives one frequency array per axis (broadcastable mesh).
        With ``decay_tol`` set, samples near the boundary must fall below
        ``decay_tol`` relative to the peak.
        """
        h = 2.0 * halfwidth / resolution
        xi = sp_fft.fftfreq(resolution, h)
        meshes = np.meshgrid(*([xi] * dim), indexing="ij", sparse=True)
        vals = np.asarray(fn_hat(*meshes), dtype=np.complex128) * np.ones((resolution,) * dim)
        peak = np.abs(vals).max()
        edge = np.abs(xi) >= xi[resolution // 2 - 1]
        for axis in range(dim):
            idx = [slice(None)] * dim
            idx[axis] = edge
            if peak > 0 and np.abs(vals[tuple(idx)]).max() > 1e-10 * peak:
                raise ValueError("spectrum does not vanish at the Nyquist frequency "
                                 f"{1.0 / (2.0 * h)}; refine the grid")
        # the Nyquist bin is ambiguous in sign; it is always left empty
        for axis in range(dim):
            idx = [slice(None)] * dim
            idx[axis] = resolution // 2
            vals[tuple(idx)] = 0.0
        m = np.rint(xi * 2.0 * halfwidth).astype(np.int64)
        phase = np.where(m % 2 == 0, 1.0, -1.0)
        coeffs = vals / (2.0 * halfwidth) ** dim
        for axis in range(dim):
            shape = [1] * dim
            shape[axis] = -1
            coeffs = coeffs * phase.reshape(shape)
        nz = np.abs(vals) > 0
        support = None
        if nz.any():
            support = []
            for axis in range(dim):
                other = tuple(i for i in range(dim) if i != axis)
                hit = nz.any(axis=other) if other else nz
                support.append((float(xi[hit].min()), float(xi[hit].max())))
            support = tuple(support)
        samples = sp_fft.ifftn(coeffs, norm="forward", workers=-1)
        f = cls(halfwidth, samples, support)
        if decay_tol is not None and f.boundary_ratio() > decay_tol:
            raise ValueError(f"samples decay only to {f.boundary_ratio():.3e} of the peak at "
                             f"the boundary; enlarge the box")
        return f

    def to_json(self) -> dict:
        return {"dim": self.dim, "domain_halfwidth": self.halfwidth,
                "resolution": list(self.resolution),
                "samples": {"re": self.samples.real.ravel().tolist(),
                            "im": self.samples.imag.ravel().tolist()}}

    @classmethod
    def from_json(cls, doc) -> "BandlimitedFn":
        res = tuple(doc["resolution"])
        s = np.asarray(doc["samples"]["re"]) + 1j * np.asarray(doc["samples"]["im"])
        return cls(float(doc["domain_halfwidth"]), s.reshape(res))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json()) + "\n")


@dataclass(frozen=True)
class ConeParams:
    """Truncated cone ``{(x', t) : |x - x'| < t, t_min <= t <= t_max}``.

    Heights are ``t_min``, ``t_max`` and the lattice ``2^(i / t_count)`` in
    between, so widening ``[t_min, t_max]`` only adds heights. ``x_count`` refines
    the x' lattice by a power-of-two factor of at least ``x_count``.
    """

    t_min: float = 1e-3
    t_max: float = 10.0
    t_count: int = 16
    x_count: int = 1

    def __post_init__(self):
        if not 0 < self.t_min < self.t_max:
            raise ValueError("cone needs 0 < t_min < t_max")
        if self.t_count < 1 or self.x_count < 1:
            raise ValueError("t_count and x_count must be positive")

    def heights(self) -> np.ndarray:
        i0 = math.ceil(self.t_count * math.log2(self.t_min))
        i1 = math.floor(self.t_count * math.log2(self.t_max))
        inner = 2.0 ** (np.arange(i0, i1 + 1) / self.t_count)
        inner = inner[(inner > self.t_min) & (inner < self.t_max)]
        return np.concatenate([[self.t_min], inner, [self.t_max]])

    def refinement(self) -> int:
        return 1 << math.ceil(math.log2(self.x_count))


def _axis_mask(freqs: np.ndarray, k: int) -> np.ndarray:
    a = np.abs(freqs)
    return (a >= 2.0 ** k) & (a < 2.0 ** (k + 1))


def _check_axis(f: BandlimitedFn, axis: int) -> int:
    if not 1 <= axis <= f.dim:
        raise ValueError(f"axis must lie in [1, {f.dim}], got {axis}")
    return axis - 1


def rough_project(f: BandlimitedFn, k: int, axis: int = 1) -> BandlimitedFn:
    """Multiply the spectrum along ``x_axis`` (1-based) by the indicator of ``+-[2^k, 2^(k+1))``."""
    j = _check_axis(f, axis)
    mask = _axis_mask(f.frequencies(j), k)
    shape = [1] * f.dim
    shape[j] = -1
    return f.with_spectrum(f.spectrum() * mask.reshape(shape))


def _occupied_levels(freqs: np.ndarray) -> list[int]:
    a = np.abs(freqs[freqs != 0])
    if a.size == 0:
        return []
    return list(range(math.floor(math.log2(a.min())), math.floor(math.log2(a.max())) + 1))


def euclid_square_function(f: BandlimitedFn, rel_tol: float = 1e-28) -> BandlimitedFn:
    """Pointwise l^2 sum of ``P_{k_1} x ... x P_{k_d} f`` over dyadic tuples.

    Tuples whose spectral energy is at most ``rel_tol`` times the total are skipped.
    """
    c = f.spectrum()
    energy = np.abs(c) ** 2
    total = energy.sum()
    acc = np.zeros(f.resolution)
    freqs = [f.frequencies(j) for j in range(f.dim)]
    levels = [_occupied_levels(fr) for fr in freqs]
    for ks in itertools.product(*levels):
        mask = np.ones(f.resolution, dtype=bool)
        for j, k in enumerate(ks):
            shape = [1] * f.dim
            shape[j] = -1
            mask = mask & _axis_mask(freqs[j], k).reshape(shape)
        if total == 0 or energy[mask].sum() <= rel_tol * total:
            continue
        piece = sp_fft.ifftn(np.where(mask, c, 0), workers=-1)
        acc += piece.real ** 2 + piece.imag ** 2
    return BandlimitedFn(f.halfwidth, np.sqrt(acc))


def poisson_extension(f: BandlimitedFn, t: float) -> BandlimitedFn:
    """Convolution with the unit-mass Poisson kernel: spectral factor ``exp(-2 pi t |xi|)``."""
    if not t > 0:
        raise ValueError("t must be positive")
    if f.dim != 1:
        raise ValueError("poisson_extension is one-dimensional")
    damp = np.exp(-2.0 * np.pi * t * np.abs(f.frequencies()))
    return f.with_spectrum(f.spectrum() * damp, f.spectral_support)


def nontangential_max(f: BandlimitedFn, cone: ConeParams | None = None) -> BandlimitedFn:
    """``N(f)(x) = max |P_t * f(x')|`` over the discretized cone above each grid point."""
    if f.dim != 1:
        raise ValueError("nontangential_max is one-dimensional")
    cone = cone or ConeParams()
    q = cone.refinement()
    r = f.resolution[0]
    c = f.spectrum()
    xi = f.frequencies()
    fine_step = f.spacing / q
    # zero-pad the spectrum: band-limited interpolation onto the refined x' lattice
    padded = np.zeros(q * r, dtype=np.complex128)
    half = r // 2
    padded[:half] = c[:half]
    padded[-(r - half):] = c[half:]
    xi_fine = np.concatenate([xi[:half], np.zeros(q * r - r), xi[half:]])
    best = np.zeros(q * r)
    for t in cone.heights():
        u = np.abs(sp_fft.ifft(padded * np.exp(-2.0 * np.pi * t * np.abs(xi_fine)))) * q
        reach = max(0, math.ceil(t / fine_step) - 1)
        if reach:
            u = maximum_filter1d(u, size=min(2 * reach + 1, q * r), mode="wrap")
        np.maximum(best, u, out=best)
    return BandlimitedFn(f.halfwidth, best[::q])


def box_lp_norm(f: BandlimitedFn, p: float) -> float:
    """``(int_box |f|^p)^(1/p)`` by the rectangle rule."""
    vol = f.spacing ** f.dim
    a = np.abs(f.samples)
    if math.isinf(p):
        return float(a.max())
    return float((vol * np.sum(a ** p)) ** (1.0 / p))


def poisson_kernel(halfwidth: float, resolution: int, t: float = 1.0) -> BandlimitedFn:
    """Unit-mass Poisson kernel ``t / (pi (x^2 + t^2))`` built from its spectrum."""
    return BandlimitedFn.from_spectrum(lambda xi: np.exp(-2.0 * np.pi * t * np.abs(xi)),
                                       halfwidth, resolution)
