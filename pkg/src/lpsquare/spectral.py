"""Trigonometric polynomials on the d-torus.

Polynomials are stored sparsely as a list of integer frequencies and complex
amplitudes. Dense arrays only appear at the FFT boundary, in :func:`synthesize`
and :func:`analyze`. The torus is identified with ``[0, 1)^d`` and the basis
functions are ``e_n(x) = exp(2 pi i n.x)``.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import fft as sp_fft

__all__ = [
    "AliasingError",
    "TrigPoly",
    "GridFunction",
    "synthesize",
    "analyze",
    "lp_norm",
    "tensor_product",
    "modulate",
    "is_analytic",
    "norm_grid_size",
    "check_resolution",
    "load_coefficients",
    "save_coefficients",
    "dump_grid_csv",
]


class AliasingError(ValueError):
    """Raised when a grid cannot hold a polynomial's frequencies without wrap-around collisions."""


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class TrigPoly:
    """Finitely supported Fourier series on the d-torus.

    Parameters
    ----------
    freqs : array_like of int, shape (m, d)
        Lattice points carrying a coefficient. Repeated points are summed.
    amps : array_like of complex, shape (m,)
        Coefficients at ``freqs``. Exact zeros are dropped.
    dim : int, optional
        Required when ``freqs`` is empty.
    """

    __slots__ = ("_freqs", "_amps", "_dim")

    def __init__(self, freqs, amps, dim: int | None = None):
        amps = np.asarray(amps, dtype=np.complex128).ravel()
        freqs = np.asarray(freqs, dtype=np.int64)
        if freqs.size == 0:
            if dim is None:
                raise ValueError("dim is required for an empty polynomial")
            freqs = freqs.reshape(0, dim)
        elif freqs.ndim == 1:
            freqs = freqs.reshape(-1, 1 if dim is None else dim)
        if dim is None:
            dim = freqs.shape[1]
        if dim < 1 or freqs.shape[1] != dim:
            raise ValueError(f"frequency array has shape {freqs.shape}, expected (m, {dim})")
        if freqs.shape[0] != amps.shape[0]:
            raise ValueError("freqs and amps have different lengths")

        if freqs.shape[0]:
            uniq, inverse = np.unique(freqs, axis=0, return_inverse=True)
            inverse = inverse.ravel()
            if uniq.shape[0] != freqs.shape[0]:
                summed = np.zeros(uniq.shape[0], dtype=np.complex128)
                np.add.at(summed, inverse, amps)
                freqs, amps = uniq, summed
            else:
                order = np.argsort(inverse)
                freqs, amps = uniq, amps[order]
            keep = amps != 0
            freqs, amps = freqs[keep], amps[keep]

        self._freqs = _freeze(np.ascontiguousarray(freqs))
        self._amps = _freeze(np.ascontiguousarray(amps))
        self._dim = int(dim)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, dim: int = 1) -> "TrigPoly":
        return cls(np.zeros((0, dim), dtype=np.int64), [], dim=dim)

    @classmethod
    def constant(cls, c: complex, dim: int = 1) -> "TrigPoly":
        return cls(np.zeros((1, dim), dtype=np.int64), [c], dim=dim)

    @classmethod
    def exponential(cls, n: int | Sequence[int]) -> "TrigPoly":
        """The single character ``e_n``."""
        n = np.atleast_1d(np.asarray(n, dtype=np.int64))
        return cls(n.reshape(1, -1), [1.0])

    @classmethod
    def from_dict(cls, coeffs: Mapping, dim: int | None = None) -> "TrigPoly":
        """Build from ``{n: c}`` with ``n`` an int (d = 1) or a tuple of ints."""
        keys = [tuple(np.atleast_1d(k).tolist()) for k in coeffs]
        if dim is None:
            if not keys:
                raise ValueError("dim is required for an empty mapping")
            dim = len(keys[0])
        return cls(np.array(keys, dtype=np.int64).reshape(-1, dim), list(coeffs.values()), dim=dim)

    @classmethod
    def from_dense(cls, array, offset: Sequence[int] | int = 0) -> "TrigPoly":
        """Coefficients from a dense d-dimensional array whose index 0 sits at frequency ``offset``."""
        array = np.asarray(array, dtype=np.complex128)
        offset = np.broadcast_to(np.asarray(offset, dtype=np.int64), (array.ndim,))
        idx = np.argwhere(array != 0)
        return cls(idx + offset, array[tuple(idx.T)], dim=array.ndim)

    # -- accessors --------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def freqs(self) -> np.ndarray:
        return self._freqs

    @property
    def amps(self) -> np.ndarray:
        return self._amps

    def __len__(self) -> int:
        return self._amps.shape[0]

    @property
    def support_box(self) -> list[tuple[int, int]]:
        """Per-axis ``(min, max)`` frequency; empty list for the zero polynomial."""
        if len(self) == 0:
            return []
        lo = self._freqs.min(axis=0)
        hi = self._freqs.max(axis=0)
        return [(int(a), int(b)) for a, b in zip(lo, hi)]

    @property
    def span(self) -> tuple[int, ...]:
        """Per-axis ``max - min`` of the support (0 for the zero polynomial)."""
        if len(self) == 0:
            return (0,) * self._dim
        return tuple(int(v) for v in np.ptp(self._freqs, axis=0))

    def coeff(self, n) -> complex:
        n = np.atleast_1d(np.asarray(n, dtype=np.int64))
        hit = np.all(self._freqs == n, axis=1)
        return complex(self._amps[hit][0]) if hit.any() else 0j

    def to_dict(self) -> dict:
        if self._dim == 1:
            return {int(n[0]): complex(a) for n, a in zip(self._freqs, self._amps)}
        return {tuple(int(v) for v in n): complex(a) for n, a in zip(self._freqs, self._amps)}

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self._amps) ** 2)))

    def max_abs_diff(self, other: "TrigPoly") -> float:
        """Sup norm of the coefficient difference, treating absent entries as zero."""
        diff = self - other
        return float(np.abs(diff.amps).max()) if len(diff) else 0.0

    def prune(self, tol: float) -> "TrigPoly":
        """Drop coefficients with modulus at most ``tol``."""
        keep = np.abs(self._amps) > tol
        return TrigPoly(self._freqs[keep], self._amps[keep], dim=self._dim)

    def map_amps(self, factor: np.ndarray) -> "TrigPoly":
        return TrigPoly(self._freqs, self._amps * factor, dim=self._dim)

    def restrict(self, mask: np.ndarray) -> "TrigPoly":
        return TrigPoly(self._freqs[mask], self._amps[mask], dim=self._dim)

    # -- arithmetic ---------------------------------------------------------------

    def _check_dim(self, other: "TrigPoly") -> None:
        if other.dim != self._dim:
            raise ValueError(f"dimension mismatch: {self._dim} vs {other.dim}")

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            return NotImplemented
        self._check_dim(other)
        return TrigPoly(np.vstack([self._freqs, other.freqs]),
                        np.concatenate([self._amps, other.amps]), dim=self._dim)

    def __neg__(self) -> "TrigPoly":
        return TrigPoly(self._freqs, -self._amps, dim=self._dim)

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c) -> "TrigPoly":
        if isinstance(c, TrigPoly):
            return NotImplemented
        return TrigPoly(self._freqs, self._amps * complex(c), dim=self._dim)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return (self._dim == other.dim and np.array_equal(self._freqs, other.freqs)
                and np.array_equal(self._amps, other.amps))

    __hash__ = None

    def __repr__(self) -> str:
        return f"TrigPoly(dim={self._dim}, terms={len(self)}, support_box={self.support_box})"


class GridFunction:
    """Samples of a function on the uniform grid ``j / resolution`` of the d-torus."""

    __slots__ = ("_samples",)

    def __init__(self, samples):
        samples = np.array(samples, dtype=np.complex128)
        if samples.ndim < 1:
            raise ValueError("samples must have at least one axis")
        for r in samples.shape:
            if r < 2 or r & (r - 1):
                raise ValueError(f"grid resolution {r} is not a power of two >= 2")
        self._samples = _freeze(samples)

    @property
    def samples(self) -> np.ndarray:
        return self._samples

    @property
    def dim(self) -> int:
        return self._samples.ndim

    @property
    def resolution(self) -> tuple[int, ...]:
        return self._samples.shape

    def abs(self) -> np.ndarray:
        return np.abs(self._samples)

    def points(self, axis: int = 0) -> np.ndarray:
        r = self._samples.shape[axis]
        return np.arange(r) / r

    def __repr__(self) -> str:
        return f"GridFunction(resolution={self.resolution})"


def check_resolution(f: TrigPoly, resolution) -> tuple[int, ...]:
    """Per-axis grid sizes, rejected if any axis would alias ``f``'s support."""
    res = tuple(int(r) for r in np.broadcast_to(np.asarray(resolution), (f.dim,)))
    for axis, (r, s) in enumerate(zip(res, f.span)):
        if r <= s:
            raise AliasingError(
                f"resolution {r} on axis {axis} does not exceed the support span {s}")
    return res


def synthesize(f: TrigPoly, resolution) -> GridFunction:
    """Evaluate ``sum_n f^(n) e_n`` on the grid via an inverse FFT.

    Frequencies are placed in slot ``n mod R`` per axis, so the samples are exact
    whenever no two support points share a slot, i.e. ``R > span`` on every axis.
    """
    res = check_resolution(f, resolution)
    dense = np.zeros(res, dtype=np.complex128)
    if len(f):
        slots = tuple((f.freqs % np.asarray(res)).T)
        dense[slots] = f.amps
    samples = sp_fft.ifftn(dense, norm="forward", workers=-1)
    return GridFunction(samples)


def analyze(g: GridFunction) -> TrigPoly:
    """Forward FFT of grid samples; slots above ``R/2`` become negative frequencies."""
    coeffs = sp_fft.fftn(g.samples, norm="forward", workers=-1)
    idx = np.argwhere(coeffs != 0)
    amps = coeffs[tuple(idx.T)]
    res = np.asarray(g.resolution)
    freqs = np.where(idx > res // 2, idx - res, idx)
    return TrigPoly(freqs, amps, dim=g.dim)


MIN_NORM_POINTS_LOG2 = 14


def norm_grid_size(f: TrigPoly, oversample: int) -> tuple[int, ...]:
    """Per-axis power-of-two grid of at least ``oversample * (span + 1)`` points.

    Each axis also gets at least ``2^ceil(14/d)`` points: ``|f|^p`` has kinks at
    zeros of ``f`` when p is small, and the Riemann sum only converges like R^-2 there.
    """
    floor = 1 << math.ceil(MIN_NORM_POINTS_LOG2 / f.dim)
    return tuple(max(floor, 1 << math.ceil(math.log2(oversample * (s + 1)))) for s in f.span)


def lp_norm(f, p: float, oversample: int = 8) -> float:
    """L^p norm on the torus with normalized Haar measure.

    For a :class:`TrigPoly` and ``p == 2`` the Plancherel value is returned;
    otherwise ``|f|^p`` is averaged on an oversampled power-of-two grid. A
    :class:`GridFunction` is averaged on its own grid.
    """
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if isinstance(f, GridFunction):
        return _grid_mean_norm(f.abs(), p)
    if oversample < 2:
        raise ValueError("oversample must be >= 2")
    if len(f) == 0:
        return 0.0
    if p == 2:
        return f.l2_norm()
    g = synthesize(f, norm_grid_size(f, oversample))
    return _grid_mean_norm(g.abs(), p)


def _grid_mean_norm(a: np.ndarray, p: float) -> float:
    if math.isinf(p):
        return float(a.max())
    return float(np.mean(a ** p) ** (1.0 / p))


def tensor_product(fs: Sequence[TrigPoly]) -> TrigPoly:
    """``g(x_1, ..., x_d) = f_1(x_1) ... f_d(x_d)`` for one-dimensional factors."""
    if not fs:
        raise ValueError("tensor_product needs at least one factor")
    for f in fs:
        if f.dim != 1:
            raise ValueError("tensor_product factors must be one-dimensional")
    d = len(fs)
    if any(len(f) == 0 for f in fs):
        return TrigPoly.zero(d)
    grids = np.meshgrid(*[f.freqs[:, 0] for f in fs], indexing="ij")
    freqs = np.stack([g.ravel() for g in grids], axis=1)
    amps = fs[0].amps
    for f in fs[1:]:
        amps = np.multiply.outer(amps, f.amps)
    return TrigPoly(freqs, amps.ravel(), dim=d)


def modulate(f: TrigPoly, shift) -> TrigPoly:
    """Multiply by ``e_shift``: every coefficient moves from ``n`` to ``n + shift``."""
    shift = np.broadcast_to(np.asarray(shift, dtype=np.int64), (f.dim,))
    return TrigPoly(f.freqs + shift, f.amps, dim=f.dim)


def is_analytic(f: TrigPoly) -> bool:
    return bool(np.all(f.freqs >= 0))


# -- file formats -------------------------------------------------------------------

def coefficients_to_json(f: TrigPoly, **extra) -> dict:
    doc = {"dim": f.dim,
           "entries": [{"n": [int(v) for v in n], "re": float(a.real), "im": float(a.imag)}
                       for n, a in zip(f.freqs, f.amps)]}
    doc.update(extra)
    return doc


def coefficients_from_json(doc: Mapping) -> TrigPoly:
    dim = int(doc["dim"])
    entries = doc.get("entries", [])
    freqs = np.array([e["n"] for e in entries], dtype=np.int64).reshape(-1, dim)
    amps = [complex(e.get("re", 0.0), e.get("im", 0.0)) for e in entries]
    return TrigPoly(freqs, amps, dim=dim)


def save_coefficients(f: TrigPoly, path, **extra) -> None:
    Path(path).write_text(json.dumps(coefficients_to_json(f, **extra), indent=2) + "\n")


def load_coefficients(path) -> TrigPoly:
    return coefficients_from_json(json.loads(Path(path).read_text()))


def dump_grid_csv(g: GridFunction | np.ndarray, path) -> None:
    """One sample per row (``re,im``) in C index order."""
    samples = g.samples if isinstance(g, GridFunction) else np.asarray(g)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["re", "im"])
        for z in np.asarray(samples, dtype=np.complex128).ravel():
            writer.writerow([repr(float(z.real)), repr(float(z.imag))])


def iter_terms(f: TrigPoly) -> Iterable[tuple[tuple[int, ...], complex]]:
    for n, a in zip(f.freqs, f.amps):
        yield tuple(int(v) for v in n), complex(a)
