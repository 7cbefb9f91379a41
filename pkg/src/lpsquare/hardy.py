"""Conjugate functions, analytic projection, H^1 norms and outer functions on the circle.

Also provides :func:`kx_split`, an explicit decomposition ``f = h + g`` of an
analytic polynomial into a part bounded by ``min(|f|, lam^2/|f|)`` and a
remainder controlled on the superlevel set ``{|f| > lam}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import fft as sp_fft

from .spectral import GridFunction, TrigPoly, is_analytic, lp_norm, synthesize

__all__ = [
    "conjugate_function",
    "analytic_projection",
    "h1_norm",
    "conjugate_grid",
    "outer_function",
    "negative_energy_fraction",
    "KxSplit",
    "kx_split",
]


def _require_1d(f) -> None:
    if f.dim != 1:
        raise ValueError(f"expected a one-dimensional function, got dimension {f.dim}")


def conjugate_function(f: TrigPoly) -> TrigPoly:
    """Periodic Hilbert transform: multiplier ``-i sgn(n)``."""
    _require_1d(f)
    return f.map_amps(-1j * np.sign(f.freqs[:, 0]))


def analytic_projection(f: TrigPoly) -> TrigPoly:
    """Riesz projection onto the nonnegative frequencies."""
    _require_1d(f)
    return f.restrict(f.freqs[:, 0] >= 0)


def h1_norm(f: TrigPoly, oversample: int = 8) -> float:
    """``||f||_1 + ||H f||_1`` with both L^1 norms on an oversampled grid."""
    _require_1d(f)
    return lp_norm(f, 1, oversample) + lp_norm(conjugate_function(f), 1, oversample)


def conjugate_grid(u: np.ndarray) -> np.ndarray:
    """Spectral conjugate of real samples on a uniform periodic grid (Nyquist mode dropped)."""
    u = np.asarray(u, dtype=np.float64)
    r = u.shape[0]
    c = sp_fft.fft(u)
    n = sp_fft.fftfreq(r, 1.0 / r)
    mult = -1j * np.sign(n)
    if r % 2 == 0:
        mult[r // 2] = 0.0
    return sp_fft.ifft(c * mult).real


def outer_function(w: GridFunction) -> GridFunction:
    """``exp(log w + i conj(log w))`` on the grid of ``w``.

    The modulus of the result equals ``w`` pointwise; analyticity holds up to the
    aliasing of the grid.
    """
    _require_1d(w)
    vals = w.samples
    if np.any(np.abs(vals.imag) > 0) or np.any(~(vals.real > 0)):
        raise ValueError("outer_function needs strictly positive real samples")
    u = np.log(vals.real)
    return GridFunction(np.exp(u + 1j * conjugate_grid(u)))


def negative_energy_fraction(g: GridFunction) -> float:
    """Share of the discrete l^2 energy carried by negative frequencies."""
    c = sp_fft.fft(g.samples, norm="forward")
    n = sp_fft.fftfreq(c.shape[0], 1.0 / c.shape[0])
    energy = np.abs(c) ** 2
    total = energy.sum()
    return float(energy[n < 0].sum() / total) if total else 0.0


@dataclass(frozen=True)
class KxSplit:
    h: GridFunction
    g: GridFunction
    lam: float
    bullet1_C: float
    bullet2_C: float
    residual: float

    @property
    def witness_constant(self) -> float:
        """Smallest C for which both inequalities hold on this instance."""
        return max(self.bullet1_C, self.bullet2_C)

    @property
    def h_sup(self) -> float:
        return float(self.h.abs().max())

    def report(self) -> dict:
        return {"lambda": self.lam, "h_sup": self.h_sup, "bullet1_C": self.bullet1_C,
                "bullet2_C": self.bullet2_C, "residual": self.residual}


def kx_split(f: TrigPoly, lam: float, resolution: int = 4096) -> KxSplit:
    """Split an analytic polynomial as ``f = h + g`` at height ``lam``.

    ``h = f * O`` with ``O`` the outer function of modulus ``min(1, lam^2/|f|^2)``,
    so ``|h| = min(|f|, lam^2/|f|)``; ``g = f - h``. The reported constants are
    ``max |h| / min(|f|, lam^2/|f|)`` and ``||g||_1 / int_{|f|>lam} |f|``.
    """
    _require_1d(f)
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if not is_analytic(f):
        raise ValueError("kx_split needs an analytic polynomial (nonnegative frequencies)")
    F = synthesize(f, resolution).samples
    mod = np.abs(F)
    if mod.min() <= 1e-10 * mod.max():
        raise ValueError("f (nearly) vanishes on the grid; perturb it, e.g. add a small "
                         "constant, so that log|f| is integrable")

    weight = np.minimum(1.0, (lam / mod) ** 2)
    O = outer_function(GridFunction(weight)).samples
    h = F * O
    g = F - h

    envelope = np.minimum(mod, lam ** 2 / mod)
    bullet1 = float(np.max(np.abs(h) / envelope))
    g1 = float(np.mean(np.abs(g)))
    tail = float(np.mean(np.where(mod > lam, mod, 0.0)))
    if tail > 0:
        bullet2 = g1 / tail
    else:
        bullet2 = 0.0 if g1 == 0 else float("inf")
    residual = float(np.max(np.abs(h + g - F)))
    return KxSplit(GridFunction(h), GridFunction(g), float(lam), bullet1, bullet2, residual)
