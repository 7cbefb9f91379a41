"""Orlicz ``L log^r L`` norms, the weak-L^1 quasinorm and Khintchine ratios.

All integrals are grid averages, i.e. integrals against normalized Haar measure
on the torus (or against the product probability measure for sign sequences).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .spectral import GridFunction

__all__ = ["OrliczParams", "orlicz_norm", "orlicz_functional", "weak_quasinorm",
           "khintchine_ratio", "sign_matrix"]


@dataclass(frozen=True)
class OrliczParams:
    r: float = 1.0
    tol: float = 1e-8
    lambda_bracket: tuple[float, float] = (0.5, 2.0)

    def __post_init__(self):
        if self.r < 0:
            raise ValueError(f"Orlicz exponent must be nonnegative, got {self.r}")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        lo, hi = self.lambda_bracket
        if not 0 < lo < hi:
            raise ValueError(f"lambda_bracket must satisfy 0 < lo < hi, got {self.lambda_bracket}")


def _moduli(g) -> np.ndarray:
    if isinstance(g, GridFunction):
        return g.abs().ravel()
    return np.abs(np.asarray(g)).ravel()


def orlicz_functional(a: np.ndarray, lam: float, r: float) -> float:
    """Grid average of ``(a/lam) log^r(1 + a/lam)``."""
    t = a / lam
    if r == 0:
        return float(np.mean(t))
    return float(np.mean(t * np.log1p(t) ** r))


def orlicz_norm(g, params: OrliczParams | None = None) -> float:
    """Luxemburg-type norm ``inf{lam > 0 : avg (|g|/lam) log^r(1 + |g|/lam) <= 1}``.

    The returned ``lam`` satisfies the defining inequality, while
    ``lam * (1 - 10 tol)`` violates it. The bracket is scaled by ``max|g|`` and
    widened geometrically until it straddles the solution.
    """
    params = params or OrliczParams()
    a = _moduli(g)
    scale = float(a.max()) if a.size else 0.0
    if scale == 0.0:
        return 0.0
    a = a / scale
    r = params.r
    phi = lambda lam: orlicz_functional(a, lam, r)

    lo, hi = params.lambda_bracket
    while phi(hi) > 1.0:
        hi *= 2.0
        if not math.isfinite(hi) or hi > 1e300:
            raise OverflowError("could not bracket the Orlicz norm from above")
    while phi(lo) <= 1.0:
        lo *= 0.5
        if lo < 1e-300:
            raise OverflowError("could not bracket the Orlicz norm from below")
    # invariant: phi(lo) > 1 >= phi(hi)
    while hi - lo > params.tol * hi:
        mid = math.sqrt(lo * hi) if hi / lo > 4 else 0.5 * (lo + hi)
        if phi(mid) > 1.0:
            lo = mid
        else:
            hi = mid
    return hi * scale


def weak_quasinorm(g) -> float:
    """``sup_t t * |{|g| > t}|`` for the uniform probability measure on the samples.

    The supremum is the largest ``v * #{|g| >= v} / n`` over the sample values
    ``v`` (left limits at the jumps of the distribution function).
    """
    a = np.sort(_moduli(g))
    n = a.size
    if n == 0:
        return 0.0
    at_least = n - np.searchsorted(a, a, side="left")
    return float(np.max(a * at_least) / n)


def sign_matrix(k: int) -> np.ndarray:
    """All ``2^k`` sign vectors in ``{-1, +1}^k`` as rows."""
    if k == 0:
        return np.ones((1, 0))
    return np.array(list(itertools.product((1.0, -1.0), repeat=k)))


def khintchine_ratio(a, p: float, max_exact: int = 12, samples: int = 200_000,
                     rng: np.random.Generator | None = None) -> float:
    """``||sum a_k r_{k_1} x ... x r_{k_d}||_{L^p(Omega^d)} / ||a||_2``.

    ``a`` is a dense d-dimensional coefficient array indexed by ``N_0^d``. Each
    axis carries its own independent Rademacher sequence; only indices carrying a
    nonzero coefficient are randomised. With at most ``max_exact`` occupied
    indices per axis the expectation is an exact enumeration of sign vectors,
    otherwise ``samples`` Monte Carlo draws are used.
    """
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim == 0:
        a = a.reshape(1)
    peak = float(np.max(np.abs(a)))
    if peak == 0:
        raise ValueError("coefficient array is identically zero")
    # the ratio is scale invariant; normalising avoids underflow in |a|^2.
    # Dividing the float view keeps subnormal peaks from overflowing complex division.
    a = (np.ascontiguousarray(a).view(np.float64) / peak).view(np.complex128)
    l2 = float(np.sqrt(np.sum(np.abs(a) ** 2)))

    # drop index slices that carry no coefficient
    for axis in range(a.ndim):
        other = tuple(i for i in range(a.ndim) if i != axis)
        occupied = np.abs(a).sum(axis=other) > 0 if other else np.abs(a) > 0
        a = np.compress(occupied, a, axis=axis)

    exact = max(a.shape) <= max_exact
    if exact:
        values = a
        for axis in range(a.ndim):
            eps = sign_matrix(a.shape[axis])
            values = np.moveaxis(np.tensordot(values, eps, axes=([axis], [1])), -1, axis)
        moment = np.mean(np.abs(values) ** p)
    else:
        rng = rng or np.random.default_rng(0)
        moment = 0.0
        batch = 4096
        done = 0
        while done < samples:
            m = min(batch, samples - done)
            vals = np.broadcast_to(a, (m,) + a.shape)
            for axis in range(a.ndim):
                eps = rng.choice([-1.0, 1.0], size=(m, a.shape[axis]))
                shape = [m] + [1] * a.ndim
                shape[axis + 1] = a.shape[axis]
                vals = vals * eps.reshape(shape)
            s = vals.reshape(m, -1).sum(axis=1)
            moment += float(np.sum(np.abs(s) ** p))
            done += m
        moment /= samples
    return float(moment ** (1.0 / p) / l2)
