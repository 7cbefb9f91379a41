"""Summability kernels and the extremal families used in the sharpness experiments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import TrigPoly, modulate, tensor_product

__all__ = [
    "fejer",
    "vallee_poussin",
    "pichorides_fn",
    "dirichlet_block",
    "diag_embed",
    "FamilySpec",
    "FAMILIES",
    "family_poly",
    "family_span",
]


def fejer(n: int) -> TrigPoly:
    """Fejer kernel ``K_n`` with coefficients ``1 - |j|/(n+1)`` for ``|j| <= n``."""
    if n < 0:
        raise ValueError("Fejer order must be nonnegative")
    j = np.arange(-n, n + 1)
    return TrigPoly(j, 1.0 - np.abs(j) / (n + 1))


def vallee_poussin(N: int) -> TrigPoly:
    """de la Vallee Poussin kernel of order ``M = 2^N``.

    Trapezoid coefficients: 1 for ``|j| <= M``, ``2 - |j|/M`` for ``M < |j| <= 2M``.
    This equals ``2 K_{2M-1} - K_{M-1}``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    M = 1 << N
    j = np.arange(-2 * M, 2 * M + 1)
    c = np.where(np.abs(j) <= M, 1.0, 2.0 - np.abs(j) / M)
    return TrigPoly(j, c)


def pichorides_fn(N: int, d: int = 1) -> TrigPoly:
    """``f_N = e_{2^(N+1)} V_{2^N}``; for ``d > 1`` the d-fold tensor ``g_N``."""
    if d < 1:
        raise ValueError("d must be >= 1")
    f = modulate(vallee_poussin(N), 1 << (N + 1))
    return f if d == 1 else tensor_product([f] * d)


def dirichlet_block(N: int) -> TrigPoly:
    """Unit coefficients on ``[2^N, 2^(N+1) - 1]``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    n = np.arange(1 << N, 1 << (N + 1))
    return TrigPoly(n, np.ones(n.shape[0]))


def diag_embed(F: TrigPoly, d: int) -> TrigPoly:
    """``f(x_1, ..., x_d) = F(x_1 + ... + x_d)``: coefficients on the diagonal."""
    if F.dim != 1:
        raise ValueError("diag_embed needs a one-dimensional polynomial")
    return TrigPoly(np.repeat(F.freqs, d, axis=1), F.amps, dim=d)


FAMILIES = ("fejer", "vallee_poussin", "pichorides", "zygmund_tensor", "diagonal")


@dataclass(frozen=True)
class FamilySpec:
    name: str
    N: int
    d: int = 1

    def __post_init__(self):
        if self.name not in FAMILIES:
            raise ValueError(f"unknown family {self.name!r}; choose from {FAMILIES}")
        if self.N < 1 or self.d < 1:
            raise ValueError("family parameters need N >= 1 and d >= 1")


def family_poly(spec: FamilySpec) -> TrigPoly:
    if spec.name == "fejer":
        f = fejer(spec.N)
    elif spec.name == "vallee_poussin":
        f = vallee_poussin(spec.N)
    elif spec.name in ("pichorides", "zygmund_tensor"):
        return pichorides_fn(spec.N, spec.d)
    else:
        return diag_embed(pichorides_fn(spec.N), spec.d)
    return f if spec.d == 1 else tensor_product([f] * spec.d)


def family_span(name: str, N: int) -> int:
    """Per-axis support span of a family member, without building it."""
    M = 1 << N
    if name == "fejer":
        return 2 * N
    # vallee_poussin spans [-2M+1, 2M-1]; the modulated families sit on [1, 4M-1]
    return 4 * M - 2
