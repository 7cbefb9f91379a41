"""Dyadic blocks, tensor multipliers and the d-parameter square function.

Block convention: ``Delta_k`` keeps frequencies ``2^(k-1) <= n <= 2^k - 1`` for
``k >= 1``, the mirror image ``-2^|k| + 1 <= n <= -2^(|k|-1)`` for ``k <= -1``
and the single frequency ``0`` for ``k = 0``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy import fft as sp_fft

from .spectral import GridFunction, TrigPoly, check_resolution

__all__ = [
    "block_index",
    "block_range",
    "AxisSymbol",
    "MultiplierSpec",
    "SignPattern",
    "delta_project",
    "apply_tensor_multiplier",
    "marcinkiewicz_constant",
    "sign_symbol",
    "square_function",
    "load_multiplier_spec",
]


def block_index(n):
    """Index ``k`` of the dyadic block containing each integer frequency ``n``."""
    n = np.asarray(n, dtype=np.int64)
    # frexp exponent of |n| equals its bit length (exact below 2**53)
    _, e = np.frexp(np.abs(n).astype(np.float64))
    k = np.where(n == 0, 0, e).astype(np.int64)
    return np.sign(n) * k


def block_range(k: int) -> tuple[int, int]:
    """Inclusive frequency interval of block ``k``."""
    if k == 0:
        return 0, 0
    a = abs(k)
    lo, hi = 1 << (a - 1), (1 << a) - 1
    return (lo, hi) if k > 0 else (-hi, -lo)


def _check_axis(f: TrigPoly, axis: int) -> int:
    if not 1 <= axis <= f.dim:
        raise ValueError(f"axis must lie in [1, {f.dim}], got {axis}")
    return axis - 1


def delta_project(f: TrigPoly, k: int, axis: int = 1) -> TrigPoly:
    """Dyadic block projection ``Delta_k`` acting on the variable ``x_axis`` (1-based)."""
    j = _check_axis(f, axis)
    return f.restrict(block_index(f.freqs[:, j]) == k)


@dataclass(frozen=True)
class AxisSymbol:
    """A bounded symbol ``m(n)`` tabulated on the integer range ``[lo, lo + len(values) - 1]``.

    Entries equal to NaN mark frequencies where the symbol is undefined.
    """

    lo: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.complex128).ravel()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "lo", int(self.lo))

    @classmethod
    def from_function(cls, fn: Callable, lo: int, hi: int) -> "AxisSymbol":
        n = np.arange(lo, hi + 1)
        return cls(lo, np.asarray(fn(n), dtype=np.complex128) * np.ones(n.shape))

    @classmethod
    def identity(cls, lo: int, hi: int) -> "AxisSymbol":
        return cls(lo, np.ones(hi - lo + 1))

    @property
    def hi(self) -> int:
        return self.lo + self.values.shape[0] - 1

    @property
    def sup_norm(self) -> float:
        finite = self.values[~np.isnan(self.values)]
        return float(np.abs(finite).max()) if finite.size else 0.0

    def covers(self, lo: int, hi: int) -> bool:
        return self.lo <= lo and hi <= self.hi

    def __call__(self, n):
        n = np.asarray(n, dtype=np.int64)
        if n.size and (n.min() < self.lo or n.max() > self.hi):
            raise ValueError(
                f"symbol defined on [{self.lo}, {self.hi}] but evaluated on "
                f"[{int(n.min())}, {int(n.max())}]")
        out = self.values[n - self.lo]
        if np.isnan(out).any():
            bad = n[np.isnan(out)]
            raise ValueError(f"symbol undefined at frequencies {bad[:8].tolist()}")
        return out


@dataclass(frozen=True)
class MultiplierSpec:
    """Symbols ``(m_1, ..., m_d)`` of the tensor operator ``T_{m_1} x ... x T_{m_d}``."""

    axes: tuple[AxisSymbol, ...]

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))

    @property
    def dim(self) -> int:
        return len(self.axes)


@dataclass(frozen=True)
class SignPattern:
    """Block signs ``k -> +1/-1``."""

    signs: Mapping[int, int]

    def __post_init__(self):
        clean = {}
        for k, s in dict(self.signs).items():
            if s not in (1, -1):
                raise ValueError(f"sign for block {k} must be +1 or -1, got {s}")
            clean[int(k)] = int(s)
        object.__setattr__(self, "signs", clean)

    @classmethod
    def constant(cls, kmin: int, kmax: int, sign: int = 1) -> "SignPattern":
        return cls({k: sign for k in range(kmin, kmax + 1)})

    @classmethod
    def random(cls, kmin: int, kmax: int, rng: np.random.Generator) -> "SignPattern":
        draws = rng.choice([-1, 1], size=kmax - kmin + 1)
        return cls({k: int(s) for k, s in zip(range(kmin, kmax + 1), draws)})

    def covered_range(self) -> tuple[int, int]:
        """Largest frequency interval around 0 whose blocks all carry a sign."""
        if 0 not in self.signs:
            raise ValueError("sign pattern does not cover block 0")
        kp = 0
        while kp + 1 in self.signs:
            kp += 1
        km = 0
        while -(km + 1) in self.signs:
            km += 1
        return block_range(-km)[0], block_range(kp)[1]


def sign_symbol(pattern: SignPattern, freq_range: tuple[int, int] | None = None) -> AxisSymbol:
    """Symbol ``m(n) = eps_{k(n)}`` of the randomised operator ``sum_k eps_k Delta_k``."""
    lo, hi = pattern.covered_range() if freq_range is None else freq_range
    n = np.arange(lo, hi + 1)
    ks = block_index(n)
    missing = sorted(set(np.unique(ks).tolist()) - set(pattern.signs))
    if missing:
        raise ValueError(f"sign pattern misses blocks {missing} needed on [{lo}, {hi}]")
    lookup = np.vectorize(pattern.signs.__getitem__, otypes=[np.float64])
    return AxisSymbol(lo, lookup(ks))


def apply_tensor_multiplier(spec: MultiplierSpec, f: TrigPoly) -> TrigPoly:
    """Coefficient-wise ``prod_j m_j(n_j) * f^(n)``."""
    if spec.dim != f.dim:
        raise ValueError(f"multiplier has {spec.dim} axes, polynomial has dimension {f.dim}")
    factor = np.ones(len(f), dtype=np.complex128)
    for j, m in enumerate(spec.axes):
        factor *= m(f.freqs[:, j])
    return f.map_amps(factor)


def marcinkiewicz_constant(m: AxisSymbol, k_max: int) -> float:
    """Largest dyadic variation sum of a periodic symbol over windows ``k = 1..k_max``.

    For each k the positive window adds ``|m(n+1) - m(n)|`` over
    ``2^k - 1 <= n <= 2^(k+1)`` and the negative window over
    ``-2^(k+1) <= n <= -2^k + 1``.
    """
    if k_max < 1:
        raise ValueError("k_max must be a positive integer")
    reach = (1 << (k_max + 1)) + 1
    if not m.covers(-reach, reach):
        raise ValueError(
            f"symbol must be defined on [{-reach}, {reach}], has [{m.lo}, {m.hi}]")
    best = 0.0
    for k in range(1, k_max + 1):
        pos = np.arange((1 << k) - 1, (1 << (k + 1)) + 1)
        neg = np.arange(-(1 << (k + 1)), -(1 << k) + 2)
        total = (np.abs(m(pos + 1) - m(pos)).sum() + np.abs(m(neg + 1) - m(neg)).sum())
        best = max(best, float(total))
    return best


def block_groups(f: TrigPoly) -> dict[tuple[int, ...], np.ndarray]:
    """Map each occupied block tuple ``(k_1, ..., k_d)`` to the row indices it holds."""
    if len(f) == 0:
        return {}
    ks = block_index(f.freqs)
    uniq, inverse = np.unique(ks, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    order = np.argsort(inverse, kind="stable")
    bounds = np.searchsorted(inverse[order], np.arange(uniq.shape[0] + 1))
    return {tuple(int(v) for v in uniq[i]): order[bounds[i]:bounds[i + 1]]
            for i in range(uniq.shape[0])}


def square_function(f: TrigPoly, resolution) -> GridFunction:
    """``S(f) = (sum over block tuples |Delta_{k_1..k_d} f|^2)^(1/2)`` sampled on a grid.

    Each block piece is synthesized separately and its squared modulus is added
    to a single accumulator.
    """
    res = check_resolution(f, resolution)
    acc = np.zeros(res, dtype=np.float64)
    dense = np.zeros(res, dtype=np.complex128)
    slots = f.freqs % np.asarray(res)
    for rows in block_groups(f).values():
        idx = tuple(slots[rows].T)
        dense[idx] = f.amps[rows]
        piece = sp_fft.ifftn(dense, norm="forward", workers=-1)
        acc += piece.real ** 2 + piece.imag ** 2
        dense[idx] = 0
    return GridFunction(np.sqrt(acc))


# -- file format ------------------------------------------------------------------

def _axis_from_json(doc: Mapping, freq_range: tuple[int, int] | None) -> AxisSymbol:
    kind = doc.get("kind")
    if kind == "signs":
        pattern = SignPattern({int(k): int(v) for k, v in doc["signs"].items()})
        return sign_symbol(pattern, freq_range)
    if kind == "table":
        entries = {int(n): complex(v[0], v[1]) for n, v in doc["entries"].items()}
        if not entries:
            raise ValueError("table symbol has no entries")
        lo, hi = min(entries), max(entries)
        values = np.full(hi - lo + 1, np.nan, dtype=np.complex128)
        for n, v in entries.items():
            values[n - lo] = v
        return AxisSymbol(lo, values)
    raise ValueError(f"unknown symbol kind {kind!r}")


def load_multiplier_spec(source, freq_ranges: Sequence[tuple[int, int] | None] | None = None
                         ) -> MultiplierSpec:
    """Read a MultiplierSpec from a JSON path, string or already-parsed document.

    The document is either a list of axis entries or ``{"axes": [...]}``; each
    entry is ``{"kind": "signs", "signs": {k: +-1}}`` or
    ``{"kind": "table", "entries": {n: [re, im]}}``.
    """
    if isinstance(source, str) and source.lstrip()[:1] in ("{", "["):
        doc = json.loads(source)
    elif isinstance(source, (str, Path)):
        doc = json.loads(Path(source).read_text())
    else:
        doc = source
    axes = doc["axes"] if isinstance(doc, Mapping) else doc
    if freq_ranges is None:
        freq_ranges = [None] * len(axes)
    return MultiplierSpec(tuple(_axis_from_json(a, r) for a, r in zip(axes, freq_ranges)))
