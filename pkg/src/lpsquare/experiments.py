"""Rate, Zygmund and weak-type experiments on the extremal families, plus report I/O.

Every experiment produces a :class:`RateTable` whose rows are
``(d, p, N, num, den, ratio)``. Rate rows compare ``||S g_N||_p`` with
``||g_N||_p``; Zygmund rows compare ``||S g_N||_1`` with an Orlicz norm; weak-type
rows compare the weak-L^1 quasinorm of ``S g_N`` with ``L log^(d-1) L``.
Norms of a family member and of its square function are taken on the same grid,
the smallest power of two with at least ``oversample`` points per unit of
support span on every axis.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
import numpy as np

from .corpus import random_poly
from .kernels import FamilySpec, family_poly, family_span
from .multipliers import square_function
from .orlicz import OrliczParams, orlicz_norm, weak_quasinorm
from .spectral import lp_norm, synthesize

__all__ = [
    "ConfigError",
    "NumericalError",
    "RateRow",
    "RateTable",
    "ExperimentConfig",
    "rate_experiment",
    "fit_exponent",
    "zygmund_experiment",
    "weak_type_experiment",
    "envelope_check",
    "emit_report",
    "load_report",
    "max_admissible_N",
    "coupled_N",
    "matched_rows",
    "render_report",
    "parse_report",
    "run",
]

CSV_HEADER = ["d", "p", "N", "num", "den", "ratio"]
MAX_GRID_POINTS = 1 << 24


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""


class NumericalError(RuntimeError):
    """A computed quantity is not finite (CLI exit code 3)."""


@dataclass(frozen=True)
class RateRow:
    d: int
    p: float
    N: int
    num: float
    den: float
    ratio: float


@dataclass
class RateTable:
    rows: list[RateRow] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def append(self, d: int, p: float, N: int, num: float, den: float) -> None:
        if not (math.isfinite(num) and math.isfinite(den)) or den <= 0:
            raise NumericalError(f"non-finite or zero norm in row d={d} p={p} N={N}: "
                                 f"num={num}, den={den}")
        self.rows.append(RateRow(int(d), float(p), int(N), float(num), float(den),
                                 float(num) / float(den)))

    def ratios(self) -> np.ndarray:
        return np.array([r.ratio for r in self.rows])

    def __len__(self) -> int:
        return len(self.rows)


@dataclass
class ExperimentConfig:
    experiment: str = "rate"
    d: int = 1
    p_grid: tuple[float, ...] = (1.5, 1.25, 1.125, 1.0625, 1.03125)
    coupling: str = "capped"
    family: str = "pichorides"
    resolution: int = 1 << 14
    oversample: int = 4
    N_range: tuple[int, int] = (4, 10)
    r: float | None = None
    seed: int = 0
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        self.p_grid = tuple(float(p) for p in self.p_grid)
        self.N_range = tuple(int(n) for n in self.N_range)
        self.validate()

    def validate(self) -> None:
        if self.d < 1:
            raise ConfigError("d must be >= 1")
        r = self.resolution
        if r < 2 or r & (r - 1):
            raise ConfigError(f"resolution {r} is not a power of two")
        if self.oversample < 1:
            raise ConfigError("oversample must be >= 1")
        if self.coupling not in ("capped", "strict"):
            raise ConfigError(f"unknown N-coupling rule {self.coupling!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown report format {self.format!r}")
        if any(b >= a for a, b in zip(self.p_grid, self.p_grid[1:])):
            raise ConfigError("p-grid must be strictly decreasing")
        if self.experiment == "rate" and any(p <= 1 for p in self.p_grid):
            raise ConfigError("rate experiments need p > 1")
        lo, hi = self.N_range
        if lo < 1 or hi < lo:
            raise ConfigError(f"bad N range {self.N_range}")
        try:
            FamilySpec(self.family, 1, self.d)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**doc)


# -- grids and budgets ----------------------------------------------------------------

def _axis_grid(cfg: ExperimentConfig, N: int) -> int:
    span = family_span(cfg.family, N)
    need = cfg.oversample * (span + 1)
    return max(2, 1 << math.ceil(math.log2(need)))


def _axis_budget(cfg: ExperimentConfig) -> int:
    per_axis_points = 1 << int(math.log2(MAX_GRID_POINTS) // cfg.d)
    return min(cfg.resolution, per_axis_points)


def max_admissible_N(cfg: ExperimentConfig) -> int:
    """Largest N whose grid fits the per-axis budget (0 if none does)."""
    budget = _axis_budget(cfg)
    N = 0
    while N < 60 and _axis_grid(cfg, N + 1) <= budget:
        N += 1
    return N


def _family_grids(cfg: ExperimentConfig, N: int, cache: dict):
    if N not in cache:
        g = family_poly(FamilySpec(cfg.family, N, cfg.d))
        res = (_axis_grid(cfg, N),) * cfg.d
        cache[N] = (synthesize(g, res), square_function(g, res))
    return cache[N]


def _check_budget(cfg: ExperimentConfig, N: int, label: str) -> None:
    if _axis_grid(cfg, N) > _axis_budget(cfg):
        raise ConfigError(f"resolution budget {_axis_budget(cfg)} per axis cannot hold N={N} "
                          f"({label})")


def _metadata(cfg: ExperimentConfig, **extra) -> dict:
    stamp = os.environ.get("SOURCE_DATE_EPOCH")
    meta = {"experiment": cfg.experiment, "family": cfg.family, "coupling": cfg.coupling,
            "seed": cfg.seed, "resolution": cfg.resolution, "oversample": cfg.oversample,
            "timestamp": int(stamp) if stamp else None}
    meta.update(extra)
    return meta


# -- experiments ----------------------------------------------------------------------

def coupled_N(p: float) -> int:
    """Default coupling ``N = round(1/(p-1))`` (halves rounded up), at least 1."""
    return max(1, int(math.floor(1.0 / (p - 1.0) + 0.5)))


def rate_experiment(cfg: ExperimentConfig) -> RateTable:
    """Ratios ``||S g_N||_p / ||g_N||_p`` along the p-grid with N coupled to p.

    Under the ``capped`` rule N is lowered to the largest value the resolution
    budget admits; under ``strict`` an oversized N is a configuration error.
    """
    n_max = max_admissible_N(cfg)
    table = RateTable(metadata=_metadata(cfg, N_max=n_max))
    cache: dict = {}
    for p in cfg.p_grid:
        N = coupled_N(p)
        if N > n_max:
            if cfg.coupling == "strict" or n_max < 1:
                raise ConfigError(
                    f"p={p} needs N={N} but the resolution budget "
                    f"{_axis_budget(cfg)} per axis admits N <= {n_max}")
            N = n_max
        G, S = _family_grids(cfg, N, cache)
        table.append(cfg.d, p, N, lp_norm(S, p), lp_norm(G, p))
    return table


def fit_exponent(table: RateTable) -> tuple[float, float]:
    """Least-squares slope of ``log ratio`` against ``log 1/(p-1)`` and the max |residual|."""
    if len(table) < 3:
        raise ValueError("fit_exponent needs at least 3 rows")
    x = np.log(1.0 / (np.array([r.p for r in table.rows]) - 1.0))
    y = np.log(table.ratios())
    if np.ptp(x) == 0:
        raise ValueError("degenerate abscissae: all rows share the same p")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return float(slope), float(np.max(np.abs(resid)))


def _N_values(cfg: ExperimentConfig) -> range:
    lo, hi = cfg.N_range
    for N in (lo, hi):
        _check_budget(cfg, N, f"N-range {cfg.N_range}")
    return range(lo, hi + 1)


def zygmund_experiment(cfg: ExperimentConfig) -> RateTable:
    """Rows ``(d, 1, N, ||S g_N||_1, ||g_N||_{L log^r L}, ratio)``; ``r`` defaults to d."""
    r = float(cfg.d if cfg.r is None else cfg.r)
    table = RateTable(metadata=_metadata(cfg, r=r))
    cache: dict = {}
    params = OrliczParams(r=r)
    for N in _N_values(cfg):
        G, S = _family_grids(cfg, N, cache)
        table.append(cfg.d, 1.0, N, lp_norm(S, 1), orlicz_norm(G, params))
        cache.clear()
    return table


def weak_type_experiment(cfg: ExperimentConfig) -> RateTable:
    """Rows ``(d, 1, N, ||S g_N||_{1,inf}, ||g_N||_{L log^(d-1) L}, ratio)``.

    For ``d = 1`` the denominator is the L^1 norm. The L^1 norms of ``S g_N`` are
    kept in ``metadata["numerator_l1"]`` for the Chebyshev comparison.
    """
    table = RateTable(metadata=_metadata(cfg, r=float(cfg.d - 1)))
    l1 = []
    cache: dict = {}
    for N in _N_values(cfg):
        G, S = _family_grids(cfg, N, cache)
        den = lp_norm(G, 1) if cfg.d == 1 else orlicz_norm(G, OrliczParams(r=cfg.d - 1))
        table.append(cfg.d, 1.0, N, weak_quasinorm(S), den)
        l1.append(lp_norm(S, 1))
        cache.clear()
    table.metadata["numerator_l1"] = l1
    return table


def envelope_check(table: RateTable, cfg: ExperimentConfig, samples: int = 8,
                   factor: float = 10.0) -> dict:
    """Compare random analytic inputs against the family envelope of each row.

    For each row, ``samples`` seeded random analytic polynomials with the same
    per-axis span as ``g_N`` must satisfy ``||S f||_p / ||f||_p <= factor * ratio``.
    """
    rng = np.random.default_rng(cfg.seed)
    worst = []
    for row in table.rows:
        span = family_span(cfg.family, row.N)
        res = (_axis_grid(cfg, row.N),) * row.d
        top = 0.0
        for _ in range(samples):
            f = random_poly(rng, 0, span, row.d)
            top = max(top, lp_norm(square_function(f, res), row.p)
                      / lp_norm(synthesize(f, res), row.p))
        worst.append(top)
    ok = all(w <= factor * row.ratio for w, row in zip(worst, table.rows))
    return {"worst_random_ratio": worst, "passed": ok, "factor": factor}


# -- report I/O -----------------------------------------------------------------------

def _fmt(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def render_report(table: RateTable, fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in table.rows:
            writer.writerow([_fmt(getattr(row, k)) for k in CSV_HEADER])
        return buf.getvalue()
    if fmt == "json":
        doc = {"metadata": table.metadata, "rows": [asdict(r) for r in table.rows]}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def emit_report(table: RateTable, fmt: str, path) -> None:
    """Write the table as CSV (header ``d,p,N,num,den,ratio``) or JSON."""
    text = render_report(table, fmt)
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc


def parse_report(text: str, fmt: str) -> RateTable:
    if fmt == "json":
        doc = json.loads(text)
        return RateTable([RateRow(**r) for r in doc["rows"]], doc.get("metadata", {}))
    reader = csv.DictReader(io.StringIO(text))
    rows = [RateRow(int(r["d"]), float(r["p"]), int(r["N"]), float(r["num"]),
                    float(r["den"]), float(r["ratio"])) for r in reader]
    return RateTable(rows)


def load_report(path, fmt: str | None = None) -> RateTable:
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "csv")
    return parse_report(path.read_text(), fmt)


def run(cfg: ExperimentConfig) -> RateTable:
    runners = {"rate": rate_experiment, "zygmund": zygmund_experiment,
               "weaktype": weak_type_experiment}
    if cfg.experiment not in runners:
        raise ConfigError(f"unknown experiment {cfg.experiment!r}")
    return runners[cfg.experiment](cfg)


def matched_rows(table_a: RateTable, table_b: RateTable) -> list[tuple[RateRow, RateRow]]:
    """Pairs of rows with equal ``(p, N)``."""
    index = {(r.p, r.N): r for r in table_b.rows}
    return [(r, index[(r.p, r.N)]) for r in table_a.rows if (r.p, r.N) in index]

