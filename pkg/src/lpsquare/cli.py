"""Command-line entry point ``lpsquare``.

Exit codes: 0 on success, 2 for configuration errors, 3 for numerical failures.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import experiments as ex
from .corpus import random_analytic, random_poly
from .hardy import kx_split
from .kernels import FAMILIES, FamilySpec, family_poly
from .multipliers import apply_tensor_multiplier, load_multiplier_spec, square_function
from .orlicz import OrliczParams, orlicz_norm, weak_quasinorm
from .spectral import (
    AliasingError,
    coefficients_to_json,
    dump_grid_csv,
    load_coefficients,
    lp_norm,
    norm_grid_size,
    synthesize,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _common() -> argparse.ArgumentParser:
    # default=SUPPRESS so values given before the subcommand are not clobbered
    common = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    common.add_argument("--resolution", type=int, default=S, help="grid points per axis")
    common.add_argument("--oversample", type=int, default=S,
                        help="grid points per unit of support span")
    common.add_argument("--seed", type=int, default=S)
    common.add_argument("--out", default=S, help="output path (stdout if omitted)")
    common.add_argument("--format", choices=("csv", "json"), default=S)
    common.add_argument("--config", default=S, help="JSON file with experiment settings")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="lpsquare", parents=[common],
                                     description="Multi-parameter Littlewood-Paley experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[common], help="write a family member or random polynomial")
    gen.add_argument("--family", choices=FAMILIES + ("random", "random_analytic"),
                     default="pichorides")
    gen.add_argument("--N", type=int, default=4)
    gen.add_argument("--d", type=int, default=1)
    gen.add_argument("--width", type=int, default=16, help="support width for random families")

    apply = sub.add_parser("apply", parents=[common], help="apply a tensor multiplier")
    apply.add_argument("input", help="coefficient JSON")
    apply.add_argument("--multiplier", required=True, help="multiplier JSON file or string")

    norm = sub.add_parser("norm", parents=[common], help="Lp, Orlicz or weak-L1 norm")
    norm.add_argument("input")
    group = norm.add_mutually_exclusive_group()
    group.add_argument("--p", type=float, default=2.0)
    group.add_argument("--orlicz", type=float, metavar="R", help="L log^R L norm")
    group.add_argument("--weak", action="store_true", help="weak-L1 quasinorm")
    norm.add_argument("--sqfn", action="store_true", help="take the norm of S(f)")

    sq = sub.add_parser("sqfn", parents=[common], help="sample the square function")
    sq.add_argument("input")

    kx = sub.add_parser("kx-split", parents=[common], help="outer-function split f = h + g")
    kx.add_argument("input")
    kx.add_argument("--lam", type=float, required=True)

    for name in ("rate", "zygmund", "weaktype"):
        p = sub.add_parser(name, parents=[common], help=f"{name} experiment")
        p.add_argument("--d", type=int, default=argparse.SUPPRESS)
        p.add_argument("--family", choices=FAMILIES, default=argparse.SUPPRESS)
        p.add_argument("--coupling", choices=("capped", "strict"), default=argparse.SUPPRESS)
        p.add_argument("--p-grid", nargs="*", type=float, dest="p_grid",
                       default=argparse.SUPPRESS)
        p.add_argument("--N-range", nargs=2, type=int, dest="N_range", metavar=("LO", "HI"),
                       default=argparse.SUPPRESS)
        p.add_argument("--r", type=float, default=argparse.SUPPRESS)
    return parser


def _emit_text(text: str, out) -> None:
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _emit_json(doc, out) -> None:
    _emit_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", out)


def _grid(f, args) -> tuple[int, ...]:
    if getattr(args, "resolution", None):
        return (args.resolution,) * f.dim
    return norm_grid_size(f, getattr(args, "oversample", 8))


def _finite(x: float, what: str) -> float:
    if not math.isfinite(x):
        raise ex.NumericalError(f"{what} is not finite")
    return x


def cmd_gen(args) -> None:
    rng = np.random.default_rng(getattr(args, "seed", 0))
    if args.family == "random":
        f = random_poly(rng, -args.width // 2, args.width // 2, args.d)
    elif args.family == "random_analytic":
        f = random_analytic(rng, args.width, args.d)
    else:
        f = family_poly(FamilySpec(args.family, args.N, args.d))
    _emit_json(coefficients_to_json(f), getattr(args, "out", None))


def cmd_apply(args) -> None:
    f = load_coefficients(args.input)
    ranges = [(int(lo), int(hi)) for lo, hi in f.support_box] if len(f) else None
    spec = load_multiplier_spec(args.multiplier, ranges)
    _emit_json(coefficients_to_json(apply_tensor_multiplier(spec, f)), getattr(args, "out", None))


def cmd_norm(args) -> None:
    f = load_coefficients(args.input)
    g = square_function(f, _grid(f, args)) if args.sqfn else synthesize(f, _grid(f, args))
    if args.weak:
        value, kind = weak_quasinorm(g), "weak_l1"
    elif args.orlicz is not None:
        value, kind = orlicz_norm(g, OrliczParams(r=args.orlicz)), f"orlicz_r={args.orlicz!r}"
    else:
        value, kind = lp_norm(g, args.p), f"lp_p={args.p!r}"
    _emit_json({"norm": _finite(value, "norm"), "kind": kind, "sqfn": args.sqfn,
                "resolution": list(g.resolution)}, getattr(args, "out", None))


def cmd_sqfn(args) -> None:
    f = load_coefficients(args.input)
    S = square_function(f, _grid(f, args))
    out = getattr(args, "out", None)
    if getattr(args, "format", "csv") == "json":
        _emit_json({"resolution": list(S.resolution), "values": S.samples.real.ravel().tolist()},
                   out)
    elif out:
        dump_grid_csv(S, out)
    else:
        sys.stdout.write("re,im\n")
        for v in S.samples.real.ravel():
            sys.stdout.write(f"{float(v)!r},0.0\n")


def cmd_kx(args) -> None:
    f = load_coefficients(args.input)
    res = getattr(args, "resolution", None) or 4096
    split = kx_split(f, args.lam, res)
    report = split.report()
    for key, v in report.items():
        _finite(v, key)
    _emit_json(report, getattr(args, "out", None))


def _experiment_config(args) -> ex.ExperimentConfig:
    doc: dict = {}
    if getattr(args, "config", None):
        try:
            doc.update(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ex.ConfigError(f"cannot read config {args.config}: {exc}") from None
    doc["experiment"] = args.command
    for key in ("d", "family", "coupling", "p_grid", "N_range", "r", "resolution", "oversample",
                "seed", "out", "format"):
        if hasattr(args, key):
            doc[key] = getattr(args, key)
    return ex.ExperimentConfig.from_dict(doc)


def cmd_experiment(args) -> None:
    cfg = _experiment_config(args)
    table = ex.run(cfg)
    if cfg.out:
        ex.emit_report(table, cfg.format, cfg.out)
    else:
        sys.stdout.write(ex.render_report(table, cfg.format))


COMMANDS = {"gen": cmd_gen, "apply": cmd_apply, "norm": cmd_norm, "sqfn": cmd_sqfn,
            "kx-split": cmd_kx, "rate": cmd_experiment, "zygmund": cmd_experiment,
            "weaktype": cmd_experiment}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        COMMANDS[args.command](args)
    except ex.NumericalError as exc:
        print(f"lpsquare: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ex.ConfigError, AliasingError, ValueError, KeyError, TypeError, OSError) as exc:
        print(f"lpsquare: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FloatingPointError as exc:
        print(f"lpsquare: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
