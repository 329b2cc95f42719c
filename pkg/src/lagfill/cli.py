"""Command-line interface.

Exit codes: 0 success, 2 precondition failure, 3 verification failure,
64 usage error, 74 I/O error.  Results and error payloads go to stdout as
JSON (or to ``--out``).
"""

from __future__ import annotations

import argparse
import sys

from . import __version__, io
from .curves import length
from .errors import LagfillError
from .filler import FillRequest, Tolerances, check_fillable, fill, fill_loop
from .harness import (
    CASES,
    case_gamma,
    compensate_area,
    compensate_loop,
    estimate_mu,
    gen_fourier_curve,
    refine_study,
)

EXIT_OK = 0
EXIT_USAGE = 64
EXIT_IO = 74


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _grid(text: str) -> tuple[int, int]:
    try:
        ns, nt = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 512x256, got {text!r}")
    if ns < 16 or nt < 16:
        raise argparse.ArgumentTypeError("grid dimensions must be at least 16")
    return ns, nt


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _tolerances(args) -> Tolerances:
    kw = {}
    if getattr(args, "tol_action", None) is not None:
        kw["action_rel"] = args.tol_action
    if getattr(args, "tol_residual", None) is not None:
        kw["residual_norm"] = args.tol_residual
    return Tolerances(**kw)


def _read(fn, path):
    try:
        return fn(path)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}")
    except (ValueError, KeyError, IndexError, TypeError) as e:
        raise InputError(f"cannot parse {path}: {e}")


def _emit(obj: dict, out: str | None):
    text = io.dumps(obj)
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _write_artifacts(res, args):
    if args.mesh:
        io.write_mesh(res.mesh, args.mesh)
    if args.obj:
        io.write_obj(res.mesh, args.obj)


def cmd_fill(args) -> int:
    gamma = _read(io.read_gamma, args.gamma)
    c = _read(io.read_curve, args.curve)
    res = fill(FillRequest(gamma, c, args.grid, _tolerances(args)))
    _write_artifacts(res, args)
    _emit(res.to_json(args.mesh), args.out)
    return EXIT_OK


def cmd_loop_fill(args) -> int:
    c = _read(io.read_curve, args.curve)
    res = fill_loop(c, args.grid, _tolerances(args))
    _write_artifacts(res, args)
    _emit(res.to_json(args.mesh), args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    gamma = _read(io.read_gamma, args.gamma)
    c = _read(io.read_curve, args.curve)
    d = check_fillable(gamma, c, _tolerances(args).action_rel)
    out = d.to_json()
    out["length"] = length(c)
    _emit(out, args.out)
    return EXIT_OK


def cmd_estimate_mu(args) -> int:
    rep = estimate_mu(args.case, args.runs, args.seed, args.grid or (512, 256), args.modes, args.samples, _tolerances(args))
    if args.csv:
        io.write_ensemble_csv(rep, args.csv)
    _emit(rep.to_json(), args.out)
    return EXIT_OK


def cmd_refine(args) -> int:
    if args.curve:
        if not args.gamma:
            raise UsageError("refine --curve needs --gamma")
        gamma = _read(io.read_gamma, args.gamma)
        source = _read(io.read_curve, args.curve)
    else:
        gamma = case_gamma(args.case)
        seed, modes = args.seed, args.modes

        def source(samples):
            c = gen_fourier_curve(seed, modes, 1.0, gamma, samples)
            return c if gamma.has_complex else compensate_area(c, gamma)

    table = refine_study(gamma, source, args.levels, args.grid or (128, 64), _tolerances(args))
    _emit(table.to_json(), args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.loop:
        c = gen_fourier_curve(args.seed, args.modes, args.scale, "loop", args.samples)
        if args.compensate:
            c = compensate_loop(c)
    else:
        gamma = _read(io.read_gamma, args.gamma) if args.gamma else case_gamma(args.case)
        c = gen_fourier_curve(args.seed, args.modes, args.scale, gamma, args.samples)
        if args.compensate:
            c = compensate_area(c, gamma)
    if args.out:
        io.write_curve(c, args.out)
    else:
        sys.stdout.write(io.dumps(io.curve_to_json(c)))
    return EXIT_OK


def _tol_flags(p):
    p.add_argument("--tol-action", type=_positive, help="relative action tolerance (times length^2)")
    p.add_argument("--tol-residual", type=_positive, help="normalized isotropy tolerance")


def _output_flags(p):
    p.add_argument("--out", help="write result JSON here instead of stdout")
    p.add_argument("--mesh", help="write the mesh as JSON")
    p.add_argument("--obj", help="write the mesh as OBJ (y2 dropped)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lagfill", description="Explicit Lagrangian fillings of curves in C^2.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fill", help="fill a curve with endpoints on a plane configuration")
    p.add_argument("--gamma", required=True, help="boundary configuration JSON")
    p.add_argument("--curve", required=True, help="curve CSV or JSON")
    p.add_argument("--grid", type=_grid, help="mesh resolution NsxNt")
    _output_flags(p)
    _tol_flags(p)
    p.set_defaults(func=cmd_fill)

    p = sub.add_parser("loop-fill", help="fill a closed loop of zero action")
    p.add_argument("--curve", required=True)
    p.add_argument("--grid", type=_grid)
    _output_flags(p)
    _tol_flags(p)
    p.set_defaults(func=cmd_loop_fill)

    p = sub.add_parser("check", help="classify a request and report the closing action")
    p.add_argument("--gamma", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--out")
    _tol_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("estimate-mu", help="ensemble estimate of area / length^2")
    p.add_argument("--case", choices=CASES, required=True)
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", type=_grid)
    p.add_argument("--modes", type=int, default=6)
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--out")
    p.add_argument("--csv", help="write one row per run")
    _tol_flags(p)
    p.set_defaults(func=cmd_estimate_mu)

    p = sub.add_parser("refine", help="residual and area under grid doubling")
    p.add_argument("--gamma")
    p.add_argument("--curve", help="fixed input curve; otherwise a generated smooth curve is resampled per level")
    p.add_argument("--case", choices=CASES, default="complex")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--modes", type=int, default=6)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--grid", type=_grid, help="coarsest grid (default 128x64)")
    p.add_argument("--out")
    _tol_flags(p)
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("gen", help="generate a random smooth test curve")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--modes", type=int, default=6)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--case", choices=CASES, default="complex")
    p.add_argument("--gamma", help="boundary JSON (overrides --case)")
    p.add_argument("--loop", action="store_true", help="closed loop at the origin instead")
    p.add_argument("--compensate", action="store_true", help="append a small loop cancelling the (closing) action")
    p.add_argument("--out", help="curve file (.csv or .json)")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LagfillError as e:
        sys.stdout.write(io.dumps({"exit_code": e.exit_code, **e.to_dict()}))
        return e.exit_code
    except InputError as e:
        print(f"lagfill: {e}", file=sys.stderr)
        return EXIT_IO
    except OSError as e:
        print(f"lagfill: {e}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, ValueError) as e:
        print(f"lagfill: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
