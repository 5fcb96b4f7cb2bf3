"""Command-line front end: ``lgvariants {eval,optimize,sweep,nsit,bounds,reproduce}``."""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from .errors import ContractError, LGError
from .functionals import FAMILIES, eval_separate, macrorealist_bound, parse_spec
from .nsit import disturbance_general, disturbance_report, gamma
from .qubit import PureState, Schedule, density_from_pure
from .report import render_record, render_table, reproduce, write_output
from .search import SearchConfig, optimize, sweep

log = logging.getLogger("lgvariants")

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3


class UsageError(Exception):
    """Bad command-line input; maps to exit code 2."""


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"expected a comma separated list of numbers, got {text!r}") from exc


def _spec(text: str, n: int | None = None):
    try:
        return parse_spec(text, n)
    except ContractError as exc:
        raise UsageError(str(exc)) from exc


def _range(text: str, integer: bool) -> list:
    parts = text.split(":")
    try:
        if integer:
            if len(parts) not in (2, 3):
                raise ValueError
            start, stop = int(parts[0]), int(parts[1])
            step = int(parts[2]) if len(parts) == 3 else 1
            return list(range(start, stop + 1, step))
        if len(parts) != 3:
            raise ValueError
        return list(np.linspace(float(parts[0]), float(parts[1]), int(parts[2])))
    except ValueError as exc:
        form = "START:STOP[:STEP]" if integer else "START:STOP:NUM"
        raise UsageError(f"--range must look like {form}, got {text!r}") from exc


def _state(args) -> np.ndarray:
    return density_from_pure(PureState(args.theta, args.phi))


def cmd_eval(args) -> dict:
    spec = _spec(args.spec, args.n)
    sched = Schedule.from_list(spec.n, _floats(args.g))
    value = eval_separate(spec, _state(args), sched)
    bounds = macrorealist_bound(spec)
    return {
        "spec": spec.text,
        "n": spec.n,
        "couplings": list(sched.couplings),
        "theta": args.theta,
        "phi": args.phi,
        "value": value,
        "macrorealist_min": bounds.macrorealist_min,
        "macrorealist_max": bounds.macrorealist_max,
        "algebraic_max": bounds.algebraic_max,
        "violated": value > bounds.macrorealist_max,
    }


def cmd_optimize(args):
    spec = _spec(args.spec, args.n)
    cfg = SearchConfig(
        g_grid=args.grid, theta_grid=args.grid, phi_grid=args.grid,
        equal_couplings=not args.unequal,
    )
    return optimize(spec, cfg).as_record()


def cmd_sweep(args):
    if args.axis == "n":
        family = args.spec.split(":")[0].strip()
        if family not in FAMILIES:
            raise UsageError(f"an n sweep needs --spec from {sorted(FAMILIES)}, got {args.spec!r}")
        rows = sweep(family, "n", _range(args.range, True), theta=args.theta, phi=args.phi)
    else:
        spec = _spec(args.spec, args.n)
        gs = _floats(args.g)
        rows = sweep(spec, args.axis, _range(args.range, False), g=gs, theta=args.theta, phi=args.phi)
    return [{args.axis: x, "value": v} for x, v in rows]


def cmd_nsit(args):
    n = args.n or 3
    sched = Schedule.from_list(n, _floats(args.g))
    rho = _state(args)
    if n == 3:
        record = disturbance_report(rho, sched).flat()
    else:
        record = {f"d_general[{'+' if m > 0 else '-'}]": v
                  for m, v in disturbance_general(rho, sched).items()}
        record["gamma"] = gamma(rho, sched)
    return {"n": n, "couplings": list(sched.couplings), **record}


def cmd_bounds(args):
    spec = _spec(args.spec, args.n)
    b = macrorealist_bound(spec)
    return {
        "spec": spec.text,
        "n": spec.n,
        "macrorealist_min": b.macrorealist_min,
        "macrorealist_max": b.macrorealist_max,
        "algebraic_max": b.algebraic_max,
    }


def cmd_reproduce(args):
    cfg = SearchConfig(g_grid=args.grid, theta_grid=args.grid, phi_grid=args.grid)
    out_dir = args.out or "reproduce_out"
    rows = reproduce(out_dir, args.format, cfg)
    failed = [r.name for r in rows if r.status == "fail"]
    for r in rows:
        log.info("%-48s %s", r.name, r.status)
    summary = {
        "out_dir": str(out_dir),
        "rows": len(rows),
        "pass": sum(r.status == "pass" for r in rows),
        "discrepancy": sum(r.status == "discrepancy" for r in rows),
        "fail": len(failed),
    }
    print(render_record(summary, args.format), end="")
    return EXIT_NUMERIC if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lgvariants",
        description="Leggett-Garg functionals for sequentially measured qubits.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec=True, state=True, g=True):
        if spec:
            p.add_argument("--spec", required=True,
                           help='e.g. "+[1,2]+[2,3]-[1,3]", K:3, K3var:4, L3var:5')
        p.add_argument("--n", type=int, default=None, help="number of measurement slots")
        if g:
            p.add_argument("--g", default="0", help="coupling angle(s), one value is broadcast")
        if state:
            p.add_argument("--theta", type=float, default=0.0)
            p.add_argument("--phi", type=float, default=0.0)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="output path (stdout when omitted)")
        p.add_argument("--seed", type=int, default=None, help="reserved; the search is deterministic")

    common(sub.add_parser("eval", help="evaluate a functional at one point"))
    p = sub.add_parser("optimize", help="search for the largest quantum value")
    common(p, state=False, g=False)
    p.add_argument("--unequal", action="store_true", help="one coupling per interval")
    p.add_argument("--grid", type=int, default=24, help="grid points per axis")
    p = sub.add_parser("sweep", help="tabulate a functional along one axis")
    common(p)
    p.add_argument("--axis", choices=("g", "theta", "phi", "n"), required=True)
    p.add_argument("--range", required=True, help="START:STOP:NUM, or START:STOP[:STEP] for n")
    common(sub.add_parser("nsit", help="NSIT disturbance report"), spec=False)
    common(sub.add_parser("bounds", help="macrorealist and algebraic bounds"), state=False, g=False)
    p = sub.add_parser("reproduce", help="recompute every reported value into a directory")
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--out", default=None, help="output directory (default reproduce_out)")
    p.add_argument("--grid", type=int, default=24)
    p.add_argument("--seed", type=int, default=None, help="reserved; unused")
    return parser


COMMANDS = {
    "eval": cmd_eval,
    "optimize": cmd_optimize,
    "sweep": cmd_sweep,
    "nsit": cmd_nsit,
    "bounds": cmd_bounds,
    "reproduce": cmd_reproduce,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    try:
        result = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"lgvariants: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LGError, FloatingPointError) as exc:
        print(f"lgvariants: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if isinstance(result, int):
        return result
    if isinstance(result, dict):
        write_output(render_record(result, args.format), args.out)
    else:
        write_output(render_table(result, args.format), args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
