"""Command-line interface: ``ballistic <command> ...``.

Results go to stdout as JSON or CSV; progress and summaries go to stderr.
Exit codes: 0 ok, 1 usage error, 2 data or file error, 3 invariant violation.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import KERNEL, __version__
from .bounds import (
    BoundError,
    MultipleCrossings,
    NoCrossing,
    bound,
    bound_curve,
    find_threshold,
    heuristic_pc,
    parse_level,
    triple_collision_probability,
)
from .enumeration import (
    EnumerationError,
    TableFileError,
    enumerate_tables,
    gamma_tail,
    load_tables,
    save_tables,
)
from .kinematics import format_speeds, parse_speeds, run_ba

TABLE_DIR_ENV = "BALLISTIC_TABLE_DIR"
DEFAULT_DEPTH = 18

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _log(msg):
    print(msg, file=sys.stderr)


def _emit(obj):
    print(json.dumps(obj))


def _half(v2: int) -> str:
    return str(v2 // 2) if v2 % 2 == 0 else f"{v2 / 2:.1f}"


def _threads(n):
    return n if n and n > 0 else (os.cpu_count() or 1)


# ---------------------------------------------------------------- tables

def _table_path(depth):
    root = os.environ.get(TABLE_DIR_ENV)
    if not root:
        return None
    return os.path.join(root, f"tables_depth{depth}.json")


def _resolve_tables(args):
    """Tables from ``--tables``, else the table directory, else computed now."""
    if args.tables:
        t = load_tables(args.tables)
        if args.depth and args.depth != t.depth:
            t = t.truncate(args.depth)
        return t
    depth = args.depth or DEFAULT_DEPTH
    path = _table_path(depth)
    if path and os.path.exists(path):
        return load_tables(path)
    _log(f"computing depth-{depth} tables ({KERNEL} kernel)")
    t = enumerate_tables(depth, threads=_threads(getattr(args, "threads", None)))
    if path:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        save_tables(t, path)
        _log(f"cached tables at {path}")
    return t


def _add_table_args(sp):
    sp.add_argument("--tables", help="table file written by 'enumerate'")
    sp.add_argument("--depth", type=int, help=f"table depth (default {DEFAULT_DEPTH})")
    sp.add_argument("--threads", type=int, default=0, help="workers if tables must be computed")


def _prob(text):
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0 < p < 1:
        raise argparse.ArgumentTypeError("p must lie in (0, 1)")
    return p


def _closed_prob(text):
    p = float(text)
    if not 0 <= p <= 1:
        raise argparse.ArgumentTypeError("p must lie in [0, 1]")
    return p


# ---------------------------------------------------------------- commands

def cmd_simulate(args):
    try:
        config = parse_speeds(args.speeds)
    except ValueError as exc:
        raise UsageError(str(exc))
    out = run_ba(config)
    if args.json:
        _emit({
            "events": [{"time2": e.time2, "pos2": e.pos2, "participants": list(e.participants)}
                       for e in out.events],
            "xi": list(out.xi),
        })
        return EXIT_OK
    for e in out.events:
        print(f"t={_half(e.time2)} x={_half(e.pos2)} {{{','.join(map(str, e.participants))}}}")
    print(f"xi={format_speeds(out.xi)}")
    return EXIT_OK


def cmd_enumerate(args):
    if args.depth < 2:
        raise UsageError("--depth must be >= 2")
    threads = _threads(args.threads)

    def progress(n, an_total, gm_total):
        _log(f"n={n:2d}  |A_n|={an_total}  |gamma-minus|={gm_total}")

    t = enumerate_tables(args.depth, threads=threads, progress=progress)
    _log(f"nodes: left={t.meta['nodes_left']} right={t.meta['nodes_right']} "
         f"wall={t.meta['wall_time_s']}s threads={threads} kernel={KERNEL}")
    out = args.out or _table_path(args.depth)
    if out:
        save_tables(t, out)
        _log(f"wrote {out}")
    else:
        doc = t.payload()
        doc["checksum"] = t.checksum()
        doc["meta"] = {k: v for k, v in t.meta.items() if k != "checksum"}
        print(json.dumps(doc))
    return EXIT_OK


def _parse_sweep(text):
    try:
        a, b, n = text.split(":")
        return float(a), float(b), int(n)
    except ValueError:
        raise UsageError(f"--sweep expects p0:p1:steps, got {text!r}")


def cmd_bound(args):
    level = parse_level(args.level)
    tables = _resolve_tables(args) if level >= 2 else None
    if args.sweep:
        p0, p1, steps = _parse_sweep(args.sweep)
        try:
            curve = bound_curve(tables, level, p0, p1, steps)
        except ValueError as exc:
            raise UsageError(str(exc))
        sys.stdout.write(curve.to_csv())
        return EXIT_OK
    if args.p is None:
        raise UsageError("give --p or --sweep")
    value = float(bound(tables, args.p, level))
    depth = tables.depth if tables is not None else None
    _emit({"p": args.p, "level": level, "depth": depth, "value": value})
    _log(f"L{level}({args.p}) = {value:.6f}")
    return EXIT_OK


def cmd_threshold(args):
    level = parse_level(args.level)
    tables = _resolve_tables(args) if level >= 2 else None
    t0 = time.perf_counter()
    p_star = find_threshold(tables, level, tol=args.tol)
    depth = tables.depth if tables is not None else None
    _emit({"level": level, "depth": depth, "p_star": p_star, "tol": args.tol})
    _log(f"L{level} exceeds 1 for p > {p_star:.6f} ({time.perf_counter() - t0:.2f}s)")
    return EXIT_OK


def cmd_gamma_tail(args):
    tables = _resolve_tables(args)
    value = float(gamma_tail(tables, args.p))
    _emit({"p": args.p, "depth": tables.depth, "gamma_tail": value})
    _log(f"P(gamma_1 <= {tables.depth}) = {value:.6f}")
    return EXIT_OK


def cmd_heuristic(args):
    frac = heuristic_pc("fraction")
    literal = heuristic_pc("literal")
    primary = frac if args.mode == "fraction" else literal
    _emit({"p_star": primary, "mode": args.mode,
           "fraction_root": frac, "literal_root": literal,
           "triple_collision_at_quarter": triple_collision_probability(0.25)})
    _log(f"density-fraction root {frac:.4f}; literal-equation root {literal:.4f}")
    return EXIT_OK


def cmd_mc(args):
    from . import montecarlo, renewal

    threads = _threads(args.threads)
    if args.kind == "check":
        tables = _resolve_tables(args)
        if not 2 <= args.n <= tables.depth:
            raise UsageError(f"--n must lie in [2, {tables.depth}]")
        res = montecarlo.mc_check_tables(tables, args.p, args.n, args.reps, args.seed)
        _emit(res)
        if res["z_sigma"] is not None:
            _log(f"A_{args.n}: mc={res['p_An_mc']:.6f} exact={res['p_An_exact']:.6f} "
                 f"z={res['z_sigma']:+.2f}")
    elif args.kind == "survival":
        res = montecarlo.mc_seed_survival(args.p, args.window, args.reps, args.seed, threads)
        _emit(res)
        _log(f"seed survival on [0,{args.window}]: {res['survival']:.4f}")
    else:
        est = renewal.estimate_offspring_mean(args.p, args.horizon, args.reps, args.seed, threads)
        _emit(est.record())
        _log(f"E Z >= {est.mean_lower:.4f} +- {est.ci_halfwidth:.4f} "
             f"(censored {est.censor_rate:.4%})")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> _Parser:
    ap = _Parser(prog="ballistic", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({KERNEL})")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("simulate", help="run one finite configuration")
    sp.add_argument("--speeds", required=True, help="comma-separated speeds, e.g. 0,1,0,-1")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("enumerate", help="build count tables")
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--threads", type=int, default=0, help="worker processes (default: all cores)")
    sp.add_argument("--out", help=f"output file (default: ${TABLE_DIR_ENV} or stdout)")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("bound", help="evaluate a lower bound on E Z")
    sp.add_argument("--level", required=True)
    sp.add_argument("--p", type=_prob)
    sp.add_argument("--sweep", help="p0:p1:steps, CSV output")
    _add_table_args(sp)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("threshold", help="smallest p where a bound exceeds 1")
    sp.add_argument("--level", required=True)
    sp.add_argument("--tol", type=float, default=1e-9)
    _add_table_args(sp)
    sp.set_defaults(func=cmd_threshold)

    sp = sub.add_parser("gamma-tail", help="P(gamma_1 <= depth)")
    sp.add_argument("--p", type=_prob, required=True)
    _add_table_args(sp)
    sp.set_defaults(func=cmd_gamma_tail)

    sp = sub.add_parser("heuristic", help="density-balance estimate of the threshold")
    sp.add_argument("--mode", choices=("fraction", "literal"), default="fraction")
    sp.set_defaults(func=cmd_heuristic)

    sp = sub.add_parser("mc", help="Monte-Carlo jobs")
    sp.add_argument("kind", choices=("check", "survival", "offspring"))
    sp.add_argument("--p", type=_closed_prob, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--reps", type=int, default=10_000)
    sp.add_argument("--n", type=int, default=4, help="check: A_n index")
    sp.add_argument("--window", type=int, default=1000, help="survival: window length")
    sp.add_argument("--horizon", type=int, default=10 ** 5, help="offspring: revelation horizon")
    _add_table_args(sp)
    sp.set_defaults(func=cmd_mc)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _log(f"ballistic: error: {exc}")
        return EXIT_USAGE
    except (TableFileError, OSError, NoCrossing, MultipleCrossings, EnumerationError) as exc:
        _log(f"ballistic: error: {exc}")
        return EXIT_DATA
    except BoundError as exc:
        _log(f"ballistic: invariant violated: {exc}")
        return EXIT_INVARIANT
    except ValueError as exc:
        _log(f"ballistic: error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
