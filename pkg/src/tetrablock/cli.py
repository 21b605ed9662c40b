"""
Command-line front end.

    tetrablock verify --n 64
    tetrablock cost --n 256,512 --k 128 --rho 4
    tetrablock simulate warps --n 256 --layout blocked --k 128
    tetrablock simulate divergence --n 64,128,256,512
    tetrablock simulate occupancy --n 1024 --rho 8
    tetrablock simulate dispatch --n 8 --rho 4
    tetrablock bench maps --n 1024 --rho 8 --reps 9
    tetrablock bench layout --n 256 --rho 4
    tetrablock report --out results/

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource error.
Errors are reported on stderr as one line, ``tetrablock: error: <kind>: <message>``.
"""

import argparse
import os
import sys
from pathlib import Path

from . import tables
from .bench import DEFAULT_MIN_EVALS, DEFAULT_REPS, bench_layout_sweep, bench_maps
from .costmodel import DEFAULT_ALPHA, DEFAULT_ELEMENT_SIZE, DEFAULT_K, DEFAULT_OMEGA, DEFAULT_RHO, WarpModel
from .errors import (
    DomainError,
    InvalidParameterError,
    ResourceError,
    TimerResolutionError,
    VerificationError,
)
from .report import OUTPUT_DIR_ENV, write_rows
from .simulator import LAYOUTS, PATTERNS, STRATEGIES, WARP_SCOPES, simulate_occupancy
from .verify import EXHAUSTIVE_LIMIT, verify

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def int_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _output_args(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", help="write here instead of stdout")


def _model_args(p):
    p.add_argument("--omega", type=int, default=DEFAULT_OMEGA, help="threads per warp")
    p.add_argument("--b", type=int, default=DEFAULT_ELEMENT_SIZE, help="bytes per element")
    p.add_argument("--k", type=int, default=DEFAULT_K, help="alignment / transaction bytes")


def build_parser():
    parser = _Parser(prog="tetrablock", description="Block-space maps and layouts for tetrahedral domains.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check the rank maps for exactness")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--random", type=int, metavar="SAMPLES", help="random ranks instead of all of them")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive-limit", type=int, default=EXHAUSTIVE_LIMIT)
    _output_args(p)

    p = sub.add_parser("cost", help="closed-form cost table")
    p.add_argument("--n", type=int_list, default=[256])
    p.add_argument("--k", type=int_list, default=[DEFAULT_K])
    p.add_argument("--rho", type=int_list, default=[DEFAULT_RHO])
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--tau", type=float, default=1.0)
    _output_args(p)

    p = sub.add_parser("simulate", help="exact transaction / occupancy / dispatch counts")
    ssub = p.add_subparsers(dest="what", required=True)

    q = ssub.add_parser("warps")
    q.add_argument("--n", type=int_list, required=True)
    q.add_argument("--layout", choices=LAYOUTS, default="linear")
    q.add_argument("--pattern", choices=PATTERNS, default="sweep-once")
    q.add_argument("--rho", type=int, default=DEFAULT_RHO)
    q.add_argument("--warp-scope", choices=WARP_SCOPES, default="row")
    _model_args(q)
    _output_args(q)

    q = ssub.add_parser("divergence", help="closed-form vs simulated aligned fraction, linear layout")
    q.add_argument("--n", type=int_list, default=[64, 128, 256, 512])
    _model_args(q)
    _output_args(q)

    q = ssub.add_parser("occupancy")
    q.add_argument("--n", type=int_list, required=True)
    q.add_argument("--rho", type=int_list, default=[DEFAULT_RHO])
    q.add_argument("--strategy", choices=STRATEGIES + ("both",), default="both")
    _output_args(q)

    q = ssub.add_parser("dispatch")
    q.add_argument("--n", type=int_list, required=True)
    q.add_argument("--rho", type=int_list, default=[DEFAULT_RHO])
    _output_args(q)

    p = sub.add_parser("bench", help="host timing of maps and layouts")
    bsub = p.add_subparsers(dest="what", required=True)
    q = bsub.add_parser("maps")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--rho", type=int, default=DEFAULT_RHO)
    q.add_argument("--reps", type=int, default=DEFAULT_REPS)
    q.add_argument("--min-evals", type=int, default=DEFAULT_MIN_EVALS)
    _output_args(q)
    q = bsub.add_parser("layout")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--rho", type=int, default=DEFAULT_RHO)
    q.add_argument("--b", type=int, default=DEFAULT_ELEMENT_SIZE)
    q.add_argument("--reps", type=int, default=DEFAULT_REPS)
    _output_args(q)

    p = sub.add_parser("report", help="write the standard sweeps as CSV files")
    p.add_argument("--out", help=f"output directory (default ${OUTPUT_DIR_ENV} or ./tetrablock-report)")
    p.add_argument("--bench", action="store_true", help="also run the map benchmark")
    return parser


def _model(args):
    return WarpModel(omega=args.omega, b=args.b, k=args.k)


def _emit(args, rows, out, fields=None):
    write_rows(rows, args.format, args.output, out, fields)


def cmd_verify(args, out, err):
    if args.n < 0:
        raise InvalidParameterError(f"n must be >= 0, got {args.n}")
    rep = verify(args.n, args.random, args.seed, args.exhaustive_limit)
    _emit(args, [rep], out)
    if not rep.ok:
        raise VerificationError(
            f"{rep.mismatches} of {rep.ranks_checked} ranks wrong; first offending rank {rep.first_bad_rank}",
            rep.first_bad_rank,
        )
    err.write(f"{rep.ranks_checked} ranks checked ({rep.mode})\n")
    return EXIT_OK


def cmd_cost(args, out, err):
    rows = tables.cost_rows(args.n, args.k, args.rho, args.alpha, args.beta, args.tau)
    _emit(args, rows, out, tables.COST_FIELDS)
    return EXIT_OK


def cmd_simulate(args, out, err):
    if args.what == "warps":
        rows = tables.warp_rows(args.n, args.layout, _model(args), args.pattern, args.rho, args.warp_scope)
    elif args.what == "divergence":
        rows = tables.divergence_rows(args.n, args.k, args.b, args.omega)
    elif args.what == "occupancy":
        if args.strategy == "both":
            rows = tables.occupancy_rows(args.n, args.rho)
        else:
            rows = [simulate_occupancy(n, rho, args.strategy) for n in args.n for rho in args.rho]
    else:
        rows = tables.dispatch_rows(args.n, args.rho)
        for r in rows:
            err.write(f"n={r['n']} rho={r['rho']}: block sets equal: {str(r['sets_equal']).lower()}\n")
    _emit(args, rows, out)
    return EXIT_OK


def cmd_bench(args, out, err):
    if args.what == "maps":
        rep = bench_maps(args.n, args.rho, args.reps, args.min_evals)
    else:
        rep = bench_layout_sweep(args.n, args.rho, WarpModel(b=args.b), args.reps)
    _emit(args, [rep], out)
    return EXIT_OK


def cmd_report(args, out, err):
    outdir = Path(args.out or os.environ.get(OUTPUT_DIR_ENV) or "tetrablock-report")
    outdir.mkdir(parents=True, exist_ok=True)
    ns = [2**e for e in range(4, 15)]
    sweeps = {
        "cost": tables.cost_rows(ns, [32, 64, 128], [DEFAULT_RHO]),
        "divergence": tables.divergence_rows(),
        "occupancy": tables.occupancy_rows(ns, [4, 8, 16]),
        "padding": tables.padding_rows(ns, [2, 4, 8]),
    }
    if args.bench:
        sweeps["bench_maps"] = [bench_maps(1024, 8)]
    for name, rows in sweeps.items():
        err.write(f"wrote {write_rows(rows, 'csv', outdir / f'{name}.csv')}\n")
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "cost": cmd_cost,
    "simulate": cmd_simulate,
    "bench": cmd_bench,
    "report": cmd_report,
}


def _fail(err, code, kind, exc):
    msg = " ".join(str(exc).split()) or type(exc).__name__
    err.write(f"tetrablock: error: {kind}: {msg}\n")
    return code


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out, err)
    except UsageError as e:
        return _fail(err, EXIT_USAGE, "usage", e)
    except VerificationError as e:
        return _fail(err, EXIT_VERIFY, "verification", e)
    except (InvalidParameterError, DomainError, OverflowError, TimerResolutionError) as e:
        return _fail(err, EXIT_USAGE, "invalid-parameter", e)
    except (ResourceError, MemoryError) as e:
        return _fail(err, EXIT_RESOURCE, "resource", e)
    except OSError as e:
        return _fail(err, EXIT_RESOURCE, "io", e)


if __name__ == "__main__":
    sys.exit(main())
