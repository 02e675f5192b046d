"""Command-line interface: ``heavytail {fit,nu,simulate,bench}``.

Exit codes: 0 success, 1 internal error, 2 input or parse error,
3 numerical failure.
"""

import argparse
import json
import logging
import math
import os
import sys

import numpy as np

from . import bench
from .errors import InputError, NumericalError
from .io import jsonable, load_csv, load_spd_csv, write_csv
from .sampling import ExperimentDesign, sample_mvt
from .tail import METHODS, OPP, TWE, estimate_nu
from .twe import reciprocal_weight_scales, shrink_scatter, twe_scatter
from .tyler import fit_tyler

SCHEMA_VERSION = 1

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_NUMERICAL = 0, 1, 2, 3


def _float_list(s):
    return [math.inf if v.strip().lower() in ("inf", "infinity") else float(v) for v in s.split(",")]


def _int_list(s):
    return [int(v) for v in s.split(",")]


def _methods(s):
    out = [m.strip().lower() for m in s.split(",") if m.strip()]
    bad = sorted(set(out) - set(METHODS))
    if bad:
        raise argparse.ArgumentTypeError(f"unknown method(s) {bad}; choose from {list(METHODS)}")
    return out


def _seed(s):
    v = int(s)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _dump_json(obj):
    return json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n"


def cmd_fit(args):
    X = load_csv(args.input)
    fit = fit_tyler(X, tol=args.tol, max_iter=args.max_iter)
    est = twe_scatter(fit)
    if args.format == "csv":
        scatter = est.scatter if args.beta is None else shrink_scatter(est, args.beta)
        _emit_matrix(scatter.entries, args.output)
        return
    v = est.normalized_weights
    out = {
        "schema_version": SCHEMA_VERSION,
        "n": fit.n,
        "p": fit.p,
        "shape": fit.shape.entries,
        "scale": est.scale,
        "scatter": est.scatter.entries,
        "normalized_weights": {
            "min": float(v.min()), "max": float(v.max()),
            "mean": float(v.mean()), "median": float(np.median(v)),
        },
        "reciprocal_weight_scales": reciprocal_weight_scales(fit),
        "iterations": fit.iterations,
        "residual": fit.residual,
    }
    if args.beta is not None:
        out["beta"] = args.beta
        out["shrunk_scatter"] = shrink_scatter(est, args.beta).entries
    _emit(_dump_json(out), args.output)


def _emit_matrix(M, path):
    if path in (None, "-"):
        for row in np.asarray(M).tolist():
            sys.stdout.write(",".join(repr(x) for x in row) + "\n")
    else:
        write_csv(path, M)


def _estimate_record(est):
    return {
        "method": est.method,
        "nu": est.nu,
        "theta_hat": est.theta_hat,
        "scale": est.scale,
        "iterations": est.iterations,
        "converged": est.converged,
        "diagnostics": est.diagnostics,
    }


def cmd_nu(args):
    X = load_csv(args.input)
    opts = {TWE: {"tol": args.tol, "max_iter": args.max_iter}}
    ests = [estimate_nu(X, m, **opts.get(m, {})) for m in sorted(set(args.methods))]
    out = {"schema_version": SCHEMA_VERSION, "n": X.shape[0], "p": X.shape[1],
           "estimates": [_estimate_record(e) for e in ests]}
    _emit(_dump_json(out), args.output)


def _design(args, n, nu):
    return ExperimentDesign(p=args.p, n=n, nu=nu, rho=args.rho, eta=args.eta,
                            replications=args.reps, seed=args.seed)


def cmd_simulate(args):
    if len(args.n) != 1 or len(args.nu) != 1:
        raise InputError("simulate takes a single --n and a single --nu")
    design = _design(args, args.n[0], args.nu[0])
    sigma = load_spd_csv(args.scatter_file) if args.scatter_file else None
    X = sample_mvt(design, sigma, replication=args.replication)
    _emit_matrix(X, args.output)


def _threads(args):
    if args.threads is not None:
        return args.threads
    env = os.environ.get("HEAVYTAIL_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError(f"HEAVYTAIL_THREADS={env!r} is not an integer") from None
    return 1


def cmd_bench(args):
    sigma = load_spd_csv(args.scatter_file) if args.scatter_file else None
    base = _design(args, args.n[0], args.nu[0])
    options = {TWE: {"tol": args.tol, "max_iter": args.max_iter}}
    reports = bench.run_grid(base, args.n, args.nu, args.methods, sigma, _threads(args), options)
    for r in reports:
        logging.getLogger(__name__).info("n=%d nu=%s done in %.1fs", r.design.n, r.design.nu, r.wall_time)
    if args.format == "json":
        text = _dump_json({"schema_version": bench.SCHEMA_VERSION,
                           "cells": list(bench.summary_records(reports))})
    else:
        text = bench.summary_csv(reports)
    _emit(text, args.output)
    if args.raw:
        _emit(bench.raw_csv(reports), args.raw)


def build_parser():
    parser = argparse.ArgumentParser(prog="heavytail", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_input):
        if need_input:
            p.add_argument("--input", required=True, metavar="PATH")
        p.add_argument("--output", default="-", metavar="PATH")
        p.add_argument("--tol", type=float, default=1e-10, help="Tyler solver tolerance")
        p.add_argument("--max-iter", type=int, default=500, help="Tyler solver iteration cap")

    def design(p):
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--n", type=_int_list, required=True, help="comma-separated sample sizes")
        p.add_argument("--nu", type=_float_list, default=[math.inf], help="comma-separated d.o.f. (inf allowed)")
        p.add_argument("--rho", type=float, default=0.6)
        p.add_argument("--eta", type=float, default=1.0)
        p.add_argument("--reps", type=int, default=500)
        p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("--scatter-file", metavar="PATH", help="CSV of a p x p SPD scatter matrix")

    p = sub.add_parser("fit", help="Tyler shape, TWE scale and scatter of a data file")
    common(p, True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--beta", type=float, default=None, help="shrinkage weight in [0, 1]")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("nu", help="degrees-of-freedom estimates of a data file")
    common(p, True)
    p.add_argument("--format", choices=("json",), default="json")
    p.add_argument("--methods", type=_methods, default=list(METHODS))
    p.set_defaults(func=cmd_nu)

    p = sub.add_parser("simulate", help="write one seeded t sample as CSV")
    common(p, False)
    design(p)
    p.add_argument("--format", choices=("csv",), default="csv")
    p.add_argument("--replication", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="Monte-Carlo grid over --n and --nu")
    common(p, False)
    design(p)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--methods", type=_methods, default=list(METHODS))
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--raw", metavar="PATH", help="also write per-replication estimates as CSV")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        args.func(args)
    except (InputError, OSError) as exc:
        print(f"heavytail: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"heavytail: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except Exception as exc:  # noqa: BLE001
        print(f"heavytail: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
