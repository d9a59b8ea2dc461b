"""
Command-line front end.

    python -m pathwalk spectrum    --n 1 --p 0.5
    python -m pathwalk timeavg     --n 4 --p 0.3 --start 0 --method spectral
    python -m pathwalk limit-check --n 4000 --p 0.3 --start 0 --grid 99
    python -m pathwalk stationary  --n 3 --p 0.5

CSV output: one header row, data rows, then ``# key=value`` comment lines.
JSON output: a single document with ``config``, ``rows`` and ``diagnostics``.
Exit codes: 0 success, 2 usage or validation error, 3 numerical
consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .core import ConsistencyError, WalkParameters, initial_spec
from .evolution import DENSE_CAP
from .jacobi import jacobi_spectrum, stationary_measure
from .limits import LimitMixture, c_coefficient, kolmogorov_distance, scaled_cdf
from .spectrum import full_eigensystem
from .timeavg import METHODS, time_averaged

EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class UsageError(ValueError):
    pass


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.17g" % float(x)


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    return x


def render(fmt: str, config: dict, header: list[str], rows: list[tuple], diagnostics: dict) -> str:
    if fmt == "json":
        doc = {
            "config": config,
            "rows": [{h: _jsonable(v) for h, v in zip(header, row)} for row in rows],
            "diagnostics": {k: _jsonable(v) for k, v in diagnostics.items()},
        }
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    if diagnostics:
        buf.write("# " + " ".join(f"{k}={_fmt(v)}" for k, v in diagnostics.items()) + "\n")
    return buf.getvalue()


def _params(args) -> WalkParameters:
    try:
        return WalkParameters(args.n, args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _spec(args, params):
    try:
        return initial_spec(params, args.start, args.chirality)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_spectrum(args):
    params = _params(args)
    if params.n > DENSE_CAP:
        raise UsageError(f"spectrum needs n <= {DENSE_CAP}")
    spec = full_eigensystem(params)
    rows = [
        (int(k), mu.real, mu.imag, float(np.angle(mu)), res)
        for k, mu, res in zip(spec.labels, spec.eigenphases, spec.residuals)
    ]
    diag = {
        "max_residual": spec.diagnostics["max_residual"],
        "gram_deviation": spec.diagnostics["gram_deviation"],
    }
    return ["k", "re_mu", "im_mu", "phi", "residual"], rows, diag


def cmd_timeavg(args):
    params = _params(args)
    spec = _spec(args, params)
    if args.method == "cesaro" and args.steps is None:
        raise UsageError("--method cesaro needs --steps")
    if args.steps is not None and args.steps < 1:
        raise UsageError("--steps must be positive")
    try:
        pbar = time_averaged(params, spec, args.method, args.steps)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = [(j, m) for j, m in enumerate(pbar.masses)]
    diag = {"est_err": pbar.est_err} if pbar.method == "cesaro" else {}
    return ["j", "pbar"], rows, diag


def cmd_limit_check(args):
    params = _params(args)
    spec = _spec(args, params)
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    if args.method == "cesaro" and args.steps is None:
        raise UsageError("--method cesaro needs --steps")
    try:
        pbar = time_averaged(params, spec, args.method, args.steps)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    mixture = LimitMixture(c_coefficient(params, spec.start_vertex))
    a = np.arange(1, args.grid) / args.grid
    emp = scaled_cdf(pbar, a)
    lim = mixture.cdf(a)
    rows = list(zip(a, emp, lim))
    diag = {"ks": kolmogorov_distance(pbar, mixture, args.grid), "c": mixture.c}
    return ["a", "F_n", "F_limit"], rows, diag


def cmd_stationary(args):
    params = _params(args)
    pi = stationary_measure(params)
    v0sq = jacobi_spectrum(params).eigenvectors[:, 0] ** 2
    rows = list(zip(range(params.n + 2), pi, v0sq))
    return ["i", "pi", "v0_sq"], rows, {"max_abs_diff": float(np.max(np.abs(pi - v0sq)))}


COMMANDS = {
    "spectrum": cmd_spectrum,
    "timeavg": cmd_timeavg,
    "limit-check": cmd_limit_check,
    "stationary": cmd_stationary,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, required=True, help="number of interior vertices")
    common.add_argument("--p", type=float, required=True, help="right-move weight, 0 < p < 1")
    common.add_argument("--start", type=int, default=0, help="start vertex (default 0)")
    common.add_argument("--chirality", choices=["L", "R", "mixed"], default="mixed")
    common.add_argument("--method", choices=list(METHODS), default="spectral")
    common.add_argument("--steps", type=int, default=None, help="T for the cesaro method")
    common.add_argument("--grid", type=int, default=99, help="grid size for limit-check")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", default=None, help="output path (default stdout)")

    parser = argparse.ArgumentParser(prog="pathwalk", description=__doc__.splitlines()[1])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = dict(vars(args))
    try:
        header, rows, diag = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"pathwalk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print(f"pathwalk: numerical consistency failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    text = render(args.format, config, header, rows, diag)
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
