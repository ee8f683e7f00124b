"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 domain/range error,
4 convergence error, 5 verification failure.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import math
import os
import sys

from . import family as fam_mod
from .errors import (
    ConvergenceError,
    DomainError,
    InputError,
    MeanOverflowError,
    QAMeanError,
    WitnessNotFoundError,
)
from .generator import Generator
from .means import mean, read_sample_csv
from .neutral import from_coeffs, root_coeffs
from .solver import solve, sweep
from .verify import SUITES, log_exp_family, power_mean_family, run_suite

EXIT_OK, EXIT_INPUT, EXIT_DOMAIN, EXIT_CONVERGENCE, EXIT_VERIFY = 0, 2, 3, 4, 5

PRESET_FAMILIES = {"power": power_mean_family, "log-exp": log_exp_family}


def fmt(x) -> str:
    if isinstance(x, fam_mod.Extreme):
        return x.value
    return format(float(x), ".12g")


def _round_floats(obj):
    if isinstance(obj, float):
        return float(fmt(obj)) if math.isfinite(obj) else str(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def write_sweep_csv(rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["beta", "mean"])
    for beta, m in rows:
        writer.writerow([fmt(beta), fmt(m)])
    return out.getvalue()


def read_sweep_csv(text: str) -> list:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != ["beta", "mean"]:
        raise InputError(f"sweep CSV needs header 'beta,mean', got {reader.fieldnames}")
    rows = []
    for row in reader:
        m = row["mean"]
        rows.append((float(row["beta"]), fam_mod.Extreme(m) if m in ("min", "max") else float(m)))
    return rows


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _generator(args) -> Generator | None:
    if args.generator_file:
        return Generator.from_json(_read_text(args.generator_file))
    if args.generator:
        return Generator.from_json(args.generator)
    return None


def _family(args) -> fam_mod.ScaleFamily:
    if args.family_file:
        try:
            data = json.loads(_read_text(args.family_file))
        except json.JSONDecodeError as exc:
            raise InputError(f"family file is not valid JSON: {exc}") from None
        return fam_mod.ScaleFamily.from_json(data)
    if args.family:
        return PRESET_FAMILIES[args.family]()
    g = _generator(args)
    if g is None or args.a is None or args.b is None:
        raise InputError("give --family, --family-file, or --generator with --a and --b")
    return fam_mod.select_branch(fam_mod.build(g, from_coeffs(g, args.a, args.b)), args.branch)


def _add_generator_args(p):
    p.add_argument("--generator", help="generator expression as inline JSON")
    p.add_argument("--generator-file", help="file holding the generator JSON")


def _add_family_args(p):
    _add_generator_args(p)
    p.add_argument("--family", choices=sorted(PRESET_FAMILIES), help="preset family")
    p.add_argument("--family-file", help="family JSON {case, generator, a, b, branch}")
    p.add_argument("--a", type=float, help="neutral map slope")
    p.add_argument("--b", type=float, help="neutral map offset")
    p.add_argument("--branch", choices=[b.value for b in fam_mod.Branch])
    p.add_argument("--sample", required=True, help="CSV with header value,weight ('-' for stdin)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qamean", description="Quasi-arithmetic means, neutral maps and scales.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mean", help="mean of a sample under a generator")
    _add_generator_args(p)
    p.add_argument("--sample", required=True)

    p = sub.add_parser("root", help="coefficients of the k-th f-root of (a, b)")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--k", type=int, default=3)

    p = sub.add_parser("solve", help="beta whose family mean hits a target")
    _add_family_args(p)
    p.add_argument("--target", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-9)

    p = sub.add_parser("family-sweep", help="CSV of (beta, mean) over a grid")
    _add_family_args(p)
    p.add_argument("--betas", help="comma-separated beta values")
    p.add_argument("--beta-min", type=float, default=-5.0)
    p.add_argument("--beta-max", type=float, default=5.0)
    p.add_argument("--beta-count", type=int, default=11)

    p = sub.add_parser("verify", help="run verification suites and print a JSON report")
    p.add_argument("--suite", choices=[*sorted(SUITES), "all"], default="all")
    p.add_argument("--seed", type=int, default=int(os.environ.get("QAM_SEED", 42)))
    p.add_argument("--trials", type=int, default=200)
    return parser


def _betas(args) -> list:
    if args.betas is not None:
        text = args.betas.strip()
        try:
            return [float(t) for t in text.split(",")] if text else []
        except ValueError:
            raise InputError(f"cannot parse --betas {args.betas!r}") from None
    if args.beta_count < 1:
        raise InputError("--beta-count must be positive")
    if args.beta_count == 1:
        return [args.beta_min]
    step = (args.beta_max - args.beta_min) / (args.beta_count - 1)
    return [args.beta_min + j * step for j in range(args.beta_count)]


def _dispatch(args, out) -> int:
    if args.command == "mean":
        g = _generator(args)
        if g is None:
            raise InputError("mean needs --generator or --generator-file")
        out.write(fmt(mean(g, read_sample_csv(_read_text(args.sample)))) + "\n")
    elif args.command == "root":
        p, q = root_coeffs(args.a, args.b, args.k)
        out.write(f"p={fmt(p)} q={fmt(q)}\n")
    elif args.command == "solve":
        fam = _family(args)
        s = read_sample_csv(_read_text(args.sample))
        beta = solve(fam, s, args.target, args.tol)
        out.write(f"beta={fmt(beta)} mean={fmt(fam_mod.mean_at(fam, beta, s))}\n")
    elif args.command == "family-sweep":
        fam = _family(args)
        s = read_sample_csv(_read_text(args.sample))
        out.write(write_sweep_csv(sweep(fam, s, _betas(args))))
    elif args.command == "verify":
        if args.trials < 1:
            raise InputError("--trials must be positive")
        reports = run_suite(args.suite, args.trials, args.seed)
        ok = all(r.passed for r in reports)
        doc = {
            "passed": ok,
            "seed": args.seed,
            "trials": args.trials,
            "reports": [_round_floats(r.to_json()) for r in reports],
        }
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return EXIT_OK if ok else EXIT_VERIFY
    return EXIT_OK


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(err), contextlib.redirect_stdout(out):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return _dispatch(args, out)
    except QAMeanError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return exit_code(exc)


def exit_code(exc: QAMeanError) -> int:
    if isinstance(exc, (DomainError, MeanOverflowError)):
        return EXIT_DOMAIN
    if isinstance(exc, ConvergenceError):
        return EXIT_CONVERGENCE
    if isinstance(exc, WitnessNotFoundError):
        return EXIT_VERIFY
    return EXIT_INPUT


def main():
    sys.exit(run())
