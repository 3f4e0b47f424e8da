"""Command-line interface: ``absentminded {dist,moments,verify,limits,simulate,bench}``.

Exact values are printed as ``num/den`` strings.  ``--format json`` emits an
envelope ``{command, params, results, checks}``; floats appear as decimal
strings next to a ``precision_bits`` field.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 guard or
resource error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction

import mpmath

from . import verify as verify_mod
from .asymptotics import DEFAULT_LIMIT_SAMPLES, limit_ratio
from .core import format_rational
from .distribution import generating_polynomial
from .errors import CrossCheckError, DomainError, PrecisionError, SizeError
from .moments import DEFAULT_PRECISION, EXACT_MAX_N, central_moment, moment_pipeline, stirling_transform
from .simulate import SimConfig, chi_square, simulate, z_score
from .symbolic import symbolic_exponential_moments

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3
Z_LIMIT = 5.0  # standard errors
CHI2_FLAG = 1e-6


def parse_count(text: str) -> int:
    """Integer that also accepts scientific notation such as ``1e6``."""
    try:
        return int(text)
    except ValueError:
        pass
    try:
        v = Fraction(text) if "e" not in text.lower() else Fraction(float(text)).limit_denominator(1)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v.denominator != 1:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(v)


def parse_samples(text: str) -> list[int]:
    return [parse_count(t) for t in text.split(",") if t.strip()]


def _fmt_float(x, digits: int = 20) -> str:
    return mpmath.nstr(x, digits)


def emit_json(envelope: dict) -> str:
    return json.dumps(envelope, indent=2, ensure_ascii=False) + "\n"


def envelope(command: str, params: dict, results, checks=None) -> dict:
    return {"command": command, "params": params, "results": results, "checks": checks or []}


# --- subcommands ------------------------------------------------------------


def cmd_dist(args):
    gp = generating_polynomial(args.n, args.k)
    probs = gp.probabilities()
    params = {"n": args.n, "k": args.k}
    if args.format == "json":
        return emit_json(envelope("dist", params, {"p": [format_rational(p) for p in probs]})), EXIT_OK
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "p"])
        for r, p in enumerate(probs):
            w.writerow([r, format_rational(p)])
        return buf.getvalue(), EXIT_OK
    lines = [f"# wrong-seat distribution, n={args.n}, k={args.k}"]
    lines += [f"p[{r}] = {format_rational(p)}" for r, p in enumerate(probs)]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_moments(args):
    try:
        table = moment_pipeline(args.n, args.k, args.lmax)
    except SizeError as exc:
        raise SizeError(f"{exc} (from the command line, try `limits`)") from None
    seq = {"exp": table.exp_moments, "raw": table.raw_moments, "central": table.central_moments}[args.kind]
    params = {"n": args.n, "k": args.k, "lmax": args.lmax, "kind": args.kind}
    checks = [{"name": "raw moments: stirling path == theta path", "status": "pass"}]
    if args.format == "json":
        res = {args.kind: [format_rational(v) for v in seq]}
        return emit_json(envelope("moments", params, res, checks)), EXIT_OK
    sym = {"exp": "Mbar", "raw": "M", "central": "m"}[args.kind]
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["l", sym])
        for l, v in enumerate(seq):
            w.writerow([l, format_rational(v)])
        return buf.getvalue(), EXIT_OK
    lines = [f"# {args.kind} moments, n={args.n}, k={args.k}"]
    lines += [f"{sym}_{l} = {format_rational(v)}" for l, v in enumerate(seq)]
    lines.append("# check: stirling path == theta path: pass")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_verify(args):
    report = verify_mod.run_suite(args.suite, n_max=args.n_max, k_max=args.k_max, workers=args.workers)
    params = {"suite": args.suite, "n_max": report.n_max, "k_max": report.k_max}
    code = EXIT_OK if report.passed else EXIT_FAIL
    if args.format == "json":
        res = {"status": "PASS" if report.passed else "FAIL", "cells": report.cells}
        return emit_json(envelope("verify", params, res, [c.to_json() for c in report.checks])), code
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}  ({c.count} cases)" + (f"  first counterexample: {c.counterexample}" if c.counterexample else "") for c in report.checks]
    lines.append(f"{'PASS' if report.passed else 'FAIL'}, {report.cells} cells")
    return "\n".join(lines) + "\n", code


def cmd_limits(args):
    samples = args.samples or list(DEFAULT_LIMIT_SAMPLES)
    est = limit_ratio(args.k, args.l, samples, args.precision)
    if args.l % 2 == 0:
        ok = est.relative_error <= mpmath.mpf("0.01")
        rule = "extrapolated limit within 1% of (l-1)!!"
    else:
        ok = est.odd_ratios_decreasing()
        rule = "odd-order ratios decrease toward 0"
    code = EXIT_OK if ok else EXIT_FAIL
    checks = [{"name": rule, "status": "pass" if ok else "fail"}]
    params = {"k": args.k, "l": args.l, "samples": samples, "precision_bits": args.precision}
    if args.format == "json":
        return emit_json(envelope("limits", params, est.to_json(), checks)), code
    lines = [f"# m_{args.l} / m_2^({args.l}/2), k={args.k}, {args.precision}-bit"]
    lines += [f"n = {n:>12d}   ratio = {_fmt_float(v, 15)}" for n, v in est.samples]
    lines.append(f"extrapolated (1/log n -> 0): {_fmt_float(est.extrapolated_limit, 10)}")
    lines.append(f"claimed limit: {est.claimed_limit}")
    lines.append(f"{'PASS' if ok else 'FAIL'}: {rule}")
    return "\n".join(lines) + "\n", code


def cmd_simulate(args):
    cfg = SimConfig(args.n, args.k, args.trials, args.seed, args.workers)
    res = simulate(cfg, l_max=max(2, args.lmax))
    checks = []
    if args.n <= EXACT_MAX_N:
        table = moment_pipeline(args.n, args.k, 2)
        z_mean = z_score(res.mean, table.raw_moments[1], res.raw_moment_se[1])
        z_var = z_score(res.variance, table.central_moments[2], res.variance_se)
        _, dof, pval = chi_square(res.histogram, generating_polynomial(args.n, args.k).probabilities())
        checks = [
            {"name": "mean z-score", "value": f"{z_mean:.4f}", "status": _status(abs(z_mean) <= Z_LIMIT)},
            {"name": "variance z-score", "value": f"{z_var:.4f}", "status": _status(abs(z_var) <= Z_LIMIT)},
            {"name": "chi-square p-value", "value": f"{pval:.6g}", "dof": dof, "status": _status(pval > CHI2_FLAG)},
        ]
    code = EXIT_OK if all(c["status"] == "pass" for c in checks) else EXIT_FAIL
    params = {"n": args.n, "k": args.k, "trials": args.trials, "seed": args.seed, "workers": args.workers}
    results = {
        "histogram": list(res.histogram),
        "raw_moments": [format_rational(v) for v in res.raw_moments],
        "raw_moment_se": [f"{v:.17g}" for v in res.raw_moment_se],
        "variance": format_rational(res.variance),
        "variance_se": f"{res.variance_se:.17g}",
        "precision_bits": 53,
    }
    if args.format == "json":
        return emit_json(envelope("simulate", params, results, checks)), code
    lines = [f"# simulation n={args.n} k={args.k} trials={args.trials} seed={args.seed} workers={args.workers}"]
    lines.append("histogram: " + " ".join(str(h) for h in res.histogram))
    lines.append(f"mean = {float(res.mean):.8f} +- {res.raw_moment_se[1]:.2e}")
    lines.append(f"variance = {float(res.variance):.8f} +- {res.variance_se:.2e}")
    lines += [f"{c['status'].upper():5s} {c['name']}: {c['value']}" for c in checks]
    return "\n".join(lines) + "\n", code


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def bench_rows(k: int, l_max: int):
    """Per-order timings of the three pipeline steps on the symbolic engine."""
    rows = []
    for l in range(1, l_max + 1):
        t0 = time.perf_counter()
        exp_m = symbolic_exponential_moments(k, l)
        t1 = time.perf_counter()
        raw = stirling_transform(exp_m)
        t2 = time.perf_counter()
        m_l = central_moment(raw, l)
        t3 = time.perf_counter()
        rows.append(
            {
                "l": l,
                "step1_s": t1 - t0,
                "step2_s": t2 - t1,
                "step3_s": t3 - t2,
                "total_s": t3 - t0,
                "size_bytes": len(m_l.serialize().encode()),
            }
        )
    return rows


def cmd_bench(args):
    rows = bench_rows(args.k, args.lmax)
    params = {"lmax": args.lmax, "k": args.k}
    if args.format == "json":
        res = [{key: (f"{v:.6f}" if key.endswith("_s") else v) for key, v in r.items()} for r in rows]
        return emit_json(envelope("bench", params, res)), EXIT_OK
    head = f"{'l':>3} | {'step 1':>10} | {'step 2':>10} | {'step 3':>10} | {'total':>10} | {'size of m_l':>12}"
    lines = [f"# symbolic moments at k={args.k}; times are machine-local", head, "-" * len(head)]
    for r in rows:
        lines.append(
            f"{r['l']:>3} | {r['step1_s']:>9.4f}s | {r['step2_s']:>9.4f}s | {r['step3_s']:>9.4f}s"
            f" | {r['total_s']:>9.4f}s | {r['size_bytes']:>10d} B"
        )
    return "\n".join(lines) + "\n", EXIT_OK


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="absentminded", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="TOML or JSON file whose keys mirror the flags")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help=argparse.SUPPRESS)
        sp.add_argument("--format", choices=("plain", "json", "csv"), default="plain")
        sp.add_argument("--workers", type=int, default=os.cpu_count() or 1)
        return sp

    sp = common(sub.add_parser("dist", help="exact distribution p_{n,k,r}"))
    sp.add_argument("--n", type=parse_count, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(func=cmd_dist)

    sp = common(sub.add_parser("moments", help="exact moment table"))
    sp.add_argument("--n", type=parse_count, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--lmax", type=int, default=4)
    sp.add_argument("--kind", choices=("exp", "raw", "central"), default="central")
    sp.set_defaults(func=cmd_moments)

    sp = common(sub.add_parser("verify", help="run an invariant suite"))
    sp.add_argument("--suite", choices=verify_mod.SUITES, required=True)
    sp.add_argument("--n-max", dest="n_max", type=int, default=None)
    sp.add_argument("--k-max", dest="k_max", type=int, default=None)
    sp.set_defaults(func=cmd_verify)

    sp = common(sub.add_parser("limits", help="normalized central moment limits"))
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--samples", type=parse_samples, default=None, help="comma list, e.g. 1e4,1e6,1e8")
    sp.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    sp.set_defaults(func=cmd_limits)

    sp = common(sub.add_parser("simulate", help="Monte Carlo validation"))
    sp.add_argument("--n", type=parse_count, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--trials", type=parse_count, default=10**5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--lmax", type=int, default=2)
    sp.set_defaults(func=cmd_simulate)

    sp = common(sub.add_parser("bench", help="per-step timings of the symbolic pipeline"))
    sp.add_argument("--lmax", type=int, default=6)
    sp.add_argument("--k", type=int, default=2)
    sp.set_defaults(func=cmd_bench)
    return p


def _load_config(path: str) -> dict:
    with open(path, "rb") as fh:
        data = fh.read()
    if path.endswith(".json"):
        cfg = json.loads(data)
    else:
        try:
            import tomllib
        except ImportError:  # python < 3.11
            import tomli as tomllib
        cfg = tomllib.loads(data.decode())
    return {key.replace("-", "_"): v for key, v in cfg.items()}


def _apply_config(parser, cfg: dict) -> None:
    # file values become defaults, so explicit flags still win
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for sp in sub_action.choices.values():
        known = {a.dest for a in sp._actions}
        sp.set_defaults(**{key: v for key, v in cfg.items() if key in known})
        for a in sp._actions:
            if a.dest in cfg:
                a.required = False


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    try:
        if known.config:
            _apply_config(parser, _load_config(known.config))
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"usage error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        out, code = args.func(args)
    except (SizeError, PrecisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (DomainError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CrossCheckError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
