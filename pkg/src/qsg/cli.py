"""Command-line surface: predicate checks, the verification suite, and
connection synthesis, with JSON or markdown reports.

Exit codes: 0 pass, 1 predicate or suite failure, 2 input error,
3 degenerate metric, 4 low-quality witness, 5 no witness found.
Reports go to stdout and are byte-deterministic for fixed inputs; timing
goes to stderr.  ``QSG_THREADS`` caps worker parallelism (execution is
sequential, so any cap is honored).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .errors import ConfigError, DegeneracyError, ModelFileError, PreconditionError, QsgError
from .generate import constraint_functions, synthesize_connection
from .model import ChartModel
from .model_io import canonical_doc, load_model, model_hash, write_model
from .predicates import DEFAULT_SAMPLES, DEFAULT_TOL, PREDICATES, check
from .propositions import run_full_suite

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_DEGENERATE = 3
EXIT_LOW_QUALITY = 4
EXIT_NO_WITNESS = 5

WITNESS_TOL = 1e-7
NO_WITNESS_TOL = 1e-3


def _csv(text: str) -> list:
    return [t for t in (s.strip() for s in text.split(",")) if t]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qsg",
        description="chart-level tensor calculus checks for compatible "
                    "metric / almost-complex / connection structures",
    )
    p.add_argument("--version", action="version", version=f"qsg {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run named predicates against a model file")
    c.add_argument("model", help="path to a model JSON file")
    c.add_argument("--predicates", required=True,
                   help=f"comma-separated names from: {', '.join(sorted(PREDICATES))}")
    c.add_argument("--tol", type=float, default=DEFAULT_TOL)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    c.add_argument("--format", choices=("json", "md"), default="json")

    v = sub.add_parser("verify", help="run the full proposition suite")
    v.add_argument("--dims", default="2,4", help="comma-separated chart dimensions (2, 4, 6)")
    v.add_argument("--trials", type=int, default=30)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--degree", type=int, default=2)
    v.add_argument("--only", default="", help="comma-separated entry ids or prefixes")
    v.add_argument("--format", choices=("json", "md"), default="json")

    s = sub.add_parser("synthesize", help="fit connection symbols to constraints")
    s.add_argument("model", help="path to a model JSON file")
    s.add_argument("--constraints", required=True, help="comma-separated constraint names")
    s.add_argument("--degree", type=int, default=2, help="symbol ansatz degree")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default="", help="write the witness model file here")
    s.add_argument("--format", choices=("json", "md"), default="json")
    return p


def _emit(report: dict, fmt: str):
    if fmt == "json":
        print(json.dumps(report, sort_keys=True, indent=1))
        return
    print(f"# qsg report (seed {report.get('seed')})")
    for section in ("checks", "suite", "synthesis"):
        if section not in report:
            continue
        body = report[section]
        print(f"\n## {section}")
        if section == "checks":
            print("| name | max residual | tolerance | pass |")
            print("|---|---|---|---|")
            for r in body:
                print(f"| {r['name']} | {r['max_residual']:.3e} | "
                      f"{r['tolerance']:.1e} | {r['pass']} |")
        elif section == "suite":
            print("| id | dim | status | max residual | tolerance |")
            print("|---|---|---|---|---|")
            for e in body["entries"]:
                print(f"| {e['id']} | {e['dim']} | {e['status']} | "
                      f"{e['max_residual']:.3e} | {e['tolerance']:.1e} |")
        else:
            print("| constraint | residual |")
            print("|---|---|")
            for name, r in sorted(body["constraint_residuals"].items()):
                print(f"| {name} | {r:.3e} |")
            print(f"\noverall residual: {body['residual']:.3e}")
    print(f"\nexit status: {report['exit_status']}")


def _base_report(seed: int) -> dict:
    return {"tool": {"name": "qsg", "version": __version__}, "seed": seed}


def cmd_check(args) -> int:
    model, doc = load_model(args.model)
    names = _csv(args.predicates)
    for name in names:
        if name not in PREDICATES:
            raise ConfigError(f"unknown predicate {name!r}; valid: {sorted(PREDICATES)}")
    report = _base_report(args.seed)
    report["model_hash"] = model_hash(doc)
    checks = []
    for name in names:
        checks.append(check(model, name, tol=args.tol, seed=args.seed,
                            samples=args.samples).to_dict())
    report["checks"] = checks
    ok = all(c["pass"] for c in checks)
    report["exit_status"] = EXIT_PASS if ok else EXIT_FAIL
    _emit(report, args.format)
    return report["exit_status"]


def cmd_verify(args) -> int:
    dims = tuple(int(d) for d in _csv(args.dims))
    only = tuple(_csv(args.only))
    suite = run_full_suite(seed=args.seed, trials=args.trials, dims=dims,
                           degree=args.degree, only=only)
    report = _base_report(args.seed)
    report["suite"] = suite.to_dict()
    report["exit_status"] = EXIT_PASS if suite.passed else EXIT_FAIL
    _emit(report, args.format)
    return report["exit_status"]


def cmd_synthesize(args) -> int:
    model, doc = load_model(args.model)
    constraints = _csv(args.constraints)
    available = constraint_functions(model)
    for c in constraints:
        if c not in available:
            raise ConfigError(
                f"constraint {c!r} unavailable for this model; "
                f"valid here: {sorted(available)}"
            )
    result = synthesize_connection(model, constraints, ansatz_degree=args.degree,
                                   seed=args.seed)
    report = _base_report(args.seed)
    report["model_hash"] = model_hash(doc)
    report["synthesis"] = {
        "constraints": constraints,
        "ansatz_degree": args.degree,
        "residual": result.residual,
        "constraint_residuals": result.constraint_residuals,
        "iterations": result.iterations,
        "fit_points": result.fit_points,
        "holdout_points": result.holdout_points,
    }
    if result.residual <= WITNESS_TOL:
        status = EXIT_PASS
        if args.out:
            out_model = ChartModel(domain=model.domain, metric=model.metric,
                                   J=model.J, conn=result.connection)
            write_model(canonical_doc(out_model), args.out)
            report["synthesis"]["written"] = args.out
    elif result.residual <= NO_WITNESS_TOL:
        status = EXIT_LOW_QUALITY
        report["synthesis"]["outcome"] = "low-quality witness"
    else:
        status = EXIT_NO_WITNESS
        report["synthesis"]["outcome"] = "no witness"
    report["exit_status"] = status
    _emit(report, args.format)
    return status


def main(argv=None) -> int:
    threads = os.environ.get("QSG_THREADS")
    if threads is not None:
        try:
            if int(threads) < 1:
                raise ValueError
        except ValueError:
            print(f"qsg: invalid QSG_THREADS value {threads!r}", file=sys.stderr)
            return EXIT_INPUT
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else 0
    start = time.monotonic()
    try:
        if args.command == "check":
            code = cmd_check(args)
        elif args.command == "verify":
            code = cmd_verify(args)
        else:
            code = cmd_synthesize(args)
    except ModelFileError as exc:
        print(f"qsg: model file error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegeneracyError as exc:
        print(f"qsg: degenerate form at point {exc.point} (det {exc.det})", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ConfigError, PreconditionError) as exc:
        print(f"qsg: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except QsgError as exc:
        print(f"qsg: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        print(f"qsg: wall time {time.monotonic() - start:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
