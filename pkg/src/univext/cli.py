"""Command-line entry point: ``verify``, ``enumerate`` and ``figure``.

Exit codes: 0 all checks pass, 1 a check failed, 2 bad input, 3 a truncated
computation did not stabilize.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .category import DomainError, LinearA
from .equivalence import (
    NotStabilized,
    pushout_batch,
    verify_equivalence,
    verify_ff_corollary,
    verify_lwc_triple,
    wakamatsu_batch,
)
from .figure import regions, render
from .linalg import DEFAULT_PRIME
from .report import Report
from .scenarios import SCHEMA_VERSION, Scenario, ScenarioError, load_scenario
from .torsion import MAX_ENUMERATION_N, enumerate_torsion_pairs, verify_torsion_pair

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNSTABLE = 0, 1, 2, 3
WORKERS_ENV = "UNIVEXT_WORKERS"


def run_checks(sc: Scenario) -> Report:
    pair, cap = sc.pair, sc.cap
    runners = {
        "torsion-pair": lambda: verify_torsion_pair(pair, cap),
        "equivalence": lambda: verify_equivalence(pair, cap),
        "ff-corollary": lambda: verify_ff_corollary(pair, cap, sc.restrict),
        "wakamatsu": lambda: wakamatsu_batch(pair, cap),
        "pushout": lambda: pushout_batch(pair, cap),
        "lwc-triple": lambda: verify_lwc_triple(pair, cap),
    }
    report = Report(sc.name)
    for name in sc.checks:
        report.extend(runners[name](), prefix=f"{name}: ")
    return report


def structured(scenario: str, report: Report, **extra) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "scenario": scenario,
        "status": "pass" if report.passed else "fail",
        "checks": [c.as_dict() for c in report.checks],
        **extra,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _emit(fmt: str, scenario: str, report: Report, **extra) -> None:
    if fmt == "structured":
        sys.stdout.write(structured(scenario, report, **extra))
    else:
        sys.stdout.write(str(report) + "\n")


def workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ScenarioError(f"{WORKERS_ENV}: expected an integer, got {raw!r}") from None


def _load(args) -> Scenario:
    sc = load_scenario(args.scenario, args.prime)
    return sc.with_overrides(cap=args.cap)


def cmd_verify(args) -> int:
    sc = _load(args)
    report = run_checks(sc)
    _emit(args.format, sc.name, report)
    return EXIT_OK if report.passed else EXIT_FAIL


def _pair_verdict(pair) -> tuple[str, bool, list[str]]:
    rep = verify_equivalence(pair)
    return str(pair), rep.passed, rep.witnesses()


def cmd_enumerate(args) -> int:
    if not 1 <= args.n <= MAX_ENUMERATION_N:
        raise ScenarioError(f"--n: expected 1..{MAX_ENUMERATION_N}, got {args.n}")
    pairs = enumerate_torsion_pairs(LinearA(args.n, args.prime))
    n_workers = workers()
    if n_workers > 1:
        with ProcessPoolExecutor(n_workers) as pool:
            verdicts = list(pool.map(_pair_verdict, pairs))
    else:
        verdicts = [_pair_verdict(p) for p in pairs]
    report = Report(f"A_{args.n}: {len(pairs)} torsion pairs")
    for k, (label, _, bad) in enumerate(verdicts):
        report.add(f"pair {k}: {label}", bad)
    if args.format == "structured":
        sys.stdout.write(structured(f"enumerate A_{args.n}", report, count=len(pairs)))
    else:
        sys.stdout.write(str(report) + f"\ncount: {len(pairs)}\n")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_figure(args) -> int:
    sc = _load(args)
    text = render(sc.pair, sc.cap, sc.name)
    if args.format == "structured":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "scenario": sc.name,
            "figure": text.splitlines(),
            "regions": {k: [str(m) for m in v] for k, v in regions(sc.pair, sc.cap).items()},
        }
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=None, help="length cap for tube computations")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--prime", type=int, default=DEFAULT_PRIME, help="characteristic of the oracle field")
    parser = argparse.ArgumentParser(prog="univext", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("verify", parents=[common], help="run the checks listed in a scenario")
    p.add_argument("scenario", help="scenario file or built-in name")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("enumerate", parents=[common], help="all torsion pairs of A_n with equivalence verdicts")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)
    p = sub.add_parser("figure", parents=[common], help="marked AR quiver with overlays")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_figure)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.cap is not None and args.cap < 1:
        print(f"error: --cap: expected a positive integer, got {args.cap}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except NotStabilized as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except (ScenarioError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
