"""Command-line front end: curve sweeps, tradeoff data, Monte Carlo runs
and the verification battery.

Exit codes: 0 success, 1 verification/PASS-FAIL failure, 2 usage or IO
error.  All randomness derives from --seed; outputs are byte-identical
across reruns.  CSV uses comma separators, newline line endings and
12-significant-digit fixed-point numbers.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__, adversary, analytics, verify

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

CURVE_COLUMNS = (
    "a_guess",
    "a_no_test",
    "a_monitor",
    "a_full_2",
    "a_full_3",
    "b_guess",
    "b_cheat",
)


class UsageError(Exception):
    pass


def format_value(value: float) -> str:
    """12 significant digits, fixed-point, locale-independent."""
    text = f"{value:.12g}"
    if "e" in text or "E" in text:
        text = f"{value:.12f}"
    return text


def resolve_p_question(args) -> float:
    if getattr(args, "theta", None) is not None:
        theta = math.radians(args.theta)
        if not 0.0 <= theta <= math.pi / 4.0 + 1e-12:
            raise UsageError("--theta must lie in [0, 45] degrees")
        return math.cos(2.0 * theta)
    if getattr(args, "p", None) is None:
        raise UsageError("one of --p / --theta is required")
    if not 0.0 <= args.p <= 1.0:
        raise UsageError("--p must lie in [0, 1]")
    return float(args.p)


def sweep_points(p_min: float, p_max: float, step: float) -> list[float]:
    if step <= 0:
        raise UsageError("--step must be positive")
    if not 0.0 <= p_min <= p_max <= 1.0:
        raise UsageError("sweep bounds must satisfy 0 <= p-min <= p-max <= 1")
    count = int(math.floor((p_max - p_min) / step + 1e-9))
    return [min(p_min + i * step, p_max) for i in range(count + 1)]


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as handle:
            handle.write(text)


def _emit_manifest(out_path: str | None, entries: dict[str, str]) -> None:
    lines = "".join(f"{key}={value}\n" for key, value in entries.items())
    if out_path is None:
        sys.stderr.write(lines)
    else:
        with open(out_path + ".manifest", "w", newline="") as handle:
            handle.write(lines)


def _base_manifest(args) -> dict[str, str]:
    return {
        "command_line": " ".join(args.raw_argv),
        "toolkit_version": __version__,
        "seed": str(getattr(args, "seed", "")),
    }


def cmd_curves(args) -> int:
    columns = CURVE_COLUMNS
    if args.columns:
        requested = tuple(name.strip() for name in args.columns.split(","))
        unknown = [name for name in requested if name not in CURVE_COLUMNS]
        if unknown or not requested:
            raise UsageError(f"unknown curve columns: {unknown}")
        columns = tuple(name for name in CURVE_COLUMNS if name in requested)
    lines = ["p_question," + ",".join(columns)]
    for p in sweep_points(args.p_min, args.p_max, args.step):
        point = analytics.quantum_curves(p)
        row = {
            "a_guess": point.a_guess,
            "a_no_test": point.a_no_test,
            "a_monitor": point.a_monitor,
            "a_full_2": point.a_full_two_state,
            "a_full_3": point.a_full_three_state,
            "b_guess": point.b_guess,
            "b_cheat": point.b_cheat,
        }
        lines.append(
            ",".join([format_value(p)] + [format_value(row[name]) for name in columns])
        )
    _write_text(args.out, "\n".join(lines) + "\n")
    manifest = _base_manifest(args)
    manifest.update(
        {"p_min": format_value(args.p_min), "p_max": format_value(args.p_max), "step": format_value(args.step)}
    )
    _emit_manifest(args.out, manifest)
    return EXIT_OK


def cmd_tradeoff(args) -> int:
    p = resolve_p_question(args)
    if not 0.0 < p < 1.0:
        raise UsageError("tradeoff requires p strictly between 0 and 1")
    lines = ["kind,p_question,s,r,a_value,b_value"]

    def row(kind: str, a_value: float, b_value: float, s: float | None = None, r: float | None = None):
        lines.append(
            ",".join(
                [
                    kind,
                    format_value(p),
                    format_value(s) if s is not None else "",
                    format_value(r) if r is not None else "",
                    format_value(a_value),
                    format_value(b_value),
                ]
            )
        )

    for point in analytics.classical_segment(p, args.step):
        row("classical", point.a_value, point.b_value, point.s, point.r)
    row("quantum", analytics.alice_monitor_value(p), analytics.bob_cheat_value(p))
    row("ideal", analytics.alice_guess_value(p), analytics.bob_guess_value(p))
    if abs(p - 0.5) < 1e-12:
        row("stochastic-switching", *analytics.BANSAL_SIKORA_POINT)
    _write_text(args.out, "\n".join(lines) + "\n")
    manifest = _base_manifest(args)
    manifest.update({"p_question": format_value(p), "step": format_value(args.step)})
    _emit_manifest(args.out, manifest)
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.scenario not in adversary.SCENARIOS:
        known = ", ".join(sorted(adversary.SCENARIOS))
        raise UsageError(f"unknown scenario {args.scenario!r}; choose one of: {known}")
    p = resolve_p_question(args)
    spec = adversary.SCENARIOS[args.scenario]
    report = verify.mc_estimate(verify.McConfig(args.scenario, p, args.rounds, args.seed))
    reference = spec.reference(p)
    deviation = abs(report.success_probability - reference)
    passed = deviation <= verify.CI_WIDTHS * (report.ci99 or 0.0) + 1e-15
    record = {
        "scenario": args.scenario,
        "p_question": p,
        "rounds": args.rounds,
        "seed": args.seed,
        "estimate": report.success_probability,
        "ci99": report.ci99,
        "reference": reference,
        "certainty_events": report.certainty_events,
        "verdict": "PASS" if passed else "FAIL",
    }
    if args.format == "jsonl":
        text = json.dumps(record) + "\n"
    else:
        keys = list(record)
        values = [
            format_value(record[k]) if isinstance(record[k], float) else str(record[k])
            for k in keys
        ]
        text = ",".join(keys) + "\n" + ",".join(values) + "\n"
    _write_text(args.out, text)
    if args.out is not None:
        sys.stdout.write(f"{args.scenario}: estimate {report.success_probability:.6f} "
                         f"vs reference {reference:.6f} -> {record['verdict']}\n")
    manifest = _base_manifest(args)
    manifest.update({"scenario": args.scenario, "p_question": format_value(p),
                     "rounds": str(args.rounds), "verdict": record["verdict"]})
    _emit_manifest(args.out, manifest)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_verify(args) -> int:
    if args.depth == "quick":
        results = verify.quick_checks(inject_error=args.inject_error)
    else:
        results = verify.full_checks(seed=args.seed, inject_error=args.inject_error)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        sys.stdout.write(f"{result.name}: {result.detail} {status}\n")
    failed = [r.name for r in results if not r.passed]
    sys.stdout.write(
        f"{len(results) - len(failed)}/{len(results)} checks passed"
        + (f"; failing: {', '.join(failed)}\n" if failed else "\n")
    )
    manifest = _base_manifest(args)
    manifest["depth"] = args.depth
    for result in results:
        manifest[f"check.{result.name}"] = "PASS" if result.passed else "FAIL"
    _emit_manifest(args.out, manifest)
    return EXIT_OK if not failed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rabin-ot",
        description="Rabin oblivious transfer: curves, tradeoffs, simulation, verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_point=True):
        p.add_argument("--seed", type=int, default=1, help="root seed for all randomness")
        p.add_argument("--out", default=None, help="output path (stdout when omitted)")
        if with_point:
            group = p.add_mutually_exclusive_group()
            group.add_argument("--p", type=float, help="no-bit probability p")
            group.add_argument("--theta", type=float, help="protocol angle in degrees")

    curves = sub.add_parser("curves", help="cheating-probability curves as CSV")
    curves.add_argument("--p-min", type=float, default=0.0)
    curves.add_argument("--p-max", type=float, default=1.0)
    curves.add_argument("--step", type=float, default=0.01)
    curves.add_argument("--columns", default=None, help="comma-separated curve subset")
    add_common(curves, with_point=False)
    curves.set_defaults(handler=cmd_curves)

    tradeoff = sub.add_parser("tradeoff", help="classical (A,B) segment plus reference points")
    tradeoff.add_argument("--step", type=float, default=0.01, help="send-probability step")
    add_common(tradeoff)
    tradeoff.set_defaults(handler=cmd_tradeoff)

    simulate = sub.add_parser("simulate", help="Monte Carlo run of a registered scenario")
    simulate.add_argument("scenario", help="scenario name from the registry")
    simulate.add_argument("--rounds", type=int, default=1_000_000)
    simulate.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    add_common(simulate)
    simulate.set_defaults(handler=cmd_simulate)

    battery = sub.add_parser("verify", help="run the verification battery")
    battery.add_argument("--depth", choices=("quick", "full"), default="quick")
    battery.add_argument("--inject-error", action="store_true", help=argparse.SUPPRESS)
    add_common(battery, with_point=False)
    battery.set_defaults(handler=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    raw_argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(raw_argv)
    args.raw_argv = ["rabin-ot"] + raw_argv
    try:
        return args.handler(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


def entry_point() -> None:
    sys.exit(main())
