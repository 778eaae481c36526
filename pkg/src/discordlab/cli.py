"""Command-line front end.

Exit codes are stable for automation: 0 when every verdict passes, 1 when a
verdict fails or a run aborts, 2 for usage, parse, or configuration errors.
All outputs (verdict JSON, CSV time series, gnuplot data files) are
byte-identical for identical configuration and seed.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import tolerances
from .correlations import DEFAULT_SEED
from .dynamics import DisdScenario, MarkovianScenario, TimeSeries
from .scenario_io import ScenarioFormatError, parse_scenario
from .scenarios import (
    DEMOS,
    ScenarioResult,
    disd_series_checks,
    markovian_series_checks,
    run_demo,
)
from .structures import StructureReport

ENV_SEED = "DISCORDLAB_SEED"
GNUPLOT_COLUMNS = ("I", "D_left", "D_right")
LN2 = float(np.log(2.0))


class UsageError(Exception):
    """Configuration or input problem: exit code 2."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="discordlab",
        description="Quantum discord and open-system classicality simulations")
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="run a built-in demo or a scenario file")
    run_parser.add_argument("--demo", help="built-in demo name (see list-demos)")
    run_parser.add_argument("--scenario", help="path to a scenario JSON file")
    run_parser.add_argument("--out", default="runs", help="output directory")
    run_parser.add_argument("--seed", type=int, default=None,
                            help=f"64-bit seed (fallback: ${ENV_SEED})")
    run_parser.add_argument("--grid", type=int, default=None,
                            help="time-grid points for dynamical runs "
                                 "(default: 200 for demos, scenario file's own "
                                 "grid otherwise)")
    run_parser.add_argument("--tol", action="append", default=[],
                            metavar="NAME=VALUE",
                            help="tolerance override, repeatable")
    run_parser.add_argument("--json", action="store_true",
                            help="print the verdict as JSON instead of text")
    run_parser.add_argument("--bits", action="store_true",
                            help="display entropic values in bits "
                                 "(files stay in nats)")

    list_parser = sub.add_parser("list-demos", help="list built-in demos")
    list_parser.add_argument("--json", action="store_true",
                             help="machine-readable listing")
    return parser


def _resolve_seed(cli_seed: int | None) -> int | None:
    """Explicitly requested seed (flag, then env), or None if neither given."""
    if cli_seed is not None:
        seed = cli_seed
    elif os.environ.get(ENV_SEED):
        try:
            seed = int(os.environ[ENV_SEED])
        except ValueError as exc:
            raise UsageError(f"${ENV_SEED} is not an integer: "
                             f"{os.environ[ENV_SEED]!r}") from exc
    else:
        return None
    if not 0 <= seed < 2 ** 64:
        raise UsageError(f"seed {seed} is not a 64-bit unsigned integer")
    return seed


def _parse_tol_overrides(entries: list[str]) -> dict[str, float]:
    overrides = {}
    for entry in entries:
        if "=" not in entry:
            raise UsageError(f"--tol expects NAME=VALUE, got {entry!r}")
        name, _, raw = entry.partition("=")
        try:
            overrides[name.strip()] = float(raw)
        except ValueError as exc:
            raise UsageError(f"--tol {entry!r}: not a number") from exc
    return overrides


def _display(value: float, unit: str, bits: bool) -> str:
    if bits and unit == "nats":
        return f"{value / LN2:.9g} bits"
    return f"{value:.9g}{' ' + unit if unit else ''}"


def _print_result(result: ScenarioResult, bits: bool) -> None:
    for check in result.checks:
        status = "PASS" if check.passed else "FAIL"
        if isinstance(check.threshold, tuple):
            bound = f"in [{check.threshold[0]:g}, {check.threshold[1]:g}]"
        else:
            bound = f"{check.comparator} {check.threshold:g}"
        print(f"[{status}] {result.name}/{check.name}: "
              f"value={_display(check.value, check.unit, bits)} ({bound})")
    overall = "PASS" if result.passed else "FAIL"
    print(f"[{overall}] {result.name}: {sum(c.passed for c in result.checks)}"
          f"/{len(result.checks)} checks passed")


def _write_outputs(result: ScenarioResult, out_dir: Path,
                   overrides: dict[str, float]) -> None:
    run_dir = out_dir / result.name
    run_dir.mkdir(parents=True, exist_ok=True)
    verdict = json.dumps(result.to_jsonable(overrides), indent=2, sort_keys=True)
    (run_dir / "verdict.json").write_text(verdict + "\n", encoding="utf-8")
    for name, attachment in sorted(result.attachments.items()):
        if isinstance(attachment, TimeSeries):
            (run_dir / f"{name}.csv").write_text(attachment.to_csv(),
                                                 encoding="utf-8")
            for column in GNUPLOT_COLUMNS:
                data = attachment.gnuplot_block(column)
                (run_dir / f"{name}_{column}.dat").write_text(data,
                                                              encoding="utf-8")
        elif isinstance(attachment, StructureReport):
            (run_dir / f"{name}.csv").write_text(attachment.to_csv(),
                                                 encoding="utf-8")
            payload = json.dumps(attachment.to_jsonable(), indent=2,
                                 sort_keys=True)
            (run_dir / f"{name}.json").write_text(payload + "\n",
                                                  encoding="utf-8")


def _run_scenario_file(path: str, seed: int | None, grid: int | None,
                       table: dict[str, float]) -> ScenarioResult:
    """Seed precedence: explicit flag/env, else the file's own seed field."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read scenario file: {exc}") from exc
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path} at line {exc.lineno}, "
                         f"column {exc.colno}: {exc.msg}") from exc
    scenario = parse_scenario(document, seed_override=seed, grid_override=grid)
    name = f"scenario-{Path(path).stem}"
    if isinstance(scenario, MarkovianScenario):
        from .dynamics import run_markovian_classicality
        series = run_markovian_classicality(scenario)
        checks = markovian_series_checks(series, table)
    elif isinstance(scenario, DisdScenario):
        from .dynamics import run_disd
        series = run_disd(scenario)
        checks = disd_series_checks(series, scenario, table)
    else:  # pragma: no cover - parse_scenario only returns the two kinds
        raise UsageError(f"unsupported scenario type {type(scenario).__name__}")
    return ScenarioResult(name, scenario.seed, tuple(checks),
                          {"timeseries": series})


def _command_run(args: argparse.Namespace) -> int:
    if bool(args.demo) == bool(args.scenario):
        raise UsageError("exactly one of --demo or --scenario is required")
    seed = _resolve_seed(args.seed)
    overrides = _parse_tol_overrides(args.tol)
    try:
        table = tolerances.resolve(overrides)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc

    if args.grid is not None and args.grid < 2:
        raise UsageError("--grid must be at least 2")
    if args.demo:
        if args.demo not in DEMOS:
            raise UsageError(f"unknown demo {args.demo!r}; known: "
                             f"{', '.join(sorted(DEMOS))}")
        grid_points = args.grid if args.grid is not None else 200
        demo_seed = seed if seed is not None else DEFAULT_SEED
        try:
            result = run_demo(args.demo, seed=demo_seed, grid_points=grid_points,
                              tol_table=table)
        except (ValueError, RuntimeError) as exc:
            print(f"run aborted: {exc}", file=sys.stderr)
            return 1
    else:
        try:
            result = _run_scenario_file(args.scenario, seed, args.grid, table)
        except ScenarioFormatError as exc:
            raise UsageError(str(exc)) from exc
        except (ValueError, RuntimeError) as exc:
            print(f"run aborted: {exc}", file=sys.stderr)
            return 1

    _write_outputs(result, Path(args.out), overrides)
    if args.json:
        print(json.dumps(result.to_jsonable(overrides), indent=2, sort_keys=True))
    else:
        _print_result(result, args.bits)
    return 0 if result.passed else 1


def _command_list_demos(args: argparse.Namespace) -> int:
    if args.json:
        payload = [{"name": name, "description": DEMOS[name][0]}
                   for name in sorted(DEMOS)]
        print(json.dumps({"demos": payload}, indent=2, sort_keys=True))
    else:
        for name in sorted(DEMOS):
            print(f"{name}: {DEMOS[name][0]}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed the usage message
        return 2 if exc.code not in (0,) else 0
    try:
        if args.command == "run":
            return _command_run(args)
        if args.command == "list-demos":
            return _command_list_demos(args)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
