"""Command-line front end.

    qel run --scenario FILE [--scenario FILE ...] [--seed N]
            [--format csv|json] [--out PATH] [--jobs N]
    qel validate --scenario FILE [--scenario FILE ...]

Exit codes: 0 success, 2 validation error, 3 numerical failure.
``QEL_LOG`` selects the log level (error|warn|info|debug).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .errors import DomainError, IntegrationError
from .results import emit
from .scenario import Scenario, load_scenario
from .workbench import run

log = logging.getLogger("qel")

_LOG_LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}


def _configure_logging() -> None:
    level = os.environ.get("QEL_LOG", "warn").strip().lower()
    logging.basicConfig(
        level=_LOG_LEVELS.get(level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qel",
        description="Scenario runner for the open-quantum-system energetics engines",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run scenarios and emit result tables")
    run_p.add_argument(
        "--scenario", action="append", required=True, metavar="FILE",
        help="scenario JSON file (repeatable)",
    )
    run_p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    run_p.add_argument("--format", choices=["csv", "json"], default=None)
    run_p.add_argument(
        "--out", default=None,
        help="output file (single scenario) or directory (multiple scenarios)",
    )
    run_p.add_argument("--jobs", type=int, default=1, help="concurrent scenarios")

    val_p = sub.add_parser("validate", help="parse and validate scenarios")
    val_p.add_argument("--scenario", action="append", required=True, metavar="FILE")
    return parser


def _resolve_format(args_format: str | None, scenario: Scenario) -> str:
    return args_format or scenario.output_format or "csv"


def _run_one(path: str, args) -> tuple[str, bytes, str | None]:
    scenario = load_scenario(path)
    fmt = _resolve_format(args.format, scenario)
    table = run(scenario, seed=args.seed)
    return fmt, emit(table, fmt), scenario.output_path


def _cmd_run(args) -> int:
    paths = args.scenario
    if args.jobs < 1:
        raise DomainError("--jobs must be >= 1")
    if len(paths) > 1:
        if args.out is None:
            raise DomainError("--out must name a directory when running multiple scenarios")
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(lambda p: _run_one(p, args), paths))
        for path, (fmt, payload, _) in zip(paths, results):
            target = out_dir / (Path(path).stem + "." + fmt)
            target.write_bytes(payload)
            log.info("wrote %s", target)
        return 0

    fmt, payload, scenario_out = _run_one(paths[0], args)
    target = args.out or scenario_out
    if target is None:
        sys.stdout.write(payload.decode("utf-8"))
    else:
        Path(target).parent.mkdir(parents=True, exist_ok=True)
        Path(target).write_bytes(payload)
        log.info("wrote %s", target)
    return 0


def _cmd_validate(args) -> int:
    for path in args.scenario:
        load_scenario(path)
        print(f"{path}: ok")
    return 0


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_validate(args)
    except (DomainError, FileNotFoundError) as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IntegrationError as exc:
        log.error("%s", exc)
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
