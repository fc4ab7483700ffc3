"""Command-line front end: ``qrl {compile,verify,simulate,layout,random}``.

Exit codes: 0 success, 1 validation or tolerance failure, 2 structural,
parse or configuration failure.
"""

import argparse
import json
import sys
from typing import List, Optional

import pydantic

from app.core.config import settings
from app.core.exceptions import QRLError
from app.models.run_model import RunConfig
from app.services.compile_service import compile_target, schedule_footprint
from app.services.io_service import (
    format_float,
    load_json,
    parse_schedule,
    parse_target,
    parse_verify_target,
    random_target,
    read_text,
    target_to_json,
    write_text,
)
from app.services.lattice_service import simulate_report
from app.services.layout_service import render
from app.services.verify_service import verify_against
from app.utils.logger import logger

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_STRUCTURAL = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrl",
        description="Compile, verify and simulate Gaussian operations on a quad-rail lattice.",
    )
    parser.add_argument("command", choices=["compile", "verify", "simulate", "layout", "random"])
    parser.add_argument("--input", dest="input_path", help="Target matrix (compile) or schedule JSON")
    parser.add_argument("--target", dest="target_path", help="Target file for verify")
    parser.add_argument("--output", dest="output_path", help="Output file (default: stdout)")
    parser.add_argument(
        "--layout", dest="layout_kind", default="triangular", choices=["triangular", "rectangular"]
    )
    parser.add_argument(
        "--target-kind", dest="target_kind", default=None, choices=["unitary", "bogoliubov", "shear"]
    )
    parser.add_argument("--tolerance", type=float, default=1e-8, help="Verification tolerance")
    parser.add_argument("--r-db", dest="r_db", type=float, default=settings.DEFAULT_R_DB)
    parser.add_argument("--sweep", type=float, nargs="+", default=[], help="r_db values, one report each")
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    parser.add_argument("--modes", type=int, default=2, help="Mode count for random targets")
    parser.add_argument(
        "--format", dest="output_format", default="json", choices=["json", "ascii", "svg"]
    )
    return parser


# ----------------------------
# Commands
# ----------------------------
def cmd_compile(config: RunConfig) -> int:
    target = parse_target(load_json(read_text(config.input_path)), config.target_kind)
    schedule = compile_target(target, config.layout_kind)
    write_text(config.output_path, schedule.to_json() + "\n")

    summary = schedule_footprint(schedule)
    report = sys.stdout if config.output_path else sys.stderr
    print(f"modes: {summary.modes}", file=report)
    print(f"instructions: {summary.instructions}", file=report)
    for role, count in sorted(summary.roles.items()):
        print(f"  {role}: {count}", file=report)
    print(f"lattice_period: {summary.lattice_period}", file=report)
    print(f"footprint: {summary.rows} rows x {summary.columns} columns", file=report)
    return EXIT_OK


def cmd_verify(config: RunConfig, target_kind: Optional[str]) -> int:
    schedule = parse_schedule(read_text(config.input_path))
    target = parse_verify_target(load_json(read_text(config.target_path)), target_kind)
    report = verify_against(schedule, target, config.tolerance)
    print(f"max_deviation: {format_float(report.max_deviation)}")
    print(f"tolerance: {format_float(report.tolerance)}")
    if config.output_path:
        write_text(config.output_path, report.model_dump_json(indent=2) + "\n")
    return EXIT_OK if report.within_tolerance else EXIT_VALIDATION


def cmd_simulate(config: RunConfig) -> int:
    schedule = parse_schedule(read_text(config.input_path))
    points = config.sweep or [config.r_db]
    reports = [simulate_report(schedule, r_db, config.seed) for r_db in points]
    for report in reports:
        line = (
            f"r_db: {format_float(report.r_db)} "
            f"target_distance_frobenius: {format_float(report.target_distance_frobenius)}"
        )
        print(line, file=sys.stdout if config.output_path else sys.stderr)
    if config.sweep:
        text = json.dumps([report.model_dump() for report in reports], indent=2)
    else:
        text = reports[0].model_dump_json(indent=2)
    write_text(config.output_path, text + "\n")
    return EXIT_OK


def cmd_layout(config: RunConfig) -> int:
    schedule = parse_schedule(read_text(config.input_path))
    if config.output_format == "json":
        text = schedule_footprint(schedule).model_dump_json(indent=2) + "\n"
    else:
        text = render(schedule, config.output_format)
    write_text(config.output_path, text)
    return EXIT_OK


def cmd_random(config: RunConfig) -> int:
    target = random_target(config.target_kind, config.modes, config.seed)
    write_text(config.output_path, target_to_json(target))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(
            command=args.command,
            target_kind=args.target_kind or "unitary",
            layout_kind=args.layout_kind,
            tolerance=args.tolerance,
            r_db=args.r_db,
            sweep=args.sweep,
            seed=args.seed,
            modes=args.modes,
            input_path=args.input_path,
            target_path=args.target_path,
            output_path=args.output_path,
            output_format=args.output_format,
        )
    except pydantic.ValidationError as exc:
        for error in exc.errors():
            print(f"error: {'.'.join(str(p) for p in error['loc'])}: {error['msg']}", file=sys.stderr)
        return EXIT_STRUCTURAL

    try:
        if config.command == "compile":
            return cmd_compile(config)
        if config.command == "verify":
            return cmd_verify(config, args.target_kind)
        if config.command == "simulate":
            return cmd_simulate(config)
        if config.command == "layout":
            return cmd_layout(config)
        return cmd_random(config)
    except QRLError as exc:
        logger.error("Command failed", command=config.command, error=exc.message, detail=exc.detail)
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
