#!/usr/bin/env python3
"""
Double cone verification runner.

Runs the numerical verification suites of the Klein-Gordon bulk-boundary
correspondence on the unit double cone and writes:
1. report.json with one record per check
2. CSV tables (convergence curves, F(tau) traces, symbol decay tables)

Usage:
    python doublecone_verify.py verify <suite> [--mass M]... [--grid-u N] [--grid-sphere NTHETAxNPHI]
                                       [--eps0 E --eps-ratio R --eps-count C] [--tau T]... [--seed S]
                                       [--out DIR] [--param geometric|modular] [--config PATH]
    python doublecone_verify.py cases

Example:
    python doublecone_verify.py verify symplectic --mass 0 --mass 1

Exit codes: 0 all checks passed, 1 a check failed, 2 usage or configuration error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from dotenv import dotenv_values
from pydantic import ValidationError

from config.settings import settings
from data.synthetic_fields import get_case_summary, list_available_cases
from models.report import SUITES, ExperimentConfig, Report
from physics.errors import ConfigError
from suites.verification_graph import VerificationPipeline

# Configure logging
logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL),
    format=settings.LOG_FORMAT
)
logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_CHECK_FAILURE = 1
EXIT_USAGE = 2

# Keys accepted in a config file; tolerance overrides use TOL.<check name>
FILE_KEYS = {
    "SUITE": "suite",
    "MASSES": "masses",
    "TAUS": "taus",
    "PARAM": "param",
    "SEED": "seed",
    "OUTPUT_DIR": "output_dir",
    "GRID_U": "grid_u",
    "GRID_SPHERE": "grid_sphere",
    "EPS0": "eps0",
    "EPS_RATIO": "eps_ratio",
    "EPS_COUNT": "eps_count",
    "PAIRS": "pairs",
}
LIST_KEYS = ("masses", "taus")
TOLERANCE_PREFIX = "TOL."


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="doublecone_verify.py",
        description="Numerical verification of the Klein-Gordon bulk-boundary correspondence on the unit double cone.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=list(SUITES) + ["all"])
    verify.add_argument("--mass", dest="masses", type=float, action="append", help="field mass, repeatable")
    verify.add_argument("--tau", dest="taus", type=float, action="append", help="flow parameter, repeatable")
    verify.add_argument("--param", choices=["geometric", "modular"], help="convention of the --tau values")
    verify.add_argument("--grid-u", dest="grid_u", type=int, help="Gauss nodes in u on the cone V")
    verify.add_argument("--grid-sphere", dest="grid_sphere", help="sphere grid as NTHETAxNPHI")
    verify.add_argument("--eps0", type=float, help="largest regularization eps")
    verify.add_argument("--eps-ratio", dest="eps_ratio", type=float, help="geometric ratio of the eps schedule")
    verify.add_argument("--eps-count", dest="eps_count", type=int, help="number of eps samples")
    verify.add_argument("--seed", type=int)
    verify.add_argument("--pairs", type=int, help="random pairs per check")
    verify.add_argument("--out", dest="output_dir", help=f"output directory (default ${{DOUBLECONE_OUTPUT_DIR}} "
                                                         f"or {settings.OUTPUT_DIR})")
    verify.add_argument("--config", help="flat KEY = value configuration file")

    commands.add_parser("cases", help="list the regression cases")
    return parser


def _split_list(raw: str) -> List[float]:
    return [float(part) for part in raw.replace(";", ",").split(",") if part.strip()]


def read_config_file(path: str) -> Dict[str, object]:
    """
    Read a flat KEY = value file into ExperimentConfig field values.

    Raises:
        ConfigError: If the file is missing, has unknown keys or unparsable values
    """
    file_path = Path(path)
    if not file_path.is_file():
        raise ConfigError(f"Config file not found: {path}")
    raw = dotenv_values(file_path)
    values: Dict[str, object] = {}
    tolerances: Dict[str, float] = {}
    try:
        for key, text in raw.items():
            if text is None:
                raise ConfigError(f"Config key {key} has no value")
            if key.startswith(TOLERANCE_PREFIX):
                tolerances[key[len(TOLERANCE_PREFIX):]] = float(text)
            elif key.upper() in FILE_KEYS:
                field = FILE_KEYS[key.upper()]
                if field in LIST_KEYS:
                    values[field] = _split_list(text)
                elif field == "grid_sphere":
                    values[field] = settings.parse_sphere(text)
                else:
                    values[field] = text.strip()
            else:
                raise ConfigError(f"Unknown config key {key}")
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(f"Malformed config file {path}: {e}") from e
    if tolerances:
        values["tolerances"] = tolerances
    logger.info(f"Config file read [path={path}] [keys={len(raw)}]")
    return values


def parse_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    Merge defaults, an optional config file and command-line flags, in that order.

    Raises:
        ConfigError: On a malformed file, conflicting flags or values that fail validation
    """
    eps_flags = [args.eps0, args.eps_ratio, args.eps_count]
    if any(v is not None for v in eps_flags) and not all(v is not None for v in eps_flags):
        raise ConfigError("--eps0, --eps-ratio and --eps-count must be given together")

    values: Dict[str, object] = {"output_dir": settings.OUTPUT_DIR, "seed": settings.DEFAULT_SEED}
    if args.config:
        values.update(read_config_file(args.config))

    flags = {
        "masses": args.masses,
        "taus": args.taus,
        "param": args.param,
        "grid_u": args.grid_u,
        "eps0": args.eps0,
        "eps_ratio": args.eps_ratio,
        "eps_count": args.eps_count,
        "seed": args.seed,
        "pairs": args.pairs,
        "output_dir": args.output_dir,
    }
    if args.grid_sphere:
        try:
            flags["grid_sphere"] = settings.parse_sphere(args.grid_sphere)
        except ValueError as e:
            raise ConfigError(str(e)) from e
    values.update({key: value for key, value in flags.items() if value is not None})
    values["suite"] = args.suite

    try:
        return ExperimentConfig(**values)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration: {e}") from e


def show_available_cases():
    """Display the regression cases used by the suites."""
    print("\n" + "="*80)
    print("REGRESSION CASES")
    print("="*80)
    for case_id in list_available_cases():
        print(f"  {get_case_summary(case_id)}")
    print("="*80)


def print_report(report: Report, output_dir: str):
    print("\n" + "="*80)
    print("DOUBLE CONE VERIFICATION RESULTS")
    print("="*80)
    for check in report.checks:
        mark = "PASS" if check.passed else "FAIL"
        bound = f">= {check.reference:.3e}" if check.comparison == "at_least" else f"tol {check.tolerance:.1e}"
        print(f"  [{mark}] {check.suite}/{check.name}: {check.value:.4e} ({bound}, {check.runtime_s:.1f}s)")
    print(f"\n{report.summary_line()}")
    if report.error_message:
        print(f"Error: {report.error_message}")
    print(f"Outputs: {output_dir}")
    print("="*80)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for command line usage; returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "cases":
        show_available_cases()
        return EXIT_PASS

    try:
        config = parse_config(args)
    except ConfigError as e:
        logger.error(f"Configuration error [error={str(e)}]")
        print(f"\nERROR: {str(e)}", file=sys.stderr)
        return EXIT_USAGE

    report = VerificationPipeline().run(config)
    print_report(report, config.output_dir)
    if report.error_message and not report.checks:
        return EXIT_USAGE
    return EXIT_PASS if report.all_passed else EXIT_CHECK_FAILURE


if __name__ == "__main__":
    sys.exit(main())
