#!/usr/bin/env python3
"""
Tests for the verification runner: configuration merging, exit codes and outputs.
Suites are replaced by small stand-in runners so the tests stay fast.
"""

import sys
import os
import json
import tempfile
from pathlib import Path

import pytest

# Add project to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config.settings import settings
from doublecone_verify import build_parser, main, parse_config, read_config_file
from physics.errors import ConfigError, DomainError
from suites import SUITE_RUNNERS


def _write(directory: str, name: str, text: str) -> str:
    path = Path(directory) / name
    path.write_text(text)
    return str(path)


def _passing_runner(ctx):
    ctx.record("modular", "always_zero", lambda: 0.0, tolerance=1e-12)
    ctx.add_table("trace", ["tau", "value"], [[0.0, 1.0], [0.5, 0.25]])


def _failing_runner(ctx):
    ctx.record("modular", "too_large", lambda: 1.0, tolerance=1e-3)


def _raising_runner(ctx):
    def compute():
        raise DomainError("point outside the double cone")
    ctx.record("modular", "cannot_evaluate", compute)


def _run_with(runner, argv):
    original = SUITE_RUNNERS["modular"]
    SUITE_RUNNERS["modular"] = runner
    try:
        return main(argv)
    finally:
        SUITE_RUNNERS["modular"] = original


def test_parse_config_defaults():
    config = parse_config(build_parser().parse_args(["verify", "kms"]))
    assert config.suite == "kms"
    assert config.seed == settings.DEFAULT_SEED
    assert config.output_dir == settings.OUTPUT_DIR
    assert config.param == "geometric"
    assert config.selected_suites() == ["kms"]
    all_config = parse_config(build_parser().parse_args(["verify", "all"]))
    assert len(all_config.selected_suites()) == len(SUITE_RUNNERS)
    print("✅ Default configuration works")


def test_flags_override_config_file():
    with tempfile.TemporaryDirectory() as tmp:
        path = _write(tmp, "run.env", "MASSES = 0, 2.5\nSEED = 7\nGRID_SPHERE = 6x12\nTOL.kms_reality = 1e-6\n")
        args = build_parser().parse_args(["verify", "modular", "--config", path, "--mass", "1.5", "--tau", "0.2"])
        config = parse_config(args)
    assert config.masses == [1.5]
    assert config.taus == [0.2]
    assert config.seed == 7
    assert config.grid_sphere == (6, 12)
    assert config.tolerance("kms_reality", 1.0) == 1e-6
    assert config.tolerance("other", 0.5) == 0.5
    print("✅ Command-line flags override the config file")


def test_config_file_errors():
    with tempfile.TemporaryDirectory() as tmp:
        with pytest.raises(ConfigError):
            read_config_file(str(Path(tmp) / "missing.env"))
        with pytest.raises(ConfigError):
            read_config_file(_write(tmp, "unknown.env", "COLOR = blue\n"))
        with pytest.raises(ConfigError):
            read_config_file(_write(tmp, "bad.env", "MASSES = one, two\n"))
    print("✅ Config file errors are reported")


def test_invalid_flags():
    parser = build_parser()
    with pytest.raises(ConfigError):
        parse_config(parser.parse_args(["verify", "kms", "--mass", "-1"]))
    with pytest.raises(ConfigError):
        parse_config(parser.parse_args(["verify", "kms", "--eps0", "0.01"]))
    with pytest.raises(ConfigError):
        parse_config(parser.parse_args(["verify", "kms", "--grid-sphere", "8by16"]))
    config = parse_config(parser.parse_args(
        ["verify", "kms", "--eps0", "0.01", "--eps-ratio", "0.5", "--eps-count", "5"]))
    assert (config.eps0, config.eps_ratio, config.eps_count) == (0.01, 0.5, 5)
    with pytest.raises(SystemExit) as excinfo:
        parser.parse_args(["verify", "no-such-suite"])
    assert excinfo.value.code == 2
    print("✅ Invalid flags are rejected")


def test_exit_codes_and_outputs():
    with tempfile.TemporaryDirectory() as tmp:
        out = str(Path(tmp) / "pass")
        assert _run_with(_passing_runner, ["verify", "modular", "--out", out]) == 0
        report = json.loads((Path(out) / "report.json").read_text())
        assert report["checks"][0]["name"] == "always_zero"
        assert report["checks"][0]["passed"] is True
        assert "numpy" in report["environment"]
        assert (Path(out) / "trace.csv").read_text().splitlines()[0] == "tau,value"

        assert _run_with(_failing_runner, ["verify", "modular", "--out", str(Path(tmp) / "fail")]) == 1
        assert _run_with(_raising_runner, ["verify", "modular", "--out", str(Path(tmp) / "raise")]) == 1
        report = json.loads((Path(tmp) / "raise" / "report.json").read_text())
        assert report["checks"][0]["detail"].startswith("DomainError")

        assert main(["verify", "modular", "--mass", "-2", "--out", out]) == 2
    print("✅ Exit codes and outputs work")


def test_tolerance_override_changes_verdict():
    with tempfile.TemporaryDirectory() as tmp:
        path = _write(tmp, "loose.env", "TOL.too_large = 2.0\n")
        argv = ["verify", "modular", "--config", path, "--out", str(Path(tmp) / "out")]
        assert _run_with(_failing_runner, argv) == 0
    print("✅ Tolerance overrides work")


def main_tests():
    """Run all CLI tests."""
    print("🧪 Running CLI tests\n")
    test_parse_config_defaults()
    test_flags_override_config_file()
    test_config_file_errors()
    test_invalid_flags()
    test_exit_codes_and_outputs()
    test_tolerance_override_changes_verdict()
    print("\n🎉 All CLI tests passed!")


if __name__ == "__main__":
    main_tests()
