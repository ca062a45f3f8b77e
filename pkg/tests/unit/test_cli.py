#!/usr/bin/env python3
"""
Unit tests for voronoi_forge.cli module.
Tests argument parsing, the compute command and small verify runs.
"""

import json
from unittest.mock import patch

import pytest

from voronoi_forge.cli import (
    EXIT_FAILED,
    EXIT_OK,
    EXIT_USAGE,
    main,
    parse_arguments,
    parse_pairs,
    run,
)
from voronoi_forge.errors import ConfigError
from voronoi_forge.report import REPORT_FIELDS


class TestParsing:
    """Test cases for command-line parsing."""

    def test_pairs(self):
        """Test --key value and --key=value forms."""
        pairs = parse_pairs(["--m", "1", "--c=3", "--half-width", "0.5"])
        assert pairs == {"m": "1", "c": "3", "half_width": "0.5"}

    def test_pair_errors(self):
        """Test malformed parameter lists."""
        with pytest.raises(ConfigError, match="Expected --key value"):
            parse_pairs(["m", "1"])
        with pytest.raises(ConfigError, match="Missing value for --m"):
            parse_pairs(["--m"])

    def test_verify_defaults(self):
        """Test the verify defaults and collected overrides."""
        args, pairs = parse_arguments(["verify", "gauss", "--gauss_max_q", "9"])
        assert args.suite == "gauss"
        assert (args.seed, args.jobs, args.out, args.format) == (0, 1, "-", "jsonl")
        assert pairs == {"gauss_max_q": "9"}

    def test_unknown_suite(self):
        """Test that an unknown suite is a usage error."""
        with patch("sys.argv", ["voronoi-forge", "verify", "nosuch"]):
            with pytest.raises(SystemExit) as excinfo:
                main()
        assert excinfo.value.code == 2

    def test_stray_token(self):
        """Test that a stray positional is a usage error."""
        with pytest.raises(SystemExit) as excinfo:
            parse_arguments(["compute", "kloosterman", "stray"])
        assert excinfo.value.code == 2


class TestCompute:
    """Test cases for `voronoi-forge compute`."""

    def test_kloosterman(self, capsys):
        """Test S(1, 1; 3) = -1 with its exact form on stderr."""
        code = run(["compute", "kloosterman", "--m", "1", "--n", "1", "--c", "3"])
        captured = capsys.readouterr()
        assert code == EXIT_OK
        assert captured.out == "-1.000000000000000\n"
        assert "exact: -1" in captured.err

    def test_bessel_at_zero(self, capsys):
        """Test that an exact zero prints as 0."""
        assert run(["compute", "bessel-j", "--k", "12", "--x", "0"]) == EXIT_OK
        assert capsys.readouterr().out == "0\n"

    def test_lambda(self, capsys):
        """Test the normalized Hecke eigenvalue of Delta at 2."""
        assert run(["compute", "lambda", "--k", "12", "--n", "2"]) == EXIT_OK
        assert capsys.readouterr().out == "-0.530330085889911\n"

    def test_gauss_sum(self, capsys):
        """Test that complex values carry an imaginary part."""
        assert run(["compute", "gauss-sum", "--chi", "3:1"]) == EXIT_OK
        out = capsys.readouterr().out.strip()
        assert out.endswith("j")
        assert complex(out) == pytest.approx(1j, abs=1e-12)

    def test_missing_parameter(self, capsys):
        """Test that a missing parameter exits with a usage error."""
        assert run(["compute", "kloosterman", "--m", "1"]) == EXIT_USAGE
        assert "Missing parameter --n" in capsys.readouterr().err

    def test_invalid_value(self, capsys):
        """Test that a non-numeric parameter exits with a usage error."""
        code = run(["compute", "kloosterman", "--m", "one", "--n", "1", "--c", "3"])
        assert code == EXIT_USAGE
        assert "invalid value" in capsys.readouterr().err


class TestVerify:
    """Test cases for `voronoi-forge verify`."""

    def test_jsonl_stdout(self, capsys):
        """Test JSON-lines records on stdout."""
        code = run(["verify", "gauss", "--gauss_max_q", "5", "--quiet"])
        captured = capsys.readouterr()
        assert code == EXIT_OK
        rows = [json.loads(line) for line in captured.out.splitlines()]
        assert rows and all(list(row) == REPORT_FIELDS for row in rows)
        assert all(row["pass"] for row in rows)
        assert "All" in captured.err

    def test_csv_file(self, tmp_path):
        """Test a CSV report written to a file."""
        out = tmp_path / "report.csv"
        code = run(
            [
                "verify",
                "kloosterman-factorization",
                "--kloosterman_max_mn",
                "2",
                "--kloosterman_max_c",
                "3",
                "--format",
                "csv",
                "--out",
                str(out),
                "--quiet",
            ]
        )
        lines = out.read_text(encoding="utf-8").splitlines()
        assert code == EXIT_OK
        assert lines[0] == ",".join(REPORT_FIELDS)
        assert len(lines) == 1 + 2 * 2 * 3

    def test_failures_set_exit_code(self, capsys):
        """Test that a mutated identity makes the run fail."""
        code = run(
            [
                "verify",
                "dft-duality",
                "--dft_moduli",
                "3,5",
                "--dft_max_ell",
                "2",
                "--dft_samples",
                "3",
                "--dft_mutate_root_number",
                "true",
            ]
        )
        assert code == EXIT_FAILED
        assert "cases failed" in capsys.readouterr().err

    def test_bad_configuration(self, capsys):
        """Test configuration errors exit with a usage error."""
        assert run(["verify", "gauss", "--charsum_max_r", "0"]) == EXIT_USAGE
        assert run(["verify", "gauss", "--no_such_key", "1"]) == EXIT_USAGE
        assert "Unknown configuration key" in capsys.readouterr().err

    def test_bad_jobs(self):
        """Test that --jobs must be positive."""
        assert run(["verify", "gauss", "--jobs", "0", "--quiet"]) == EXIT_USAGE

    def test_unwritable_output(self, tmp_path):
        """Test that a report path in a missing directory is an I/O error."""
        out = tmp_path / "missing" / "report.jsonl"
        code = run(["verify", "gauss", "--gauss_max_q", "3", "--out", str(out)])
        assert code == 3
