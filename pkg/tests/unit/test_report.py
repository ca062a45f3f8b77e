#!/usr/bin/env python3
"""
Unit tests for voronoi_forge.report module.
Tests number formatting, report records and the JSONL/CSV writers.
"""

import csv
import io
import json
import math

import pytest
from pydantic import ValidationError
from rich.console import Console

from voronoi_forge.report import (
    REPORT_FIELDS,
    CheckResult,
    SuiteSummary,
    VerificationReport,
    emit_report,
    format_number,
    format_value,
    print_summary,
)


def _record(residual=1e-12, exact=None, suite="gauss"):
    check = CheckResult(exact=exact, residual=residual, lhs=1j, rhs=1j)
    return VerificationReport.from_check(suite, {"q": 3}, check, 1e-10, seed=7)


class TestCheckResult:
    """Test cases for pass/fail decisions."""

    def test_exact_verdict_wins(self):
        """Test that an exact verdict overrides the residual."""
        assert CheckResult(exact=True, residual=1.0).passed(1e-10)
        assert not CheckResult(exact=False, residual=0.0).passed(1e-10)

    def test_numeric_verdict(self):
        """Test residual against tolerance."""
        assert CheckResult(exact=None, residual=1e-11).passed(1e-10)
        assert not CheckResult(exact=None, residual=1e-9).passed(1e-10)

    def test_nan_fails(self):
        """Test that a NaN residual never passes."""
        assert not CheckResult(exact=None, residual=math.nan).passed(1.0)


class TestFormatting:
    """Test cases for number formatting."""

    def test_format_number(self):
        """Test shortest round-trip output."""
        assert format_number(0.1) == "0.1"
        assert format_number(complex(1, -2)) == "1.0-2.0j"
        assert format_number(complex(0, 0.5)) == "0.0+0.5j"
        assert format_number(True) == "true"
        assert format_number(None) == ""
        assert format_number(3) == "3"

    def test_format_value(self):
        """Test the compute output format."""
        assert format_value(-1.0) == "-1.000000000000000"
        assert format_value(0.0) == "0"
        assert format_value(complex(2, 0)) == "2.000000000000000"
        assert format_value(complex(0, 1)) == "0.000000000000000+1.000000000000000j"
        assert format_value(5) == "5"


class TestVerificationReport:
    """Test cases for report records."""

    def test_from_check(self):
        """Test building a passing record."""
        record = _record()
        assert record.passed
        assert record.lhs == "0.0+1.0j"
        assert record.seed == 7

    def test_inconsistent_pass_rejected(self):
        """Test that pass must agree with exact and residual."""
        with pytest.raises(ValidationError, match="inconsistent"):
            VerificationReport(
                suite="x", params={}, residual=1.0, tolerance=0.1, passed=True
            )

    def test_negative_residual_rejected(self):
        """Test that residuals are non-negative."""
        with pytest.raises(ValidationError, match="non-negative"):
            VerificationReport(
                suite="x", params={}, residual=-1.0, tolerance=0.1, passed=True
            )

    def test_failure_record(self):
        """Test the record for a case that raised."""
        record = VerificationReport.failure("voronoi", {"q": 5}, 1e-6, 0)
        assert not record.passed
        assert math.isinf(record.residual)

    def test_row_field_order(self):
        """Test that rows follow the fixed field order."""
        assert list(_record().to_row()) == REPORT_FIELDS


class TestEmitReport:
    """Test cases for the JSONL and CSV writers."""

    def test_jsonl(self):
        """Test one JSON object per line with the fixed keys."""
        stream = io.StringIO()
        count = emit_report([_record(), _record(exact=True)], "jsonl", stream)
        lines = stream.getvalue().splitlines()
        assert count == 2
        assert [list(json.loads(line)) for line in lines] == [REPORT_FIELDS] * 2
        assert json.loads(lines[1])["exact"] is True

    def test_csv(self):
        """Test the CSV header and value encoding."""
        stream = io.StringIO()
        emit_report([_record()], "csv", stream)
        rows = list(csv.reader(io.StringIO(stream.getvalue())))
        assert rows[0] == REPORT_FIELDS
        row = dict(zip(rows[0], rows[1]))
        assert json.loads(row["params"]) == {"q": 3}
        assert row["exact"] == ""
        assert row["pass"] == "true"

    def test_jsonl_failure_is_strict_json(self):
        """Test raised and nan cases parse without inf or nan literals."""

        def reject(token):
            raise ValueError(f"Non-standard JSON constant {token}")

        records = [
            VerificationReport.failure("pipeline", {"q": 3}, 1e-5, 0),
            _record(residual=math.nan),
        ]
        stream = io.StringIO()
        emit_report(records, "jsonl", stream)
        rows = [
            json.loads(line, parse_constant=reject)
            for line in stream.getvalue().splitlines()
        ]
        assert rows[0]["residual"] == "inf"
        assert rows[0]["pass"] is False
        assert rows[1]["residual"] == "nan"
        assert rows[1]["tolerance"] == 1e-10

    def test_csv_failure(self):
        """Test the raised case writes the same residual text in CSV."""
        stream = io.StringIO()
        record = VerificationReport.failure("pipeline", {"q": 3}, 1e-5, 0)
        emit_report([record], "csv", stream)
        rows = list(csv.reader(io.StringIO(stream.getvalue())))
        assert dict(zip(rows[0], rows[1]))["residual"] == "inf"

    def test_empty_csv(self):
        """Test that no records still writes the header."""
        stream = io.StringIO()
        assert emit_report([], "csv", stream) == 0
        assert stream.getvalue() == ",".join(REPORT_FIELDS) + "\n"

    def test_unknown_format(self):
        """Test that only jsonl and csv are accepted."""
        with pytest.raises(ValueError, match="Unknown report format"):
            emit_report([], "xml", io.StringIO())


class TestSuiteSummary:
    """Test cases for per-suite aggregation."""

    def test_add(self):
        """Test case and failure counting with the worst numeric residual."""
        summary = SuiteSummary("gauss")
        summary.add(_record(residual=1e-12))
        summary.add(_record(residual=1e-9))
        summary.add(_record(residual=5.0, exact=True))
        assert (summary.cases, summary.failures) == (3, 1)
        assert summary.worst_residual == 1e-9

    def test_print_summary(self):
        """Test that the summary table renders."""
        console = Console(file=io.StringIO(), width=120)
        summary = SuiteSummary("gauss", cases=2, failures=1, worst_residual=0.5)
        print_summary(console, [summary])
        output = console.file.getvalue()
        assert "gauss" in output and "5.000e-01" in output
