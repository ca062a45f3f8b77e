#!/usr/bin/env python3
"""
Verification results and report records.

CheckResult is what every library verifier returns; VerificationReport is
the per-case record written by the CLI as JSON lines or CSV.
"""

import csv
import json
import math
from dataclasses import dataclass, field
from typing import IO, Any, Dict, Iterable, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator
from rich.console import Console
from rich.table import Table

REPORT_FIELDS = [
    "suite",
    "params",
    "lhs",
    "rhs",
    "residual",
    "tolerance",
    "exact",
    "pass",
    "runtimeMs",
    "seed",
]


@dataclass
class CheckResult:
    """Outcome of one identity check: exact verdict (if any) and residual."""

    exact: Optional[bool]
    residual: float
    lhs: Any = None
    rhs: Any = None
    details: Dict[str, Any] = field(default_factory=dict)

    def passed(self, tolerance: float) -> bool:
        if self.exact is not None:
            return self.exact
        return not math.isnan(self.residual) and self.residual <= tolerance


def format_number(value: Any) -> str:
    """Shortest round-trip decimal; complex values as "<re>+<im>j"."""
    if value is None:
        return ""
    if isinstance(value, complex):
        re, im = repr(value.real), repr(value.imag)
        sign = "" if im.startswith("-") else "+"
        return f"{re}{sign}{im}j"
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    try:
        return repr(float(value))
    except (TypeError, ValueError):
        return str(value)


def format_value(value: Any) -> str:
    """Human value for `compute`: "0" for exact zero, else 15 decimals."""
    if isinstance(value, complex):
        if value.imag == 0:
            value = value.real
        else:
            return f"{value.real:.15f}{value.imag:+.15f}j"
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    x = float(value)
    if x == 0:
        return "0"
    return f"{x:.15f}"


class VerificationReport(BaseModel):
    """One verification case as emitted by `voronoi-forge verify`."""

    model_config = ConfigDict(populate_by_name=True)

    suite: str
    params: Dict[str, Any]
    lhs: str = ""
    rhs: str = ""
    residual: float
    tolerance: float
    exact: Optional[bool] = None
    passed: bool = Field(alias="pass")
    runtime_ms: int = Field(default=0, alias="runtimeMs")
    seed: int = 0

    @model_validator(mode="after")
    def _check_consistency(self) -> "VerificationReport":
        if not math.isnan(self.residual) and self.residual < 0:
            raise ValueError(f"Residual must be non-negative, got {self.residual}")
        expected = self.exact is True or (
            not math.isnan(self.residual) and self.residual <= self.tolerance
        )
        if self.exact is False:
            expected = False
        if self.passed != expected:
            raise ValueError(
                f"pass={self.passed} inconsistent with exact={self.exact}, "
                f"residual={self.residual}, tolerance={self.tolerance}"
            )
        return self

    @classmethod
    def from_check(
        cls,
        suite: str,
        params: Dict[str, Any],
        check: CheckResult,
        tolerance: float,
        seed: int,
        runtime_ms: int = 0,
    ) -> "VerificationReport":
        residual = float(check.residual)
        return cls(
            suite=suite,
            params=params,
            lhs=format_number(check.lhs),
            rhs=format_number(check.rhs),
            residual=residual,
            tolerance=tolerance,
            exact=check.exact,
            passed=check.passed(tolerance),
            runtime_ms=runtime_ms,
            seed=seed,
        )

    @classmethod
    def failure(
        cls, suite: str, params: Dict[str, Any], tolerance: float, seed: int
    ) -> "VerificationReport":
        """Record for a case whose computation raised a numeric error."""
        return cls(
            suite=suite,
            params=params,
            residual=math.inf,
            tolerance=tolerance,
            exact=None,
            passed=False,
            seed=seed,
        )

    def to_row(self) -> Dict[str, Any]:
        row = self.model_dump(by_alias=True)
        return {name: row[name] for name in REPORT_FIELDS}


def emit_report(
    records: Iterable[VerificationReport], fmt: str, stream: IO[str]
) -> int:
    """Write records in fixed field order; returns the number written."""
    if fmt not in ("jsonl", "csv"):
        raise ValueError(f"Unknown report format: {fmt}")
    count = 0
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(REPORT_FIELDS)
        for record in records:
            row = record.to_row()
            row["params"] = json.dumps(row["params"], sort_keys=True)
            row["residual"] = format_number(row["residual"])
            row["tolerance"] = format_number(row["tolerance"])
            row["exact"] = "" if row["exact"] is None else format_number(row["exact"])
            row["pass"] = format_number(row["pass"])
            writer.writerow([row[name] for name in REPORT_FIELDS])
            count += 1
    else:
        for record in records:
            row = record.to_row()
            # JSON has no inf or nan; those are written as in csv
            for name in ("residual", "tolerance"):
                if not math.isfinite(row[name]):
                    row[name] = format_number(row[name])
            stream.write(json.dumps(row, allow_nan=False) + "\n")
            count += 1
    stream.flush()
    return count


@dataclass
class SuiteSummary:
    suite: str
    cases: int = 0
    failures: int = 0
    worst_residual: float = 0.0

    def add(self, record: VerificationReport) -> None:
        self.cases += 1
        if not record.passed:
            self.failures += 1
        if record.exact is None and not math.isnan(record.residual):
            self.worst_residual = max(self.worst_residual, record.residual)


def print_summary(console: Console, summaries: List[SuiteSummary]) -> None:
    table = Table(title="Verification summary")
    table.add_column("Suite", style="cyan")
    table.add_column("Cases", justify="right")
    table.add_column("Failures", justify="right")
    table.add_column("Worst residual", justify="right")
    for summary in summaries:
        style = "red" if summary.failures else "green"
        table.add_row(
            summary.suite,
            str(summary.cases),
            f"[{style}]{summary.failures}[/{style}]",
            f"{summary.worst_residual:.3e}",
        )
    console.print(table)
