"""
Verification reports shared by every suite.

A report is one identity check: its inputs, both sides, the residual, the
tolerance it was held to and the verdict. Exact quantities travel as
"num/den" strings so that failures are reproducible bit-for-bit.
"""

import json
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Union

import jsonschema
import pandas as pd

from .exact_arith import format_rational

logger = logging.getLogger(__name__)

Value = Union[Fraction, float, int, str, None]

REPORT_COLUMNS = [
    "identity_id",
    "params",
    "lhs",
    "rhs",
    "residual",
    "tolerance",
    "pass",
    "method",
    "subdivisions",
    "runtime_ms",
    "error",
]


def _encode(value: Any) -> Any:
    """JSON-friendly encoding: rationals as strings, everything else as-is."""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        # numpy scalars
        return value.item()
    return value


@dataclass
class VerificationReport:
    identity_id: str
    params: Dict[str, Any]
    lhs: Value
    rhs: Value
    residual: Value
    tolerance: Value
    passed: bool
    method: str
    subdivisions: Optional[int] = None
    runtime_ms: float = 0.0
    details: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "identity_id": self.identity_id,
            "params": _encode(self.params),
            "lhs": _encode(self.lhs),
            "rhs": _encode(self.rhs),
            "residual": _encode(self.residual),
            "tolerance": _encode(self.tolerance),
            "pass": bool(self.passed),
            "method": self.method,
            "subdivisions": self.subdivisions,
            "runtime_ms": float(self.runtime_ms),
            "details": _encode(self.details),
            "error": self.error,
        }

    @classmethod
    def failure(cls, identity_id: str, params: Dict[str, Any], method: str, error: Exception) -> "VerificationReport":
        """Report for a case that raised instead of producing both sides."""
        return cls(
            identity_id=identity_id,
            params=params,
            lhs=None,
            rhs=None,
            residual=None,
            tolerance=None,
            passed=False,
            method=method,
            error=f"{type(error).__name__}: {error}",
        )


def exact_report(identity_id: str, params: Dict[str, Any], lhs: Fraction, rhs: Fraction,
                 method: str = "exact", details: Optional[Dict[str, Any]] = None) -> VerificationReport:
    """Zero-tolerance comparison of two exact rationals."""
    residual = lhs - rhs
    return VerificationReport(
        identity_id=identity_id,
        params=params,
        lhs=lhs,
        rhs=rhs,
        residual=residual,
        tolerance=Fraction(0),
        passed=residual == 0,
        method=method,
        details=details or {},
    )


@contextmanager
def stopwatch() -> Iterator[Dict[str, float]]:
    """Measure wall time in milliseconds into the yielded dict."""
    timing = {"runtime_ms": 0.0}
    start = time.perf_counter()
    try:
        yield timing
    finally:
        timing["runtime_ms"] = (time.perf_counter() - start) * 1000.0


@dataclass
class SweepSummary:
    suite: str
    total: int
    failures: int
    max_residual: Optional[float]
    failed_ids: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    @classmethod
    def from_reports(cls, suite: str, reports: Sequence[VerificationReport]) -> "SweepSummary":
        residuals = []
        for report in reports:
            if report.residual is None:
                continue
            residuals.append(abs(float(report.residual)))
        failed = [r for r in reports if not r.passed]
        return cls(
            suite=suite,
            total=len(reports),
            failures=len(failed),
            max_residual=max(residuals) if residuals else None,
            failed_ids=[f"{r.identity_id} {_encode(r.params)}" for r in failed],
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "total": self.total,
            "failures": self.failures,
            "max_residual": self.max_residual,
            "pass": self.passed,
        }

    def log(self) -> None:
        logger.info(
            f"Suite {self.suite}: {self.total} checks, {self.failures} failures, "
            f"max residual {self.max_residual}"
        )
        for failed in self.failed_ids[:20]:
            logger.warning(f"Suite {self.suite} failed: {failed}")


def reports_to_frame(reports: Sequence[VerificationReport]) -> pd.DataFrame:
    """Flatten reports into the CSV column layout."""
    rows = []
    for report in reports:
        row = report.to_dict()
        row["params"] = json.dumps(row["params"], sort_keys=True)
        rows.append({column: row[column] for column in REPORT_COLUMNS})
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def build_document(reports: Sequence[VerificationReport], header: Dict[str, Any],
                   summaries: Sequence[SweepSummary] = ()) -> Dict[str, Any]:
    return {
        "header": _encode(header),
        "summary": [s.to_dict() for s in summaries],
        "reports": [r.to_dict() for r in reports],
    }


def write_reports(reports: Sequence[VerificationReport], path: Optional[str], fmt: str = "json",
                  header: Optional[Dict[str, Any]] = None, summaries: Sequence[SweepSummary] = ()) -> str:
    """Serialize reports as a JSON document or CSV table.

    Writes to `path` when given; the rendered text is returned either way.
    """
    if fmt == "csv":
        text = reports_to_frame(reports).to_csv(index=False)
    elif fmt == "json":
        document = build_document(reports, header or {}, summaries)
        text = json.dumps(document, indent=2, sort_keys=False) + "\n"
    else:
        raise ValueError(f"Unknown report format: {fmt}")

    if path:
        Path(path).write_text(text)
        logger.info(f"Wrote {len(reports)} reports to {path}")
    return text


def load_schema() -> Dict[str, Any]:
    schema_text = resources.files("dslab").joinpath("schemas/verification_report.schema.json").read_text()
    return json.loads(schema_text)


def validate_document(document: Dict[str, Any]) -> None:
    """Raise jsonschema.ValidationError if the document breaks the published schema."""
    jsonschema.validate(instance=document, schema=load_schema())


def validate_report_file(path: str) -> None:
    with open(path, "r") as f:
        validate_document(json.load(f))
