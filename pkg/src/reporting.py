"""
Report Envelope and Exporters
=============================
Every CLI command produces a ReportEnvelope: tool version, a canonical echo
of the command, one section per modulus (regime flag + payload + checks) and
a pass/fail summary. The envelope renders to JSON, CSV or a plain-text layout.

Checks always carry both computed sides; a check is never a bare boolean.
"""

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from src import TOOL_NAME, __version__

logger = logging.getLogger(__name__)

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_SKIPPED = "skipped"

FORMAT_JSON = "json"
FORMAT_CSV = "csv"
FORMAT_TEXT = "text"
FORMATS = (FORMAT_JSON, FORMAT_CSV, FORMAT_TEXT)

SPECTRUM_CSV_HEADER = ["mu", "lambda", "multiplicity"]
SPECTRUM_MULTI_CSV_HEADER = ["n", "method", "mu", "lambda", "multiplicity"]
CHECKS_CSV_HEADER = ["n", "name", "lhs", "rhs", "status"]

RULE = "=" * 70


# ============================================================================
# IDENTITY CHECKS
# ============================================================================

@dataclass(frozen=True)
class IdentityCheck:
    """One verified claim: lhs and rhs as computed, and whether they agree."""

    name: str
    lhs: Any
    rhs: Any
    passed: Optional[bool]
    detail: str = ""

    @classmethod
    def equal(cls, name: str, lhs: Any, rhs: Any, detail: str = "") -> "IdentityCheck":
        return cls(name, lhs, rhs, lhs == rhs, detail)

    @classmethod
    def below(cls, name: str, lhs: Any, rhs: Any, detail: str = "") -> "IdentityCheck":
        """Passes when lhs < rhs (tolerance checks)."""
        return cls(name, lhs, rhs, lhs < rhs, detail)

    @classmethod
    def skipped(cls, name: str, detail: str) -> "IdentityCheck":
        return cls(name, None, None, None, detail)

    @property
    def status(self) -> str:
        if self.passed is None:
            return STATUS_SKIPPED
        return STATUS_PASS if self.passed else STATUS_FAIL

    def to_dict(self) -> Dict[str, Any]:
        data = {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "pass": self.passed}
        if self.passed is None:
            data["status"] = STATUS_SKIPPED
        if self.detail:
            data["detail"] = self.detail
        return data


def summarize(checks: Sequence[IdentityCheck]) -> Dict[str, int]:
    counts = {STATUS_PASS: 0, STATUS_FAIL: 0, STATUS_SKIPPED: 0}
    for check in checks:
        counts[check.status] += 1
    return counts


# ============================================================================
# ENVELOPE
# ============================================================================

@dataclass
class ReportSection:
    """Results for one modulus (or for an n-independent computation when n is None)."""

    n: Optional[int]
    regime: Optional[str]
    payload: Dict[str, Any] = field(default_factory=dict)
    checks: List[IdentityCheck] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"n": self.n, "regime": self.regime}
        data.update(self.payload)
        data["checks"] = [c.to_dict() for c in self.checks]
        return data


@dataclass
class ReportEnvelope:
    command: str
    sections: List[ReportSection] = field(default_factory=list)
    tool: str = TOOL_NAME
    version: str = __version__

    def add(self, section: ReportSection) -> ReportSection:
        self.sections.append(section)
        return section

    @property
    def checks(self) -> List[IdentityCheck]:
        return [c for s in self.sections for c in s.checks]

    @property
    def failed(self) -> bool:
        return any(c.passed is False for c in self.checks)

    def summary(self) -> Dict[str, Any]:
        counts = summarize(self.checks)
        counts["verdict"] = STATUS_FAIL if self.failed else STATUS_PASS
        return counts

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tool": self.tool,
            "version": self.version,
            "command": self.command,
            "sections": [s.to_dict() for s in self.sections],
            "summary": self.summary(),
        }

    # ------------------------------------------------------------------
    # Renderers
    # ------------------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def to_csv(self) -> str:
        """
        Spectrum tables when the envelope carries any, otherwise the check list.

        A single table uses the fixed header "mu,lambda,multiplicity"; several
        tables are keyed by n and method.
        """
        tables = [t for s in self.sections for t in s.payload.get("tables", [])]
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        if len(tables) == 1:
            writer.writerow(SPECTRUM_CSV_HEADER)
            for row in tables[0]["rows"]:
                writer.writerow([row["mu"], row["lambda"], row["multiplicity"]])
        elif tables:
            writer.writerow(SPECTRUM_MULTI_CSV_HEADER)
            for table in tables:
                for row in table["rows"]:
                    writer.writerow([table["n"], table["method"], row["mu"], row["lambda"], row["multiplicity"]])
        else:
            writer.writerow(CHECKS_CSV_HEADER)
            for section in self.sections:
                for check in section.checks:
                    writer.writerow([section.n, check.name, _compact(check.lhs), _compact(check.rhs), check.status])
        return buffer.getvalue()

    def to_text(self) -> str:
        lines = [RULE, f"  {self.tool.upper()} {self.version} | {self.command}", RULE]
        for section in self.sections:
            lines.append("")
            if section.n is not None:
                lines.append(f"n = {section.n}  [{section.regime}]")
            for table in section.payload.get("tables", []):
                lines.extend(render_table(table))
            for key, value in section.payload.items():
                if key == "tables":
                    continue
                if isinstance(value, list) and value and isinstance(value[0], str):
                    lines.append(f"{key}:")
                    lines.extend(f"  {item}" for item in value)
                else:
                    lines.append(f"{key}: {_compact(value)}")
            for check in section.checks:
                mark = {STATUS_PASS: "✓", STATUS_FAIL: "✗", STATUS_SKIPPED: "-"}[check.status]
                if check.passed is None:
                    lines.append(f"  {mark} {check.name}: skipped ({check.detail})")
                else:
                    lines.append(f"  {mark} {check.name}: {_compact(check.lhs)} vs {_compact(check.rhs)}")
        summary = self.summary()
        lines.extend([
            "",
            RULE,
            f"  passed={summary[STATUS_PASS]} failed={summary[STATUS_FAIL]} "
            f"skipped={summary[STATUS_SKIPPED]} verdict={summary['verdict']}",
            RULE,
        ])
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == FORMAT_JSON:
            return self.to_json()
        if fmt == FORMAT_CSV:
            return self.to_csv()
        if fmt == FORMAT_TEXT:
            return self.to_text()
        raise ValueError(f"Unsupported format: {fmt}")


def render_table(table: Dict[str, Any]) -> List[str]:
    """mu | lambda | multiplicity layout of one spectrum table."""
    lines = [
        f"  method: {table['method']}",
        "     mu | lambda | multiplicity",
        "  ------+--------+-------------",
    ]
    for row in table["rows"]:
        lines.append(f"  {row['mu']:>5} | {row['lambda']:>6} | {row['multiplicity']:>12}")
    total = sum(row["multiplicity"] for row in table["rows"])
    lines.append(f"  total multiplicity: {total}")
    return lines


def _compact(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.3e}"
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(value, separators=(",", ":"))
    return str(value)
