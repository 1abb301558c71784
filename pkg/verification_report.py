"""
Verification reports: expected-vs-computed checks, run counters and the
JSON-lines / summary-table renderings written by the CLI.
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
STATUSES = (PASS, FAIL, INCONCLUSIVE)

# Fields that legitimately differ between identical runs.
TIMING_FIELDS = ("wall_time",)


@dataclass
class Check:
    """One report line."""
    name: str
    expected: Any
    computed: Any
    status: str
    detail: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"Unknown check status: {self.status}")


@dataclass
class Report:
    """Result of one verification campaign."""
    command: str
    config: Dict[str, Any] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)
    counters: Dict[str, int] = field(default_factory=dict)
    web_hashes: List[str] = field(default_factory=list)
    wall_time: float = 0.0

    def __post_init__(self):
        self.logger = logging.getLogger(__name__)

    def add_check(self, name: str, expected: Any, computed: Any, status: Optional[str] = None,
                  detail: str = "") -> Check:
        """Record a check; without an explicit status it passes iff computed == expected."""
        if status is None:
            status = PASS if computed == expected else FAIL
        check = Check(name, expected, computed, status, detail)
        self.checks.append(check)
        if status == FAIL:
            self.logger.warning(f"Check {name} failed: expected {expected}, computed {computed}")
        elif status == INCONCLUSIVE:
            self.logger.warning(f"Check {name} inconclusive: {detail}")
        return check

    def count(self, counter: str, amount: int = 1):
        self.counters[counter] = self.counters.get(counter, 0) + amount

    def add_web(self, content_hash: str):
        if content_hash not in self.web_hashes:
            self.web_hashes.append(content_hash)

    @property
    def failed(self) -> bool:
        return any(c.status == FAIL for c in self.checks)

    def status_counts(self) -> Dict[str, int]:
        return {s: sum(1 for c in self.checks if c.status == s) for s in STATUSES}

    def to_json_lines(self, include_timing: bool = True) -> str:
        """A header line followed by one line per check, all with sorted keys."""
        header = {
            "type": "header",
            "command": self.command,
            "config": self.config,
            "counters": self.counters,
            "web_hashes": self.web_hashes,
        }
        if include_timing:
            header["wall_time"] = self.wall_time
        lines = [json.dumps(header, sort_keys=True)]
        for check in self.checks:
            lines.append(json.dumps({"type": "check", **asdict(check)}, sort_keys=True))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_json_lines(cls, text: str) -> "Report":
        records = [json.loads(line) for line in text.splitlines() if line.strip()]
        if not records or records[0].get("type") != "header":
            raise ValueError("Report text does not start with a header line")
        header = records[0]
        report = cls(header["command"], header.get("config", {}), [], header.get("counters", {}),
                     header.get("web_hashes", []), header.get("wall_time", 0.0))
        for record in records[1:]:
            if record.get("type") != "check":
                raise ValueError(f"Unexpected report record: {record.get('type')}")
            report.checks.append(Check(record["name"], record["expected"], record["computed"],
                                       record["status"], record.get("detail", "")))
        return report

    def summary_table(self) -> str:
        """Fixed-width human-readable table of the checks."""
        width = max([len(c.name) for c in self.checks] + [5])
        marks = {PASS: "✓", FAIL: "✗", INCONCLUSIVE: "?"}
        lines = [f"{self.command}: {len(self.checks)} checks",
                 f"  {'check'.ljust(width)}  {'expected':>14}  {'computed':>14}  status"]
        for c in self.checks:
            lines.append(f"{marks[c.status]} {c.name.ljust(width)}  {str(c.expected):>14}  "
                         f"{str(c.computed):>14}  {c.status}")
        counts = self.status_counts()
        lines.append(f"  {counts[PASS]} passed, {counts[FAIL]} failed, {counts[INCONCLUSIVE]} inconclusive")
        if self.counters:
            lines.append("  counters: " + ", ".join(f"{k}={v}" for k, v in sorted(self.counters.items())))
        return "\n".join(lines)

    def save(self, file_path: Union[str, Path]) -> bool:
        """Write the JSON-lines form; returns True on success."""
        file_path = Path(file_path)
        try:
            file_path.write_text(self.to_json_lines(), encoding="utf-8")
            self.logger.info(f"Report written to: {file_path}")
            return True
        except OSError as e:
            self.logger.error(f"Error writing report: {e}")
            return False

    def __eq__(self, other) -> bool:
        if not isinstance(other, Report):
            return NotImplemented
        return (self.command, self.config, self.checks, self.counters, self.web_hashes, self.wall_time) == \
               (other.command, other.config, other.checks, other.counters, other.web_hashes, other.wall_time)
