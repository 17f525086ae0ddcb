"""Check records and report rendering (aligned table / machine-readable lines)."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["CheckRecord", "Report", "render_table", "render_records", "PASS", "FAIL", "FLAGGED"]

PASS = "pass"
FAIL = "fail"
FLAGGED = "flagged"


@dataclass(frozen=True)
class CheckRecord:
    check_id: str
    paper_loc: str
    status: str
    residual: str | None = None
    note: str | None = None

    def __post_init__(self):
        if self.status not in (PASS, FAIL, FLAGGED):
            raise ValueError(f"bad status {self.status!r}")

    def to_dict(self) -> dict:
        out = {"id": self.check_id, "paper_loc": self.paper_loc, "status": self.status}
        if self.residual is not None:
            out["residual"] = self.residual
        if self.note is not None:
            out["note"] = self.note
        return out


@dataclass
class Report:
    suite: str
    records: list[CheckRecord] = field(default_factory=list)

    def add(self, check_id: str, paper_loc: str, status: str,
            residual: str | None = None, note: str | None = None):
        self.records.append(CheckRecord(check_id, paper_loc, status, residual, note))

    @property
    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, FLAGGED: 0}
        for r in self.records:
            out[r.status] += 1
        return out

    @property
    def ok(self) -> bool:
        return self.counts[FAIL] == 0

    def to_dict(self) -> dict:
        return {"suite": self.suite, "counts": self.counts,
                "records": [r.to_dict() for r in self.records]}


def render_table(reports: list[Report]) -> str:
    lines = []
    for rep in reports:
        c = rep.counts
        lines.append(f"== {rep.suite}: {c[PASS]} pass, {c[FAIL]} fail, {c[FLAGGED]} flagged ==")
        width = max((len(r.check_id) for r in rep.records), default=0)
        for r in rep.records:
            line = f"  {r.status.upper():7s} {r.check_id:<{width}s}  {r.paper_loc}"
            if r.note:
                line += f"  [{r.note}]"
            if r.residual:
                line += f"  residual: {r.residual}"
            lines.append(line)
    total = {PASS: 0, FAIL: 0, FLAGGED: 0}
    for rep in reports:
        for k, v in rep.counts.items():
            total[k] += v
    lines.append(f"== total: {total[PASS]} pass, {total[FAIL]} fail, {total[FLAGGED]} flagged ==")
    return "\n".join(lines)


def render_records(reports: list[Report]) -> str:
    """One stable tab-separated line per check."""
    lines = []
    for rep in reports:
        for r in rep.records:
            lines.append("\t".join([
                rep.suite, r.check_id, r.status, r.paper_loc,
                r.note or "", r.residual or "",
            ]).rstrip("\t"))
    return "\n".join(lines)
