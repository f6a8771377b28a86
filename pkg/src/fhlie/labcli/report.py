"""Result tables, pass/fail verdicts and their TSV / text rendering."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Sequence

MAX_EXIT = 125


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Table:
    name: str
    header: Sequence[str]
    rows: list[Sequence[Any]] = field(default_factory=list)

    def add(self, *row):
        if len(row) != len(self.header):
            raise ValueError(f"row of length {len(row)} for {len(self.header)} columns")
        self.rows.append(row)


def _cell(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if x is None:
        return "none"
    if isinstance(x, (list, tuple)):
        return ",".join(_cell(y) for y in x)
    return str(x)


@dataclass
class Report:
    title: str
    tables: list[Table] = field(default_factory=list)
    verdicts: list[Verdict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    started: float = field(default_factory=time.perf_counter)
    elapsed: float | None = None

    def table(self, name: str, header: Sequence[str]) -> Table:
        t = Table(name, list(header))
        self.tables.append(t)
        return t

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        self.verdicts.append(Verdict(name, bool(passed), detail))
        return bool(passed)

    def note(self, text: str) -> None:
        self.notes.append(text)

    def extend(self, other: "Report") -> None:
        self.tables += other.tables
        self.verdicts += other.verdicts
        self.notes += other.notes

    def finish(self) -> "Report":
        self.elapsed = time.perf_counter() - self.started
        return self

    @property
    def failures(self) -> list[Verdict]:
        return [v for v in self.verdicts if not v.passed]

    @property
    def exit_code(self) -> int:
        return min(len(self.failures), MAX_EXIT)

    def to_tsv(self) -> str:
        out = []
        for t in self.tables:
            out.append(f"# {t.name}")
            out.append("\t".join(t.header))
            out += ["\t".join(_cell(x) for x in row) for row in t.rows]
            out.append("")
        out.append("# verdicts")
        out.append("verdict\tresult\tdetail")
        out += [f"{v.name}\t{'pass' if v.passed else 'FAIL'}\t{v.detail}" for v in self.verdicts]
        return "\n".join(out) + "\n"

    def summary(self) -> str:
        elapsed = self.elapsed if self.elapsed is not None else time.perf_counter() - self.started
        passed = len(self.verdicts) - len(self.failures)
        lines = [f"== {self.title}", *self.notes]
        for v in self.verdicts:
            mark = "ok  " if v.passed else "FAIL"
            lines.append(f"  [{mark}] {v.name}" + (f"  ({v.detail})" if v.detail else ""))
        lines.append(f"{passed}/{len(self.verdicts)} verdicts passed in {elapsed:.2f}s")
        return "\n".join(lines) + "\n"
