"""Structured-text run reports.

A report is a sequence of ``key = value`` lines in insertion order, then an
optional ``[rates]`` block whose lines read ``name = hits/total = ratio`` (the
ratio printed with 6 decimals, ``nan`` for an empty denominator), then an
optional ``[trials]`` block: a tab-separated header row and one row per trial.
``wall_time`` is the only field that varies between replays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


@dataclass
class RunReport:
    mode: str
    params: dict[str, Any] = field(default_factory=dict)
    results: dict[str, Any] = field(default_factory=dict)
    counts: dict[str, tuple[int, int]] = field(default_factory=dict)
    columns: list[str] = field(default_factory=list)
    trials: list[list[Any]] = field(default_factory=list)
    wall_time: float = 0.0

    def rate(self, name: str) -> float:
        hits, total = self.counts[name]
        return hits / total if total else float("nan")

    def exact_rate(self, name: str) -> Fraction | None:
        hits, total = self.counts[name]
        return Fraction(hits, total) if total else None

    def add_count(self, name: str, hit: bool, applicable: bool = True):
        h, t = self.counts.get(name, (0, 0))
        if applicable:
            self.counts[name] = (h + int(bool(hit)), t + 1)
        else:
            self.counts[name] = (h, t)

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.trials]


def _fmt(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple, set, frozenset)):
        items = sorted(v) if isinstance(v, (set, frozenset)) else v
        return ",".join(str(x) for x in items) if items else "-"
    if v is None:
        return "-"
    return str(v)


def format_report(rep: RunReport, include_time: bool = True) -> str:
    lines = [f"mode = {rep.mode}"]
    for k, v in rep.params.items():
        lines.append(f"{k} = {_fmt(v)}")
    for k, v in rep.results.items():
        lines.append(f"{k} = {_fmt(v)}")
    if include_time:
        lines.append(f"wall_time = {rep.wall_time:.3f}")
    if rep.counts:
        lines.append("[rates]")
        for name, (h, t) in rep.counts.items():
            ratio = f"{h / t:.6f}" if t else "nan"
            lines.append(f"{name} = {h}/{t} = {ratio}")
    if rep.columns:
        lines.append("[trials]")
        lines.append("\t".join(rep.columns))
        for row in rep.trials:
            lines.append("\t".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> RunReport:
    """Inverse of :func:`format_report`; values come back as strings."""
    rep = RunReport(mode="")
    section = "head"
    for line in text.splitlines():
        if not line.strip():
            continue
        if line == "[rates]":
            section = "rates"
            continue
        if line == "[trials]":
            section = "trials_head"
            continue
        if section == "head":
            key, _, val = line.partition(" = ")
            if key == "mode":
                rep.mode = val
            elif key == "wall_time":
                rep.wall_time = float(val)
            else:
                rep.params[key] = val
        elif section == "rates":
            key, _, val = line.partition(" = ")
            frac = val.split(" = ")[0]
            h, t = frac.split("/")
            rep.counts[key] = (int(h), int(t))
        elif section == "trials_head":
            rep.columns = line.split("\t")
            section = "trials"
        else:
            rep.trials.append(line.split("\t"))
    return rep
