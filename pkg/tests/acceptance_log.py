"""Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""

from __future__ import annotations

LINES: list[str] = []


def record(number: int, title: str, ok: bool, detail: str, soft: bool = False) -> str:
    status = "PASS" if ok else ("FAIL (soft)" if soft else "FAIL")
    line = f"criterion {number:>2} {status:<11} {title}: {detail}"
    LINES.append(line)
    print(line)
    return line
