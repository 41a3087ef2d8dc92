"""Deterministic delimited-file IO for every pipeline artifact.

All writers emit LF newlines, a fixed header, rows in a defined order, and
shortest round-trip float spellings, so identical inputs produce
byte-identical files. Nothing here stamps timestamps or machine state.
"""

from __future__ import annotations

import json
from typing import Any, Iterable, Sequence

from .ingest import GeoEvent


def fmt(value: Any) -> str:
    """Render a cell: floats via repr (shortest exact form), None empty."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def write_rows(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(cell) for cell in row) + "\n")


def read_rows(path: str, expected_header: Sequence[str] | None = None) -> list[list[str]]:
    with open(path, encoding="utf-8") as fh:
        lines = [line.rstrip("\r\n") for line in fh]
    lines = [line for line in lines if line.strip()]
    if not lines:
        raise ValueError(f"{path}: empty table")
    header = lines[0].split(",")
    if expected_header is not None and header != list(expected_header):
        raise ValueError(f"{path}: header {header} != expected {list(expected_header)}")
    return [line.split(",") for line in lines[1:]]


def write_json(path: str, obj: Any) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# Event files
# ---------------------------------------------------------------------------

EVENT_HEADER = ["user_id", "timestamp", "lat", "lon", "source", "country"]


def write_events(path: str, events: Sequence[GeoEvent], with_country: bool = True) -> None:
    header = EVENT_HEADER if with_country else EVENT_HEADER[:5]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for e in events:
            row = f"{e.user_id},{e.timestamp},{e.lat!r},{e.lon!r},{e.source}"
            if with_country:
                row += f",{e.country or ''}"
            fh.write(row + "\n")


def read_events(path: str) -> list[GeoEvent]:
    """Strict read of a previously written event table (no malformed rows)."""
    from .ingest import parse_events

    with open(path, encoding="utf-8") as fh:
        report = parse_events(fh)
    if report.errors:
        lineno, reason = report.errors[0]
        raise ValueError(f"{path}:{lineno}: {reason}")
    return report.events


# ---------------------------------------------------------------------------
# Reference inputs
# ---------------------------------------------------------------------------


def read_census(path: str) -> tuple[dict[str, int], dict[str, float]]:
    """Census table `code,population[,gdp_per_capita]` -> (populations, gdp)."""
    populations: dict[str, int] = {}
    gdp: dict[str, float] = {}
    for row in read_rows(path):
        if len(row) not in (2, 3):
            raise ValueError(f"{path}: expected 2 or 3 fields, got {row}")
        code = row[0].strip().upper()
        populations[code] = int(row[1])
        if len(row) == 3 and row[2].strip():
            gdp[code] = float(row[2])
    return populations, gdp


def read_capitals(path: str) -> dict[str, tuple[float, float]]:
    """Capitals table `code,lat,lon` -> code -> (lat, lon)."""
    out: dict[str, tuple[float, float]] = {}
    for row in read_rows(path):
        if len(row) != 3:
            raise ValueError(f"{path}: expected 3 fields, got {row}")
        out[row[0].strip().upper()] = (float(row[1]), float(row[2]))
    return out


def read_reference(path: str, column: int = 1) -> dict[str, float]:
    """Reference statistics `code,<value>[,...]`, one numeric column selected."""
    out: dict[str, float] = {}
    for row in read_rows(path):
        if column >= len(row):
            raise ValueError(f"{path}: row {row} has no column {column}")
        out[row[0].strip().upper()] = float(row[column])
    return out
