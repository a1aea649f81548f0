"""Quarterly claims/liabilities panels, net positions and creditor/debtor roles."""
from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, TextIO

import numpy as np

from crossnet.errors import (
    DuplicateRecord,
    EmptyPanel,
    GapInPeriods,
    MalformedHeader,
    MalformedPeriod,
    MalformedValue,
    RangeOutOfBounds,
    UnknownEntity,
)

PANEL_HEADER = ("entity", "period", "claims", "liabilities")
ROLES_HEADER = ("entity", "average_position", "role")
_PERIOD_RE = re.compile(r"^[0-9]{4}Q[1-4]$")
_AMOUNT_RE = re.compile(r"^[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?$")


def quarter_index(label: str) -> int:
    """Map ``YYYYQk`` to a running quarter count (consecutive quarters differ by 1)."""
    if not isinstance(label, str) or not _PERIOD_RE.match(label):
        raise MalformedPeriod(f"period {label!r} does not match YYYYQ[1-4]")
    return int(label[:4]) * 4 + int(label[5]) - 1


def quarter_label(index: int) -> str:
    year, q = divmod(index, 4)
    return f"{year:04d}Q{q + 1}"


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.flags.writeable = False
    return a


def _check_periods(periods: tuple[str, ...]) -> None:
    idx = [quarter_index(p) for p in periods]
    for prev, cur, label in zip(idx, idx[1:], periods[1:]):
        if cur != prev + 1:
            raise GapInPeriods(f"periods not consecutive at {label}")


@dataclass(frozen=True, eq=False)
class Panel:
    entities: tuple[str, ...]
    periods: tuple[str, ...]
    claims: np.ndarray
    liabilities: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entities", tuple(self.entities))
        object.__setattr__(self, "periods", tuple(self.periods))
        object.__setattr__(self, "claims", _frozen(self.claims))
        object.__setattr__(self, "liabilities", _frozen(self.liabilities))
        if len(set(self.entities)) != len(self.entities):
            raise DuplicateRecord("entity codes must be unique")
        _check_periods(self.periods)
        shape = (len(self.entities), len(self.periods))
        if self.claims.shape != shape or self.liabilities.shape != shape:
            raise MalformedValue(
                f"claims/liabilities must both have shape {shape}, got "
                f"{self.claims.shape} and {self.liabilities.shape}"
            )

    def __eq__(self, other):
        if not isinstance(other, Panel):
            return NotImplemented
        return (
            self.entities == other.entities
            and self.periods == other.periods
            and np.array_equal(self.claims, other.claims)
            and np.array_equal(self.liabilities, other.liabilities)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class PositionMatrix:
    """Net claims per entity (rows) and quarter (columns)."""

    entities: tuple[str, ...]
    periods: tuple[str, ...]
    positions: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entities", tuple(self.entities))
        object.__setattr__(self, "periods", tuple(self.periods))
        object.__setattr__(self, "positions", _frozen(self.positions))
        if len(set(self.entities)) != len(self.entities):
            raise DuplicateRecord("entity codes must be unique")
        _check_periods(self.periods)
        if self.positions.shape != (len(self.entities), len(self.periods)):
            raise MalformedValue(f"positions must have shape {(len(self.entities), len(self.periods))}")

    def __eq__(self, other):
        if not isinstance(other, PositionMatrix):
            return NotImplemented
        return (
            self.entities == other.entities
            and self.periods == other.periods
            and np.array_equal(self.positions, other.positions)
        )

    __hash__ = None

    def series(self, entity: str) -> np.ndarray:
        return self.positions[self._row(entity)]

    def _row(self, entity: str) -> int:
        try:
            return self.entities.index(entity)
        except ValueError:
            raise UnknownEntity(f"unknown entity {entity!r}") from None


class Role(str, Enum):
    CREDITOR = "Creditor"
    DEBTOR = "Debtor"
    NEUTRAL = "Neutral"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class RoleAssignment:
    entity: str
    average_position: float
    role: Role


# ------------------------------------------------------------------ parsing


def _parse_amount(raw: str, where: str) -> float:
    # float() alone would also take "nan", "inf" and "1_000".
    text = raw.strip()
    if not _AMOUNT_RE.match(text):
        raise MalformedValue(f"non-numeric amount {raw!r} at {where}")
    value = float(text)
    if not np.isfinite(value):
        raise MalformedValue(f"amount {raw!r} overflows at {where}")
    return value


def parse_panel(source: TextIO | Iterable[str]) -> Panel:
    """Read a long-format ``entity,period,claims,liabilities`` CSV.

    Row order is irrelevant: entities come out sorted, periods chronological.
    Every entity must cover the same gap-free run of quarters.
    """
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyPanel("panel file is empty") from None
    header = [h.strip() for h in header]
    if header and header[0].startswith("﻿"):
        header[0] = header[0][1:]
    if tuple(header) != PANEL_HEADER:
        raise MalformedHeader(f"expected header {','.join(PANEL_HEADER)}, got {','.join(header)}")

    cells: dict[tuple[str, int], tuple[float, float]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not f.strip() for f in row):
            continue
        if len(row) != 4:
            raise MalformedValue(f"line {lineno}: expected 4 fields, got {len(row)}")
        entity, period = row[0].strip(), row[1].strip()
        if not entity:
            raise MalformedValue(f"line {lineno}: empty entity code")
        try:
            q = quarter_index(period)
        except MalformedPeriod as exc:
            raise MalformedPeriod(f"line {lineno}: {exc}") from None
        where = f"line {lineno} ({entity},{period})"
        key = (entity, q)
        if key in cells:
            raise DuplicateRecord(f"duplicate record for {entity} {period} at line {lineno}")
        cells[key] = (_parse_amount(row[2], where), _parse_amount(row[3], where))

    if not cells:
        raise EmptyPanel("panel has no data rows")

    entities = sorted({e for e, _ in cells})
    quarters = [q for _, q in cells]
    first, last = min(quarters), max(quarters)
    span = range(first, last + 1)
    claims = np.empty((len(entities), len(span)))
    liabilities = np.empty_like(claims)
    for i, entity in enumerate(entities):
        for t, q in enumerate(span):
            try:
                claims[i, t], liabilities[i, t] = cells[(entity, q)]
            except KeyError:
                raise GapInPeriods(f"missing quarter {quarter_label(q)} for entity {entity}") from None
    return Panel(tuple(entities), tuple(quarter_label(q) for q in span), claims, liabilities)


def read_panel(path) -> Panel:
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_panel(fh)


def format_panel(panel: Panel) -> str:
    """Serialise a panel back to the long CSV layout; floats keep round-trip precision."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PANEL_HEADER)
    for i, entity in enumerate(panel.entities):
        for t, period in enumerate(panel.periods):
            writer.writerow([entity, period, repr(float(panel.claims[i, t])), repr(float(panel.liabilities[i, t]))])
    return buf.getvalue()


# ------------------------------------------------------------------ positions


def compute_positions(panel: Panel) -> PositionMatrix:
    return PositionMatrix(panel.entities, panel.periods, panel.claims - panel.liabilities)


def slice_periods(m: PositionMatrix, start: str, end: str) -> PositionMatrix:
    """Inclusive sub-range ``[start, end]`` of ``m``'s quarters."""
    try:
        a = m.periods.index(start)
        b = m.periods.index(end)
    except ValueError:
        raise RangeOutOfBounds(
            f"range {start}..{end} not within {m.periods[0]}..{m.periods[-1]}"
        ) from None
    if b < a:
        raise RangeOutOfBounds(f"range end {end} precedes start {start}")
    return PositionMatrix(m.entities, m.periods[a : b + 1], m.positions[:, a : b + 1])


def average_position(m: PositionMatrix, entity: str) -> float:
    series = m.series(entity)
    return float(np.sum(series) / series.size)


def classify_roles(m: PositionMatrix) -> list[RoleAssignment]:
    out = []
    for entity in sorted(m.entities):
        avg = average_position(m, entity)
        if avg > 0:
            role = Role.CREDITOR
        elif avg < 0:
            role = Role.DEBTOR
        else:
            role = Role.NEUTRAL
        out.append(RoleAssignment(entity, avg, role))
    return out


def rank_by_magnitude(
    assignments: Iterable[RoleAssignment], k: int
) -> tuple[list[RoleAssignment], list[RoleAssignment]]:
    """Top-``k`` creditors (largest first) and top-``k`` debtors (most negative first)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    assignments = list(assignments)
    creditors = sorted(
        (a for a in assignments if a.role is Role.CREDITOR),
        key=lambda a: (-a.average_position, a.entity),
    )
    debtors = sorted(
        (a for a in assignments if a.role is Role.DEBTOR),
        key=lambda a: (a.average_position, a.entity),
    )
    return creditors[:k], debtors[:k]


def format_roles(assignments: Iterable[RoleAssignment]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ROLES_HEADER)
    for a in assignments:
        writer.writerow([a.entity, format(a.average_position, ".17g"), a.role.value])
    return buf.getvalue()
