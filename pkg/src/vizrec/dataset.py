"""Tabular ingestion and variable typing.

A parsed table keeps every cell verbatim as text; typing is a separate pass
that tags each column as quantitative, nominal, ordinal or temporal. Users
can override the inferred type, which is what downstream chart rules key on.
Datasets are immutable: overrides return a new ``Dataset`` sharing row
storage with the original.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass, replace
from datetime import date, datetime
from enum import Enum
from typing import Sequence

from .errors import ParseError, UnknownVariableError

# Distinct integer columns at or below this cardinality read as ordered
# categories rather than measures.
ORDINAL_MAX_DISTINCT = 20

# Share of non-missing cells that must parse for a temporal/quantitative call.
TYPE_MAJORITY = 0.95

# column_stats caps category listings to keep payloads bounded.
CATEGORY_CAP = 1000


class VarType(Enum):
    QUANTITATIVE = "quantitative"
    NOMINAL = "nominal"
    ORDINAL = "ordinal"
    TEMPORAL = "temporal"

    @property
    def letter(self) -> str:
        return {"quantitative": "Q", "nominal": "N", "ordinal": "O", "temporal": "T"}[self.value]


# One distinct color token per type; the UI maps tokens to actual styling.
TYPE_COLORS: dict[VarType, str] = {
    VarType.QUANTITATIVE: "blue",
    VarType.NOMINAL: "green",
    VarType.ORDINAL: "orange",
    VarType.TEMPORAL: "yellow",
}


@dataclass(frozen=True)
class Variable:
    name: str
    inferred_type: VarType
    effective_type: VarType

    @property
    def display_color(self) -> str:
        return TYPE_COLORS[self.effective_type]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "inferred_type": self.inferred_type.value,
            "effective_type": self.effective_type.value,
        }


_ISO_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}(:\d{2}(\.\d+)?)?)?$")
_YEAR_RE = re.compile(r"^\d{4}$")


def is_iso_timestamp(cell: str) -> bool:
    """Strict ISO-8601 date/datetime check used by type inference."""
    cell = cell.strip()
    if not _ISO_DATE_RE.match(cell):
        return False
    try:
        parse_temporal(cell)
        return True
    except ValueError:
        return False


def parse_temporal(cell: str) -> datetime:
    """Lenient temporal parse: ISO date/datetime, or a bare year.

    Bare years map to January 1st, mirroring how chart runtimes coerce them.
    Raises ValueError when the cell is not temporal at all.
    """
    cell = cell.strip()
    if _YEAR_RE.match(cell):
        return datetime(int(cell), 1, 1)
    if _ISO_DATE_RE.match(cell):
        body = cell.replace("T", " ")
        if " " in body:
            d, t = body.split(" ", 1)
            if t.count(":") == 1:
                t += ":00"
            return datetime.fromisoformat(f"{d} {t}")
        return datetime.combine(date.fromisoformat(body), datetime.min.time())
    raise ValueError(f"not a temporal value: {cell!r}")


def parse_number(cell: str) -> float | None:
    """Parse a finite number, or None. Rejects nan/inf tokens."""
    try:
        value = float(cell.strip())
    except ValueError:
        return None
    if math.isnan(value) or math.isinf(value):
        return None
    return value


def _parse_int(cell: str) -> int | None:
    try:
        return int(cell.strip())
    except ValueError:
        return None


@dataclass(frozen=True)
class Dataset:
    """An immutable parsed table: typed variables plus verbatim text rows."""

    variables: tuple[Variable, ...]
    rows: tuple[tuple[str | None, ...], ...]
    name: str = "data"

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def variable(self, name: str) -> Variable:
        for v in self.variables:
            if v.name == name:
                return v
        raise UnknownVariableError(f"unknown variable: {name}", variable=name)

    def has_variable(self, name: str) -> bool:
        return any(v.name == name for v in self.variables)

    def index_of(self, name: str) -> int:
        for i, v in enumerate(self.variables):
            if v.name == name:
                return i
        raise UnknownVariableError(f"unknown variable: {name}", variable=name)

    def column(self, name: str) -> list[str | None]:
        i = self.index_of(name)
        return [row[i] for row in self.rows]

    def present_cells(self, name: str) -> list[str]:
        return [c for c in self.column(name) if c is not None]

    def to_json(self) -> dict:
        return {
            "variables": [v.to_json() for v in self.variables],
            "row_count": self.row_count,
        }

    def to_csv(self, delimiter: str = ",") -> str:
        """Serialize back to CSV, preserving non-missing cell text verbatim."""
        out = io.StringIO()
        writer = csv.writer(out, delimiter=delimiter, lineterminator="\n")
        writer.writerow([v.name for v in self.variables])
        for row in self.rows:
            writer.writerow(["" if c is None else c for c in row])
        return out.getvalue()


def parse_csv(data: bytes | str, delimiter: str = ",", name: str = "data") -> Dataset:
    """Parse delimited text with a required header row.

    Cells are kept verbatim; empty cells become missing. Variable types are
    not assigned here (see :func:`infer_types`); columns start as nominal.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from exc
    else:
        text = data
    if not text.strip():
        raise ParseError("empty dataset: no header row")

    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    try:
        header = next(reader)
    except StopIteration:  # pragma: no cover - guarded by strip() above
        raise ParseError("empty dataset: no header row") from None

    names = [h.strip() for h in header]
    if any(not n for n in names):
        raise ParseError("blank variable name in header")
    seen: set[str] = set()
    for n in names:
        if n in seen:
            raise ParseError(f"duplicate variable name: {n}", variable=n)
        seen.add(n)

    width = len(names)
    rows: list[tuple[str | None, ...]] = []
    for i, raw in enumerate(reader):
        if not raw:
            continue  # skip blank lines
        if len(raw) != width:
            raise ParseError(
                f"row {i + 1} has {len(raw)} cells, expected {width}", row=i + 1
            )
        rows.append(tuple(c if c != "" else None for c in raw))

    variables = tuple(Variable(n, VarType.NOMINAL, VarType.NOMINAL) for n in names)
    return Dataset(variables=variables, rows=tuple(rows), name=name)


def infer_column_type(cells: Sequence[str | None]) -> VarType:
    """Apply the inference ladder to one column of verbatim cells.

    Ladder: temporal when >=95% of non-missing cells are ISO timestamps;
    quantitative when >=95% are numbers and they look like a measure (any
    fractional literal, or more than 20 distinct values); ordinal when every
    cell is an integer, at most 20 distinct, forming a contiguous or
    evenly spaced run; nominal otherwise. All-missing columns are nominal.
    """
    present = [c for c in cells if c is not None and c.strip() != ""]
    if not present:
        return VarType.NOMINAL
    n = len(present)

    iso_hits = sum(1 for c in present if is_iso_timestamp(c))
    if iso_hits / n >= TYPE_MAJORITY:
        return VarType.TEMPORAL

    numbers = [v for v in (parse_number(c) for c in present) if v is not None]
    if numbers and len(numbers) / n >= TYPE_MAJORITY:
        fractional = any(
            parse_number(c) is not None and _parse_int(c) is None for c in present
        )
        if fractional or len(set(numbers)) > ORDINAL_MAX_DISTINCT:
            return VarType.QUANTITATIVE

    ints = [_parse_int(c) for c in present]
    if all(v is not None for v in ints):
        distinct = sorted({v for v in ints if v is not None})
        if len(distinct) <= ORDINAL_MAX_DISTINCT and _is_ordered_run(distinct):
            return VarType.ORDINAL

    return VarType.NOMINAL


def _is_ordered_run(distinct: list[int]) -> bool:
    """True for contiguous or evenly spaced distinct integers."""
    if len(distinct) <= 2:
        return True
    steps = {b - a for a, b in zip(distinct, distinct[1:])}
    return len(steps) == 1 or distinct[-1] - distinct[0] == len(distinct) - 1


def infer_types(d: Dataset) -> Dataset:
    """Return a dataset with inferred types populated per column.

    Effective types are initialized to the inferred ones. Deterministic:
    identical input bytes always produce identical types.
    """
    variables = []
    for i, v in enumerate(d.variables):
        t = infer_column_type([row[i] for row in d.rows])
        variables.append(Variable(v.name, t, t))
    return replace(d, variables=tuple(variables))


def load_csv(data: bytes | str, delimiter: str = ",", name: str = "data") -> Dataset:
    """parse_csv followed by infer_types."""
    return infer_types(parse_csv(data, delimiter=delimiter, name=name))


def override_type(d: Dataset, var: str, t: VarType) -> Dataset:
    """Set one variable's effective type, leaving the inferred type intact."""
    i = d.index_of(var)
    variables = list(d.variables)
    variables[i] = replace(variables[i], effective_type=t)
    return replace(d, variables=tuple(variables))


@dataclass(frozen=True)
class ColumnStats:
    distinct: int
    minimum: float | str | None = None
    maximum: float | str | None = None
    categories: tuple[str, ...] | None = None
    truncated: bool = False

    def to_json(self) -> dict:
        out: dict = {"distinct": self.distinct}
        if self.minimum is not None:
            out["min"] = self.minimum
            out["max"] = self.maximum
        if self.categories is not None:
            out["categories"] = list(self.categories)
            out["truncated"] = self.truncated
        return out


def column_stats(d: Dataset, var: str) -> ColumnStats:
    """Distinct count plus min/max (Q/T) or a capped category list (N/O)."""
    v = d.variable(var)
    present = d.present_cells(var)
    distinct = len(set(present))

    if v.effective_type is VarType.QUANTITATIVE:
        numbers = [x for x in (parse_number(c) for c in present) if x is not None]
        if numbers:
            return ColumnStats(distinct, min(numbers), max(numbers))
        return ColumnStats(distinct)
    if v.effective_type is VarType.TEMPORAL:
        stamps = []
        for c in present:
            try:
                stamps.append(parse_temporal(c))
            except ValueError:
                continue
        if stamps:
            return ColumnStats(distinct, min(stamps).isoformat(), max(stamps).isoformat())
        return ColumnStats(distinct)

    cats = sorted(set(present))
    truncated = len(cats) > CATEGORY_CAP
    return ColumnStats(distinct, categories=tuple(cats[:CATEGORY_CAP]), truncated=truncated)


def typed_value(d: Dataset, var: str, cell: str | None) -> float | int | str | None:
    """Convert one cell for data emission, according to the variable's type."""
    if cell is None:
        return None
    t = d.variable(var).effective_type
    if t in (VarType.QUANTITATIVE, VarType.ORDINAL):
        i = _parse_int(cell)
        if i is not None:
            return i
        f = parse_number(cell)
        if f is not None:
            return f
    return cell


def data_values(d: Dataset) -> list[dict]:
    """Rows as JSON-ready records, cells converted per column type."""
    names = [v.name for v in d.variables]
    return [
        {name: typed_value(d, name, cell) for name, cell in zip(names, row)}
        for row in d.rows
    ]


def default_time_unit_is_year(d: Dataset, var: str) -> bool:
    """Year granularity when the column spans at least two calendar years."""
    years = set()
    for c in d.present_cells(var):
        try:
            years.add(parse_temporal(c).year)
        except ValueError:
            continue
    return len(years) >= 2


def dumps_dataset(d: Dataset) -> str:
    return json.dumps(d.to_json(), indent=2)


__all__ = [
    "CATEGORY_CAP",
    "ColumnStats",
    "Dataset",
    "TYPE_COLORS",
    "VarType",
    "Variable",
    "column_stats",
    "data_values",
    "default_time_unit_is_year",
    "dumps_dataset",
    "infer_column_type",
    "infer_types",
    "is_iso_timestamp",
    "load_csv",
    "override_type",
    "parse_csv",
    "parse_number",
    "parse_temporal",
    "typed_value",
]
