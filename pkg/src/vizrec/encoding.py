"""Channel mapping and the variable-types -> chart-type rules.

The seven visual dimensions accept at most one field each. Until X or Y
holds a variable, the non-positional channels are gated off; clearing the
last positional assignment cascades the rest away. ``select_mark`` encodes
the type-combination -> mark table, and ``auto_aggregate`` inserts the
count/mean/time-unit summaries a mapping implies, so a bare drag of CITY
onto X already yields a per-category count bar chart.

``ChannelMap`` is an immutable value; every operation returns a new map.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Iterable, Sequence

from .dataset import Dataset, VarType, default_time_unit_is_year
from .errors import (
    ChannelUnavailableError,
    InvalidFieldError,
    NoMappingError,
)


class Channel(Enum):
    X = "x"
    Y = "y"
    COLOR = "color"
    SHAPE = "shape"
    SIZE = "size"
    ROW = "row"
    COLUMN = "column"


CHANNEL_ORDER: tuple[Channel, ...] = (
    Channel.X,
    Channel.Y,
    Channel.COLOR,
    Channel.SHAPE,
    Channel.SIZE,
    Channel.ROW,
    Channel.COLUMN,
)
POSITIONAL = (Channel.X, Channel.Y)


class Aggregate(Enum):
    MEAN = "mean"
    COUNT = "count"
    SUM = "sum"


class TimeUnit(Enum):
    YEAR = "year"
    MONTH = "month"


class MarkType(Enum):
    BAR = "bar"
    LINE = "line"
    AREA = "area"
    POINT = "point"
    TICK = "tick"
    BOXPLOT = "boxplot"
    RECT = "rect"
    HISTOGRAM = "histogram"

    @property
    def vega_name(self) -> str:
        # A histogram is a bar mark over a binned field.
        return "bar" if self is MarkType.HISTOGRAM else self.value


@dataclass(frozen=True)
class FieldRef:
    """A variable (or bare count) with optional transform modifiers."""

    variable: str | None
    aggregate: Aggregate | None = None
    time_unit: TimeUnit | None = None
    bin: bool = False

    @property
    def is_count(self) -> bool:
        return self.variable is None

    def to_json(self) -> dict:
        out: dict = {}
        if self.variable is not None:
            out["field"] = self.variable
        if self.aggregate is not None:
            out["aggregate"] = self.aggregate.value
        if self.time_unit is not None:
            out["timeUnit"] = self.time_unit.value
        if self.bin:
            out["bin"] = True
        return out

    @staticmethod
    def from_json(doc: dict) -> FieldRef:
        return FieldRef(
            variable=doc.get("field"),
            aggregate=Aggregate(doc["aggregate"]) if doc.get("aggregate") else None,
            time_unit=TimeUnit(doc["timeUnit"]) if doc.get("timeUnit") else None,
            bin=bool(doc.get("bin", False)),
        )


COUNT = FieldRef(None, Aggregate.COUNT)

# Channel/type compatibility beyond the positional axes. Row and column
# facets take temporal fields only once a time unit makes them discrete.
_SHAPE_TYPES = {VarType.NOMINAL, VarType.ORDINAL}
_FACET_TYPES = {VarType.NOMINAL, VarType.ORDINAL}


def _check_field(f: FieldRef, channel: Channel, d: Dataset) -> None:
    if f.is_count:
        if f.aggregate is not Aggregate.COUNT or f.time_unit or f.bin:
            raise InvalidFieldError(
                "a field without a variable must be a bare count", channel=channel.value
            )
        if channel in (Channel.SHAPE, Channel.ROW, Channel.COLUMN):
            raise InvalidFieldError(
                f"count cannot be placed on {channel.value}", channel=channel.value
            )
        return

    t = d.variable(f.variable).effective_type
    if f.time_unit is not None and t is not VarType.TEMPORAL:
        raise InvalidFieldError(
            f"time unit requires a temporal variable, {f.variable} is {t.value}",
            variable=f.variable,
        )
    if f.aggregate in (Aggregate.MEAN, Aggregate.SUM) and t is not VarType.QUANTITATIVE:
        raise InvalidFieldError(
            f"{f.aggregate.value} requires a quantitative variable, {f.variable} is {t.value}",
            variable=f.variable,
        )
    if f.bin and (t is not VarType.QUANTITATIVE or f.aggregate is not None):
        raise InvalidFieldError(
            f"binning requires a raw quantitative variable, got {f.variable}",
            variable=f.variable,
        )
    if channel is Channel.SHAPE and t not in _SHAPE_TYPES:
        raise InvalidFieldError(
            f"shape takes nominal or ordinal variables, {f.variable} is {t.value}",
            variable=f.variable,
        )
    if channel is Channel.SIZE and t is not VarType.QUANTITATIVE:
        raise InvalidFieldError(
            f"size takes quantitative variables, {f.variable} is {t.value}",
            variable=f.variable,
        )
    if channel in (Channel.ROW, Channel.COLUMN):
        if t not in _FACET_TYPES and not (t is VarType.TEMPORAL and f.time_unit):
            raise InvalidFieldError(
                f"{channel.value} facet takes nominal/ordinal variables, or temporal "
                f"with a time unit; {f.variable} is {t.value}",
                variable=f.variable,
            )


@dataclass(frozen=True)
class ChannelMap:
    """Partial assignment of fields to the seven channels.

    ``mark`` pins the mark instead of the rule-table default; it is set when
    a recommended chart is promoted (whose mark may not lead its type row)
    and cleared by any assign/clear, which changes what the default means.
    """

    assignments: tuple[tuple[Channel, FieldRef], ...] = ()
    mark: MarkType | None = None
    stacked: bool = False

    def get(self, c: Channel) -> FieldRef | None:
        for channel, f in self.assignments:
            if channel is c:
                return f
        return None

    @property
    def is_empty(self) -> bool:
        return not self.assignments

    def _with_assignments(self, mapping: dict[Channel, FieldRef]) -> ChannelMap:
        ordered = tuple((c, mapping[c]) for c in CHANNEL_ORDER if c in mapping)
        return replace(self, assignments=ordered)

    def as_dict(self) -> dict[Channel, FieldRef]:
        return dict(self.assignments)

    def with_mark(self, mark: MarkType | None, stacked: bool = False) -> ChannelMap:
        return replace(self, mark=mark, stacked=stacked)

    def to_json(self) -> dict:
        out: dict = {c.value: f.to_json() for c, f in self.assignments}
        if self.mark is not None:
            out["mark"] = self.mark.value
        if self.stacked:
            out["stacked"] = True
        return out

    @staticmethod
    def from_json(doc: dict) -> ChannelMap:
        mapping: dict[Channel, FieldRef] = {}
        for c in CHANNEL_ORDER:
            if c.value in doc and doc[c.value] is not None:
                mapping[c] = FieldRef.from_json(doc[c.value])
        mark = MarkType(doc["mark"]) if doc.get("mark") else None
        stacked = bool(doc.get("stacked", False))
        return ChannelMap(
            assignments=tuple((c, mapping[c]) for c in CHANNEL_ORDER if c in mapping),
            mark=mark,
            stacked=stacked,
        )


def channel_map(
    mapping: dict[Channel, FieldRef] | None = None,
    mark: MarkType | None = None,
    stacked: bool = False,
) -> ChannelMap:
    """Build a map from a channel dict, normalizing assignment order."""
    mapping = mapping or {}
    return ChannelMap(
        assignments=tuple((c, mapping[c]) for c in CHANNEL_ORDER if c in mapping),
        mark=mark,
        stacked=stacked,
    )


def available_channels(m: ChannelMap) -> frozenset[Channel]:
    """X and Y only while both are empty; everything once one is filled."""
    if m.get(Channel.X) is None and m.get(Channel.Y) is None:
        return frozenset(POSITIONAL)
    return frozenset(CHANNEL_ORDER)


def assign(m: ChannelMap, c: Channel, f: FieldRef, d: Dataset) -> ChannelMap:
    """Place a field on a channel, replacing any previous occupant."""
    if c not in available_channels(m):
        raise ChannelUnavailableError(
            f"channel {c.value} is unavailable until x or y holds a variable",
            channel=c.value,
        )
    _check_field(f, c, d)
    mapping = m.as_dict()
    mapping[c] = f
    return m._with_assignments(mapping).with_mark(None)


def clear(m: ChannelMap, c: Channel) -> ChannelMap:
    """Unassign a channel; dropping the last positional cascades the rest."""
    mapping = m.as_dict()
    mapping.pop(c, None)
    if Channel.X not in mapping and Channel.Y not in mapping:
        mapping = {}
    return m._with_assignments(mapping).with_mark(None)


def check_gating(m: ChannelMap) -> bool:
    """True when the map satisfies the X/Y gating invariant."""
    if m.get(Channel.X) is not None or m.get(Channel.Y) is not None:
        return True
    return all(c in POSITIONAL for c, _ in m.assignments)


def validate_map(m: ChannelMap, d: Dataset) -> ChannelMap:
    """Check a deserialized map wholesale: field rules plus gating."""
    for c, f in m.assignments:
        _check_field(f, c, d)
    if not check_gating(m):
        raise ChannelUnavailableError(
            "non-positional channels require x or y to hold a variable"
        )
    return m


# Type-combination -> mark preference rules (first entry is the default).
_Q, _N, _O, _T = VarType.QUANTITATIVE, VarType.NOMINAL, VarType.ORDINAL, VarType.TEMPORAL
_TYPE_ORDER = (_Q, _N, _O, _T)

MARK_RULES: dict[tuple[VarType, ...], tuple[MarkType, ...]] = {
    (_Q,): (MarkType.AREA, MarkType.HISTOGRAM),
    (_N,): (MarkType.BAR,),
    (_O,): (MarkType.LINE, MarkType.BAR, MarkType.AREA),
    (_T,): (MarkType.LINE, MarkType.BAR, MarkType.AREA),
    (_Q, _Q): (MarkType.POINT,),
    (_Q, _N): (MarkType.BOXPLOT, MarkType.TICK),
    (_Q, _O): (MarkType.LINE, MarkType.BAR, MarkType.AREA),
    (_Q, _T): (MarkType.LINE, MarkType.BAR, MarkType.AREA),
    (_N, _N): (MarkType.RECT,),
    (_N, _O): (MarkType.RECT,),
    (_N, _T): (MarkType.RECT,),
    (_O, _O): (MarkType.RECT,),
    (_O, _T): (MarkType.RECT,),
    (_T, _T): (MarkType.RECT,),
}


def type_key(types: Iterable[VarType]) -> tuple[VarType, ...]:
    """Canonical multiset key: Q before N before O before T."""
    return tuple(sorted(types, key=_TYPE_ORDER.index))


def select_mark(types: Iterable[VarType]) -> list[MarkType]:
    """Mark preference list for the X/Y type combination, default first."""
    key = type_key(types)
    if not key:
        raise NoMappingError("no mapping: no variable types on x or y")
    if key not in MARK_RULES:
        raise NoMappingError(
            f"no mapping for type combination {'x'.join(t.letter for t in key)}"
        )
    return list(MARK_RULES[key])


def _default_tu(d: Dataset, var: str) -> TimeUnit:
    return TimeUnit.YEAR if default_time_unit_is_year(d, var) else TimeUnit.MONTH


_DISCRETE = {VarType.NOMINAL, VarType.ORDINAL, VarType.TEMPORAL}


def auto_aggregate(m: ChannelMap, d: Dataset) -> ChannelMap:
    """Insert the aggregate summaries the current mapping implies.

    Single variable on a positional axis: the free axis receives a count;
    quantitative fields are binned, temporal fields get a default time unit.
    Quantitative against temporal/ordinal: the measure is averaged (and the
    temporal axis gets a time unit). Two discrete axes: count moves onto
    color for the heatmap. Explicit aggregates are never overridden, which
    also makes the operation idempotent.
    """
    mapping = m.as_dict()
    x, y = mapping.get(Channel.X), mapping.get(Channel.Y)

    def modify(c: Channel, f: FieldRef) -> None:
        if f.aggregate is not None or f.bin:
            return
        t = d.variable(f.variable).effective_type
        if t is VarType.QUANTITATIVE:
            mapping[c] = replace(f, bin=True)
        elif t is VarType.TEMPORAL and f.time_unit is None:
            mapping[c] = replace(f, time_unit=_default_tu(d, f.variable))

    x_real = x is not None and not x.is_count
    y_real = y is not None and not y.is_count

    if x_real and y_real:
        pair = {Channel.X: x, Channel.Y: y}
        types = {c: d.variable(f.variable).effective_type for c, f in pair.items()}
        tset = sorted(types.values(), key=_TYPE_ORDER.index)
        if tset == [_Q, _T] or tset == [_Q, _O]:
            for c, f in pair.items():
                if types[c] is _Q and f.aggregate is None and not f.bin:
                    mapping[c] = replace(f, aggregate=Aggregate.MEAN)
                if types[c] is _T and f.time_unit is None:
                    mapping[c] = replace(f, time_unit=_default_tu(d, f.variable))
        elif all(t in _DISCRETE for t in types.values()):
            for c, f in pair.items():
                if types[c] is _T and f.time_unit is None:
                    mapping[c] = replace(f, time_unit=_default_tu(d, f.variable))
            if Channel.COLOR not in mapping:
                mapping[Channel.COLOR] = COUNT
    elif x_real or y_real:
        filled = Channel.X if x_real else Channel.Y
        free = Channel.Y if x_real else Channel.X
        modify(filled, mapping[filled])
        if mapping.get(free) is None:
            mapping[free] = COUNT

    return m._with_assignments(mapping)


@dataclass(frozen=True)
class Encoding:
    """One serialized channel entry of a chart spec."""

    field: str | None
    type: VarType | None
    aggregate: Aggregate | None = None
    time_unit: TimeUnit | None = None
    bin: bool = False


@dataclass(frozen=True)
class FilterClause:
    """A row predicate attached to specs as a filter transform."""

    variable: str
    op: str  # equals | in | range | year_equals
    value: Any = None

    def to_json(self) -> dict:
        return {"variable": self.variable, self.op: _json_value(self.value)}

    @staticmethod
    def from_json(doc: dict) -> FilterClause:
        ops = [k for k in ("equals", "in", "range", "year_equals") if k in doc]
        if "variable" not in doc or len(ops) != 1:
            raise InvalidFieldError(f"malformed filter clause: {doc}")
        op = ops[0]
        value = doc[op]
        if op in ("in", "range") and isinstance(value, list):
            value = tuple(value)
        return FilterClause(doc["variable"], op, value)


def _json_value(value: Any) -> Any:
    return list(value) if isinstance(value, tuple) else value


def equals(variable: str, value: Any) -> FilterClause:
    return FilterClause(variable, "equals", value)


def within(variable: str, values: Sequence[Any]) -> FilterClause:
    return FilterClause(variable, "in", tuple(values))


def value_range(variable: str, low: Any, high: Any) -> FilterClause:
    return FilterClause(variable, "range", (low, high))


def year_equals(variable: str, year: int) -> FilterClause:
    return FilterClause(variable, "year_equals", int(year))


@dataclass(frozen=True)
class VisSpec:
    """Engine-internal chart description, serializable to Vega-Lite."""

    mark: MarkType
    encodings: tuple[tuple[Channel, Encoding], ...]
    transforms: tuple[FilterClause, ...] = ()
    data_name: str = "data"
    stacked: bool = False

    def encoding(self, c: Channel) -> Encoding | None:
        for channel, e in self.encodings:
            if channel is c:
                return e
        return None

    @property
    def fields(self) -> tuple[str, ...]:
        seen: list[str] = []
        for _, e in self.encodings:
            if e.field is not None and e.field not in seen:
                seen.append(e.field)
        return tuple(seen)


def positional_types(m: ChannelMap, d: Dataset) -> list[VarType]:
    """Effective types of the real variables sitting on X and Y."""
    types = []
    for c in POSITIONAL:
        f = m.get(c)
        if f is not None and not f.is_count:
            types.append(d.variable(f.variable).effective_type)
    return types


def build_spec(
    m: ChannelMap,
    d: Dataset,
    filters: Sequence[FilterClause] = (),
) -> VisSpec:
    """Derive the chart spec for a mapping: auto-aggregate, pick the mark,
    copy every channel. Deterministic for identical inputs."""
    if m.is_empty:
        raise NoMappingError("no mapping: the channel map is empty")
    full = auto_aggregate(m, d)
    mark = m.mark if m.mark is not None else select_mark(positional_types(full, d))[0]

    encodings = []
    for c, f in full.assignments:
        if f.is_count:
            enc = Encoding(None, VarType.QUANTITATIVE, Aggregate.COUNT)
        else:
            enc = Encoding(
                f.variable,
                d.variable(f.variable).effective_type,
                f.aggregate,
                f.time_unit,
                f.bin,
            )
        encodings.append((c, enc))
    return VisSpec(
        mark=mark,
        encodings=tuple(encodings),
        transforms=tuple(filters),
        data_name=d.name,
        stacked=m.stacked,
    )


__all__ = [
    "Aggregate",
    "CHANNEL_ORDER",
    "COUNT",
    "Channel",
    "ChannelMap",
    "Encoding",
    "FieldRef",
    "FilterClause",
    "MARK_RULES",
    "MarkType",
    "POSITIONAL",
    "TimeUnit",
    "VisSpec",
    "assign",
    "auto_aggregate",
    "available_channels",
    "build_spec",
    "channel_map",
    "check_gating",
    "clear",
    "equals",
    "positional_types",
    "select_mark",
    "type_key",
    "validate_map",
    "value_range",
    "within",
    "year_equals",
]
