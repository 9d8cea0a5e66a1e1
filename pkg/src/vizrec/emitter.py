"""Vega-Lite emission: serialize chart specs to JSON, validate the subset.

Output is canonical: fixed key order ($schema, data, transform, mark,
encoding; channels x, y, color, shape, size, row, column), so identical
specs produce byte-identical documents. ``encoding_to_map`` inverts an
emitted document back into a channel map; clients use it to promote a
recommended chart into the main panel without extra wire formats.
"""

from __future__ import annotations

import json
from typing import Sequence

from .dataset import Dataset, data_values
from .encoding import (
    CHANNEL_ORDER,
    Aggregate,
    Channel,
    ChannelMap,
    Encoding,
    FieldRef,
    FilterClause,
    MarkType,
    TimeUnit,
    VisSpec,
    channel_map,
)
from .errors import DanglingFieldError

SCHEMA_URLS = {
    "v4": "https://vega.github.io/schema/vega-lite/v4.json",
    "v5": "https://vega.github.io/schema/vega-lite/v5.json",
}
DEFAULT_SCHEMA_VERSION = "v5"

# Datasets up to this many rows are embedded as data.values.
INLINE_ROW_LIMIT = 5000

MAX_BINS = 10

_VL_MARKS = {"bar", "line", "area", "point", "tick", "boxplot", "rect"}
_VL_CHANNELS = {c.value for c in CHANNEL_ORDER}
_VL_TYPES = {"quantitative", "nominal", "ordinal", "temporal"}
_VL_AGGREGATES = {"mean", "count", "sum"}
_VL_TIME_UNITS = {"year", "month"}
_VL_ENCODING_KEYS = {"field", "type", "aggregate", "timeUnit", "bin", "stack"}


def _encoding_to_vl(e: Encoding, stack: bool) -> dict:
    out: dict = {}
    if e.field is not None:
        out["field"] = e.field
    if e.type is not None:
        out["type"] = e.type.value
    if e.aggregate is not None:
        out["aggregate"] = e.aggregate.value
    if e.time_unit is not None:
        out["timeUnit"] = e.time_unit.value
    if e.bin:
        out["bin"] = {"maxbins": MAX_BINS}
    if stack:
        out["stack"] = "zero"
    return out


def _filter_to_vl(clause: FilterClause) -> dict:
    f: dict = {"field": clause.variable}
    if clause.op == "equals":
        f["equal"] = clause.value
    elif clause.op == "in":
        f["oneOf"] = list(clause.value)
    elif clause.op == "range":
        f["range"] = list(clause.value)
    elif clause.op == "year_equals":
        f["timeUnit"] = "year"
        f["equal"] = clause.value
    else:  # pragma: no cover - constructors restrict ops
        raise ValueError(f"unknown filter op {clause.op}")
    return {"filter": f}


def to_vegalite(
    spec: VisSpec,
    dataset: Dataset,
    inline_data: bool = True,
    schema_version: str = DEFAULT_SCHEMA_VERSION,
) -> dict:
    """Emit a Vega-Lite document for the spec over the given dataset."""
    for name in spec.fields:
        if not dataset.has_variable(name):
            raise DanglingFieldError(
                f"spec references {name}, absent from dataset {dataset.name}",
                variable=name,
            )

    doc: dict = {"$schema": SCHEMA_URLS[schema_version]}
    if inline_data and dataset.row_count <= INLINE_ROW_LIMIT:
        doc["data"] = {"values": data_values(dataset)}
    else:
        doc["data"] = {"url": spec.data_name}
    if spec.transforms:
        doc["transform"] = [_filter_to_vl(c) for c in spec.transforms]
    doc["mark"] = spec.mark.vega_name

    stackable = spec.stacked and spec.mark.vega_name in ("bar", "area")
    encoding: dict = {}
    for c in CHANNEL_ORDER:
        e = spec.encoding(c)
        if e is not None:
            encoding[c.value] = _encoding_to_vl(e, stackable and c is Channel.Y)
    doc["encoding"] = encoding
    return doc


def serialize(doc: dict, pretty: bool = False) -> str:
    """Canonical JSON text: 2-space indentation or compact API form."""
    if pretty:
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False)


def validate(doc: object) -> list[str]:
    """Structural check against the subset of Vega-Lite this engine emits.

    Returns a list of violations; an empty list means the document is ok.
    """
    v: list[str] = []
    if not isinstance(doc, dict):
        return ["document is not an object"]

    if "$schema" in doc and doc["$schema"] not in SCHEMA_URLS.values():
        v.append(f"unknown $schema {doc['$schema']!r}")

    mark = doc.get("mark")
    if mark is None:
        v.append("missing mark")
    else:
        mark_name = mark.get("type") if isinstance(mark, dict) else mark
        if mark_name not in _VL_MARKS:
            v.append(f"unknown mark {mark_name!r}")

    encoding = doc.get("encoding")
    if not isinstance(encoding, dict) or not encoding:
        v.append("missing encoding")
    else:
        for channel, entry in encoding.items():
            if channel not in _VL_CHANNELS:
                v.append(f"unknown channel {channel!r}")
                continue
            v.extend(_validate_channel(channel, entry))

    if "data" in doc:
        data = doc["data"]
        if not isinstance(data, dict) or not (
            isinstance(data.get("values"), list)
            or isinstance(data.get("url"), str)
            or isinstance(data.get("name"), str)
        ):
            v.append("data must carry values, url or name")

    if "transform" in doc:
        transform = doc["transform"]
        if not isinstance(transform, list):
            v.append("transform must be a list")
        else:
            for i, t in enumerate(transform):
                v.extend(_validate_transform(i, t))
    return v


def _validate_channel(channel: str, entry: object) -> list[str]:
    v: list[str] = []
    if not isinstance(entry, dict):
        return [f"channel {channel}: not an object"]
    for key in entry:
        if key not in _VL_ENCODING_KEYS:
            v.append(f"channel {channel}: unknown key {key!r}")
    if "type" in entry and entry["type"] not in _VL_TYPES:
        v.append(f"channel {channel}: unknown type {entry['type']!r}")
    if "aggregate" in entry and entry["aggregate"] not in _VL_AGGREGATES:
        v.append(f"channel {channel}: unknown aggregate {entry['aggregate']!r}")
    if "timeUnit" in entry and entry["timeUnit"] not in _VL_TIME_UNITS:
        v.append(f"channel {channel}: unknown timeUnit {entry['timeUnit']!r}")
    if "field" not in entry and entry.get("aggregate") != "count":
        v.append(f"channel {channel}: field required unless aggregate is count")
    if "bin" in entry:
        b = entry["bin"]
        if not (b is True or (isinstance(b, dict) and isinstance(b.get("maxbins"), int))):
            v.append(f"channel {channel}: bin must be true or {{maxbins}}")
    if "stack" in entry and entry["stack"] not in ("zero", True, None):
        v.append(f"channel {channel}: unsupported stack {entry['stack']!r}")
    return v


def _validate_transform(i: int, t: object) -> list[str]:
    if not isinstance(t, dict) or set(t) != {"filter"} or not isinstance(t["filter"], dict):
        return [f"transform {i}: expected a filter object"]
    f = t["filter"]
    if "field" not in f:
        return [f"transform {i}: filter needs a field"]
    preds = [k for k in ("equal", "oneOf", "range") if k in f]
    if len(preds) != 1:
        return [f"transform {i}: filter needs exactly one predicate"]
    if "timeUnit" in f and f["timeUnit"] not in _VL_TIME_UNITS:
        return [f"transform {i}: unknown timeUnit {f['timeUnit']!r}"]
    return []


def encoding_to_map(doc: dict) -> ChannelMap:
    """Invert an emitted document into the channel map that regenerates it.

    The mark is pinned explicitly, so rebuilding the spec from the returned
    map reproduces the document byte-for-byte (given the same dataset,
    filters and serialization mode).
    """
    mapping: dict[Channel, FieldRef] = {}
    stacked = False
    for c in CHANNEL_ORDER:
        entry = doc.get("encoding", {}).get(c.value)
        if entry is None:
            continue
        mapping[c] = FieldRef(
            variable=entry.get("field"),
            aggregate=Aggregate(entry["aggregate"]) if "aggregate" in entry else None,
            time_unit=TimeUnit(entry["timeUnit"]) if "timeUnit" in entry else None,
            bin=bool(entry.get("bin", False)),
        )
        if entry.get("stack"):
            stacked = True
    mark = doc.get("mark")
    mark_name = mark.get("type") if isinstance(mark, dict) else mark
    return channel_map(mapping, mark=MarkType(mark_name), stacked=stacked)


def transforms_from_json(docs: Sequence[dict]) -> tuple[FilterClause, ...]:
    return tuple(FilterClause.from_json(doc) for doc in docs)


__all__ = [
    "DEFAULT_SCHEMA_VERSION",
    "INLINE_ROW_LIMIT",
    "MAX_BINS",
    "SCHEMA_URLS",
    "VisSpec",
    "encoding_to_map",
    "serialize",
    "to_vegalite",
    "transforms_from_json",
    "validate",
]
