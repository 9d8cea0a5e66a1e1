"""Question-driven recommendations: extend the selection by one variable.

For every unselected variable, the type combination of selection + variable
keys into a table of question templates; each template renders a question
with the variable names highlighted by type color and carries chart recipes
that rebuild the exact channel map behind every candidate. Promoting a
candidate therefore hands back a map whose derived spec is byte-identical
to the recommended one.

Type combinations the built-in table does not cover fall back to analogous
rows (ordinal reads like temporal next to a measure, like nominal
otherwise) and, past those, to a generic relate-to-selection question.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Iterable, Sequence

from .dataset import Dataset, VarType, default_time_unit_is_year
from .encoding import (
    COUNT,
    Aggregate,
    Channel,
    ChannelMap,
    FieldRef,
    FilterClause,
    MarkType,
    TimeUnit,
    VisSpec,
    auto_aggregate,
    build_spec,
    channel_map,
    positional_types,
    select_mark,
    type_key,
)
from .emitter import to_vegalite
from .errors import InvalidFieldError, UnsupportedSelectionError

_Q, _N, _O, _T = VarType.QUANTITATIVE, VarType.NOMINAL, VarType.ORDINAL, VarType.TEMPORAL


@dataclass(frozen=True)
class Placement:
    """Where one template slot (or a bare count) lands in a chart recipe."""

    channel: Channel
    slot: int | None  # None places a synthetic count
    bin: bool = False


@dataclass(frozen=True)
class ChartForm:
    """One candidate chart shape of a question template."""

    mark: MarkType
    placements: tuple[Placement, ...]
    stacked: bool = False
    extra_channel: Channel | None = None

    @property
    def label(self) -> str:
        base = {
            MarkType.POINT: "Scatterplot",
            MarkType.BAR: "Stacked bar chart" if self.stacked else "Bar chart",
            MarkType.LINE: "Line chart",
            MarkType.AREA: "Stacked area chart" if self.stacked else "Area chart",
            MarkType.RECT: "Heatmap",
            MarkType.BOXPLOT: "Boxplot",
            MarkType.TICK: "Strip plot",
            MarkType.HISTOGRAM: "Histogram",
        }[self.mark]
        if self.extra_channel is not None:
            return f"{base} + {self.extra_channel.value}"
        return base


@dataclass(frozen=True)
class QuestionTemplate:
    """A type-combination rule: question text plus its chart forms."""

    key: tuple[VarType, ...]
    slots: tuple[VarType, ...]
    text: str
    charts: tuple[ChartForm, ...]
    rank: int
    mean_slots: frozenset[int] = frozenset()
    time_unit: TimeUnit | None = None
    generic: bool = False
    fallback: bool = False


def _p(channel: Channel, slot: int, bin: bool = False) -> Placement:
    return Placement(channel, slot, bin)


def _cnt(channel: Channel) -> Placement:
    return Placement(channel, None)


def _form(
    mark: MarkType,
    *placements: Placement,
    stacked: bool = False,
    extra: Channel | None = None,
) -> ChartForm:
    return ChartForm(mark, tuple(placements), stacked=stacked, extra_channel=extra)


_TYPE_LETTERS = {"Q": _Q, "N": _N, "O": _O, "T": _T}


def _t(
    key: str,
    rank: int,
    text: str,
    charts: Sequence[ChartForm],
    mean: Iterable[int] = (),
    tu: TimeUnit | None = None,
    fallback: bool = False,
) -> QuestionTemplate:
    slots = tuple(_TYPE_LETTERS[ch] for ch in key.split("x"))
    return QuestionTemplate(
        key=type_key(slots),
        slots=slots,
        text=text,
        charts=tuple(charts),
        rank=rank,
        mean_slots=frozenset(mean),
        time_unit=tu,
        fallback=fallback,
    )


_X, _Y, _C, _SH, _SZ, _R = (
    Channel.X,
    Channel.Y,
    Channel.COLOR,
    Channel.SHAPE,
    Channel.SIZE,
    Channel.ROW,
)

_LBA = (MarkType.LINE, MarkType.BAR, MarkType.AREA)

_COOCCURRENCE = "What is the number of co-occurrences between each category of {var0} and {var1}?"
_COMBINATION_MEAN = "What is the MEAN OF {var0} in each combination of {var1} and {var2}?"


def _single_count_forms(marks: Iterable[MarkType]) -> list[ChartForm]:
    return [_form(m, _p(_X, 0), _cnt(_Y)) for m in marks]


def _occurrence_forms() -> list[ChartForm]:
    return [
        _form(MarkType.LINE, _p(_X, 1), _cnt(_Y), _p(_C, 0)),
        _form(MarkType.AREA, _p(_X, 1), _cnt(_Y), _p(_C, 0), stacked=True),
        _form(MarkType.RECT, _p(_X, 1), _p(_Y, 0), _cnt(_C)),
    ]


def _cooccurrence_forms() -> list[ChartForm]:
    return [
        _form(MarkType.BAR, _p(_X, 0), _cnt(_Y), _p(_C, 1), stacked=True),
        _form(MarkType.RECT, _p(_X, 0), _p(_Y, 1), _cnt(_C)),
    ]


TEMPLATES: tuple[QuestionTemplate, ...] = (
    # --- single variable (initial question panel) ---
    _t("Q", 1, "What is the distribution of {var0}?", [
        _form(MarkType.HISTOGRAM, _p(_X, 0, bin=True), _cnt(_Y)),
        _form(MarkType.AREA, _p(_X, 0, bin=True), _cnt(_Y)),
    ]),
    _t("N", 1, "What is the number of occurrences of each category of {var0}?", [
        _form(MarkType.BAR, _p(_X, 0), _cnt(_Y)),
    ]),
    _t("O", 1, "What is the number of occurrences of each category of {var0}?",
       _single_count_forms((MarkType.BAR, MarkType.LINE))),
    _t("T", 1, "What is the number of records over the YEARS?",
       _single_count_forms(_LBA), tu=TimeUnit.YEAR),
    _t("T", 2, "What is the number of records over the MONTHS?",
       _single_count_forms(_LBA), tu=TimeUnit.MONTH),
    # --- two variables ---
    _t("QxQ", 1, "What is the correlation between {var0} and {var1}?", [
        _form(MarkType.POINT, _p(_X, 0), _p(_Y, 1)),
    ]),
    _t("QxN", 1,
       "What is the is the distribution of values of {var0} in each category of {var1}?", [
        _form(MarkType.BOXPLOT, _p(_X, 1), _p(_Y, 0)),
        _form(MarkType.TICK, _p(_X, 1), _p(_Y, 0)),
        _form(MarkType.AREA, _p(_X, 0, bin=True), _cnt(_Y), _p(_C, 1)),
    ]),
    _t("QxN", 2, "What is the average of {var0} in each category of {var1}?", [
        _form(MarkType.BAR, _p(_X, 1), _p(_Y, 0)),
    ], mean={0}),
    _t("QxT", 1, "What is the MEAN OF {var0} over the YEARS?",
       [_form(m, _p(_X, 1), _p(_Y, 0)) for m in _LBA], mean={0}, tu=TimeUnit.YEAR),
    _t("QxT", 2, "What is the MEAN OF {var0} over the MONTHS?",
       [_form(m, _p(_X, 1), _p(_Y, 0)) for m in _LBA], mean={0}, tu=TimeUnit.MONTH),
    _t("NxN", 1, _COOCCURRENCE, _cooccurrence_forms()),
    _t("NxT", 1,
       "What is the number of occurrences of each category of {var0} over the YEARS?",
       _occurrence_forms(), tu=TimeUnit.YEAR),
    _t("NxT", 2,
       "What is the number of occurrences of each category of {var0} over the MONTHS?",
       _occurrence_forms(), tu=TimeUnit.MONTH),
    _t("TxT", 1, "What is number of co-occurrences of {var0} and {var1}?",
       _cooccurrence_forms()),
    # --- two variables, analogy rows for combinations the table leaves out ---
    _t("QxO", 1, "What is the MEAN OF {var0} over {var1}?",
       [_form(m, _p(_X, 1), _p(_Y, 0)) for m in _LBA], mean={0}, fallback=True),
    _t("NxO", 1, _COOCCURRENCE, _cooccurrence_forms(), fallback=True),
    _t("OxO", 1, _COOCCURRENCE, _cooccurrence_forms(), fallback=True),
    _t("OxT", 1,
       "What is the number of occurrences of each category of {var0} over the YEARS?",
       _occurrence_forms(), tu=TimeUnit.YEAR, fallback=True),
    _t("OxT", 2,
       "What is the number of occurrences of each category of {var0} over the MONTHS?",
       _occurrence_forms(), tu=TimeUnit.MONTH, fallback=True),
    # --- three variables ---
    _t("QxQxQ", 1, "What is the correlation between {var0}, {var1} and {var2}?", [
        _form(MarkType.POINT, _p(_X, 0), _p(_Y, 1), _p(_C, 2), extra=_C),
        _form(MarkType.POINT, _p(_X, 0), _p(_Y, 1), _p(_SZ, 2), extra=_SZ),
    ]),
    _t("QxQxN", 1,
       "What is the correlation between {var0}, {var1} grouped by {var2} categories?", [
        _form(MarkType.POINT, _p(_X, 0), _p(_Y, 1), _p(_C, 2), extra=_C),
        _form(MarkType.POINT, _p(_X, 0), _p(_Y, 1), _p(_SH, 2), extra=_SH),
    ]),
    _t("QxQxT", 1,
       "What is the correlation between MEAN OF {var0}, MEAN OF {var1} over the YEARS?", [
        _form(MarkType.LINE, _p(_X, 2), _p(_Y, 0), _p(_SZ, 1), extra=_SZ),
        _form(MarkType.LINE, _p(_X, 2), _p(_Y, 0), _p(_C, 1), extra=_C),
    ], mean={0, 1}, tu=TimeUnit.YEAR),
    _t("QxQxT", 2,
       "What is the correlation between MEAN OF {var0}, MEAN OF {var1} over the MONTHS?", [
        _form(MarkType.LINE, _p(_X, 2), _p(_Y, 0), _p(_SZ, 1), extra=_SZ),
        _form(MarkType.LINE, _p(_X, 2), _p(_Y, 0), _p(_C, 1), extra=_C),
    ], mean={0, 1}, tu=TimeUnit.MONTH),
    _t("QxNxN", 1, _COMBINATION_MEAN, [
        _form(MarkType.RECT, _p(_X, 1), _p(_Y, 2), _p(_C, 0)),
    ], mean={0}),
    _t("QxNxT", 1, "What is the MEAN OF {var0} in each category of {var1} over the YEARS?", [
        _form(MarkType.LINE, _p(_X, 2), _p(_Y, 0), _p(_C, 1)),
        _form(MarkType.AREA, _p(_X, 2), _p(_Y, 0), _p(_C, 1), stacked=True),
    ], mean={0}, tu=TimeUnit.YEAR),
    _t("QxNxT", 2, "What is the MEAN OF {var0} in each category of {var1} over the MONTHS?", [
        _form(MarkType.LINE, _p(_X, 2), _p(_Y, 0), _p(_C, 1)),
        _form(MarkType.AREA, _p(_X, 2), _p(_Y, 0), _p(_C, 1), stacked=True),
    ], mean={0}, tu=TimeUnit.MONTH),
    _t("QxTxT", 1, _COMBINATION_MEAN, [
        _form(MarkType.LINE, _p(_X, 1), _p(_Y, 0), _p(_C, 2)),
        _form(MarkType.RECT, _p(_X, 1), _p(_Y, 2), _p(_C, 0)),
    ], mean={0}),
    # --- three variables, analogy rows ---
    _t("QxQxO", 1,
       "What is the correlation between MEAN OF {var0}, MEAN OF {var1} over {var2}?", [
        _form(MarkType.LINE, _p(_X, 2), _p(_Y, 0), _p(_SZ, 1), extra=_SZ),
        _form(MarkType.LINE, _p(_X, 2), _p(_Y, 0), _p(_C, 1), extra=_C),
    ], mean={0, 1}, fallback=True),
    _t("QxNxO", 1, "What is the MEAN OF {var0} in each category of {var1} over {var2}?", [
        _form(MarkType.LINE, _p(_X, 2), _p(_Y, 0), _p(_C, 1)),
        _form(MarkType.AREA, _p(_X, 2), _p(_Y, 0), _p(_C, 1), stacked=True),
    ], mean={0}, fallback=True),
    _t("QxOxO", 1, _COMBINATION_MEAN, [
        _form(MarkType.LINE, _p(_X, 1), _p(_Y, 0), _p(_C, 2)),
        _form(MarkType.RECT, _p(_X, 1), _p(_Y, 2), _p(_C, 0)),
    ], mean={0}, fallback=True),
    _t("QxOxT", 1, _COMBINATION_MEAN, [
        _form(MarkType.LINE, _p(_X, 2), _p(_Y, 0), _p(_C, 1)),
        _form(MarkType.RECT, _p(_X, 1), _p(_Y, 2), _p(_C, 0)),
    ], mean={0}, fallback=True),
    _t("NxNxN", 1,
       "What is the number of co-occurrences between each category of {var0}, {var1} and {var2}?", [
        _form(MarkType.RECT, _p(_X, 0), _p(_Y, 1), _cnt(_C), _p(_R, 2), extra=_R),
    ], fallback=True),
    _t("NxNxO", 1,
       "What is the number of co-occurrences between each category of {var0}, {var1} and {var2}?", [
        _form(MarkType.RECT, _p(_X, 0), _p(_Y, 1), _cnt(_C), _p(_R, 2), extra=_R),
    ], fallback=True),
    _t("NxOxO", 1,
       "What is the number of co-occurrences between each category of {var0}, {var1} and {var2}?", [
        _form(MarkType.RECT, _p(_X, 0), _p(_Y, 1), _cnt(_C), _p(_R, 2), extra=_R),
    ], fallback=True),
    _t("OxOxO", 1,
       "What is the number of co-occurrences between each category of {var0}, {var1} and {var2}?", [
        _form(MarkType.RECT, _p(_X, 0), _p(_Y, 1), _cnt(_C), _p(_R, 2), extra=_R),
    ], fallback=True),
)

_TEMPLATE_INDEX: dict[tuple[VarType, ...], list[QuestionTemplate]] = {}
for _template in TEMPLATES:
    _TEMPLATE_INDEX.setdefault(_template.key, []).append(_template)
for _group in _TEMPLATE_INDEX.values():
    _group.sort(key=lambda t: t.rank)

GENERIC_TEXT = "How does {var0} relate to the current selection?"


def _generic_template(key: tuple[VarType, ...]) -> QuestionTemplate:
    return QuestionTemplate(
        key=key,
        slots=(),
        text=GENERIC_TEXT,
        charts=(),
        rank=1,
        generic=True,
        fallback=True,
    )


def template_lookup(types: Iterable[VarType]) -> list[QuestionTemplate]:
    """All templates for a type combination, in rank order."""
    key = type_key(types)
    if not 1 <= len(key) <= 3:
        raise UnsupportedSelectionError(
            f"unsupported selection size {len(key)}; questions cover 1 to 3 variables",
            size=len(key),
        )
    found = _TEMPLATE_INDEX.get(key)
    if found:
        return list(found)
    return [_generic_template(key)]


_SLOT_RE = re.compile(r"\{var(\d)\}")


def render_spans(text: str, names: Sequence[str], d: Dataset) -> tuple[dict, ...]:
    """Substitute slots with variable names wrapped in colored spans."""
    spans: list[dict] = []
    pos = 0
    for m in _SLOT_RE.finditer(text):
        if m.start() > pos:
            spans.append({"text": text[pos:m.start()]})
        name = names[int(m.group(1))]
        spans.append({"var": name, "color": d.variable(name).display_color})
        pos = m.end()
    if pos < len(text):
        spans.append({"text": text[pos:]})
    return tuple(spans)


def spans_to_text(spans: Sequence[dict]) -> str:
    return "".join(s.get("text", s.get("var", "")) for s in spans)


@dataclass(frozen=True)
class Candidate:
    """A recommended chart plus the channel map that regenerates it."""

    map: ChannelMap
    spec: VisSpec
    label: str


@dataclass(frozen=True)
class RecommendationGroup:
    question_spans: tuple[dict, ...]
    added_variable: str
    candidates: tuple[Candidate, ...]
    bookmark_ids: tuple[str, ...] = ()

    @property
    def question_text(self) -> str:
        return spans_to_text(self.question_spans)


def _field_for_slot(
    t: QuestionTemplate, slot: int, names: Sequence[str], d: Dataset, bin: bool
) -> FieldRef:
    name = names[slot]
    vtype = d.variable(name).effective_type
    aggregate = Aggregate.MEAN if slot in t.mean_slots else None
    time_unit = None
    if vtype is VarType.TEMPORAL:
        time_unit = t.time_unit or _default_tu(d, name)
    return FieldRef(name, aggregate=aggregate, time_unit=time_unit, bin=bin)


def _default_tu(d: Dataset, name: str) -> TimeUnit:
    return TimeUnit.YEAR if default_time_unit_is_year(d, name) else TimeUnit.MONTH


def _apply_form(
    t: QuestionTemplate,
    form: ChartForm,
    names: Sequence[str],
    d: Dataset,
    filters: Sequence[FilterClause],
) -> Candidate:
    mapping: dict[Channel, FieldRef] = {}
    for p in form.placements:
        if p.slot is None:
            mapping[p.channel] = COUNT
        else:
            mapping[p.channel] = _field_for_slot(t, p.slot, names, d, p.bin)
    m = channel_map(mapping, mark=form.mark, stacked=form.stacked)
    return Candidate(map=m, spec=build_spec(m, d, filters), label=form.label)


# Scan order when a generic recommendation needs a free channel for the
# added variable.
_EXTRA_SCAN = (Channel.COLOR, Channel.SHAPE, Channel.SIZE, Channel.ROW, Channel.COLUMN)
_EXTRA_COMPAT = {
    Channel.COLOR: {_Q, _N, _O, _T},
    Channel.SHAPE: {_N, _O},
    Channel.SIZE: {_Q},
    Channel.ROW: {_N, _O, _T},
    Channel.COLUMN: {_N, _O, _T},
}


def _instantiate_generic(
    t: QuestionTemplate,
    names: Sequence[str],
    d: Dataset,
    filters: Sequence[FilterClause],
) -> tuple[tuple[dict, ...], list[Candidate]]:
    added, *selection = names
    spans = render_spans(t.text, [added], d)

    base = channel_map({
        Channel.X: FieldRef(selection[0]),
        Channel.Y: FieldRef(selection[1]),
    })
    base = auto_aggregate(base, d)
    added_type = d.variable(added).effective_type
    mapping = base.as_dict()
    extra = None
    for c in _EXTRA_SCAN:
        if c not in mapping and added_type in _EXTRA_COMPAT[c]:
            tu = _default_tu(d, added) if added_type is VarType.TEMPORAL else None
            mapping[c] = FieldRef(added, time_unit=tu)
            extra = c
            break
    if extra is None:  # pragma: no cover - the scan always finds a slot
        raise InvalidFieldError(f"no free channel for {added}", variable=added)

    mark = select_mark(positional_types(base, d))[0]
    m = channel_map(mapping, mark=mark)
    form = ChartForm(mark, (), extra_channel=extra)
    return spans, [Candidate(map=m, spec=build_spec(m, d, filters), label=form.label)]


def instantiate(
    t: QuestionTemplate,
    names: Sequence[str],
    d: Dataset,
    filters: Sequence[FilterClause] = (),
) -> tuple[tuple[dict, ...], list[Candidate]]:
    """Render the question spans and build one candidate per chart form.

    ``names`` follow the template's slot order; for generic templates the
    added variable comes first, then the selection.
    """
    if t.generic:
        return _instantiate_generic(t, names, d, filters)
    if len(names) != len(t.slots):
        raise InvalidFieldError(
            f"expected {len(t.slots)} variables, got {len(names)}"
        )
    for i, (name, slot_type) in enumerate(zip(names, t.slots)):
        actual = d.variable(name).effective_type
        if actual is not slot_type:
            raise InvalidFieldError(
                f"slot var{i} expects {slot_type.value}, got {actual.value} ({name})",
                slot=i,
                variable=name,
            )
    spans = render_spans(t.text, names, d)
    candidates = [_apply_form(t, form, names, d, filters) for form in t.charts]
    return spans, candidates


def slot_order(
    t: QuestionTemplate, selection: Sequence[str], added: str, d: Dataset
) -> list[str]:
    """Fill slots with selection variables first (in selection order), the
    added variable taking the remaining slot."""
    if t.generic:
        return [added, *selection]
    remaining = list(selection)
    names: list[str] = []
    for slot_type in t.slots:
        pick = next(
            (v for v in remaining if d.variable(v).effective_type is slot_type), None
        )
        if pick is not None:
            remaining.remove(pick)
            names.append(pick)
        else:
            names.append(added)
    return names


def enumerate_groups(
    selection: Sequence[str],
    d: Dataset,
    filters: Sequence[FilterClause] = (),
    bookmarks: BookmarkStore | None = None,
) -> list[RecommendationGroup]:
    """One group per (unselected variable, matching template).

    Groups are ordered by the added variable's dataset position, then
    template rank. Selections beyond two variables return nothing: the
    question table stops at three variables total. When a bookmark store is
    given, groups report which saved charts match their candidates.
    """
    for name in selection:
        d.variable(name)  # raises on unknown names
    if len(selection) > 2:
        return []

    groups: list[RecommendationGroup] = []
    selected = set(selection)
    for v in d.variables:
        if v.name in selected:
            continue
        types = [d.variable(s).effective_type for s in selection] + [v.effective_type]
        for t in template_lookup(types):
            names = slot_order(t, selection, v.name, d)
            spans, candidates = instantiate(t, names, d, filters)
            groups.append(
                RecommendationGroup(
                    question_spans=spans,
                    added_variable=v.name,
                    candidates=tuple(candidates),
                    bookmark_ids=_matching_bookmarks(candidates, d, bookmarks),
                )
            )
    return groups


def _matching_bookmarks(
    candidates: Sequence[Candidate], d: Dataset, bookmarks: BookmarkStore | None
) -> tuple[str, ...]:
    if bookmarks is None or not bookmarks.list():
        return ()
    ids: list[str] = []
    for c in candidates:
        for bid in bookmarks.ids_matching(to_vegalite(c.spec, d)):
            if bid not in ids:
                ids.append(bid)
    return tuple(ids)


def promote(g: RecommendationGroup, candidate_index: int) -> ChannelMap:
    """The channel map that reproduces a candidate in the main panel."""
    if not 0 <= candidate_index < len(g.candidates):
        raise IndexError(
            f"candidate index {candidate_index} out of range for {len(g.candidates)}"
        )
    return g.candidates[candidate_index].map


@dataclass(frozen=True)
class Bookmark:
    id: str
    spec: dict
    question_text: str
    created_at: str

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "question": self.question_text,
            "spec": self.spec,
            "created_at": self.created_at,
        }


class BookmarkStore:
    """Session-scoped saved charts, insertion-ordered, ids unique per store."""

    def __init__(self) -> None:
        self._items: dict[str, Bookmark] = {}
        self._counter = 0

    def add(self, spec: dict, question_text: str) -> Bookmark:
        self._counter += 1
        bm = Bookmark(
            id=f"bm{self._counter}",
            spec=spec,
            question_text=question_text,
            created_at=datetime.now(timezone.utc).isoformat(),
        )
        self._items[bm.id] = bm
        return bm

    def list(self) -> list[Bookmark]:
        return list(self._items.values())

    def remove(self, bookmark_id: str) -> bool:
        return self._items.pop(bookmark_id, None) is not None

    def ids_matching(self, spec: dict) -> tuple[str, ...]:
        return tuple(b.id for b in self._items.values() if b.spec == spec)


__all__ = [
    "Bookmark",
    "BookmarkStore",
    "Candidate",
    "ChartForm",
    "GENERIC_TEXT",
    "Placement",
    "QuestionTemplate",
    "RecommendationGroup",
    "TEMPLATES",
    "enumerate_groups",
    "instantiate",
    "promote",
    "render_spans",
    "slot_order",
    "spans_to_text",
    "template_lookup",
]
