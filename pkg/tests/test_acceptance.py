"""Acceptance suite: one test per release criterion, one PASS line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
report. Every tolerance is pinned here; nothing is calibrated elsewhere.
"""

from __future__ import annotations

import io
import json
import math
import random
import time

import pytest
from fastapi.testclient import TestClient

from vizrec.cli import main as cli_main
from vizrec.dataset import VarType, load_csv, override_type
from vizrec.emitter import serialize, to_vegalite, validate
from vizrec.encoding import (
    COUNT,
    Channel,
    ChannelMap,
    FieldRef,
    MarkType,
    assign,
    build_spec,
    check_gating,
    clear,
    select_mark,
)
from vizrec.errors import ChannelUnavailableError, InvalidFieldError
from vizrec.recommender import enumerate_groups, instantiate, promote, spans_to_text, template_lookup
from vizrec.sampledata import weather_csv
from vizrec.service import ServiceConfig, create_app

from oracles import (
    TEMPLATE_COUNTS,
    brute_force_counts,
    brute_force_means,
    evaluate_spec_aggregates,
    expected_group_count,
    parse_cell_time,
)

Q, N, O, T = VarType.QUANTITATIVE, VarType.NOMINAL, VarType.ORDINAL, VarType.TEMPORAL
LETTER = {"Q": Q, "N": N, "O": O, "T": T}


def report(n: int, text: str) -> None:
    print(f"criterion {n}: PASS - {text}")


# --------------------------------------------------------------------------
# 1. Chart-rule table conformance


def test_criterion_1_mark_table():
    started = time.perf_counter()
    expected = {
        "Q": ["area", "histogram"],
        "N": ["bar"],
        "O": ["line", "bar", "area"],
        "T": ["line", "bar", "area"],
        "QQ": ["point"],
        "QN": ["boxplot", "tick"],
        "QO": ["line", "bar", "area"],
        "QT": ["line", "bar", "area"],
        "NN": ["rect"],
        "NO": ["rect"],
        "NT": ["rect"],
        "OO": ["rect"],
        "OT": ["rect"],
        "TT": ["rect"],
    }
    assert len(expected) == 14
    for key, marks in expected.items():
        got = [m.value for m in select_mark([LETTER[ch] for ch in key])]
        assert got == marks, key
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    report(1, f"all 14 type combinations map to the expected chart lists ({elapsed:.3f}s)")


# --------------------------------------------------------------------------
# 2. Question-table conformance (17 built-in rows)

TABLE2_ROWS = [
    ("QQ", 1, "What is the correlation between {0} and {1}?", ["Scatterplot"]),
    ("QN", 1,
     "What is the is the distribution of values of {0} in each category of {1}?",
     ["Boxplot", "Strip plot", "Area chart"]),
    ("QN", 2, "What is the average of {0} in each category of {1}?", ["Bar chart"]),
    ("QT", 1, "What is the MEAN OF {0} over the YEARS?",
     ["Line chart", "Bar chart", "Area chart"]),
    ("QT", 2, "What is the MEAN OF {0} over the MONTHS?",
     ["Line chart", "Bar chart", "Area chart"]),
    ("NN", 1,
     "What is the number of co-occurrences between each category of {0} and {1}?",
     ["Stacked bar chart", "Heatmap"]),
    ("NT", 1,
     "What is the number of occurrences of each category of {0} over the YEARS?",
     ["Line chart", "Stacked area chart", "Heatmap"]),
    ("NT", 2,
     "What is the number of occurrences of each category of {0} over the MONTHS?",
     ["Line chart", "Stacked area chart", "Heatmap"]),
    ("TT", 1, "What is number of co-occurrences of {0} and {1}?",
     ["Stacked bar chart", "Heatmap"]),
    ("QQQ", 1, "What is the correlation between {0}, {1} and {2}?",
     ["Scatterplot + color", "Scatterplot + size"]),
    ("QQN", 1, "What is the correlation between {0}, {1} grouped by {2} categories?",
     ["Scatterplot + color", "Scatterplot + shape"]),
    ("QQT", 1,
     "What is the correlation between MEAN OF {0}, MEAN OF {1} over the YEARS?",
     ["Line chart + size", "Line chart + color"]),
    ("QQT", 2,
     "What is the correlation between MEAN OF {0}, MEAN OF {1} over the MONTHS?",
     ["Line chart + size", "Line chart + color"]),
    ("QNN", 1, "What is the MEAN OF {0} in each combination of {1} and {2}?", ["Heatmap"]),
    ("QNT", 1, "What is the MEAN OF {0} in each category of {1} over the YEARS?",
     ["Line chart", "Stacked area chart"]),
    ("QNT", 2, "What is the MEAN OF {0} in each category of {1} over the MONTHS?",
     ["Line chart", "Stacked area chart"]),
    ("QTT", 1, "What is the MEAN OF {0} in each combination of {1} and {2}?",
     ["Line chart", "Heatmap"]),
]


def _typed_zoo():
    rng = random.Random(17)
    lines = ["q1,q2,q3,n1,n2,n3,o1,o2,o3,t1,t2,t3"]
    for _ in range(40):
        row = [f"{rng.uniform(0, 9):.1f}" for _ in range(3)]
        row += [rng.choice(["ant", "bee", "cow"]) for _ in range(3)]
        row += [str(rng.randint(1, 4)) for _ in range(3)]
        row += [
            f"{rng.randint(2011, 2014)}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}"
            for _ in range(3)
        ]
        lines.append(",".join(row))
    return load_csv("\n".join(lines) + "\n", name="zoo")


def test_criterion_2_question_table():
    started = time.perf_counter()
    zoo = _typed_zoo()
    assert len(TABLE2_ROWS) == 17
    for key, rank, question, labels in TABLE2_ROWS:
        templates = template_lookup([LETTER[ch] for ch in key])
        t = templates[rank - 1]
        assert t.rank == rank and not t.fallback
        counters = {"Q": 0, "N": 0, "O": 0, "T": 0}
        names = []
        for ch in key:
            counters[ch] += 1
            names.append(f"{ch.lower()}{counters[ch]}")
        spans, candidates = instantiate(t, names, zoo)
        assert spans_to_text(spans) == question.format(*names), (key, rank)
        assert [c.label for c in candidates] == labels, (key, rank)
        # MEAN OF slots carry a mean aggregate in every candidate.
        for i in t.mean_slots:
            for c in candidates:
                refs = [f for _, f in c.map.assignments if f.variable == names[i]]
                assert refs and all(r.aggregate.value == "mean" for r in refs), (key, rank)
        # YEARS / MONTHS map onto the temporal slots as time units.
        if "YEARS" in question or "MONTHS" in question:
            unit = "year" if "YEARS" in question else "month"
            for c in candidates:
                t_refs = [
                    f for _, f in c.map.assignments
                    if f.variable and zoo.variable(f.variable).effective_type is T
                ]
                assert t_refs and all(r.time_unit.value == unit for r in t_refs), (key, rank)
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    report(2, f"all 17 question rows reproduce text, charts and modifiers ({elapsed:.3f}s)")


# --------------------------------------------------------------------------
# 3. Enumeration count property


def _random_typed_dataset(rng: random.Random):
    n_vars = rng.randint(3, 8)
    letters = [rng.choice("QNOT") for _ in range(n_vars)]
    names = [f"v{i}_{letters[i].lower()}" for i in range(n_vars)]
    lines = [",".join(names)]
    for _ in range(rng.randint(4, 30)):
        cells = []
        for letter in letters:
            if letter == "Q":
                cells.append(f"{rng.uniform(-5, 99):.2f}")
            elif letter == "N":
                cells.append(rng.choice(["red", "green", "blue"]))
            elif letter == "O":
                cells.append(str(rng.randint(1, 5)))
            else:
                cells.append(
                    f"{rng.randint(2009, 2013)}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}"
                )
        lines.append(",".join(cells))
    # Sparse draws can demote an intended ordinal to nominal; the property
    # below reads the inferred types back off the dataset, so any outcome
    # is a valid case.
    return load_csv("\n".join(lines) + "\n", name="synthetic")


def test_criterion_3_enumeration_counts(weather):
    started = time.perf_counter()

    # Fixture case: one quantitative selection on the weather-shaped table.
    types = [v.effective_type.letter for v in weather.variables]
    assert sorted(types) == sorted("TNNQQQQ")
    groups = enumerate_groups(["TEMP_MAX"], weather)
    unselected = "".join(
        v.effective_type.letter for v in weather.variables if v.name != "TEMP_MAX"
    )
    assert expected_group_count("Q", unselected) == 9
    assert len(groups) == 9

    # Property: group count equals the template-count sum, 1000 selections.
    rng = random.Random(42)
    checked = 0
    datasets = [_random_typed_dataset(rng) for _ in range(50)]
    while checked < 1000:
        d = rng.choice(datasets)
        names = [v.name for v in d.variables]
        selection = rng.sample(names, rng.randint(0, min(2, len(names))))
        letters = {v.name: v.effective_type.letter for v in d.variables}
        sel = "".join(letters[s] for s in selection)
        unsel = "".join(letters[v] for v in names if v not in selection)
        assert len(enumerate_groups(selection, d)) == expected_group_count(sel, unsel)
        checked += 1
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0
    report(3, f"fixture yields 9 groups; {checked} random selections match the sum oracle ({elapsed:.2f}s)")


# --------------------------------------------------------------------------
# 4. Aggregate correctness against brute force


def _expected_time_unit(d, var) -> str:
    years = set()
    for cell in d.present_cells(var):
        stamp = parse_cell_time(cell)
        if stamp is not None:
            years.add(stamp.year)
    return "year" if len(years) >= 2 else "month"


def _check_spec_against_oracle(d, doc, group_desc, measure):
    _, _, implied = evaluate_spec_aggregates(doc)
    if measure is None:
        expected = brute_force_counts(d, group_desc)
        assert implied == expected, (group_desc, doc["mark"])
    else:
        expected = brute_force_means(d, group_desc, measure)
        assert set(implied) == set(expected), (group_desc, measure)
        for key, value in expected.items():
            assert math.isclose(implied[key], value, rel_tol=1e-9, abs_tol=1e-12)


def test_criterion_4_aggregate_correctness():
    from conftest import random_dataset

    started = time.perf_counter()
    rng = random.Random(99)
    specs_checked = 0
    for _ in range(100):
        d = random_dataset(rng, max_rows=200)
        tu = _expected_time_unit(d, "stamp")

        def docfor(m):
            return to_vegalite(build_spec(m, d), d)

        e = ChannelMap()
        cases = []
        # Single-category count bar.
        cases.append((docfor(assign(e, Channel.X, FieldRef("cat"), d)), [("cat", None)], None))
        # Single-ordinal count.
        cases.append((docfor(assign(e, Channel.X, FieldRef("level"), d)), [("level", None)], None))
        # Records over time.
        cases.append((docfor(assign(e, Channel.X, FieldRef("stamp"), d)), [("stamp", tu)], None))
        # Mean of a measure over time.
        m = assign(assign(e, Channel.X, FieldRef("stamp"), d), Channel.Y, FieldRef("num"), d)
        cases.append((docfor(m), [("stamp", tu)], "num"))
        # Mean of a measure per ordinal level.
        m = assign(assign(e, Channel.X, FieldRef("level"), d), Channel.Y, FieldRef("num"), d)
        cases.append((docfor(m), [("level", None)], "num"))
        # Co-occurrence heatmap of two discretes.
        m = assign(assign(e, Channel.X, FieldRef("cat"), d), Channel.Y, FieldRef("level"), d)
        cases.append((docfor(m), [("cat", None), ("level", None)], None))
        # Category over time heatmap.
        m = assign(assign(e, Channel.X, FieldRef("cat"), d), Channel.Y, FieldRef("stamp"), d)
        cases.append((docfor(m), [("cat", None), ("stamp", tu)], None))
        # Average-per-category question template (mean bar).
        t = template_lookup([Q, N])[1]
        _, candidates = instantiate(t, ["num", "cat"], d)
        cases.append((to_vegalite(candidates[0].spec, d), [("cat", None)], "num"))

        for doc, group_desc, measure in cases:
            _check_spec_against_oracle(d, doc, group_desc, measure)
            specs_checked += 1
    elapsed = time.perf_counter() - started
    report(4, f"{specs_checked} specs over 100 random tables match brute-force group-bys ({elapsed:.2f}s)")


# --------------------------------------------------------------------------
# 5. Promote round-trip


def test_criterion_5_promote_round_trip(weather, graduate):
    started = time.perf_counter()
    checked = 0
    for d in (weather, override_type(graduate, "YEAR", VarType.TEMPORAL)):
        names = [v.name for v in d.variables]
        selections = [[]] + [[n] for n in names]
        selections += [[names[i], names[j]] for i in range(len(names)) for j in range(i + 1, len(names))]
        for selection in selections:
            for g in enumerate_groups(selection, d):
                for i, c in enumerate(g.candidates):
                    rebuilt = build_spec(promote(g, i), d)
                    assert serialize(to_vegalite(rebuilt, d, inline_data=False)) == serialize(
                        to_vegalite(c.spec, d, inline_data=False)
                    )
                    checked += 1
    # Byte-identity holds with inline data as well (spot check on weather).
    g = enumerate_groups(["TEMP_MAX"], weather)[0]
    for i, c in enumerate(g.candidates):
        rebuilt = build_spec(promote(g, i), weather)
        assert serialize(to_vegalite(rebuilt, weather)) == serialize(to_vegalite(c.spec, weather))
    elapsed = time.perf_counter() - started
    report(5, f"{checked} candidates rebuild byte-identically from their promoted maps ({elapsed:.2f}s)")


# --------------------------------------------------------------------------
# 6. Gating invariant under random operation sequences


def test_criterion_6_gating_random_walk(weather):
    started = time.perf_counter()
    rng = random.Random(123)
    fields = [FieldRef(v.name) for v in weather.variables] + [COUNT]
    m = ChannelMap()
    cascades = 0
    for _ in range(10_000):
        if rng.random() < 0.65:
            try:
                m = assign(m, rng.choice(list(Channel)), rng.choice(fields), weather)
            except (ChannelUnavailableError, InvalidFieldError):
                pass
        else:
            channel = rng.choice(list(Channel))
            had_non_positional = any(
                c not in (Channel.X, Channel.Y) for c, _ in m.assignments
            )
            before_other = (
                m.get(Channel.Y) if channel is Channel.X else m.get(Channel.X)
            )
            m = clear(m, channel)
            if (
                channel in (Channel.X, Channel.Y)
                and before_other is None
                and had_non_positional
            ):
                cascades += 1
                assert m.is_empty  # cascade wiped the dependents
        assert check_gating(m)
    assert cascades > 0, "random walk never exercised the cascade path"
    elapsed = time.perf_counter() - started
    report(6, f"10,000 random ops kept gating; {cascades} cascade clears verified ({elapsed:.2f}s)")


# --------------------------------------------------------------------------
# 7. Emitter closure and determinism


def _reachable_specs(d):
    names = [v.name for v in d.variables]
    for name in names:
        m = assign(ChannelMap(), Channel.X, FieldRef(name), d)
        yield build_spec(m, d)
    for a in names:
        for b in names:
            m = assign(ChannelMap(), Channel.X, FieldRef(a), d)
            m = assign(m, Channel.Y, FieldRef(b), d)
            yield build_spec(m, d)
    for selection in [[], [names[0]], [names[0], names[3]]]:
        for g in enumerate_groups(selection, d):
            for i, c in enumerate(g.candidates):
                yield c.spec
                yield build_spec(promote(g, i), d)


def test_criterion_7_emitter_closure(weather, graduate):
    started = time.perf_counter()
    checked = 0
    for d in (weather, override_type(graduate, "YEAR", VarType.TEMPORAL)):
        for spec in _reachable_specs(d):
            doc = to_vegalite(spec, d, inline_data=False)
            assert validate(doc) == [], doc
            assert serialize(doc) == serialize(to_vegalite(spec, d, inline_data=False))
            checked += 1
    # Determinism with inline data too.
    m = assign(ChannelMap(), Channel.X, FieldRef("TEMP_MAX"), weather)
    spec = build_spec(m, weather)
    assert serialize(to_vegalite(spec, weather)) == serialize(to_vegalite(spec, weather))
    elapsed = time.perf_counter() - started
    report(7, f"{checked} reachable specs validate; double emission is byte-stable ({elapsed:.2f}s)")


# --------------------------------------------------------------------------
# 8. CLI / service parity


def test_criterion_8_cli_service_parity(tmp_path, capsys, weather, graduate):
    started = time.perf_counter()
    client = TestClient(create_app(ServiceConfig()))
    fixtures = {
        "weather": weather.to_csv(),
        "graduate": graduate.to_csv(),
    }
    parity_cases = {
        "weather": (["TEMP_MAX"], ["x=DATE", "y=TEMP_MAX"]),
        "graduate": (["QNT MASTERS"], ["x=CITY", "y=QNT MASTERS:mean"]),
    }
    for name, csv_text in fixtures.items():
        path = tmp_path / f"{name}.csv"
        path.write_text(csv_text)
        select, mapping = parity_cases[name]

        # Upload and drive the service to the same state.
        response = client.post(
            "/sessions",
            files={"file": (f"{name}.csv", io.BytesIO(csv_text.encode()), "text/csv")},
        )
        session = response.json()["id"]
        ops = [
            {"op": "assign", "channel": c, "field": {"field": select[i]}}
            for i, c in enumerate(["x", "y"][: len(select)])
        ]
        client.patch(f"/sessions/{session}/mapping", json={"ops": ops})
        service_recs = client.get(f"/sessions/{session}/recommendations").text

        code = cli_main(["recommend", str(path), "--select", *select, "--json"])
        out = capsys.readouterr().out
        assert code == 0
        assert out.strip() == service_recs, f"recommend parity broke on {name}"

        # Spec parity for an explicit mapping.
        ops = []
        for entry in mapping:
            channel, _, rhs = entry.partition("=")
            var, _, agg = rhs.partition(":")
            field = {"field": var}
            if agg:
                field["aggregate"] = agg
            ops.append({"op": "assign", "channel": channel, "field": field})
        client.patch(f"/sessions/{session}/mapping", json={"map": {}})
        client.patch(f"/sessions/{session}/mapping", json={"ops": ops})
        service_spec = json.loads(client.get(f"/sessions/{session}/spec").text)

        out_file = tmp_path / f"{name}-spec.json"
        args = ["spec", str(path)]
        for entry in mapping:
            args += ["--map", entry]
        args += ["--out", str(out_file)]
        assert cli_main(args) == 0
        capsys.readouterr()
        cli_doc = json.loads(out_file.read_text())
        assert cli_doc == service_spec, f"spec parity broke on {name}"
        assert serialize(cli_doc) == serialize(service_spec)
    elapsed = time.perf_counter() - started
    report(8, f"CLI output equals service responses on both fixtures ({elapsed:.2f}s)")
