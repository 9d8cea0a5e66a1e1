from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vizrec.dataset import (
    TYPE_COLORS,
    VarType,
    column_stats,
    infer_column_type,
    infer_types,
    load_csv,
    override_type,
    parse_csv,
)
from vizrec.errors import ParseError, UnknownVariableError


class TestParseCsv:
    def test_smallest_table(self):
        d = parse_csv("a,b\n1,x\n")
        assert [v.name for v in d.variables] == ["a", "b"]
        assert d.row_count == 1
        assert d.rows[0] == ("1", "x")

    def test_weather_shape(self, weather):
        assert len(weather.variables) == 7
        assert weather.row_count == 2922

    def test_graduate_shape(self, graduate):
        assert len(graduate.variables) == 7
        assert graduate.row_count == 4993

    def test_duplicate_header(self):
        with pytest.raises(ParseError, match="duplicate.*a"):
            parse_csv("a,a\n1,2\n")

    def test_empty_input(self):
        with pytest.raises(ParseError, match="empty dataset"):
            parse_csv("")

    def test_ragged_row_reports_index(self):
        with pytest.raises(ParseError) as e:
            parse_csv("a,b\n1,2\n3\n")
        assert e.value.context["row"] == 2

    def test_missing_cells(self):
        d = parse_csv("a,b\n1,\n,2\n")
        assert d.rows == (("1", None), (None, "2"))

    def test_quoted_cells_and_custom_delimiter(self):
        d = parse_csv('a;b\n"x;y";2\n', delimiter=";")
        assert d.rows[0] == ("x;y", "2")

    def test_round_trip_preserves_cells(self, weather):
        again = parse_csv(weather.to_csv())
        assert again.rows == weather.rows
        assert [v.name for v in again.variables] == [v.name for v in weather.variables]


class TestInference:
    def test_fractional_numbers_are_quantitative(self):
        assert infer_column_type(["4.9", "5.1", "6.3"]) is VarType.QUANTITATIVE

    def test_iso_dates_are_temporal(self):
        assert infer_column_type(["2012-01-01", "2012-01-02"]) is VarType.TEMPORAL

    def test_city_names_are_nominal(self):
        assert infer_column_type(["New York", "Seattle"]) is VarType.NOMINAL

    def test_small_contiguous_integers_are_ordinal(self):
        assert infer_column_type(["1", "2", "3", "2", "1"]) is VarType.ORDINAL

    def test_evenly_spaced_integers_are_ordinal(self):
        assert infer_column_type(["1990", "1995", "2000", "1995"]) is VarType.ORDINAL

    def test_many_distinct_integers_are_quantitative(self):
        cells = [str(v) for v in range(25)]
        assert infer_column_type(cells) is VarType.QUANTITATIVE

    def test_scattered_integers_are_nominal(self):
        assert infer_column_type(["1", "5", "7", "100"]) is VarType.NOMINAL

    def test_all_missing_defaults_nominal(self):
        assert infer_column_type([None, None]) is VarType.NOMINAL

    def test_mostly_numeric_with_noise(self):
        cells = [f"{i}.5" for i in range(30)] + ["n/a"]
        assert infer_column_type(cells) is VarType.QUANTITATIVE

    def test_weather_typing(self, weather):
        types = {v.name: v.effective_type for v in weather.variables}
        assert types["DATE"] is VarType.TEMPORAL
        assert types["LOCATION"] is VarType.NOMINAL
        assert types["WEATHER"] is VarType.NOMINAL
        for q in ("WIND", "PRECIPITATION", "TEMP_MAX", "TEMP_MIN"):
            assert types[q] is VarType.QUANTITATIVE

    def test_determinism(self, weather):
        csv = weather.to_csv()
        a = load_csv(csv)
        b = load_csv(csv)
        assert [v.effective_type for v in a.variables] == [
            v.effective_type for v in b.variables
        ]


class TestOverride:
    def test_year_to_temporal(self, graduate):
        assert graduate.variable("YEAR").inferred_type is VarType.QUANTITATIVE
        d = override_type(graduate, "YEAR", VarType.TEMPORAL)
        assert d.variable("YEAR").effective_type is VarType.TEMPORAL
        assert d.variable("YEAR").inferred_type is VarType.QUANTITATIVE

    def test_noop_override(self, iris):
        d = override_type(iris, "species", VarType.NOMINAL)
        assert d.variables == iris.variables

    def test_unknown_variable(self, iris):
        with pytest.raises(UnknownVariableError):
            override_type(iris, "nonexistent", VarType.NOMINAL)

    def test_override_back_restores_state(self, graduate):
        d = override_type(graduate, "YEAR", VarType.TEMPORAL)
        back = override_type(d, "YEAR", graduate.variable("YEAR").inferred_type)
        assert back.variables == graduate.variables
        assert back.rows is graduate.rows

    def test_original_untouched(self, graduate):
        override_type(graduate, "YEAR", VarType.TEMPORAL)
        assert graduate.variable("YEAR").effective_type is VarType.QUANTITATIVE


class TestColors:
    def test_four_distinct_tokens(self):
        assert len(set(TYPE_COLORS.values())) == 4

    def test_paper_fixed_colors(self):
        assert TYPE_COLORS[VarType.QUANTITATIVE] == "blue"
        assert TYPE_COLORS[VarType.NOMINAL] == "green"
        assert TYPE_COLORS[VarType.TEMPORAL] == "yellow"

    def test_color_follows_effective_type(self, graduate):
        d = override_type(graduate, "YEAR", VarType.TEMPORAL)
        assert d.variable("YEAR").display_color == "yellow"


class TestColumnStats:
    def test_quantitative(self):
        d = override_type(load_csv("q\n1\n2\n2\n3\n"), "q", VarType.QUANTITATIVE)
        s = column_stats(d, "q")
        assert (s.distinct, s.minimum, s.maximum) == (3, 1.0, 3.0)

    def test_categories(self):
        d = load_csv("c\na\nb\na\n")
        s = column_stats(d, "c")
        assert s.categories == ("a", "b")
        assert not s.truncated

    def test_weather_location_distinct(self, weather):
        # Brute-force distinct count over the raw column.
        expected = len({c for c in weather.column("LOCATION") if c is not None})
        assert expected == 2
        assert column_stats(weather, "LOCATION").distinct == 2

    def test_temporal_min_max(self, weather):
        s = column_stats(weather, "DATE")
        assert s.minimum.startswith("2012-01-01")
        assert s.maximum.startswith("2015-12-31")

    def test_unknown_variable(self, iris):
        with pytest.raises(UnknownVariableError):
            column_stats(iris, "nope")

    def test_category_cap_flags_truncation(self):
        rows = "\n".join(f"cat_{i:04d}" for i in range(1200))
        d = load_csv("c\n" + rows + "\n")
        s = column_stats(d, "c")
        assert s.distinct == 1200
        assert len(s.categories) == 1000
        assert s.truncated


_cell = st.one_of(
    st.none(),
    st.text(
        alphabet=st.characters(blacklist_categories=("Cs", "Cc")),
        max_size=12,
    ),
)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(_cell, min_size=2, max_size=2), min_size=1, max_size=12))
def test_round_trip_property(rows):
    from vizrec.dataset import Dataset, Variable

    original = Dataset(
        variables=(
            Variable("a", VarType.NOMINAL, VarType.NOMINAL),
            Variable("b", VarType.NOMINAL, VarType.NOMINAL),
        ),
        rows=tuple(tuple(c if c != "" else None for c in row) for row in rows),
    )
    again = parse_csv(original.to_csv())
    assert again.rows == original.rows


def test_infer_types_initializes_effective(tiny_cities):
    d = infer_types(parse_csv(tiny_cities.to_csv()))
    for v in d.variables:
        assert v.effective_type is v.inferred_type
