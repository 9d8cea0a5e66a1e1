from __future__ import annotations

import random

import pytest

from vizrec.dataset import VarType
from vizrec.emitter import serialize, to_vegalite
from vizrec.encoding import (
    COUNT,
    Aggregate,
    Channel,
    ChannelMap,
    FieldRef,
    MarkType,
    TimeUnit,
    assign,
    auto_aggregate,
    available_channels,
    build_spec,
    channel_map,
    check_gating,
    clear,
    select_mark,
)
from vizrec.errors import (
    ChannelUnavailableError,
    InvalidFieldError,
    NoMappingError,
)

from oracles import brute_force_counts

Q, N, O, T = VarType.QUANTITATIVE, VarType.NOMINAL, VarType.ORDINAL, VarType.TEMPORAL


class TestGating:
    def test_empty_map_offers_only_axes(self):
        assert available_channels(ChannelMap()) == {Channel.X, Channel.Y}

    def test_one_axis_opens_everything(self, iris):
        m = assign(ChannelMap(), Channel.X, FieldRef("sepal_length"), iris)
        assert available_channels(m) == set(Channel)

    def test_color_first_is_rejected(self, iris):
        with pytest.raises(ChannelUnavailableError):
            assign(ChannelMap(), Channel.COLOR, FieldRef("species"), iris)

    def test_reassign_replaces(self, iris):
        m = assign(ChannelMap(), Channel.X, FieldRef("sepal_length"), iris)
        m = assign(m, Channel.X, FieldRef("petal_width"), iris)
        assert m.get(Channel.X).variable == "petal_width"
        assert len(m.assignments) == 1

    def test_clear_to_empty(self, iris):
        m = assign(ChannelMap(), Channel.X, FieldRef("sepal_length"), iris)
        assert clear(m, Channel.X).is_empty

    def test_clear_cascades_non_positional(self, iris):
        m = assign(ChannelMap(), Channel.X, FieldRef("sepal_length"), iris)
        m = assign(m, Channel.COLOR, FieldRef("species"), iris)
        result = clear(m, Channel.X)
        assert result.is_empty
        assert check_gating(result)

    def test_clear_empty_channel_is_noop(self):
        assert clear(ChannelMap(), Channel.SIZE).is_empty

    def test_random_sequences_preserve_gating(self, weather):
        rng = random.Random(7)
        m = ChannelMap()
        fields = [FieldRef(v.name) for v in weather.variables] + [COUNT]
        for _ in range(2000):
            if rng.random() < 0.6:
                c = rng.choice(list(Channel))
                f = rng.choice(fields)
                try:
                    m = assign(m, c, f, weather)
                except (ChannelUnavailableError, InvalidFieldError):
                    pass
            else:
                m = clear(m, rng.choice(list(Channel)))
            assert check_gating(m)


class TestFieldValidation:
    def test_time_unit_needs_temporal(self, weather):
        m = assign(ChannelMap(), Channel.X, FieldRef("DATE"), weather)
        with pytest.raises(InvalidFieldError):
            assign(m, Channel.Y, FieldRef("WIND", time_unit=TimeUnit.YEAR), weather)

    def test_mean_needs_quantitative(self, weather):
        m = assign(ChannelMap(), Channel.X, FieldRef("WIND"), weather)
        with pytest.raises(InvalidFieldError):
            assign(m, Channel.Y, FieldRef("LOCATION", aggregate=Aggregate.MEAN), weather)

    def test_shape_rejects_quantitative(self, weather):
        m = assign(ChannelMap(), Channel.X, FieldRef("WIND"), weather)
        with pytest.raises(InvalidFieldError):
            assign(m, Channel.SHAPE, FieldRef("TEMP_MAX"), weather)

    def test_size_takes_quantitative_only(self, weather):
        m = assign(ChannelMap(), Channel.X, FieldRef("WIND"), weather)
        with pytest.raises(InvalidFieldError):
            assign(m, Channel.SIZE, FieldRef("LOCATION"), weather)

    def test_facet_needs_discrete_or_time_unit(self, weather):
        m = assign(ChannelMap(), Channel.X, FieldRef("WIND"), weather)
        with pytest.raises(InvalidFieldError):
            assign(m, Channel.ROW, FieldRef("DATE"), weather)
        ok = assign(m, Channel.ROW, FieldRef("DATE", time_unit=TimeUnit.YEAR), weather)
        assert ok.get(Channel.ROW).time_unit is TimeUnit.YEAR

    def test_bare_count_must_be_count(self, weather):
        m = assign(ChannelMap(), Channel.X, FieldRef("WIND"), weather)
        with pytest.raises(InvalidFieldError):
            assign(m, Channel.Y, FieldRef(None, aggregate=Aggregate.MEAN), weather)


class TestMarkRules:
    # The complete type-combination -> chart list table.
    CASES = {
        (Q,): [MarkType.AREA, MarkType.HISTOGRAM],
        (N,): [MarkType.BAR],
        (O,): [MarkType.LINE, MarkType.BAR, MarkType.AREA],
        (T,): [MarkType.LINE, MarkType.BAR, MarkType.AREA],
        (Q, Q): [MarkType.POINT],
        (Q, N): [MarkType.BOXPLOT, MarkType.TICK],
        (Q, O): [MarkType.LINE, MarkType.BAR, MarkType.AREA],
        (Q, T): [MarkType.LINE, MarkType.BAR, MarkType.AREA],
        (N, N): [MarkType.RECT],
        (N, O): [MarkType.RECT],
        (N, T): [MarkType.RECT],
        (O, O): [MarkType.RECT],
        (O, T): [MarkType.RECT],
        (T, T): [MarkType.RECT],
    }

    def test_table_is_total_and_exact(self):
        assert len(self.CASES) == 14
        for key, marks in self.CASES.items():
            assert select_mark(key) == marks

    def test_order_insensitive(self):
        assert select_mark((T, Q)) == select_mark((Q, T))

    def test_empty_errors(self):
        with pytest.raises(NoMappingError):
            select_mark(())


class TestAutoAggregate:
    def test_single_nominal_gains_count(self, tiny_cities):
        m = assign(ChannelMap(), Channel.X, FieldRef("CITY"), tiny_cities)
        full = auto_aggregate(m, tiny_cities)
        assert full.get(Channel.Y) == COUNT
        assert full.get(Channel.X) == FieldRef("CITY")

    def test_single_quantitative_gains_bin_and_count(self, iris):
        m = assign(ChannelMap(), Channel.X, FieldRef("sepal_length"), iris)
        full = auto_aggregate(m, iris)
        assert full.get(Channel.X).bin
        assert full.get(Channel.Y) == COUNT

    def test_single_temporal_gains_time_unit_and_count(self, weather):
        m = assign(ChannelMap(), Channel.X, FieldRef("DATE"), weather)
        full = auto_aggregate(m, weather)
        assert full.get(Channel.X).time_unit is TimeUnit.YEAR
        assert full.get(Channel.Y) == COUNT

    def test_quantitative_vs_temporal(self, weather):
        m = assign(ChannelMap(), Channel.X, FieldRef("DATE"), weather)
        m = assign(m, Channel.Y, FieldRef("TEMP_MAX"), weather)
        full = auto_aggregate(m, weather)
        assert full.get(Channel.Y).aggregate is Aggregate.MEAN
        assert full.get(Channel.X).time_unit is TimeUnit.YEAR

    def test_two_quantitative_unchanged(self, weather):
        m = assign(ChannelMap(), Channel.X, FieldRef("WIND"), weather)
        m = assign(m, Channel.Y, FieldRef("PRECIPITATION"), weather)
        assert auto_aggregate(m, weather) == m

    def test_quantitative_vs_nominal_unchanged(self, weather):
        m = assign(ChannelMap(), Channel.X, FieldRef("LOCATION"), weather)
        m = assign(m, Channel.Y, FieldRef("TEMP_MAX"), weather)
        assert auto_aggregate(m, weather) == m

    def test_two_discrete_gain_count_on_color(self, weather):
        m = assign(ChannelMap(), Channel.X, FieldRef("LOCATION"), weather)
        m = assign(m, Channel.Y, FieldRef("WEATHER"), weather)
        full = auto_aggregate(m, weather)
        assert full.get(Channel.COLOR) == COUNT

    def test_discrete_pair_with_temporal_gets_time_unit(self, weather):
        m = assign(ChannelMap(), Channel.X, FieldRef("LOCATION"), weather)
        m = assign(m, Channel.Y, FieldRef("DATE"), weather)
        full = auto_aggregate(m, weather)
        assert full.get(Channel.Y).time_unit is TimeUnit.YEAR
        assert full.get(Channel.COLOR) == COUNT

    def test_explicit_aggregates_kept(self, weather):
        m = assign(ChannelMap(), Channel.X, FieldRef("DATE", time_unit=TimeUnit.MONTH), weather)
        m = assign(m, Channel.Y, FieldRef("TEMP_MAX", aggregate=Aggregate.MEAN), weather)
        full = auto_aggregate(m, weather)
        assert full.get(Channel.X).time_unit is TimeUnit.MONTH

    def test_idempotence_random_maps(self, weather):
        rng = random.Random(11)
        fields = [FieldRef(v.name) for v in weather.variables] + [COUNT]
        for _ in range(300):
            m = ChannelMap()
            for _ in range(rng.randint(1, 4)):
                try:
                    m = assign(m, rng.choice(list(Channel)), rng.choice(fields), weather)
                except (ChannelUnavailableError, InvalidFieldError):
                    continue
            once = auto_aggregate(m, weather)
            assert auto_aggregate(once, weather) == once


class TestBuildSpec:
    def test_single_quantitative_is_binned_area(self, iris):
        m = assign(ChannelMap(), Channel.X, FieldRef("sepal_length"), iris)
        spec = build_spec(m, iris)
        assert spec.mark is MarkType.AREA
        assert spec.encoding(Channel.X).bin
        assert spec.encoding(Channel.Y).aggregate is Aggregate.COUNT

    def test_two_quantitative_is_point(self, weather):
        m = assign(ChannelMap(), Channel.X, FieldRef("WIND"), weather)
        m = assign(m, Channel.Y, FieldRef("PRECIPITATION"), weather)
        assert build_spec(m, weather).mark is MarkType.POINT

    def test_empty_map_errors(self, weather):
        with pytest.raises(NoMappingError):
            build_spec(ChannelMap(), weather)

    def test_pinned_mark_wins(self, weather):
        m = assign(ChannelMap(), Channel.X, FieldRef("LOCATION"), weather)
        m = m.with_mark(MarkType.BAR, stacked=True)
        spec = build_spec(m, weather)
        assert spec.mark is MarkType.BAR
        assert spec.stacked

    def test_assign_resets_pinned_mark(self, weather):
        m = assign(ChannelMap(), Channel.X, FieldRef("LOCATION"), weather)
        m = m.with_mark(MarkType.BAR)
        m = assign(m, Channel.Y, FieldRef("TEMP_MAX"), weather)
        assert m.mark is None

    def test_determinism(self, weather):
        m = assign(ChannelMap(), Channel.X, FieldRef("DATE"), weather)
        m = assign(m, Channel.Y, FieldRef("TEMP_MAX"), weather)
        a = serialize(to_vegalite(build_spec(m, weather), weather))
        b = serialize(to_vegalite(build_spec(m, weather), weather))
        assert a == b

    def test_count_matches_brute_force(self, tiny_cities):
        m = assign(ChannelMap(), Channel.X, FieldRef("CITY"), tiny_cities)
        doc = to_vegalite(build_spec(m, tiny_cities), tiny_cities)
        from oracles import evaluate_spec_aggregates

        _, _, implied = evaluate_spec_aggregates(doc)
        expected = brute_force_counts(tiny_cities, [("CITY", None)])
        assert implied == expected
        assert implied[("Porto",)] == 4


class TestChannelMapJson:
    def test_round_trip(self, weather):
        m = assign(ChannelMap(), Channel.X, FieldRef("DATE", time_unit=TimeUnit.YEAR), weather)
        m = assign(m, Channel.Y, FieldRef("TEMP_MAX", aggregate=Aggregate.MEAN), weather)
        m = assign(m, Channel.COLOR, FieldRef("LOCATION"), weather)
        m = m.with_mark(MarkType.LINE)
        assert ChannelMap.from_json(m.to_json()) == m

    def test_absent_channels_omitted(self, weather):
        m = assign(ChannelMap(), Channel.X, FieldRef("WIND"), weather)
        assert set(m.to_json()) == {"x"}

    def test_count_field_json(self):
        assert COUNT.to_json() == {"aggregate": "count"}
        assert FieldRef.from_json({"aggregate": "count"}) == COUNT
