"""Tour of the type-combination -> chart rules and auto-aggregation.

Builds a channel mapping step by step, printing which channels are open,
which mark the rules pick, and what aggregates get inserted for free.

Run: python demos/02_chart_rules.py
"""

import json

from vizrec import (
    Channel,
    ChannelMap,
    FieldRef,
    VarType,
    assign,
    auto_aggregate,
    available_channels,
    build_spec,
    select_mark,
    serialize,
    to_vegalite,
)
from vizrec.sampledata import weather_dataset

weather = weather_dataset()

# The full mark table, one line per type combination.
print("mark rules (default first):")
Q, N, O, T = VarType.QUANTITATIVE, VarType.NOMINAL, VarType.ORDINAL, VarType.TEMPORAL
for key in [(Q,), (N,), (O,), (T,), (Q, Q), (Q, N), (Q, O), (Q, T),
            (N, N), (N, O), (N, T), (O, O), (O, T), (T, T)]:
    label = "x".join(t.letter for t in key)
    marks = ", ".join(m.value for m in select_mark(key))
    print(f"  {label:<4} -> {marks}")

# Fresh maps start gated: only the axes accept variables.
m = ChannelMap()
print("\nchannels open on an empty map:",
      sorted(c.value for c in available_channels(m)))

m = assign(m, Channel.X, FieldRef("LOCATION"), weather)
print("after one assignment:       ",
      sorted(c.value for c in available_channels(m)))

# A single category on X implies a count on the free axis.
full = auto_aggregate(m, weather)
print("\nauto-aggregated single-category map:",
      json.dumps(full.to_json(), indent=2))

# A measure against time implies mean + a calendar unit.
m = assign(ChannelMap(), Channel.X, FieldRef("DATE"), weather)
m = assign(m, Channel.Y, FieldRef("TEMP_MAX"), weather)
spec = build_spec(m, weather)
doc = to_vegalite(spec, weather, inline_data=False)
print("\nmeasure over time becomes:")
print(serialize(doc, pretty=True))
