"""The question panel: one-variable extensions of the current selection.

Selecting TEMP_MAX on the weather table produces nine question groups, one
per (unselected variable, matching question template). Promoting a
candidate hands back the channel map that rebuilds it exactly.

Run: python demos/03_question_recommendations.py
"""

from vizrec import build_spec, enumerate_groups, promote, serialize, to_vegalite
from vizrec.sampledata import weather_dataset

weather = weather_dataset()

groups = enumerate_groups(["TEMP_MAX"], weather)
print(f"selection {{TEMP_MAX}} -> {len(groups)} question groups\n")
for g in groups:
    # Spans carry per-variable colors; the terminal rendering just brackets them.
    text = "".join(
        f"[{s['var']}]" if "var" in s else s["text"] for s in g.question_spans
    )
    labels = "; ".join(c.label for c in g.candidates)
    print(f"  +{g.added_variable:<14} {text}")
    print(f"  {'':<15} charts: {labels}")

# Promote the first candidate of the first group into the "main panel".
g = groups[0]
m = promote(g, 0)
print(f"\npromoting candidate 0 of the first group ({g.candidates[0].label}):")
print("  map:", m.to_json())

rebuilt = build_spec(m, weather)
identical = serialize(to_vegalite(rebuilt, weather)) == serialize(
    to_vegalite(g.candidates[0].spec, weather)
)
print("  rebuilt spec byte-identical to the recommended one:", identical)
