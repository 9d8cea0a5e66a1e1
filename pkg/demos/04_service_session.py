"""Drive the HTTP service end to end, in process.

Uploads a CSV, maps channels, filters a year, bookmarks a recommended chart
and promotes one into the main panel: the whole four-panel loop over the
wire format the browser client uses.

Run: python demos/04_service_session.py
"""

import io
import json

from fastapi.testclient import TestClient

from vizrec.sampledata import weather_csv
from vizrec.service import ServiceConfig, create_app

client = TestClient(create_app(ServiceConfig()))

# Panel A: upload and read the typed variable listing.
response = client.post(
    "/sessions",
    files={"file": ("weather.csv", io.BytesIO(weather_csv().encode()), "text/csv")},
)
snap = response.json()
session = snap["id"]
print("variables:")
for v in snap["dataset"]["variables"]:
    print(f"  {v['name']:<15} {v['effective_type']}")

# Panel B: drag TEMP_MAX onto X.
snap = client.patch(
    f"/sessions/{session}/mapping",
    json={"ops": [{"op": "assign", "channel": "x", "field": {"field": "TEMP_MAX"}}]},
).json()
print("\nmain chart mark:", snap["main_spec"]["mark"])
print("question groups:", len(snap["recommendations"]["groups"]))

# Filter to one calendar year; every chart and candidate gains the transform.
snap = client.put(
    f"/sessions/{session}/filters",
    json={"filters": [{"variable": "DATE", "year_equals": 2013}]},
).json()
print("\nmain chart transform:", json.dumps(snap["main_spec"]["transform"]))

# Panel D: bookmark the first candidate of the first group...
group = snap["recommendations"]["groups"][0]
question = "".join(s.get("text", s.get("var", "")) for s in group["question"])
bookmark = client.post(
    f"/sessions/{session}/bookmarks",
    json={"spec": group["candidates"][0], "question": question},
).json()
print(f"\nbookmarked {bookmark['id']}: {bookmark['question']}")

# ...then promote it: invert its encoding into a map and replace the mapping.
candidate = group["candidates"][0]
mapping = {}
for channel, entry in candidate["encoding"].items():
    ref = {}
    if "field" in entry:
        ref["field"] = entry["field"]
    if "aggregate" in entry:
        ref["aggregate"] = entry["aggregate"]
    if "timeUnit" in entry:
        ref["timeUnit"] = entry["timeUnit"]
    if "bin" in entry:
        ref["bin"] = True
    mapping[channel] = ref
mapping["mark"] = candidate["mark"]
if any(e.get("stack") for e in candidate["encoding"].values()):
    mapping["stacked"] = True

snap = client.patch(f"/sessions/{session}/mapping", json={"map": mapping}).json()
spec_doc = client.get(f"/sessions/{session}/spec").text
promoted_matches = json.loads(spec_doc) == candidate
print("promoted main chart equals the recommended candidate:", promoted_matches)
