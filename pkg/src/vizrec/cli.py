"""Batch command-line access to the engine.

Three data commands (``types``, ``recommend``, ``spec``) mirror the HTTP
service exactly: JSON output is built by the same code paths, so a CLI run
and the equivalent session calls produce identical payloads. ``serve``
starts the HTTP API.

Exit codes: 0 success, 2 usage or data errors, 1 internal failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import emitter
from .dataset import Dataset, VarType, load_csv, override_type
from .encoding import (
    Aggregate,
    Channel,
    ChannelMap,
    FieldRef,
    TimeUnit,
    assign,
    build_spec,
    positional_types,
    select_mark,
)
from .errors import InvalidFieldError, VizrecError
from .recommender import enumerate_groups
from .service import SELECTION_TOO_LARGE

_TYPE_ALIASES = {
    "q": VarType.QUANTITATIVE,
    "n": VarType.NOMINAL,
    "o": VarType.ORDINAL,
    "t": VarType.TEMPORAL,
    "quantitative": VarType.QUANTITATIVE,
    "nominal": VarType.NOMINAL,
    "ordinal": VarType.ORDINAL,
    "temporal": VarType.TEMPORAL,
}


def _load(path: str, delimiter: str, overrides: Sequence[str]) -> Dataset:
    data = Path(path).read_bytes()
    d = load_csv(data, delimiter=delimiter, name=Path(path).stem)
    for spec in overrides:
        if "=" not in spec:
            raise InvalidFieldError(f"override must look like VAR=TYPE, got {spec!r}")
        var, _, type_name = spec.partition("=")
        t = _TYPE_ALIASES.get(type_name.strip().lower())
        if t is None:
            raise InvalidFieldError(f"unknown variable type {type_name!r}")
        d = override_type(d, var.strip(), t)
    return d


def _machine_json(payload: object) -> str:
    # Matches the HTTP layer's serialization byte for byte.
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))


def cmd_types(args: argparse.Namespace) -> int:
    d = _load(args.csv, args.delimiter, ())
    if args.json:
        print(_machine_json(d.to_json()))
    else:
        for v in d.variables:
            print(f"{v.name}\t{v.inferred_type.value}")
    return 0


def cmd_recommend(args: argparse.Namespace) -> int:
    d = _load(args.csv, args.delimiter, args.override)
    selection = args.select or []
    for name in selection:
        d.variable(name)

    groups = enumerate_groups(selection, d) if len(selection) <= 2 else []
    notice = SELECTION_TOO_LARGE if len(selection) > 2 else None

    if args.json:
        payload = {
            "groups": [
                {
                    "question": list(g.question_spans),
                    "added": g.added_variable,
                    "candidates": [
                        emitter.to_vegalite(c.spec, d, schema_version=args.schema_version)
                        for c in g.candidates
                    ],
                    "bookmarks": [],
                }
                for g in groups
            ],
            "notice": notice,
        }
        print(_machine_json(payload))
        return 0

    if notice:
        print(f"notice: {notice}")
        return 0
    for g in groups:
        marked = "".join(
            s["text"] if "text" in s else f"[{s['var']}]" for s in g.question_spans
        )
        labels = "; ".join(c.label for c in g.candidates)
        print(f"{g.added_variable}\t{marked}\t{labels}")
    return 0


def _parse_map_entry(entry: str) -> tuple[Channel, FieldRef]:
    if "=" not in entry:
        raise InvalidFieldError(f"mapping must look like channel=var, got {entry!r}")
    channel_name, _, rhs = entry.partition("=")
    try:
        channel = Channel(channel_name.strip().lower())
    except ValueError:
        raise InvalidFieldError(f"unknown channel {channel_name!r}")
    parts = rhs.split(":")
    var = parts[0].strip()
    aggregate = time_unit = None
    bin_flag = False
    if len(parts) > 1 and parts[1].strip():
        token = parts[1].strip().lower()
        if token == "bin":
            bin_flag = True
        else:
            try:
                aggregate = Aggregate(token)
            except ValueError:
                raise InvalidFieldError(f"unknown aggregate {parts[1]!r}")
    if len(parts) > 2 and parts[2].strip():
        try:
            time_unit = TimeUnit(parts[2].strip().lower())
        except ValueError:
            raise InvalidFieldError(f"unknown time unit {parts[2]!r}")
    if var == "count()":
        return channel, FieldRef(None, Aggregate.COUNT)
    return channel, FieldRef(var, aggregate=aggregate, time_unit=time_unit, bin=bin_flag)


def cmd_spec(args: argparse.Namespace) -> int:
    d = _load(args.csv, args.delimiter, args.override)
    entries = [_parse_map_entry(e) for e in args.map or []]
    # Positional channels first so gating sees x/y before the rest.
    entries.sort(key=lambda cf: cf[0] not in (Channel.X, Channel.Y))
    m = ChannelMap()
    for channel, ref in entries:
        m = assign(m, channel, ref, d)
    if args.candidate:
        marks = select_mark(positional_types(m, d))
        if not 0 <= args.candidate < len(marks):
            raise InvalidFieldError(
                f"candidate {args.candidate} out of range; {len(marks)} marks available"
            )
        m = m.with_mark(marks[args.candidate])
    spec = build_spec(m, d)
    doc = emitter.to_vegalite(spec, d, schema_version=args.schema_version)
    violations = emitter.validate(doc)
    if violations:  # pragma: no cover - emission closure keeps this unreachable
        raise VizrecError(f"emitted spec failed validation: {violations}")
    text = emitter.serialize(doc, pretty=True)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig(
        session_ttl=args.ttl,
        upload_limit=args.upload_limit,
        schema_version=args.schema_version,
    )
    uvicorn.run(create_app(config), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vizrec",
        description="Rule-based chart recommendation: types, questions, Vega-Lite specs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("csv", help="path to a CSV file with a header row")
        p.add_argument("--delimiter", default=",", help="cell delimiter (default ,)")

    p_types = sub.add_parser("types", help="infer variable types")
    common(p_types)
    p_types.add_argument("--json", action="store_true", help="machine-readable output")
    p_types.set_defaults(func=cmd_types)

    p_rec = sub.add_parser("recommend", help="list question recommendations")
    common(p_rec)
    p_rec.add_argument("--select", nargs="*", default=[], metavar="VAR",
                       help="currently selected variables")
    p_rec.add_argument("--override", action="append", default=[], metavar="VAR=TYPE",
                       help="override a variable type (repeatable)")
    p_rec.add_argument("--schema-version", default=emitter.DEFAULT_SCHEMA_VERSION,
                       choices=sorted(emitter.SCHEMA_URLS))
    p_rec.add_argument("--json", action="store_true", help="machine-readable output")
    p_rec.set_defaults(func=cmd_recommend)

    p_spec = sub.add_parser("spec", help="emit a Vega-Lite spec for a mapping")
    common(p_spec)
    p_spec.add_argument("--map", action="append", default=[],
                        metavar="CHANNEL=VAR[:AGG][:TIMEUNIT]",
                        help="channel assignment (repeatable); count() is a bare count")
    p_spec.add_argument("--candidate", type=int, default=0,
                        help="pick the k-th alternate mark for the type combination")
    p_spec.add_argument("--override", action="append", default=[], metavar="VAR=TYPE")
    p_spec.add_argument("--schema-version", default=emitter.DEFAULT_SCHEMA_VERSION,
                        choices=sorted(emitter.SCHEMA_URLS))
    p_spec.add_argument("--out", help="write the spec to this file instead of stdout")
    p_spec.set_defaults(func=cmd_spec)

    p_serve = sub.add_parser("serve", help="run the HTTP exploration service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8080)
    p_serve.add_argument("--ttl", type=float, default=7200.0,
                         help="session time-to-live in seconds")
    p_serve.add_argument("--upload-limit", type=int, default=20 * 1024 * 1024)
    p_serve.add_argument("--schema-version", default=emitter.DEFAULT_SCHEMA_VERSION,
                         choices=sorted(emitter.SCHEMA_URLS))
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VizrecError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
