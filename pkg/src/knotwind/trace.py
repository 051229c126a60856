"""Trace files: one JSON object per line, replay-verified on load.

The first line holds the start diagram; each following line holds a move,
its correspondence data and the resulting diagram's canonical text.  A file
is accepted only if replaying every move from the start reproduces each
stored result byte for byte and matches the stored correspondences.
"""

from __future__ import annotations

import json
from pathlib import Path

from .diagram import parse, serialize
from .errors import KnotwindError, MalformedTraceError
from .moves import Move, MoveTrace, TraceStep, apply


def dump_trace(trace: MoveTrace) -> str:
    lines = [json.dumps({"start": serialize(trace.start)})]
    for step in trace.steps:
        corr = step.correspondence
        obj = {
            "move": step.move.to_json(),
            "surviving": {str(k): v for k, v in sorted(corr.surviving.items())},
            "created": sorted(corr.created),
            "destroyed": sorted(corr.destroyed),
        }
        if corr.r3_roles is not None:
            obj["r3_roles"] = list(corr.r3_roles)
        obj["result"] = serialize(step.result)
        lines.append(json.dumps(obj))
    return "\n".join(lines) + "\n"


def load_trace(text: str) -> MoveTrace:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedTraceError("empty trace file")

    def decode(lineno: int, line: str) -> dict:
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedTraceError(f"line {lineno}: bad JSON: {exc}") from None
        if not isinstance(obj, dict):
            raise MalformedTraceError(f"line {lineno}: expected a JSON object")
        return obj

    head = decode(1, lines[0])
    if "start" not in head:
        raise MalformedTraceError("first line must carry the start diagram")
    try:
        current = parse(head["start"])
    except KnotwindError as exc:
        raise MalformedTraceError(f"bad start diagram: {exc}") from None

    steps: list[TraceStep] = []
    for lineno, line in enumerate(lines[1:], start=2):
        obj = decode(lineno, line)
        try:
            move = Move.from_json(obj["move"])
        except (KeyError, TypeError) as exc:
            raise MalformedTraceError(f"line {lineno}: bad move record: {exc}") from None
        try:
            result, corr = apply(current, move)
        except KnotwindError as exc:
            raise MalformedTraceError(f"line {lineno}: move does not apply: {exc}") from None
        if serialize(result) != obj.get("result"):
            raise MalformedTraceError(
                f"line {lineno}: stored result does not replay bit-exactly"
            )
        stored_surviving = {int(k): int(v) for k, v in obj.get("surviving", {}).items()}
        if stored_surviving != corr.surviving:
            raise MalformedTraceError(f"line {lineno}: surviving map does not replay")
        if sorted(corr.created) != list(obj.get("created", [])):
            raise MalformedTraceError(f"line {lineno}: created set does not replay")
        if sorted(corr.destroyed) != list(obj.get("destroyed", [])):
            raise MalformedTraceError(f"line {lineno}: destroyed set does not replay")
        stored_roles = obj.get("r3_roles")
        roles = None if stored_roles is None else tuple(stored_roles)
        if roles != corr.r3_roles:
            raise MalformedTraceError(f"line {lineno}: triangle roles do not replay")
        steps.append(TraceStep(move, corr, result))
        current = result
    return MoveTrace(parse(head["start"]), steps)


def write_trace(trace: MoveTrace, path) -> None:
    Path(path).write_text(dump_trace(trace), encoding="utf-8")


def read_trace(path) -> MoveTrace:
    return load_trace(Path(path).read_text(encoding="utf-8"))
