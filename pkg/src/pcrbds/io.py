"""Instance file format (UTF-8 JSON, one top-level field per line).

Canonical form: fields in the order below, edges sorted and de-duplicated,
``terminals`` always present, ``metadata`` only when non-empty. Parsing a
canonical file and writing it back reproduces it byte for byte.
"""

from __future__ import annotations

import json
from pathlib import Path

from .graphs import ConnGraph, Instance, InstanceError, RedBlueGraph

FIELDS = ("red_count", "blue_count", "conn_edges", "cov_edges", "k", "t", "terminals", "metadata")
REQUIRED = FIELDS[:6]


class InstanceFileError(InstanceError):
    """Parse error carrying the offending field or line/column."""


def instance_to_dict(inst: Instance, metadata: dict | None = None) -> dict:
    out = {
        "red_count": inst.red_count,
        "blue_count": inst.blue_count,
        "conn_edges": [list(e) for e in sorted(inst.conn.edges())],
        "cov_edges": [list(e) for e in sorted(inst.cov.edges())],
        "k": inst.k,
        "t": inst.t,
        "terminals": sorted(inst.terminals),
    }
    if metadata:
        out["metadata"] = {key: metadata[key] for key in sorted(metadata)}
    return out


def dumps_instance(inst: Instance, metadata: dict | None = None) -> str:
    d = instance_to_dict(inst, metadata)
    lines = [f"  {json.dumps(key)}: {json.dumps(value, sort_keys=True)}" for key, value in d.items()]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def _int(doc: dict, key: str) -> int:
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceFileError(f"field {key!r}: expected an integer, got {value!r}")
    return value


def _pairs(doc: dict, key: str, bounds: tuple[int, int]) -> list[tuple[int, int]]:
    value = doc[key]
    if not isinstance(value, list):
        raise InstanceFileError(f"field {key!r}: expected a list of pairs")
    out = []
    for i, pair in enumerate(value):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in pair)):
            raise InstanceFileError(f"field {key}[{i}]: expected [int, int], got {pair!r}")
        if not (0 <= pair[0] < bounds[0] and 0 <= pair[1] < bounds[1]):
            raise InstanceFileError(f"field {key}[{i}]: {pair} out of range")
        out.append((pair[0], pair[1]))
    return out


def loads_instance(text: str) -> tuple[Instance, dict]:
    """Parse an instance document; returns the instance and its metadata."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFileError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise InstanceFileError("top level must be an object")
    for key in REQUIRED:
        if key not in doc:
            raise InstanceFileError(f"missing field {key!r}")
    unknown = sorted(set(doc) - set(FIELDS))
    if unknown:
        raise InstanceFileError(f"unknown fields {unknown}")
    nr, nb = _int(doc, "red_count"), _int(doc, "blue_count")
    if nr < 0 or nb < 0:
        raise InstanceFileError("field 'red_count'/'blue_count': must be non-negative")
    conn_edges = _pairs(doc, "conn_edges", (nr, nr))
    for i, (u, v) in enumerate(conn_edges):
        if u == v:
            raise InstanceFileError(f"field conn_edges[{i}]: self-loop at {u}")
    cov_edges = _pairs(doc, "cov_edges", (nr, nb))
    terminals = doc.get("terminals", [])
    if not isinstance(terminals, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in terminals):
        raise InstanceFileError("field 'terminals': expected a list of integers")
    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise InstanceFileError("field 'metadata': expected an object")
    try:
        inst = Instance(ConnGraph.from_edges(nr, conn_edges), RedBlueGraph.from_edges(nr, nb, cov_edges),
                        _int(doc, "k"), _int(doc, "t"), frozenset(terminals))
    except InstanceFileError:
        raise
    except InstanceError as exc:
        raise InstanceFileError(str(exc)) from exc
    return inst, metadata


def read_instance(path) -> tuple[Instance, dict]:
    return loads_instance(Path(path).read_text(encoding="utf-8"))


def write_instance(path, inst: Instance, metadata: dict | None = None) -> None:
    Path(path).write_text(dumps_instance(inst, metadata), encoding="utf-8")
