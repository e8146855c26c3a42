"""Graph and index persistence.

Graphs are stored as two JSON-lines files: one node record or link
record per line. Node records are ``{"id", "attrs"}``; link records add
``"src"`` and ``"tgt"``. Attribute values may be a scalar or an array
of scalars (arrays become value sets, singletons are allowed either
way). Ids are stringified on load. Writing is byte-stable: records are
sorted by id, object keys are sorted, multi-valued attributes are
written as sorted arrays (strings before numbers) and singletons as
bare scalars.

Index snapshots are a single JSON-lines file: a versioned header line,
then the cluster model, the social sets, and one line per (tag,
cluster) inverted list, each section sorted for byte stability.
"""

from __future__ import annotations

import json

from .errors import GraphFileError
from .graph import Link, Node, SocialContentGraph, as_attr_value, build_graph, sorted_values
from .index import ClusteredIndex, ClusterModel, SocialSets

SNAPSHOT_FORMAT = "socialgraph-index"
SNAPSHOT_VERSION = 1


def _coerce_id(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"ids must be strings or numbers, got {value!r}")
    return str(value)


def _parse_records(path: str):
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text:
                continue
            try:
                record = json.loads(text)
            except json.JSONDecodeError as e:
                raise GraphFileError(path, line_no, f"invalid JSON: {e.msg}") from e
            if not isinstance(record, dict) or "id" not in record:
                raise GraphFileError(path, line_no, "records need an 'id' field")
            out.append((line_no, record))
    return out


def _parse_attrs(path: str, line_no: int, record: dict) -> dict:
    attrs = record.get("attrs", {})
    if not isinstance(attrs, dict):
        raise GraphFileError(path, line_no, "'attrs' must be an object")
    try:
        return {name: as_attr_value(value) for name, value in attrs.items()}
    except ValueError as e:
        raise GraphFileError(path, line_no, str(e)) from e


def load_graph(node_path: str, link_path: str) -> SocialContentGraph:
    """Read the two JSON-lines files and build a validated graph."""
    nodes = []
    for line_no, record in _parse_records(node_path):
        try:
            nid = _coerce_id(record["id"])
        except ValueError as e:
            raise GraphFileError(node_path, line_no, str(e)) from e
        nodes.append(Node(id=nid, attrs=_parse_attrs(node_path, line_no, record)))
    links = []
    for line_no, record in _parse_records(link_path):
        try:
            lid = _coerce_id(record["id"])
            src = _coerce_id(record.get("src"))
            tgt = _coerce_id(record.get("tgt"))
        except ValueError as e:
            raise GraphFileError(link_path, line_no, str(e)) from e
        links.append(Link(id=lid, src=src, tgt=tgt, attrs=_parse_attrs(link_path, line_no, record)))
    return build_graph(nodes, links)


def _attrs_record(attrs: dict) -> dict:
    out = {}
    for name, values in attrs.items():
        ordered = sorted_values(values)
        out[name] = ordered[0] if len(ordered) == 1 else ordered
    return out


def _dump(record: dict) -> str:
    return json.dumps(record, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def save_graph(g: SocialContentGraph, node_path: str, link_path: str) -> None:
    """Write a graph; loading the output reproduces the graph exactly,
    and identical graphs produce identical bytes."""
    with open(node_path, "w", encoding="utf-8", newline="\n") as fh:
        for nid in sorted(g.nodes):
            n = g.nodes[nid]
            fh.write(_dump({"id": n.id, "attrs": _attrs_record(n.attrs)}) + "\n")
    with open(link_path, "w", encoding="utf-8", newline="\n") as fh:
        for lid in sorted(g.links):
            l = g.links[lid]
            fh.write(
                _dump(
                    {"id": l.id, "src": l.src, "tgt": l.tgt, "attrs": _attrs_record(l.attrs)}
                )
                + "\n"
            )


# ---------------------------------------------------------------------------
# Index snapshots


def save_index_snapshot(index: ClusteredIndex, path: str) -> None:
    """Write a ClusteredIndex: header line, model line, sets line, then
    one line per (tag, cluster) list in sorted key order."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_dump({"format": SNAPSHOT_FORMAT, "version": SNAPSHOT_VERSION}) + "\n")
        model = {
            "assignment": dict(sorted(index.model.assignment.items())),
            "leaders": dict(sorted(index.model.leaders.items())),
        }
        fh.write(_dump({"model": model}) + "\n")
        sets = {
            "network": {u: sorted(v) for u, v in sorted(index.sets.network.items())},
            "items": {u: sorted(v) for u, v in sorted(index.sets.items.items())},
            "taggers": [
                {"item": item, "tag": tag, "users": sorted(users)}
                for (item, tag), users in sorted(index.sets.taggers.items())
            ],
        }
        fh.write(_dump({"sets": sets}) + "\n")
        for (tag, cluster), entries in sorted(index.lists.items()):
            fh.write(
                _dump(
                    {
                        "tag": tag,
                        "cluster": cluster,
                        "entries": [[item, score] for item, score in entries],
                    }
                )
                + "\n"
            )


def load_index_snapshot(path: str) -> ClusteredIndex:
    lines = _parse_records_loose(path)
    header = lines[0]
    if header.get("format") != SNAPSHOT_FORMAT or header.get("version") != SNAPSHOT_VERSION:
        raise GraphFileError(path, 1, "not a recognized index snapshot")
    model_rec = lines[1]["model"]
    sets_rec = lines[2]["sets"]
    model = ClusterModel(
        assignment=dict(model_rec["assignment"]), leaders=dict(model_rec["leaders"])
    )
    sets = SocialSets(
        network={u: frozenset(v) for u, v in sets_rec["network"].items()},
        items={u: frozenset(v) for u, v in sets_rec["items"].items()},
        taggers={
            (entry["item"], entry["tag"]): frozenset(entry["users"])
            for entry in sets_rec["taggers"]
        },
    )
    lists = {
        (rec["tag"], rec["cluster"]): tuple((item, score) for item, score in rec["entries"])
        for rec in lines[3:]
    }
    return ClusteredIndex(lists=lists, model=model, sets=sets)


def _parse_records_loose(path: str) -> list:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text:
                continue
            try:
                out.append(json.loads(text))
            except json.JSONDecodeError as e:
                raise GraphFileError(path, line_no, f"invalid JSON: {e.msg}") from e
    if len(out) < 3:
        raise GraphFileError(path, 1, "truncated index snapshot")
    return out
