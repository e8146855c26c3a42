"""The graph operator algebra: selections, set operators, composition,
semi-join, and the three aggregation operators.

Every operator is a pure function from well-formed graphs to a
well-formed graph (closure is enforced by finishing through
``build_graph``). Operators are deterministic, including the ids they
mint for derived links, so identical inputs replay to identical outputs.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum

from .aggfn import (
    AggSpec,
    CompositionFn,
    ConstString,
    CopyAny,
    LinkCtx,
    apply_agg,
    apply_composition,
)
from .errors import PatternTooLongError
from .graph import (
    Condition,
    DirectionalCondition,
    Link,
    Node,
    ScoringFn,
    SocialContentGraph,
    as_scalar,
    build_graph,
    default_keyword_score,
    opposite,
    satisfies,
)

DEFAULT_MAX_PATTERN_STEPS = 4


class SetOpKind(str, Enum):
    UNION = "union"
    INTERSECT = "intersect"
    NODE_MINUS = "node_minus"


@dataclass(frozen=True)
class GraphPattern:
    """A linear chain of (link condition, attach direction) steps.

    Each step's direction names the endpoint of that step's link which
    attaches to the previous step's far endpoint (the chain's start node
    for the first step).
    """

    steps: tuple  # of (Condition, "src"|"tgt")

    def __post_init__(self):
        steps = tuple(self.steps)
        if not steps:
            raise ValueError("graph patterns need at least one step")
        for _, d in steps:
            if d not in ("src", "tgt"):
                raise ValueError(f"direction must be 'src' or 'tgt', got {d!r}")
        object.__setattr__(self, "steps", steps)


# ---------------------------------------------------------------------------
# Deterministic tokens for generated ids


def _scalar_token(v) -> str:
    return f"s:{v}" if isinstance(v, str) else f"f:{v!r}"


def _condition_token(c: Condition) -> str:
    preds = ";".join(
        f"{p.attr}{p.op}{'|'.join(_scalar_token(v) for v in p.operands)}" for p in c.preds
    )
    return f"{preds}#kw:{','.join(c.keywords)}"


def _digest(token: str) -> str:
    return hashlib.sha256(token.encode("utf-8")).hexdigest()[:10]


def condition_hash(c: Condition) -> str:
    return _digest(_condition_token(c))


def pattern_hash(gp: GraphPattern) -> str:
    return _digest("->".join(f"{_condition_token(c)}@{d}" for c, d in gp.steps))


# ---------------------------------------------------------------------------
# Selections


def _scored(element, score: float):
    attrs = dict(element.attrs)
    attrs["score"] = frozenset({as_scalar(score)})
    if isinstance(element, Link):
        return Link(element.id, element.src, element.tgt, attrs)
    return Node(element.id, attrs)


def node_select(
    g: SocialContentGraph, c: Condition, scoring: ScoringFn | None = None
) -> SocialContentGraph:
    """Null graph of the nodes satisfying ``c``; keyword conditions
    attach a ``score`` attribute (default scoring unless overridden)."""
    selected = [v for v in g.nodes.values() if satisfies(v, c)]
    if c.keywords:
        s = scoring or (lambda v: default_keyword_score(v, c.keywords))
        selected = [_scored(v, s(v)) for v in selected]
    return build_graph(selected, [])


def link_select(
    g: SocialContentGraph, c: Condition, scoring: ScoringFn | None = None
) -> SocialContentGraph:
    """Subgraph induced by the links satisfying ``c`` (their endpoints
    become the node set); keyword scores land on the links."""
    selected = [l for l in g.links.values() if satisfies(l, c)]
    if c.keywords:
        s = scoring or (lambda l: default_keyword_score(l, c.keywords))
        selected = [_scored(l, s(l)) for l in selected]
    return build_graph(_endpoint_nodes(g, selected), selected)


def _endpoint_nodes(g: SocialContentGraph, links) -> list:
    out = {}
    for l in links:
        for nid in (l.src, l.tgt):
            if nid not in out:
                out[nid] = g.nodes[nid]
    return list(out.values())


# ---------------------------------------------------------------------------
# Set operators


def _merge_attrs(a: dict, b: dict) -> dict:
    """Consolidate two attribute maps for the same element id: value
    sets are unioned per attribute; 'score' keeps the maximum."""
    out = dict(a)
    for name, values in b.items():
        if name in out:
            out[name] = out[name] | values
        else:
            out[name] = values
    score = out.get("score")
    if score is not None and len(score) > 1 and all(isinstance(v, float) for v in score):
        out["score"] = frozenset({max(score)})
    return out


def _merge_nodes(a: Node, b: Node) -> Node:
    return Node(a.id, _merge_attrs(a.attrs, b.attrs))


def _merge_links(a: Link, b: Link) -> Link:
    return Link(a.id, a.src, a.tgt, _merge_attrs(a.attrs, b.attrs))


def set_op(kind: SetOpKind, g1: SocialContentGraph, g2: SocialContentGraph) -> SocialContentGraph:
    """Union, intersection, or node-driven minus; elements with the same
    id are consolidated by attribute merge."""
    kind = SetOpKind(kind)
    if kind is SetOpKind.UNION:
        nodes = dict(g1.nodes)
        for nid, n in g2.nodes.items():
            nodes[nid] = _merge_nodes(nodes[nid], n) if nid in nodes else n
        links = dict(g1.links)
        for lid, l in g2.links.items():
            links[lid] = _merge_links(links[lid], l) if lid in links else l
        return build_graph(nodes.values(), links.values())
    if kind is SetOpKind.INTERSECT:
        nodes = [
            _merge_nodes(n, g2.nodes[nid]) for nid, n in g1.nodes.items() if nid in g2.nodes
        ]
        links = [
            _merge_links(l, g2.links[lid]) for lid, l in g1.links.items() if lid in g2.links
        ]
        return build_graph(nodes, links)
    # Node-driven minus: survivors are g1 nodes absent from g2; links of
    # g1 (not in g2) survive only when both endpoints do.
    nodes = {nid: n for nid, n in g1.nodes.items() if nid not in g2.nodes}
    links = [
        l
        for lid, l in g1.links.items()
        if lid not in g2.links and l.src in nodes and l.tgt in nodes
    ]
    return build_graph(nodes.values(), links)


def link_minus(g1: SocialContentGraph, g2: SocialContentGraph) -> SocialContentGraph:
    """Link-driven minus: keep g1 links absent from g2, inducing the
    node set from the surviving links."""
    links = [l for lid, l in g1.links.items() if lid not in g2.links]
    return build_graph(_endpoint_nodes(g1, links), links)


# ---------------------------------------------------------------------------
# Composition and semi-join


def compose(
    g1: SocialContentGraph,
    g2: SocialContentGraph,
    delta: DirectionalCondition,
    f: CompositionFn,
) -> SocialContentGraph:
    """Pair every g1 link with every g2 link matching on the delta
    endpoints and mint one new link per pair, attributed by ``f``.

    The new link runs from the g1 link's far endpoint to the g2 link's
    far endpoint. Pairs are not deduplicated; a pair of identical link
    ids (self composition) is allowed. Links whose composition function
    does not set "type" default to type='composed'.
    """
    nodes: dict = {}
    links = []
    far1, far2 = opposite(delta.d1), opposite(delta.d2)
    for l1 in g1.links.values():
        for l2 in g2.links.values():
            if l1.endpoint(delta.d1) != l2.endpoint(delta.d2):
                continue
            u, v = l1.endpoint(far1), l2.endpoint(far2)
            attrs = apply_composition(
                f,
                LinkCtx(l1, g1.nodes[l1.src], g1.nodes[l1.tgt]),
                LinkCtx(l2, g2.nodes[l2.src], g2.nodes[l2.tgt]),
            )
            if "type" not in attrs:
                attrs["type"] = frozenset({"composed"})
            links.append(Link(f"gen:compose:{l1.id}:{l2.id}", u, v, attrs))
            for nid, source in ((u, g1), (v, g2)):
                n = source.nodes[nid]
                nodes[nid] = _merge_nodes(nodes[nid], n) if nid in nodes else n
    return build_graph(nodes.values(), links)


def semi_join(
    g1: SocialContentGraph, g2: SocialContentGraph, delta: DirectionalCondition
) -> SocialContentGraph:
    """Subgraph of g1 induced by its links whose d1 endpoint matches the
    d2 endpoint of some g2 link.

    Null-graph operands degrade to node matching: a link-less g2 is
    matched by node id directly, and a link-less g1 yields the null
    graph of its nodes matched by g2's link endpoints.
    """
    if not g1.links:
        targets = {l2.endpoint(delta.d2) for l2 in g2.links.values()}
        return build_graph([n for nid, n in g1.nodes.items() if nid in targets], [])
    if not g2.links:
        targets = set(g2.nodes)
    else:
        targets = {l2.endpoint(delta.d2) for l2 in g2.links.values()}
    links = [l for l in g1.links.values() if l.endpoint(delta.d1) in targets]
    return build_graph(_endpoint_nodes(g1, links), links)


# ---------------------------------------------------------------------------
# Aggregation operators


def node_aggregate(
    g: SocialContentGraph, c: Condition, d: str, att: str, spec: AggSpec
) -> SocialContentGraph:
    """Attach ``att`` to every node that anchors (via its ``d`` side) at
    least one link satisfying ``c``; the direction acts as the group-by."""
    if att in ("id", "type"):
        raise ValueError(f"aggregation may not overwrite {att!r}")
    if isinstance(spec, (ConstString, CopyAny)):
        raise ValueError("node aggregation takes a set or numerical aggregate")
    if d not in ("src", "tgt"):
        raise ValueError(f"direction must be 'src' or 'tgt', got {d!r}")
    groups: dict = {}
    for l in g.links.values():
        if satisfies(l, c):
            groups.setdefault(l.endpoint(d), []).append(l)
    nodes = []
    for nid, n in g.nodes.items():
        rows = groups.get(nid)
        if rows:
            value = apply_agg(spec, rows)
            if value is not None:
                attrs = dict(n.attrs)
                attrs[att] = value
                n = Node(nid, attrs)
        nodes.append(n)
    return build_graph(nodes, g.links.values())


def link_aggregate(g: SocialContentGraph, c: Condition, specs) -> SocialContentGraph:
    """Collapse the links satisfying ``c`` into one link per (src, tgt)
    pair, attributed by ``specs`` (a list of (attribute, AggSpec)).

    Non-qualifying links and every node are kept. A new link whose specs
    do not set "type" inherits the union of its group's type sets.
    """
    specs = list(specs)
    if not specs:
        raise ValueError("link aggregation needs at least one (attribute, spec) pair")
    chash = condition_hash(c)
    kept = []
    groups: dict = {}
    for l in g.links.values():
        if satisfies(l, c):
            groups.setdefault((l.src, l.tgt), []).append(l)
        else:
            kept.append(l)
    for (src, tgt), rows in groups.items():
        attrs = {}
        for att, spec in specs:
            value = apply_agg(spec, rows)
            if value is not None:
                attrs[att] = value
        if "type" not in attrs:
            attrs["type"] = frozenset().union(*(l.attrs["type"] for l in rows))
        kept.append(Link(f"gen:laggr:{src}:{tgt}:{chash}", src, tgt, attrs))
    return build_graph(g.nodes.values(), kept)


def _match_chains(g: SocialContentGraph, gp: GraphPattern):
    """Enumerate chains matching the pattern as (start, end, link tuple).

    Node repetition is allowed; link repetition within one chain is not.
    """
    step_links = [[l for l in g.links.values() if satisfies(l, cond)] for cond, _ in gp.steps]
    chains = []

    def extend(step: int, cursor: str, used: tuple):
        if step == len(gp.steps):
            chains.append(used)
            return
        cond_dir = gp.steps[step][1]
        for l in step_links[step]:
            if l.endpoint(cond_dir) == cursor and all(u.id != l.id for u in used):
                extend(step + 1, l.endpoint(opposite(cond_dir)), used + (l,))

    d0 = gp.steps[0][1]
    for first in step_links[0]:
        extend(1, first.endpoint(opposite(d0)), (first,))
    out = []
    for chain in chains:
        start = chain[0].endpoint(gp.steps[0][1])
        end = chain[-1].endpoint(opposite(gp.steps[-1][1]))
        out.append((start, end, chain))
    return out


def pattern_aggregate(
    g: SocialContentGraph,
    gp: GraphPattern,
    specs,
    max_steps: int = DEFAULT_MAX_PATTERN_STEPS,
) -> SocialContentGraph:
    """Group the chains matching ``gp`` by (start, end) and add one new
    link per group; the original graph is retained.

    Aggregate specs may address a specific chain position via their
    ``step`` field; without one they read the first link in the chain
    carrying the attribute. New links default to type='path'.
    """
    specs = list(specs)
    if not specs:
        raise ValueError("pattern aggregation needs at least one (attribute, spec) pair")
    if len(gp.steps) > max_steps:
        raise PatternTooLongError(len(gp.steps), max_steps)
    phash = pattern_hash(gp)
    groups: dict = {}
    for start, end, chain in _match_chains(g, gp):
        groups.setdefault((start, end), []).append(chain)
    links = list(g.links.values())
    for (start, end), chains in groups.items():
        attrs = {}
        for att, spec in specs:
            value = apply_agg(spec, chains)
            if value is not None:
                attrs[att] = value
        if "type" not in attrs:
            attrs["type"] = frozenset({"path"})
        links.append(Link(f"gen:paggr:{start}:{end}:{phash}", start, end, attrs))
    return build_graph(g.nodes.values(), links)


__all__ = [
    "DEFAULT_MAX_PATTERN_STEPS",
    "GraphPattern",
    "SetOpKind",
    "compose",
    "condition_hash",
    "link_aggregate",
    "link_minus",
    "link_select",
    "node_aggregate",
    "node_select",
    "pattern_aggregate",
    "pattern_hash",
    "semi_join",
    "set_op",
]
