"""
The operator algebra
====================

Every operator takes social content graphs and returns one, so plans
compose freely: selections, set operators (including the two minus
flavors), composition, semi-join, and the aggregation operators.
"""

from socialgraph import (
    COUNT,
    CompositionFn,
    Condition,
    DirectionalCondition,
    GraphPattern,
    SafExpr,
    SetOpKind,
    attr_eq,
    avg_of,
    link_aggregate,
    link_select,
    link_minus,
    node_aggregate,
    node_select,
    pattern_aggregate,
    semi_join,
    set_op,
)
from socialgraph.aggfn import JaccardOf
from socialgraph.fixtures import cf_fixture, minus_pair


def show(label, g):
    print(f"{label}: nodes={sorted(g.nodes)} links={sorted(g.links)}")


# --- the two flavors of minus -------------------------------------------
# g1 is a triangle over a, b, c; g2 holds just the (a, b) link.
g1, g2 = minus_pair()
show("node-driven minus", set_op(SetOpKind.NODE_MINUS, g1, g2))  # only c survives
show("link-driven minus", link_minus(g1, g2))  # keeps a, b, c and two links

# --- selections and semi-join -------------------------------------------
g = cf_fixture()  # three users, three destinations, six visit links
me = node_select(g, Condition(preds=(attr_eq("id", "101"),)))
show("node select id=101", me)

# semi-join against a null graph matches links by node id: all links
# leaving user 101, then filtered down to visits
mine = link_select(semi_join(g, me, DirectionalCondition("src", "src")),
                   Condition(preds=(attr_eq("type", "visit"),)))
show("my visit links", mine)

# --- node aggregation: collect visited destinations ----------------------
visit = Condition(preds=(attr_eq("type", "visit"),))
profiled = node_aggregate(g, visit, "src", "vst", SafExpr("tgt"))
for uid in ("101", "102", "103"):
    print(f"vst({uid}) =", sorted(profiled.nodes[uid].attrs["vst"]))

# --- composition: one new link per matching pair -------------------------
# pair my visits with Ann's visits on a shared destination and score the
# endpoint users by the Jaccard similarity of their visit profiles
from socialgraph import compose  # noqa: E402

sim_fn = CompositionFn((("sim", JaccardOf("left-src", "vst", "right-src", "vst")),))
anns = link_select(
    semi_join(profiled, node_select(g, Condition(preds=(attr_eq("id", "102"),))),
              DirectionalCondition("src", "src")),
    visit,
)
mine_profiled = link_select(
    semi_join(profiled, me, DirectionalCondition("src", "src")), visit
)
composed = compose(mine_profiled, anns, DirectionalCondition("tgt", "tgt"), sim_fn)
for l in sorted(composed.links.values(), key=lambda l: l.id):
    print(f"composed {l.src} -> {l.tgt}: sim={sorted(l.attrs['sim'])}")

# --- link aggregation: collapse parallel links ----------------------------
collapsed = link_aggregate(g, visit, (("vcnt", COUNT), ("dests", SafExpr("tgt"))))
new = [l for l in collapsed.links.values() if "vcnt" in l.attrs]
for l in sorted(new, key=lambda l: (l.src, l.tgt)):
    print(f"{l.src} -> {l.tgt}: vcnt={sorted(l.attrs['vcnt'])}")

# --- pattern aggregation: aggregate over link chains ----------------------
# a match link followed by a visit link, scored by the match similarity
from socialgraph import build_graph, link, node  # noqa: E402

withmatch = set_op(
    SetOpKind.UNION,
    g,
    build_graph(
        [node("101", type="user"), node("102", type="user")],
        [link("m1", "101", "102", type="match", sim=2 / 3)],
    ),
)
gp = GraphPattern(
    (
        (Condition(preds=(attr_eq("type", "match"),)), "src"),
        (Condition(preds=(attr_eq("type", "visit"),)), "src"),
    )
)
reachable = pattern_aggregate(withmatch, gp, (("score", avg_of("sim", 0)),))
for l in sorted(reachable.links.values(), key=lambda l: l.id):
    if l.id.startswith("gen:paggr:"):
        print(f"path {l.src} -> {l.tgt}: score={sorted(l.attrs['score'])}")
