"""
Result presentation
===================

Grouping scored results socially, topically, or by attribute; picking
the most meaningful groups; explaining items through their social
provenance, with aggregate one-liners.
"""

from socialgraph import (
    SocialGrouping,
    StructuralGrouping,
    aggregate_explanations,
    build_graph,
    explain_item,
    group_items,
    link,
    node,
    select_groups,
)
from socialgraph.fixtures import cf_fixture

# Five friends, three of whom endorsed (tagged) the same item.
nodes = [node("u", type="user"), node("i", type="item", name="Coors Field")]
nodes += [node(f"f{j}", type="user") for j in range(5)]
links = [link(f"fr{j}", "u", f"f{j}", type=("connect", "friend")) for j in range(5)]
links += [link(f"tg{j}", f"f{j}", "i", type=("act", "tag"), tags="baseball") for j in range(3)]
endorse = build_graph(nodes, links)

summary, ratio = aggregate_explanations(endorse, "u", "i", "collaborative")
print(f"aggregate: {summary!r} (ratio {ratio:.3f})")

# Per-item evidence: which users justify the recommendation, and how much.
cf = cf_fixture()
explanation = explain_item(cf, "101", "203", "collaborative")
print("evidence for recommending 203 to 101:")
for peer, weight in explanation.evidence:
    print(f"  user {peer}  weight={weight:.6f}")

# Structural grouping: one group per attribute value; multi-valued
# items appear in every matching group.
places = build_graph(
    [
        node("c1", type=("item", "city"), name="Denver"),
        node("m1", type=("item", "museum"), name="Ballpark Museum"),
        node("m2", type=("item", "museum"), name="History Colorado"),
    ],
    [],
)
groups = group_items(
    [("c1", 0.9), ("m1", 0.8), ("m2", 0.4)], places, StructuralGrouping(attr="type")
)
for grp in groups:
    print(f"group {grp.label!r}: members={list(grp.members)} quality={grp.quality:.2f}")

# Meaningfulness: quality first, then size, then id.
best = select_groups(groups, 2)
print("top groups:", [grp.label for grp in best])

# Social grouping clusters items by who endorsed them.
tagged = build_graph(
    [node(u, type="user") for u in "ab"]
    + [node(i, type="item", name=i) for i in ("i1", "i2", "i3")],
    [
        link("t1", "a", "i1", type=("act", "tag"), tags="x"),
        link("t2", "a", "i2", type=("act", "tag"), tags="x"),
        link("t3", "b", "i3", type=("act", "tag"), tags="x"),
    ],
)
social = group_items([("i1", 1.0), ("i2", 0.8), ("i3", 0.6)], tagged, SocialGrouping(theta=0.5))
for grp in social:
    print(f"social group {grp.id}: {list(grp.members)}")
