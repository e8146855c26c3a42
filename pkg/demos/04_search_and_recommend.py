"""
Search and recommendation
=========================

The canned discovery pipelines: network-aware search, collaborative
filtering, content-based scoring, and the combined semantic+social
entry point that returns a Meaningful Social Graph.
"""

from socialgraph import (
    Condition,
    DiscoveryConfig,
    attr_eq,
    cf_recommend,
    content_recommend,
    discover,
    network_search,
)
from socialgraph.dsl import parse_condition
from socialgraph.fixtures import cf_fixture, random_travel_graph, rng_from

# --- network-aware search -------------------------------------------------
g = random_travel_graph(rng_from(7))
destinations = Condition(preds=(attr_eq("type", "destination"),))
found = network_search(g, "u00", destinations)
print(f"search around u00: {len(found.nodes)} nodes, {len(found.links)} links")

# --- collaborative filtering ----------------------------------------------
cf = cf_fixture()
scored, ranking = cf_recommend(cf, "101", DiscoveryConfig(sim_threshold=0.5))
print("cf recommendations for 101:")
for item, score in ranking:
    print(f"  {item}  score={score:.6f}")

# --- content strategy -------------------------------------------------------
travel = random_travel_graph(rng_from(11), tag_prob=0.25)
print("content recommendations for u00:")
for item, score in content_recommend(travel, "u00", 3):
    print(f"  {item}  score={score:.6f}")

# --- combined discovery -----------------------------------------------------
# structural predicates scope the candidates, keywords add semantic
# relevance, and the collaborative score supplies social relevance
msg = discover(cf, "101", parse_condition("[name='R']"), DiscoveryConfig(alpha=0.5, k=5))
print("discover ranking (item, combined, semantic, social):")
for entry in msg.ranking:
    print("  ", entry)
print("provenance graph:")
for l in msg.graph.links.values():
    print(f"  {l.src} -> {l.tgt}  type={sorted(l.attrs['type'])}")

# With an empty query only social relevance counts, so the order is
# exactly the collaborative-filtering order.
empty = discover(cf, "101", Condition())
print("empty-query order:", [item for item, *_ in empty.ranking])
