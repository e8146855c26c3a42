"""
The social content graph model
==============================

Nodes and links with schema-less, multi-valued attributes; conditions
mixing structural predicates with keywords; default keyword scoring.
"""

from socialgraph import (
    Condition,
    attr_ge,
    build_graph,
    default_keyword_score,
    has_all,
    link,
    node,
    satisfies,
)

# A traveler node, a city node, and the tagging action between them.
# 'type' is the one mandatory attribute and may hold several values.
john = node(1, type=("user", "traveler"), name="John")
denver = node(2, type=("item", "city"), name="Denver", keywords="skiing")
tag_action = link(12, 1, 2, type=("act", "tag"), date="2008-8-2", tags=("rockies", "baseball"))

g = build_graph([john, denver], [tag_action])
print(f"graph: {len(g.nodes)} nodes, {len(g.links)} links")

# Structural predicates: '=' means "some value equals", 'has' means the
# value set contains all the listed values.
print("john is a user:        ", satisfies(john, Condition(preds=(has_all("type", "user"),))))
print("denver is a user:      ", satisfies(denver, Condition(preds=(has_all("type", "user"),))))
print("john is user+traveler: ", satisfies(john, Condition(preds=(has_all("type", "user", "traveler"),))))

# Keywords tokenize every string attribute (case-insensitive, split on
# non-alphanumerics) and double as a filter in selections.
print("denver matches 'skiing denver':", satisfies(denver, Condition(keywords=("skiing", "denver"))))

# The default relevance score is the fraction of matched keywords.
print("score(denver, [skiing]):        ", default_keyword_score(denver, ["skiing"]))
print("score(denver, [skiing, paris]): ", default_keyword_score(denver, ["skiing", "paris"]))

# Comparisons work on numeric attributes; an absent attribute is simply
# false, never an error - the data is schema-less.
rated = node(3, type="item", rating=0.7)
print("rating >= 0.5:", satisfies(rated, Condition(preds=(attr_ge("rating", 0.5),))))
print("missing attr: ", satisfies(rated, Condition(preds=(attr_ge("stars", 0.5),))))
