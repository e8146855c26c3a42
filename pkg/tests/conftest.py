"""Shared fixtures and independent oracles for the test suite.

The oracles deliberately avoid the algebra/index code paths they check:
they are direct dict/set traversals over the raw graph.
"""

from __future__ import annotations

import pytest

from socialgraph.fixtures import cf_fixture, jazz_fixture, minus_pair, travel_pair
from socialgraph.graph import build_graph, satisfies


@pytest.fixture
def travel_graph():
    return travel_pair()


@pytest.fixture
def cf_graph():
    return cf_fixture()


@pytest.fixture
def jazz_graph():
    return jazz_fixture()


@pytest.fixture
def minus_graphs():
    return minus_pair()


# ---------------------------------------------------------------------------
# Oracles


def oracle_network_search(g, user_id, place_condition):
    """Brute-force rendering of "friends who visited matching places,
    plus all their activities": plain adjacency scans, no algebra."""
    friend_links = [
        l for l in g.links.values() if l.src == user_id and "friend" in l.attrs["type"]
    ]
    places = {n.id for n in g.nodes.values() if satisfies(n, place_condition)}
    visit_links = [
        l for l in g.links.values() if "visit" in l.attrs["type"] and l.tgt in places
    ]
    visitors = {l.src for l in visit_links}
    qualifying = [l for l in friend_links if l.tgt in visitors]
    friends = {l.tgt for l in friend_links}
    friend_visits = [l for l in visit_links if l.src in friends]
    qf = {l.tgt for l in qualifying}
    activities = [l for l in g.links.values() if l.src in qf and "act" in l.attrs["type"]]
    links = {}
    for l in qualifying + friend_visits + activities:
        links[l.id] = l
    nodes = {}
    for l in links.values():
        nodes[l.src] = g.nodes[l.src]
        nodes[l.tgt] = g.nodes[l.tgt]
    return build_graph(nodes.values(), links.values())


def oracle_cf_scores(g, user_id, threshold):
    """Brute-force collaborative filtering: for each unvisited
    destination, the average Jaccard similarity over the multiset of
    (matched user, visit link) pairs with similarity above threshold."""
    visit_targets = {}  # user -> list of destinations, one per link
    for l in g.links.values():
        if "visit" in l.attrs["type"] and "destination" in g.nodes[l.tgt].attrs["type"]:
            visit_targets.setdefault(l.src, []).append(l.tgt)
    profiles = {u: frozenset(ds) for u, ds in visit_targets.items()}
    mine = profiles.get(user_id, frozenset())
    contributions = {}
    for u, profile in profiles.items():
        if u == user_id:
            continue
        union = mine | profile
        sim = len(mine & profile) / len(union) if union else 0.0
        if sim > threshold:
            for d in visit_targets[u]:
                contributions.setdefault(d, []).append(sim)
    ranking = [
        (d, sum(sims) / len(sims)) for d, sims in contributions.items() if d not in mine
    ]
    ranking.sort(key=lambda e: (-e[1], e[0]))
    return ranking


def oracle_exact_score(g, item_id, user_id, keywords):
    """Per-link-scan exact score, independent of SocialSets."""
    friends = set()
    for l in g.links.values():
        if "friend" in l.attrs["type"]:
            if l.src == user_id:
                friends.add(l.tgt)
            if l.tgt == user_id:
                friends.add(l.src)
    total = 0
    for k in keywords:
        taggers = {
            l.src
            for l in g.links.values()
            if "tag" in l.attrs["type"] and l.tgt == item_id and k in l.attrs.get("tags", ())
        }
        total += len(friends & taggers)
    return total
