"""Result organization: grouping of scored items, meaningful-group
selection, and per-item / aggregate explanations.

Grouping criteria:

* social: greedy leader clustering of items whose full tagger sets are
  Jaccard-similar above a threshold;
* topical: one group per topic reached by a 'belong' link (an item with
  several topics goes to its smallest topic id so groups partition),
  plus a residual group;
* structural: one group per distinct value of a named attribute
  (multi-valued items appear in each), plus a residual group for items
  lacking the attribute.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .aggfn import jaccard
from .discovery import acted_items, rating
from .errors import UnknownCriterionAttrError, UnknownItemError, UnknownUserError
from .graph import SocialContentGraph, sorted_values
from .index import social_sets

RESIDUAL = "(none)"


@dataclass(frozen=True)
class SocialGrouping:
    theta: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta must be in [0, 1], got {self.theta!r}")


@dataclass(frozen=True)
class TopicalGrouping:
    pass


@dataclass(frozen=True)
class StructuralGrouping:
    attr: str


GroupingCriterion = Union[SocialGrouping, TopicalGrouping, StructuralGrouping]


@dataclass(frozen=True)
class ItemGroup:
    id: str
    members: tuple  # item ids, input order
    label: str
    quality: float  # mean relevance of members
    size: int


@dataclass(frozen=True)
class Explanation:
    subject: tuple  # (user id, item id)
    strategy: str  # content | collaborative
    evidence: tuple  # of (element id, weight), weight desc then id
    summary: str


def _label_from(g: SocialContentGraph, element_id: str) -> str:
    names = g.nodes[element_id].attrs.get("name")
    if names:
        return str(sorted_values(names)[0])
    return element_id


def _make_group(g, gid, label, members_scores) -> ItemGroup:
    members = tuple(i for i, _ in members_scores)
    quality = sum(s for _, s in members_scores) / len(members_scores)
    return ItemGroup(id=gid, members=members, label=label, quality=quality, size=len(members))


def group_items(items, g: SocialContentGraph, criterion: GroupingCriterion) -> list:
    """Partition a scored item list (pairs of item id and score) into
    ItemGroups under the given criterion."""
    items = list(items)
    if not items:
        raise ValueError("group_items needs a non-empty item list")
    if isinstance(criterion, SocialGrouping):
        return _social_groups(items, g, criterion.theta)
    if isinstance(criterion, TopicalGrouping):
        return _topical_groups(items, g)
    return _structural_groups(items, g, criterion.attr)


def _social_groups(items, g, theta) -> list:
    sets = social_sets(g)
    groups: list = []  # (leader id, [(item, score)])
    for item, score in items:
        taggers = sets.all_taggers(item)
        placed = False
        for leader, members in groups:
            if jaccard(taggers, sets.all_taggers(leader)) >= theta:
                members.append((item, score))
                placed = True
                break
        if not placed:
            groups.append((item, [(item, score)]))
    return [
        _make_group(g, f"social:{leader}", _label_from(g, leader), members)
        for leader, members in groups
    ]


def _topics_of(g, item_id) -> list:
    return sorted(
        l.tgt for l in g.links.values() if l.src == item_id and "belong" in l.attrs["type"]
    )


def _topical_groups(items, g) -> list:
    buckets: dict = {}
    order: list = []
    for item, score in items:
        topics = _topics_of(g, item)
        key = topics[0] if topics else RESIDUAL
        if key not in buckets:
            buckets[key] = []
            order.append(key)
        buckets[key].append((item, score))
    out = []
    for key in order:
        label = RESIDUAL if key == RESIDUAL else _label_from(g, key)
        out.append(_make_group(g, f"topic:{key}", label, buckets[key]))
    return out


def _structural_groups(items, g, attr) -> list:
    if all(attr not in g.nodes[item].attrs for item, _ in items):
        raise UnknownCriterionAttrError(attr)
    buckets: dict = {}
    order: list = []
    for item, score in items:
        values = g.nodes[item].attrs.get(attr)
        keys = [str(v) for v in sorted_values(values)] if values else [RESIDUAL]
        for key in keys:
            if key not in buckets:
                buckets[key] = []
                order.append(key)
            buckets[key].append((item, score))
    return [
        _make_group(g, f"attr:{attr}={key}", key, buckets[key]) for key in order
    ]


def select_groups(groups, max_n: int) -> list:
    """The max_n most meaningful groups: quality descending, then size
    descending, then group id."""
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    return sorted(groups, key=lambda grp: (-grp.quality, -grp.size, grp.id))[:max_n]


def _item_sim(sets, a: str, b: str) -> float:
    return jaccard(sets.all_taggers(a), sets.all_taggers(b))


def _user_sim(g, a: str, b: str) -> float:
    return jaccard(acted_items(g, a), acted_items(g, b))


def _require(g, user_id, item_id):
    if user_id not in g.nodes:
        raise UnknownUserError(user_id)
    if item_id not in g.nodes:
        raise UnknownItemError(item_id)


def explain_item(g: SocialContentGraph, user_id: str, item_id: str, strategy: str) -> Explanation:
    """Why an item was recommended to a user.

    Content evidence: the user's own items similar to it, weighted by
    similarity times the user's rating. Collaborative evidence: similar
    users who acted on it, weighted by user similarity times their
    rating of it. Only positive weights are kept.
    """
    _require(g, user_id, item_id)
    if strategy not in ("content", "collaborative"):
        raise ValueError(f"unknown explanation strategy: {strategy!r}")
    sets = social_sets(g)
    evidence = []
    if strategy == "content":
        for other in acted_items(g, user_id):
            sim = _item_sim(sets, item_id, other)
            if sim > 0:
                weight = sim * rating(g, user_id, other)
                if weight > 0:
                    evidence.append((other, weight))
    else:
        for n in g.nodes.values():
            if "user" not in n.attrs["type"] or n.id == user_id:
                continue
            if item_id not in acted_items(g, n.id):
                continue
            sim = _user_sim(g, user_id, n.id)
            if sim > 0:
                weight = sim * rating(g, n.id, item_id)
                if weight > 0:
                    evidence.append((n.id, weight))
    evidence.sort(key=lambda e: (-e[1], e[0]))
    summary, _ = aggregate_explanations(g, user_id, item_id, strategy)
    return Explanation(
        subject=(user_id, item_id),
        strategy=strategy,
        evidence=tuple(evidence),
        summary=summary,
    )


def aggregate_explanations(g: SocialContentGraph, user_id: str, target, strategy: str):
    """One-sentence aggregate explanation plus its unrounded ratio.

    ``target`` is an item id or an ItemGroup (whose ratio is the mean
    of its members' ratios). Percentages are rounded only in the
    sentence, never in the returned ratio.
    """
    if isinstance(target, ItemGroup):
        ratios = [
            _aggregate_ratio(g, user_id, member, strategy) for member in target.members
        ]
        ratio = sum(ratios) / len(ratios)
        pct = round(ratio * 100)
        if strategy == "collaborative":
            return f"{pct}% of your friends endorsed items in group '{target.label}'", ratio
        return (
            f"items in group '{target.label}' are similar to {pct}% of items you visited before",
            ratio,
        )
    ratio = _aggregate_ratio(g, user_id, target, strategy)
    pct = round(ratio * 100)
    if strategy == "collaborative":
        return f"{pct}% of your friends endorsed this item", ratio
    return f"similar to {pct}% of items you visited before", ratio


def _aggregate_ratio(g, user_id, item_id, strategy) -> float:
    _require(g, user_id, item_id)
    if strategy not in ("content", "collaborative"):
        raise ValueError(f"unknown explanation strategy: {strategy!r}")
    sets = social_sets(g)
    if strategy == "collaborative":
        network = sets.network.get(user_id, frozenset())
        if not network:
            return 0.0
        return len(network & sets.all_taggers(item_id)) / len(network)
    mine = acted_items(g, user_id)
    if not mine:
        return 0.0
    similar = sum(1 for other in mine if _item_sim(sets, item_id, other) > 0)
    return similar / len(mine)
