import json

import pytest

from socialgraph.errors import DanglingEndpointError, GraphFileError
from socialgraph.fixtures import random_plain_graph, random_tagging_graph, rng_from
from socialgraph.graph import build_graph, node
from socialgraph.index import ClusteringStrategy, build_index, cluster_users, social_sets
from socialgraph.io import load_graph, load_index_snapshot, save_graph, save_index_snapshot


def paths(tmp_path, stem="g"):
    return str(tmp_path / f"{stem}.nodes.jsonl"), str(tmp_path / f"{stem}.links.jsonl")


def test_round_trip_random_graphs(tmp_path):
    rng = rng_from(71)
    for i in range(20):
        g = random_plain_graph(rng, 12, 18)
        np, lp = paths(tmp_path, f"g{i}")
        save_graph(g, np, lp)
        assert load_graph(np, lp) == g


def test_save_bytes_stable(tmp_path):
    g = random_plain_graph(rng_from(72), 12, 18)
    np1, lp1 = paths(tmp_path, "a")
    np2, lp2 = paths(tmp_path, "b")
    save_graph(g, np1, lp1)
    save_graph(g, np2, lp2)
    assert open(np1, "rb").read() == open(np2, "rb").read()
    assert open(lp1, "rb").read() == open(lp2, "rb").read()


def test_empty_graph_round_trip(tmp_path):
    np, lp = paths(tmp_path)
    save_graph(build_graph([], []), np, lp)
    assert open(np).read() == "" and open(lp).read() == ""
    assert load_graph(np, lp) == build_graph([], [])


def test_load_is_two_pass(tmp_path):
    # a link may appear in its file regardless of node file order
    np, lp = paths(tmp_path)
    with open(np, "w") as fh:
        fh.write(json.dumps({"id": "b", "attrs": {"type": "user"}}) + "\n")
        fh.write(json.dumps({"id": "a", "attrs": {"type": "user"}}) + "\n")
    with open(lp, "w") as fh:
        fh.write(json.dumps({"id": "l", "src": "a", "tgt": "b", "attrs": {"type": "e"}}) + "\n")
    g = load_graph(np, lp)
    assert set(g.nodes) == {"a", "b"} and set(g.links) == {"l"}


def test_numeric_ids_stringified(tmp_path):
    np, lp = paths(tmp_path)
    with open(np, "w") as fh:
        fh.write(json.dumps({"id": 1, "attrs": {"type": "user"}}) + "\n")
        fh.write(json.dumps({"id": 2, "attrs": {"type": "item"}}) + "\n")
    with open(lp, "w") as fh:
        fh.write(json.dumps({"id": 12, "src": 1, "tgt": 2, "attrs": {"type": "act"}}) + "\n")
    g = load_graph(np, lp)
    assert set(g.nodes) == {"1", "2"}
    assert g.links["12"].src == "1"


def test_parse_error_carries_location(tmp_path):
    np, lp = paths(tmp_path)
    with open(np, "w") as fh:
        fh.write(json.dumps({"id": "a", "attrs": {"type": "user"}}) + "\n")
        fh.write("{not json\n")
    open(lp, "w").close()
    with pytest.raises(GraphFileError) as err:
        load_graph(np, lp)
    assert err.value.line == 2


def test_build_errors_propagate(tmp_path):
    np, lp = paths(tmp_path)
    with open(np, "w") as fh:
        fh.write(json.dumps({"id": "a", "attrs": {"type": "user"}}) + "\n")
    with open(lp, "w") as fh:
        fh.write(json.dumps({"id": "l", "src": "a", "tgt": "zz", "attrs": {"type": "e"}}) + "\n")
    with pytest.raises(DanglingEndpointError):
        load_graph(np, lp)


def test_scalar_vs_array_values_equivalent(tmp_path):
    np, lp = paths(tmp_path)
    with open(np, "w") as fh:
        fh.write(json.dumps({"id": "a", "attrs": {"type": ["user"], "w": 2}}) + "\n")
    open(lp, "w").close()
    g = load_graph(np, lp)
    assert g.nodes["a"] == node("a", type="user", w=2.0)


def test_float_values_exact_round_trip(tmp_path):
    g = build_graph([node("a", type="user", score=2 / 3, w=(0.1, 1e-9))], [])
    np, lp = paths(tmp_path)
    save_graph(g, np, lp)
    assert load_graph(np, lp) == g


def test_index_snapshot_round_trip(tmp_path):
    g = random_tagging_graph(rng_from(73), n_users=20, n_items=40, n_tags=6)
    sets = social_sets(g)
    model = cluster_users(sets, ClusteringStrategy("network", 0.5))
    index = build_index(sets, model, {t for (_, t) in sets.taggers})
    path = str(tmp_path / "index.snap")
    save_index_snapshot(index, path)
    loaded = load_index_snapshot(path)
    assert loaded == index
    path2 = str(tmp_path / "index2.snap")
    save_index_snapshot(loaded, path2)
    assert open(path, "rb").read() == open(path2, "rb").read()


def test_index_snapshot_rejects_other_files(tmp_path):
    path = str(tmp_path / "bogus.snap")
    with open(path, "w") as fh:
        fh.write('{"format":"other"}\n{}\n{}\n')
    with pytest.raises(GraphFileError):
        load_index_snapshot(path)
