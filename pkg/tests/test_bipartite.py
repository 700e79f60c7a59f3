import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings

from cmmac.bipartite import build_bipartite, candidate_edges, dump_bipartite, sample_negative_edges
from cmmac.graph import Network

from conftest import partition_maps


def test_toy_edge_count(toy_network, toy_partitions):
    bpg = build_bipartite(toy_network, toy_partitions)
    assert bpg.num_edges == 15
    assert bpg.graph.num_edges == 15
    assert bpg.graph.num_vertices == 12 + 3


def test_candidates_of_one_community(toy_network, toy_partitions):
    bpg = build_bipartite(toy_network, toy_partitions)
    pairs = candidate_edges(bpg, ["c2"])
    assert pairs == [(v, "c2") for v in (3, 5, 6, 7, 8, 11)]


def test_unknown_community(toy_network, toy_partitions):
    bpg = build_bipartite(toy_network, toy_partitions)
    with pytest.raises(KeyError):
        candidate_edges(bpg, ["c9"])


def test_partition_vertex_outside_graph(toy_network):
    with pytest.raises(ValueError):
        build_bipartite(toy_network, {"x": {1, 99}})


def test_negative_complement(toy_network, toy_partitions):
    bpg = build_bipartite(toy_network, toy_partitions)
    every = sample_negative_edges(bpg, 21, np.random.default_rng(0))
    expected = {(v, c) for v in range(1, 13) for c in toy_partitions if v not in toy_partitions[c]}
    assert len(expected) == 12 * 3 - 15 == 21
    assert set(every) == expected
    with pytest.raises(ValueError):
        sample_negative_edges(bpg, 22, np.random.default_rng(0))


def test_sparse_sampling_distinct(toy_network, toy_partitions):
    bpg = build_bipartite(toy_network, toy_partitions)
    out = sample_negative_edges(bpg, 5, np.random.default_rng(3))
    assert len(set(out)) == 5
    assert all(v not in toy_partitions[c] for v, c in out)


def test_complete_bipartite_has_no_negatives():
    g = Network(range(4))
    bpg = build_bipartite(g, {"a": {0, 1, 2, 3}, "b": {0, 1, 2, 3}})
    with pytest.raises(ValueError):
        sample_negative_edges(bpg, 1, np.random.default_rng(0))


def test_min_vertex_degree_filter():
    g = Network(range(5))
    bpg = build_bipartite(g, {"a": {0, 1}, "b": {1, 2}})
    out = sample_negative_edges(bpg, 2, np.random.default_rng(0), min_vertex_degree=1)
    assert set(out) == {(0, "b"), (2, "a")}
    with pytest.raises(ValueError):
        sample_negative_edges(bpg, 3, np.random.default_rng(0), min_vertex_degree=1)


def test_overlaps(toy_network, toy_partitions):
    ov = build_bipartite(toy_network, toy_partitions).overlaps
    assert ov["c1"] == {"c1": 4, "c2": 1}
    assert ov["c2"]["c3"] == 2


def test_dump(tmp_path, toy_network, toy_partitions):
    dump_bipartite(build_bipartite(toy_network, toy_partitions), tmp_path / "b.txt")
    lines = (tmp_path / "b.txt").read_text().splitlines()
    assert len(lines) == 15
    assert "3\tc::c1" in lines


@given(partition_maps())
@settings(max_examples=60)
def test_invariants(data):
    n, parts = data
    bpg = build_bipartite(Network(range(n)), parts)
    h = nx.Graph()
    h.add_nodes_from(bpg.graph.vertices)
    h.add_edges_from(bpg.graph.edges())
    cv = set(bpg.community_vertices.values())
    # two-colourable with communities on one side
    for u, v in h.edges():
        assert (u in cv) != (v in cv)
    assert bpg.num_edges == sum(len(m) for m in parts.values())
    for cid, node in bpg.community_vertices.items():
        assert h.degree(node) == len(parts[cid]) == bpg.degree_community(cid)
    for v in range(n):
        assert h.degree(v) == sum(v in m for m in parts.values()) == bpg.degree_regular(v)
