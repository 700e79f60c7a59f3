import json

import pytest
from hypothesis import given, settings, strategies as st

from cmmac.graph import (
    GraphFormatError,
    LabeledDataset,
    Network,
    degree,
    load_dataset,
    load_edge_list,
    load_partition_map,
    neighborhood,
    save_dataset,
    save_edge_list,
    save_partition_map,
    split_partition_map,
)
from cmmac.bipartite import build_bipartite

from conftest import networks


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestEdgeList:
    def test_triangle(self, tmp_path):
        g = load_edge_list(write(tmp_path, "e.txt", "0 1\n1 2\n2 0\n"))
        assert g.num_vertices == 3 and g.num_edges == 3

    def test_undirected_dedup(self, tmp_path):
        g = load_edge_list(write(tmp_path, "e.txt", "0 1\n1 0\n"))
        assert g.num_vertices == 2 and g.num_edges == 1

    def test_self_loop_rejected(self, tmp_path):
        with pytest.raises(GraphFormatError, match=r"e.txt:1: self-loop"):
            load_edge_list(write(tmp_path, "e.txt", "3 3\n"))

    def test_comments_tabs_and_parse_errors(self, tmp_path):
        g = load_edge_list(write(tmp_path, "e.txt", "# header\n0\t1  # trailing\n\n2 1\n"))
        assert g.edges() == [(0, 1), (1, 2)]
        with pytest.raises(GraphFormatError, match=r":2:"):
            load_edge_list(write(tmp_path, "bad.txt", "0 1\n0 x\n"))
        with pytest.raises(GraphFormatError, match=r":1:"):
            load_edge_list(write(tmp_path, "bad3.txt", "0 1 2\n"))


class TestPartitionMap:
    def test_toy(self, tmp_path):
        p = write(tmp_path, "p.json", '{"c1":[1,2,3,4],"c2":[3,5,6,7,8,11],"c3":[6,9,10,11,12]}')
        parts = load_partition_map(p)
        assert len(parts) == 3
        assert parts["c1"] == {1, 2, 3, 4}

    def test_singleton(self, tmp_path):
        assert load_partition_map(write(tmp_path, "p.json", '{"a":[0]}')) == {"a": {0}}

    def test_empty_community(self, tmp_path):
        with pytest.raises(GraphFormatError, match="empty"):
            load_partition_map(write(tmp_path, "p.json", '{"a":[]}'))

    def test_malformed(self, tmp_path):
        with pytest.raises(GraphFormatError, match="malformed"):
            load_partition_map(write(tmp_path, "p.json", '{"a":[1,'))


class TestQueries:
    def test_triangle_degree(self):
        g = Network(edges=[(0, 1), (1, 2), (2, 0)])
        assert {degree(g, v) for v in range(3)} == {2}

    def test_isolated(self):
        g = Network([0, 5], [(0, 1)])
        assert degree(g, 5) == 0
        assert neighborhood(g, 5) == set()

    def test_path_center(self):
        g = Network(edges=[(0, 1), (1, 2)])
        assert neighborhood(g, 1) == {0, 2}

    def test_unknown_vertex(self):
        with pytest.raises(KeyError):
            degree(Network([0]), 7)

    def test_toy_bipartite_degrees(self, toy_network, toy_partitions):
        bpg = build_bipartite(toy_network, toy_partitions)
        cv = bpg.community_vertices
        assert degree(bpg.graph, cv["c2"]) == 6
        assert neighborhood(bpg.graph, 3) == {cv["c1"], cv["c2"]}

    @given(networks())
    def test_handshake(self, g):
        assert sum(g.degree(v) for v in g.vertices) == 2 * g.num_edges


class TestRoundTrip:
    @given(networks())
    @settings(max_examples=25)
    def test_edge_list(self, tmp_path_factory, g):
        d = tmp_path_factory.mktemp("rt")
        save_edge_list(g, d / "a.txt")
        h = load_edge_list(d / "a.txt")
        save_edge_list(h, d / "b.txt")
        assert (d / "a.txt").read_bytes() == (d / "b.txt").read_bytes()
        assert h.edges() == g.edges()

    def test_partition_map(self, tmp_path, toy_partitions):
        save_partition_map(toy_partitions, tmp_path / "a.json")
        again = load_partition_map(tmp_path / "a.json")
        save_partition_map(again, tmp_path / "b.json")
        assert again == toy_partitions
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_dataset_keeps_isolated_members(self, tmp_path):
        g = Network([0, 1, 2, 9], [(0, 1)])
        ds = LabeledDataset(g, {"a": {0, 1}, "b": {2, 9}}, {"b"}, {"seed": 1})
        save_dataset(ds, tmp_path / "ds")
        back = load_dataset(tmp_path / "ds")
        assert back.network == g
        assert back.partitions == ds.partitions
        assert back.anomalous_ids == {"b"}
        assert json.loads((tmp_path / "ds" / "labels.json").read_text()) == {"anomalous": ["b"]}

    def test_dataset_requires_labels(self, tmp_path):
        save_dataset(LabeledDataset(Network([0]), {"a": {0}}), tmp_path / "ds")
        (tmp_path / "ds" / "labels.json").unlink()
        with pytest.raises(FileNotFoundError):
            load_dataset(tmp_path / "ds")
        assert load_dataset(tmp_path / "ds", require_labels=False).anomalous_ids == set()


class TestSplit:
    def make(self, n=130, n_anom=10):
        parts = {f"k{i:03d}": {i} for i in range(n)}
        return parts, {f"k{i:03d}" for i in range(n - n_anom, n)}

    def test_full_scale_sizes(self):
        parts, anom = self.make()
        train, test = split_partition_map(parts, 20, anom, seed=4)
        assert len(train) == 20 and len(test) == 110
        assert anom <= test.keys()
        assert not anom & train.keys()

    def test_empty_train(self):
        parts, anom = self.make(10, 2)
        train, test = split_partition_map(parts, 0, anom, seed=0)
        assert train == {} and test == parts

    def test_deterministic(self):
        parts, anom = self.make()
        assert split_partition_map(parts, 20, anom, 7) == split_partition_map(parts, 20, anom, 7)

    def test_errors(self):
        parts, anom = self.make(10, 5)
        with pytest.raises(ValueError):
            split_partition_map(parts, 10, anom)
        with pytest.raises(ValueError, match="normal"):
            split_partition_map(parts, 6, anom)

    @given(st.integers(2, 40), st.data())
    def test_partition_property(self, n, data):
        parts = {f"k{i}": {i} for i in range(n)}
        anom = set(data.draw(st.lists(st.sampled_from(sorted(parts)), max_size=n - 1, unique=True)))
        n_train = data.draw(st.integers(0, n - 1 - len(anom)))
        seed = data.draw(st.integers(0, 2**31))
        train, test = split_partition_map(parts, n_train, anom, seed)
        assert train.keys() | test.keys() == parts.keys()
        assert not train.keys() & test.keys()
        assert anom <= test.keys()
