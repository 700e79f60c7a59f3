import math

import pytest
from hypothesis import given, settings, strategies as st

from cmmac.bipartite import build_bipartite
from cmmac.features import (
    CSV_HEADER,
    FEATURE_ORDER,
    feature_matrix,
    feature_row,
    feature_rows,
    friends_measure,
    shortest_path,
    write_feature_csv,
)
from cmmac.graph import Network

import oracles
from conftest import partition_maps


@pytest.fixture
def bpg(toy_network, toy_partitions):
    return build_bipartite(toy_network, toy_partitions)


def values(row):
    return tuple(getattr(row, f) for f in FEATURE_ORDER)


# frozen from the brute-force oracle; the c1/c2 overlap is only vertex 3, so FM(3, c2) is 1 + 6
@pytest.mark.parametrize(
    "v, c, mask, expected",
    [
        (3, "c2", False, (2, 6, 8, 12, 7, 1)),
        (3, "c2", True, (1, 5, 6, 5, 0, -1)),
        (3, "c3", False, (2, 5, 7, 10, 2, 3)),
        (6, "c2", True, (1, 5, 6, 5, 1, 3)),
        (1, "c2", False, (1, 6, 7, 6, 1, 3)),
        (1, "c1", False, (1, 4, 5, 4, 4, 1)),
        (1, "c1", True, (0, 3, 3, 0, 0, -1)),
    ],
)
def test_toy_values(bpg, toy_partitions, v, c, mask, expected):
    assert values(feature_row(bpg, v, c, mask=mask)) == expected
    oracle = oracles.features(oracles.explicit_bpg(toy_partitions, range(1, 13)), v, c, mask)
    assert tuple(oracle[f] for f in FEATURE_ORDER) == expected


def test_two_hop_path(bpg):
    assert shortest_path(bpg, 1, "c3") == 5
    assert friends_measure(bpg, 1, "c3") == 0


def test_isolated_vertex():
    bpg = build_bipartite(Network(range(3)), {"a": {0, 1}})
    row = feature_row(bpg, 2, "a")
    assert (row.d_v, row.pa, row.fm, row.sp) == (0, 0, 0, -1)


def test_unknown_inputs(bpg):
    with pytest.raises(KeyError):
        feature_row(bpg, 99, "c1")
    with pytest.raises(KeyError):
        feature_row(bpg, 1, "zz")


def test_matrix_and_csv(tmp_path, bpg):
    rows = feature_rows(bpg, [(3, "c2"), (1, "c3")], label=1)
    m = feature_matrix(rows)
    assert m.shape == (2, 6)
    assert feature_matrix([]).shape == (0, 6)
    write_feature_csv(rows, tmp_path / "f.csv")
    lines = (tmp_path / "f.csv").read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[1] == "3,c2,2,6,8,12,7,1,1"


@st.composite
def bpg_and_pair(draw):
    n, parts = draw(partition_maps(max_vertices=25, max_communities=6))
    v = draw(st.integers(0, n - 1))
    c = draw(st.sampled_from(sorted(parts)))
    return n, parts, v, c


@given(bpg_and_pair(), st.booleans())
@settings(max_examples=150, deadline=None)
def test_matches_oracle(case, mask):
    n, parts, v, c = case
    bpg = build_bipartite(Network(range(n)), parts)
    got = feature_row(bpg, v, c, mask=mask)
    want = oracles.features(oracles.explicit_bpg(parts, range(n)), v, c, mask)
    assert values(got) == tuple(want[f] for f in FEATURE_ORDER)


@given(bpg_and_pair())
@settings(max_examples=80, deadline=None)
def test_structural_identities(case):
    n, parts, v, c = case
    bpg = build_bipartite(Network(range(n)), parts)
    for mask in (False, True):
        r = feature_row(bpg, v, c, mask=mask)
        assert r.tf == r.d_v + r.d_c
        assert r.pa == r.d_v * r.d_c
        assert r.sp == -1 or r.sp % 2 == 1
        assert 0 <= r.fm
    if v in parts[c]:
        assert feature_row(bpg, v, c).sp == 1
    # a direct co-membership (non-edge) sits at distance three, a membership at one
    unmasked = feature_row(bpg, v, c)
    if v not in parts[c] and any(parts[c] & parts[x] for x in parts if v in parts[x]):
        assert unmasked.sp == 3


def test_sp_cache_is_per_view(bpg):
    before = shortest_path(bpg, 1, "c3")
    assert shortest_path(bpg, 1, "c3") == before
    fresh = build_bipartite(Network(range(1, 13)), {"c1": {1, 2}, "c3": {1, 9}})
    assert shortest_path(fresh, 2, "c3") == 3
    assert math.isfinite(before)
