"""Brute-force reference implementations used only by the tests.

Each follows the literal definition on an explicit graph and shares no code
with the package under test.
"""

import itertools

import networkx as nx


def explicit_bpg(partitions, regular_vertices=()):
    """networkx BPG with community nodes as ('c', cid)."""
    b = nx.Graph()
    b.add_nodes_from(regular_vertices)
    for cid, members in partitions.items():
        b.add_node(("c", cid))
        for v in members:
            b.add_edge(v, ("c", cid))
    return b


def _without(b, v, cid, mask):
    node = ("c", cid)
    if mask and b.has_edge(v, node):
        b = b.copy()
        b.remove_edge(v, node)
    return b


def features(b, v, cid, mask=False):
    b = _without(b, v, cid, mask)
    node = ("c", cid)
    gv, gc = set(b[v]), set(b[node])
    fm = 0
    for x in gv:
        for y in gc:
            if x == y or b.has_edge(x, y):
                fm += 1
    try:
        sp = nx.shortest_path_length(b, v, node)
    except nx.NetworkXNoPath:
        sp = -1
    return {
        "d_v": len(gv),
        "d_c": len(gc),
        "tf": len(gv | gc),
        "pa": len(gv) * len(gc),
        "fm": fm,
        "sp": sp,
    }


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges())
    return h


def baselines(h, members):
    """All six community scores by direct loops over a networkx graph."""
    members = set(members)
    n_total = h.number_of_nodes()
    m = h.number_of_edges()
    k = dict(h.degree())
    internal = sum(1 for u, v in h.edges() if u in members and v in members)
    cut = sum(1 for u, v in h.edges() if (u in members) != (v in members))
    possible = len(members) * (n_total - len(members))
    flake = 0
    odf = 0.0
    for v in members:
        inside = sum(1 for u in h[v] if u in members)
        outside = k[v] - inside
        flake += outside > inside
        if k[v]:
            odf += outside / k[v]
    first = 0.0
    for i, j in itertools.permutations(members, 2):
        first += (1.0 if h.has_edge(i, j) else 0.0) - k[i] * k[j] / (2 * m)
    boundary_vertices = {b for v in members for b in h[v] if b not in members}
    second = 0.0
    for i in members:
        for b in boundary_vertices:
            if h.has_edge(i, b):
                second += 1 - min(1, k[i] * k[b] / (2 * m))
    return {
        "average_degree": sum(k[v] for v in members) / len(members),
        "cut_ratio": cut / possible if possible else 0.0,
        "conductance": cut / (2 * internal + cut) if (2 * internal + cut) else 0.0,
        "flake_odf": flake / len(members),
        "average_odf": odf / len(members),
        "unattributed_amen": first - second,
    }


def average_precision_steps(order, positives):
    """Area under the precision-recall step curve, sweeping a cutoff down the ranking."""
    positives = set(positives)
    prev_recall = 0.0
    area = 0.0
    for k in range(1, len(order) + 1):
        top = order[:k]
        tp = sum(1 for c in top if c in positives)
        precision = tp / k
        recall = tp / len(positives)
        area += precision * (recall - prev_recall)
        prev_recall = recall
    return area
