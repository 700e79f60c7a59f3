import pytest
from hypothesis import strategies as st

from cmmac.graph import Network

TOY_PARTITIONS = {
    "c1": {1, 2, 3, 4},
    "c2": {3, 5, 6, 7, 8, 11},
    "c3": {6, 9, 10, 11, 12},
}
# three overlapping communities over vertices 1..12; the edges are arbitrary
TOY_EDGES = [
    (1, 2), (2, 3), (3, 4), (1, 4),
    (3, 5), (5, 6), (6, 7), (7, 8), (8, 11), (5, 7),
    (6, 9), (9, 10), (10, 11), (11, 12), (9, 12),
]


@pytest.fixture
def toy_partitions():
    return {cid: set(m) for cid, m in TOY_PARTITIONS.items()}


@pytest.fixture
def toy_network():
    return Network(range(1, 13), TOY_EDGES)


@st.composite
def partition_maps(draw, max_vertices=40, max_communities=8):
    """Random overlapping partition maps over vertices 0..n-1."""
    n = draw(st.integers(2, max_vertices))
    k = draw(st.integers(1, max_communities))
    parts = {}
    for i in range(k):
        members = draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n))
        parts[f"k{i}"] = members
    return n, parts


@st.composite
def networks(draw, max_vertices=30):
    n = draw(st.integers(2, max_vertices))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=min(len(pairs), 80), unique=True))
    return Network(range(n), chosen)


# acceptance lines: criterion -> list of (check, ok, detail)
ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


@pytest.fixture
def report():
    def record(criterion: int, check: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE.setdefault(criterion, []).append((check, bool(ok), detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[criterion]
        verdict = "PASS" if all(ok for _, ok, _ in checks) else "FAIL"
        parts = "; ".join(f"{name} {'ok' if ok else 'FAIL'} ({detail})" for name, ok, detail in checks)
        terminalreporter.write_line(f"criterion {criterion}: {verdict}  {parts}")
