import numpy as np
import pytest

from dismantle.graph import Graph

# criterion lines collected by test_acceptance, echoed at the end of the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)


def make(n, edges):
    return Graph.from_edges(n, np.asarray(edges, dtype=np.int64).reshape(-1, 2))


def barbell():
    # triangles {0,1,2} and {3,4,5}, bridge 2-3
    return make(6, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)])


def star(leaves=4):
    return make(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def path(n):
    return make(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return make(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return make(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def random_graph(n, p, seed, connected=False):
    rng = np.random.default_rng(seed)
    while True:
        iu, ju = np.triu_indices(n, 1)
        keep = rng.random(len(iu)) < p
        g = make(n, np.column_stack([iu[keep], ju[keep]]))
        if not connected:
            return g
        from dismantle.graph import connected_components

        if n == 1 or len(connected_components(g).components) == 1:
            return g


def to_nx(g):
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(map(tuple, g.edges().tolist()))
    return h


@pytest.fixture
def bb():
    return barbell()


def oracle_graph(seed):
    """Sparse random connected graph, 5 <= n <= 64, mean degree drawn from [2, 10]."""
    from dismantle.io import extract_gcc

    rng = np.random.default_rng(seed)
    while True:
        n = int(rng.integers(8, 65))
        d = float(rng.uniform(2, 10))
        g = extract_gcc(random_graph(n, min(d / (n - 1), 1.0), int(rng.integers(2**31))))
        if g.n >= 5:
            return g
