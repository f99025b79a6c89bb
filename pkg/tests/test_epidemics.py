import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dismantle.epidemics import SirParams, sir_ensemble, sir_run
from dismantle.errors import InvalidParam
from dismantle.graph import Graph, remove_edges

from conftest import complete, cycle, random_graph, to_nx


def stepwise_sir(g, beta, gamma, seed_node, steps, rng):
    """Per-step coin flips: infect neighbors with beta, then recover with gamma."""
    state = np.zeros(g.n, dtype=np.int8)  # 0 S, 1 I, 2 R
    state[seed_node] = 1
    infected = [1]
    for _ in range(steps):
        new = np.zeros(g.n, dtype=bool)
        for i in np.flatnonzero(state == 1):
            for j in g.neighbors(i):
                if state[j] == 0 and rng.random() < beta:
                    new[j] = True
        recover = (state == 1) & (rng.random(g.n) < gamma)
        state[recover] = 2
        state[new] = 1
        infected.append(int((state == 1).sum()))
    return np.array(infected), int((state != 0).sum())


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 40), st.floats(0, 1), st.floats(0, 1), st.integers(0, 1000))
def test_conservation_and_monotone_compartments(n, beta, gamma, seed):
    g = random_graph(n, 0.2, seed)
    tr = sir_run(g, SirParams(beta, gamma, 1, 300, seed))
    assert np.all(tr.S + tr.I + tr.R == n)
    assert np.all(np.diff(tr.R) >= 0) and np.all(np.diff(tr.S) <= 0)
    ens = sir_ensemble(g, SirParams(beta, gamma, 1, 300, seed), runs=5)
    assert np.allclose(ens.S + ens.I + ens.R, n)


def test_no_transmission_decay():
    g = complete(20)
    gamma = 0.1
    ens = sir_ensemble(g, SirParams(0.0, gamma, 1, 60, 1), runs=4000)
    assert np.all(ens.S == 19)
    t = np.arange(0, 30)
    expected = (1 - gamma) ** t
    se = np.sqrt(expected * (1 - expected) / 4000)
    assert np.all(np.abs(ens.I[t] - expected) <= 4 * se + 1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_flooding_reaches_everyone_within_diameter(seed):
    g = random_graph(40, 0.1, seed)
    comp = max(nx.connected_components(to_nx(g)), key=len)
    g = g.subgraph(sorted(comp))
    tr = sir_run(g, SirParams(1.0, 0.0, 1, 500, seed))
    reached = tr.I + tr.R
    diameter = nx.diameter(to_nx(g))
    assert reached[0] == 1
    assert reached[min(diameter, len(reached) - 1)] == g.n


def test_edgeless_graph_ignores_beta():
    g = Graph.empty(10)
    a = sir_run(g, SirParams(0.0, 0.2, 1, 100, 4))
    b = sir_run(g, SirParams(0.9, 0.2, 1, 100, 4))
    assert np.array_equal(a.I, b.I) and np.array_equal(a.S, b.S)


def test_single_run_ensemble_equals_run():
    g = cycle(15)
    p = SirParams(0.3, 0.1, 1, 200, 8)
    ens, run = sir_ensemble(g, p, runs=1), sir_run(g, p, 0)
    assert np.array_equal(ens.I, run.I) and np.array_equal(ens.R, run.R)


def test_matches_stepwise_simulation():
    g = random_graph(30, 0.12, 5)
    beta, gamma, runs, steps = 0.2, 0.15, 3000, 40
    rng = np.random.default_rng(123)
    seeds = rng.integers(0, g.n, runs)
    ref_i = np.zeros(steps + 1)
    ref_final = []
    for s in seeds:
        curve, final = stepwise_sir(g, beta, gamma, s, steps, rng)
        ref_i += curve
        ref_final.append(final)
    ref_i /= runs
    ens = sir_ensemble(g, SirParams(beta, gamma, 1, 2000, 9), runs=runs)
    ours = ens.padded(steps + 1).I[: steps + 1]
    assert np.max(np.abs(ours - ref_i)) < 0.35
    assert ens.final_size == pytest.approx(np.mean(ref_final), abs=0.6)


@pytest.mark.parametrize("seed", range(5))
def test_coupled_removal_never_grows_outbreak(seed):
    g = random_graph(80, 0.06, seed)
    rng = np.random.default_rng(seed)
    e = g.edges()
    h = remove_edges(g, e[rng.random(len(e)) < 0.3])
    p = SirParams(0.3, 0.1, 1, 500, seed)
    for r in range(30):
        assert sir_run(h, p, r, reference=g).final_size <= sir_run(g, p, r).final_size


def test_explicit_initial_nodes_and_validation():
    g = cycle(10)
    tr = sir_run(g, SirParams(0.0, 1.0, [2, 5], 10, 0))
    assert tr.I[0] == 2 and tr.R[1] == 2
    with pytest.raises(InvalidParam):
        SirParams(beta=1.5)
    with pytest.raises(InvalidParam):
        sir_run(g, SirParams(0.1, 0.1, 11))
    with pytest.raises(InvalidParam):
        sir_run(g, SirParams(0.1, 0.1, [10]))
    with pytest.raises(InvalidParam):
        sir_ensemble(g, SirParams(), runs=0)


def test_r0_and_csv():
    assert SirParams(0.10, 0.02).r0 == pytest.approx(5)
    ens = sir_ensemble(cycle(8), SirParams(0.5, 0.2, 1, 50, 0), runs=3)
    lines = ens.to_csv().splitlines()
    assert lines[0] == "t,S_mean,I_mean,R_mean,I_std,R_std"
    assert len(lines) == len(ens.S) + 1


def test_ensemble_deterministic_across_workers():
    g = random_graph(60, 0.08, 2)
    p = SirParams(0.2, 0.05, 1, 500, 3)
    a = sir_ensemble(g, p, runs=20, workers=1)
    b = sir_ensemble(g, p, runs=20, workers=4)
    assert np.array_equal(a.I, b.I) and np.array_equal(a.R_std, b.R_std)
