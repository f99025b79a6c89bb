import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dismantle.errors import InvalidParam, PlanMismatch, ZeroBaseline
from dismantle.evaluation import GccCurve, absolute_gap, average_curves, cfe, execute_plan, improvement
from dismantle.generators import gen_er
from dismantle.graph import Graph, gcc_fraction, remove_edges
from dismantle.io import extract_gcc
from dismantle.plan import RemovalPlan
from dismantle.spectral import SpectralConfig, hpi_ncut
from dismantle.strategies import bond_percolation_plan, hd_plan, site_percolation_plan

from conftest import barbell, path, random_graph, star


def naive_curve(g, plan, threshold=0.01):
    """Apply batches one at a time and recount components from scratch."""
    pts = [(0.0, gcc_fraction(g))]
    h, done = g, 0
    for b in plan.batches:
        if len(b) == 0:
            continue
        h = remove_edges(h, b)
        done += len(b)
        pts.append((done / g.m, gcc_fraction(h)))
        if pts[-1][1] < threshold:
            break
    return pts


@st.composite
def graph_and_plan(draw):
    n = draw(st.integers(2, 25))
    g = random_graph(n, draw(st.floats(0.05, 0.6)), draw(st.integers(0, 10**6)))
    kind = draw(st.sampled_from(["site", "bond", "prefix"]))
    seed = draw(st.integers(0, 10**6))
    plan = site_percolation_plan(g, seed) if kind == "site" else bond_percolation_plan(g, seed)
    if kind == "prefix":
        plan = plan.truncate(draw(st.integers(0, len(plan))))
    return g, plan


def test_empty_plan():
    g = path(4)
    assert execute_plan(g, RemovalPlan.empty(g.m)).points == [(0.0, 1.0)]


def test_star_hd_curve():
    g = star(4)
    assert execute_plan(g, hd_plan(g)).points == [(0.0, 1.0), (1.0, 0.2)]


def test_barbell_hpi_curve_threshold():
    g = barbell()
    _, plan = hpi_ncut(g, SpectralConfig(gcc_threshold=0.6, eta_override=100))
    assert execute_plan(g, plan, 0.6).points == pytest.approx([(0, 1), (1 / 7, 0.5)])


def test_execution_stops_below_threshold():
    g = path(5)
    plan = RemovalPlan.from_batches([[(1, 2)], [(3, 4)], [(0, 1)], [(2, 3)]], ["edge"] * 4, g.m)
    # after two batches the largest piece is 2 of 5 nodes
    assert execute_plan(g, plan, 0.5).points == pytest.approx([(0, 1), (0.25, 0.6), (0.5, 0.4)])
    assert len(execute_plan(g, plan, 0.01).points) == 5


def test_mismatched_plan_rejected():
    g = path(4)
    with pytest.raises(PlanMismatch):
        execute_plan(g, RemovalPlan.from_batches([[(0, 3)]], ["edge"], g.m))


@settings(max_examples=60, deadline=None)
@given(graph_and_plan(), st.sampled_from([0.01, 0.3, 0.7]))
def test_replay_matches_naive_execution(gp, threshold):
    g, plan = gp
    if g.m == 0:
        return
    curve = execute_plan(g, plan, threshold)
    assert curve.points == pytest.approx(naive_curve(g, plan, threshold))
    assert np.all(np.diff(curve.f) <= 0)
    assert np.all(np.diff(curve.x) > 0)
    assert 0 <= cfe(curve) <= 1


def test_cfe_examples():
    assert cfe(GccCurve.from_points([(0, 1)])) == 1.0
    assert cfe(GccCurve.from_points([(0, 1), (0.5, 0.2)])) == pytest.approx(0.6)


@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=1, max_size=10), st.floats(0, 1))
def test_cfe_monotone_under_domination(raw, shrink):
    xs = np.unique(np.concatenate([[0.0], [x for x, _ in raw]]))
    f = np.sort(np.random.default_rng(len(raw)).random(len(xs)))[::-1]
    upper = GccCurve(xs, f)
    lower = GccCurve(xs, f * shrink)
    assert cfe(lower) <= cfe(upper) + 1e-12
    assert 0 <= cfe(upper) <= 1


def test_improvement_table_values():
    assert round(100 * improvement(0.638, 0.278)) == 56
    assert round(100 * improvement(0.371, 0.260)) == 30
    assert improvement(0.4, 0.4) == 0
    assert absolute_gap(0.638, 0.278) == pytest.approx(0.36)
    with pytest.raises(ZeroBaseline):
        improvement(0.0, 0.1)


def test_average_identical_and_single():
    c = GccCurve.from_points([(0, 1), (0.3, 0.5), (0.6, 0.1)])
    avg = average_curves([c, c])
    assert avg.points == c.points and np.allclose(avg.std, 0)
    assert average_curves([c]).points == c.points


def test_average_two_curves():
    a = GccCurve.from_points([(0, 1)])
    b = GccCurve.from_points([(0, 1), (0.5, 0)])
    avg = average_curves([a, b])
    assert avg.points == [(0.0, 1.0), (0.5, 0.5)]
    assert avg.std.tolist() == [0.0, 0.5]


def test_average_needs_curves():
    with pytest.raises(InvalidParam):
        average_curves([])


def test_average_cfe_is_mean_cfe():
    # integration is linear, so the mean curve integrates to the mean area
    g = random_graph(40, 0.15, 3)
    curves = [execute_plan(g, site_percolation_plan(g, s)) for s in range(10)]
    assert cfe(average_curves(curves)) == pytest.approx(np.mean([cfe(c) for c in curves]))


def test_bond_percolation_collapse_on_er():
    g = extract_gcc(gen_er(2500, 10, 0))
    mean = average_curves([execute_plan(g, bond_percolation_plan(g, s)) for s in range(100)])
    crossing = mean.x[np.argmax(mean.f < 0.5)]
    assert 0.8 <= crossing <= 0.98


def test_curve_csv_roundtrip():
    a = GccCurve.from_points([(0, 1), (0.25, 0.6)])
    b = GccCurve.from_points([(0, 1), (0.5, 0.2)])
    avg = average_curves([a, b])
    text = avg.to_csv()
    assert text.splitlines()[0] == "x,f_mean,f_std"
    back = GccCurve.from_csv(text)
    assert back.points == avg.points and np.array_equal(back.std, avg.std)


def test_empty_graph_curve():
    assert execute_plan(Graph.empty(0), RemovalPlan.empty(0)).points == [(0.0, 0.0)]
