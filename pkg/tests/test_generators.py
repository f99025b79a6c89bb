import numpy as np
import pytest
from scipy.stats import chi2_contingency

from dismantle.errors import InvalidParam
from dismantle.generators import (
    GenSpec,
    block_labels,
    build,
    equal_blocks,
    gen_er,
    gen_sbm,
    gen_sf,
    sbm_probabilities,
    sf_degree_distribution,
    table_network,
)
from dismantle.graph import connected_components
from dismantle.io import extract_gcc


def mean_degree(g):
    return 2 * g.m / g.n


@pytest.mark.parametrize("seed", range(3))
def test_er_table_mean_degree(seed):
    g = extract_gcc(gen_er(2500, 10, seed))
    assert mean_degree(g) == pytest.approx(10.0, abs=0.3)


def test_er_p_one_is_complete():
    g = gen_er(10, 9, 0)
    assert g.m == 45


@pytest.mark.parametrize("d", [0.0, -1.0, 100.0])
def test_er_rejects_bad_degree(d):
    with pytest.raises(InvalidParam):
        gen_er(100, d, 0)


def test_er_edge_count_is_binomial():
    # 30 draws of G(200, p): mean edge count within 4 standard errors of p*C(n,2)
    n, d = 200, 6.0
    p = d / (n - 1)
    pairs = n * (n - 1) / 2
    counts = np.array([gen_er(n, d, s).m for s in range(30)])
    se = np.sqrt(pairs * p * (1 - p) / len(counts))
    assert abs(counts.mean() - pairs * p) < 4 * se


@pytest.mark.parametrize("gamma,mean,tol", [(2.5, 4.68, 0.5), (3.5, 2.35, 0.4)])
def test_sf_table_gcc_mean(gamma, mean, tol):
    g = extract_gcc(gen_sf(10000, gamma, mean, 0))
    assert mean_degree(g) == pytest.approx(mean, abs=tol)


def test_sf_gamma_35_gcc_smaller_than_n():
    g = extract_gcc(gen_sf(10000, 3.5, 2.35, 0))
    assert g.n < 10000


@pytest.mark.parametrize("gamma,mean", [(2.5, 4.68), (3.5, 2.35)])
def test_sf_histogram_slope(gamma, mean):
    n = 10000
    ks, _ = sf_degree_distribution(gamma, mean, int(np.sqrt(n)))
    g = gen_sf(n, gamma, mean, 1)
    counts = np.bincount(g.degree, minlength=ks[-1] + 1)
    # the lowest degree carries the tuned mass, the power law starts one above it
    k = np.arange(ks[0] + 1, ks[-1] // 4 + 1)
    ok = counts[k] > 0
    slope = np.polyfit(np.log(k[ok]), np.log(counts[k][ok]), 1)[0]
    assert slope == pytest.approx(-gamma, abs=0.4)


def test_sf_distribution_hits_mean():
    for gamma, mean in [(2.5, 4.68), (3.5, 2.35), (2.2, 8.0)]:
        ks, pk = sf_degree_distribution(gamma, mean, 100)
        assert pk.sum() == pytest.approx(1.0)
        assert (ks * pk).sum() == pytest.approx(mean)
        # above the tuned minimum the ratios follow k^-gamma exactly
        r = pk[2:] / pk[1:-1]
        assert np.allclose(r, (ks[2:] / ks[1:-1]) ** -gamma)


def test_sf_rejects_gamma():
    with pytest.raises(InvalidParam):
        gen_sf(100, 2.0, 3.0, 0)


def test_sf_simple_graph():
    g = gen_sf(2000, 2.5, 4.0, 3)
    e = g.edges()
    assert (e[:, 0] < e[:, 1]).all()
    assert len(np.unique(e[:, 0] * g.n + e[:, 1])) == len(e)


def test_sbm_table_mean_degree():
    g = build(table_network("sbm", 0))
    assert g.n == 4232
    assert mean_degree(g) == pytest.approx(2.60, abs=0.3)
    assert mean_degree(extract_gcc(g)) == pytest.approx(2.60, abs=0.3)


def test_sbm_p_out_zero_respects_blocks():
    sizes = [30, 40, 50]
    g = gen_sbm(sizes, 0.2, 0.0, 0)
    lab = block_labels(sizes)
    for comp in connected_components(g).components:
        assert len(set(lab[comp].tolist())) == 1


def test_sbm_two_block_toy_edge_count():
    sizes = equal_blocks(2078, 2)
    p_in, p_out = sbm_probabilities(sizes, 2 * 3729 / 2078)
    for seed in range(3):
        assert gen_sbm(sizes, p_in, p_out, seed).m == pytest.approx(3729, rel=0.05)


def test_sbm_probabilities_ratio_and_mean():
    sizes = equal_blocks(4232, 10)
    p_in, p_out = sbm_probabilities(sizes, 2.6, ratio=30)
    assert p_in / p_out == pytest.approx(30)
    s = np.array(sizes)
    within = (s * (s - 1) / 2).sum()
    across = 4232 * 4231 / 2 - within
    assert 2 * (within * p_in + across * p_out) / 4232 == pytest.approx(2.6)


def test_sbm_equal_probabilities_look_like_er():
    # pooled degree histograms over 20 seeds, two-sample chi-square at alpha 0.01
    n, p = 600, 8 / 599
    sizes = equal_blocks(n, 4)
    sbm = np.concatenate([gen_sbm(sizes, p, p, 100 + s).degree for s in range(20)])
    er = np.concatenate([gen_er(n, 8, 200 + s).degree for s in range(20)])
    edges = [0, 4, 6, 7, 8, 9, 10, 12, 100]
    table = np.vstack([np.histogram(sbm, edges)[0], np.histogram(er, edges)[0]])
    assert chi2_contingency(table)[1] > 0.01


@pytest.mark.parametrize("name", ["er", "sf2.5", "sf3.5", "sbm"])
def test_same_seed_same_graph(name):
    a, b = build(table_network(name, 5)), build(table_network(name, 5))
    assert np.array_equal(a.edges(), b.edges())
    c = build(table_network(name, 6))
    assert not np.array_equal(a.edges(), c.edges())


def test_genspec_roundtrip_and_validation():
    spec = GenSpec("sbm", 100, {"sizes": [50, 50], "p_in": 0.1, "p_out": 0.01}, 3)
    assert GenSpec.from_dict(spec.to_dict()) == spec
    with pytest.raises(InvalidParam):
        GenSpec("SBM", 100, {"sizes": [50, 40]})
    with pytest.raises(InvalidParam):
        GenSpec("SBM", 100, {"sizes": [50, 50], "p_in": 1.5, "p_out": 0})
    with pytest.raises(InvalidParam):
        GenSpec("SF", 100, {"gamma": 1.9, "mean_degree": 3})
    with pytest.raises(InvalidParam):
        GenSpec("ER", 1, {"mean_degree": 1})
