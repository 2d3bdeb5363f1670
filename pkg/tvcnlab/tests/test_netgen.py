"""
Tests the attachment distributions and the growth models.
"""

import math
import warnings

import numpy as np
import pytest

from ..exceptions import BudgetInfeasible, DegenerateDistribution, EmptyGraph, IsolatedNode, UnknownNode
from ..graph import Graph, ring_graph
from ..models import GrowthConfig
from ..netgen import (
    AttachmentDistribution,
    anti_preferential,
    dtvcn_attach,
    dtvcn_remove_select,
    generate,
    grow,
    grow_step,
    pair_degree_correlation,
    preferential,
    register_correlation,
    zeta,
    zeta_all,
)
from .test_helper import complete_graph, path_graph, star


def _probs(dist):
    return [dist[n] for n in dist.nodes]


def test_preferential():
    assert _probs(preferential(star(3))) == pytest.approx([0.5, 1 / 6, 1 / 6, 1 / 6])
    assert _probs(preferential(complete_graph(3))) == pytest.approx([1 / 3] * 3)
    assert _probs(preferential(path_graph(3))) == pytest.approx([0.25, 0.5, 0.25])

    with pytest.raises(EmptyGraph):
        preferential(Graph(range(3)))


def test_anti_preferential():
    assert _probs(anti_preferential(star(3))) == pytest.approx([1 / 6, 5 / 18, 5 / 18, 5 / 18])
    assert _probs(anti_preferential(complete_graph(3))) == pytest.approx([1 / 3] * 3)


@pytest.mark.parametrize("seed", range(4))
def test_anti_preferential_sums_to_one(seed):
    g = grow(GrowthConfig(model="ba", n0=4, T=30, m_ba=2, rng_seed=seed))
    assert anti_preferential(g).probs.sum() == pytest.approx(1.0)


def test_attachment_distribution():
    dist = AttachmentDistribution.from_weights([3, 5, 9], [1.0, 1.0, 2.0])
    assert dist.as_dict() == pytest.approx({3: 0.25, 5: 0.25, 9: 0.5})
    assert dist[9] == pytest.approx(0.5)

    with pytest.raises(UnknownNode):
        dist[4]

    with pytest.raises(ValueError, match="not 1"):
        AttachmentDistribution([0, 1], [0.5, 0.6])

    with pytest.raises(DegenerateDistribution, match="weights are zero"):
        AttachmentDistribution.from_weights([0, 1], [0.0, 0.0])


def test_attachment_sample():
    rng = np.random.default_rng(0)
    dist = AttachmentDistribution([0, 1, 2, 3], [0.0, 0.5, 0.5, 0.0])

    for _ in range(20):
        drawn = dist.sample(rng, 2)
        assert sorted(drawn) == [1, 2]

    # zero-mass nodes are reached uniformly once the mass is used up
    drawn = dist.sample(rng, 3, exclude=[2])
    assert sorted(drawn) == [0, 1, 3]

    with pytest.raises(DegenerateDistribution):
        dist.sample(rng, 4, exclude=[0])


def test_attachment_sample_frequencies():
    rng = np.random.default_rng(42)
    dist = preferential(star(3))
    draws = [dist.sample(rng)[0] for _ in range(6000)]
    assert draws.count(0) / 6000 == pytest.approx(0.5, abs=0.03)


def test_pair_degree_correlation():
    g = complete_graph(3)
    assert pair_degree_correlation(g, 0, 1) == pytest.approx(2.0)

    g = star(3)
    assert pair_degree_correlation(g, 1, 0) == pytest.approx(2 / 3)
    assert pair_degree_correlation(g, 0, 1, "degree_difference") == pytest.approx(1.0)

    with pytest.raises(ValueError, match="two distinct nodes"):
        pair_degree_correlation(g, 0, 0)
    with pytest.raises(IsolatedNode):
        pair_degree_correlation(g.add_node(4), 0, 4)


def test_pair_degree_correlation_limit():
    g = star(200)
    assert pair_degree_correlation(g, 1, 0) < 0.011


def test_register_correlation():
    register_correlation("Always_Zero", lambda k_v, k_n: np.zeros(len(k_v)))
    assert pair_degree_correlation(star(3), 0, 1, "always_zero") == pytest.approx(1.0)

    with pytest.raises(KeyError, match="not registered"):
        pair_degree_correlation(star(3), 0, 1, "no_such_thing")


def test_zeta():
    # a single neighbour is its own minimum
    assert zeta(star(3), 1) == pytest.approx(1.0)

    # two equal-degree neighbours, scaled values {2, 2}
    assert zeta(ring_graph(4), 0) == pytest.approx(0.5)

    # node 0 (k=2) next to a degree-6 hub and a degree-2 node: scaled values {2/3, 2}
    g = Graph.from_edges(8, [(0, 1), (0, 2), (2, 3)] + [(1, i) for i in range(3, 8)])
    assert zeta(g, 0) == pytest.approx(0.25)

    with pytest.raises(IsolatedNode):
        zeta(Graph.from_edges(3, [(0, 1)]), 2)


def test_zeta_mixed_neighbours():
    # node 0 (k=2) with a leaf neighbour (k=1 -> scaled 1) and an equal neighbour (k=2 -> scaled 2)
    g = Graph.from_edges(4, [(0, 1), (0, 2), (2, 3)])
    assert zeta(g, 0) == pytest.approx(1 / 3)
    assert zeta_all(g)[0] == pytest.approx(1 / 3)


def test_zeta_all_matches_zeta():
    g = grow(GrowthConfig(model="ba", n0=4, T=20, m_ba=2, rng_seed=3))
    z = zeta_all(g)
    assert z.tolist() == pytest.approx([zeta(g, v) for v in g.nodes])

    g.add_node(99)
    assert math.isnan(zeta_all(g)[-1])


def test_dtvcn_distributions_star():
    g = star(3)
    # center: k share 1/2, zeta 1/3 -> 1/6; leaves: 1/6 and zeta 1 -> 1/6
    assert _probs(dtvcn_attach(g)) == pytest.approx([0.25] * 4)

    # leaves have zeta 1 and are never picked for removal
    assert _probs(dtvcn_remove_select(g)) == pytest.approx([1.0, 0.0, 0.0, 0.0])


def test_dtvcn_distributions_symmetric():
    g = complete_graph(3)
    assert _probs(dtvcn_attach(g)) == pytest.approx([1 / 3] * 3)
    assert _probs(dtvcn_remove_select(g)) == pytest.approx([1 / 3] * 3)


def test_dtvcn_remove_brute_force():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])
    k = g.degree_array().astype(float)
    weights = [(1 - k[v] / k.sum()) * (1 - zeta(g, v)) for v in g.nodes]
    expected = np.array(weights) / sum(weights)
    assert _probs(dtvcn_remove_select(g)) == pytest.approx(expected)
    assert dtvcn_remove_select(g)[4] == pytest.approx(0.0)


def test_dtvcn_attach_invert():
    g = Graph.from_edges(4, [(0, 1), (0, 2), (2, 3)])
    k = g.degree_array().astype(float)
    weights = [k[v] / k.sum() * (1 - zeta(g, v)) for v in g.nodes]
    expected = np.array(weights) / sum(weights)
    assert _probs(dtvcn_attach(g, invert_zeta=True)) == pytest.approx(expected)


def test_grow_step_ba():
    cfg = GrowthConfig(model="ba", n0=3, T=1, m_ba=2)
    g = ring_graph(3)
    grow_step(g, cfg, 1, np.random.default_rng(0))
    assert g.number_of_nodes() == 4
    assert g.number_of_edges() == 5
    assert g.degree(3) == 2


@pytest.mark.parametrize("model", ["tvcn", "dtvcn"])
def test_grow_step_budget(model):
    cfg = GrowthConfig(model=model, n0=5, T=1, M=2, vartheta=0.5, gamma=1.0)
    assert (cfg.n_add, cfg.n_rewire, cfg.n_remove) == (1, 1, 0)

    g = ring_graph(5).add_edge(0, 2)
    stats = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        grow_step(g, cfg, 1, np.random.default_rng(1), stats)
    assert g.number_of_nodes() == 6
    assert g.number_of_edges() == 7
    assert stats.get("rewired", 0) + stats.get("rewire_skipped", 0) == 1


def test_grow_step_infeasible():
    cfg = GrowthConfig(model="ba", n0=3, T=1, m_ba=2)
    with pytest.raises(BudgetInfeasible):
        grow_step(Graph.from_edges(2, [(0, 1)]), cfg, 1, np.random.default_rng(0))


@pytest.mark.parametrize("model", ["ba", "tvcn", "dtvcn"])
def test_generate(model):
    cfg = GrowthConfig(model=model, n0=5, T=60, rng_seed=11)
    seq = generate(cfg)
    assert seq.tau == 61
    assert seq.node_count(0) == 5
    assert seq.final.number_of_nodes() == 65
    assert [seq.node_count(t) for t in range(seq.tau)] == list(range(5, 66))

    final = seq.final
    final.validate()
    assert all(k >= 1 for k in final.degree_array())
    assert final == grow(cfg)


def test_generate_ba_final_size():
    g = grow(GrowthConfig(model="ba", n0=5, T=195, m_ba=2, rng_seed=0))
    assert g.number_of_nodes() == 200
    assert g.number_of_edges() == 5 + 2 * 195


@pytest.mark.parametrize("model", ["ba", "tvcn", "dtvcn"])
def test_generate_deterministic(model):
    cfg = GrowthConfig(model=model, n0=5, T=40, rng_seed=5)
    assert grow(cfg).edges() == grow(cfg).edges()

    other = grow(cfg.copy(update={"rng_seed": 6}))
    assert other.number_of_nodes() == 45


def test_generate_stats():
    cfg = GrowthConfig(model="tvcn", n0=5, T=50, M=4, vartheta=0.5, gamma=0.75, rng_seed=2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        seq = generate(cfg)
    rewires = seq.stats.get("rewired", 0) + seq.stats.get("rewire_skipped", 0)
    removals = seq.stats.get("removed", 0) + seq.stats.get("removal_skipped", 0)
    assert rewires == cfg.T * cfg.n_rewire
    assert removals == cfg.T * cfg.n_remove


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("model", ["ba", "tvcn", "dtvcn"])
def test_generate_stays_connected(model, seed):
    seq = generate(GrowthConfig(model=model, n0=5, T=60, rng_seed=seed))
    assert all(g.is_connected() for g in seq)


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("model", ["tvcn", "dtvcn"])
def test_generate_with_removals_stays_connected(model, seed):
    cfg = GrowthConfig(model=model, n0=5, T=80, M=4, vartheta=0.5, gamma=0.75, rng_seed=seed)
    assert (cfg.n_add, cfg.n_rewire, cfg.n_remove) == (2, 1, 1)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        seq = generate(cfg)
    assert all(g.is_connected() for g in seq)
    assert seq.stats.get("removed", 0) > 0


@pytest.mark.parametrize("model", ["tvcn", "dtvcn"])
def test_grow_step_spares_bridges(model):
    # every edge of a path is a bridge
    cfg = GrowthConfig(model=model, n0=5, T=1, M=4, vartheta=0.5, gamma=0.75)
    rng = np.random.default_rng(7)
    g = path_graph(6)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for t in range(1, 30):
            grow_step(g, cfg, t, rng)
            assert g.is_connected()


def test_literal_zeta_caps_hub_weight():
    # min <= mean over the neighbours bounds k_v * zeta_v by 1
    for seed in range(5):
        g = grow(GrowthConfig(model="ba", n0=4, T=40, m_ba=2, rng_seed=seed))
        k = g.degree_array().astype(float)
        assert np.all(k * zeta_all(g) <= 1.0 + 1e-12)


def test_dtvcn_inverted_heavy_tail():
    g = grow(GrowthConfig(model="dtvcn", n0=5, T=995, invert_zeta=True, rng_seed=0))
    k = g.degree_array()
    assert g.number_of_nodes() == 1000
    assert k.max() > 10 * k.mean()
