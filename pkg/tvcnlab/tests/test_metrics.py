"""
Tests the structural metrics against closed forms and brute-force oracles.
"""

import math

import networkx as nx
import numpy as np
import pytest

from ..data import get_network
from ..exceptions import DegenerateVariance, EmptyGraph, NoConvergence, TooSmall, UndefinedThreshold
from ..graph import Graph, ring_graph
from ..metrics import (
    apl_diameter,
    assortativity,
    betweenness,
    clustering,
    compute_metrics,
    eigenvector_centrality,
    metrics_frame,
    rich_club,
    rich_club_profile,
)
from ..models.result_models import METRICS_COLUMNS
from .test_helper import (
    brute_assortativity,
    brute_betweenness,
    brute_clustering,
    brute_distances,
    brute_phi,
    complete_graph,
    path_graph,
    random_connected_graph,
    star,
)


def test_betweenness_closed_forms():
    raw, norm = betweenness(star(3))
    assert raw.tolist() == pytest.approx([3, 0, 0, 0])
    assert norm.tolist() == pytest.approx([1, 0, 0, 0])

    raw, norm = betweenness(path_graph(3))
    assert raw.tolist() == pytest.approx([0, 1, 0])
    assert norm.tolist() == pytest.approx([0, 1, 0])

    raw, _ = betweenness(complete_graph(5))
    assert raw.tolist() == pytest.approx([0] * 5)

    with pytest.raises(TooSmall):
        betweenness(path_graph(2))


def test_betweenness_networkx():
    g = get_network("petersen")
    _, norm = betweenness(g)
    bench = nx.betweenness_centrality(g.to_networkx(), normalized=True)
    assert norm.tolist() == pytest.approx([bench[n] for n in g.nodes])


def test_betweenness_disconnected():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    raw, _ = betweenness(g)
    assert raw.tolist() == pytest.approx([0, 1, 0, 0, 1, 0])


def test_eigenvector_centrality():
    assert eigenvector_centrality(complete_graph(3)).tolist() == pytest.approx([1 / 3] * 3)

    # bipartite, the center is sqrt(3) times a leaf
    x = eigenvector_centrality(star(3))
    assert x[0] == pytest.approx(math.sqrt(3) / (math.sqrt(3) + 3), abs=1e-8)
    assert x[1:].tolist() == pytest.approx([1 / (math.sqrt(3) + 3)] * 3, abs=1e-8)
    assert x.sum() == pytest.approx(1.0)

    assert eigenvector_centrality(Graph([0])).tolist() == [1.0]
    with pytest.raises(EmptyGraph):
        eigenvector_centrality(Graph(range(3)))


@pytest.mark.parametrize("g", [ring_graph(6), ring_graph(7), complete_graph(6), get_network("petersen")])
def test_eigenvector_centrality_transitive(g):
    n = g.number_of_nodes()
    assert eigenvector_centrality(g).tolist() == pytest.approx([1 / n] * n, abs=1e-8)


def test_eigenvector_centrality_networkx():
    g = random_connected_graph(12, extra_p=0.2, seed=4)
    bench = nx.eigenvector_centrality(g.to_networkx(), max_iter=10000, tol=1e-12)
    total = sum(bench.values())
    x = eigenvector_centrality(g)
    assert x.tolist() == pytest.approx([bench[n] / total for n in g.nodes], abs=1e-6)


def test_eigenvector_no_convergence():
    g = random_connected_graph(12, extra_p=0.2, seed=4)
    with pytest.raises(NoConvergence) as exc:
        eigenvector_centrality(g, tol=1e-300, max_iter=5)
    assert exc.value.iterate.sum() == pytest.approx(1.0)


def test_clustering_and_paths():
    g = complete_graph(3)
    assert clustering(g) == pytest.approx(1.0)
    assert apl_diameter(g) == (pytest.approx(1.0), 1)

    g = star(3)
    assert clustering(g) == pytest.approx(0.0)
    assert apl_diameter(g) == (pytest.approx(1.5), 2)

    assert apl_diameter(path_graph(4)) == (pytest.approx(5 / 3), 3)
    assert apl_diameter(Graph(range(3))) == (0.0, 0)


def test_petersen():
    g = get_network("petersen")
    assert g.number_of_edges() == 15
    assert clustering(g) == 0.0
    assert apl_diameter(g) == (pytest.approx(5 / 3), 2)
    with pytest.raises(DegenerateVariance):
        assortativity(g)


def _adjacency(g):
    n = g.number_of_nodes()
    adj = np.zeros((n, n))
    edges = g.edge_index_array()
    adj[edges[:, 0], edges[:, 1]] = adj[edges[:, 1], edges[:, 0]] = 1.0
    return adj


@pytest.mark.parametrize("seed", range(100))
def test_metrics_brute_force(seed):
    n = 3 + seed % 8
    g = random_connected_graph(n, extra_p=0.1 + 0.1 * (seed % 4), seed=seed)
    dist = brute_distances(g)
    upper = dist[np.triu_indices(n, 1)]
    bench = brute_betweenness(g)

    raw, norm = betweenness(g)
    assert raw.tolist() == pytest.approx(bench.tolist(), abs=1e-9)
    assert norm.tolist() == pytest.approx((bench * 2 / ((n - 1) * (n - 2))).tolist(), abs=1e-9)
    # a pair at distance l spreads l - 1 over the inner nodes of its paths
    assert raw.sum() == pytest.approx((upper - 1).sum(), abs=1e-9)

    apl, diameter = apl_diameter(g)
    assert apl == pytest.approx(upper.mean(), abs=1e-9)
    assert diameter == int(upper.max())
    assert clustering(g) == pytest.approx(brute_clustering(g), abs=1e-9)

    x = eigenvector_centrality(g, tol=1e-10)
    ax = _adjacency(g) @ x
    assert np.abs(ax - ax.sum() * x).max() < 1e-9
    assert x.sum() == pytest.approx(1.0)

    k = g.degree_array()
    ends = k[g.edge_index_array()].ravel()
    if ends.min() == ends.max():
        with pytest.raises(DegenerateVariance):
            assortativity(g)
    else:
        assert assortativity(g) == pytest.approx(brute_assortativity(g), abs=1e-9)


@pytest.mark.parametrize("seed", range(10))
def test_betweenness_tree_identity(seed):
    n = 4 + seed
    g = random_connected_graph(n, extra_p=0.0, seed=seed)
    assert g.number_of_edges() == n - 1

    raw, _ = betweenness(g)
    upper = brute_distances(g)[np.triu_indices(n, 1)]
    assert raw.sum() == pytest.approx((upper - 1).sum(), abs=1e-9)
    assert raw.tolist() == pytest.approx(brute_betweenness(g).tolist(), abs=1e-9)


def test_rich_club_profile():
    assert rich_club_profile(complete_graph(5)) == pytest.approx({0: 1.0, 1: 1.0, 2: 1.0, 3: 1.0})

    g = random_connected_graph(10, extra_p=0.3, seed=1)
    profile = rich_club_profile(g)
    assert len(profile) > 0
    for k, phi in profile.items():
        assert phi == pytest.approx(brute_phi(g, k))


def test_rich_club_undefined():
    with pytest.raises(UndefinedThreshold):
        rich_club(star(3))

    with pytest.raises(UndefinedThreshold):
        rich_club(complete_graph(5))


def test_rich_club():
    g = random_connected_graph(30, extra_p=0.2, seed=2)
    report = rich_club(g, n_random=3, rng=5)

    k_star = math.ceil(g.degree_array().mean())
    assert report.k_star == k_star
    assert report.phi == pytest.approx(brute_phi(g, k_star))
    assert report.phi_random > 0
    assert report.rc == pytest.approx(report.phi / report.phi_random)

    again = rich_club(g, n_random=3, rng=5)
    assert again.phi_random == report.phi_random


def test_assortativity():
    assert assortativity(star(3)) == pytest.approx(-1.0)

    with pytest.raises(DegenerateVariance):
        assortativity(complete_graph(4))
    with pytest.raises(EmptyGraph):
        assortativity(Graph(range(3)))


def test_compute_metrics():
    g = random_connected_graph(20, extra_p=0.15, seed=3)
    report = compute_metrics(g, t=4, rng=0, n_random=2)

    assert report.t == 4
    assert (report.N, report.E) == (20, g.number_of_edges())
    assert sum(report.evc) == pytest.approx(1.0)
    assert report.g_max_norm == pytest.approx(max(betweenness(g)[1]))
    assert report.apl == pytest.approx(apl_diameter(g)[0])
    assert report.assortativity == pytest.approx(assortativity(g))


def test_compute_metrics_undefined():
    report = compute_metrics(complete_graph(4), n_random=1)
    assert report.assortativity is None
    assert report.rc is None
    assert report.rich_club.profile == pytest.approx({0: 1.0, 1: 1.0, 2: 1.0})

    report = compute_metrics(Graph.from_edges(2, [(0, 1)]))
    assert report.bc_raw == [0.0, 0.0]
    assert report.diameter == 1


def test_metrics_frame():
    reports = [compute_metrics(ring_graph(n), t=n, n_random=1) for n in (5, 6)]
    frame = metrics_frame(reports)
    assert frame.columns.tolist() == METRICS_COLUMNS
    assert frame["t"].tolist() == [5, 6]
    assert frame["clc"].tolist() == [0.0, 0.0]
