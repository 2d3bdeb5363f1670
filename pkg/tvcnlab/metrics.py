"""
Exact structural metrics of a network snapshot.
"""

import math
import warnings
from collections import deque
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
import pandas as pd

from .exceptions import DegenerateVariance, EmptyGraph, NoConvergence, TooSmall, UndefinedThreshold
from .graph import Graph
from .models import MetricsReport, RichClubReport
from .models.result_models import METRICS_COLUMNS
from .util import RandomState, as_generator

__all__ = [
    "betweenness",
    "eigenvector_centrality",
    "clustering",
    "apl_diameter",
    "rich_club_profile",
    "rich_club",
    "assortativity",
    "compute_metrics",
    "metrics_frame",
]


def _position_adjacency(g: Graph) -> List[List[int]]:
    index = {n: i for i, n in enumerate(g.nodes)}
    return [sorted(index[w] for w in g.neighbors(v)) for v in g.nodes]


def _bfs_distances(adj: List[List[int]], source: int) -> List[int]:
    dist = [-1] * len(adj)
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


### Betweenness


def betweenness(g: Graph) -> Tuple[np.ndarray, np.ndarray]:
    """
    Shortest-path betweenness by dependency accumulation over one BFS per source.

    Path counts are exact integers. Disconnected graphs are handled per component
    since unreachable pairs contribute nothing.

    Returns
    -------
    bc_raw : np.ndarray
        Sum over unordered pairs (s, d), s != v != d, of sigma_sd(v) / sigma_sd
    bc_norm : np.ndarray
        ``bc_raw`` divided by (N-1)(N-2)/2
    """
    n = g.number_of_nodes()
    if n < 3:
        raise TooSmall(f"Normalized betweenness needs at least 3 nodes, got {n}.")

    adj = _position_adjacency(g)
    bc = [0.0] * n
    for s in range(n):
        stack = []
        preds: List[List[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        dist = [-1] * n
        sigma[s] = 1
        dist[s] = 0

        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)

        delta = [0.0] * n
        while stack:
            w = stack.pop()
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]

    # every unordered pair was visited from both ends
    bc_raw = np.array(bc) / 2.0
    bc_norm = bc_raw * 2.0 / ((n - 1) * (n - 2))
    return bc_raw, bc_norm


### Eigenvector centrality


def eigenvector_centrality(g: Graph, tol: float = 1.0e-10, max_iter: int = 10 ** 4) -> np.ndarray:
    """
    Dominant adjacency eigenvector by power iteration, normalized to unit sum.

    Iteration starts from the uniform vector and stops once the residual
    max |Ax - kappa x|, with kappa = sum(Ax), drops below ``tol``. When the residual
    stops shrinking (bipartite graphs oscillate with period two) the update
    switches to the damped mean of the old and new iterates.

    Parameters
    ----------
    g : Graph
        A connected graph
    tol : float, optional
        Convergence threshold on the max-abs eigen residual
    max_iter : int, optional
        Iteration limit

    Returns
    -------
    np.ndarray
        Centrality of every node in node order
    """
    n = g.number_of_nodes()
    if n == 0:
        raise EmptyGraph("The graph has no nodes.")
    if n == 1:
        return np.ones(1)

    edges = g.edge_index_array()
    if len(edges) == 0:
        raise EmptyGraph("The graph has no edges.")
    a, b = edges[:, 0], edges[:, 1]

    x = np.full(n, 1.0 / n)
    damped = False
    prev_resid = np.inf
    for _ in range(max_iter):
        ax = np.bincount(a, weights=x[b], minlength=n) + np.bincount(b, weights=x[a], minlength=n)
        kappa = ax.sum()
        resid = np.abs(ax - kappa * x).max()
        if resid < tol:
            return x

        if not damped and resid > 0.99 * prev_resid:
            damped = True
        prev_resid = resid

        y = ax / kappa
        x = 0.5 * (x + y) if damped else y

    raise NoConvergence(f"Eigenvector centrality did not converge in {max_iter} iterations.", iterate=x)


### Clustering and path lengths


def clustering(g: Graph) -> float:
    """Mean local clustering coefficient; nodes with fewer than two links count as 0."""
    if g.number_of_nodes() == 0:
        return 0.0
    return float(nx.average_clustering(g.to_networkx()))


def apl_diameter(g: Graph) -> Tuple[float, int]:
    """
    Average shortest path length over connected unordered pairs, and the largest
    finite distance. A graph without connected pairs reports (0.0, 0).
    """
    adj = _position_adjacency(g)
    n = len(adj)
    total = 0
    pairs = 0
    diameter = 0
    for s in range(n):
        dist = _bfs_distances(adj, s)
        for d in range(s + 1, n):
            if dist[d] > 0:
                total += dist[d]
                pairs += 1
                if dist[d] > diameter:
                    diameter = dist[d]

    if pairs == 0:
        return 0.0, 0
    return total / pairs, diameter


### Rich club


def _phi_at(degrees: np.ndarray, edges: np.ndarray, k: int) -> Optional[float]:
    rich = int((degrees > k).sum())
    if rich < 2:
        return None
    if len(edges) == 0:
        return 0.0
    low = np.minimum(degrees[edges[:, 0]], degrees[edges[:, 1]])
    links = int((low > k).sum())
    return 2.0 * links / (rich * (rich - 1))


def rich_club_profile(g: Graph) -> Dict[int, float]:
    """phi(k) = 2 E_{>k} / (N_{>k} (N_{>k} - 1)) for every k with N_{>k} >= 2."""
    degrees = g.degree_array()
    edges = g.edge_index_array()
    ret = {}
    for k in range(int(degrees.max()) if len(degrees) else 0):
        phi = _phi_at(degrees, edges, k)
        if phi is not None:
            ret[k] = phi
    return ret


def _randomized_phi(g: Graph, k: int, swap_factor: int, rng: np.random.Generator) -> float:
    h = g.to_networkx()
    nswap = swap_factor * h.number_of_edges()
    try:
        nx.double_edge_swap(h, nswap=nswap, max_tries=nswap * 10, seed=int(rng.integers(2 ** 31)))
    except nx.NetworkXAlgorithmError:
        warnings.warn("Edge swapping stopped before reaching the requested swap count.", RuntimeWarning)
    except nx.NetworkXError:
        warnings.warn("Graph is too small for edge swapping; the null model equals the graph.", RuntimeWarning)

    index = {n: i for i, n in enumerate(g.nodes)}
    degrees = g.degree_array()
    edges = np.array([(index[a], index[b]) for a, b in h.edges()], dtype=np.int64).reshape(-1, 2)
    return _phi_at(degrees, edges, k)


def rich_club(
    g: Graph,
    k_threshold: Optional[int] = None,
    n_random: int = 10,
    swap_factor: int = 10,
    rng: RandomState = None,
) -> RichClubReport:
    """
    Rich-club profile and its scalar summary phi(k*) / phi_rand(k*).

    ``phi_rand`` is the mean over ``n_random`` degree-preserving double-edge-swap
    randomizations, each performing ``swap_factor * E`` swaps.

    Parameters
    ----------
    g : Graph
        The network
    k_threshold : int, optional
        Threshold k*; defaults to the mean degree rounded up
    n_random : int, optional
        Number of null-model graphs
    swap_factor : int, optional
        Swaps per edge in each null-model graph
    rng : Union[None, int, np.random.Generator]
        Seed or generator driving the swaps
    """
    degrees = g.degree_array()
    if len(degrees) == 0:
        raise EmptyGraph("The graph has no nodes.")

    profile = rich_club_profile(g)
    k_star = int(math.ceil(degrees.mean())) if k_threshold is None else int(k_threshold)
    phi = _phi_at(degrees, g.edge_index_array(), k_star)
    if phi is None:
        raise UndefinedThreshold(f"Fewer than two nodes have degree above k* = {k_star}.")

    rng = as_generator(rng)
    phi_random = float(np.mean([_randomized_phi(g, k_star, swap_factor, rng) for _ in range(n_random)]))

    rc = None
    if phi_random > 0:
        rc = phi / phi_random
    else:
        warnings.warn(f"Randomized rich club is empty at k* = {k_star}; the ratio is undefined.", RuntimeWarning)

    return RichClubReport(profile=profile, k_star=k_star, phi=phi, phi_random=phi_random, rc=rc)


### Degree correlation


def assortativity(g: Graph) -> float:
    """Pearson correlation of the degrees at either end of every edge, both orientations."""
    if g.number_of_edges() == 0:
        raise EmptyGraph("The graph has no edges.")

    with np.errstate(divide="ignore", invalid="ignore"), warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        r = nx.degree_assortativity_coefficient(g.to_networkx())
    if not np.isfinite(r):
        raise DegenerateVariance("All edge endpoints have the same degree; assortativity is undefined.")
    return float(r)


### Reports


def compute_metrics(g: Graph, t: int = 0, rng: RandomState = None, n_random: int = 10) -> MetricsReport:
    """
    Every metric of one snapshot. Quantities that are undefined for the graph are
    reported as None rather than raised.
    """
    n = g.number_of_nodes()
    if n >= 3:
        bc_raw, bc_norm = betweenness(g)
    else:
        bc_raw = bc_norm = np.zeros(n)

    try:
        evc = eigenvector_centrality(g)
    except NoConvergence as exc:
        warnings.warn(str(exc), RuntimeWarning)
        evc = exc.iterate
    except EmptyGraph:
        evc = np.full(n, 1.0 / n) if n else np.zeros(0)

    apl, diameter = apl_diameter(g)

    try:
        rich = rich_club(g, n_random=n_random, rng=rng)
    except UndefinedThreshold:
        degrees = g.degree_array()
        k_star = int(math.ceil(degrees.mean())) if n else 0
        rich = RichClubReport(profile=rich_club_profile(g), k_star=k_star)
    except EmptyGraph:
        rich = None

    try:
        r = assortativity(g)
    except (DegenerateVariance, EmptyGraph):
        r = None

    return MetricsReport(
        t=t,
        N=n,
        E=g.number_of_edges(),
        bc_raw=bc_raw,
        bc_norm=bc_norm,
        evc=evc,
        clc=clustering(g),
        apl=apl,
        diameter=diameter,
        rich_club=rich,
        assortativity=r,
    )


def metrics_frame(reports: Sequence[MetricsReport]) -> pd.DataFrame:
    """One row per snapshot: ``t,N,E,g_max_norm,apl,diameter,rc,clc,assortativity``."""
    return pd.DataFrame([r.to_row() for r in reports], columns=METRICS_COLUMNS)
