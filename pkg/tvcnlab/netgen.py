"""
Growth models for time-varying communication networks.

Three models share one step loop: BA preferential attachment, TVCN (preferential
addition plus anti-preferential rewiring and removal) and DTVCN, where the
attachment and removal probabilities are modulated by each node's normalized
disassortativeness with its neighbours.
"""

import warnings
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import (
    BudgetInfeasible,
    DegenerateDistribution,
    EmptyGraph,
    IsolatedNode,
    UnknownNode,
    ZeroDenominator,
)
from .graph import Graph, SnapshotSequence, ring_graph
from .models import CorrelationEnum, GrowthConfig, GrowthModelEnum

__all__ = [
    "AttachmentDistribution",
    "preferential",
    "anti_preferential",
    "pair_degree_correlation",
    "edge_correlations",
    "zeta",
    "zeta_all",
    "dtvcn_attach",
    "dtvcn_remove_select",
    "grow_step",
    "grow",
    "generate",
    "register_correlation",
]

_SUM_TOL = 1e-9

CorrelationFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]


### Pairwise degree correlation hooks


def degree_ratio(k_v: np.ndarray, k_n: np.ndarray) -> np.ndarray:
    """r = 2 min(k_v, k_n) / max(k_v, k_n) - 1: +1 for equal degrees, towards -1 for a large mismatch."""
    k_v = np.asarray(k_v, dtype=float)
    k_n = np.asarray(k_n, dtype=float)
    return 2.0 * np.minimum(k_v, k_n) / np.maximum(k_v, k_n) - 1.0


def degree_difference(k_v: np.ndarray, k_n: np.ndarray) -> np.ndarray:
    """r = 1 - 2 |k_v - k_n| / (k_v + k_n)."""
    k_v = np.asarray(k_v, dtype=float)
    k_n = np.asarray(k_n, dtype=float)
    return 1.0 - 2.0 * np.abs(k_v - k_n) / (k_v + k_n)


_correlation_functions: Dict[str, CorrelationFunction] = {}
_correlation_functions[CorrelationEnum.degree_ratio.value] = degree_ratio
_correlation_functions[CorrelationEnum.degree_difference.value] = degree_difference


def register_correlation(name: str, func: CorrelationFunction) -> None:
    """Registers a vectorised raw correlation r(k_v, k_n) in [-1, 1] under ``name``."""
    _correlation_functions[name.lower()] = func


def _get_correlation(correlation: Union[str, CorrelationEnum, CorrelationFunction]) -> CorrelationFunction:
    if callable(correlation):
        return correlation
    if isinstance(correlation, CorrelationEnum):
        correlation = correlation.value
    try:
        return _correlation_functions[correlation.lower()]
    except KeyError:
        raise KeyError(f"Correlation '{correlation}' is not registered.") from None


### Distributions


class AttachmentDistribution:
    """
    A probability for every node of a graph, in the graph's node order.
    """

    __slots__ = ("nodes", "probs")

    def __init__(self, nodes: Sequence[int], probs: np.ndarray):
        probs = np.asarray(probs, dtype=float)
        if len(nodes) != len(probs):
            raise ValueError(f"Got {len(nodes)} nodes but {len(probs)} probabilities.")
        if np.any(probs < 0) or not np.all(np.isfinite(probs)):
            raise ValueError("Probabilities must be finite and non-negative.")
        if abs(probs.sum() - 1.0) > _SUM_TOL:
            raise ValueError(f"Probabilities sum to {probs.sum():.12g}, not 1.")

        self.nodes = list(nodes)
        self.probs = probs

    @classmethod
    def from_weights(cls, nodes: Sequence[int], weights: np.ndarray) -> "AttachmentDistribution":
        weights = np.asarray(weights, dtype=float)
        total = weights.sum()
        if not total > 0:
            raise DegenerateDistribution("All selection weights are zero.")
        return cls(nodes, weights / total)

    def __len__(self) -> int:
        return len(self.nodes)

    def __getitem__(self, node: int) -> float:
        try:
            return float(self.probs[self.nodes.index(node)])
        except ValueError:
            raise UnknownNode(f"Node {node} is not part of this distribution.") from None

    def __repr__(self) -> str:
        return f"<AttachmentDistribution(N={len(self)})>"

    def as_dict(self) -> Dict[int, float]:
        return {n: float(p) for n, p in zip(self.nodes, self.probs)}

    def sample(self, rng: np.random.Generator, size: int = 1, exclude: Iterable[int] = ()) -> List[int]:
        """
        Draws ``size`` distinct nodes one at a time, renormalizing after each draw.

        Nodes in ``exclude`` are never drawn. Once the remaining probability mass is
        exhausted, further draws are uniform over the nodes still eligible.
        """
        exclude = set(exclude)
        weights = self.probs.copy()
        eligible = np.ones(len(weights), dtype=bool)
        for i, n in enumerate(self.nodes):
            if n in exclude:
                eligible[i] = False
        weights[~eligible] = 0.0

        drawn = []
        for _ in range(size):
            if not eligible.any():
                raise DegenerateDistribution(f"Cannot draw {size} distinct nodes, only {len(drawn)} were eligible.")

            total = weights.sum()
            if total > 0:
                cumulative = np.cumsum(weights)
                idx = int(np.searchsorted(cumulative, rng.random() * total, side="right"))
                idx = min(idx, len(weights) - 1)
                while weights[idx] == 0.0:
                    idx -= 1
            else:
                candidates = np.flatnonzero(eligible)
                idx = int(candidates[rng.integers(len(candidates))])

            drawn.append(self.nodes[idx])
            weights[idx] = 0.0
            eligible[idx] = False

        return drawn


def _degrees(g: Graph) -> np.ndarray:
    k = g.degree_array().astype(float)
    if k.sum() == 0:
        raise EmptyGraph("The graph has no edges.")
    return k


def preferential(g: Graph) -> AttachmentDistribution:
    """Pi_i = k_i / sum_j k_j"""
    k = _degrees(g)
    return AttachmentDistribution(g.nodes, k / k.sum())


def anti_preferential(g: Graph) -> AttachmentDistribution:
    """Pi'_i = (1 - k_i / sum_j k_j) / (|N| - 1)"""
    n = g.number_of_nodes()
    if n < 2:
        raise EmptyGraph("Anti-preferential selection needs at least two nodes.")
    k = _degrees(g)
    return AttachmentDistribution(g.nodes, (1.0 - k / k.sum()) / (n - 1))


def pair_degree_correlation(
    g: Graph, v: int, n: int, correlation: Union[str, CorrelationFunction] = CorrelationEnum.degree_ratio
) -> float:
    """
    Degree correlation of the pair (v, n), moved from [-1, 1] to [0, 2].
    """
    if v == n:
        raise ValueError(f"Correlation needs two distinct nodes, got {v} twice.")

    k_v, k_n = g.degree(v), g.degree(n)
    for node, k in ((v, k_v), (n, k_n)):
        if k < 1:
            raise IsolatedNode(f"Node {node} has no links.")

    raw = float(_get_correlation(correlation)(np.array([k_v]), np.array([k_n]))[0])
    return raw + 1.0


def edge_correlations(
    g: Graph, correlation: Union[str, CorrelationFunction] = CorrelationEnum.degree_ratio
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Scaled correlation of every edge.

    Returns
    -------
    positions : np.ndarray
        ``(E, 2)`` array of endpoint positions in node order
    scaled : np.ndarray
        Correlation of each edge in [0, 2]
    """
    pos = g.edge_index_array()
    k = g.degree_array().astype(float)
    if len(pos) == 0:
        return pos, np.zeros(0)
    scaled = _get_correlation(correlation)(k[pos[:, 0]], k[pos[:, 1]]) + 1.0
    return pos, scaled


def zeta_all(g: Graph, correlation: Union[str, CorrelationFunction] = CorrelationEnum.degree_ratio) -> np.ndarray:
    """
    Normalized disassortativeness of every node: the smallest scaled correlation with a
    neighbour divided by the sum over all neighbours. NaN where undefined (no neighbours
    or an all-zero neighbourhood).
    """
    n = g.number_of_nodes()
    pos, scaled = edge_correlations(g, correlation)

    mins = np.full(n, np.inf)
    sums = np.zeros(n)
    if len(pos):
        for col in (0, 1):
            np.minimum.at(mins, pos[:, col], scaled)
            np.add.at(sums, pos[:, col], scaled)

    ret = np.full(n, np.nan)
    defined = sums > 0
    ret[defined] = mins[defined] / sums[defined]
    return ret


def zeta(g: Graph, v: int, correlation: Union[str, CorrelationFunction] = CorrelationEnum.degree_ratio) -> float:
    nbrs = sorted(g.neighbors(v))
    if not nbrs:
        raise IsolatedNode(f"Node {v} has no links.")

    scaled = [pair_degree_correlation(g, v, n, correlation) for n in nbrs]
    total = sum(scaled)
    if total == 0:
        raise ZeroDenominator(f"Every neighbour of node {v} has zero scaled correlation.")
    return min(scaled) / total


def _zeta_factor(g: Graph, correlation, invert_zeta: bool) -> np.ndarray:
    z = zeta_all(g, correlation)
    if invert_zeta:
        z = 1.0 - z
    return z


def dtvcn_attach(
    g: Graph,
    correlation: Union[str, CorrelationFunction] = CorrelationEnum.degree_ratio,
    invert_zeta: bool = False,
) -> AttachmentDistribution:
    """Pi_v^r proportional to (k_v / sum_u k_u) zeta_v, renormalized."""
    k = _degrees(g)
    z = _zeta_factor(g, correlation, invert_zeta)
    weights = np.nan_to_num((k / k.sum()) * z, nan=0.0)
    return AttachmentDistribution.from_weights(g.nodes, weights)


def dtvcn_remove_select(
    g: Graph,
    correlation: Union[str, CorrelationFunction] = CorrelationEnum.degree_ratio,
    invert_zeta: bool = False,
) -> AttachmentDistribution:
    """Pi_v^r' proportional to (1 - k_v / sum_j k_j)(1 - zeta_v), renormalized. Isolated nodes get 0."""
    k = _degrees(g)
    z = _zeta_factor(g, correlation, invert_zeta)
    weights = (1.0 - k / k.sum()) * (1.0 - z)
    weights = np.nan_to_num(weights, nan=0.0)
    weights[k == 0] = 0.0
    # 1 - zeta can round a hair below zero
    weights = np.clip(weights, 0.0, None)
    return AttachmentDistribution.from_weights(g.nodes, weights)


### Growth


def _attach_distribution(g: Graph, cfg: GrowthConfig) -> AttachmentDistribution:
    if cfg.model is GrowthModelEnum.dtvcn:
        return dtvcn_attach(g, cfg.correlation, cfg.invert_zeta)
    return preferential(g)


def _endpoint_distribution(g: Graph, cfg: GrowthConfig) -> AttachmentDistribution:
    """Picks the node that loses a link in removals (and TVCN rewires)."""
    if cfg.model is GrowthModelEnum.dtvcn:
        return dtvcn_remove_select(g, cfg.correlation, cfg.invert_zeta)
    return anti_preferential(g)


def _isolated(g: Graph) -> List[int]:
    return [n for n in g if g.degree(n) == 0]


def _keeps_connected(g: Graph, j: int, k: int, u: Optional[int] = None) -> bool:
    """
    Whether cutting (j, k), and then linking j to ``u`` when given, leaves j and k joined.

    A non-bridge cut always does. After a bridge cut the rewire reconnects the two
    sides only when ``u`` lies on the side of k.
    """
    if g.has_path(j, k, skip_edge=(j, k)):
        return True
    return u is not None and g.has_path(k, u, skip_edge=(j, k))


def _tvcn_rewire(g: Graph, cfg: GrowthConfig, rng: np.random.Generator) -> bool:
    for _ in range(cfg.max_attempts):
        try:
            (j,) = anti_preferential(g).sample(rng, 1, exclude=_isolated(g))
        except DegenerateDistribution:
            return False

        movable = sorted(k for k in g.neighbors(j) if g.degree(k) >= 2)
        if not movable:
            continue
        k = movable[int(rng.integers(len(movable)))]

        try:
            (u,) = preferential(g).sample(rng, 1, exclude=g.neighbors(j) | {j})
        except DegenerateDistribution:
            continue

        if not _keeps_connected(g, j, k, u):
            continue

        g.rewire_edge(j, k, u)
        return True

    return False


def _dtvcn_rewire(g: Graph, cfg: GrowthConfig, rng: np.random.Generator) -> bool:
    nodes = g.nodes
    pos, scaled = edge_correlations(g, cfg.correlation)
    # raw correlation in (0, 1] marks an assortative link
    candidates = pos[scaled > 1.0]
    if len(candidates) == 0:
        return False

    candidates = sorted((nodes[a], nodes[b]) for a, b in candidates)
    for _ in range(cfg.max_attempts):
        edge = candidates[int(rng.integers(len(candidates)))]
        side = int(rng.integers(2))
        j, k = edge[side], edge[1 - side]
        if g.degree(k) < 2:
            continue

        try:
            (u,) = dtvcn_attach(g, cfg.correlation, cfg.invert_zeta).sample(rng, 1, exclude=g.neighbors(j) | {j})
        except DegenerateDistribution:
            continue

        if not _keeps_connected(g, j, k, u):
            continue

        g.rewire_edge(j, k, u)
        return True

    return False


def _remove(g: Graph, cfg: GrowthConfig, rng: np.random.Generator) -> bool:
    for _ in range(cfg.max_attempts):
        try:
            dist = _endpoint_distribution(g, cfg)
            (j,) = dist.sample(rng, 1, exclude=_isolated(g))
        except DegenerateDistribution:
            return False

        nbrs = sorted(g.neighbors(j))
        k = nbrs[int(rng.integers(len(nbrs)))]
        if g.degree(j) < 2 or g.degree(k) < 2:
            continue
        if not _keeps_connected(g, j, k):
            continue

        g.remove_edge(j, k)
        return True

    return False


def grow_step(
    g: Graph, cfg: GrowthConfig, t: int, rng: np.random.Generator, stats: Optional[Dict[str, int]] = None
) -> Graph:
    """
    Advances ``g`` (the snapshot at t - 1) by one time instant, in place.

    One node arrives and links to ``cfg.n_add`` distinct existing nodes drawn from the
    model's attachment distribution. TVCN and DTVCN then spend the alteration budget:
    ``cfg.n_rewire`` rewires followed by ``cfg.n_remove`` removals.

    Parameters
    ----------
    g : Graph
        The network at the previous instant, mutated in place
    cfg : GrowthConfig
        Model and budgets
    t : int
        Index of the instant being produced
    rng : np.random.Generator
        Source of randomness
    stats : Dict[str, int], optional
        Counters of performed and skipped alterations, updated in place

    Returns
    -------
    Graph
        The same graph object, now the snapshot at t
    """
    if stats is None:
        stats = {}

    n_add = cfg.n_add
    if n_add >= g.number_of_nodes():
        raise BudgetInfeasible(
            f"Step {t}: the arriving node needs {n_add} targets but only {g.number_of_nodes()} nodes exist."
        )

    targets = _attach_distribution(g, cfg).sample(rng, n_add)
    new = max(g.nodes) + 1 if len(g) else 0
    g.add_node(new)
    for target in targets:
        g.add_edge(new, target)

    if cfg.model is not GrowthModelEnum.ba:
        rewire = _dtvcn_rewire if cfg.model is GrowthModelEnum.dtvcn else _tvcn_rewire
        for _ in range(cfg.n_rewire):
            if rewire(g, cfg, rng):
                stats["rewired"] = stats.get("rewired", 0) + 1
            else:
                stats["rewire_skipped"] = stats.get("rewire_skipped", 0) + 1
                warnings.warn("A rewire found no admissible link and its budget was forfeited.", RuntimeWarning)

        for _ in range(cfg.n_remove):
            if _remove(g, cfg, rng):
                stats["removed"] = stats.get("removed", 0) + 1
            else:
                stats["removal_skipped"] = stats.get("removal_skipped", 0) + 1
                warnings.warn("A removal would have disconnected the network and was skipped.", RuntimeWarning)

    g.validate()
    return g


def _run(cfg: GrowthConfig, on_step: Optional[Callable[[Graph], None]] = None) -> Tuple[Graph, Dict[str, int]]:
    rng = np.random.default_rng(cfg.rng_seed)
    stats: Dict[str, int] = {}

    g = ring_graph(cfg.n0)
    if on_step is not None:
        on_step(g)

    for t in range(1, cfg.T + 1):
        grow_step(g, cfg, t, rng, stats)
        if on_step is not None:
            on_step(g)

    return g, stats


def generate(cfg: GrowthConfig) -> SnapshotSequence:
    """
    Runs a growth model from a ring of ``cfg.n0`` nodes and records every instant.

    The result is a pure function of ``cfg``, seed included.
    """
    ret = SnapshotSequence()
    _, stats = _run(cfg, ret.append)
    ret.stats = stats
    return ret


def grow(cfg: GrowthConfig) -> Graph:
    """Same run as ``generate`` but only the final snapshot is kept."""
    g, _ = _run(cfg)
    return g
