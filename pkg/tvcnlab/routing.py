"""
Shortest-path enumeration and betweenness-weighted route selection.
"""

from collections import deque
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .exceptions import PathExplosion, TooSmall, Unreachable
from .graph import Graph
from .models import Route, RoutingStrategyEnum, User
from .models.result_models import ROUTE_COLUMNS
from .util import RandomState, as_generator, by_label

__all__ = [
    "ShortestPathDAG",
    "all_shortest_paths",
    "path_weight",
    "choose_path",
    "select_route",
    "draw_users",
    "route_users",
    "routes_frame",
]

Path = Tuple[int, ...]
NodeValues = Union[Mapping[int, float], Sequence[float], np.ndarray]

DEFAULT_PATH_CAP = 10 ** 4


class ShortestPathDAG:
    """
    Breadth-first predecessor DAG rooted at ``source``.

    ``sigma[v]`` is the exact number of shortest paths from the source to ``v``;
    ``preds[v]`` lists the neighbors of ``v`` one hop closer to the source, sorted.
    """

    __slots__ = ("source", "dist", "preds", "sigma")

    def __init__(self, g: Graph, source: int):
        g.index(source)  # raises UnknownNode

        self.source = source
        self.dist: Dict[int, int] = {source: 0}
        self.preds: Dict[int, List[int]] = {source: []}
        self.sigma: Dict[int, int] = {source: 1}

        queue = deque([source])
        while queue:
            v = queue.popleft()
            dv = self.dist[v]
            for w in sorted(g.neighbors(v)):
                if w not in self.dist:
                    self.dist[w] = dv + 1
                    self.preds[w] = []
                    self.sigma[w] = 0
                    queue.append(w)
                if self.dist[w] == dv + 1:
                    self.sigma[w] += self.sigma[v]
                    self.preds[w].append(v)

        for p in self.preds.values():
            p.sort()

    def __repr__(self) -> str:
        return f"ShortestPathDAG(source={self.source}, reachable={len(self.dist)})"

    def reaches(self, node: int) -> bool:
        return node in self.dist

    def paths_to(self, target: int, cap: int = DEFAULT_PATH_CAP) -> List[Path]:
        """
        Every shortest path from the source to ``target``, sorted lexicographically.
        """
        if target not in self.dist:
            raise Unreachable(f"Node {target} cannot be reached from {self.source}.")
        if self.sigma[target] > cap:
            raise PathExplosion(
                f"{self.sigma[target]} shortest paths join {self.source} and {target}, more than the cap of {cap}."
            )

        ret = []
        stack = [(target, (target,))]
        while stack:
            v, tail = stack.pop()
            if v == self.source:
                ret.append(tail)
                continue
            for p in self.preds[v]:
                stack.append((p, (p,) + tail))

        ret.sort()
        return ret


def all_shortest_paths(g: Graph, s: int, d: int, cap: int = DEFAULT_PATH_CAP) -> List[Path]:
    """
    Enumerates every minimum-length path between ``s`` and ``d``.

    Parameters
    ----------
    g : Graph
        The network
    s : int
        Source label
    d : int
        Destination label
    cap : int, optional
        Largest number of paths that may be returned

    Returns
    -------
    List[Tuple[int, ...]]
        Node sequences from ``s`` to ``d`` in lexicographic order
    """
    if s == d:
        raise ValueError(f"Source and destination are both {s}.")
    g.index(d)
    return ShortestPathDAG(g, s).paths_to(d, cap)


def path_weight(path: Sequence[int], bc_norm: NodeValues) -> float:
    """W_g of a path: normalized betweenness summed over every node, endpoints included."""
    return float(sum(bc_norm[n] for n in path))


def choose_path(
    paths: List[Path], weights: List[float], strategy: RoutingStrategyEnum, rng: np.random.Generator
) -> int:
    """Index of the path the strategy takes from a lexicographically sorted path list."""
    # rounding keeps float summation noise from breaking lexicographic ties
    if strategy is RoutingStrategyEnum.wg_min:
        return min(range(len(paths)), key=lambda i: (round(weights[i], 12), paths[i]))
    elif strategy is RoutingStrategyEnum.wg_max:
        return min(range(len(paths)), key=lambda i: (-round(weights[i], 12), paths[i]))
    else:
        return int(rng.integers(len(paths)))


def select_route(
    g: Graph,
    user: User,
    strategy: Union[str, RoutingStrategyEnum],
    bc_norm: NodeValues,
    rng: RandomState = None,
    cap: int = DEFAULT_PATH_CAP,
    dag: Optional[ShortestPathDAG] = None,
) -> Route:
    """
    Chooses one shortest path for ``user``.

    ``wg_min`` and ``wg_max`` take the path of least or greatest W_g, ties going to
    the lexicographically smallest node sequence. ``random_sp`` draws uniformly from
    the sorted path set.

    Parameters
    ----------
    g : Graph
        The network
    user : User
        The (s, d) pair to route
    strategy : Union[str, RoutingStrategyEnum]
        Selection rule
    bc_norm : Union[Mapping[int, float], Sequence[float]]
        Normalized betweenness, keyed by label or in the node order of ``g``
    rng : Union[None, int, np.random.Generator], optional
        Randomness for ``random_sp``
    cap : int, optional
        Path enumeration limit
    dag : ShortestPathDAG, optional
        A precomputed DAG rooted at ``user.s``
    """
    strategy = RoutingStrategyEnum(strategy)
    if dag is None or dag.source != user.s:
        dag = ShortestPathDAG(g, user.s)

    weights_by_label = by_label(g.nodes, bc_norm)
    paths = dag.paths_to(user.d, cap)
    weights = [path_weight(p, weights_by_label) for p in paths]

    i = choose_path(paths, weights, strategy, as_generator(rng))
    return Route(user=user, strategy=strategy, path=paths[i], weight=weights[i], k_count=len(paths))


def draw_users(g: Graph, R: int, rng: RandomState = None) -> List[User]:
    """
    Draws ``R`` users whose (s, d) pairs are distinct, unordered and connected.

    Each pair is oriented at random. Users are numbered from 1.
    """
    rng = as_generator(rng)
    nodes = g.nodes
    component = {}
    for cid, comp in enumerate(g.components()):
        for n in comp:
            component[n] = cid

    sizes = np.bincount(list(component.values())) if component else np.zeros(0, dtype=int)
    n_pairs = int((sizes * (sizes - 1) // 2).sum())
    if R > n_pairs:
        raise TooSmall(f"Only {n_pairs} connected node pairs exist, cannot draw {R} users.")

    pairs: List[Tuple[int, int]] = []
    if 2 * R > n_pairs:
        candidates = [
            (a, b) for i, a in enumerate(nodes) for b in nodes[i + 1 :] if component[a] == component[b]  # noqa: E203
        ]
        for k in rng.choice(len(candidates), size=R, replace=False):
            a, b = candidates[k]
            pairs.append((a, b) if rng.integers(2) == 0 else (b, a))
    else:
        seen = set()
        while len(pairs) < R:
            i, j = rng.choice(len(nodes), size=2, replace=False)
            a, b = nodes[i], nodes[j]
            key = (min(a, b), max(a, b))
            if component[a] != component[b] or key in seen:
                continue
            seen.add(key)
            pairs.append((a, b))

    return [User(id=i + 1, s=s, d=d) for i, (s, d) in enumerate(pairs)]


def route_users(
    g: Graph,
    users: Sequence[User],
    strategy: Union[str, RoutingStrategyEnum],
    bc_norm: NodeValues,
    rng: RandomState = None,
    cap: int = DEFAULT_PATH_CAP,
) -> List[Route]:
    """Routes every user with one strategy, sharing the DAG of users with a common source."""
    rng = as_generator(rng)
    bc = by_label(g.nodes, bc_norm)
    dags: Dict[int, ShortestPathDAG] = {}

    ret = []
    for user in users:
        if user.s not in dags:
            dags[user.s] = ShortestPathDAG(g, user.s)
        ret.append(select_route(g, user, strategy, bc, rng=rng, cap=cap, dag=dags[user.s]))
    return ret


def routes_frame(routes: Sequence[Route]) -> pd.DataFrame:
    """CSV-ready table: ``user,s,d,strategy,path_len,k_count,w_g,path``."""
    return pd.DataFrame([r.to_row() for r in routes], columns=ROUTE_COLUMNS)
