"""
Node-capacity traffic model: capacities, generation rates, critical rates and a
discrete-time first-come-first-served packet simulation.
"""

import math
import warnings
from collections import deque
from typing import Deque, Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import (
    EmptySubnetwork,
    InvalidRoute,
    NonPositiveRate,
    TooSmall,
    ZeroBetweenness,
    ZeroCapacity,
)
from .graph import Graph
from .metrics import apl_diameter, betweenness, eigenvector_centrality
from .models import Route, RoutingStrategyEnum, TrafficModeEnum, TrafficParams, TrafficResult, User
from .routing import DEFAULT_PATH_CAP, ShortestPathDAG, choose_path, draw_users, path_weight, route_users
from .statistics import linear_drift
from .util import RandomState, as_generator, by_label

__all__ = [
    "node_capacity",
    "generation_rate",
    "critical_rate",
    "lambda_c_theoretical",
    "subnetwork_lambda_c",
    "analytic_travel_time",
    "global_loads",
    "critical_alpha",
    "congested_nodes",
    "TrafficSimulation",
    "Centralities",
    "evaluate_traffic",
]

NodeValues = Union[Mapping[int, float], Sequence[float], np.ndarray]

# A packet is (birth step, service units along its route, index of the current unit)
Packet = Tuple[int, Tuple[int, ...], int]


def node_capacity(evc: np.ndarray, beta: float, N: int) -> np.ndarray:
    """C_i = beta * x_i * N; with unit-sum centrality the capacities sum to beta * N."""
    return beta * np.asarray(evc, dtype=float) * N


def generation_rate(bc_norm: np.ndarray, alpha: float, diameter: int, N: int, strict: bool = False) -> np.ndarray:
    """
    lambda_i = alpha * D * N * g_i / sum_j g_j.

    When every betweenness is zero (complete graphs) each node falls back to
    ``alpha * D``, unless ``strict`` asks for ``ZeroBetweenness`` instead.
    """
    g = np.asarray(bc_norm, dtype=float)
    total = g.sum()
    if total <= 0:
        if strict:
            raise ZeroBetweenness("Every node has zero betweenness.")
        warnings.warn("Every node has zero betweenness; generation rates fall back to alpha * D.", RuntimeWarning)
        return np.full(len(g), alpha * diameter, dtype=float)
    return alpha * diameter * N * g / total


def critical_rate(c_max: float, N: int, g_max_raw: float) -> float:
    """lambda_c = C_max (N - 1) / g_max with g_max the raw pair-count betweenness."""
    if g_max_raw <= 0:
        raise ZeroBetweenness("The critical rate needs a node with positive betweenness.")
    return c_max * (N - 1) / g_max_raw


def lambda_c_theoretical(
    g: Graph, beta: float, bc_raw: Optional[np.ndarray] = None, evc: Optional[np.ndarray] = None
) -> float:
    """
    Critical generation rate of ``g`` evaluated at its largest-betweenness node.

    Parameters
    ----------
    g : Graph
        A connected graph with at least 3 nodes
    beta : float
        Capacity control
    bc_raw : np.ndarray, optional
        Raw betweenness in node order, computed when omitted
    evc : np.ndarray, optional
        Eigenvector centrality in node order, computed when omitted

    Returns
    -------
    float
        C_max (N - 1) / g_raw(max), C_max being the capacity of the node that attains g_raw(max)
    """
    n = g.number_of_nodes()
    if n < 3:
        raise TooSmall(f"The critical rate needs at least 3 nodes, got {n}.")

    if bc_raw is None:
        bc_raw, _ = betweenness(g)
    if evc is None:
        evc = eigenvector_centrality(g)

    hub = int(np.argmax(bc_raw))
    c_max = float(node_capacity(evc, beta, n)[hub])
    return critical_rate(c_max, n, float(bc_raw[hub]))


def subnetwork_lambda_c(g: Graph, routes: Sequence[Route], beta: float) -> float:
    """
    Critical rate of the subgraph induced by every node on the routes.

    Betweenness and eigenvector centrality are recomputed on the subgraph. When it
    falls apart the smallest rate over its components is returned. Components with
    fewer than 3 nodes or without betweenness cannot congest and are skipped; if
    nothing is left the rate is infinite.
    """
    nodes = set()
    for r in routes:
        nodes.update(r.path)
    if not nodes:
        raise EmptySubnetwork("No route, no subnetwork.")

    sub = g.subgraph([n for n in g.nodes if n in nodes])

    rates = []
    for comp in sub.components():
        if len(comp) < 3:
            continue
        part = sub if len(comp) == sub.number_of_nodes() else sub.subgraph(comp)
        try:
            rates.append(lambda_c_theoretical(part, beta))
        except ZeroBetweenness:
            continue

    if not rates:
        warnings.warn("No part of the route subnetwork can congest; its critical rate is infinite.", RuntimeWarning)
        return math.inf
    return min(rates)


def analytic_travel_time(routes: Sequence[Route], lambda_i: NodeValues, cap_i: NodeValues) -> float:
    """
    <T> = sum over routes of (sum of lambda_n along the route) / (min of C_n along the route).

    ``lambda_i`` and ``cap_i`` are indexed by node label.
    """
    if not routes:
        raise ValueError("At least one route is needed.")

    total = 0.0
    for r in routes:
        c_min = min(float(cap_i[n]) for n in r.path)
        if c_min <= 0:
            raise ZeroCapacity(f"Route of user {r.user.id} crosses a node without capacity.")
        total += sum(float(lambda_i[n]) for n in r.path) / c_min
    return total


def global_loads(
    g: Graph,
    rates: NodeValues,
    strategy: Union[str, RoutingStrategyEnum],
    bc_norm: NodeValues,
    cap: int = DEFAULT_PATH_CAP,
) -> np.ndarray:
    """
    Expected packets per step each node must forward in ``global`` mode, in node order.

    A source spreads its rate evenly over the other nodes of its component. Every node
    of the chosen path except the destination serves the packet once. ``wg_min`` and
    ``wg_max`` routes are deterministic; ``random_sp`` is averaged over the path set.
    """
    strategy = RoutingStrategyEnum(strategy)
    nodes = g.nodes
    index = {n: i for i, n in enumerate(nodes)}
    lam = by_label(nodes, rates)
    bc = by_label(nodes, bc_norm)

    load = np.zeros(len(nodes))
    for comp in g.components():
        if len(comp) < 2:
            continue
        for s in comp:
            if lam[s] <= 0:
                continue
            share = lam[s] / (len(comp) - 1)
            dag = ShortestPathDAG(g, s)
            for d in comp:
                if d == s:
                    continue
                paths = dag.paths_to(d, cap)
                if strategy is RoutingStrategyEnum.random_sp:
                    for p in paths:
                        for n in p[:-1]:
                            load[index[n]] += share / len(paths)
                else:
                    weights = [path_weight(p, bc) for p in paths]
                    path = paths[choose_path(paths, weights, strategy, None)]
                    for n in path[:-1]:
                        load[index[n]] += share
    return load


def critical_alpha(
    g: Graph,
    capacity: NodeValues,
    bc_norm: NodeValues,
    diameter: int,
    strategy: Union[str, RoutingStrategyEnum],
    cap: int = DEFAULT_PATH_CAP,
) -> float:
    """
    Smallest alpha at which some node's expected ``global`` mode load reaches its capacity.

    Loads are linear in alpha, so alpha* = min_i C_i / load_i evaluated at alpha = 1.
    Unlike ``lambda_c_theoretical`` this counts the packets a node generates itself.
    """
    n = g.number_of_nodes()
    rates = generation_rate(np.asarray(list(by_label(g.nodes, bc_norm).values())), 1.0, diameter, n)
    load = global_loads(g, rates, strategy, bc_norm, cap)
    caps = np.array(list(by_label(g.nodes, capacity).values()))

    busy = load > 0
    if not busy.any():
        return math.inf
    return float(np.min(caps[busy] / load[busy]))


def congested_nodes(lambda_i: np.ndarray, cap_i: np.ndarray, nodes: Optional[Sequence[int]] = None) -> List[int]:
    """Labels of the nodes generating more packets than they can forward."""
    lam = np.asarray(lambda_i, dtype=float)
    cap = np.asarray(cap_i, dtype=float)
    if nodes is None:
        nodes = range(len(lam))
    return [int(n) for n, over in zip(nodes, lam > cap) if over]


class TrafficSimulation:
    """
    Discrete-time packet simulation on a fixed graph.

    Every step first generates Poisson(lambda) packets at the sources, then lets every
    service unit forward up to its integer service credit of head-of-queue packets by
    one hop, and finally delivers the packets that reached their destination.
    Forwarded packets join their next queue only after every unit has been served.

    In ``global`` mode every node is a source with rate lambda_i, destinations are
    uniform among the other nodes of its component, and each (s, d) pair keeps the
    strategy-selected shortest path it was first given. In ``users`` mode packets follow
    the fixed user routes; a node carried by u users holds one sub-queue per user, each
    with capacity C_i / u, and users sharing a source split its rate equally.

    Parameters
    ----------
    g : Graph
        The network
    capacity : Union[Mapping[int, float], Sequence[float]]
        C_i per node, keyed by label or in node order
    rates : Union[Mapping[int, float], Sequence[float]]
        lambda_i per node, keyed by label or in node order
    params : TrafficParams
        Step counts and mode
    strategy : RoutingStrategyEnum, optional
        Route selection in global mode
    bc_norm : Union[Mapping[int, float], Sequence[float]], optional
        Betweenness weighting the routes in global mode
    routes : Sequence[Route], optional
        User routes, required in users mode
    rng : Union[None, int, np.random.Generator], optional
        Source of randomness
    """

    def __init__(
        self,
        g: Graph,
        capacity: NodeValues,
        rates: NodeValues,
        params: TrafficParams,
        strategy: Union[str, RoutingStrategyEnum] = RoutingStrategyEnum.wg_min,
        bc_norm: Optional[NodeValues] = None,
        routes: Optional[Sequence[Route]] = None,
        rng: RandomState = None,
    ):
        self.g = g
        self.params = params
        self.strategy = RoutingStrategyEnum(strategy)
        self.rng = as_generator(rng)

        self._nodes = g.nodes
        self._index = {n: i for i, n in enumerate(self._nodes)}
        self.capacity = by_label(self._nodes, capacity)
        self.rates = by_label(self._nodes, rates)

        for n, lam in self.rates.items():
            if not np.isfinite(lam) or lam < 0:
                raise NonPositiveRate(f"Node {n} has generation rate {lam}.")

        if params.mode is TrafficModeEnum.users:
            if not routes:
                raise InvalidRoute("Users mode needs at least one route.")
            self._setup_users(routes)
        else:
            bc = by_label(self._nodes, bc_norm) if bc_norm is not None else {n: 0.0 for n in self._nodes}
            self._setup_global(bc)

    ### Setup

    def _check_capacity(self, node: int) -> float:
        cap = self.capacity[node]
        if not cap > 0:
            raise ZeroCapacity(f"Node {node} must forward packets but has capacity {cap}.")
        return cap

    def _setup_users(self, routes: Sequence[Route]) -> None:
        carried: Dict[int, int] = {}
        for r in routes:
            for a, b in zip(r.path[:-1], r.path[1:]):
                if not self.g.has_edge(a, b):
                    raise InvalidRoute(f"Route of user {r.user.id} uses the missing link {a}-{b}.")
            for n in r.path[:-1]:
                carried[n] = carried.get(n, 0) + 1

        unit_of: Dict[Tuple[int, int], int] = {}
        unit_caps = []
        for k, r in enumerate(routes):
            for n in r.path[:-1]:
                unit_of[(n, k)] = len(unit_caps)
                unit_caps.append(self._check_capacity(n) / carried[n])

        sharing: Dict[int, int] = {}
        for r in routes:
            sharing[r.path[0]] = sharing.get(r.path[0], 0) + 1

        self._unit_caps = np.array(unit_caps, dtype=float)
        self._gen_rates = np.array([self.rates[r.path[0]] / sharing[r.path[0]] for r in routes], dtype=float)
        self._user_routes = [tuple(unit_of[(n, k)] for n in r.path[:-1]) for k, r in enumerate(routes)]

    def _setup_global(self, bc: Dict[int, float]) -> None:
        self._bc = bc
        self._unit_caps = np.array([self._check_capacity(n) for n in self._nodes], dtype=float)
        self._gen_rates = np.array([self.rates[n] for n in self._nodes], dtype=float)

        self._component: Dict[int, List[int]] = {}
        self._position: Dict[int, int] = {}
        for comp in self.g.components():
            comp = sorted(comp)
            for i, n in enumerate(comp):
                self._component[n] = comp
                self._position[n] = i

        for n in self._nodes:
            if self.rates[n] > 0 and len(self._component[n]) < 2:
                raise InvalidRoute(f"Node {n} generates packets but can reach no other node.")

        self._dags: Dict[int, ShortestPathDAG] = {}
        self._route_cache: Dict[Tuple[int, int], Tuple[int, ...]] = {}

    ### Routing

    def _global_route(self, s: int) -> Tuple[int, ...]:
        comp = self._component[s]
        j = int(self.rng.integers(len(comp) - 1))
        if j >= self._position[s]:
            j += 1
        d = comp[j]

        key = (s, d)
        route = self._route_cache.get(key)
        if route is None:
            dag = self._dags.get(s)
            if dag is None:
                dag = self._dags[s] = ShortestPathDAG(self.g, s)
            paths = dag.paths_to(d, self.params.path_cap)
            weights = [path_weight(p, self._bc) for p in paths]
            path = paths[choose_path(paths, weights, self.strategy, self.rng)]
            route = self._route_cache[key] = tuple(self._index[n] for n in path[:-1])
        return route

    ### Run

    def run(self) -> TrafficResult:
        """
        Simulates ``params.steps`` steps and measures the order parameter over the final window.
        """
        params = self.params
        users_mode = params.mode is TrafficModeEnum.users
        n_units = len(self._unit_caps)
        caps = self._unit_caps.tolist()
        credit = [0.0] * n_units
        queues: List[Deque[Packet]] = [deque() for _ in range(n_units)]

        generated = 0
        delivered = 0
        travel_times: List[int] = []
        trace = np.zeros(params.steps, dtype=np.int64)

        for t in range(params.steps):
            # generation
            counts = self.rng.poisson(self._gen_rates)
            for i in np.flatnonzero(counts):
                for _ in range(int(counts[i])):
                    route = self._user_routes[i] if users_mode else self._global_route(self._nodes[i])
                    queues[route[0]].append((t, route, 0))
                generated += int(counts[i])

            # service, then arrival
            moving: List[Packet] = []
            for u in range(n_units):
                credit[u] += caps[u]
                budget = int(credit[u])
                credit[u] -= budget

                q = queues[u]
                for _ in range(min(budget, len(q))):
                    birth, route, pos = q.popleft()
                    pos += 1
                    if pos == len(route):
                        delivered += 1
                        if t >= params.warmup:
                            travel_times.append(t - birth + 1)
                    else:
                        moving.append((birth, route, pos))

            for packet in moving:
                queues[packet[1][packet[2]]].append(packet)

            trace[t] = generated - delivered

        assert trace[-1] == sum(len(q) for q in queues)

        lambda_total = float(sum(self.rates.values()))
        cap_total = float(sum(self.capacity.values()))
        drift = linear_drift(trace[params.steps - params.window :])  # noqa: E203
        theta = cap_total / lambda_total * max(0.0, drift) if lambda_total > 0 else 0.0

        return TrafficResult(
            theta=theta,
            mean_T=float(np.mean(travel_times)) if travel_times else None,
            lambda_total=lambda_total,
            cap_total=cap_total,
            congested_nodes=congested_nodes(
                [self.rates[n] for n in self._nodes], [self.capacity[n] for n in self._nodes], self._nodes
            ),
            growth_rate=drift,
            generated=generated,
            delivered=delivered,
            packet_trace=trace,
            strategy=self.strategy,
            alpha=params.alpha,
            beta=params.beta,
            N=self.g.number_of_nodes(),
        )


class Centralities(NamedTuple):
    """Per-node quantities the traffic model is built from, in node order."""

    bc_raw: np.ndarray
    bc_norm: np.ndarray
    evc: np.ndarray
    diameter: int

    @classmethod
    def of(cls, g: Graph) -> "Centralities":
        bc_raw, bc_norm = betweenness(g)
        _, diameter = apl_diameter(g)
        return cls(bc_raw, bc_norm, eigenvector_centrality(g), diameter)


def evaluate_traffic(
    g: Graph,
    strategy: Union[str, RoutingStrategyEnum],
    params: TrafficParams,
    users_R: int = 20,
    rng: RandomState = None,
    keep_trace: bool = False,
    centralities: Optional[Centralities] = None,
    users: Optional[Sequence[User]] = None,
) -> TrafficResult:
    """
    Full traffic evaluation of one graph under one routing strategy.

    Computes centralities, capacities and rates, draws ``users_R`` users and routes them,
    simulates, and adds the analytic travel time and both critical rates to the result.

    Parameters
    ----------
    g : Graph
        A connected graph with at least 3 nodes
    strategy : Union[str, RoutingStrategyEnum]
        Route selection rule
    params : TrafficParams
        Simulation controls
    users_R : int, optional
        Number of users, ignored when ``users`` is given
    rng : Union[None, int, np.random.Generator], optional
        Source of randomness for users, random routes and the simulation
    keep_trace : bool, optional
        Keep the per-step packet count in the result
    centralities : Centralities, optional
        Precomputed centralities of ``g``
    users : Sequence[User], optional
        Users to route, so that several strategies can be compared on the same pairs

    Returns
    -------
    TrafficResult
        Simulation outcome with ``analytic_T``, ``lambda_c_theory`` and ``lambda_c_sub`` filled in
    """
    rng = as_generator(rng)
    strategy = RoutingStrategyEnum(strategy)
    n = g.number_of_nodes()
    if centralities is None:
        centralities = Centralities.of(g)
    bc_raw, bc_norm, evc, diameter = centralities

    cap = node_capacity(evc, params.beta, n)
    rates = generation_rate(bc_norm, params.alpha, diameter, n)

    if users is None:
        users = draw_users(g, min(users_R, n * (n - 1) // 2), rng)
    routes = route_users(g, users, strategy, bc_norm, rng=rng, cap=params.path_cap)

    sim = TrafficSimulation(g, cap, rates, params, strategy=strategy, bc_norm=bc_norm, routes=routes, rng=rng)
    result = sim.run()

    update = {
        "analytic_T": analytic_travel_time(routes, by_label(g.nodes, rates), by_label(g.nodes, cap)),
        "lambda_c_theory": lambda_c_theoretical(g, params.beta, bc_raw=bc_raw, evc=evc),
        "lambda_c_sub": subnetwork_lambda_c(g, routes, params.beta),
    }
    if not keep_trace:
        update["packet_trace"] = []
    return result.copy(update=update)
