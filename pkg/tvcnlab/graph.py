"""
Undirected simple graphs and the snapshot sequences produced by the growth models.
"""

import os
from collections import deque
from pathlib import Path
from typing import TYPE_CHECKING, Dict, Iterable, Iterator, List, Optional, Set, Tuple, Union

import msgpack
import numpy as np

from .exceptions import DuplicateEdge, DuplicateNode, GraphInvariantError, SelfLoop, UnknownEdge, UnknownNode

if TYPE_CHECKING:  # pragma: no cover
    import networkx

__all__ = [
    "Graph",
    "SnapshotSequence",
    "ring_graph",
    "save_edgelist",
    "load_edgelist",
    "to_edgelist_string",
    "from_edgelist_string",
]

Edge = Tuple[int, int]


class Graph:
    """
    An undirected simple graph with degree bookkeeping.

    Nodes are integer labels kept in insertion order, which is also the order of
    every per-node array returned by this package (``degree_array``, betweenness, ...).
    Mutators work in place and return the graph so calls can be chained.
    """

    __slots__ = ("_adj", "_edge_count", "_index")

    def __init__(self, nodes: Optional[Iterable[int]] = None):
        self._adj: Dict[int, Set[int]] = {}
        self._index: Dict[int, int] = {}
        self._edge_count = 0
        if nodes is not None:
            for n in nodes:
                self.add_node(n)

    @classmethod
    def from_edges(cls, nodes: Union[int, Iterable[int]], edges: Iterable[Edge]) -> "Graph":
        """Builds a graph from a node count (labels 0..n-1) or node iterable plus an edge iterable."""
        if isinstance(nodes, (int, np.integer)):
            nodes = range(int(nodes))
        g = cls(nodes)
        for a, b in edges:
            g.add_edge(int(a), int(b))
        return g

    def __repr__(self) -> str:
        return f"<Graph(N={self.number_of_nodes()}, E={self.number_of_edges()})>"

    def __len__(self) -> int:
        return len(self._adj)

    def __contains__(self, node: int) -> bool:
        return node in self._adj

    def __iter__(self) -> Iterator[int]:
        return iter(self._adj)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.nodes == other.nodes and self.edges() == other.edges()

    ### Mutation

    def add_node(self, node: int) -> "Graph":
        node = int(node)
        if node in self._adj:
            raise DuplicateNode(f"Node {node} is already present.")
        self._index[node] = len(self._adj)
        self._adj[node] = set()
        return self

    def add_edge(self, a: int, b: int) -> "Graph":
        if a == b:
            raise SelfLoop(f"Self-loop on node {a} is not allowed.")
        for n in (a, b):
            if n not in self._adj:
                raise UnknownNode(f"Node {n} is not present.")
        if b in self._adj[a]:
            raise DuplicateEdge(f"Edge ({a}, {b}) already exists.")

        self._adj[a].add(b)
        self._adj[b].add(a)
        self._edge_count += 1
        return self

    def remove_edge(self, a: int, b: int) -> "Graph":
        if a not in self._adj or b not in self._adj[a]:
            raise UnknownEdge(f"Edge ({a}, {b}) does not exist.")

        self._adj[a].discard(b)
        self._adj[b].discard(a)
        self._edge_count -= 1
        return self

    def rewire_edge(self, a: int, old_b: int, new_b: int) -> "Graph":
        """Moves the edge (a, old_b) to (a, new_b). Either both steps happen or neither."""
        if a not in self._adj or old_b not in self._adj[a]:
            raise UnknownEdge(f"Edge ({a}, {old_b}) does not exist.")
        if new_b == a:
            raise SelfLoop(f"Rewiring ({a}, {old_b}) onto node {a} would create a self-loop.")
        if new_b not in self._adj:
            raise UnknownNode(f"Node {new_b} is not present.")
        if new_b in self._adj[a]:
            raise DuplicateEdge(f"Edge ({a}, {new_b}) already exists.")

        self.remove_edge(a, old_b)
        self.add_edge(a, new_b)
        return self

    ### Queries

    @property
    def nodes(self) -> List[int]:
        return list(self._adj)

    def index(self, node: int) -> int:
        """Position of ``node`` in the node order."""
        try:
            return self._index[node]
        except KeyError:
            raise UnknownNode(f"Node {node} is not present.") from None

    def number_of_nodes(self) -> int:
        return len(self._adj)

    def number_of_edges(self) -> int:
        return self._edge_count

    def has_node(self, node: int) -> bool:
        return node in self._adj

    def has_edge(self, a: int, b: int) -> bool:
        return a in self._adj and b in self._adj[a]

    def neighbors(self, node: int) -> Set[int]:
        try:
            return self._adj[node]
        except KeyError:
            raise UnknownNode(f"Node {node} is not present.") from None

    def degree(self, node: int) -> int:
        return len(self.neighbors(node))

    def degree_array(self) -> np.ndarray:
        return np.fromiter((len(nbrs) for nbrs in self._adj.values()), dtype=np.int64, count=len(self._adj))

    def degree_sum(self) -> int:
        return sum(len(nbrs) for nbrs in self._adj.values())

    def edges(self) -> List[Edge]:
        """Canonical edge list: (a, b) with a < b, sorted."""
        return sorted((a, b) for a, nbrs in self._adj.items() for b in nbrs if a < b)

    def edge_array(self) -> np.ndarray:
        """Canonical edges as an ``(E, 2)`` integer array."""
        edges = self.edges()
        if not edges:
            return np.zeros((0, 2), dtype=np.int64)
        return np.array(edges, dtype=np.int64)

    def edge_index_array(self) -> np.ndarray:
        """Edges as ``(E, 2)`` node positions, in adjacency order rather than sorted."""
        index = self._index
        pairs = [(index[a], index[b]) for a, nbrs in self._adj.items() for b in nbrs if a < b]
        if not pairs:
            return np.zeros((0, 2), dtype=np.int64)
        return np.array(pairs, dtype=np.int64)

    def components(self) -> List[List[int]]:
        """Connected components, each in node order, listed by their first node."""
        seen: Set[int] = set()
        ret = []
        for start in self._adj:
            if start in seen:
                continue
            seen.add(start)
            comp = [start]
            stack = [start]
            while stack:
                v = stack.pop()
                for w in self._adj[v]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        stack.append(w)
            comp.sort(key=self._index.__getitem__)
            ret.append(comp)
        return ret

    def is_connected(self) -> bool:
        return len(self._adj) > 0 and len(self.components()) == 1

    def has_path(self, a: int, b: int, skip_edge: Optional[Edge] = None) -> bool:
        """
        Whether ``a`` and ``b`` are joined, optionally as if ``skip_edge`` were absent.

        Searches from both ends at once and always grows the smaller side, so a
        cut-off pocket is exhausted after visiting the pocket alone.
        """
        for n in (a, b):
            if n not in self._adj:
                raise UnknownNode(f"Node {n} is not present.")
        if a == b:
            return True

        skip = None if skip_edge is None else frozenset(skip_edge)
        seen = ({a}, {b})
        frontier = (deque([a]), deque([b]))
        while frontier[0] and frontier[1]:
            side = 0 if len(seen[0]) <= len(seen[1]) else 1
            v = frontier[side].popleft()
            for w in self._adj[v]:
                if skip is not None and w in skip and v in skip:
                    continue
                if w in seen[1 - side]:
                    return True
                if w not in seen[side]:
                    seen[side].add(w)
                    frontier[side].append(w)
        return False

    def is_bridge(self, a: int, b: int) -> bool:
        """Whether removing the existing edge (a, b) splits its component."""
        if not self.has_edge(a, b):
            raise UnknownEdge(f"Edge ({a}, {b}) does not exist.")
        return not self.has_path(a, b, skip_edge=(a, b))

    ### Copies and conversion

    def copy(self) -> "Graph":
        ret = Graph()
        ret._adj = {n: set(nbrs) for n, nbrs in self._adj.items()}
        ret._index = dict(self._index)
        ret._edge_count = self._edge_count
        return ret

    def subgraph(self, nodes: Iterable[int]) -> "Graph":
        """Induced subgraph on ``nodes``, keeping this graph's node order."""
        keep = set(nodes)
        missing = keep - self._adj.keys()
        if missing:
            raise UnknownNode(f"Nodes {sorted(missing)} are not present.")

        ret = Graph(n for n in self._adj if n in keep)
        for a in ret:
            for b in self._adj[a]:
                if b in keep and a < b:
                    ret.add_edge(a, b)
        return ret

    def to_networkx(self) -> "networkx.Graph":
        import networkx as nx

        ret = nx.Graph()
        ret.add_nodes_from(self._adj)
        ret.add_edges_from(self.edges())
        return ret

    def validate(self) -> None:
        """Checks simplicity, adjacency symmetry and the handshake identity."""
        degree_sum = 0
        for a, nbrs in self._adj.items():
            if a in nbrs:
                raise GraphInvariantError(f"Self-loop found on node {a}.")
            for b in nbrs:
                if a not in self._adj.get(b, ()):
                    raise GraphInvariantError(f"Adjacency of ({a}, {b}) is not symmetric.")
            degree_sum += len(nbrs)

        if degree_sum != 2 * self._edge_count:
            raise GraphInvariantError(
                f"Degree sum {degree_sum} does not equal twice the edge count {self._edge_count}."
            )


def ring_graph(n: int) -> Graph:
    """Ring on n nodes, a single edge when n == 2."""
    g = Graph(range(n))
    if n == 2:
        return g.add_edge(0, 1)
    for i in range(n):
        g.add_edge(i, (i + 1) % n)
    return g


### Edge-list format


def to_edgelist_string(g: Graph) -> str:
    """
    Edge-list text: a ``#nodes <N>`` header followed by one ``a b`` line per edge, a < b, sorted.

    Node labels must be the dense range 0..N-1 for the header to describe the node set.
    """
    if g.nodes != list(range(g.number_of_nodes())):
        raise ValueError("Edge-list export requires dense node labels 0..N-1 in order.")

    lines = [f"#nodes {g.number_of_nodes()}"]
    lines.extend(f"{a} {b}" for a, b in g.edges())
    return "\n".join(lines) + "\n"


def from_edgelist_string(text: str) -> Graph:
    lines = [line.strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    if not lines or not lines[0].startswith("#nodes"):
        raise ValueError("Edge-list text must begin with a '#nodes <N>' header.")

    try:
        n = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise ValueError(f"Could not read the node count from header '{lines[0]}'.") from None

    edges = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"Line {lineno}: expected 'a b', found '{line}'.")
        edges.append((int(parts[0]), int(parts[1])))

    return Graph.from_edges(n, edges)


def save_edgelist(g: Graph, path: Union[str, Path]) -> None:
    with open(path, "w", newline="\n") as handle:
        handle.write(to_edgelist_string(g))


def load_edgelist(path: Union[str, Path]) -> Graph:
    with open(path, "r") as handle:
        return from_edgelist_string(handle.read())


### Snapshots


class SnapshotSequence:
    """
    The graph at every time instant of one growth run.

    Snapshots are stored as canonical edge arrays and rebuilt into fresh ``Graph``
    objects on access, so consumers can never mutate the recorded history.
    Growth models only add nodes, so node sets are the dense ranges 0..n_t-1.
    """

    def __init__(self):
        self._node_counts: List[int] = []
        self._edges: List[np.ndarray] = []
        self.stats: Dict[str, int] = {}

    def __len__(self) -> int:
        return len(self._edges)

    def __iter__(self) -> Iterator[Graph]:
        for t in range(len(self)):
            yield self[t]

    def __getitem__(self, t: int) -> Graph:
        n = self._node_counts[t]
        return Graph.from_edges(n, self._edges[t].tolist())

    def __repr__(self) -> str:
        return f"<SnapshotSequence(tau={self.tau})>"

    @property
    def tau(self) -> int:
        return len(self._edges)

    @property
    def final(self) -> Graph:
        return self[-1]

    def node_count(self, t: int) -> int:
        return self._node_counts[t]

    def edge_count(self, t: int) -> int:
        return len(self._edges[t])

    def append(self, g: Graph) -> None:
        n = g.number_of_nodes()
        if g.nodes != list(range(n)):
            raise ValueError("Snapshots require dense node labels 0..N-1 in arrival order.")
        if self._node_counts and n < self._node_counts[-1]:
            raise GraphInvariantError(
                f"Snapshot {len(self)} has {n} nodes, fewer than the {self._node_counts[-1]} before it."
            )
        self._node_counts.append(n)
        self._edges.append(g.edge_array().astype(np.int32))

    def validate(self) -> None:
        for t in range(1, len(self)):
            if self._node_counts[t] < self._node_counts[t - 1]:
                raise GraphInvariantError(f"Node set shrinks between t={t - 1} and t={t}.")

    ### Persistence

    def save(self, directory: Union[str, Path]) -> List[str]:
        """Writes ``snap_<t>.edges`` for every instant, returns the file names written."""
        os.makedirs(directory, exist_ok=True)
        written = []
        for t, g in enumerate(self):
            fname = os.path.join(directory, f"snap_{t}.edges")
            save_edgelist(g, fname)
            written.append(fname)
        return written

    @classmethod
    def load(cls, directory: Union[str, Path]) -> "SnapshotSequence":
        ret = cls()
        t = 0
        while True:
            fname = os.path.join(directory, f"snap_{t}.edges")
            if not os.path.isfile(fname):
                break
            ret.append(load_edgelist(fname))
            t += 1

        if t == 0:
            raise OSError(f"No snap_<t>.edges files found in '{directory}'.")
        return ret

    def to_msgpack(self) -> bytes:
        data = {
            "node_counts": self._node_counts,
            "edges": [e.ravel().tolist() for e in self._edges],
            "stats": self.stats,
        }
        return msgpack.packb(data, use_bin_type=True)

    @classmethod
    def from_msgpack(cls, blob: bytes) -> "SnapshotSequence":
        data = msgpack.unpackb(blob, raw=False)
        ret = cls()
        for n, flat in zip(data["node_counts"], data["edges"]):
            ret._node_counts.append(n)
            ret._edges.append(np.array(flat, dtype=np.int32).reshape(-1, 2))
        ret.stats = dict(data.get("stats", {}))
        ret.validate()
        return ret
