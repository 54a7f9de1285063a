"""Undirected simple graph on dense integer node ids."""

from collections import deque

import numpy as np
import scipy.sparse as sp


class GraphInputError(ValueError):
    """Raised for out-of-range node ids or invalid graph sizes."""


class Graph:
    """Undirected simple graph with nodes ``0..n-1``.

    Adjacency is kept as one Python list per node; edge membership is a set of
    integer keys ``min(u, v) * n + max(u, v)``. Both are append-only.

    Parameters
    ----------
    n : int
        Number of nodes.
    """

    __slots__ = ("node_count", "adjacency", "_keys", "edge_count", "labels")

    def __init__(self, n=0):
        n = int(n)
        if n < 0:
            raise GraphInputError(f"node count must be >= 0, got {n}")
        self.node_count = n
        self.adjacency = [[] for _ in range(n)]
        self._keys = set()
        self.edge_count = 0
        # optional external id per node (set by ingestion)
        self.labels = None

    def __repr__(self):
        return f"Graph(n={self.node_count}, m={self.edge_count})"

    def __len__(self):
        return self.node_count

    def _check(self, v):
        if not 0 <= v < self.node_count:
            raise GraphInputError(f"node id {v} out of range [0, {self.node_count})")

    def _key(self, u, v):
        return u * self.node_count + v if u < v else v * self.node_count + u

    def add_edge(self, u, v):
        """Insert ``{u, v}``; return False for self-loops and existing edges."""
        self._check(u)
        self._check(v)
        if u == v:
            return False
        key = self._key(u, v)
        if key in self._keys:
            return False
        self._keys.add(key)
        self.adjacency[u].append(v)
        self.adjacency[v].append(u)
        self.edge_count += 1
        return True

    def has_edge(self, u, v):
        self._check(u)
        self._check(v)
        if u == v:
            return False
        return self._key(u, v) in self._keys

    def degree(self, v):
        self._check(v)
        return len(self.adjacency[v])

    def neighbors(self, v):
        self._check(v)
        return list(self.adjacency[v])

    def degrees(self):
        """Degree of every node as an int64 array."""
        return np.fromiter((len(a) for a in self.adjacency), dtype=np.int64,
                           count=self.node_count)

    def edges(self):
        """Yield each undirected edge once as ``(u, v)`` with ``u < v``."""
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield u, v

    def sorted_edges(self):
        """Edges as an ``(m, 2)`` int64 array in lexicographic order."""
        n = self.node_count
        keys = np.fromiter(self._keys, dtype=np.int64, count=len(self._keys))
        keys.sort()
        if n == 0:
            return np.empty((0, 2), dtype=np.int64)
        return np.column_stack((keys // n, keys % n))

    def to_csr(self):
        """Symmetric 0/1 adjacency matrix in CSR form."""
        n = self.node_count
        e = self.sorted_edges()
        rows = np.concatenate((e[:, 0], e[:, 1]))
        cols = np.concatenate((e[:, 1], e[:, 0]))
        data = np.ones(rows.size, dtype=np.int8)
        return sp.csr_matrix((data, (rows, cols)), shape=(n, n))

    def edge_set(self):
        """Frozen set of ``(u, v)`` tuples with ``u < v``."""
        return frozenset(self.edges())

    @classmethod
    def from_edges(cls, n, edges):
        g = cls(n)
        for u, v in edges:
            g.add_edge(int(u), int(v))
        return g


def new_graph(n):
    return Graph(n)


def connected_components(g):
    """Label each node with a component id (0-based, in order of discovery).

    Returns
    -------
    numpy.ndarray
        ``comp[v]`` is the component id of node ``v``.
    """
    comp = np.full(g.node_count, -1, dtype=np.int64)
    adj = g.adjacency
    label = 0
    for s in range(g.node_count):
        if comp[s] >= 0:
            continue
        comp[s] = label
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if comp[w] < 0:
                    comp[w] = label
                    queue.append(w)
        label += 1
    return comp


def component_count(g):
    comp = connected_components(g)
    return int(comp.max()) + 1 if comp.size else 0
