"""Dense graph representation and the basic metric toolbox.

Graphs are stored as symmetric, irreflexive boolean adjacency matrices over
vertices 0..n-1.  At desk scale this makes complementation and flipping bulk
bitwise operations, which is what every search in this package leans on.

Distances are nonnegative integers or :data:`INF` for disconnected pairs.
Internally, distance matrices use ``-1`` as the unreachable sentinel; the
public functions translate to :data:`INF` at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

#: Distance of a disconnected pair.  Absorbing under addition and ordered
#: above every integer, so ``max`` folds treat it as a top element.
INF = math.inf

#: A shortest-path distance: a nonnegative int, or INF when disconnected.
ExtDist = int | float

#: Sentinel for INF inside integer distance matrices.
UNREACHED = -1


class Graph:
    """An undirected simple graph on vertices ``0..n-1``.

    Instances are immutable after construction (the adjacency array is
    marked read-only), so they are safe to share across parallel workers.
    """

    __slots__ = ("n", "adj")

    def __init__(self, adj: np.ndarray):
        adj = np.asarray(adj, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise DomainError(f"adjacency must be square, got shape {adj.shape}")
        if adj.dtype != bool:
            adj = adj.astype(bool)
        if not np.array_equal(adj, adj.T):
            raise DomainError("adjacency must be symmetric")
        if adj.diagonal().any():
            raise DomainError("self-loops are not allowed")
        adj = adj.copy()
        adj.setflags(write=False)
        self.n = adj.shape[0]
        self.adj = adj

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise DomainError(f"self-loop ({u},{v}) not allowed")
            adj[u, v] = adj[v, u] = True
        return cls(adj)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(np.zeros((n, n), dtype=bool))

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (u, v) pairs with u < v, sorted."""
        iu, iv = np.nonzero(np.triu(self.adj))
        return list(zip(iu.tolist(), iv.tolist()))

    def num_edges(self) -> int:
        return int(self.adj.sum()) // 2

    def neighbors(self, v: int) -> list[int]:
        self._check_vertex(v)
        return np.flatnonzero(self.adj[v]).tolist()

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return int(self.adj[v].sum())

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise DomainError(f"vertex {v} out of range for n={self.n}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash((self.n, self.adj.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges()})"


@dataclass(frozen=True)
class Bipartite:
    """A bipartite graph whose bipartition is part of the value.

    ``graph`` spans the whole vertex universe of the object; ``left`` and
    ``right`` are disjoint, cover it, and every edge crosses sides.
    """

    graph: Graph
    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        left, right = set(self.left), set(self.right)
        if left & right:
            raise DomainError("bipartition sides overlap")
        if left | right != set(range(self.graph.n)):
            raise DomainError("bipartition sides must cover all vertices")
        for u, v in self.graph.edges():
            if (u in left) == (v in left):
                raise DomainError(f"edge ({u},{v}) does not cross the bipartition")
        object.__setattr__(self, "left", tuple(sorted(left)))
        object.__setattr__(self, "right", tuple(sorted(right)))

    @property
    def n(self) -> int:
        return self.graph.n

    def cross_mask(self) -> np.ndarray:
        """Boolean (n, n) mask of the crossing vertex pairs."""
        ind_l = np.zeros(self.n, dtype=bool)
        ind_l[list(self.left)] = True
        return np.logical_xor.outer(ind_l, ind_l)


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------


def bfs_array(g: Graph, src: int) -> np.ndarray:
    """Shortest-path distances from ``src`` as an int array; -1 = unreachable."""
    g._check_vertex(src)
    dist = np.full(g.n, UNREACHED, dtype=np.int64)
    dist[src] = 0
    frontier = np.zeros(g.n, dtype=bool)
    frontier[src] = True
    d = 0
    while frontier.any():
        d += 1
        reached = g.adj[frontier].any(axis=0) & (dist == UNREACHED)
        dist[reached] = d
        frontier = reached
    return dist


def bfs_distances(g: Graph, src: int) -> dict[int, ExtDist]:
    """Exact shortest-path distances from ``src``; unreachable maps to INF."""
    dist = bfs_array(g, src)
    return {v: (INF if dist[v] == UNREACHED else int(dist[v])) for v in range(g.n)}


def distance_matrix(g: Graph) -> np.ndarray:
    """All-pairs shortest-path distances; -1 encodes INF.

    Computed by iterated boolean reachability products, which beats
    per-source BFS at the matrix sizes this package works with.
    """
    n = g.n
    eye = np.eye(n, dtype=bool)
    reach = g.adj | eye
    dist = np.full((n, n), UNREACHED, dtype=np.int64)
    dist[eye] = 0
    dist[g.adj] = 1
    d = 1
    while True:
        new_reach = (reach @ g.adj) | reach
        newly = new_reach & ~reach
        if not newly.any():
            return dist
        d += 1
        dist[newly] = d
        reach = new_reach


def batched_distance_matrices(adjs: np.ndarray) -> np.ndarray:
    """All-pairs distances for a stack of adjacency matrices (F, n, n).

    Returns an int array of the same shape with -1 for unreachable pairs.
    The hot kernel behind flip-metric computations and exhaustive sweeps.
    """
    adjs = np.asarray(adjs, dtype=bool)
    f, n, _ = adjs.shape
    eye = np.eye(n, dtype=bool)
    reach = adjs | eye
    dist = np.full((f, n, n), UNREACHED, dtype=np.int16)
    dist[:, eye] = 0
    dist[adjs] = 1
    d = 1
    while True:
        new_reach = (reach @ adjs) | reach
        newly = new_reach & ~reach
        if not newly.any():
            return dist
        d += 1
        dist[newly] = d
        reach = new_reach


def fold_max_distances(batch: np.ndarray) -> np.ndarray:
    """Elementwise max over axis 0 of sentinel-coded distance matrices.

    -1 acts as the absorbing top element (any unreachable flip dominates).
    """
    return np.where((batch == UNREACHED).any(axis=0), UNREACHED, batch.max(axis=0))


def is_connected(g: Graph) -> bool:
    """A graph on at most one vertex counts as connected."""
    if g.n <= 1:
        return True
    return not (bfs_array(g, 0) == UNREACHED).any()


def diameter(g: Graph) -> ExtDist:
    """Max pairwise distance; INF iff disconnected (n >= 2), 0 for n = 1."""
    if g.n == 0:
        raise DomainError("diameter of the empty graph is undefined")
    dist = distance_matrix(g)
    if (dist == UNREACHED).any():
        return INF
    return int(dist.max())


def ball(g: Graph, v: int, r: int) -> frozenset[int]:
    """Vertices at distance at most ``r`` from ``v``; r=0 gives {v}."""
    if r < 0:
        raise DomainError(f"radius must be nonnegative, got {r}")
    g._check_vertex(v)
    dist = bfs_array(g, v)
    return frozenset(np.flatnonzero((dist != UNREACHED) & (dist <= r)).tolist())


# ---------------------------------------------------------------------------
# Complements and induced subgraphs
# ---------------------------------------------------------------------------


def complement(g: Graph) -> Graph:
    adj = ~g.adj
    np.fill_diagonal(adj, False)
    return Graph(adj)


def bipartite_complement(b: Bipartite) -> Bipartite:
    """Complement the crossing edges only; the bipartition is preserved."""
    adj = b.graph.adj ^ b.cross_mask()
    return Bipartite(Graph(adj), b.left, b.right)


def induced(g: Graph, s) -> tuple[Graph, tuple[int, ...]]:
    """Induced subgraph on ``s`` plus the new-index -> old-vertex table."""
    order = sorted(set(s))
    for v in order:
        g._check_vertex(v)
    sub = g.adj[np.ix_(order, order)]
    return Graph(sub), tuple(order)


def bipartite_induced(g: Graph, a, b) -> tuple[Bipartite, tuple[int, ...]]:
    """Bipartite subgraph on (a, b): only crossing edges are kept."""
    a_sorted, b_sorted = sorted(set(a)), sorted(set(b))
    if set(a_sorted) & set(b_sorted):
        raise DomainError("bipartite sides must be disjoint")
    order = a_sorted + b_sorted
    for v in order:
        g._check_vertex(v)
    sub = g.adj[np.ix_(order, order)].copy()
    k = len(a_sorted)
    sub[:k, :k] = False
    sub[k:, k:] = False
    left = tuple(range(k))
    right = tuple(range(k, len(order)))
    return Bipartite(Graph(sub), left, right), tuple(order)
