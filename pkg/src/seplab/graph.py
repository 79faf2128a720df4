"""Core graph type and BFS geometry.

Graphs are finite, simple, undirected, with vertices 0..n-1, stored in
compressed sparse row form (sorted adjacency).  All distances are unit-edge
graph distances.  Everything here is deterministic: ties are broken by
vertex id, never by hash or insertion order.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, InputError


def as_vertex_set(vertices, n=None) -> np.ndarray:
    """Normalize an iterable of vertex ids to a sorted unique int64 array.

    Raises InputError on out-of-range ids when `n` is given.
    """
    arr = np.asarray(list(vertices) if not isinstance(vertices, np.ndarray) else vertices,
                     dtype=np.int64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise InputError("vertex set must be a flat sequence of ids")
    arr = np.unique(arr)
    if n is not None and arr.size and (arr[0] < 0 or arr[-1] >= n):
        raise InputError(f"vertex id out of range [0, {n})")
    return arr


class Graph:
    """Simple undirected graph in CSR form.

    `indptr` and `indices` are the usual CSR arrays over both edge
    directions; `indices[indptr[v]:indptr[v+1]]` is the sorted neighbor list
    of v.  Two graphs constructed from the same edge set produce identical
    adjacency bytes.
    """

    __slots__ = ("indptr", "indices", "_max_degree")

    def __init__(self, indptr, indices):
        self.indptr = indptr
        self.indices = indices
        self._max_degree = None

    # -- construction -----------------------------------------------------

    @staticmethod
    def from_edges(n: int, edges) -> "Graph":
        """Build from an iterable of (u, v) pairs.

        Duplicate pairs and reversed duplicates collapse to one edge;
        self-loops are rejected.
        """
        if n < 0:
            raise InputError("vertex count must be >= 0")
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                       dtype=np.int64)
        if e.size == 0:
            e = e.reshape(0, 2)
        if e.ndim != 2 or e.shape[1] != 2:
            raise InputError("edges must be (u, v) pairs")
        if e.size:
            if e.min() < 0 or e.max() >= n:
                raise InputError(f"edge endpoint out of range [0, {n})")
            if np.any(e[:, 0] == e[:, 1]):
                raise InputError("self-loops are not allowed")
            lo = np.minimum(e[:, 0], e[:, 1])
            hi = np.maximum(e[:, 0], e[:, 1])
            e = np.unique(np.stack([lo, hi], axis=1), axis=0)
        src = np.concatenate([e[:, 0], e[:, 1]])
        dst = np.concatenate([e[:, 1], e[:, 0]])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        np.cumsum(indptr, out=indptr)
        return Graph(indptr, dst.astype(np.int32))

    # -- basic accessors ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    @property
    def max_degree(self) -> int:
        if self._max_degree is None:
            self._max_degree = int(np.diff(self.indptr).max()) if self.n else 0
        return self._max_degree

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def edge_list(self) -> np.ndarray:
        """Canonical edge list: (u, v) with u < v, lexicographically sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
        dst = self.indices.astype(np.int64)
        keep = src < dst
        return np.stack([src[keep], dst[keep]], axis=1)

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def adjacency_bytes(self) -> bytes:
        return self.indptr.tobytes() + self.indices.tobytes()

    def __eq__(self, other):
        return (isinstance(other, Graph)
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __hash__(self):
        return hash((self.n, len(self.indices)))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    # -- neighbor gathering (vectorized) ------------------------------------

    def gather_neighbors(self, frontier: np.ndarray) -> np.ndarray:
        """Concatenated neighbor lists of `frontier`, with repetitions."""
        if frontier.size == 0:
            return np.empty(0, dtype=np.int32)
        starts = self.indptr[frontier]
        counts = self.indptr[frontier + 1] - starts
        total = int(counts.sum())
        if total == 0:
            return np.empty(0, dtype=np.int32)
        # flat index trick: ranges [starts_i, starts_i + counts_i) laid end to end
        offs = np.repeat(np.cumsum(counts) - counts, counts)
        flat = np.arange(total, dtype=np.int64) - offs + np.repeat(starts, counts)
        return self.indices[flat]


class BfsRoot:
    """BFS rooted at `root`: distances, lexicographic parents, sorted levels.

    parent[v] is the smallest-id neighbor of v one level closer to the root
    (-1 for the root and unreachable vertices).  This makes the parent chain,
    and hence every projection below, deterministic.
    """

    __slots__ = ("graph", "root", "dist", "parent", "levels")

    def __init__(self, graph, root, dist, parent, levels):
        self.graph = graph
        self.root = root
        self.dist = dist
        self.parent = parent
        self.levels = levels

    @property
    def radius(self) -> int:
        return len(self.levels) - 1

    def sphere(self, r: int) -> np.ndarray:
        """S_r: vertices at distance exactly r (sorted)."""
        if r < 0:
            raise InputError("radius must be >= 0")
        if r >= len(self.levels):
            return np.empty(0, dtype=np.int64)
        return self.levels[r]

    def ball(self, r: int) -> np.ndarray:
        """B_r: vertices at distance <= r (sorted)."""
        if r < 0:
            raise InputError("radius must be >= 0")
        reach = self.dist >= 0
        return np.nonzero(reach & (self.dist <= r))[0]


def bfs_distances(g: Graph, sources, cap: int | None = None) -> np.ndarray:
    """Multi-source BFS distance array (-1 = unreached).  `cap` stops early."""
    dist = np.full(g.n, -1, dtype=np.int64)
    frontier = as_vertex_set(sources, g.n)
    dist[frontier] = 0
    r = 0
    while frontier.size and (cap is None or r < cap):
        cand = g.gather_neighbors(frontier)
        if cand.size == 0:
            break
        cand = np.unique(cand)
        cand = cand[dist[cand] < 0]
        if cand.size == 0:
            break
        r += 1
        dist[cand] = r
        frontier = cand.astype(np.int64)
    return dist


def bfs_root(g: Graph, root: int) -> BfsRoot:
    """Root the graph at `root` with lexicographic-minimum parents."""
    if not (0 <= root < g.n):
        raise InputError(f"root {root} out of range")
    dist = bfs_distances(g, [root])
    parent = np.full(g.n, -1, dtype=np.int64)
    # parent[v] = min neighbor one level closer; one vectorized pass over arcs
    src = np.repeat(np.arange(g.n, dtype=np.int64), np.diff(g.indptr))
    dst = g.indices.astype(np.int64)
    mask = (dist[src] >= 0) & (dist[dst] == dist[src] + 1)
    if mask.any():
        big = np.full(g.n, g.n, dtype=np.int64)
        np.minimum.at(big, dst[mask], src[mask])
        has = big < g.n
        parent[has] = big[has]
    rmax = int(dist.max())
    levels = []
    for r in range(rmax + 1):
        levels.append(np.nonzero(dist == r)[0])
    return BfsRoot(g, root, dist, parent, levels)


def project(b: BfsRoot, R: int, y: int) -> int:
    """pi_R(y): the parent-chain ancestor of y at distance exactly R.

    Composition holds by construction: projecting to R2 and then to R1 <= R2
    lands on the same vertex as projecting straight to R1.
    """
    if not (0 <= y < b.graph.n) or b.dist[y] < 0:
        raise InputError(f"vertex {y} not reachable from root")
    if R < 0 or b.dist[y] < R:
        raise DomainError(f"vertex {y} at distance {b.dist[y]} < R={R}")
    v = y
    while b.dist[v] > R:
        v = int(b.parent[v])
    return v


def project_many(b: BfsRoot, R: int, ys) -> np.ndarray:
    """Projection of a vertex set; sorted unique image."""
    ys = as_vertex_set(ys, b.graph.n)
    return np.unique(np.array([project(b, R, int(y)) for y in ys], dtype=np.int64))


def neighborhood(g: Graph, s, d: int) -> np.ndarray:
    """Closed d-neighborhood of the vertex set `s` (sorted)."""
    if d < 0:
        raise InputError("neighborhood depth must be >= 0")
    dist = bfs_distances(g, s, cap=d)
    return np.nonzero((dist >= 0) & (dist <= d))[0]


def connected_components(g: Graph) -> list[np.ndarray]:
    """Components as sorted vertex arrays, ordered by smallest member."""
    seen = np.zeros(g.n, dtype=bool)
    comps = []
    for v in range(g.n):
        if seen[v]:
            continue
        members = [v]
        seen[v] = True
        frontier = np.array([v], dtype=np.int64)
        while frontier.size:
            cand = np.unique(g.gather_neighbors(frontier)).astype(np.int64)
            cand = cand[~seen[cand]]
            if cand.size == 0:
                break
            seen[cand] = True
            members.append(cand)
            frontier = cand
        comps.append(np.unique(np.concatenate([np.atleast_1d(np.asarray(x, dtype=np.int64))
                                               for x in members])))
    return comps


def component_sizes(g: Graph) -> np.ndarray:
    """Sizes of connected components (unordered count array)."""
    return np.array([len(c) for c in connected_components(g)], dtype=np.int64)


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return int((bfs_distances(g, [0]) >= 0).sum()) == g.n


class InducedSubgraph:
    """An induced subgraph together with its vertex relabeling.

    `vertices[i]` is the ambient id of local vertex i; `to_local` maps
    ambient ids back (-1 outside).
    """

    __slots__ = ("graph", "vertices", "to_local")

    def __init__(self, graph, vertices, to_local):
        self.graph = graph
        self.vertices = vertices
        self.to_local = to_local


def induced_subgraph(g: Graph, s) -> InducedSubgraph:
    """Induced subgraph on `s`, relabeled to 0..|s|-1 in sorted-id order."""
    s = as_vertex_set(s, g.n)
    to_local = np.full(g.n, -1, dtype=np.int64)
    to_local[s] = np.arange(len(s), dtype=np.int64)
    src = np.repeat(np.arange(g.n, dtype=np.int64), np.diff(g.indptr))
    dst = g.indices.astype(np.int64)
    keep = (to_local[src] >= 0) & (to_local[dst] >= 0) & (src < dst)
    edges = np.stack([to_local[src[keep]], to_local[dst[keep]]], axis=1)
    return InducedSubgraph(Graph.from_edges(len(s), edges), s, to_local)


def ecc_endpoint(g: Graph, start: int = 0) -> int:
    """A pseudo-diameter endpoint: farthest vertex from `start` (lex ties)."""
    dist = bfs_distances(g, [start])
    far = int(dist.max())
    return int(np.nonzero(dist == far)[0][0])
