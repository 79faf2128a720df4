"""Graph generators: grids, regular trees, {p,q} tessellation balls, and
random regular graphs.

The tessellation builder grows the combinatorial ball of the order-q tiling
by p-gons layer by layer, closing every vertex of a layer (giving it all q
faces) before moving outward.  Rotation systems are kept explicitly: each
vertex stores its incident edges in counterclockwise order, and faces are
walked side by side, reusing existing edges wherever the rotation system
already provides them.  Vertex ids are assigned in construction order, so a
given (p, q, radius) always yields byte-identical adjacency.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
import random

import numpy as np

from .errors import GenerationError, InputError, ResourceError
from .graph import BfsRoot, Graph, bfs_root


def grid(a: int, b: int) -> Graph:
    """The a x b grid graph; vertex (i, j) has id i*b + j."""
    if a < 1 or b < 1:
        raise InputError("grid sides must be >= 1")
    edges = []
    for i in range(a):
        for j in range(b):
            v = i * b + j
            if j + 1 < b:
                edges.append((v, v + 1))
            if i + 1 < a:
                edges.append((v, v + b))
    return Graph.from_edges(a * b, edges)


def regular_tree(degree: int, depth: int) -> Graph:
    """Ball of radius `depth` in the infinite degree-regular tree.

    The root (id 0) has `degree` children; every other internal vertex has
    degree - 1 children.  Ids follow BFS order.
    """
    if degree < 2:
        raise InputError("tree degree must be >= 2")
    if depth < 0:
        raise InputError("tree depth must be >= 0")
    edges = []
    next_id = 1
    frontier = [0]
    for layer in range(depth):
        new_frontier = []
        for v in frontier:
            k = degree if layer == 0 else degree - 1
            for _ in range(k):
                edges.append((v, next_id))
                new_frontier.append(next_id)
                next_id += 1
        frontier = new_frontier
    return Graph.from_edges(next_id, edges)


def random_regular(n: int, degree: int, seed: int, max_attempts: int = 1000) -> Graph:
    """Connected simple d-regular graph via the configuration model.

    Pairs stubs uniformly and rejects pairings with loops, parallel edges,
    or a disconnected result.  Deterministic per seed.
    """
    if n < 1 or degree < 0:
        raise InputError("need n >= 1 and degree >= 0")
    if (n * degree) % 2 == 1:
        raise GenerationError(f"no {degree}-regular graph on {n} vertices: odd stub count")
    if degree >= n:
        raise GenerationError(f"no simple {degree}-regular graph on {n} vertices")
    rng = random.Random(seed)
    stubs = [v for v in range(n) for _ in range(degree)]
    for _ in range(max_attempts):
        rng.shuffle(stubs)
        seen = set()
        ok = True
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v or (min(u, v), max(u, v)) in seen:
                ok = False
                break
            seen.add((min(u, v), max(u, v)))
        if not ok:
            continue
        g = Graph.from_edges(n, list(seen))
        from .graph import is_connected
        if degree > 0 and not is_connected(g):
            continue
        return g
    raise GenerationError(
        f"rejection budget exhausted for random_regular(n={n}, degree={degree}, seed={seed})")


@dataclass(frozen=True)
class TessellationSpec:
    """Schlafli symbol {p, q}: p-gon faces, q around each vertex.

    Euclidean and hyperbolic cases only: (p-2)(q-2) >= 4.
    """
    p: int
    q: int

    def __post_init__(self):
        if self.p < 3 or self.q < 3:
            raise InputError("need p >= 3 and q >= 3")
        if (self.p - 2) * (self.q - 2) < 4:
            raise InputError(f"{{{self.p},{self.q}}} is spherical; need (p-2)(q-2) >= 4")

    @property
    def hyperbolic(self) -> bool:
        return (self.p - 2) * (self.q - 2) > 4


class _TessellationBuilder:
    """Half-edge growth state for a {p,q} disk.

    nbr[v]   -- incident edges of v in CCW order (a contiguous arc while v is
                on the boundary; a full cycle once v has q edges)
    mask[v]  -- bit i set iff the face corner between nbr[v][i] and its CCW
                successor exists.  Prepending an edge shifts the mask.
    faces[v] -- number of face corners at v (== q once v is closed)
    """

    def __init__(self, spec: TessellationSpec, budget: int):
        self.p = spec.p
        self.q = spec.q
        self.budget = budget
        self.nbr: list[list[int]] = [[]]
        self.mask: list[int] = [0]
        self.faces: list[int] = [0]
        self.layer_done = -1

    def _new_vertex(self, cur: int) -> int:
        if len(self.nbr) >= self.budget:
            raise ResourceError(
                f"tessellation budget of {self.budget} vertices exceeded "
                f"(last completed layer: {self.layer_done})",
                layer_reached=self.layer_done)
        if len(self.nbr[cur]) >= self.q:
            raise AssertionError("edge creation at a saturated vertex")
        x = len(self.nbr)
        self.nbr.append([cur])
        self.mask.append(0)
        self.faces.append(0)
        self.nbr[cur].insert(0, x)
        self.mask[cur] <<= 1
        return x

    def _close_face(self, u: int, b: int) -> None:
        """Create the p-gon on the left of the directed edge (u -> b).

        Existing edges are followed as far as possible in both directions
        around the face (forward from b, backward from u); only the true gap
        is bridged with new vertices.  This matters for the last corner of a
        fan, where the face must close onto structure on both sides.
        """
        p, q = self.p, self.q
        # forward: next side exits via the rotation predecessor of the arrival
        fwd = [u, b]
        prev, cur = u, b
        while len(fwd) - 1 < p:
            arc = self.nbr[cur]
            i = arc.index(prev)
            if i > 0 or len(arc) == q:
                nxt = arc[i - 1]  # i == 0 at a saturated vertex wraps to arc[-1]
            else:
                break
            prev, cur = cur, nxt
            fwd.append(nxt)
        if len(fwd) - 1 == p:
            if fwd[-1] != u:
                raise AssertionError("face walk went p sides without closing")
            verts = fwd[:-1]
            self._mark_face(verts)
            return
        # backward: previous side enters via the rotation successor of the exit
        bwd = [u]
        cur, exit_edge = u, b
        while (len(fwd) - 1) + (len(bwd) - 1) < p - 1:
            arc = self.nbr[cur]
            i = arc.index(exit_edge)
            if i + 1 < len(arc):
                z = arc[i + 1]
            elif len(arc) == q:
                z = arc[0]
            else:
                break
            bwd.append(z)
            cur, exit_edge = z, cur
        need = p - (len(fwd) - 1) - (len(bwd) - 1)  # sides still missing, >= 1
        cur = fwd[-1]
        mids = []
        for _ in range(need - 1):
            x = self._new_vertex(cur)
            mids.append(x)
            cur = x
        # bridging edge cur -> bwd[-1]
        z = bwd[-1]
        if len(self.nbr[cur]) >= q:
            raise AssertionError("bridge start is saturated")
        self.nbr[cur].insert(0, z)
        self.mask[cur] <<= 1
        arcz = self.nbr[z]
        ex = bwd[-2] if len(bwd) >= 2 else b
        if arcz.index(ex) != len(arcz) - 1 or len(arcz) >= q:
            raise AssertionError("bridge slot at the far vertex is occupied")
        arcz.append(cur)
        verts = fwd + mids + list(reversed(bwd))[:-1]
        self._mark_face(verts)

    def _mark_face(self, verts: list[int]) -> None:
        """Record the face: side (v_k -> v_{k+1}) fills the corner CCW-after
        the exit edge at v_k."""
        p = self.p
        if len(verts) != p:
            raise AssertionError("face does not have p sides")
        for k in range(p):
            v = verts[k]
            e = verts[(k + 1) % p]
            idx = self.nbr[v].index(e)
            bit = 1 << idx
            if self.mask[v] & bit:
                raise AssertionError("face corner filled twice")
            self.mask[v] |= bit
            self.faces[v] += 1

    def _pick_start(self, v: int) -> int:
        """Choose the edge whose CCW-after corner to fill next: an empty
        corner adjacent to a filled one, so each new face glues on."""
        arc = self.nbr[v]
        L = len(arc)
        if self.mask[v] == 0:
            return arc[-1]
        sat = L == self.q
        for i in range(L):
            if self.mask[v] >> i & 1:
                continue
            before = (i - 1) % L if (i > 0 or sat) else None
            after = i + 1 if i + 1 < L else (0 if sat else None)
            if before is not None and self.mask[v] >> before & 1:
                return arc[i]
            if after is not None and self.mask[v] >> after & 1:
                return arc[i]
        raise AssertionError("no closable corner adjacent to the built fan")

    def close_vertex(self, v: int) -> None:
        if not self.nbr[v]:
            # bare root: bootstrap the first edge
            self._new_vertex(v)
            # _new_vertex prepends at v and shifts an empty mask; harmless
        while self.faces[v] < self.q:
            self._close_face(v, self._pick_start(v))

    def distances(self) -> list[int]:
        dist = [-1] * len(self.nbr)
        dist[0] = 0
        dq = deque([0])
        while dq:
            v = dq.popleft()
            for w in self.nbr[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    dq.append(w)
        return dist

    def grow(self, radius: int) -> None:
        for d in range(radius + 1):
            dist = self.distances()
            layer = [v for v in range(len(self.nbr)) if dist[v] == d]
            for v in layer:
                self.close_vertex(v)
            self.layer_done = d


@dataclass
class TessellationDisk:
    """A tessellation ball plus the rotation system needed to walk lines.

    rotations[v] lists v's tiling neighbors in CCW cyclic order; entries are
    -1 where the neighbor fell outside the truncation radius.  Every kept
    vertex was fully closed before truncation, so each rotation has exactly q
    slots and the cyclic order is the tiling's.
    """
    spec: TessellationSpec
    radius: int
    graph: Graph
    root: BfsRoot
    rotations: list[list[int]]


def tessellation_disk(spec: TessellationSpec, radius: int,
                      budget: int = 2_000_000) -> TessellationDisk:
    """Build the radius-`radius` ball of the {p,q} tiling with rotations.

    Every vertex within the radius carries its full tiling neighborhood
    before truncation, so the returned graph is exactly the induced ball:
    interior vertices have degree q and distances from the root agree with
    the infinite tiling.  Raises ResourceError (with the last completed
    layer) if the vertex budget is exceeded.
    """
    if radius < 0:
        raise InputError("radius must be >= 0")
    if radius == 0:
        g = Graph.from_edges(1, [])
        return TessellationDisk(spec, 0, g, bfs_root(g, 0), [[]])
    builder = _TessellationBuilder(spec, budget)
    builder.grow(radius)
    dist = builder.distances()
    keep = [v for v in range(len(builder.nbr)) if dist[v] <= radius]
    relabel = {v: i for i, v in enumerate(keep)}
    edges = []
    rotations = []
    for v in keep:
        rot = [relabel.get(w, -1) for w in builder.nbr[v]]
        rotations.append(rot)
        for w in rot:
            if w >= 0 and relabel[v] < w:
                edges.append((relabel[v], w))
    g = Graph.from_edges(len(keep), edges)
    return TessellationDisk(spec, radius, g, bfs_root(g, 0), rotations)


def tessellation_ball(spec: TessellationSpec, radius: int,
                      budget: int = 2_000_000) -> tuple[Graph, BfsRoot]:
    """Combinatorial ball of the {p,q} tiling; see tessellation_disk."""
    disk = tessellation_disk(spec, radius, budget)
    return disk.graph, disk.root
