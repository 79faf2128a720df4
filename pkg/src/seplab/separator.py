"""Balanced vertex separators: exact values, certified bounds.

A cut set C of a graph G is beta-balanced when every connected component of
G - C has at most beta * |V(G)| vertices (the count includes C itself).  The
cut number is the minimum size of such a C; note that a single-vertex graph
has cut number 1, straight from the definition.

Three certificate kinds:

  exact -- a balanced cut set of minimum size (witness + exhaustive search)
  upper -- a balanced cut set, no minimality claim
  lower -- a family of vertex-disjoint a-b paths; its size bounds from below
           any vertex set whose removal separates a from b (Menger).  As a
           bound on the cut number this relies on the chosen pair being one
           that every balanced separator must split, which holds for the
           far-apart ball pairs used here on the graph families we target
           but is heuristic in general; the interval report keeps it honest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
import math

import numpy as np

from .errors import BudgetExceeded, InputError
from .flow import max_vertex_disjoint_paths, verify_paths
from .graph import Graph, as_vertex_set, bfs_distances, ecc_endpoint


def _as_beta(beta) -> Fraction:
    b = Fraction(beta)
    if not (0 < b < 1):
        raise InputError(f"beta must lie in (0, 1), got {beta}")
    return b


def _size_limit(n: int, beta: Fraction) -> int:
    # components must have size <= beta * n; sizes are integers
    return (beta.numerator * n) // beta.denominator


def _adj_lists(g: Graph) -> list[list[int]]:
    return [g.neighbors(v).tolist() for v in range(g.n)]


def _components_masked(adj, removed) -> list[list[int]]:
    """Components of the graph minus `removed` (bytearray flags)."""
    n = len(adj)
    seen = bytearray(n)
    comps = []
    for s in range(n):
        if seen[s] or removed[s]:
            continue
        stack = [s]
        seen[s] = 1
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if not seen[w] and not removed[w]:
                    seen[w] = 1
                    stack.append(w)
        comps.append(comp)
    return comps


def _is_balanced(adj, removed, limit: int) -> bool:
    """Like the component check in verify_separator, but bails early."""
    n = len(adj)
    seen = bytearray(n)
    for s in range(n):
        if seen[s] or removed[s]:
            continue
        stack = [s]
        seen[s] = 1
        size = 1
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if not seen[w] and not removed[w]:
                    seen[w] = 1
                    size += 1
                    if size > limit:
                        return False
                    stack.append(w)
    return True


def verify_separator(g: Graph, cut_set, beta=Fraction(1, 2)) -> tuple[bool, Fraction]:
    """Check balance of a cut set.

    Returns (valid, largest component size / |V|).  The denominator counts
    all of V including the cut set.
    """
    beta = _as_beta(beta)
    c = as_vertex_set(cut_set, g.n)
    if g.n == 0:
        return True, Fraction(0)
    removed = bytearray(g.n)
    for v in c:
        removed[v] = 1
    comps = _components_masked(_adj_lists(g), removed)
    biggest = max((len(cc) for cc in comps), default=0)
    return biggest <= _size_limit(g.n, beta), Fraction(biggest, g.n)


@dataclass
class SeparatorCertificate:
    """Self-contained evidence for one bound; see the module docstring."""
    kind: str                   # "exact" | "upper" | "lower"
    value: int
    beta: Fraction
    method: str
    cut_set: list[int] | None = None
    region_a: list[int] | None = None
    region_b: list[int] | None = None
    paths: list[list[int]] | None = None
    exhausted: bool = False

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "value": self.value,
             "beta": f"{self.beta.numerator}/{self.beta.denominator}",
             "method": self.method}
        if self.cut_set is not None:
            d["cut_set"] = list(map(int, self.cut_set))
        if self.paths is not None:
            d["region_a"] = list(map(int, self.region_a))
            d["region_b"] = list(map(int, self.region_b))
            d["paths"] = [list(map(int, p)) for p in self.paths]
        if self.exhausted:
            d["exhausted"] = True
        return d

    @staticmethod
    def from_dict(d: dict) -> "SeparatorCertificate":
        return SeparatorCertificate(
            kind=d["kind"], value=d["value"], beta=Fraction(d["beta"]),
            method=d.get("method", "?"), cut_set=d.get("cut_set"),
            region_a=d.get("region_a"), region_b=d.get("region_b"),
            paths=d.get("paths"), exhausted=d.get("exhausted", False))


def verify_certificate(g: Graph, cert: SeparatorCertificate) -> bool:
    """Re-check a certificate against the graph alone."""
    if cert.kind in ("exact", "upper"):
        if cert.cut_set is None or len(cert.cut_set) != cert.value:
            return False
        ok, _ = verify_separator(g, cert.cut_set, cert.beta)
        return ok
    if cert.kind == "lower":
        if cert.paths is None or len(cert.paths) != cert.value:
            return False
        return verify_paths(g, cert.region_a, cert.region_b, cert.paths)
    return False


# ---------------------------------------------------------------------------
# exact search
# ---------------------------------------------------------------------------

def cut_exact_subsets(g: Graph, beta=Fraction(1, 2), max_n: int = 20) -> SeparatorCertificate:
    """Reference oracle: plain subset enumeration in size-then-lex order.

    No pruning beyond the balance test itself; intended for cross-checking
    the branch-and-bound solver on small graphs.
    """
    beta = _as_beta(beta)
    n = g.n
    if n > max_n:
        raise InputError(f"subset oracle capped at {max_n} vertices, got {n}")
    adj = _adj_lists(g)
    limit = _size_limit(n, beta)
    removed = bytearray(n)
    for k in range(n + 1):
        for cand in combinations(range(n), k):
            for v in cand:
                removed[v] = 1
            comps = _components_masked(adj, removed)
            ok = all(len(cc) <= limit for cc in comps)
            for v in cand:
                removed[v] = 0
            if ok:
                return SeparatorCertificate(
                    kind="exact", value=k, beta=beta, method="subset-oracle",
                    cut_set=list(cand))
    raise AssertionError("removing all vertices is always balanced")


def cut_exact(g: Graph, beta=Fraction(1, 2),
              node_budget: int = 5_000_000) -> SeparatorCertificate:
    """Minimum balanced cut by iterative deepening.

    Searches cut sets in size-then-lexicographic order, so the witness is
    the lexicographically smallest among the minimum ones.  Pruning: once a
    partial choice is fixed, any remaining pick must land in a component
    that is still oversized (a pick in a balanced component could be dropped,
    contradicting minimality at this depth), and each oversized component
    needs at least one remaining pick.

    If the node budget runs out, the best known upper bound is returned as a
    kind="upper" certificate flagged `exhausted`.
    """
    beta = _as_beta(beta)
    n = g.n
    if n == 0:
        return SeparatorCertificate(kind="exact", value=0, beta=beta,
                                    method="branch-and-bound", cut_set=[])
    adj = _adj_lists(g)
    limit = _size_limit(n, beta)
    removed = bytearray(n)
    budget = [node_budget]

    def oversized(start: int):
        """Oversized components, or None to prune this branch."""
        comps = _components_masked(adj, removed)
        over = [cc for cc in comps if len(cc) > limit]
        for cc in over:
            if not any(v >= start for v in cc):
                return None  # cannot be fixed by any allowed pick
        return over

    def dfs(k: int, start: int, chosen: list[int]):
        budget[0] -= 1
        if budget[0] < 0:
            raise BudgetExceeded("cut_exact node budget exhausted")
        over = oversized(start)
        if over is None:
            return None
        if not over:
            return list(chosen)  # only reachable when len(chosen) == k
        r = k - len(chosen)
        if len(over) > r:
            return None
        allowed = sorted(v for cc in over for v in cc if v >= start)
        for v in allowed:
            removed[v] = 1
            chosen.append(v)
            got = dfs(k, v + 1, chosen)
            chosen.pop()
            removed[v] = 0
            if got is not None:
                return got
        return None

    try:
        for k in range(n + 1):
            got = dfs(k, 0, [])
            if got is not None:
                return SeparatorCertificate(
                    kind="exact", value=k, beta=beta,
                    method="branch-and-bound", cut_set=sorted(got))
    except BudgetExceeded:
        fallback = cut_upper(g, beta, strategy="greedy-refine")
        return SeparatorCertificate(
            kind="upper", value=fallback.value, beta=beta,
            method=fallback.method + "+budget-exhausted",
            cut_set=fallback.cut_set, exhausted=True)
    raise AssertionError("removing all vertices is always balanced")


# ---------------------------------------------------------------------------
# upper bounds
# ---------------------------------------------------------------------------

def greedy_refine(g: Graph, cut_set, beta=Fraction(1, 2)) -> list[int]:
    """Drop redundant vertices from a balanced cut set until minimal.

    Scans in ascending id, repeating until a full pass removes nothing.
    The input must already be balanced.
    """
    beta = _as_beta(beta)
    adj = _adj_lists(g)
    limit = _size_limit(g.n, beta)
    removed = bytearray(g.n)
    cur = sorted(int(v) for v in as_vertex_set(cut_set, g.n))
    for v in cur:
        removed[v] = 1
    changed = True
    while changed:
        changed = False
        for v in list(cur):
            removed[v] = 0
            if _is_balanced(adj, removed, limit):
                cur.remove(v)
                changed = True
            else:
                removed[v] = 1
    return cur


def _trivial_cut(g: Graph, beta: Fraction) -> list[int]:
    # removing everything but a size-limit suffix is always balanced
    keep = _size_limit(g.n, beta)
    return list(range(g.n - keep))


def _tree_centroid(g: Graph) -> int | None:
    """Centroid of a connected tree: removal leaves components <= n/2."""
    n = g.n
    if n == 0 or g.m != n - 1:
        return None
    # BFS order from 0 doubles as a connectivity check
    dist = bfs_distances(g, [0])
    if (dist < 0).any():
        return None
    order = np.argsort(dist, kind="stable")
    parent = np.full(n, -1, dtype=np.int64)
    size = np.ones(n, dtype=np.int64)
    childmax = np.zeros(n, dtype=np.int64)
    for v in order[1:]:
        nb = g.neighbors(v)
        parent[v] = nb[dist[nb] == dist[v] - 1][0]
    for v in order[:0:-1]:
        p = parent[v]
        size[p] += size[v]
        if size[v] > childmax[p]:
            childmax[p] = size[v]
    worst = np.maximum(n - size, childmax)
    return int(np.lexsort((np.arange(n), worst))[0])


def _sweep_candidates(g: Graph, order: np.ndarray, beta: Fraction) -> list[list[int]]:
    """Vertex separators from prefix cuts of a vertex ordering."""
    n = g.n
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    lo = max(1, int(n * (1 - float(beta)) * 0.8))
    hi = min(n - 1, int(n * float(beta)) + 1)
    if lo >= hi:
        lo, hi = max(1, n // 3), max(2, 2 * n // 3)
    ks = sorted(set(np.linspace(lo, hi, num=min(24, hi - lo + 1), dtype=int).tolist()))
    out = []
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(g.indptr))
    dst = g.indices.astype(np.int64)
    for k in ks:
        inside = pos < k
        small = inside if k <= n - k else ~inside
        boundary = np.unique(src[small[src] & ~small[dst]])
        out.append(boundary.tolist())
    return out


def _fiedler_vector(g: Graph, seed: int = 0) -> np.ndarray | None:
    n = g.n
    if n < 3:
        return None
    if n <= 512:
        dense = np.zeros((n, n))
        for v in range(n):
            nb = g.neighbors(v)
            dense[v, nb] = -1.0
            dense[v, v] = len(nb)
        w, vecs = np.linalg.eigh(dense)
        vec = vecs[:, 1]
    else:
        from scipy.sparse import csr_matrix
        from scipy.sparse.linalg import eigsh
        deg = np.diff(g.indptr).astype(np.float64)
        data = np.concatenate([np.full(len(g.indices), -1.0), deg])
        rows = np.concatenate([np.repeat(np.arange(n), np.diff(g.indptr)),
                               np.arange(n)])
        cols = np.concatenate([g.indices.astype(np.int64), np.arange(n)])
        lap = csr_matrix((data, (rows, cols)), shape=(n, n))
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(n)
        try:
            _, vecs = eigsh(lap, k=2, which="SA", v0=v0, maxiter=n * 40, tol=1e-7)
        except Exception:
            return None
        vec = vecs[:, 1]
    i = int(np.argmax(np.abs(vec)))
    if vec[i] < 0:
        vec = -vec
    return vec


def cut_upper(g: Graph, beta=Fraction(1, 2), strategy: str = "bfs-sweep",
              seed: int = 0) -> SeparatorCertificate:
    """Heuristic balanced cut set; always returns a valid certificate.

    strategy:
      "spectral"      second-Laplacian-eigenvector sweep, converted to a
                      vertex separator by taking the smaller side's boundary
      "bfs-sweep"     best sphere cut over a handful of BFS roots
      "greedy-refine" refinement of the trivial prefix cut
    Every strategy's candidates are greedily refined before the best is kept.
    """
    beta = _as_beta(beta)
    n = g.n
    if n == 0:
        return SeparatorCertificate(kind="upper", value=0, beta=beta,
                                    method=strategy, cut_set=[])
    candidates: list[list[int]] = []
    centroid = _tree_centroid(g)
    if centroid is not None:
        candidates.append([centroid])
    if strategy == "spectral":
        vec = _fiedler_vector(g, seed)
        if vec is not None:
            order = np.lexsort((np.arange(n), vec))
            candidates.extend(_sweep_candidates(g, order, beta))
    elif strategy == "bfs-sweep":
        roots = {0, ecc_endpoint(g, 0)}
        roots.add(ecc_endpoint(g, max(roots)))
        roots.add(int(np.argmax(np.diff(g.indptr))))
        limit = _size_limit(n, beta)
        for root in sorted(roots):
            dist = bfs_distances(g, [root])
            rmax = int(dist.max())
            inner = 0
            for r in range(1, rmax + 1):
                sphere = np.nonzero(dist == r - 1)[0]
                inner += len(sphere)
                shell = np.nonzero(dist == r)[0]
                outer = n - inner - len(shell)
                if inner <= limit and outer <= limit:
                    candidates.append(shell.tolist())
    elif strategy == "greedy-refine":
        candidates.append(_trivial_cut(g, beta))
    else:
        raise InputError(f"unknown upper-bound strategy {strategy!r}")

    best: list[int] | None = None
    for cand in candidates:
        ok, _ = verify_separator(g, cand, beta)
        if not ok:
            continue
        if best is not None and len(cand) >= len(best) + 8:
            continue  # refinement will not close a gap that large cheaply
        refined = greedy_refine(g, cand, beta)
        if best is None or len(refined) < len(best):
            best = refined
    if best is None:
        best = greedy_refine(g, _trivial_cut(g, beta), beta)
    return SeparatorCertificate(kind="upper", value=len(best), beta=beta,
                                method=strategy, cut_set=sorted(best))


# ---------------------------------------------------------------------------
# lower bounds
# ---------------------------------------------------------------------------

def cut_lower_flow(g: Graph, a, b, beta=Fraction(1, 2)) -> SeparatorCertificate:
    """Menger certificate: vertex-disjoint a-b path packing.

    The count bounds from below the size of every vertex set whose removal
    leaves no surviving a-b path (such a set may contain a/b vertices).
    """
    beta = _as_beta(beta)
    count, paths = max_vertex_disjoint_paths(g, a, b)
    cert = SeparatorCertificate(
        kind="lower", value=count, beta=beta, method="flow",
        region_a=list(map(int, as_vertex_set(a, g.n))),
        region_b=list(map(int, as_vertex_set(b, g.n))),
        paths=paths)
    if not verify_paths(g, cert.region_a, cert.region_b, paths):
        raise AssertionError("flow produced an invalid path family")
    return cert


def _grow_disjoint_balls(g: Graph, y: int, z: int, target: int):
    """Balls around y and z grown a layer at a time while staying disjoint."""
    dy = bfs_distances(g, [y])
    dz = bfs_distances(g, [z])
    dyz = dy[z]
    if dyz < 2:
        return None
    ra = rb = 0
    def size(d, r):
        return int(((d >= 0) & (d <= r)).sum())
    while ra + rb + 2 <= dyz and (size(dy, ra) < target or size(dz, rb) < target):
        if size(dy, ra) <= size(dz, rb):
            ra += 1
        else:
            rb += 1
    while ra + rb >= dyz:  # back off any accidental overlap
        if ra >= rb:
            ra -= 1
        else:
            rb -= 1
    a = np.nonzero((dy >= 0) & (dy <= ra))[0]
    b = np.nonzero((dz >= 0) & (dz <= rb))[0]
    if len(a) < 2 or len(b) < 2 or np.intersect1d(a, b).size:
        return None
    return a, b


def _flow_pair_portfolio(g: Graph, beta: Fraction) -> list[tuple[np.ndarray, np.ndarray]]:
    n = g.n
    if n < 4:
        return []
    target = max(2, math.ceil(n * float(1 - beta) / 2))
    y = ecc_endpoint(g, 0)
    z = ecc_endpoint(g, y)
    pairs = []
    for (s, t) in [(y, z), (0, y)]:
        if s == t:
            continue
        got = _grow_disjoint_balls(g, s, t, target)
        if got is not None:
            pairs.append(got)
    return pairs


# ---------------------------------------------------------------------------
# combined interval
# ---------------------------------------------------------------------------

@dataclass
class CutBounds:
    lower: int
    upper: int
    certificates: list[SeparatorCertificate] = field(default_factory=list)
    note: str = ""

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "note": self.note,
                "certificates": [c.to_dict() for c in self.certificates]}


def cut_bounds(g: Graph, beta=Fraction(1, 2), *, exact_threshold: int = 12,
               strategies=("bfs-sweep", "spectral", "greedy-refine"),
               seed: int = 0, node_budget: int = 2_000_000) -> CutBounds:
    """Certified interval around the cut number.

    Small graphs (n <= exact_threshold) are solved exactly.  Otherwise the
    upper bound is the best strategy result and the lower bound is the best
    of the trivial bound and a portfolio of far-apart ball-pair flows; a
    flow value above the upper bound means the pair was a poor proxy for
    balanced separation and is clamped, with a note.
    """
    beta = _as_beta(beta)
    n = g.n
    if n <= exact_threshold:
        try:
            cert = cut_exact(g, beta, node_budget=node_budget)
        except BudgetExceeded:
            cert = None
        if cert is not None and cert.kind == "exact":
            return CutBounds(lower=cert.value, upper=cert.value, certificates=[cert])
    certs: list[SeparatorCertificate] = []
    upper_cert = None
    skip_heavy = n > 200_000
    for strat in strategies:
        if strat == "greedy-refine" and (n > 5000 or skip_heavy):
            continue
        c = cut_upper(g, beta, strategy=strat, seed=seed)
        certs.append(c)
        if upper_cert is None or c.value < upper_cert.value:
            upper_cert = c
    assert upper_cert is not None
    ok, frac = verify_separator(g, [], beta)
    lower = 0 if ok else 1
    note = ""
    for a, b in _flow_pair_portfolio(g, beta):
        c = cut_lower_flow(g, a, b, beta)
        c.method = "flow:balls"
        certs.append(c)
        if c.value > lower:
            lower = c.value
    if lower > upper_cert.value:
        note = f"flow bound {lower} exceeded upper bound; clamped"
        lower = upper_cert.value
    return CutBounds(lower=lower, upper=upper_cert.value, certificates=certs, note=note)
