"""Sphere neighborhoods, shadows, sectors, and projected separators.

Everything here happens inside a rooted ball (a BfsRoot).  Fix a radius R:

  sphere graph   induced graph on the delta-neighborhood (S_R)_delta
  shadow of x    all vertices at distance >= R whose parent chain passes
                 through x in S_R
  annulus A(R)   vertices at distance in (2R, 3R]
  sector of x    shadow clipped to the annulus

The connectivity width delta_hat is the smallest delta making every tested
sphere neighborhood connected; on tessellations of the hyperbolic plane a
small uniform value exists, on trees no value works (spheres shatter) and
the search reports the failure.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DeltaConnectivityError, InputError
from .graph import (BfsRoot, Graph, InducedSubgraph, as_vertex_set,
                    bfs_distances, induced_subgraph, is_connected,
                    neighborhood)
from .separator import CutBounds, cut_bounds


def _project_all(b: BfsRoot, R: int, members: np.ndarray) -> np.ndarray:
    """Parent-chain ancestor at distance R for every member (vectorized)."""
    cur = np.array(members, dtype=np.int64, copy=True)
    if cur.size and (b.dist[cur] < R).any():
        raise InputError(f"projection to {R} needs distance >= {R} everywhere")
    while True:
        m = b.dist[cur] > R
        if not m.any():
            return cur
        cur[m] = b.parent[cur[m]]


@dataclass
class SphereGraph:
    """Induced graph on the delta-neighborhood of the sphere S_R."""
    R: int
    delta: int
    vertices: np.ndarray            # ambient ids, sorted; local i -> vertices[i]
    graph: Graph
    to_local: np.ndarray            # ambient -> local id, -1 outside

    @property
    def id_map(self) -> np.ndarray:
        return self.vertices

    @property
    def connected(self) -> bool:
        return is_connected(self.graph)

    def local(self, ambient) -> np.ndarray:
        amb = as_vertex_set(ambient, len(self.to_local))
        loc = self.to_local[amb]
        if (loc < 0).any():
            raise InputError("vertex outside the sphere neighborhood")
        return loc


def sphere_graph(b: BfsRoot, R: int, delta: int) -> SphereGraph:
    """The graph induced on (S_R)_delta, with its ambient id maps."""
    if delta < 0:
        raise InputError("delta must be >= 0")
    if R < 0 or R + delta > b.radius:
        raise InputError(
            f"need R + delta <= ball radius ({b.radius}), got R={R} delta={delta}")
    thick = neighborhood(b.graph, b.sphere(R), delta)
    sub = induced_subgraph(b.graph, thick)
    return SphereGraph(R=R, delta=delta, vertices=sub.vertices,
                       graph=sub.graph, to_local=sub.to_local)


def delta_hat(b: BfsRoot, max_delta: int = 8, radii=None) -> int:
    """Smallest width delta <= max_delta whose sphere neighborhoods all connect.

    `radii` defaults to every radius that fits in the ball for the candidate
    width.  Raises DeltaConnectivityError naming the first radius that still
    fails at max_delta.
    """
    worst = None
    for d in range(1, max_delta + 1):
        rs = radii if radii is not None else range(1, b.radius - d + 1)
        bad = None
        for R in rs:
            if R + d > b.radius:
                raise InputError(f"radius {R} does not fit with delta={d}")
            if not sphere_graph(b, R, d).connected:
                bad = R
                break
        if bad is None:
            return d
        worst = bad
    raise DeltaConnectivityError(
        f"no delta <= {max_delta} connects all sphere neighborhoods "
        f"(radius {worst} still fails)", radius=worst, delta=max_delta)


@dataclass
class ShadowIndex:
    """Shadow and sector partitions over a rooted ball at base radius R."""
    root: BfsRoot
    R: int
    annulus: np.ndarray                      # dist in (2R, 3R], sorted
    projection: np.ndarray                   # ambient -> pi_R, -1 where dist < R
    shadow_of: dict[int, np.ndarray]
    sector_of: dict[int, np.ndarray]

    def shadow(self, x: int) -> np.ndarray:
        return self.shadow_of[int(x)]

    def sector(self, x: int) -> np.ndarray:
        return self.sector_of[int(x)]


def shadow_index(b: BfsRoot, R: int) -> ShadowIndex:
    """Group every vertex at distance >= R by its projection to S_R.

    Shadows partition {dist >= R}; sectors partition the annulus (2R, 3R].
    Requires the ball to contain the whole annulus.
    """
    if R < 0:
        raise InputError("R must be >= 0")
    if 3 * R > b.radius:
        raise InputError(f"need ball radius >= {3 * R}, have {b.radius}")
    dist = b.dist
    members = np.nonzero(dist >= R)[0]
    proj_at = _project_all(b, R, members)
    projection = np.full(b.graph.n, -1, dtype=np.int64)
    projection[members] = proj_at

    in_annulus = (dist > 2 * R) & (dist <= 3 * R)
    annulus = np.nonzero(in_annulus)[0]

    order = np.argsort(proj_at, kind="stable")
    sorted_members = members[order]
    sorted_proj = proj_at[order]
    xs, starts = np.unique(sorted_proj, return_index=True)
    bounds = np.append(starts, len(sorted_members))
    shadow_of: dict[int, np.ndarray] = {}
    sector_of: dict[int, np.ndarray] = {}
    for i, x in enumerate(xs):
        grp = np.sort(sorted_members[bounds[i]:bounds[i + 1]])
        shadow_of[int(x)] = grp
        sector_of[int(x)] = grp[in_annulus[grp]]
    for x in b.sphere(R):
        shadow_of.setdefault(int(x), np.empty(0, dtype=np.int64))
        sector_of.setdefault(int(x), np.empty(0, dtype=np.int64))
    return ShadowIndex(root=b, R=R, annulus=annulus, projection=projection,
                       shadow_of=shadow_of, sector_of=sector_of)


@dataclass
class SectorStats:
    """Growth base and sector-size distortion at one base radius.

    alpha_hat is fit from sphere sizes |S_r| over r in [R, 3R].  Sectors span
    the levels (2R, 3R], i.e. R to 2R levels beyond the base sphere, so their
    sizes scale like alpha^(2R); K_hat compares them against alpha_hat^R (and
    inherits a residual alpha^R drift on exponential families), K_hat_sector
    against alpha_hat^(2R) (the scale-matched constant, stable across R).
    """
    R: int
    alpha_hat: float
    K_hat: float
    K_hat_sector: float
    sector_sizes: dict[int, int]
    fit_r2: float
    warnings: list[str] = field(default_factory=list)


def sector_stats(idx: ShadowIndex) -> SectorStats:
    """Fit the growth base and measure sector-size spread; warns, never fails."""
    if len(idx.annulus) == 0:
        raise InputError("empty annulus: grow the ball or shrink R")
    b, R = idx.root, idx.R
    rs, logs = [], []
    for r in range(R, 3 * R + 1):
        s = len(b.sphere(r))
        if s > 0:
            rs.append(r)
            logs.append(math.log(s))
    notes: list[str] = []
    if len(rs) >= 2:
        coef = np.polyfit(rs, logs, 1)
        pred = np.polyval(coef, rs)
        ss_res = float(np.sum((np.array(logs) - pred) ** 2))
        ss_tot = float(np.sum((np.array(logs) - np.mean(logs)) ** 2))
        r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
        alpha = float(math.exp(coef[0]))
    else:
        alpha, r2 = 1.0, 0.0
        notes.append("too few populated spheres for a growth fit")
    if alpha <= 1.05:
        notes.append(f"sub-exponential growth (alpha_hat={alpha:.3f}); "
                     "sector statistics are only meaningful on exponential families")
        warnings.warn(notes[-1], RuntimeWarning, stacklevel=2)

    sizes = {x: len(sec) for x, sec in idx.sector_of.items()}
    k = k2 = 1.0
    scale, scale2 = alpha ** R, alpha ** (2 * R)
    for x, s in sizes.items():
        if s == 0:
            k = k2 = math.inf
            notes.append(f"empty sector at sphere vertex {x}")
            warnings.warn(notes[-1], RuntimeWarning, stacklevel=2)
            continue
        k = max(k, s / scale, scale / s)
        k2 = max(k2, s / scale2, scale2 / s)
    return SectorStats(R=R, alpha_hat=alpha, K_hat=k, K_hat_sector=k2,
                       sector_sizes=sizes, fit_r2=r2, warnings=notes)


@dataclass
class SphereSeparationRow:
    R: int
    sphere_size: int
    thick_size: int
    bounds: CutBounds


@dataclass
class SphereSeparationReport:
    delta: int
    beta: Fraction
    rows: list[SphereSeparationRow]

    @property
    def max_upper(self) -> int:
        return max(r.bounds.upper for r in self.rows)

    @property
    def upper_slope(self) -> float:
        """Least-squares slope of the upper bound against R."""
        if len(self.rows) < 2:
            return 0.0
        xs = [r.R for r in self.rows]
        ys = [r.bounds.upper for r in self.rows]
        return float(np.polyfit(xs, ys, 1)[0])


def bounded_sphere_separation_test(b: BfsRoot, delta: int, R_range,
                                   beta=Fraction(1, 2)) -> SphereSeparationReport:
    """Cut bounds of every sphere neighborhood across a radius range.

    A uniformly small max upper bound over growing R is the finite-scale
    signature of bounded sphere separation.
    """
    rows = []
    for R in R_range:
        sg = sphere_graph(b, R, delta)
        bounds = cut_bounds(sg.graph, beta)
        rows.append(SphereSeparationRow(R=R, sphere_size=len(b.sphere(R)),
                                        thick_size=sg.graph.n, bounds=bounds))
    if not rows:
        raise InputError("empty radius range")
    return SphereSeparationReport(delta=delta, beta=Fraction(beta), rows=rows)


@dataclass(frozen=True)
class WidthDefaults:
    """Width multipliers (in units of delta) used by the shadow machinery.

    shadow_width scales the sphere-ball in the crossing test below;
    image_width thickens projected separators; crowding_width is the spacing
    at which thick sectors become disjoint; bulk_width sizes the ball whose
    volume enters the balance target for annulus cuts.
    """
    shadow_width: int = 6
    image_width: int = 2
    crowding_width: int = 12
    bulk_width: int = 8

    def balance_beta(self, b: BfsRoot, delta: int, K: float) -> Fraction:
        """Balance target 1 / (4 |B(bulk_width*delta)|^3 ceil(K)^3)."""
        bulk = len(b.ball(self.bulk_width * delta))
        return Fraction(1, 4 * bulk ** 3 * max(1, math.ceil(K)) ** 3)


WIDTHS = WidthDefaults()


def p_set(b: BfsRoot, R: int, delta: int, annulus_cut,
          shadow_width: int = WIDTHS.shadow_width) -> np.ndarray:
    """Sphere vertices whose widened shadow meets the cut at every annulus level.

    x qualifies when, for every r in [2R, 3R], some cut vertex lies within
    delta of S_r and projects to within shadow_width*delta of x.  A small
    result relative to |S_R| is what makes projected separators cheap.
    """
    g = b.graph
    cut = as_vertex_set(annulus_cut, g.n)
    lo, hi = 2 * R, 3 * R
    if cut.size and not ((b.dist[cut] > lo) & (b.dist[cut] <= hi)).all():
        raise InputError("annulus_cut must lie in the annulus (2R, 3R]")
    sphere = b.sphere(R)
    if cut.size == 0 or sphere.size == 0:
        return np.empty(0, dtype=np.int64)
    wide = shadow_width * delta

    proj = _project_all(b, R, cut)
    # which x in S_R are within wide of each cut vertex's projection
    reach_cache: dict[int, np.ndarray] = {}
    covered: dict[int, set[int]] = {r: set() for r in range(lo, hi + 1)}
    for c, xc in zip(cut.tolist(), proj.tolist()):
        if xc not in reach_cache:
            dd = bfs_distances(g, [xc], cap=wide)
            near = np.nonzero((dd >= 0) & (dd <= wide))[0]
            reach_cache[xc] = near[b.dist[near] == R]
        # levels r with c in (S_r)_delta
        dd = bfs_distances(g, [c], cap=delta)
        seen = np.nonzero((dd >= 0) & (dd <= delta))[0]
        for r in np.unique(b.dist[seen]).tolist():
            if lo <= r <= hi:
                covered[r].update(reach_cache[xc].tolist())
    out = set(sphere.tolist())
    for r in range(lo, hi + 1):
        out &= covered[r]
        if not out:
            break
    return np.array(sorted(out), dtype=np.int64)


def project_separator(b: BfsRoot, R: int, Rp: int, p_set_at_Rp, delta: int,
                      image_width: int = WIDTHS.image_width) -> np.ndarray:
    """Project a sphere subset from radius Rp down to R and thicken it.

    The image under the parent-chain projection is widened by
    image_width*delta steps inside the sphere graph at R; returns ambient ids.
    """
    if not R < Rp:
        raise InputError(f"need R < Rp, got {R} >= {Rp}")
    pts = as_vertex_set(p_set_at_Rp, b.graph.n)
    if pts.size and not (b.dist[pts] == Rp).all():
        raise InputError(f"p_set must lie on the sphere at {Rp}")
    sg = sphere_graph(b, R, delta)
    if pts.size == 0:
        return np.empty(0, dtype=np.int64)
    image = np.unique(_project_all(b, R, pts))
    dd = bfs_distances(sg.graph, sg.local(image), cap=image_width * delta)
    thick = np.nonzero((dd >= 0) & (dd <= image_width * delta))[0]
    return np.sort(sg.vertices[thick])
