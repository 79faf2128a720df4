"""Sheets glued along geodesic lines and the attached-ball set X.

A sheet is a tessellation ball.  A line family picks combinatorial
geodesics inside the base sheet; for every family line that meets the inner
ball B_{R/3}, a fresh sheet ball of radius R/3 is glued onto the base ball
B_R along the matching line segment, rooted at the line vertex closest to
the base root.  The union is the set X whose volume stays comparable to
vol(B_R) while its balanced-separator cost is probed by flow experiments as
R grows.

Line walks use the rotation system of the tiling: with q even a line
continues through the opposite edge slot at each vertex; with q odd no
opposite slot exists and the walk alternates the two nearly-opposite
turns, tracing the zigzag that is geodesic in the tilings used here.
Every produced line is re-verified against BFS distances before use.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError, GenerationError, GeodesicError, InputError
from .generate import TessellationDisk, TessellationSpec, tessellation_disk
from .graph import Graph, BfsRoot, bfs_distances, bfs_root
from .profile import ProfileCurve, ProfilePoint
from .separator import cut_bounds, cut_lower_flow
from .spheres import shadow_index

LINE_FAMILY_KINDS = ("axis-orbit", "reflection-lines", "explicit")


@dataclass(frozen=True)
class LineFamily:
    """Declares how gluing lines are produced inside a sheet.

    axis-orbit: the perpendicular lines through every vertex of one axis
    line through the root (requires a quarter turn, q divisible by 4).
    reflection-lines: every maximal edge-line of the tiling.
    explicit: caller-supplied vertex sequences.
    """
    kind: str
    lines: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.kind not in LINE_FAMILY_KINDS:
            raise InputError(f"unknown line family kind {self.kind!r}; "
                             f"expected one of {LINE_FAMILY_KINDS}")
        if self.kind != "explicit" and self.lines:
            raise InputError("vertex sequences are only valid with kind='explicit'")


@dataclass(frozen=True)
class ComplexSpec:
    """A tiling together with the line family along which sheets glue."""
    tiling: TessellationSpec
    lines: LineFamily


@dataclass
class GeodesicLine:
    """A combinatorial geodesic: consecutive vertices adjacent, and the
    index gap of sampled pairs equals their graph distance."""
    vertices: np.ndarray
    label: str

    def __len__(self):
        return len(self.vertices)


def verify_geodesic(g: Graph, seq: np.ndarray, label: str,
                    max_sources: int = 8) -> None:
    """Raise GeodesicError naming `label` unless seq is a geodesic path in g.

    Adjacency of every consecutive pair is checked exactly; the distance
    condition dist(seq[i], seq[j]) == |i-j| is checked from up to
    max_sources evenly spaced source indices against all other indices.
    """
    L = len(seq)
    if L == 0:
        raise GeodesicError(f"{label}: empty vertex sequence", line_id=label)
    if len(set(int(v) for v in seq)) != L:
        raise GeodesicError(f"{label}: repeated vertex", line_id=label)
    for k in range(L - 1):
        if not g.has_edge(int(seq[k]), int(seq[k + 1])):
            raise GeodesicError(
                f"{label}: positions {k},{k + 1} not adjacent", line_id=label)
    if L <= 2:
        return
    n_src = min(max_sources, L) if g.n <= 200_000 else min(3, L)
    src_idx = sorted(set(int(round(t)) for t in np.linspace(0, L - 1, n_src)))
    for i in src_idx:
        dist = bfs_distances(g, [int(seq[i])], cap=L)
        got = dist[seq]
        want = np.abs(np.arange(L) - i)
        bad = np.nonzero(got != want)[0]
        if bad.size:
            j = int(bad[0])
            raise GeodesicError(
                f"{label}: dist(seq[{i}], seq[{j}]) = {int(got[j])}, "
                f"index gap {int(want[j])}", line_id=label)


# ---------------------------------------------------------------------------
# line walks over the rotation system
# ---------------------------------------------------------------------------

def _turn_offsets(q: int) -> tuple[int, ...]:
    # even q: straight through the opposite slot; odd q: alternate the two
    # nearly-opposite slots (zigzag)
    if q % 2 == 0:
        return (q // 2,)
    return ((q + 1) // 2, q // 2)


def _walk_dir(disk: TessellationDisk, u: int, v: int, phase: int,
              max_steps: int) -> list[int]:
    """Walk from the directed edge u->v applying the turn cycle; stops at
    the truncation boundary (a -1 rotation slot) or after max_steps."""
    turns = _turn_offsets(disk.spec.q)
    q = disk.spec.q
    out = [u, v]
    prev, cur = u, v
    for _ in range(max_steps):
        rot = disk.rotations[cur]
        try:
            i = rot.index(prev)
        except ValueError:
            raise GenerationError(
                f"rotation at vertex {cur} lacks neighbor {prev}") from None
        nxt = rot[(i + turns[phase % len(turns)]) % q]
        phase += 1
        if nxt < 0:
            break
        out.append(nxt)
        prev, cur = cur, nxt
    return out


def _full_line(disk: TessellationDisk, u: int, v: int, phase: int) -> list[int]:
    """Maximal line through the directed edge u->v (turn at v has `phase`).

    The reverse continuation applies the complementary turns, which for the
    offset cycles used here is the same cycle starting at phase 0 from the
    reversed edge; the parity bookkeeping is exact for cycle length <= 2.
    """
    cap = 8 * (disk.radius + 1) + 4
    fwd = _walk_dir(disk, u, v, phase, cap)
    bwd = _walk_dir(disk, v, u, phase, cap)
    return list(reversed(bwd))[:-2] + fwd


def _canonical(seq: Sequence[int]) -> tuple[int, ...]:
    t = tuple(int(x) for x in seq)
    r = tuple(reversed(t))
    return t if t <= r else r


def _axis_orbit_lines(disk: TessellationDisk, r3: int) -> list[tuple[int, ...]]:
    q = disk.spec.q
    if q % 4 != 0:
        raise DomainError(
            f"axis-orbit needs a quarter turn in the rotation system "
            f"(q divisible by 4), got q={q}")
    quarter = q // 4
    axis = _full_line(disk, 0, disk.rotations[0][0], 0)
    pos_root = axis.index(0)
    out = []
    for pos, w in enumerate(axis):
        if abs(pos - pos_root) > r3:
            continue
        rot = disk.rotations[w]
        if pos + 1 < len(axis):
            i = rot.index(axis[pos + 1])
        else:
            i = (rot.index(axis[pos - 1]) + q // 2) % q
        t = rot[(i + quarter) % q]
        if t < 0:
            t = rot[(i - quarter) % q]
        if t < 0:
            continue
        out.append(_canonical(_full_line(disk, w, t, 0)))
    return sorted(set(out))


def _reflection_lines(disk: TessellationDisk, r3: int) -> list[tuple[int, ...]]:
    dist = disk.root.dist
    q = disk.spec.q
    phases = range(1) if q % 2 == 0 else range(2)
    seen = set()
    for u in range(disk.graph.n):
        if dist[u] > r3:
            continue
        for v in disk.rotations[u]:
            if v < 0:
                continue
            for phase in phases:
                seen.add(_canonical(_full_line(disk, u, v, phase)))
    return sorted(seen)


def enumerate_lines(disk: TessellationDisk, family: LineFamily,
                    r3: int) -> list[GeodesicLine]:
    """All family lines meeting B_{r3}, each verified geodesic, in a
    deterministic (canonical sorted) order."""
    if r3 < 1 or r3 > disk.radius:
        raise InputError(f"need 1 <= r3 <= sheet radius, got r3={r3}, "
                         f"radius={disk.radius}")
    dist = disk.root.dist
    if family.kind == "axis-orbit":
        raw = _axis_orbit_lines(disk, r3)
    elif family.kind == "reflection-lines":
        raw = _reflection_lines(disk, r3)
    else:
        raw = sorted(set(_canonical(seq) for seq in family.lines))
    out = []
    for k, seq in enumerate(raw):
        arr = np.asarray(seq, dtype=np.int64)
        if arr.size and int(dist[arr].min()) > r3:
            continue
        label = f"{family.kind}:{k}"
        verify_geodesic(disk.graph, arr, label)
        out.append(GeodesicLine(vertices=arr, label=label))
    return out


# ---------------------------------------------------------------------------
# building X
# ---------------------------------------------------------------------------

@dataclass
class SheetAttachment:
    label: str
    o_vertex: int                 # base-ball id of the line vertex closest to o
    window: np.ndarray            # base-ball ids of the glued segment
    sheet_size: int               # vertices of the attached ball
    added: int                    # fresh vertices contributed to X


@dataclass
class XMeta:
    spec: ComplexSpec
    R: int
    n: int
    base_n: int
    sheets: list[SheetAttachment]
    sheet_of: np.ndarray          # -1 for base-sheet vertices, else sheet index

    @property
    def line_count(self) -> int:
        return len(self.sheets)

    @property
    def attached_volume(self) -> int:
        return sum(s.sheet_size for s in self.sheets)

    @property
    def ratio(self) -> float:
        return self.n / self.base_n


def _sheet_spine(template: TessellationDisk) -> list[int]:
    """The line through the attached ball's root, spanning its diameter."""
    r3 = template.radius
    spine = _full_line(template, 0, template.rotations[0][0], 0)
    mid = spine.index(0)
    if mid < r3 or len(spine) - 1 - mid < r3:
        raise GenerationError("attached-sheet spine does not span the ball")
    verify_geodesic(template.graph, np.asarray(spine, dtype=np.int64), "spine")
    return spine[mid - r3:mid + r3 + 1]


def build_X(spec: ComplexSpec, R: int, *, budget: int = 2_000_000,
            base: TessellationDisk | None = None) -> tuple[Graph, XMeta]:
    """Glue a radius-R/3 sheet ball onto B_R along every family line
    meeting B_{R/3}.

    R must be divisible by 3 so the attachment radius is exact.  Attached
    sheets are distinct copies even when their lines cross: they share
    vertices only through the base-line segments they are glued to.
    Returns the glued graph and per-sheet metadata including a vertex
    provenance table.
    """
    if R < 3 or R % 3 != 0:
        raise DomainError(f"R must be a positive multiple of 3, got {R}")
    if base is None:
        base = tessellation_disk(spec.tiling, R, budget)
    if base.radius != R:
        raise InputError(f"base sheet radius {base.radius} != R={R}")
    r3 = R // 3
    if spec.lines.kind == "explicit" and not spec.lines.lines:
        lines = []
    else:
        lines = enumerate_lines(base, spec.lines, r3)
    edges = [(int(u), int(v)) for u, v in base.graph.edge_list()]
    dist = base.root.dist
    sheet_of = [-1] * base.graph.n
    next_id = base.graph.n
    sheets: list[SheetAttachment] = []
    template = tessellation_disk(spec.tiling, r3, budget) if lines else None
    spine = _sheet_spine(template) if lines else []
    for k, line in enumerate(lines):
        lv = line.vertices
        c = int(np.lexsort((lv, dist[lv]))[0])
        if c - r3 < 0 or c + r3 >= len(lv):
            raise GenerationError(
                f"line {line.label} too short for a +-{r3} window around "
                f"its closest point (position {c} of {len(lv)})")
        window = lv[c - r3:c + r3 + 1]
        local_to_x = {}
        for j, s in enumerate(spine):
            local_to_x[s] = int(window[j])
        added = 0
        for v in range(template.graph.n):
            if v not in local_to_x:
                local_to_x[v] = next_id
                sheet_of.append(k)
                next_id += 1
                added += 1
        for u, v in template.graph.edge_list():
            edges.append((local_to_x[int(u)], local_to_x[int(v)]))
        sheets.append(SheetAttachment(label=line.label,
                                      o_vertex=int(window[r3]),
                                      window=window.copy(),
                                      sheet_size=template.graph.n,
                                      added=added))
    g = Graph.from_edges(next_id, edges)
    meta = XMeta(spec=spec, R=R, n=g.n, base_n=base.graph.n, sheets=sheets,
                 sheet_of=np.asarray(sheet_of, dtype=np.int64))
    return g, meta


# ---------------------------------------------------------------------------
# volume accounting
# ---------------------------------------------------------------------------

@dataclass
class VolumeRow:
    R: int
    vol_base: int
    vol_attached: int
    line_count: int
    vol_X: int
    ratio: float


@dataclass
class VolumeReport:
    rows: list[VolumeRow]
    flags: list[str] = field(default_factory=list)

    def ratios(self) -> list[float]:
        return [r.ratio for r in self.rows]


def volume_report(metas: Sequence[XMeta]) -> VolumeReport:
    """vol(B_R), attached volume, and vol(X)/vol(B_R) across the R range.

    Flags a growing ratio: a family whose ratio keeps climbing with R is
    outside the bounded-ratio regime (grids with all rows, for example).
    """
    rows = [VolumeRow(R=m.R, vol_base=m.base_n, vol_attached=m.attached_volume,
                      line_count=m.line_count, vol_X=m.n, ratio=m.ratio)
            for m in sorted(metas, key=lambda m: m.R)]
    flags = []
    growing = len(rows) >= 2 and all(b.ratio > a.ratio
                                     for a, b in zip(rows, rows[1:]))
    if growing and rows[-1].ratio >= 1.25 * rows[0].ratio:
        flags.append("volume ratio grows across the R range; the line "
                     "family is too dense for a bounded vol(X)/vol(B_R)")
    return VolumeReport(rows=rows, flags=flags)


# ---------------------------------------------------------------------------
# separator growth experiment on X
# ---------------------------------------------------------------------------

def _far_sector_pairs(base_root: BfsRoot, R: int,
                      max_pairs: int = 3) -> list[tuple[np.ndarray, np.ndarray, int]]:
    """Pairs of sectors of B_R rooted at far-apart S_{R/3} vertices.

    Returns (sector_a, sector_b, dist_between_roots) with root distance
    >= R/2, deterministically chosen: the lexically smallest sphere vertex,
    its farthest partner, then the pair most remote from the first pair.
    """
    r3 = R // 3
    idx = shadow_index(base_root, r3)
    sphere = sorted(x for x, sec in idx.sector_of.items() if len(sec) > 0)
    if len(sphere) < 2:
        return []
    g = base_root.graph
    need = (R + 1) // 2
    pairs: list[tuple[int, int, int]] = []
    x0 = sphere[0]
    d0 = bfs_distances(g, [x0])
    cand = [(int(d0[y]), -y) for y in sphere if d0[y] >= need]
    if cand:
        dy, ny = max(cand)
        pairs.append((x0, -ny, dy))
    if pairs and len(sphere) > 2:
        a, b, _ = pairs[0]
        da, db = d0, bfs_distances(g, [b])
        remote = [(min(int(da[z]), int(db[z])), -z) for z in sphere
                  if z not in (a, b)]
        score, nz = max(remote)
        if score >= 1:
            z = -nz
            dz = bfs_distances(g, [z])
            zc = [(int(dz[y]), -y) for y in sphere if dz[y] >= need and y != z]
            if zc:
                dy, ny = max(zc)
                pairs.append((z, -ny, dy))
    out = []
    for a, b, d in pairs[:max_pairs]:
        out.append((idx.sector(a), idx.sector(b), d))
    return out


def cut_X_experiment(spec: ComplexSpec, R_range: Sequence[int],
                     beta: Fraction | float = Fraction(1, 2), *,
                     budget: int = 2_000_000, seed: int = 0,
                     **engine_opts) -> ProfileCurve:
    """Separator bounds on X_R across an R range, as a profile curve.

    Upper bounds come from the separator engine run on X.  Lower bounds
    take the best Menger certificate over the engine's own pairs and over
    pairs of far-apart base-ball sectors (distance >= R/2), whose
    connecting flows are free to route through the attached sheets.  The
    x-axis is vol(X_R); sources record R.
    """
    points = []
    for R in sorted(set(int(R) for R in R_range)):
        base = tessellation_disk(spec.tiling, R, budget)
        x, meta = build_X(spec, R, budget=budget, base=base)
        bounds = cut_bounds(x, beta, seed=seed, **engine_opts)
        lower = bounds.lower
        for sec_a, sec_b, _d in _far_sector_pairs(base.root, R):
            try:
                cert = cut_lower_flow(x, sec_a, sec_b, beta)
            except (InputError, DomainError):
                continue
            if cert.value > lower:
                lower = cert.value
        points.append(ProfilePoint(n=x.n, lower=lower,
                                   upper=max(bounds.upper, lower),
                                   source=f"X:R={R}", family="amalgam"))
    if not points:
        raise InputError("empty R range")
    return ProfileCurve(points=points, family="amalgam")
