from fractions import Fraction

import numpy as np
import pytest

from seplab import (DeltaConnectivityError, InputError, TessellationSpec,
                    bfs_root, grid, regular_tree, tessellation_disk)
from seplab.graph import connected_components, induced_subgraph, neighborhood
from seplab.separator import cut_bounds, cut_upper, verify_separator
from seplab.spheres import (WIDTHS, bounded_sphere_separation_test, delta_hat,
                            p_set, project_separator, sector_stats,
                            shadow_index, sphere_graph)


# ---------------------------------------------------------------------------
# sphere graphs and delta_hat
# ---------------------------------------------------------------------------

def test_square_lattice_band_is_a_thin_ring(disk44_r9):
    sg = sphere_graph(disk44_r9.root, 5, 1)
    assert (sg.graph.n, sg.graph.m) == (60, 80)
    assert sg.connected
    assert set(disk44_r9.root.dist[sg.vertices]) == {4, 5, 6}
    bounds = cut_bounds(sg.graph)
    assert (bounds.lower, bounds.upper) == (2, 2)


def test_tree_sphere_with_zero_width_has_no_edges():
    b = bfs_root(regular_tree(3, 6), 0)
    sg = sphere_graph(b, 4, 0)
    assert sg.graph.m == 0
    assert sg.graph.n == len(b.sphere(4))


def test_heptagonal_sphere_neighborhood_connects_at_width_one(disk73_r12):
    sg = sphere_graph(disk73_r12.root, 8, 1)
    assert sg.graph.n == 357
    assert sg.connected


def test_sphere_graph_local_map_roundtrips(disk44_r9):
    sg = sphere_graph(disk44_r9.root, 3, 1)
    loc = sg.local(sg.vertices)
    assert list(loc) == list(range(sg.graph.n))
    with pytest.raises(InputError):
        sg.local([0])  # the root is far inside the ball


def test_sphere_graph_rejects_overflowing_radius(disk44_r9):
    with pytest.raises(InputError):
        sphere_graph(disk44_r9.root, 9, 1)


def test_delta_hat_is_one_on_both_tessellations(disk73_r9, disk44_r9):
    assert delta_hat(disk73_r9.root) == 1
    assert delta_hat(disk44_r9.root) == 1


def test_delta_hat_on_a_tree_needs_half_the_depth():
    # branches at depth R only meet at the root, so (S_R)_d connects iff R <= d
    b = bfs_root(regular_tree(3, 12), 0)
    assert delta_hat(b) == 6


def test_delta_hat_reports_the_stuck_radius():
    g = grid(1, 41)
    b = bfs_root(g, 20)
    with pytest.raises(DeltaConnectivityError) as e:
        delta_hat(b)
    assert e.value.radius == 9 and e.value.delta == 8


def test_delta_hat_rejects_radii_that_cannot_fit():
    b = bfs_root(regular_tree(3, 12), 0)
    with pytest.raises(InputError):
        delta_hat(b, radii=[10])


# ---------------------------------------------------------------------------
# shadows and sectors
# ---------------------------------------------------------------------------

def test_shadows_partition_everything_outside_the_core(disk73_r9):
    b = disk73_r9.root
    idx = shadow_index(b, 3)
    pieces = [idx.shadow(x) for x in b.sphere(3)]
    flat = np.concatenate(pieces)
    assert len(flat) == len(set(flat.tolist()))
    outside = np.nonzero(b.dist >= 3)[0]
    assert sorted(flat.tolist()) == sorted(outside.tolist())


def test_sectors_partition_the_annulus(disk73_r9):
    b = disk73_r9.root
    idx = shadow_index(b, 3)
    flat = np.concatenate([idx.sector(x) for x in b.sphere(3)])
    assert sorted(flat.tolist()) == sorted(idx.annulus.tolist())
    assert set(b.dist[idx.annulus]) == {7, 8, 9}


def test_binary_tree_shadows_count_descendants():
    b = bfs_root(regular_tree(3, 8), 0)
    idx = shadow_index(b, 2)
    assert len(idx.shadow_of) == 6
    # 2^0 + ... + 2^6 descendants below each depth-2 vertex
    assert all(len(idx.shadow(x)) == 127 for x in b.sphere(2))
    assert all(len(idx.sector(x)) == 24 for x in b.sphere(2))
    assert len(idx.annulus) == 144


def test_shadow_index_needs_the_full_annulus(disk73_r9):
    with pytest.raises(InputError):
        shadow_index(disk73_r9.root, 4)


def test_projection_array_matches_shadow_membership(disk73_r9):
    b = disk73_r9.root
    idx = shadow_index(b, 3)
    for x in b.sphere(3)[:4]:
        grp = idx.shadow(int(x))
        assert (idx.projection[grp] == x).all()
    assert (idx.projection[np.nonzero(b.dist < 3)[0]] == -1).all()


def test_tree_sector_stats_are_exact():
    b = bfs_root(regular_tree(3, 12), 0)
    st = sector_stats(shadow_index(b, 4))
    assert st.alpha_hat == pytest.approx(2.0)
    assert st.fit_r2 == pytest.approx(1.0)
    assert set(st.sector_sizes.values()) == {480}
    assert st.K_hat == pytest.approx(30.0)       # 480 / 2^4
    assert st.K_hat_sector == pytest.approx(1.875)  # 480 / 2^8
    assert st.warnings == []


def test_square_lattice_sector_spread_at_small_base(disk44_r9):
    st = sector_stats(shadow_index(disk44_r9.root, 3))
    sizes = st.sector_sizes.values()
    assert (min(sizes), max(sizes)) == (3, 18)
    assert max(sizes) / min(sizes) == 6.0
    assert st.alpha_hat == pytest.approx(1.1963, abs=5e-4)


def test_flat_growth_triggers_the_sector_warning():
    d = tessellation_disk(TessellationSpec(4, 4), 48)
    idx = shadow_index(d.root, 16)
    with pytest.warns(RuntimeWarning, match="sub-exponential"):
        st = sector_stats(idx)
    assert st.alpha_hat == pytest.approx(1.0337, abs=5e-4)
    assert st.warnings


def test_heptagonal_sector_constant_is_stable(disk73_r18):
    b = disk73_r18.root
    stats = {R: sector_stats(shadow_index(b, R)) for R in (4, 5, 6)}
    for R, want in [(4, 1.5619), (5, 1.5563), (6, 1.5572)]:
        assert stats[R].alpha_hat == pytest.approx(want, abs=5e-4)
        assert stats[R].fit_r2 > 0.999
        assert not stats[R].warnings
    ks = {4: 2.9929, 5: 3.3106, 6: 3.4296}
    for R, want in ks.items():
        assert stats[R].K_hat_sector == pytest.approx(want, abs=5e-4)
    spread = max(ks.values()) / min(ks.values())
    assert spread <= 2.0  # scale-matched constant stays put across R


def test_sector_stats_rejects_an_empty_annulus(disk73_r9):
    idx = shadow_index(disk73_r9.root, 3)
    idx.annulus = np.empty(0, dtype=np.int64)
    with pytest.raises(InputError):
        sector_stats(idx)


# ---------------------------------------------------------------------------
# bounded sphere separation
# ---------------------------------------------------------------------------

def test_square_lattice_spheres_have_tiny_cuts(disk44_r9):
    rep = bounded_sphere_separation_test(disk44_r9.root, 1, range(3, 8))
    assert [r.bounds.upper for r in rep.rows] == [3, 2, 2, 2, 2]
    assert rep.max_upper == 3
    assert all(r.bounds.lower >= 1 for r in rep.rows)


def test_heptagonal_spheres_stay_bounded(disk73_r12):
    rep = bounded_sphere_separation_test(disk73_r12.root, 1, range(4, 11))
    assert [r.bounds.upper for r in rep.rows] == [2] * 7
    assert rep.max_upper == 2
    assert rep.upper_slope == pytest.approx(0.0)
    # sphere sizes keep growing while the cut does not
    sizes = [r.sphere_size for r in rep.rows]
    assert sizes == sorted(sizes) and sizes[-1] > 3 * sizes[0]


def test_bounded_sphere_report_rejects_an_empty_range(disk44_r9):
    with pytest.raises(InputError):
        bounded_sphere_separation_test(disk44_r9.root, 1, [])


# ---------------------------------------------------------------------------
# the P set and separator projection
# ---------------------------------------------------------------------------

def test_p_set_edge_cases(disk73_r12):
    b = disk73_r12.root
    assert len(p_set(b, 4, 1, [])) == 0
    ann = np.nonzero((b.dist > 8) & (b.dist <= 12))[0]
    assert len(ann) == 1518
    full = p_set(b, 4, 1, ann)
    assert sorted(full.tolist()) == sorted(b.sphere(4).tolist())


def test_p_set_of_a_small_cut_is_small(disk73_r12):
    b = disk73_r12.root
    ann = np.nonzero((b.dist > 8) & (b.dist <= 12))[0]
    sub = induced_subgraph(b.graph, ann)
    c = cut_upper(sub.graph, strategy="bfs-sweep")
    C = sub.vertices[c.cut_set]
    assert len(C) == 3
    P = p_set(b, 4, 1, C)
    assert len(P) == 10
    assert len(P) < len(b.sphere(4)) * 0.6
    crowd = WIDTHS.crowding_width
    assert len(P) <= crowd * 1 * len(b.ball(crowd * 1))


def test_p_set_rejects_cut_outside_the_annulus(disk73_r12):
    b = disk73_r12.root
    with pytest.raises(InputError):
        p_set(b, 4, 1, [0])


def test_project_separator_validates_its_arguments(disk73_r12):
    b = disk73_r12.root
    with pytest.raises(InputError):
        project_separator(b, 6, 5, [], 1)
    with pytest.raises(InputError):
        project_separator(b, 4, 6, b.sphere(5)[:2], 1)
    out = project_separator(b, 4, 6, [], 1)
    assert len(out) == 0


def test_projected_image_lands_in_the_lower_sphere_graph(disk73_r12):
    b = disk73_r12.root
    pts = b.sphere(8)[:5]
    out = project_separator(b, 5, 8, pts, 1)
    assert len(out) > 0
    assert set(b.dist[out].tolist()) <= {4, 5, 6}


def dissect(g, target):
    """Nested dissection: cut until every remaining piece has <= target."""
    cut = []
    stack = [np.arange(g.n)]
    while stack:
        part = stack.pop()
        if len(part) <= target:
            continue
        sub = induced_subgraph(g, part)
        best = None
        for strat in ("spectral", "bfs-sweep"):
            c = cut_upper(sub.graph, strategy=strat)
            if best is None or c.value < best.value:
                best = c
        c_local = list(best.cut_set)
        cut.extend(part[c_local])
        removed = set(c_local)
        keep = np.array([i for i in range(sub.graph.n) if i not in removed],
                        dtype=np.int64)
        if len(keep) == 0:
            continue
        sub2 = induced_subgraph(sub.graph, keep)
        for comp in connected_components(sub2.graph):
            stack.append(part[keep[comp]])
    return np.array(sorted(cut), dtype=np.int64)


def test_projection_transfers_separation_down_the_levels(disk73_r15):
    """Dissect the sphere graph at Rp, project the footprint to R, re-verify.

    The projected, thickened image should itself be a balanced separator of
    the sphere graph at R for almost every (R, Rp) pair at desk scale.
    """
    d = disk73_r15
    b = d.root
    pairs = [(4, 5), (4, 6), (5, 6), (5, 7), (4, 7),
             (6, 7), (6, 8), (5, 8), (7, 8), (4, 8)]
    passed = 0
    failures = []
    for R, Rp in pairs:
        sgp = sphere_graph(b, Rp, 1)
        D = sgp.id_map[dissect(sgp.graph, max(1, sgp.graph.n // 8))]
        near = neighborhood(d.graph, D, 1)
        P = near[b.dist[near] == Rp]
        assert len(P) > 0
        proj = project_separator(b, R, Rp, P, 1)
        sg = sphere_graph(b, R, 1)
        local = sg.local(proj)
        good, frac = verify_separator(sg.graph, local, Fraction(1, 2))
        proper = len(local) < sg.graph.n
        assert proper, (R, Rp)  # a projection that swallows S_R proves nothing
        if good:
            passed += 1
        else:
            failures.append((R, Rp, float(frac)))
    assert passed >= 9, failures
