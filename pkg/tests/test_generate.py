import pytest

from seplab import (GenerationError, InputError, ResourceError, Graph,
                    TessellationSpec, bfs_root, grid, random_regular,
                    regular_tree, tessellation_ball, tessellation_disk)
from seplab.graph import is_connected


def test_grid_1xn_is_a_path():
    g = grid(1, 5)
    assert g.n == 5 and g.m == 4
    assert sorted(g.degrees().tolist()) == [1, 1, 2, 2, 2]


def test_grid_2x2_is_a_4_cycle():
    g = grid(2, 2)
    assert g.n == 4 and g.m == 4
    assert set(g.degrees().tolist()) == {2}
    assert is_connected(g)


def test_grid_4x4_counts():
    g = grid(4, 4)
    assert g.n == 16 and g.m == 24


def test_regular_tree_star():
    g = regular_tree(3, 1)
    assert g.n == 4
    assert sorted(g.degrees().tolist()) == [1, 1, 1, 3]


def test_regular_tree_depth_4_size():
    assert regular_tree(3, 4).n == 46


def test_regular_tree_degree_2_is_a_path():
    g = regular_tree(2, 5)
    assert g.n == 11
    assert sorted(g.degrees().tolist()) == [1, 1] + [2] * 9


def test_tessellation_44_ball_sizes_match_the_diamond_lattice():
    for r in range(1, 7):
        g, _ = tessellation_ball(TessellationSpec(4, 4), r)
        assert g.n == 2 * r * r + 2 * r + 1


def test_tessellation_radius_zero_is_one_vertex():
    g, b = tessellation_ball(TessellationSpec(8, 8), 0)
    assert g.n == 1 and b.radius == 0


def test_tessellation_interior_valence():
    for p, q, r in ((7, 3, 6), (4, 4, 6), (8, 3, 5)):
        disk = tessellation_disk(TessellationSpec(p, q), r)
        dist = disk.root.dist
        for v in range(disk.graph.n):
            if dist[v] <= r - 2:
                assert disk.graph.degree(v) == q, (p, q, v)


def test_tessellation_rotations_have_q_slots():
    disk = tessellation_disk(TessellationSpec(7, 3), 5)
    assert all(len(rot) == 3 for rot in disk.rotations)
    for v, rot in enumerate(disk.rotations):
        kept = sorted(w for w in rot if w >= 0)
        assert kept == disk.graph.neighbors(v).tolist()


def test_hyperbolic_growth_is_exponential():
    g, b = tessellation_ball(TessellationSpec(7, 3), 10)
    sizes = [len(b.ball(r)) for r in range(11)]
    for r in range(3, 10):
        assert sizes[r + 1] >= 1.3 * sizes[r]


def test_square_tiling_growth_is_subexponential():
    g, b = tessellation_ball(TessellationSpec(4, 4), 9)
    sizes = [len(b.ball(r)) for r in range(10)]
    for r in range(5, 9):
        assert sizes[r + 1] <= 1.5 * sizes[r]


def test_heptagonal_sphere_growth_ratio_stabilizes():
    g, b = tessellation_ball(TessellationSpec(7, 3), 10)
    ratios = [len(b.sphere(r + 1)) / len(b.sphere(r)) for r in range(5, 10)]
    mid = sum(ratios) / len(ratios)
    assert all(abs(x - mid) <= 0.1 * mid for x in ratios)


def test_tessellation_rejects_euclidean_or_spherical_specs():
    with pytest.raises(InputError):
        TessellationSpec(3, 3)  # (p-2)(q-2) = 1


def test_tessellation_budget_exhaustion_names_the_layer():
    with pytest.raises(ResourceError) as ei:
        tessellation_ball(TessellationSpec(7, 3), 10, budget=100)
    assert ei.value.layer_reached >= 0


def test_generators_are_deterministic():
    a = tessellation_disk(TessellationSpec(7, 3), 6)
    b = tessellation_disk(TessellationSpec(7, 3), 6)
    assert a.graph == b.graph and a.rotations == b.rotations
    assert random_regular(20, 3, 5) == random_regular(20, 3, 5)


def test_random_regular_4_3_is_the_complete_graph():
    for seed in (0, 1, 2):
        g = random_regular(4, 3, seed)
        assert g.n == 4 and g.m == 6


def test_random_regular_6_2_is_a_single_cycle():
    for seed in (0, 1, 2):
        g = random_regular(6, 2, seed)
        assert set(g.degrees().tolist()) == {2}
        assert is_connected(g)


def test_random_regular_rejects_odd_degree_sum():
    with pytest.raises(GenerationError):
        random_regular(5, 3, 0)


def test_random_regular_is_simple_and_regular():
    g = random_regular(30, 4, 11)
    assert set(g.degrees().tolist()) == {4}
    assert is_connected(g)
