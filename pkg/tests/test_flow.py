import pytest

from conftest import clique, cycle, path
from seplab import InputError, grid, regular_tree
from seplab.flow import max_vertex_disjoint_paths, verify_paths


def test_grid_ladder_width_equals_row_count():
    for k in range(2, 6):
        g = grid(k, k)
        left = [k * i for i in range(k)]
        right = [k * i + k - 1 for i in range(k)]
        count, paths = max_vertex_disjoint_paths(g, left, right)
        assert count == k
        assert verify_paths(g, left, right, paths)


def test_paths_are_actual_graph_walks():
    g = grid(3, 3)
    count, paths = max_vertex_disjoint_paths(g, [0, 3, 6], [2, 5, 8])
    assert count == 3
    seen = set()
    for p in paths:
        assert all(g.has_edge(u, v) for u, v in zip(p, p[1:]))
        assert seen.isdisjoint(p)
        seen.update(p)


def test_star_center_is_a_bottleneck():
    g = regular_tree(4, 1)
    count, paths = max_vertex_disjoint_paths(g, [1, 2], [3, 4])
    assert count == 1
    assert verify_paths(g, [1, 2], [3, 4], paths)


def test_cycle_splits_into_two_arcs():
    g = cycle(8)
    count, _ = max_vertex_disjoint_paths(g, [0], [4])
    assert count == 1
    count, _ = max_vertex_disjoint_paths(g, [0, 1], [4, 5])
    assert count == 2


def test_clique_pairs_up_both_sides():
    count, paths = max_vertex_disjoint_paths(clique(6), [0, 1, 2], [3, 4, 5])
    assert count == 3
    assert all(len(p) == 2 for p in paths)


def test_empty_side_is_rejected():
    with pytest.raises(InputError):
        max_vertex_disjoint_paths(path(5), [], [4])


def test_overlapping_sides_are_rejected():
    with pytest.raises(InputError):
        max_vertex_disjoint_paths(path(5), [0, 2], [2, 4])


def test_verify_paths_rejects_a_reused_vertex():
    g = clique(4)
    assert verify_paths(g, [0, 2], [3], [[0, 1, 3]])
    assert not verify_paths(g, [0, 2], [3], [[0, 1, 3], [2, 1, 3]])


def test_verify_paths_rejects_a_non_edge_hop():
    g = path(5)
    assert not verify_paths(g, [0], [4], [[0, 2, 4]])


def test_verify_paths_rejects_wrong_endpoints():
    g = path(5)
    assert not verify_paths(g, [0], [4], [[1, 2, 3, 4]])
    assert not verify_paths(g, [0], [4], [[0, 1, 2, 3]])
    assert not verify_paths(g, [0], [4], [[]])


def test_disconnected_sides_have_no_paths():
    from seplab import Graph
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    count, paths = max_vertex_disjoint_paths(g, [0], [3])
    assert count == 0 and paths == []
