from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from polyrigid import (
    Framework,
    Graph,
    build_rigidity_matrix,
    complete_graph,
    is_infinitesimally_rigid,
    is_minimally_rigid,
    is_relatively_rigid,
    path_certificate,
    rank_and_kernel,
    rank_of,
)
from polyrigid.errors import EmptySubgraph
from polyrigid.rigidity import edge_space_basis, monochrome_path
import golden
from oracles import float_rank, in_kernel, sympy_rank


def test_row_layout_follows_edge_orientation():
    M = build_rigidity_matrix(golden.k3_linf())
    assert [str(r) for r in M.rows] == ["(0-1,F1)", "(0-2,F2)", "(1-2,F2)"]
    # a - b = (-2, 0) lies in cone(-F1): +g at the first endpoint with g = -fhat
    assert M.row_vectors[0] == (-1, 0, 1, 0, 0, 0)


def test_non_well_positioned_edge_gets_one_row_per_class():
    M = build_rigidity_matrix(golden.k2_l1_axis())
    assert M.shape == (2, 4)


@pytest.mark.parametrize("make", [golden.k2_l1_diagonal, golden.k2_l1_axis, golden.k3_linf, golden.additive_k3,
                                  golden.cube_four_vertex, golden.lovasz_six, golden.six_vertex_linf])
def test_rank_matches_sympy(make):
    fw = make()
    M = build_rigidity_matrix(fw)
    r, flex = rank_and_kernel(M)
    assert r == sympy_rank(M.row_vectors, M.ncols)
    assert flex.nullity == M.ncols - r
    for u in flex.kernel_basis:
        assert in_kernel(M.row_vectors, u)


def test_octagon_star_rank_matches_numpy():
    fw = golden.octagon_star()
    M = build_rigidity_matrix(fw)
    assert rank_of(fw) == float_rank([list(r) for r in M.row_vectors], M.ncols) == 16


def test_single_vertex_is_rigid():
    fw = Framework(Graph(1), [(0, 0)], golden.LINF)
    assert is_infinitesimally_rigid(fw)
    assert is_minimally_rigid(fw)


def test_minimal_rigidity_report_on_cube_example():
    rep = is_minimally_rigid(golden.cube_four_vertex())
    assert rep.minimally_rigid and rep.rigid
    assert rep.flex_dim_after_removal == {(0, 1): 1, (0, 2): 1, (0, 3): 2, (1, 3): 1, (2, 3): 1}


def test_relative_rigidity_of_triangle_in_pendant_framework():
    fw = golden.four_vertex_pendant()
    assert not is_infinitesimally_rigid(fw)
    assert is_relatively_rigid(fw, [0, 1, 2])
    assert not is_relatively_rigid(fw, [0, 1, 2, 3])


def test_relative_rigidity_rejects_empty():
    with pytest.raises(EmptySubgraph):
        is_relatively_rigid(golden.k3_linf(), [])


def test_monochrome_path_and_edge_spaces():
    fw, F1, F2 = golden.eight_vertex_trees()
    c1 = fw.polytope.classes[0]
    path = monochrome_path(fw, 0, 7, c1)
    assert path is not None
    assert all(fw.colouring.classes(e)[0].index == c1.index for e in path)
    assert edge_space_basis(fw, (0, 1)) == [[0, 1]]


def test_path_certificate_found_and_not_found():
    fw, _, _ = golden.eight_vertex_trees()
    cert = path_certificate(fw, 0, 4)
    assert cert and cert.intersection_dim == 0 and len(cert.paths) == 2
    pend = golden.four_vertex_pendant()
    assert not path_certificate(pend, 0, 3)


coord = st.integers(-5, 5)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(coord, coord), min_size=2, max_size=6, unique=True),
       st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=12))
def test_rank_bound_and_trivial_flexes(pts, raw_edges):
    n = len(pts)
    edges = [(a % n, b % n) for a, b in raw_edges if a % n != b % n]
    fw = Framework(Graph(n, edges), pts, golden.L1)
    M = build_rigidity_matrix(fw)
    r, flex = rank_and_kernel(M)
    assert r <= 2 * n - 2
    for i in range(2):
        u = [1 if k % 2 == i else 0 for k in range(2 * n)]
        assert in_kernel(M.row_vectors, u)
    assert r == sympy_rank(M.row_vectors, M.ncols)
