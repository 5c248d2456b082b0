from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from polyrigid import (
    Framework,
    Graph,
    complete_graph,
    is_well_positioned,
    perturb_well_positioned,
)
from polyrigid.errors import CoincidentEndpoints, ValidationError
from polyrigid.polytope import gauge_norm
import golden


def test_graph_normalises_edges():
    G = Graph(3, [(2, 0), (0, 2), (1, 0)])
    assert G.edges == ((0, 1), (0, 2))
    assert G.degree(0) == 2 and G.has_edge(2, 0)


def test_graph_rejects_bad_edges():
    with pytest.raises(ValidationError):
        Graph(2, [(0, 2)])
    with pytest.raises(ValidationError):
        Graph(2, [(1, 1)])


def test_coincident_endpoints():
    with pytest.raises(CoincidentEndpoints):
        Framework(complete_graph(2), [(1, 1), (1, 1)], golden.LINF)


def test_non_adjacent_coincident_points_allowed():
    fw = Framework(Graph(3, [(0, 1)]), [(0, 0), (1, 0), (0, 0)], golden.LINF)
    assert fw.n == 3


def test_k3_colouring():
    col = golden.k3_linf().colouring
    assert col.labels() == {(0, 1): ["F1"], (0, 2): ["F2"], (1, 2): ["F2"]}
    assert [c.label for c in col.vertex_classes(2)] == ["F2"]


def test_well_positioned_reports_offending_edge():
    wp = is_well_positioned(golden.k2_l1_axis())
    assert not wp and wp.edge == (0, 1) and len(wp.classes) == 2
    assert is_well_positioned(golden.k2_l1_diagonal())


def test_perturbation_reaches_well_positioned_within_radius():
    fw = golden.k2_l1_axis()
    r = Fr(1, 100)
    out = perturb_well_positioned(fw, r, seed=3)
    assert is_well_positioned(out)
    for p, q in zip(fw.placement, out.placement):
        assert gauge_norm(fw.polytope, [a - b for a, b in zip(p, q)]) <= r


def test_perturbation_is_deterministic():
    fw = golden.cube_four_vertex()
    a = perturb_well_positioned(fw, Fr(1, 50), seed=7)
    b = perturb_well_positioned(fw, Fr(1, 50), seed=7)
    assert a.placement == b.placement


def test_perturbation_returns_input_when_already_fine():
    fw = golden.k3_linf()
    assert perturb_well_positioned(fw, 1) is fw


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=2, max_size=5, unique=True))
def test_colouring_is_translation_and_scale_invariant(pts):
    G = complete_graph(len(pts))
    fw = Framework(G, pts, golden.L1)
    moved = fw.translated((Fr(1, 3), -2)).scaled(Fr(5, 2))
    assert moved.colouring.labels() == fw.colouring.labels()
    assert moved.colouring.signs == fw.colouring.signs
