import itertools

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from polyrigid import (
    Framework,
    Graph,
    MinimalVerdict,
    SparsityVerdict,
    TreeVerdict,
    complete_graph,
    cut_screen,
    maxwell_count,
    minimal_tree_criterion,
    monochrome_decomposition,
    tree_criterion,
    vertex_colour_screen,
)
from polyrigid.combinatorics import brute_force_sparsity, screen_all_cuts, verify_flex
from polyrigid.errors import BadColourSet
import golden
from oracles import sparsity_class


def test_decomposition_of_eight_vertex_trees():
    fw, F1, F2 = golden.eight_vertex_trees()
    dec = monochrome_decomposition(fw)
    one = lambda es: sorted((a - 1, b - 1) for a, b in es)
    assert sorted(dec.edges("F1")) == one(F1)
    assert sorted(dec.edges("F2")) == one(F2)
    assert tree_criterion(fw) is TreeVerdict.RIGID
    assert minimal_tree_criterion(fw)[0] is MinimalVerdict.MINIMALLY_RIGID


def test_vertex_screen_witness_is_a_real_flex():
    fw = golden.k3_linf()
    w = vertex_colour_screen(fw)
    assert not w and w.moving == (2,)
    assert verify_flex(fw, w.vector)


def test_vertex_screen_passes_on_rigid():
    assert vertex_colour_screen(golden.lovasz_six())
    assert vertex_colour_screen(golden.eight_vertex_trees()[0])


def test_non_regular_placement_is_caught_by_trees():
    fw = golden.six_vertex_linf()
    assert tree_criterion(fw) is TreeVerdict.FLEXIBLE
    assert minimal_tree_criterion(fw)[0] is MinimalVerdict.NO
    assert maxwell_count(fw.graph).tight


def test_cut_screen_on_pendant():
    fw = golden.four_vertex_pendant()
    res = screen_all_cuts(fw)
    assert any(not r for r in res.values())
    for r in res.values():
        if not r:
            assert verify_flex(fw, r.vector)


def test_cut_screen_rejects_too_few_colours():
    with pytest.raises(BadColourSet):
        cut_screen(golden.k3_linf(), [])


def test_tree_criterion_not_applicable_with_three_colours():
    assert tree_criterion(golden.additive_k3()) is TreeVerdict.NOT_APPLICABLE
    assert minimal_tree_criterion(golden.lovasz_six())[0] is MinimalVerdict.NOT_APPLICABLE


def test_three_dimensional_cube_example():
    verdict, route = minimal_tree_criterion(golden.cube_four_vertex())
    assert verdict is MinimalVerdict.MINIMALLY_RIGID


def test_tree_criterion_flexible():
    assert tree_criterion(golden.k3_linf()) is TreeVerdict.FLEXIBLE


def test_maxwell_verdicts():
    assert maxwell_count(golden.six_vertex_graph()).tight
    assert maxwell_count(complete_graph(3)).verdict is SparsityVerdict.SPARSE_ONLY
    res = maxwell_count(complete_graph(5))
    assert res.verdict is SparsityVerdict.VIOLATION
    k = len(res.vertices)
    assert len(res.edges) > 2 * k - 2


def test_maxwell_in_three_dimensions():
    assert maxwell_count(complete_graph(4), 3).verdict is SparsityVerdict.SPARSE_ONLY
    assert maxwell_count(Graph(2, [(0, 1)]), 1).tight


def test_maxwell_rejects_bad_d():
    with pytest.raises(ValueError):
        maxwell_count(complete_graph(2), 0)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 7), st.integers(1, 3), st.data())
def test_pebble_game_matches_subgraph_count(n, d, data):
    pairs = list(itertools.combinations(range(n), 2))
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    G = Graph(n, edges)
    res = maxwell_count(G, d)
    assert res.verdict.value == sparsity_class(n, edges, d)
    if res.verdict is SparsityVerdict.VIOLATION:
        assert len(res.edges) > d * len(res.vertices) - d
        assert brute_force_sparsity(G, d) is SparsityVerdict.VIOLATION


def test_laman_style_count_on_atlas_sample():
    for g in nx.graph_atlas_g()[1:60]:
        G = Graph(g.number_of_nodes(), list(g.edges()))
        assert maxwell_count(G).verdict is brute_force_sparsity(G)
