import pytest

from polyrigid import (
    FrameworkFamily,
    hypercube,
    ngon,
    sequential_rigidity_probe,
    tower_certificate,
    zigzag_family,
)
from polyrigid.errors import ValidationError
from polyrigid.towers import (
    colour_growth,
    constant_family,
    disjoint_family,
    nests,
    star_family,
    summarize,
)
import golden


def test_zigzag_shape():
    fam = zigzag_family()
    fw = fam.truncation(3)
    assert fw.n == 7
    assert fw.placement[0] == (0, 1)
    assert [p[1] for p in fw.placement[1:]] == [0, 0, -3, -3, -10, -10]
    assert fw.placement[6] == (-14, -10)
    assert [c.label for c in fw.colouring.vertex_classes(6)] == ["F1"]


def test_zigzag_levels_nest():
    fam = zigzag_family()
    for k in range(1, 6):
        assert nests(fam.truncation(k), fam.truncation(k + 1))


def test_zigzag_probe():
    probe = sequential_rigidity_probe(zigzag_family(), 5)
    assert [p.rank for p in probe] == [4 * k - 1 for k in range(1, 6)]
    assert all(not p.rigid and p.flex_vertex == p.n - 1 for p in probe)
    tower = tower_certificate(zigzag_family(), 5)
    assert tower.all_relatively_rigid
    assert summarize(tower, probe) == "rigid union evidence, no rigid truncation"


def test_zigzag_colour_classes_are_trees():
    for g in colour_growth(zigzag_family(), 4):
        assert g.acyclic


def test_zigzag_needs_max_norm():
    with pytest.raises(ValidationError):
        zigzag_family(ngon(6))


def test_constant_family_of_flexible_framework():
    fam = constant_family(golden.four_vertex_pendant())
    tower = tower_certificate(fam, 2)
    assert tower.levels[0].nested and not tower.levels[0].relatively_rigid


def test_constant_family_of_rigid_framework():
    tower = tower_certificate(constant_family(golden.eight_vertex_trees()[0]), 3)
    assert tower.all_relatively_rigid


def test_disjoint_family_has_no_evidence():
    fam = disjoint_family()
    tower = tower_certificate(fam, 3)
    assert not tower.all_relatively_rigid
    assert summarize(tower, sequential_rigidity_probe(fam, 3)) == "no tower evidence"
    assert "colours" in tower.note


def test_star_family_with_leaves_at_extreme_points_is_rigid():
    # each leaf meets two facets, so its bar carries two rows and pins it
    fam = star_family()
    assert fam.truncation(9).placement[9] == tuple(2 * a for a in fam.polytope.vertices[0])
    probe = sequential_rigidity_probe(fam, 4)
    assert all(p.rigid for p in probe)
    assert summarize(tower_certificate(fam, 4), probe) == "all truncations rigid"


def test_bad_depths():
    with pytest.raises(ValidationError):
        tower_certificate(zigzag_family(), 1)
    with pytest.raises(ValidationError):
        sequential_rigidity_probe(zigzag_family(), 0)
    with pytest.raises(ValidationError):
        zigzag_family().truncation(0)


def test_custom_family():
    fam = FrameworkFamily("k3", hypercube(2), lambda k: golden.k3_linf())
    assert fam.truncation(4).n == 3
