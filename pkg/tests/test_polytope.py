import math
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from polyrigid import (
    Membership,
    additive_norm,
    attaining_classes,
    cone_membership,
    crosspolytope,
    example_submodular,
    gauge_norm,
    hypercube,
    lovasz_norm,
    ngon,
    polytope_from_polar,
    validate_polytope,
    with_backend,
)
from polyrigid.errors import (
    DegenerateB,
    DimensionUnsupported,
    NonExtremePoint,
    NotFullDimensional,
    NotMonotone,
    NotSubmodular,
    NotSymmetric,
    OddN,
    ValidationError,
    ZeroVector,
)
from polyrigid.gallery import SubmodularFn, ngon_functional, parse_gallery_name
from polyrigid.polytope import facet_vertices, interior_direction
import oracles

coords = st.fractions(min_value=-5, max_value=5, max_denominator=7)
vec2 = st.tuples(coords, coords).filter(lambda v: any(v))
vec3 = st.tuples(coords, coords, coords).filter(lambda v: any(v))


L1, LINF, L1_3, LINF_3 = crosspolytope(2), hypercube(2), crosspolytope(3), hypercube(3)
ADD = additive_norm([(1, 0), (0, 1), (1, 1)])
LOV = lovasz_norm(example_submodular())
OCT = ngon(8)


def fhats(P):
    return [c.fhat for c in P.classes]


def test_l1_classes_in_label_order():
    assert fhats(crosspolytope(2)) == [(1, 1), (1, -1)]


def test_linf_classes_in_label_order():
    assert fhats(hypercube(2)) == [(1, 0), (0, 1)]
    assert fhats(hypercube(3)) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_l1_three_dim_has_four_classes():
    assert sorted(fhats(crosspolytope(3))) == sorted([(1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1)])


def test_octagon_functionals_match_closed_form():
    P = ngon(8)
    got = sorted(tuple(round(a, 12) for a in f) for f in fhats(P))
    want = set()
    for k in range(1, 9):
        f = ngon_functional(8, k)
        if f[0] < -1e-12 or (abs(f[0]) < 1e-12 and f[1] < 0):
            f = (-f[0], -f[1])
        want.add(tuple(round(a, 12) + 0.0 for a in f))
    assert got == sorted(want)
    assert len(got) == 4


def test_additive_classes():
    P = additive_norm([(1, 0), (0, 1), (1, 1)])
    assert sorted(fhats(P)) == [(0, 2), (2, 0), (2, 2)]


def test_lovasz_classes():
    assert sorted(fhats(lovasz_norm(example_submodular()))) == [(1, -1), (1, 1), (2, 0)]


def test_hypercube_four_dim_needs_override():
    P = hypercube(4)
    assert fhats(P) == [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    verts = [v for v in P.vertices]
    with pytest.raises(DimensionUnsupported):
        validate_polytope(verts)


def test_gauge_l1_example():
    assert gauge_norm(crosspolytope(2), (3, -1)) == 4


def test_submodular_gauge_values():
    # f({1}) = 2, f({2}) = 1, f({1,2}) = 2: the extension is 2|x1| when |x1| >= |x2|, else |x1| + |x2|
    assert gauge_norm(LOV, (1, 2)) == 3
    assert gauge_norm(LOV, (3, 1)) == 6
    assert gauge_norm(additive_norm([(1, 0), (0, 1), (1, 1)]), (2, 2)) == 8


@settings(max_examples=100, deadline=None)
@given(vec2)
def test_gauge_matches_closed_forms_2d(x):
    assert gauge_norm(L1, x) == oracles.l1(x)
    assert gauge_norm(LINF, x) == oracles.linf(x)
    assert gauge_norm(ADD, x) == oracles.additive([(1, 0), (0, 1), (1, 1)], x)
    assert gauge_norm(LOV, x) == oracles.lovasz_two(2, 1, 2, x)
    assert math.isclose(gauge_norm(OCT, [float(c) for c in x]), oracles.ngon_gauge(8, x), abs_tol=1e-9)


@settings(max_examples=60, deadline=None)
@given(vec3)
def test_gauge_matches_closed_forms_3d(x):
    assert gauge_norm(L1_3, x) == oracles.l1(x)
    assert gauge_norm(LINF_3, x) == oracles.linf(x)


@settings(max_examples=100, deadline=None)
@given(vec2, vec2, st.fractions(min_value=-3, max_value=3, max_denominator=5))
def test_gauge_is_a_norm(x, y, t):
    for P in (L1, LOV):
        assert gauge_norm(P, x) == gauge_norm(P, tuple(-a for a in x))
        s = tuple(a + b for a, b in zip(x, y))
        assert gauge_norm(P, s) <= gauge_norm(P, x) + gauge_norm(P, y)
        assert gauge_norm(P, tuple(t * a for a in x)) == abs(t) * gauge_norm(P, x)
        assert gauge_norm(P, x) > 0


@settings(max_examples=100, deadline=None)
@given(vec2)
def test_attaining_classes_attain(x):
    P = LINF
    n = gauge_norm(P, x)
    att = attaining_classes(P, x)
    assert att
    for c, s in att:
        assert s * sum(a * b for a, b in zip(x, c.fhat)) == n


def test_cone_membership():
    P = crosspolytope(2)
    F1, F2 = P.classes
    assert cone_membership(P, F1, (1, 1)) is Membership.INTERIOR_POSITIVE
    assert cone_membership(P, F1, (-2, -1)) is Membership.INTERIOR_NEGATIVE
    assert cone_membership(P, F1, (1, 0)) is Membership.BOUNDARY
    assert cone_membership(P, F2, (1, 1)) is Membership.OUTSIDE


def test_zero_vector_rejected():
    with pytest.raises(ZeroVector):
        attaining_classes(hypercube(2), (0, 0))


def test_nonextreme_point_named():
    with pytest.raises(NonExtremePoint, match="1/2, 2/5"):
        validate_polytope([(1, 0), (-1, 0), (0, 1), (0, -1), (Fr(1, 2), Fr(2, 5))])


def _cone_oracle(P, fc, x):
    """x is a nonnegative (or nonpositive) combination of two member vertices of the facet."""
    from polyrigid import linalg

    a, b = [P.vertices[i] for i in fc.members]
    lam = linalg.solve([[a[0], b[0]], [a[1], b[1]]], list(x))
    if lam is None:
        return "Outside"
    if all(t >= 0 for t in lam):
        return "Positive"
    if all(t <= 0 for t in lam):
        return "Negative"
    return "Outside"


@settings(max_examples=100, deadline=None)
@given(vec2)
def test_cone_membership_matches_vertex_combination_oracle(x):
    for P in (L1, LINF, LOV, ADD):
        for c in P.classes:
            got = cone_membership(P, c, x)
            want = _cone_oracle(P, c, x)
            if want == "Outside":
                assert got is Membership.OUTSIDE
            elif got is not Membership.BOUNDARY:
                assert got is (Membership.INTERIOR_POSITIVE if want == "Positive" else Membership.INTERIOR_NEGATIVE)


def test_validation_errors():
    with pytest.raises(NotSymmetric):
        validate_polytope([(1, 0), (0, 1), (-1, -1)])
    with pytest.raises(NonExtremePoint):
        validate_polytope([(1, 0), (-1, 0), (0, 1), (0, -1), (Fr(1, 4), Fr(1, 4)), (Fr(-1, 4), Fr(-1, 4))])
    with pytest.raises(NotFullDimensional):
        validate_polytope([(1, 1), (-1, -1)])


def test_interior_direction_is_in_open_cone():
    for P in (crosspolytope(2), hypercube(2), lovasz_norm(example_submodular())):
        for c in P.classes:
            for s in (1, -1):
                x = interior_direction(P, c, s)
                want = Membership.INTERIOR_POSITIVE if s > 0 else Membership.INTERIOR_NEGATIVE
                assert cone_membership(P, c, x) is want
                assert len(facet_vertices(P, c, s)) == 2


def test_polar_round_trip():
    P = hypercube(2)
    Q = polytope_from_polar([c.fhat for c in P.classes], 2)
    assert sorted(Q.vertices) == sorted(P.vertices)


def test_float_backend_conversion():
    P = with_backend(hypercube(2), "float")
    assert not P.exact and gauge_norm(P, (0.5, -2.0)) == 2.0
    with pytest.raises(ValidationError):
        with_backend(ngon(8), "exact")


def test_gallery_errors():
    with pytest.raises(OddN):
        ngon(7)
    with pytest.raises(DegenerateB):
        additive_norm([(1, 1), (2, 2)])
    with pytest.raises(NotSubmodular):
        SubmodularFn.from_dict(2, {"1": 1, "2": 1, "1,2": 3}).validate()
    with pytest.raises(NotMonotone):
        SubmodularFn.from_dict(2, {"1": 2, "2": 1, "1,2": 1}).validate()


@pytest.mark.parametrize("name,count", [("l1:2", 2), ("linf:3", 3), ("ngon:6", 3), ("additive:[[1,0],[0,1]]", 2),
                                        ('lovasz:{"1":2,"2":1,"1,2":2}', 3)])
def test_parse_gallery_names(name, count):
    assert len(parse_gallery_name(name).classes) == count


def test_parse_gallery_rejects_unknown():
    with pytest.raises(ValidationError):
        parse_gallery_name("hexagon:2")
