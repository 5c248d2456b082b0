"""Placement-carrying graph moves in the plane and the K4 gadget.

Every move takes a well-positioned framework and returns a well-positioned
one; the new vertex always gets the next free index. Small parameters (the
offsets of vertex splits, the scale of a planted K4) are found by halving
from 1/4 of a local length scale and accepted only after the whole
framework is recoloured and compared with the expected colours.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .errors import (
    DimensionUnsupported,
    EmptyConeIntersection,
    EmptyIntersection,
    MovePreconditionError,
    NotWellPositioned,
    RadiusSearchFailed,
    SearchFailed,
    CoincidentEndpoints,
)
from .framework import Edge, Framework, Graph, _jitter, complete_graph, is_well_positioned, norm_edge
from .polytope import FacetClass, Polytope, dot, facet_vertices, gauge_norm, interior_direction
from .rigidity import is_minimally_rigid

MAX_HALVINGS = 64


# -- graph-level moves ------------------------------------------------------


def graph_h1(G: Graph, v1: int, v2: int) -> Graph:
    v0 = G.n
    return Graph(G.n + 1, list(G.edges) + [(v0, v1), (v0, v2)])


def graph_h2(G: Graph, v1: int, v2: int, v3: int) -> Graph:
    v0 = G.n
    e = norm_edge(v1, v2)
    edges = [f for f in G.edges if f != e] + [(v0, v1), (v0, v2), (v0, v3)]
    return Graph(G.n + 1, edges)


def graph_vsplit(G: Graph, v1: int, v2: int, reassigned: Iterable[int]) -> Graph:
    """New vertex v0 joined to v1 and v2; each edge v1-w with w in ``reassigned`` moves to v0."""
    v0 = G.n
    moved = set(reassigned)
    edges = []
    for a, b in G.edges:
        if a == v1 and b in moved:
            edges.append((v0, b))
        elif b == v1 and a in moved:
            edges.append((v0, a))
        else:
            edges.append((a, b))
    edges += [(v0, v1), (v0, v2)]
    return Graph(G.n + 1, edges)


def graph_vtok4(G: Graph, v0: int, assignment: Mapping[int, int] | None = None) -> Graph:
    """Replace v0 by K4 on (v0, n, n+1, n+2); neighbour w is reattached to gadget vertex assignment[w]."""
    assignment = dict(assignment or {})
    n = G.n
    gadget = [v0, n, n + 1, n + 2]
    edges = []
    for a, b in G.edges:
        if v0 in (a, b):
            w = b if a == v0 else a
            edges.append((gadget[assignment.get(w, 0)], w))
        else:
            edges.append((a, b))
    edges += [(gadget[i], gadget[j]) for i in range(4) for j in range(i + 1, 4)]
    return Graph(n + 3, edges)


# -- shared helpers ---------------------------------------------------------


def _require_plane(fw_or_P) -> None:
    d = fw_or_P.dim
    if d != 2:
        raise DimensionUnsupported(f"graph moves are defined in the plane only (d={d})")


def _require_well_positioned(fw: Framework) -> None:
    wp = is_well_positioned(fw)
    if not wp:
        raise NotWellPositioned(f"edge {wp.edge} has colours {[c.label for c in wp.classes]}")


def _as_class(P: Polytope, c: FacetClass | str) -> FacetClass:
    if isinstance(c, str):
        return P.class_by_label(c)
    for k in P.classes:
        if P.close(k.fhat[0], c.fhat[0]) and all(P.close(a, b) for a, b in zip(k.fhat, c.fhat)):
            return k
    raise MovePreconditionError(f"class {c} does not belong to this polytope")


def _colour(fw: Framework, e: Edge) -> FacetClass:
    return fw.colouring.classes(e)[0]


def _try_framework(G: Graph, pts, P: Polytope) -> Framework | None:
    try:
        return Framework(G, pts, P)
    except CoincidentEndpoints:
        return None


def _matches(fw: Framework, expected: Mapping[Edge, FacetClass]) -> bool:
    """Every edge has exactly the expected single colour."""
    col = fw.colouring
    for e, c in expected.items():
        cs = col.edge_classes[e]
        if len(cs) != 1 or cs[0].index != c.index:
            return False
    return True


def _direction_candidates(P: Polytope, c: FacetClass) -> list:
    """Points of the open facet cone: weighted averages of the facet's two vertices."""
    a, b = facet_vertices(P, c, 1)[:2]
    out = [interior_direction(P, c, 1)]
    for wa, wb in ((1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)):
        s = P.coerce(wa + wb)
        out.append(tuple((P.coerce(wa) * x + P.coerce(wb) * y) / s for x, y in zip(a, b)))
    return out


def _local_scale(fw: Framework, v: int):
    lengths = [gauge_norm(fw.polytope, fw.edge_vector(e)) for e in fw.graph.incident(v)]
    return min(lengths) if lengths else fw.polytope.coerce(1)


def _halvings(P: Polytope, start):
    x = P.coerce(start) / 4
    for _ in range(MAX_HALVINGS):
        yield x
        x = x / 2


def _distinct(P: Polytope, p, others) -> bool:
    return all(not P.is_zero_vector(tuple(a - b for a, b in zip(p, q))) for q in others)


# -- Henneberg 1 ------------------------------------------------------------


def henneberg1(fw: Framework, v1: int, v2: int, c1: FacetClass | str, c2: FacetClass | str,
               signs: tuple[int, int] | None = None) -> Framework:
    """Add a vertex v0 joined to v1 (colour c1) and v2 (colour c2).

    p_v0 is the meeting point of a line through p_v1 inside the double cone
    of c1 and a line through p_v2 inside the double cone of c2. With
    ``signs`` the new point must lie in ``p_vi + signs[i] * cone(F_i)``.
    """
    _require_plane(fw)
    P = fw.polytope
    if v1 == v2:
        raise MovePreconditionError("Henneberg 1 needs two distinct base vertices")
    for v in (v1, v2):
        if not 0 <= v < fw.n:
            raise MovePreconditionError(f"vertex {v} is not in the framework")
    c1, c2 = _as_class(P, c1), _as_class(P, c2)
    if c1.index == c2.index:
        raise MovePreconditionError("Henneberg 1 needs two distinct colours")
    _require_well_positioned(fw)
    p1, p2 = fw.placement[v1], fw.placement[v2]
    v0 = fw.n
    G = graph_h1(fw.graph, v1, v2)
    expected = {e: _colour(fw, e) for e in fw.graph.edges}
    expected[(v1, v0)] = c1
    expected[(v2, v0)] = c2
    for d1 in _direction_candidates(P, c1):
        for d2 in _direction_candidates(P, c2):
            # p1 + s d1 = p2 + t d2
            sol = linalg.solve([[d1[0], -d2[0]], [d1[1], -d2[1]]],
                               [p2[0] - p1[0], p2[1] - p1[1]], P.linalg_tol)
            if sol is None:
                continue
            s, t = sol
            if P.close(s, 0) or P.close(t, 0):
                continue
            if signs is not None and ((s > 0) != (signs[0] > 0) or (t > 0) != (signs[1] > 0)):
                continue
            p0 = tuple(a + s * b for a, b in zip(p1, d1))
            if not _distinct(P, p0, fw.placement):
                continue
            cand = _try_framework(G, list(fw.placement) + [p0], P)
            if cand is not None and _matches(cand, expected):
                return cand
    raise EmptyConeIntersection(f"no point found in the chosen cones at {v1} and {v2}")


# -- Henneberg 2 ------------------------------------------------------------


def _cone_interval(P: Polytope, c: FacetClass, q0, e, sign: int):
    """Open interval of s with q0 + s e inside sign * cone(F)^o, as (lo, hi) with None for infinity."""
    a, b = facet_vertices(P, c, 1)[:2]
    A = [[a[0], b[0]], [a[1], b[1]]]
    lam0 = linalg.solve(A, list(q0), P.linalg_tol)
    lam1 = linalg.solve(A, list(e), P.linalg_tol)
    lo, hi = None, None
    for c0, c1 in zip(lam0, lam1):
        c0, c1 = sign * c0, sign * c1
        if P.close(c1, 0):
            if c0 <= 0 or P.close(c0, 0):
                return None
            continue
        root = -c0 / c1
        if c1 > 0:
            lo = root if lo is None else max(lo, root)
        else:
            hi = root if hi is None else min(hi, root)
    if lo is not None and hi is not None and (hi <= lo or P.close(hi, lo)):
        return None
    return lo, hi


def _interval_points(P: Polytope, lo, hi) -> list:
    h = P.coerce(Fraction(1, 2))
    fr = [Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4), Fraction(3, 4)]
    if lo is not None and hi is not None:
        return [lo + (hi - lo) * P.coerce(f) for f in fr]
    steps = [h, P.coerce(1), P.coerce(2), P.coerce(3), P.coerce(5)]
    if lo is not None:
        return [lo + w for w in steps]
    if hi is not None:
        return [hi - w for w in steps]
    return [h, -h, P.coerce(2), P.coerce(-2), P.coerce(3)]


def henneberg2(fw: Framework, edge: Sequence[int], v3: int, c2: FacetClass | str) -> Framework:
    """Subdivide v1v2 by a new vertex v0 on its line and join v0 to v3 with colour c2."""
    _require_plane(fw)
    P = fw.polytope
    v1, v2 = int(edge[0]), int(edge[1])
    e12 = norm_edge(v1, v2)
    if not fw.graph.has_edge(v1, v2):
        raise MovePreconditionError(f"{e12} is not an edge")
    if v3 in (v1, v2) or not 0 <= v3 < fw.n:
        raise MovePreconditionError("Henneberg 2 needs a third vertex distinct from the edge")
    c2 = _as_class(P, c2)
    _require_well_positioned(fw)
    c12 = _colour(fw, e12)
    if c2.index == c12.index:
        raise MovePreconditionError("c2 must differ from the colour of the split edge")
    p1, p2, p3 = fw.placement[v1], fw.placement[v2], fw.placement[v3]
    v0 = fw.n
    G = graph_h2(fw.graph, v1, v2, v3)
    expected = {e: _colour(fw, e) for e in fw.graph.edges if e != e12}
    expected[(v1, v0)] = c12
    expected[(v2, v0)] = c12
    expected[(v3, v0)] = c2
    direction = tuple(b - a for a, b in zip(p1, p2))
    q0 = tuple(a - b for a, b in zip(p1, p3))
    for sign in (1, -1):
        iv = _cone_interval(P, c2, q0, direction, sign)
        if iv is None:
            continue
        for s in _interval_points(P, *iv):
            if P.close(s, 0) or P.close(s, 1):
                continue
            p0 = tuple(a + s * b for a, b in zip(p1, direction))
            if not _distinct(P, p0, fw.placement):
                continue
            cand = _try_framework(G, list(fw.placement) + [p0], P)
            if cand is not None and _matches(cand, expected):
                return cand
    raise EmptyIntersection(f"line through {v1},{v2} misses the double cone of {c2.label} at {v3}")


# -- vertex split -----------------------------------------------------------


def vertex_split(fw: Framework, v1: int, edge: Sequence[int], reassigned: Iterable = (),
                 c2: FacetClass | str | None = None) -> Framework:
    """Split v1: the new v0 sits at p_v1 + delta * (interior point of c2's facet).

    ``edge`` is v1v2; ``reassigned`` lists neighbours w (or edges v1w) whose
    edge moves from v1 to v0 keeping its colour.
    """
    _require_plane(fw)
    P = fw.polytope
    a, b = int(edge[0]), int(edge[1])
    if v1 not in (a, b):
        raise MovePreconditionError(f"edge {edge} is not incident to {v1}")
    v2 = b if a == v1 else a
    e12 = norm_edge(v1, v2)
    if not fw.graph.has_edge(v1, v2):
        raise MovePreconditionError(f"{e12} is not an edge")
    moved = set()
    for r in reassigned:
        w = r if isinstance(r, int) else (r[1] if r[0] == v1 else r[0])
        if not fw.graph.has_edge(v1, w) or w == v2:
            raise MovePreconditionError(f"edge {v1}-{w} cannot be reassigned")
        moved.add(w)
    _require_well_positioned(fw)
    c12 = _colour(fw, e12)
    if c2 is None:
        raise MovePreconditionError("vertex split needs a colour c2")
    c2 = _as_class(P, c2)
    if c2.index == c12.index:
        raise MovePreconditionError("c2 must differ from the colour of v1v2")
    v0 = fw.n
    G = graph_vsplit(fw.graph, v1, v2, moved)
    expected = {}
    for e in fw.graph.edges:
        if v1 in e and (e[0] in moved or e[1] in moved):
            w = e[0] if e[1] == v1 else e[1]
            expected[norm_edge(v0, w)] = _colour(fw, e)
        else:
            expected[e] = _colour(fw, e)
    expected[(v1, v0)] = c2
    expected[(v2, v0)] = c12
    direction = interior_direction(P, c2, 1)
    p1 = fw.placement[v1]
    for delta in _halvings(P, _local_scale(fw, v1)):
        p0 = tuple(x + delta * y for x, y in zip(p1, direction))
        if not _distinct(P, p0, fw.placement):
            continue
        cand = _try_framework(G, list(fw.placement) + [p0], P)
        if cand is not None and _matches(cand, expected):
            return cand
    raise RadiusSearchFailed(f"no colour-preserving offset for splitting {v1}")


# -- K4 gadget and vertex-to-K4 ----------------------------------------------


def _signed_facets_at(P: Polytope, x0) -> list[tuple[FacetClass, int]]:
    out = []
    for c in P.classes:
        v = dot(x0, c.fhat)
        if P.close(v, 1):
            out.append((c, 1))
        elif P.close(v, -1):
            out.append((c, -1))
    return out


def _other_vertex(P: Polytope, c: FacetClass, sign: int, x0):
    for y in facet_vertices(P, c, sign):
        if not P.is_zero_vector(tuple(a - b for a, b in zip(y, x0))):
            return y
    raise SearchFailed("facet has a single vertex")


def k4_gadget(P: Polytope) -> Framework:
    """Well-positioned minimally rigid K4 built from an extreme point and its two facets.

    With x1 on F1 and x2 on F2 near the extreme point x0, normalised so that
    x1 . f2 = x2 . f1, the placement is 0, x1, (1-eps) x2, x1 + (1+eps) x2.
    """
    _require_plane(P)
    x0 = P.vertices[0]
    (cls1, s1), (cls2, s2) = _signed_facets_at(P, x0)[:2]
    f1 = tuple(s1 * a for a in cls1.fhat)
    f2 = tuple(s2 * a for a in cls2.fhat)
    a = _other_vertex(P, cls1, s1, x0)
    b = _other_vertex(P, cls2, s2, x0)
    one = P.coerce(1)
    ratio = (one - dot(a, f2)) / (one - dot(b, f1))
    G = complete_graph(4)
    for t in _halvings(P, 1):
        s = t * ratio
        x1 = tuple(p + t * (q - p) for p, q in zip(x0, a))
        x2 = tuple(p + s * (q - p) for p, q in zip(x0, b))
        for eps in _halvings(P, 1):
            pts = [(P.coerce(0), P.coerce(0)), x1,
                   tuple((one - eps) * c for c in x2),
                   tuple(p + (one + eps) * q for p, q in zip(x1, x2))]
            fw = _try_framework(G, pts, P)
            if fw is None:
                continue
            expected = {(0, 1): cls1, (0, 2): cls2, (1, 3): cls2, (2, 3): cls1, (0, 3): cls2}
            if not _matches(fw, expected):
                continue
            c12 = fw.colouring.classes((1, 2))
            if len(c12) != 1 or c12[0].index == cls2.index:
                continue
            if is_minimally_rigid(fw):
                return fw
    raise SearchFailed("K4 gadget parameter search exhausted")


def vertex_to_k4(fw: Framework, v0: int, reassignment: Mapping | None = None,
                 gadget: Framework | None = None) -> Framework:
    """Replace v0 by a small copy of the K4 gadget planted at p_v0.

    ``reassignment`` maps a neighbour w (or the edge v0w) to the gadget vertex
    0..3 that inherits the edge; 0 is v0 itself and 1..3 are the new
    vertices n, n+1, n+2.
    """
    _require_plane(fw)
    P = fw.polytope
    if not 0 <= v0 < fw.n:
        raise MovePreconditionError(f"vertex {v0} is not in the framework")
    assignment: dict[int, int] = {}
    for key, k in (reassignment or {}).items():
        w = key if isinstance(key, int) else (key[1] if key[0] == v0 else key[0])
        if not fw.graph.has_edge(v0, w):
            raise MovePreconditionError(f"{v0}-{w} is not an edge")
        if k not in (0, 1, 2, 3):
            raise MovePreconditionError(f"gadget vertex {k!r} is not one of 0..3")
        assignment[w] = k
    _require_well_positioned(fw)
    gadget = gadget or k4_gadget(P)
    n = fw.n
    ids = [v0, n, n + 1, n + 2]
    G = graph_vtok4(fw.graph, v0, assignment)
    expected = {}
    for e in fw.graph.edges:
        if v0 in e:
            w = e[1] if e[0] == v0 else e[0]
            expected[norm_edge(ids[assignment.get(w, 0)], w)] = _colour(fw, e)
        else:
            expected[e] = _colour(fw, e)
    for i in range(4):
        for j in range(i + 1, 4):
            expected[norm_edge(ids[i], ids[j])] = gadget.colouring.classes((i, j))[0]
    diam = max(gauge_norm(P, q) for q in gadget.placement[1:])
    base = fw.placement[v0]
    start = _local_scale(fw, v0) / diam if fw.graph.incident(v0) else P.coerce(4)
    for eps in _halvings(P, start):
        planted = [tuple(a + eps * b for a, b in zip(base, q)) for q in gadget.placement]
        pts = list(fw.placement)
        pts[v0] = planted[0]
        pts += planted[1:]
        if not all(_distinct(P, q, fw.placement[:v0] + fw.placement[v0 + 1:]) for q in planted):
            continue
        cand = _try_framework(G, pts, P)
        if cand is not None and _matches(cand, expected):
            return cand
    raise RadiusSearchFailed(f"no colour-preserving scale for expanding {v0}")


def colour_preserving_jitter(fw: Framework, seed: int = 0) -> Framework:
    """Move every joint slightly without changing any edge colour or sign.

    The rigidity matrix depends only on colours and signs, so the result has
    the same matrix; it is used to escape collinear configurations.
    """
    P = fw.polytope
    scale = min((gauge_norm(P, fw.edge_vector(e)) for e in fw.graph.edges), default=P.coerce(1))
    col = fw.colouring
    for attempt, r in enumerate(_halvings(P, scale)):
        pts = []
        for v, p in enumerate(fw.placement):
            delta = tuple(P.coerce(_jitter(seed, v, i, attempt)) for i in range(fw.dim))
            pts.append(tuple(a + r * b for a, b in zip(p, delta)))
        cand = _try_framework(fw.graph, pts, P)
        if cand is not None and cand.colouring.edge_classes == col.edge_classes \
                and cand.colouring.signs == col.signs:
            return cand
    raise RadiusSearchFailed("no colour-preserving jitter found")
