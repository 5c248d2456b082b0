"""Graphs, placements, frameworks and the induced edge colouring."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import CoincidentEndpoints, PerturbationFailed, ValidationError
from .polytope import FacetClass, Point, Polytope, attaining_classes, gauge_norm

Edge = tuple[int, int]


def norm_edge(v: int, w: int) -> Edge:
    if v == w:
        raise ValidationError(f"loop at vertex {v}")
    return (v, w) if v < w else (w, v)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``; edges stored as sorted pairs."""

    n: int
    edges: tuple[Edge, ...]

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        es = set()
        for e in edges:
            v, w = int(e[0]), int(e[1])
            if not (0 <= v < n and 0 <= w < n):
                raise ValidationError(f"edge {(v, w)} references a vertex outside 0..{n - 1}")
            es.add(norm_edge(v, w))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", tuple(sorted(es)))

    @property
    def vertices(self) -> range:
        return range(self.n)

    @cached_property
    def adjacency(self) -> dict[int, set[int]]:
        adj = {v: set() for v in range(self.n)}
        for v, w in self.edges:
            adj[v].add(w)
            adj[w].add(v)
        return adj

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, v: int, w: int) -> bool:
        return w in self.adjacency[v]

    def without_edge(self, e: Edge) -> "Graph":
        e = norm_edge(*e)
        return Graph(self.n, [f for f in self.edges if f != e])

    def incident(self, v: int) -> list[Edge]:
        return [e for e in self.edges if v in e]


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


@dataclass(frozen=True, eq=False)
class Framework:
    graph: Graph
    placement: tuple[Point, ...]
    polytope: Polytope

    def __post_init__(self):
        P = self.polytope
        if len(self.placement) != self.graph.n:
            raise ValidationError(
                f"placement has {len(self.placement)} points for {self.graph.n} vertices")
        object.__setattr__(self, "placement", tuple(P.point(p) for p in self.placement))
        for v, w in self.graph.edges:
            if P.is_zero_vector(self.edge_vector((v, w))):
                raise CoincidentEndpoints(f"edge {v}-{w} joins coincident points")

    @property
    def dim(self) -> int:
        return self.polytope.dim

    @property
    def n(self) -> int:
        return self.graph.n

    def edge_vector(self, e: Edge) -> Point:
        v, w = e
        return tuple(a - b for a, b in zip(self.placement[v], self.placement[w]))

    def with_graph(self, graph: Graph) -> "Framework":
        return Framework(graph, self.placement, self.polytope)

    def translated(self, c: Sequence) -> "Framework":
        c = self.polytope.point(c)
        return Framework(self.graph, [tuple(a + b for a, b in zip(p, c)) for p in self.placement],
                         self.polytope)

    def scaled(self, s) -> "Framework":
        s = self.polytope.coerce(s)
        return Framework(self.graph, [tuple(a * s for a in p) for p in self.placement], self.polytope)

    @cached_property
    def colouring(self) -> "EdgeColouring":
        return colour_edges(self)


@dataclass(frozen=True)
class EdgeColouring:
    """Framework colours per edge (orientation ``min id -> max id``).

    ``signs[e][k]`` is +1 when the edge vector lies in cone(F) and -1 when it
    lies in cone(-F), for the k-th class of ``edge_classes[e]``;
    ``interior[e]`` is True when exactly one class attains the gauge.
    """

    edge_classes: Mapping[Edge, tuple[FacetClass, ...]]
    signs: Mapping[Edge, tuple[int, ...]]
    n: int

    def classes(self, e: Edge) -> tuple[FacetClass, ...]:
        return self.edge_classes[norm_edge(*e)]

    def interior(self, e: Edge) -> bool:
        return len(self.edge_classes[norm_edge(*e)]) == 1

    def vertex_classes(self, v: int) -> list[FacetClass]:
        seen: dict[int, FacetClass] = {}
        for e, cs in self.edge_classes.items():
            if v in e:
                for c in cs:
                    seen[c.index] = c
        return [seen[k] for k in sorted(seen)]

    @property
    def framework_classes(self) -> list[FacetClass]:
        seen: dict[int, FacetClass] = {}
        for cs in self.edge_classes.values():
            for c in cs:
                seen[c.index] = c
        return [seen[k] for k in sorted(seen)]

    def labels(self) -> dict[Edge, list[str]]:
        return {e: [c.label for c in cs] for e, cs in self.edge_classes.items()}


def colour_edges(fw: Framework) -> EdgeColouring:
    classes = {}
    signs = {}
    for e in fw.graph.edges:
        x = fw.edge_vector(e)
        if fw.polytope.is_zero_vector(x):
            raise CoincidentEndpoints(f"edge {e[0]}-{e[1]} joins coincident points")
        att = attaining_classes(fw.polytope, x)
        classes[e] = tuple(c for c, _ in att)
        signs[e] = tuple(s for _, s in att)
    return EdgeColouring(classes, signs, fw.n)


@dataclass(frozen=True)
class WellPositioned:
    ok: bool
    edge: Edge | None = None
    classes: tuple[FacetClass, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def is_well_positioned(fw: Framework) -> WellPositioned:
    col = fw.colouring
    for e in fw.graph.edges:
        cs = col.edge_classes[e]
        if len(cs) != 1:
            return WellPositioned(False, e, cs)
    return WellPositioned(True)


def _jitter(seed: int, v: int, i: int, attempt: int) -> Fraction:
    rng = random.Random(f"{seed}:{v}:{i}:{attempt}")
    return Fraction(rng.randint(-(1 << 20), 1 << 20), 1 << 20)


def perturb_well_positioned(fw: Framework, radius, seed: int = 0, max_retries: int = 64) -> Framework:
    """Move every joint by at most ``radius`` (gauge norm) to reach a well-positioned placement.

    Jitter is drawn per (seed, vertex, coordinate, attempt); each retry halves it.
    """
    P = fw.polytope
    radius = P.coerce(radius)
    if radius <= 0:
        raise ValidationError("radius must be positive")
    if is_well_positioned(fw):
        return fw
    scale = radius
    for attempt in range(max_retries):
        pts = []
        for v, p in enumerate(fw.placement):
            delta = tuple(P.coerce(_jitter(seed, v, i, attempt)) for i in range(fw.dim))
            g = gauge_norm(P, delta)
            if g > 1:
                delta = tuple(a / g for a in delta)
            pts.append(tuple(a + scale * b for a, b in zip(p, delta)))
        try:
            cand = Framework(fw.graph, pts, P)
        except CoincidentEndpoints:
            cand = None
        if cand is not None and is_well_positioned(cand):
            return cand
        scale = scale / 2
    raise PerturbationFailed(f"no well-positioned placement found within {max_retries} retries")
