"""Finite truncations of countable frameworks and tower-based evidence."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .combinatorics import components, monochrome_decomposition, vertex_colour_screen
from .errors import ValidationError
from .framework import Framework, Graph
from .gallery import hypercube, ngon
from .polytope import Polytope
from .rigidity import is_infinitesimally_rigid, is_relatively_rigid, rank_of


@dataclass(frozen=True)
class FrameworkFamily:
    """Lazily generated truncations ``k -> (G_k, p)`` for k = 1, 2, ...

    Consecutive truncations are meant to nest: vertex ids of G_k are a prefix
    of those of G_{k+1}, with the same points and a subset of the edges.
    """

    name: str
    polytope: Polytope
    generator: Callable[[int], Framework]
    vertex_complete: bool = True

    def truncation(self, k: int) -> Framework:
        if k < 1:
            raise ValidationError("truncation index starts at 1")
        return self.generator(k)


def nests(small: Framework, big: Framework) -> bool:
    if small.n > big.n:
        return False
    if any(p != q for p, q in zip(small.placement, big.placement[:small.n])):
        return False
    return set(small.graph.edges) <= set(big.graph.edges)


# -- families ------------------------------------------------------------------


def _zigzag_points(k: int) -> list[tuple[Fraction, Fraction]]:
    """v0 above the chain, then odd vertices on x = 0 and even vertices to their left."""
    ys, xs = [Fraction(0)], [Fraction(2)]
    for _ in range(k - 1):
        ys.append(ys[-1] - (xs[-1] + 1))
        xs.append(2 * xs[-1] + 2)
    pts = [(Fraction(0), Fraction(1))]
    for x, y in zip(xs, ys):
        pts += [(Fraction(0), y), (-x, y)]
    return pts


def _zigzag_edges(k: int) -> list[tuple[int, int]]:
    edges = [(0, 1), (0, 2)]
    for m in range(1, k + 1):
        edges.append((2 * m - 1, 2 * m))  # rung
        if m < k:
            edges += [(2 * m - 1, 2 * m + 1),  # vertical chain
                      (2 * m, 2 * m + 1),      # cross edge
                      (2 * m, 2 * m + 2)]      # diagonal chain
    return edges


def zigzag_family(P: Polytope | None = None) -> FrameworkFamily:
    """Two interleaved chains joined by rungs in the max-norm plane.

    Truncation k has vertices v0..v_{2k}. Every edge has one colour; the last
    vertex meets only the x-dominant colour, so no truncation is rigid, while
    in the union both colour classes are spanning trees.
    """
    P = P or hypercube(2)
    if P.dim != 2 or len(P.classes) != 2 or {c.fhat for c in P.classes} != {(1, 0), (0, 1)}:
        raise ValidationError("the zigzag family is defined for the max norm in the plane")

    def gen(k: int) -> Framework:
        return Framework(Graph(2 * k + 1, _zigzag_edges(k)), _zigzag_points(k), P)

    return FrameworkFamily("zigzag", P, gen)


def constant_family(fw: Framework, name: str = "constant") -> FrameworkFamily:
    return FrameworkFamily(name, fw.polytope, lambda k: fw)


def disjoint_family(P: Polytope | None = None) -> FrameworkFamily:
    """k + 1 isolated joints on a line."""
    P = P or hypercube(2)

    def gen(k: int) -> Framework:
        pts = [tuple([i] + [0] * (P.dim - 1)) for i in range(k + 1)]
        return Framework(Graph(k + 1, ()), pts, P)

    return FrameworkFamily("disjoint", P, gen)


def star_family(P: Polytope | None = None) -> FrameworkFamily:
    """K_{1,k}: a centre at the origin and leaves at extreme points, cycling outwards."""
    P = P or ngon(8)
    verts = P.vertices

    def gen(k: int) -> Framework:
        pts = [tuple(P.coerce(0) for _ in range(P.dim))]
        for j in range(k):
            r = P.coerce(1 + j // len(verts))
            pts.append(tuple(r * a for a in verts[j % len(verts)]))
        return Framework(Graph(k + 1, [(0, j) for j in range(1, k + 1)]), pts, P)

    return FrameworkFamily("star", P, gen)


# -- reports -------------------------------------------------------------------


@dataclass(frozen=True)
class TowerLevel:
    k: int
    nested: bool
    relatively_rigid: bool


@dataclass(frozen=True)
class TowerReport:
    family: str
    levels: tuple[TowerLevel, ...]
    note: str

    @property
    def all_relatively_rigid(self) -> bool:
        return all(lv.relatively_rigid and lv.nested for lv in self.levels)


def tower_certificate(fam: FrameworkFamily, depth: int) -> TowerReport:
    """Check that G_k is relatively rigid in G_{k+1} for k = 1..depth-1.

    A positive answer at every level is finite evidence for rigidity of the
    union, not a proof.
    """
    if depth < 2:
        raise ValidationError("tower certificate needs depth >= 2")
    levels = []
    colours = set()
    prev = fam.truncation(1)
    for k in range(1, depth):
        nxt = fam.truncation(k + 1)
        colours |= {c.index for c in nxt.colouring.framework_classes}
        ok = nests(prev, nxt)
        rel = ok and is_relatively_rigid(nxt, range(prev.n))
        levels.append(TowerLevel(k, ok, rel))
        prev = nxt
    note = "finite-depth evidence only"
    if len(colours) != fam.polytope.dim:
        note += f"; {len(colours)} colours differ from d = {fam.polytope.dim}, so no equivalence applies"
    return TowerReport(fam.name, tuple(levels), note)


@dataclass(frozen=True)
class ProbeLevel:
    k: int
    n: int
    rank: int
    rigid: bool
    flex_vertex: int | None  # a vertex meeting fewer than d colours, if any


def sequential_rigidity_probe(fam: FrameworkFamily, depth: int) -> tuple[ProbeLevel, ...]:
    if depth < 1:
        raise ValidationError("probe depth must be >= 1")
    out = []
    for k in range(1, depth + 1):
        fw = fam.truncation(k)
        screen = vertex_colour_screen(fw)
        out.append(ProbeLevel(k, fw.n, rank_of(fw), is_infinitesimally_rigid(fw),
                              None if screen else screen.moving[0]))
    return tuple(out)


@dataclass(frozen=True)
class ColourGrowth:
    k: int
    label: str
    vertices: int
    edges: int
    connected: bool
    acyclic: bool


def colour_growth(fam: FrameworkFamily, depth: int) -> tuple[ColourGrowth, ...]:
    """Per level and colour: size of the monochrome subgraph, and whether it is a tree on its vertices."""
    out = []
    for k in range(1, depth + 1):
        fw = fam.truncation(k)
        dec = monochrome_decomposition(fw)
        for c in dec.classes:
            es = dec.edges(c)
            vs = sorted({v for e in es for v in e})
            pos = {v: i for i, v in enumerate(vs)}
            comps = components(len(vs), [(pos[a], pos[b]) for a, b in es])
            out.append(ColourGrowth(k, c.label, len(vs), len(es), len(comps) == 1,
                                    len(es) == len(vs) - len(comps)))
    return tuple(out)


def summarize(tower: TowerReport, probe: tuple[ProbeLevel, ...]) -> str:
    rigid_union = tower.all_relatively_rigid
    any_rigid = any(p.rigid for p in probe)
    if rigid_union and not any_rigid:
        return "rigid union evidence, no rigid truncation"
    if rigid_union and all(p.rigid for p in probe):
        return "all truncations rigid"
    if rigid_union:
        return "rigid union evidence, some rigid truncations"
    return "no tower evidence"
