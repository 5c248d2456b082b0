"""Monochrome subgraphs, spanning-tree criteria, flex screens and (d,d)-sparsity."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import linalg
from .errors import BadColourSet
from .framework import Edge, Framework, Graph, norm_edge
from .polytope import FacetClass
from .rigidity import build_rigidity_matrix, is_minimally_rigid, is_infinitesimally_rigid


@dataclass(frozen=True)
class MonochromeDecomposition:
    subgraphs: dict  # FacetClass label -> tuple of edges
    classes: tuple[FacetClass, ...]
    n: int

    @property
    def colour_count(self) -> int:
        return len(self.classes)

    def edges(self, fclass: FacetClass | str) -> tuple[Edge, ...]:
        key = fclass if isinstance(fclass, str) else fclass.label
        return self.subgraphs.get(key, ())


def monochrome_decomposition(fw: Framework) -> MonochromeDecomposition:
    col = fw.colouring
    classes = tuple(col.framework_classes)
    sub = {c.label: [] for c in classes}
    for e in fw.graph.edges:
        for c in col.edge_classes[e]:
            sub[c.label].append(e)
    return MonochromeDecomposition({k: tuple(v) for k, v in sub.items()}, classes, fw.n)


def components(n: int, edges: Iterable[Edge]) -> list[list[int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


def is_spanning_connected(n: int, edges: Iterable[Edge]) -> bool:
    return n <= 1 or len(components(n, edges)) == 1


def is_spanning_tree(n: int, edges: Sequence[Edge]) -> bool:
    return len(edges) == n - 1 and is_spanning_connected(n, edges)


# -- flex witnesses ---------------------------------------------------------


@dataclass(frozen=True)
class FlexWitness:
    """A nonconstant flex ``u`` (flattened, d entries per vertex) in the matrix kernel."""

    vector: tuple
    moving: tuple[int, ...]
    reason: str

    def __bool__(self) -> bool:
        return False  # a witness means the screen did not pass


@dataclass(frozen=True)
class ScreenPass:
    def __bool__(self) -> bool:
        return True


def _common_kernel_vector(fw: Framework, classes: Sequence[FacetClass]):
    rows = [list(c.fhat) for c in classes]
    if not rows:
        one, zero = fw.polytope.coerce(1), fw.polytope.coerce(0)
        return [one] + [zero] * (fw.dim - 1)
    basis = linalg.kernel_basis(rows, fw.dim, fw.polytope.linalg_tol)
    return basis[0] if basis else None


def _assemble(fw: Framework, x, moving: Iterable[int]):
    zero = fw.polytope.coerce(0)
    u = [zero] * (fw.dim * fw.n)
    for v in moving:
        u[fw.dim * v:fw.dim * v + fw.dim] = list(x)
    return tuple(u)


def verify_flex(fw: Framework, u: Sequence) -> bool:
    """u is in the kernel of the rigidity matrix and is not constant."""
    M = build_rigidity_matrix(fw)
    P = fw.polytope
    scale = max((abs(a) for a in u), default=1)
    if not all(P.close(r, 0, scale) for r in linalg.mat_vec(M.row_vectors, u)):
        return False
    d = fw.dim
    ref = u[:d]
    return any(not P.close(u[d * v + i], ref[i], scale) for v in range(fw.n) for i in range(d))


def vertex_colour_screen(fw: Framework) -> ScreenPass | FlexWitness:
    """Flag a vertex meeting fewer than d colours and move it alone."""
    col = fw.colouring
    d = fw.dim
    for v in range(fw.n):
        cs = col.vertex_classes(v)
        if len(cs) < d:
            x = _common_kernel_vector(fw, cs)
            u = _assemble(fw, x, [v])
            return FlexWitness(u, (v,), f"vertex {v} meets {len(cs)} < {d} colours")
    return ScreenPass()


def cut_screen(fw: Framework, C: Iterable[FacetClass | str]) -> ScreenPass | FlexWitness:
    """Check that the colours in C together connect G; otherwise split G and shear one side."""
    P = fw.polytope
    labels = {c if isinstance(c, str) else c.label for c in C}
    phi = fw.colouring.framework_classes
    rest = [c for c in phi if c.label not in labels]
    if len(rest) >= fw.dim:
        raise BadColourSet(f"{len(rest)} colours outside C; need fewer than {fw.dim}")
    edges = [e for e in fw.graph.edges if any(c.label in labels for c in fw.colouring.edge_classes[e])]
    comps = components(fw.n, edges)
    if len(comps) <= 1:
        return ScreenPass()
    x = _common_kernel_vector(fw, rest)
    u = _assemble(fw, x, comps[0])
    return FlexWitness(u, tuple(comps[0]), f"colours {sorted(labels)} leave {len(comps)} components")


def screen_all_cuts(fw: Framework) -> dict[tuple[str, ...], ScreenPass | FlexWitness]:
    """Run the cut screen for every C with |Phi \\ C| = d - 1."""
    phi = fw.colouring.framework_classes
    k = fw.dim - 1
    out = {}
    if len(phi) < k:
        return out
    for removed in itertools.combinations(phi, k):
        C = [c for c in phi if c not in removed]
        out[tuple(c.label for c in C)] = cut_screen(fw, C)
    return out


# -- spanning-tree criteria ----------------------------------------------------


class TreeVerdict(enum.Enum):
    RIGID = "Rigid"
    FLEXIBLE = "Flexible"
    NOT_APPLICABLE = "NotApplicable"


class MinimalVerdict(enum.Enum):
    MINIMALLY_RIGID = "MinimallyRigid"
    NO = "No"
    NOT_APPLICABLE = "NotApplicable"


def tree_criterion(fw: Framework) -> TreeVerdict:
    dec = monochrome_decomposition(fw)
    if dec.colour_count != fw.dim:
        return TreeVerdict.NOT_APPLICABLE
    for c in dec.classes:
        if not is_spanning_connected(fw.n, dec.edges(c)):
            return TreeVerdict.FLEXIBLE
    return TreeVerdict.RIGID


def minimal_tree_criterion(fw: Framework) -> tuple[MinimalVerdict, str]:
    """Spanning-tree test for minimal rigidity, with the route taken.

    With d colours and a well-positioned placement the tree test is an
    equivalence. Without well-positioning, trees still certify minimal
    rigidity; otherwise the answer comes from the rank test.
    """
    dec = monochrome_decomposition(fw)
    if dec.colour_count != fw.dim:
        return MinimalVerdict.NOT_APPLICABLE, "colour count differs from d"
    trees = all(is_spanning_tree(fw.n, dec.edges(c)) for c in dec.classes)
    if trees:
        return MinimalVerdict.MINIMALLY_RIGID, "monochrome spanning trees"
    well_positioned = all(len(cs) == 1 for cs in fw.colouring.edge_classes.values())
    if well_positioned:
        return MinimalVerdict.NO, "monochrome subgraphs are not all spanning trees"
    if is_minimally_rigid(fw):
        return MinimalVerdict.MINIMALLY_RIGID, "deferred to rank test"
    return MinimalVerdict.NO, "deferred to rank test"


# -- (d,d)-sparsity via the pebble game --------------------------------------


class SparsityVerdict(enum.Enum):
    TIGHT = "Tight"
    SPARSE_ONLY = "SparseOnly"
    VIOLATION = "Violation"


@dataclass(frozen=True)
class MaxwellResult:
    verdict: SparsityVerdict
    vertices: tuple[int, ...] = ()
    edges: tuple[Edge, ...] = ()
    deficit: int = 0

    @property
    def tight(self) -> bool:
        return self.verdict is SparsityVerdict.TIGHT


class PebbleGame:
    """(k, l)-pebble game with k = l = d.

    Each vertex starts with d pebbles; an edge is accepted when d + 1 pebbles
    can be gathered on its endpoints, and is then oriented out of a vertex
    that spends one pebble. Invariant: pebbles + accepted edges = d * n.
    """

    def __init__(self, n: int, d: int):
        self.n = n
        self.k = d
        self.l = d
        self.pebbles = [d] * n
        self.out: list[list[int]] = [[] for _ in range(n)]
        self.accepted: list[Edge] = []

    def _find_pebble(self, root: int, keep: int) -> bool:
        """DFS along out-edges for a free pebble not on ``keep``, smallest ids first; reverse the path if found."""
        prev = {root: None}
        stack = [root]
        while stack:
            x = stack.pop()
            fresh = [y for y in sorted(self.out[x]) if y not in prev]
            for y in fresh:
                prev[y] = x
                if y != keep and self.pebbles[y] > 0:
                    self.pebbles[y] -= 1
                    self.pebbles[root] += 1
                    z = y
                    while prev[z] is not None:
                        p = prev[z]
                        self.out[p].remove(z)
                        self.out[z].append(p)
                        z = p
                    return True
            stack.extend(reversed(fresh))
        return False

    def reach(self, sources: Iterable[int]) -> set[int]:
        seen = set(sources)
        stack = list(seen)
        while stack:
            x = stack.pop()
            for y in self.out[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def try_edge(self, u: int, v: int) -> bool:
        while self.pebbles[u] + self.pebbles[v] < self.l + 1:
            if self.pebbles[u] < self.k and self._find_pebble(u, v):
                continue
            if self.pebbles[v] < self.k and self._find_pebble(v, u):
                continue
            return False
        src = u if self.pebbles[u] > 0 else v
        dst = v if src == u else u
        self.pebbles[src] -= 1
        self.out[src].append(dst)
        self.accepted.append(norm_edge(u, v))
        return True


def maxwell_count(G: Graph, d: int = 2) -> MaxwellResult:
    """Decide (d,d)-tightness; a rejected edge yields a violating subgraph."""
    if d < 1:
        raise ValueError("d must be >= 1")
    game = PebbleGame(G.n, d)
    for u, v in G.edges:
        if not game.try_edge(u, v):
            verts = sorted(game.reach([u, v]))
            vs = set(verts)
            es = tuple(e for e in G.edges if e[0] in vs and e[1] in vs)
            return MaxwellResult(SparsityVerdict.VIOLATION, tuple(verts), es)
    target = d * G.n - d
    if len(G.edges) == target:
        return MaxwellResult(SparsityVerdict.TIGHT)
    return MaxwellResult(SparsityVerdict.SPARSE_ONLY, deficit=target - len(G.edges))


def brute_force_sparsity(G: Graph, d: int = 2) -> SparsityVerdict:
    """Exhaustive subgraph count; exponential, for small graphs only."""
    for r in range(1, G.n + 1):
        for vs in itertools.combinations(range(G.n), r):
            s = set(vs)
            m = sum(1 for a, b in G.edges if a in s and b in s)
            if m > d * r - d:
                return SparsityVerdict.VIOLATION
    if len(G.edges) == d * G.n - d:
        return SparsityVerdict.TIGHT
    return SparsityVerdict.SPARSE_ONLY
