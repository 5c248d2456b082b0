"""Rigidity matrix, flex space and the rigidity predicates built on them."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import linalg
from .errors import EmptySubgraph, ValidationError
from .framework import Edge, Framework, Graph, norm_edge
from .polytope import FacetClass


@dataclass(frozen=True)
class RowLabel:
    edge: Edge
    fclass: FacetClass
    sign: int

    def __str__(self) -> str:
        return f"({self.edge[0]}-{self.edge[1]},{self.fclass.label})"


@dataclass(frozen=True)
class RigidityMatrix:
    rows: tuple[RowLabel, ...]
    row_vectors: tuple[tuple, ...]
    ncols: int
    dim: int
    tol: float | None  # None for the exact backend

    @property
    def backend(self) -> str:
        return "exact" if self.tol is None else "float"

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def row(self, edge: Sequence[int], fclass: FacetClass) -> tuple:
        e = norm_edge(*edge)
        for lab, vec in zip(self.rows, self.row_vectors):
            if lab.edge == e and lab.fclass.fhat == fclass.fhat:
                return vec
        raise KeyError((e, fclass.label))


@dataclass(frozen=True)
class FlexSpace:
    kernel_basis: tuple[tuple, ...]
    dim: int

    @property
    def nullity(self) -> int:
        return len(self.kernel_basis)

    @property
    def trivial_dim(self) -> int:
        return self.dim

    @property
    def flex_dim(self) -> int:
        return self.nullity - self.dim


def build_rigidity_matrix(fw: Framework) -> RigidityMatrix:
    d = fw.dim
    n = fw.n
    col = fw.colouring
    zero = fw.polytope.coerce(0)
    labels = []
    vectors = []
    for e in fw.graph.edges:
        v, w = e
        for c, s in zip(col.edge_classes[e], col.signs[e]):
            g = c.fhat if s > 0 else tuple(-a for a in c.fhat)
            row = [zero] * (d * n)
            for i in range(d):
                row[d * v + i] = g[i]
                row[d * w + i] = -g[i]
            labels.append(RowLabel(e, c, s))
            vectors.append(tuple(row))
    return RigidityMatrix(tuple(labels), tuple(vectors), d * n, d, fw.polytope.linalg_tol)


def rank_and_kernel(M: RigidityMatrix) -> tuple[int, FlexSpace]:
    rows = [list(r) for r in M.row_vectors]
    basis = linalg.kernel_basis(rows, M.ncols, M.tol) if rows else _identity(M)
    r = M.ncols - len(basis)
    return r, FlexSpace(tuple(tuple(b) for b in basis), M.dim)


def _identity(M: RigidityMatrix) -> list[list]:
    from fractions import Fraction

    one, zero = (Fraction(1), Fraction(0)) if M.tol is None else (1.0, 0.0)
    return [[one if i == j else zero for i in range(M.ncols)] for j in range(M.ncols)]


def matrix_rank(M: RigidityMatrix) -> int:
    return linalg.rank([list(r) for r in M.row_vectors], M.ncols, M.tol)


def rank_of(fw: Framework) -> int:
    return matrix_rank(build_rigidity_matrix(fw))


def is_infinitesimally_rigid(fw: Framework) -> bool:
    if fw.n <= 1:
        return True
    return rank_of(fw) == fw.dim * fw.n - fw.dim


@dataclass(frozen=True)
class MinimalRigidityReport:
    minimally_rigid: bool
    rigid: bool
    flex_dim_after_removal: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.minimally_rigid


def is_minimally_rigid(fw: Framework) -> MinimalRigidityReport:
    """Rigid, and removing any single edge leaves a flexible framework.

    When the rows are linearly independent each removal drops the rank by the
    number of rows of that edge, so no re-elimination is needed.
    """
    d, n = fw.dim, fw.n
    M = build_rigidity_matrix(fw)
    r = matrix_rank(M)
    rigid = n <= 1 or r == d * n - d
    report = {}
    independent = r == len(M.rows)
    for e in fw.graph.edges:
        if independent:
            k = sum(1 for lab in M.rows if lab.edge == e)
            r_e = r - k
        else:
            rows = [list(vec) for lab, vec in zip(M.rows, M.row_vectors) if lab.edge != e]
            r_e = linalg.rank(rows, M.ncols, M.tol)
        report[e] = d * n - r_e - d
    minimal = rigid and all(v > 0 for v in report.values())
    return MinimalRigidityReport(minimal, rigid, report)


def _restricted_constant(fw: Framework, vec, vertices: Sequence[int]) -> bool:
    d = fw.dim
    P = fw.polytope
    base = vertices[0]
    ref = vec[d * base:d * base + d]
    scale = max((abs(a) for a in vec), default=1)
    for v in vertices[1:]:
        blk = vec[d * v:d * v + d]
        if not all(P.close(a, b, scale) for a, b in zip(blk, ref)):
            return False
    return True


def is_relatively_rigid(fw: Framework, H: Iterable[int] | Graph) -> bool:
    """Every flex of ``fw`` restricts to a constant on the vertices of ``H``."""
    if isinstance(H, Graph):
        verts = sorted({v for e in H.edges for v in e} or set(range(H.n)))
    else:
        verts = sorted(set(H))
    if not verts:
        raise EmptySubgraph("subgraph has no vertices")
    if any(v < 0 or v >= fw.n for v in verts):
        raise ValidationError("subgraph vertex outside the framework")
    _, flex = rank_and_kernel(build_rigidity_matrix(fw))
    return all(_restricted_constant(fw, b, verts) for b in flex.kernel_basis)


# -- edge-labelled path certificates -------------------------------------------


def edge_space_basis(fw: Framework, e: Edge) -> list[list]:
    """Basis of X_e: the common kernel of the functionals of the edge's colours."""
    rows = [list(c.fhat) for c in fw.colouring.classes(e)]
    return linalg.kernel_basis(rows, fw.dim, fw.polytope.linalg_tol)


def path_space_basis(fw: Framework, path: Sequence[Edge]) -> list[list]:
    """Spanning set (row-reduced) of X_gamma = sum of X_e over the path's edges."""
    vecs = []
    for e in path:
        vecs.extend(edge_space_basis(fw, e))
    if not vecs:
        return []
    red, _ = linalg.rref(vecs, fw.dim, fw.polytope.linalg_tol)
    return red


def _annihilator(fw: Framework, basis: list[list]) -> list[list]:
    if not basis:
        return _identity_rows(fw)
    return linalg.kernel_basis(basis, fw.dim, fw.polytope.linalg_tol)


def _identity_rows(fw: Framework) -> list[list]:
    one, zero = fw.polytope.coerce(1), fw.polytope.coerce(0)
    return [[one if i == j else zero for i in range(fw.dim)] for j in range(fw.dim)]


def intersection_dim(fw: Framework, spaces: Sequence[list[list]]) -> int:
    """Dimension of the intersection of subspaces given by spanning rows."""
    ann = []
    for b in spaces:
        ann.extend(_annihilator(fw, b))
    r = linalg.rank(ann, fw.dim, fw.polytope.linalg_tol) if ann else 0
    return fw.dim - r


def monochrome_path(fw: Framework, v: int, w: int, fclass: FacetClass) -> list[Edge] | None:
    """Shortest v-w path using only edges carrying ``fclass`` (BFS, smallest-id first)."""
    col = fw.colouring
    adj: dict[int, list[int]] = {}
    for e, cs in col.edge_classes.items():
        if any(c.index == fclass.index for c in cs):
            a, b = e
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
    prev = {v: None}
    q = deque([v])
    while q:
        x = q.popleft()
        if x == w:
            break
        for y in sorted(adj.get(x, ())):
            if y not in prev:
                prev[y] = x
                q.append(y)
    if w not in prev:
        return None
    path = []
    x = w
    while prev[x] is not None:
        path.append(norm_edge(prev[x], x))
        x = prev[x]
    return path[::-1]


@dataclass(frozen=True)
class PathCertificate:
    v: int
    w: int
    paths: tuple[tuple[Edge, ...], ...]
    colours: tuple[str, ...]
    intersection_dim: int

    @property
    def found(self) -> bool:
        return self.intersection_dim == 0

    def __bool__(self) -> bool:
        return self.found


def path_certificate(fw: Framework, v: int, w: int) -> PathCertificate:
    """Search monochrome v-w paths whose spaces X_gamma intersect in {0}.

    A certificate proves u_v = u_w for every flex. A failed search (falsy
    result) does not prove flexibility.
    """
    if v == w:
        raise ValidationError("path certificate needs two distinct vertices")
    used_paths: list[tuple[Edge, ...]] = []
    colours: list[str] = []
    spaces: list[list[list]] = []
    dim_now = fw.dim
    for c in fw.colouring.framework_classes:
        path = monochrome_path(fw, v, w, c)
        if path is None:
            continue
        space = path_space_basis(fw, path)
        new_dim = intersection_dim(fw, spaces + [space])
        if new_dim < dim_now:
            used_paths.append(tuple(path))
            colours.append(c.label)
            spaces.append(space)
            dim_now = new_dim
        if dim_now == 0:
            break
    if dim_now != 0 and not used_paths:
        dim_now = fw.dim
    return PathCertificate(v, w, tuple(used_paths), tuple(colours), dim_now)
