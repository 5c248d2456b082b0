"""Convex symmetric polytopes as unit balls of polyhedral norms.

A :class:`Polytope` carries its scalar backend: exact rationals
(:class:`fractions.Fraction`) when every coordinate is rational, otherwise
floats compared with a tolerance ``tol``. Every downstream computation
(placements, colourings, rigidity matrices) inherits that backend.

Facets are enumerated natively for ``d`` in {2, 3} by solving
``x . fhat = 1`` over every ``d``-subset of vertices and keeping the
functionals that bound all vertices by 1. For ``d >= 4`` the caller supplies
the polar extreme points through ``polar_override``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Iterable, Sequence

from . import linalg
from .errors import (
    DegenerateFacet,
    DimensionUnsupported,
    NonExtremePoint,
    NotFullDimensional,
    NotSymmetric,
    ValidationError,
    ZeroVector,
)

DEFAULT_TOL = 1e-9

Point = tuple


def dot(x, y):
    return sum(a * b for a, b in zip(x, y))


def is_rational(value) -> bool:
    return isinstance(value, (Rational, Fraction)) and not isinstance(value, bool)


def to_fraction(value) -> Fraction:
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    return Fraction(value)


@dataclass(frozen=True)
class FacetClass:
    """A pair ``{F, -F}`` of opposite facets, represented by ``fhat`` for F.

    ``fhat`` is the canonical representative (first nonzero coordinate
    positive); ``members`` are the polytope vertex indices on that facet.
    """

    fhat: Point
    members: tuple[int, ...]
    index: int

    @property
    def label(self) -> str:
        return f"F{self.index + 1}"

    def __str__(self) -> str:
        return self.label


class Membership(enum.Enum):
    INTERIOR_POSITIVE = "InteriorPositive"
    INTERIOR_NEGATIVE = "InteriorNegative"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"


@dataclass(frozen=True, eq=False)
class Polytope:
    dim: int
    vertices: tuple[Point, ...]
    exact: bool = True
    tol: float = DEFAULT_TOL
    polar_override: tuple[Point, ...] | None = None
    name: str | None = field(default=None, compare=False)

    # -- scalar backend -------------------------------------------------

    @property
    def backend(self) -> str:
        return "exact" if self.exact else "float"

    def coerce(self, value):
        if self.exact:
            if isinstance(value, float) or (not is_rational(value) and not isinstance(value, str)):
                raise ValidationError(f"non-rational value {value!r} under the exact backend")
            return to_fraction(value)
        return float(Fraction(value)) if isinstance(value, str) else float(value)

    def point(self, coords: Iterable) -> Point:
        p = tuple(self.coerce(c) for c in coords)
        if len(p) != self.dim:
            raise ValidationError(f"point {p} has dimension {len(p)}, expected {self.dim}")
        return p

    def close(self, a, b, scale=1) -> bool:
        if self.exact:
            return a == b
        return abs(a - b) <= self.tol * max(1.0, abs(scale))

    def is_zero_vector(self, x) -> bool:
        if self.exact:
            return all(c == 0 for c in x)
        return all(abs(c) <= self.tol for c in x)

    @property
    def linalg_tol(self) -> float | None:
        return None if self.exact else self.tol

    # -- facets ---------------------------------------------------------

    @cached_property
    def classes(self) -> tuple[FacetClass, ...]:
        if self.polar_override is not None:
            normals = [canonical_sign(self, f) for f in self.polar_override]
        elif self.dim > 3:
            raise DimensionUnsupported(
                f"facet enumeration is native only for d <= 3 (got d={self.dim}); "
                "supply polar_override"
            )
        else:
            normals = facet_normals(self, self.vertices)
        unique: list[Point] = []
        for f in normals:
            if not any(all(self.close(a, b) for a, b in zip(f, g)) for g in unique):
                unique.append(f)
        unique.sort(reverse=True)
        out = []
        for i, f in enumerate(unique):
            members = tuple(k for k, x in enumerate(self.vertices) if self.close(dot(x, f), 1))
            out.append(FacetClass(f, members, i))
        return tuple(out)

    def class_by_label(self, label: str) -> FacetClass:
        for c in self.classes:
            if c.label == label:
                return c
        raise ValidationError(f"unknown facet class {label!r}")

    def __repr__(self) -> str:
        tag = self.name or f"{len(self.vertices)} vertices"
        return f"Polytope(d={self.dim}, {tag}, {self.backend})"


def canonical_sign(P: Polytope, f: Sequence) -> Point:
    f = tuple(f)
    for c in f:
        if P.exact and c == 0:
            continue
        if not P.exact and abs(c) <= P.tol:
            continue
        return f if c > 0 else tuple(-a for a in f)
    raise DegenerateFacet("zero functional")


def facet_normals(P: Polytope, points: Sequence[Point]) -> list[Point]:
    """Canonical facet functionals of the hull of a symmetric point set (origin interior)."""
    d = P.dim
    tol = P.linalg_tol
    found: list[Point] = []
    for subset in itertools.combinations(range(len(points)), d):
        A = [list(points[i]) for i in subset]
        one = Fraction(1) if P.exact else 1.0
        if linalg.rank(A, d, tol) < d:
            continue
        f = linalg.solve(A, [one] * d, tol)
        if f is None:
            continue
        f = tuple(f)
        if all(dot(x, f) <= 1 or P.close(dot(x, f), 1) for x in points):
            g = canonical_sign(P, f)
            if not any(all(P.close(a, b) for a, b in zip(g, h)) for h in found):
                found.append(g)
    if not found:
        raise DegenerateFacet("no facets found")
    return found


def _hull_contains(P: Polytope, x: Point, others: Sequence[Point]) -> bool:
    """Is x a convex combination of ``others``? (Caratheodory enumeration.)"""
    d = P.dim
    tol = P.linalg_tol
    one = Fraction(1) if P.exact else 1.0
    for k in range(1, min(d + 1, len(others)) + 1):
        for subset in itertools.combinations(others, k):
            # rows: coordinates then the affine row of ones; unknowns are barycentric weights
            rows = [[s[i] for s in subset] for i in range(d)] + [[one] * k]
            if linalg.rank(rows, k, tol) < k:
                continue
            lam = linalg.solve(rows, list(x) + [one], tol)
            if lam is None:
                continue
            if all(a >= 0 or P.close(a, 0) for a in lam):
                return True
    return False


def validate_polytope(
    vertices: Sequence[Sequence],
    dim: int | None = None,
    *,
    polar_override: Sequence[Sequence] | None = None,
    tolerance: float | None = None,
    backend: str | None = None,
    name: str | None = None,
) -> Polytope:
    """Build a :class:`Polytope`, verifying symmetry, full dimension and extremality.

    The backend is exact when every coordinate is rational (ints, Fractions
    or "p/q" strings) unless ``backend="float"`` is requested.
    """
    if not vertices:
        raise ValidationError("empty vertex list")
    if dim is None:
        dim = len(vertices[0])
    if dim < 2:
        raise ValidationError("polytope dimension must be >= 2")
    for v in vertices:
        if len(v) != dim:
            raise ValidationError(f"vertex {tuple(v)} does not have dimension {dim}")
    values = [c for v in vertices for c in v]
    if polar_override is not None:
        values += [c for f in polar_override for c in f]
    all_rational = all(is_rational(c) or isinstance(c, str) for c in values)
    if backend is None:
        exact = all_rational
    elif backend == "exact":
        if not all_rational:
            raise ValidationError("exact backend requested for non-rational input")
        exact = True
    elif backend == "float":
        exact = False
    else:
        raise ValidationError(f"unknown backend {backend!r}")
    tol = DEFAULT_TOL if tolerance is None else float(tolerance)
    if tol <= 0:
        raise ValidationError("tolerance must be positive")

    shell = Polytope(dim, (), exact, tol)
    pts: list[Point] = []
    for v in vertices:
        p = shell.point(v)
        if not any(all(shell.close(a, b) for a, b in zip(p, q)) for q in pts):
            pts.append(p)
    polar = None
    if polar_override is not None:
        polar = tuple(shell.point(f) for f in polar_override)

    if polar is None and dim > 3:
        raise DimensionUnsupported(
            f"d={dim} needs polar_override: facets are enumerated natively only for d <= 3")
    if polar is None:
        for i, x in enumerate(pts):
            if shell.is_zero_vector(x) or _hull_contains(shell, x, pts[:i] + pts[i + 1:]):
                raise NonExtremePoint(f"point {_fmt(x)} is not an extreme point")
    for x in pts:
        neg = tuple(-a for a in x)
        if not any(all(shell.close(a, b) for a, b in zip(neg, q)) for q in pts):
            raise NotSymmetric(f"antipode of {_fmt(x)} is missing")
    if linalg.rank([list(p) for p in pts], dim, shell.linalg_tol) < dim:
        raise NotFullDimensional(f"vertices do not span R^{dim}")

    P = Polytope(dim, tuple(pts), exact, tol, polar, name)
    if polar is not None:
        _check_polar(P)
    return P


def _check_polar(P: Polytope) -> None:
    tol = P.linalg_tol
    for f in P.polar_override:
        vals = [dot(x, f) for x in P.vertices]
        if not P.close(max(vals), 1):
            raise ValidationError(f"polar point {_fmt(f)} does not support the polytope at level 1")
        on = [list(x) for x, v in zip(P.vertices, vals) if P.close(v, 1)]
        if linalg.rank(on, P.dim, tol) < P.dim:
            raise ValidationError(f"polar point {_fmt(f)} does not define a facet")
    normals = list(P.polar_override) + [tuple(-a for a in f) for f in P.polar_override]
    for x in P.vertices:
        tight = [list(f) for f in normals if P.close(dot(x, f), 1)]
        if linalg.rank(tight, P.dim, tol) < P.dim:
            raise NonExtremePoint(f"point {_fmt(x)} is not an extreme point")


def polytope_from_polar(polar_points: Sequence[Sequence], dim: int, *, name=None, tolerance=None,
                        backend=None) -> Polytope:
    """Polytope given by (possibly redundant) polar points; d <= 3 only.

    Non-extreme and duplicate polar points are discarded; the primal vertices
    are the facet functionals of the polar polytope.
    """
    if dim > 3:
        raise DimensionUnsupported("primal vertices from polar points need d <= 3")
    values = [c for f in polar_points for c in f]
    exact = all(is_rational(c) or isinstance(c, str) for c in values) if backend is None else backend == "exact"
    tol = DEFAULT_TOL if tolerance is None else float(tolerance)
    shell = Polytope(dim, (), exact, tol)
    pts = []
    for f in polar_points:
        p = shell.point(f)
        for q in (p, tuple(-a for a in p)):
            if shell.is_zero_vector(q):
                continue
            if not any(all(shell.close(a, b) for a, b in zip(q, r)) for r in pts):
                pts.append(q)
    if linalg.rank([list(p) for p in pts], dim, shell.linalg_tol) < dim:
        raise NotFullDimensional("polar points do not span")
    primal = facet_normals(shell, pts)
    primal = primal + [tuple(-a for a in x) for x in primal]
    # keep only polar points that are facets of the primal (i.e. extreme in the polar)
    extreme = []
    for y in pts:
        tight = [list(x) for x in primal if shell.close(dot(x, y), 1)]
        if len(tight) >= dim and linalg.rank(tight, dim, shell.linalg_tol) == dim:
            g = canonical_sign(shell, y)
            if not any(all(shell.close(a, b) for a, b in zip(g, h)) for h in extreme):
                extreme.append(g)
    return validate_polytope(primal, dim, polar_override=extreme, tolerance=tol,
                             backend="exact" if exact else "float", name=name)


def _fmt(x) -> str:
    return "(" + ", ".join(str(c) for c in x) + ")"


def facet_classes(P: Polytope) -> list[FacetClass]:
    return list(P.classes)


def gauge_norm(P: Polytope, x: Sequence):
    x = tuple(x)
    return max(abs(dot(x, c.fhat)) for c in P.classes)


def attaining_classes(P: Polytope, x: Sequence) -> list[tuple[FacetClass, int]]:
    """Classes attaining the gauge at x, each with the sign of the attaining functional."""
    x = tuple(x)
    if P.is_zero_vector(x):
        raise ZeroVector("zero vector has no supporting facet")
    vals = [(c, dot(x, c.fhat)) for c in P.classes]
    n = max(abs(v) for _, v in vals)
    out = []
    for c, v in vals:
        if P.close(v, n, n):
            out.append((c, 1))
        elif P.close(-v, n, n):
            out.append((c, -1))
    return out


def cone_membership(P: Polytope, fc: FacetClass, x: Sequence) -> Membership:
    att = attaining_classes(P, x)
    for c, sign in att:
        if c.fhat == fc.fhat:
            if len(att) > 1:
                return Membership.BOUNDARY
            return Membership.INTERIOR_POSITIVE if sign > 0 else Membership.INTERIOR_NEGATIVE
    return Membership.OUTSIDE


def support_classes(P: Polytope, x: Sequence) -> list[FacetClass]:
    return [c for c, _ in attaining_classes(P, x)]


def facet_vertices(P: Polytope, fc: FacetClass, sign: int = 1) -> list[Point]:
    """Vertices of the facet ``sign * fhat`` (the ``-F`` facet for sign -1)."""
    if sign > 0:
        return [P.vertices[i] for i in fc.members]
    return [tuple(-a for a in P.vertices[i]) for i in fc.members]


def interior_direction(P: Polytope, fc: FacetClass, sign: int = 1) -> Point:
    """A point in the relative interior of the facet, hence in the open cone."""
    verts = facet_vertices(P, fc, sign)
    k = len(verts)
    if P.exact:
        return tuple(sum(v[i] for v in verts) / Fraction(k) for i in range(P.dim))
    return tuple(sum(v[i] for v in verts) / k for i in range(P.dim))


def with_backend(P: Polytope, backend: str | None = None, tolerance: float | None = None) -> Polytope:
    """Same polytope under another scalar backend or tolerance."""
    if backend in (None, "auto") and tolerance is None:
        return P
    backend = None if backend in (None, "auto") else backend
    if backend is None:
        backend = P.backend
    if backend == "exact" and not P.exact:
        raise ValidationError(f"{P.name or 'polytope'} has irrational coordinates; exact backend unavailable")
    return validate_polytope(P.vertices, P.dim, polar_override=P.polar_override,
                             tolerance=P.tol if tolerance is None else tolerance,
                             backend=backend, name=P.name)
