"""Builders for common polyhedral norms."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .errors import DegenerateB, NotMonotone, NotSubmodular, OddN, ValidationError
from .polytope import Polytope, polytope_from_polar, validate_polytope


def _unit(d: int, k: int, s: int = 1) -> tuple[int, ...]:
    return tuple(s if i == k else 0 for i in range(d))


def crosspolytope(d: int) -> Polytope:
    """Unit ball of the l1 norm."""
    verts = [_unit(d, k, s) for k in range(d) for s in (1, -1)]
    polar = None
    if d > 3:
        polar = [(1,) + signs for signs in itertools.product((1, -1), repeat=d - 1)]
    return validate_polytope(verts, d, polar_override=polar, name=f"l1:{d}")


def hypercube(d: int) -> Polytope:
    """Unit ball of the max norm."""
    verts = list(itertools.product((1, -1), repeat=d))
    polar = [_unit(d, k) for k in range(d)] if d > 3 else None
    return validate_polytope(verts, d, polar_override=polar, name=f"linf:{d}")


def ngon(n: int, tolerance: float | None = None) -> Polytope:
    """Regular n-gon with a vertex at (1, 0); float backend."""
    if n < 4 or n % 2:
        raise OddN(f"n must be even and >= 4, got {n}")
    verts = []
    for k in range(n):
        a = 2 * math.pi * k / n
        verts.append((math.cos(a), math.sin(a)))
    return validate_polytope(verts, 2, tolerance=tolerance, backend="float", name=f"ngon:{n}")


def ngon_functional(n: int, k: int) -> tuple[float, float]:
    """Closed form for the functional of the facet from vertex k to k+1 (1-based)."""
    s = 1 / math.cos(math.pi / n)
    a = (2 * k - 1) * math.pi / n
    return (s * math.cos(a), s * math.sin(a))


def additive_norm(B: Sequence[Sequence]) -> Polytope:
    """Norm ``sum_b |x . b|``; polar points are the sign sums ``sum_b s_b b``."""
    B = [tuple(b) for b in B]
    if not B:
        raise DegenerateB("empty generator set")
    d = len(B[0])
    exact = all(isinstance(c, (int, Fraction, str)) for b in B for c in b)
    conv = (lambda c: Fraction(c)) if exact else float
    Bc = [tuple(conv(c) for c in b) for b in B]
    if linalg.rank([list(b) for b in Bc], d, None if exact else 1e-9) < d:
        raise DegenerateB("B does not span R^d")
    if d > 3:
        raise ValidationError("additive norms are supported for d <= 3")
    sums = set()
    for signs in itertools.product((1, -1), repeat=len(Bc)):
        sums.add(tuple(sum(s * b[i] for s, b in zip(signs, Bc)) for i in range(d)))
    return polytope_from_polar(sorted(sums), d, name=f"additive:{json.dumps([[str(c) for c in b] for b in B])}")


def additive_value(B, x):
    return sum(abs(sum(a * b for a, b in zip(x, bb))) for bb in B)


@dataclass(frozen=True)
class SubmodularFn:
    """Set function on subsets of {1..d}; ``values`` keyed by frozensets of 1-based ids."""

    ground_size: int
    values: Mapping[frozenset, Fraction]

    def __call__(self, subset) -> Fraction:
        return self.values[frozenset(subset)]

    @classmethod
    def from_dict(cls, d: int, values: Mapping) -> "SubmodularFn":
        """Keys may be iterables of ids or comma-joined strings ("" or "{}" is the empty set)."""
        if d > 8:
            raise ValidationError("submodular functions are limited to d <= 8")
        table = {}
        for key, val in values.items():
            if isinstance(key, str):
                key = key.strip("{} ")
                ids = [int(t) for t in key.split(",") if t.strip()]
            else:
                ids = list(key)
            table[frozenset(ids)] = Fraction(val)
        table.setdefault(frozenset(), Fraction(0))
        full = [frozenset(s) for r in range(d + 1) for s in itertools.combinations(range(1, d + 1), r)]
        missing = [sorted(s) for s in full if s not in table]
        if missing:
            raise ValidationError(f"set function undefined on {missing[:3]}")
        return cls(d, table)

    def validate(self) -> None:
        d = self.ground_size
        S = range(1, d + 1)
        subsets = [frozenset(s) for r in range(d + 1) for s in itertools.combinations(S, r)]
        if self(frozenset()) != 0:
            raise NotSubmodular("f(empty) must be 0")
        for j in S:
            if self({j}) <= 0:
                raise NotMonotone(f"f({{{j}}}) must be positive")
        for A in subsets:
            for j in S:
                if j in A:
                    continue
                if self(A | {j}) < self(A):
                    raise NotMonotone(f"f decreases from {sorted(A)} adding {j}")
                for k in S:
                    if k in A or k == j:
                        continue
                    # diminishing returns: f(A+j) - f(A) >= f(A+j+k) - f(A+k)
                    if self(A | {j}) - self(A) < self(A | {j, k}) - self(A | {k}):
                        raise NotSubmodular(f"submodularity fails at A={sorted(A)}, j={j}, k={k}")


def lovasz_extension(f: SubmodularFn, y: Sequence) -> Fraction:
    """Lovasz extension at a nonnegative point: sort coordinates decreasingly, sum increments."""
    order = sorted(range(len(y)), key=lambda i: -y[i])
    total = 0
    prev = frozenset()
    for i in order:
        cur = prev | {i + 1}
        total += y[i] * (f(cur) - f(prev))
        prev = cur
    return total


def lovasz_value(f: SubmodularFn, x: Sequence):
    return lovasz_extension(f, [abs(c) for c in x])


def lovasz_norm(f: SubmodularFn) -> Polytope:
    """Norm ``x -> lovasz_extension(|x|)``; polar points are signed increment vectors."""
    f.validate()
    d = f.ground_size
    if d > 3:
        raise ValidationError("Lovasz norms are supported for d <= 3")
    points = set()
    for perm in itertools.permutations(range(1, d + 1)):
        inc = [Fraction(0)] * d
        prev = frozenset()
        for j in perm:
            cur = prev | {j}
            inc[j - 1] = f(cur) - f(prev)
            prev = cur
        for signs in itertools.product((1, -1), repeat=d):
            points.add(tuple(s * v for s, v in zip(signs, inc)))
    table = {",".join(str(i) for i in sorted(k)): str(v) for k, v in f.values.items()}
    name = "lovasz:" + json.dumps({"d": d, "values": dict(sorted(table.items()))}, separators=(",", ":"))
    return polytope_from_polar(sorted(points), d, name=name)


def example_submodular() -> SubmodularFn:
    """f(empty)=0, f({2})=1, f(A)=2 otherwise, on S={1,2}."""
    return SubmodularFn.from_dict(2, {"": 0, "1": 2, "2": 1, "1,2": 2})


def parse_gallery_name(spec: str) -> Polytope:
    """Resolve "l1:d", "linf:d", "ngon:n", "additive:[...]" or "lovasz:{...}"."""
    kind, _, arg = spec.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "l1":
            return crosspolytope(int(arg))
        if kind == "linf":
            return hypercube(int(arg))
        if kind == "ngon":
            return ngon(int(arg))
        if kind == "additive":
            B = json.loads(arg)
            return additive_norm([[Fraction(str(c)) for c in b] for b in B])
        if kind == "lovasz":
            obj = json.loads(arg)
            if "d" in obj:
                fn = SubmodularFn.from_dict(int(obj["d"]), obj["values"])
            else:
                d = max(int(t) for k in obj for t in k.strip("{} ").split(",") if t.strip())
                fn = SubmodularFn.from_dict(d, obj)
            return lovasz_norm(fn)
    except (ValueError, KeyError, TypeError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"bad gallery spec {spec!r}: {exc}") from exc
    raise ValidationError(f"unknown gallery norm {spec!r}")
