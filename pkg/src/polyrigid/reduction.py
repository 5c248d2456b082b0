"""Reduction of (2,2)-tight graphs to a single vertex and synthesis of rigid placements."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx

from .combinatorics import maxwell_count
from .constructions import (
    colour_preserving_jitter,
    graph_h1,
    graph_h2,
    graph_vsplit,
    graph_vtok4,
    henneberg1,
    henneberg2,
    k4_gadget,
    vertex_split,
    vertex_to_k4,
)
from .errors import (
    ComputationError,
    DimensionUnsupported,
    NotTight,
    SearchExhausted,
    ValidationError,
)
from .framework import Framework, Graph, norm_edge
from .polytope import Polytope

KINDS = ("H1", "H2", "VSplit", "VtoK4")
DEFAULT_CAP = 12


@dataclass(frozen=True)
class Move:
    """One forward move on vertex indices of the graph built so far.

    ``params`` per kind: H1 {v1, v2}; H2 {v1, v2, v3}; VSplit {v1, v2,
    reassigned}; VtoK4 {v0, assignment}. Colour choices (c1, c2) are optional
    and filled in by synthesis.
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown move kind {self.kind!r}")

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        for k, v in self.params.items():
            if k == "assignment":
                out[k] = {str(w): g for w, g in sorted(v.items())}
            elif k == "reassigned":
                out[k] = sorted(v)
            else:
                out[k] = v
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Move":
        try:
            kind = obj["kind"]
            params = {k: v for k, v in obj.items() if k != "kind"}
            if "assignment" in params:
                params["assignment"] = {int(w): int(g) for w, g in params["assignment"].items()}
            if "reassigned" in params:
                params["reassigned"] = [int(w) for w in params["reassigned"]]
        except (KeyError, AttributeError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad move record {obj!r}") from exc
        return cls(kind, params)


@dataclass(frozen=True)
class MoveSequence:
    """Moves from K1; ``target_iso[i]`` is the target-graph label of built vertex i."""

    moves: tuple[Move, ...]
    target_iso: tuple[int, ...] = (0,)

    def to_json(self) -> dict:
        return {"moves": [m.to_json() for m in self.moves], "target_iso": list(self.target_iso)}

    @classmethod
    def from_json(cls, obj) -> "MoveSequence":
        if isinstance(obj, list):
            moves = [Move.from_json(m) for m in obj]
            n = replay_graph(moves).n
            return cls(tuple(moves), tuple(range(n)))
        moves = tuple(Move.from_json(m) for m in obj["moves"])
        iso = tuple(obj.get("target_iso") or range(replay_graph(moves).n))
        return cls(moves, iso)


def apply_graph_move(G: Graph, m: Move) -> Graph:
    p = m.params
    for key in {"H1": ("v1", "v2"), "H2": ("v1", "v2", "v3"), "VSplit": ("v1", "v2"),
                "VtoK4": ("v0",)}[m.kind]:
        if key not in p or not 0 <= int(p[key]) < G.n:
            raise ValidationError(f"{m.kind} parameter {key} missing or outside the graph")
    if m.kind == "H1":
        return graph_h1(G, p["v1"], p["v2"])
    if m.kind == "H2":
        if not G.has_edge(p["v1"], p["v2"]):
            raise ValidationError(f"H2 needs edge {p['v1']}-{p['v2']}")
        return graph_h2(G, p["v1"], p["v2"], p["v3"])
    if m.kind == "VSplit":
        return graph_vsplit(G, p["v1"], p["v2"], p.get("reassigned", ()))
    return graph_vtok4(G, p["v0"], p.get("assignment"))


def replay_graph(moves: Sequence[Move]) -> Graph:
    G = Graph(1, ())
    for m in moves:
        G = apply_graph_move(G, m)
    return G


def relabel(G: Graph, iso: Sequence[int]) -> Graph:
    return Graph(G.n, [(iso[a], iso[b]) for a, b in G.edges])


# -- isomorphism --------------------------------------------------------------


def to_networkx(G: Graph) -> nx.Graph:
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges)
    return H


def graph_hash(G: Graph) -> str:
    return nx.weisfeiler_lehman_graph_hash(to_networkx(G), iterations=3)


def isomorphic(G: Graph, H: Graph) -> bool:
    if G.n != H.n or len(G.edges) != len(H.edges):
        return False
    return nx.is_isomorphic(to_networkx(G), to_networkx(H))


class IsoSet:
    """Set of graphs up to isomorphism, bucketed by WL hash."""

    def __init__(self):
        self._buckets: dict[str, list[Graph]] = {}

    def __len__(self) -> int:
        return sum(len(b) for b in self._buckets.values())

    def __contains__(self, G: Graph) -> bool:
        return any(isomorphic(G, H) for H in self._buckets.get(graph_hash(G), ()))

    def add(self, G: Graph) -> bool:
        """Insert G; False when an isomorphic copy was already present."""
        bucket = self._buckets.setdefault(graph_hash(G), [])
        if any(isomorphic(G, H) for H in bucket):
            return False
        bucket.append(G)
        return True

    def __iter__(self):
        for key in sorted(self._buckets):
            yield from self._buckets[key]


# -- inverse moves on labelled adjacency -------------------------------------


def _adj_of(G: Graph) -> dict[int, frozenset]:
    return {v: frozenset(G.adjacency[v]) for v in range(G.n)}


def _adj_graph(adj: dict) -> Graph:
    """Compact labels to 0..k-1 in sorted order (used only for tightness and hashing)."""
    labels = sorted(adj)
    pos = {v: i for i, v in enumerate(labels)}
    return Graph(len(labels), [(pos[a], pos[b]) for a in adj for b in adj[a] if a < b])


def _remove(adj: dict, vs) -> dict:
    vs = set(vs)
    return {v: frozenset(w for w in nb if w not in vs) for v, nb in adj.items() if v not in vs}


def _add_edges(adj: dict, edges) -> dict:
    out = {v: set(nb) for v, nb in adj.items()}
    for a, b in edges:
        out[a].add(b)
        out[b].add(a)
    return {v: frozenset(nb) for v, nb in out.items()}


def _inverse_options(adj: dict):
    """Yield (kind, info, smaller adjacency) in preference order H1, H2, VtoK4, VSplit."""
    verts = sorted(adj)
    for x in verts:
        if len(adj[x]) == 2:
            a, b = sorted(adj[x])
            yield "H1", {"new": x, "v1": a, "v2": b}, _remove(adj, [x])
    for x in verts:
        if len(adj[x]) == 3:
            nb = sorted(adj[x])
            for a, b in itertools.combinations(nb, 2):
                if b in adj[a]:
                    continue
                c = next(w for w in nb if w not in (a, b))
                yield "H2", {"new": x, "v1": a, "v2": b, "v3": c}, _add_edges(_remove(adj, [x]), [(a, b)])
    for q in itertools.combinations(verts, 4):
        if not all(b in adj[a] for a, b in itertools.combinations(q, 2)):
            continue
        qs = set(q)
        outside: dict[int, int] = {}
        ok = True
        for k, v in enumerate(q):
            for w in adj[v]:
                if w in qs:
                    continue
                if w in outside:
                    ok = False
                outside[w] = k
        if not ok:
            continue
        keep = q[0]
        smaller = _add_edges(_remove(adj, q[1:]), [(keep, w) for w in outside])
        yield "VtoK4", {"new": q[1:], "v0": keep, "assignment": outside}, smaller
    for y in verts:
        for x in sorted(adj[y]):
            common = adj[x] & adj[y]
            if len(common) != 1:
                continue
            (z,) = common
            moved = sorted(w for w in adj[x] if w not in (y, z))
            smaller = _add_edges(_remove(adj, [x]), [(y, w) for w in moved])
            yield "VSplit", {"new": x, "v1": y, "v2": z, "reassigned": moved}, smaller


def reduce_to_k1(G: Graph, max_vertices: int = DEFAULT_CAP) -> MoveSequence:
    """Backtracking search for inverse moves down to K1, returned as forward moves.

    Dead ends are memoised up to isomorphism. Above ``max_vertices`` only the
    first applicable inverse move is tried at each step (no backtracking).
    """
    res = maxwell_count(G, 2)
    if not res.tight:
        raise NotTight(f"graph is not (2,2)-tight ({res.verdict.value})", res)
    if G.n == 1:
        return MoveSequence((), (0,))
    dead = IsoSet()
    stuck: list[Graph] = []

    def search(adj) -> list | None:
        if len(adj) == 1:
            return []
        H = _adj_graph(adj)
        if H in dead:
            return None
        exhaustive = len(adj) <= max_vertices
        for kind, info, smaller in _inverse_options(adj):
            if kind in ("H2", "VSplit") and not maxwell_count(_adj_graph(smaller), 2).tight:
                continue
            rest = search(smaller)
            if rest is not None:
                return [(kind, info)] + rest
            if not exhaustive:
                break
        dead.add(H)
        stuck.append(H)
        return None

    steps = search(_adj_of(G))
    if steps is None:
        smallest = min(stuck, key=lambda H: (H.n, H.edges))
        raise SearchExhausted(f"no inverse-move sequence found; smallest stuck graph has {smallest.n} vertices",
                              smallest)
    root = next(iter(set(range(G.n)) - {v for _, info in steps for v in _news(info)}))
    index = {root: 0}
    moves = []
    for kind, info in reversed(steps):
        if kind == "H1":
            params = {"v1": index[info["v1"]], "v2": index[info["v2"]]}
        elif kind == "H2":
            params = {"v1": index[info["v1"]], "v2": index[info["v2"]], "v3": index[info["v3"]]}
        elif kind == "VSplit":
            params = {"v1": index[info["v1"]], "v2": index[info["v2"]],
                      "reassigned": sorted(index[w] for w in info["reassigned"])}
        else:
            params = {"v0": index[info["v0"]],
                      "assignment": {index[w]: k for w, k in sorted(info["assignment"].items())}}
        for v in _news(info):
            index[v] = len(index)
        moves.append(Move(kind, params))
    iso = [0] * G.n
    for label, i in index.items():
        iso[i] = label
    return MoveSequence(tuple(moves), tuple(iso))


def _news(info) -> tuple:
    new = info["new"]
    return tuple(new) if isinstance(new, tuple) else (new,)


# -- synthesis -----------------------------------------------------------------


def apply_move(fw: Framework, m: Move, rng: random.Random, gadget: Framework | None = None):
    """Apply a move geometrically, choosing colours with ``rng``; returns (framework, move with colours)."""
    P = fw.polytope
    p = dict(m.params)
    classes = list(P.classes)
    if m.kind == "VtoK4":
        return vertex_to_k4(fw, p["v0"], p.get("assignment"), gadget=gadget), m
    if m.kind == "H1":
        pairs = [(a, b) for a in classes for b in classes if a.index != b.index]
        rng.shuffle(pairs)
        last = None
        for a, b in pairs:
            if "c1" in p and (p["c1"], p["c2"]) != (a.label, b.label):
                continue
            try:
                out = henneberg1(fw, p["v1"], p["v2"], a, b)
            except ComputationError as exc:
                last = exc
                continue
            return out, Move("H1", {**p, "c1": a.label, "c2": b.label})
        raise last or ComputationError("no colour pair admits a Henneberg 1 move")
    c12 = fw.colouring.classes(norm_edge(p["v1"], p["v2"]))[0]
    options = [c for c in classes if c.index != c12.index]
    rng.shuffle(options)
    last = None
    # H2 fails only when p_v3 lies on the line of v1v2; a colour-preserving jitter then helps
    for shake in range(4 if m.kind == "H2" else 1):
        if shake:
            fw = colour_preserving_jitter(fw, seed=rng.randrange(1 << 30))
        for c in options:
            if "c2" in p and p["c2"] != c.label:
                continue
            try:
                if m.kind == "H2":
                    out = henneberg2(fw, (p["v1"], p["v2"]), p["v3"], c)
                else:
                    out = vertex_split(fw, p["v1"], (p["v1"], p["v2"]), p.get("reassigned", ()), c)
            except ComputationError as exc:
                last = exc
                continue
            return out, Move(m.kind, {**p, "c2": c.label})
    raise last or ComputationError(f"no colour admits the {m.kind} move")


def replay(seq: MoveSequence | Sequence[Move], P: Polytope, seed: int = 0):
    """Replay moves geometrically from K1 at the origin; returns (framework, coloured moves)."""
    if P.dim != 2:
        raise DimensionUnsupported("synthesis is defined in the plane only")
    moves = seq.moves if isinstance(seq, MoveSequence) else tuple(seq)
    rng = random.Random(seed)
    fw = Framework(Graph(1, ()), [(0, 0)], P)
    gadget = k4_gadget(P) if any(m.kind == "VtoK4" for m in moves) else None
    done = []
    for m in moves:
        fw, mc = apply_move(fw, m, rng, gadget)
        done.append(mc)
    return fw, tuple(done)


def synthesize_rigid_placement(G: Graph, P: Polytope, seed: int = 0,
                               max_vertices: int = DEFAULT_CAP) -> Framework:
    """Minimally rigid well-positioned placement of a (2,2)-tight graph, on G's own labels."""
    if P.dim != 2:
        raise DimensionUnsupported("synthesis is defined in the plane only")
    seq = reduce_to_k1(G, max_vertices)
    built, _ = replay(seq, P, seed)
    pts = [None] * G.n
    for i, label in enumerate(seq.target_iso):
        pts[label] = built.placement[i]
    return Framework(G, pts, P)


# -- enumeration -------------------------------------------------------------


def _forward_children(G: Graph):
    n = G.n
    for v1, v2 in itertools.combinations(range(n), 2):
        yield graph_h1(G, v1, v2)
    for v1, v2 in G.edges:
        for v3 in range(n):
            if v3 not in (v1, v2):
                yield graph_h2(G, v1, v2, v3)
    for v1 in range(n):
        nbrs = sorted(G.adjacency[v1])
        for v2 in nbrs:
            rest = [w for w in nbrs if w != v2]
            for r in range(len(rest) + 1):
                for moved in itertools.combinations(rest, r):
                    yield graph_vsplit(G, v1, v2, moved)


def _k4_children(G: Graph):
    for v0 in range(G.n):
        nbrs = sorted(G.adjacency[v0])
        for ks in itertools.product(range(4), repeat=len(nbrs)):
            yield graph_vtok4(G, v0, dict(zip(nbrs, ks)))


def enumerate_tight_graphs(max_n: int) -> dict[int, list[Graph]]:
    """All (2,2)-tight graphs with at most ``max_n`` vertices, up to isomorphism.

    Built from K1 by closing under the four forward moves; every child is
    re-checked with the pebble game.
    """
    levels: dict[int, IsoSet] = {1: IsoSet()}
    levels[1].add(Graph(1, ()))
    for n in range(2, max_n + 1):
        found = IsoSet()
        sources = [(H, _forward_children) for H in levels.get(n - 1, ())]
        sources += [(H, _k4_children) for H in levels.get(n - 3, ())]
        for H, gen in sources:
            for child in gen(H):
                if child not in found and maxwell_count(child, 2).tight:
                    found.add(child)
        levels[n] = found
    return {n: list(s) for n, s in levels.items() if len(s)}
