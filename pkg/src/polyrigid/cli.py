"""Command-line batch interface.

Exit codes: 0 success, 2 invalid input, 3 computation failed on valid input.
Reports are deterministic for fixed inputs and seed; wall-clock timing is
only included with ``--timing``.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from typing import Any

from . import __version__
from .combinatorics import (
    FlexWitness,
    maxwell_count,
    minimal_tree_criterion,
    screen_all_cuts,
    tree_criterion,
    vertex_colour_screen,
    verify_flex,
)
from .errors import NotTight, PolyrigidError, ValidationError
from .framework import Framework, is_well_positioned
from .gallery import parse_gallery_name
from .polytope import with_backend
from .reduction import MoveSequence, reduce_to_k1, replay, synthesize_rigid_placement
from .rigidity import build_rigidity_matrix, is_minimally_rigid, rank_and_kernel
from .serialization import (
    REPORT_SCHEMA,
    SCHEMA_VERSION,
    dumps,
    encode_point,
    encode_scalar,
    framework_from_json,
    framework_to_json,
    graph_from_json,
    loads,
    read_json,
)
from .towers import (
    colour_growth,
    constant_family,
    disjoint_family,
    sequential_rigidity_probe,
    star_family,
    summarize,
    tower_certificate,
    zigzag_family,
)

EXIT_OK, EXIT_VALIDATION, EXIT_COMPUTATION = 0, 2, 3


# -- report builders ---------------------------------------------------------------


def _witness_json(w, labels) -> dict:
    return {"moving": [labels[v] for v in w.moving], "reason": w.reason,
            "vector": [encode_scalar(a) for a in w.vector]}


def _kernel_sanity(fw: Framework, rank: int, witnesses) -> dict:
    d, n = fw.dim, fw.n
    M = build_rigidity_matrix(fw)
    P = fw.polytope
    constants_ok = True
    for i in range(d):
        u = [P.coerce(1) if k % d == i else P.coerce(0) for k in range(d * n)]
        if any(not P.close(sum(a * b for a, b in zip(row, u)), 0) for row in M.row_vectors):
            constants_ok = False
    return {
        "constants_in_kernel": constants_ok,
        "witnesses_verified": all(verify_flex(fw, w.vector) for w in witnesses),
        "rank_bound_ok": rank <= d * n - d or n <= 1,
    }


def analyze_report(fw: Framework, labels, emit_matrix: bool = False) -> dict:
    M = build_rigidity_matrix(fw)
    rank, flex = rank_and_kernel(M)
    d, n = fw.dim, fw.n
    col = fw.colouring
    wp = is_well_positioned(fw)
    minimal = is_minimally_rigid(fw)
    mt_verdict, mt_route = minimal_tree_criterion(fw)
    vscreen = vertex_colour_screen(fw)
    cuts = screen_all_cuts(fw)
    witnesses = [w for w in [vscreen, *cuts.values()] if isinstance(w, FlexWitness)]
    rigid = n <= 1 or rank == d * n - d
    report: dict[str, Any] = {
        "polytope": {"name": fw.polytope.name, "backend": fw.polytope.backend,
                     "classes": [{"label": c.label, "fhat": encode_point(c.fhat)}
                                 for c in fw.polytope.classes]},
        "n": n,
        "dim": d,
        "colouring": [{"edge": [labels[a], labels[b]],
                       "classes": [c.label for c in col.edge_classes[(a, b)]],
                       "signs": list(col.signs[(a, b)])} for a, b in fw.graph.edges],
        "well_positioned": bool(wp),
        "colour_count": len(col.framework_classes),
        "shape": list(M.shape),
        "rank": rank,
        "flex_dim": flex.flex_dim,
        "rigid": rigid,
        "minimally_rigid": bool(minimal),
        "tree_criterion": tree_criterion(fw).value,
        "minimal_tree_criterion": {"verdict": mt_verdict.value, "route": mt_route},
        "screens": {
            "vertex": "pass" if vscreen else _witness_json(vscreen, labels),
            "cuts": {"+".join(k): ("pass" if v else _witness_json(v, labels)) for k, v in cuts.items()},
        },
        "kernel_sanity": _kernel_sanity(fw, rank, witnesses),
    }
    if emit_matrix:
        report["matrix"] = {
            "rows": [f"({labels[r.edge[0]]}-{labels[r.edge[1]]},{r.fclass.label})" for r in M.rows],
            "columns": [f"{labels[v]}.{i}" for v in range(n) for i in range(d)],
            "entries": [[encode_scalar(a) for a in row] for row in M.row_vectors],
        }
    return report


def _maxwell_json(res, labels) -> dict:
    out = {"verdict": res.verdict.value}
    if res.vertices:
        out["violation"] = {"vertices": [labels[v] for v in res.vertices],
                            "edges": [[labels[a], labels[b]] for a, b in res.edges],
                            "bound": 2 * len(res.vertices) - 2}
    if res.deficit:
        out["deficit"] = res.deficit
    return out


# -- family specs --------------------------------------------------------------------


def family_from_spec(spec, backend=None, tol=None):
    if not isinstance(spec, dict) or "family" not in spec:
        raise ValidationError('family spec needs a "family" field')
    kind = spec["family"]
    P = spec.get("polytope")
    P = with_backend(parse_gallery_name(P), backend, tol) if isinstance(P, str) else None
    if kind == "zigzag":
        return zigzag_family(P)
    if kind == "star":
        return star_family(P)
    if kind == "disjoint":
        return disjoint_family(P)
    if kind == "constant":
        fw, _ = framework_from_json(spec.get("framework"), backend, tol)
        return constant_family(fw)
    raise ValidationError(f"unknown family {kind!r}")


# -- commands ------------------------------------------------------------------------


def cmd_analyze(args) -> dict:
    doc, digest = read_json(args.file)
    fw, labels = framework_from_json(doc, args.backend, args.tol)
    return {"input_digest": digest, **analyze_report(fw, labels, args.emit_matrix)}


def cmd_screen(args) -> dict:
    doc, digest = read_json(args.file)
    fw, labels = framework_from_json(doc, args.backend, args.tol)
    v = vertex_colour_screen(fw)
    cuts = screen_all_cuts(fw)
    return {"input_digest": digest,
            "vertex": "pass" if v else _witness_json(v, labels),
            "cuts": {"+".join(k): ("pass" if c else _witness_json(c, labels)) for k, c in cuts.items()}}


def cmd_construct(args) -> dict:
    doc, digest = read_json(args.file)
    G, labels = graph_from_json(doc)
    P = with_backend(parse_gallery_name(args.polytope), args.backend, args.tol)
    res = maxwell_count(G, 2)
    if not res.tight:
        raise NotTight(f"graph is not (2,2)-tight: {_maxwell_json(res, labels)}", res)
    fw = synthesize_rigid_placement(G, P, args.seed)
    framework = framework_to_json(fw, labels, P.name)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dumps(framework))
    report = analyze_report(fw, labels)
    return {
        "input_digest": digest,
        "maxwell": _maxwell_json(res, labels),
        "framework": framework,
        "evidence": {k: report[k] for k in ("well_positioned", "rank", "rigid", "minimally_rigid",
                                            "minimal_tree_criterion", "kernel_sanity")},
    }


def cmd_reduce(args) -> dict:
    doc, digest = read_json(args.file)
    G, labels = graph_from_json(doc)
    seq = reduce_to_k1(G)
    out = seq.to_json()
    out["target_iso"] = [labels[v] for v in seq.target_iso]
    return {"input_digest": digest, "sequence": out}


def cmd_replay(args) -> dict:
    doc, digest = read_json(args.file)
    try:
        seq = MoveSequence.from_json(doc)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad move sequence: {exc}") from exc
    P = with_backend(parse_gallery_name(args.polytope), args.backend, args.tol)
    fw, moves = replay(seq, P, args.seed)
    labels = [str(v) for v in seq.target_iso] if len(seq.target_iso) == fw.n else None
    return {"input_digest": digest, "moves": [m.to_json() for m in moves],
            "framework": framework_to_json(fw, labels, P.name),
            "minimally_rigid": bool(is_minimally_rigid(fw))}


def cmd_tower(args) -> dict:
    text = args.family
    if text.lstrip().startswith("{"):
        spec, digest = loads(text, "<family>"), None
    else:
        spec, digest = read_json(text)
    depth = args.depth if args.depth is not None else spec.get("depth")
    if depth is None:
        raise ValidationError("tower needs a depth")
    depth = int(depth)
    if depth < 2:
        raise ValidationError("tower depth must be >= 2")
    fam = family_from_spec(spec, args.backend, args.tol)
    tower = tower_certificate(fam, depth)
    probe = sequential_rigidity_probe(fam, depth)
    return {
        "input_digest": digest,
        "family": fam.name,
        "depth": depth,
        "summary": summarize(tower, probe),
        "note": tower.note,
        "tower": [{"k": lv.k, "nested": lv.nested, "relatively_rigid": lv.relatively_rigid}
                  for lv in tower.levels],
        "truncations": [{"k": p.k, "n": p.n, "rank": p.rank, "rigid": p.rigid,
                         "flex_vertex": p.flex_vertex} for p in probe],
        "colour_growth": [{"k": g.k, "colour": g.label, "vertices": g.vertices, "edges": g.edges,
                           "connected": g.connected, "acyclic": g.acyclic}
                          for g in colour_growth(fam, depth)],
    }


COMMANDS = {
    "analyze": cmd_analyze,
    "screen": cmd_screen,
    "construct": cmd_construct,
    "reduce": cmd_reduce,
    "replay": cmd_replay,
    "tower": cmd_tower,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", choices=["auto", "exact", "float"], default="auto")
    common.add_argument("--tol", type=float, default=None, help="float tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--timing", action="store_true", help="include wall-clock seconds")
    common.add_argument("-o", "--output", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="polyrigid", description="Rigidity of frameworks under polyhedral norms")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("analyze", parents=[common], help="colouring, rank, criteria and screens")
    p.add_argument("file")
    p.add_argument("--emit-matrix", action="store_true")
    p = sub.add_parser("screen", parents=[common], help="flex screens only")
    p.add_argument("file")
    p = sub.add_parser("construct", parents=[common], help="minimally rigid placement of a tight graph")
    p.add_argument("file")
    p.add_argument("--polytope", required=True, help='gallery name, e.g. "l1:2"')
    p.add_argument("--out", help="also write the framework file here")
    p = sub.add_parser("reduce", parents=[common], help="move sequence from K1 for a tight graph")
    p.add_argument("file")
    p = sub.add_parser("replay", parents=[common], help="replay a move sequence geometrically")
    p.add_argument("file")
    p.add_argument("--polytope", required=True)
    p = sub.add_parser("tower", parents=[common], help="tower and truncation probes for a family")
    p.add_argument("family", help="JSON file or inline JSON, e.g. '{\"family\":\"zigzag\"}'")
    p.add_argument("--depth", type=int)
    return parser


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and any(isinstance(x, (dict, list)) for x in obj):
        for i, x in enumerate(obj):
            yield from _flatten(x, f"{prefix}[{i}]")
    elif isinstance(obj, list):
        yield prefix, " ".join(str(x) for x in obj)
    else:
        yield prefix, obj


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return dumps(report)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k, v in _flatten(report):
        w.writerow([k, "" if v is None else v])
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        body = COMMANDS[args.command](args)
        code = EXIT_OK
        report = {"schema": f"{REPORT_SCHEMA}@{SCHEMA_VERSION}", "command": args.command,
                  "ok": True, **body}
    except PolyrigidError as exc:
        code = EXIT_VALIDATION if isinstance(exc, ValidationError) else EXIT_COMPUTATION
        report = {"schema": f"{REPORT_SCHEMA}@{SCHEMA_VERSION}", "command": args.command, "ok": False,
                  "error": {"type": type(exc).__name__, "message": str(exc)}}
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - started, 6)
    text = render(report, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code:
        print(f"polyrigid: {report['error']['type']}: {report['error']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
