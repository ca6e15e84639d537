"""Command line front end.

Every subcommand prints one deterministic document on standard output.
Exit codes: 0 success, 1 mismatch or failed check, 2 input error,
3 internal assertion.  ``LFCUTS_THREADS`` sets the worker count used by
candidate enumeration.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .candidates import FAMILIES, enumerate_candidates
from .closure import ensure_full_cone, mixed_integer_hull_facets, triangle_closure_facets
from .conehull import AffineCone, cone_integer_hull
from .exact import format_rational, parse_rational
from .facets import FacetList, gamma_text
from .instance import Instance, load_instance
from .latticefree import Inequality, body_from_dict, classify, corner_rays, parse_body, verify_certificate
from .oracle import Window, brute_force_vertices, certified_radius, oracle_facets, original_vertices, stable_facets

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


def _vec(v) -> list[str]:
    return [format_rational(x) for x in v]


def _emit(doc) -> None:
    if isinstance(doc, str):
        sys.stdout.write(doc if doc.endswith("\n") else doc + "\n")
    else:
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _instance_doc(inst: Instance) -> dict:
    return {"name": inst.name, "f": _vec(inst.f), "rays": [_vec(r) for r in inst.rays]}


# --- subcommands ------------------------------------------------------------------

def cmd_classify(args) -> int:
    body = parse_body(Path(args.body).read_text(encoding="utf-8"))
    cl = classify(body)
    doc = {
        "body": body.to_dict(),
        "tag": cl.tag.value,
        "bounded": body.bounded,
        "vertices": [_vec(v) for v in body.vertices] if body.bounded else [],
        "facet_points": [[_vec(p) for p in pts] for pts in cl.facet_points],
    }
    if args.instance:
        inst = load_instance(args.instance)
        if inst.f != body.f:
            raise ValueError("the body and the instance have different f")
        doc["gamma"] = _vec(body.gamma(inst.rays))
        doc["corner_rays"] = [j for j, _ in corner_rays(body, inst)] if body.bounded else []
    _emit(doc)
    return EXIT_OK


def cmd_cone_hull(args) -> int:
    apex = tuple(parse_rational(x) for x in args.apex)
    r = [parse_rational(x) for x in args.rays]
    hull = cone_integer_hull(AffineCone(apex, (r[0], r[1]), (r[2], r[3])))
    lines = [f"apex = {' '.join(_vec(apex))}"]
    lines += [f"vertex = {' '.join(_vec(v))}" for v in hull.vertices]
    for fc in hull.facets:
        kind = "bounded" if fc.bounded else "unbounded"
        lines.append(f"facet = {fc.normal[0]} {fc.normal[1]} >= {fc.offset} {kind}")
    _emit("\n".join(lines))
    return EXIT_OK


def cmd_candidates(args) -> int:
    inst = load_instance(args.instance)
    fams = FAMILIES if args.family == "all" else (args.family,)
    full, ghosts = ensure_full_cone(inst)
    cs = enumerate_candidates(full, fams)
    doc = {"instance": _instance_doc(inst), "ghost_rays": [_vec(full.rays[j]) for j in ghosts]}
    doc.update(cs.to_dict())
    _emit(doc)
    return EXIT_OK


def _facet_doc(inst: Instance, fl: FacetList) -> dict:
    return {"instance": _instance_doc(inst), **fl.to_dict()}


def cmd_facets(args) -> int:
    inst = load_instance(args.instance)
    _emit(_facet_doc(inst, mixed_integer_hull_facets(inst)))
    return EXIT_OK


def cmd_triangle_closure(args) -> int:
    inst = load_instance(args.instance)
    _emit(_facet_doc(inst, triangle_closure_facets(inst)))
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = load_instance(args.instance)
    w = Window(args.radius)
    full, _ = ensure_full_cone(inst)
    facets, stable = stable_facets(inst, w.radius, 2 * w.radius)
    need = certified_radius(inst)
    doc = {
        "instance": _instance_doc(inst),
        "radius": w.radius,
        "certified_radius": need,
        "window_certified": w.radius >= need,
        "stable_at_double_radius": stable,
        "note": "stability under doubling is heuristic; a radius at least certified_radius is a proof",
        "vertices": [_vec(v) for v in original_vertices(inst, w)],
        "vertices_with_ghost_rays": [_vec(v) for v in brute_force_vertices(full, w)],
        **facets.to_dict(),
    }
    _emit(doc)
    return EXIT_OK


def _read_gammas(path: str, k: int) -> list[Inequality]:
    """Gammas from a facets/candidates JSON document or from plain text lines."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        items = doc.get("nontrivial", doc.get("inequalities", []))
        out = []
        for item in items:
            cert = item.get("certificate")
            out.append(Inequality(
                tuple(parse_rational(x) for x in item["gamma"]),
                body_from_dict(cert) if cert else None,
                item.get("family", ""),
            ))
        return out
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        g = tuple(parse_rational(x) for x in line.replace(",", " ").split())
        if len(g) != k:
            raise ValueError(f"line {lineno}: expected {k} rationals, got {len(g)}")
        out.append(Inequality(g, None, ""))
    return out


def cmd_check(args) -> int:
    inst = load_instance(args.instance)
    ineqs = _read_gammas(args.gamma_file, inst.k)
    radius = max(args.radius, certified_radius(inst))
    verts = original_vertices(inst, Window(radius))
    results = []
    ok = True
    for q in ineqs:
        g = tuple(Fraction(x) for x in q.gamma)
        valid = len(g) == inst.k and all(x >= 0 for x in g) and all(
            sum(a * b for a, b in zip(g, v)) >= 1 for v in verts)
        entry = {"gamma": _vec(g), "valid": valid}
        if q.certificate is not None:
            entry["certificate_verified"] = verify_certificate(q, inst)
            valid = valid and entry["certificate_verified"]
        ok = ok and valid
        results.append(entry)
    _emit({"instance": _instance_doc(inst), "radius": radius, "all_valid": ok, "results": results})
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_compare(args) -> int:
    inst = load_instance(args.instance)
    alg = mixed_integer_hull_facets(inst)
    rep = oracle_facets(inst, args.radius)
    same = alg.same_facets(rep.facets)
    only_alg = sorted(alg.gamma_set() - rep.facets.gamma_set())
    only_oracle = sorted(rep.facets.gamma_set() - alg.gamma_set())
    lines = [
        f"instance {inst.name}: radius {rep.requested} requested, {rep.radius} used "
        f"(certified {'yes' if rep.certified else 'no'}, stable at {2 * rep.radius}: {'yes' if rep.stable else 'no'})",
    ]
    lines += [f"algorithm only: {gamma_text(g)}" for g in only_alg]
    lines += [f"oracle only: {gamma_text(g)}" for g in only_oracle]
    if not rep.stable:
        lines.append("oracle window unstable; comparison aborted")
        _emit("\n".join(lines))
        return EXIT_MISMATCH
    lines.append("facet sets identical" if same else "facet sets differ")
    _emit("\n".join(lines))
    return EXIT_OK if same else EXIT_MISMATCH


# --- dispatch ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lfcuts", description="Exact lattice-free cuts for two-row corner relaxations.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", help="classify a body file")
    s.add_argument("body")
    s.add_argument("--instance", help="also report gamma and corner rays for this instance")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("cone-hull", help="integer hull of apex + cone(ray1, ray2)")
    s.add_argument("--apex", nargs=2, required=True, metavar=("X", "Y"))
    s.add_argument("--rays", nargs=4, required=True, metavar=("R1X", "R1Y", "R2X", "R2Y"))
    s.set_defaults(func=cmd_cone_hull)

    s = sub.add_parser("candidates", help="candidate inequalities with certificates")
    s.add_argument("instance")
    s.add_argument("--family", choices=FAMILIES + ("all",), default="all")
    s.set_defaults(func=cmd_candidates)

    for name, func, text in (("facets", cmd_facets, "facets of the mixed integer hull"),
                             ("triangle-closure", cmd_triangle_closure, "facets of the triangle closure")):
        s = sub.add_parser(name, help=text)
        s.add_argument("instance")
        s.set_defaults(func=func)

    s = sub.add_parser("oracle", help="brute-force vertices and facets")
    s.add_argument("instance")
    s.add_argument("--radius", type=int, default=6)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("check", help="validity of gammas against the oracle")
    s.add_argument("instance")
    s.add_argument("--gamma-file", required=True)
    s.add_argument("--radius", type=int, default=6)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("compare", help="algorithm facets versus oracle facets")
    s.add_argument("instance")
    s.add_argument("--radius", type=int, default=6)
    s.set_defaults(func=cmd_compare)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (OSError, ValueError, KeyError) as exc:
        # parse errors, semantic rejections and malformed documents
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
