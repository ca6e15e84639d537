"""Facets of the mixed integer hull and of the triangle closure.

Both pipelines add axis "ghost" rays until the rays span the plane,
enumerate candidates, keep the extreme gammas, then drop the ghost
coordinates and filter again.  Dropping is sound because ``s_g = 0`` is a
face of the ghost-extended hull, so the truncated inequalities together
with ``s >= 0`` describe the original hull exactly.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .candidates import FAMILIES, TRIANGLE_FAMILIES, CandidateSet, enumerate_candidates, integral_hit_gamma
from .exact import Inside, lp_membership, positively_spanning
from .facets import FacetList, sort_by_gamma, trivial_facets
from .instance import Instance
from .latticefree import Inequality

AXES = ((1, 0), (0, 1), (-1, 0), (0, -1))


def ensure_full_cone(inst: Instance) -> tuple[Instance, tuple[int, ...]]:
    """Append the first smallest set of axis rays making the ray cone the whole plane."""
    rays = list(inst.rays)
    if positively_spanning(rays):
        return inst, ()
    for size in range(1, 5):
        for extra in combinations(AXES, size):
            if positively_spanning(rays + list(extra)):
                ghosts = tuple(range(len(rays), len(rays) + size))
                return inst.with_rays(rays + list(extra)), ghosts
    raise AssertionError("the four axis directions always span the plane")


def _dominated(a: tuple, b: tuple) -> bool:
    """True when ``b <= a`` componentwise and ``b != a``."""
    return a != b and all(y <= x for x, y in zip(a, b))


def extreme_gammas(gammas: Sequence[tuple]) -> list[tuple]:
    """Extreme points of ``conv(gammas) + R^k_+`` in canonical order."""
    uniq = sorted({tuple(Fraction(x) for x in g) for g in gammas})
    kept = [g for g in uniq if not any(_dominated(g, h) for h in uniq)]
    out = list(kept)
    for g in kept:
        others = [h for h in out if h != g]
        if others and isinstance(lp_membership(g, others), Inside):
            out.remove(g)
    return out


def extreme_filter(candidates) -> FacetList:
    """Keep the candidates whose gamma is extreme; accepts a CandidateSet or inequalities."""
    if isinstance(candidates, CandidateSet):
        ineqs = candidates.inequalities
        k = candidates.k
    else:
        ineqs = list(candidates)
        k = len(ineqs[0].gamma) if ineqs else 0
    if not ineqs:
        raise ValueError("extreme_filter needs at least one candidate")
    by_gamma: dict = {}
    for q in ineqs:
        by_gamma.setdefault(tuple(Fraction(x) for x in q.gamma), q)
    ext = extreme_gammas(list(by_gamma))
    empty = any(all(x == 0 for x in g) for g in ext)
    facets = sort_by_gamma(by_gamma[g] for g in ext)
    return FacetList(
        facets,
        () if empty else trivial_facets(ext, k),
        empty,
        {"candidates": len(by_gamma), "extreme": len(ext)},
    )


def _truncate(ineq: Inequality, keep: int) -> Inequality:
    return Inequality(tuple(ineq.gamma[:keep]), ineq.certificate, ineq.family, ineq.provenance)


def _pipeline(inst: Instance, families: Iterable[str], hit_shapes: Sequence[str], allowed: frozenset) -> FacetList:
    full, ghosts = ensure_full_cone(inst)
    cs = enumerate_candidates(full, families).restrict(allowed)
    hit = integral_hit_gamma(full, hit_shapes)
    if hit is not None and hit.family in allowed:
        cs.add(hit)
    if len(cs) == 0:
        raise AssertionError(f"no candidates for instance {inst.name or inst.f}")
    first = extreme_filter(cs)
    diag = {"families": cs.family_counts(), "candidates": len(cs), "extreme_full": first.diagnostics["extreme"],
            "ghosts": len(ghosts), "dropped": list(cs.dropped)}
    if not ghosts:
        return FacetList(first.nontrivial, first.trivial, first.empty, diag)
    second = extreme_filter([_truncate(q, inst.k) for q in first.nontrivial])
    diag["extreme_truncated"] = second.diagnostics["extreme"]
    return FacetList(second.nontrivial, second.trivial, second.empty, diag)


def mixed_integer_hull_facets(inst: Instance) -> FacetList:
    """Facets of ``conv(R_f)`` from splits, triangles and quadrilaterals."""
    allowed = frozenset(FAMILIES) | {"triangle", "polygon"}
    return _pipeline(inst, FAMILIES, ("split", "triangle", "polygon"), allowed)


def triangle_closure_facets(inst: Instance) -> FacetList:
    """Facets of the triangle closure: only split and triangle certificates count."""
    return _pipeline(inst, ("split", "t1", "t2", "t3"), ("split", "triangle"), TRIANGLE_FAMILIES)


def implied(gamma, facets: FacetList) -> bool:
    """Whether ``gamma . s >= 1`` holds on ``{s >= 0 : facets}`` (exact LP)."""
    if facets.empty:
        return True
    g = tuple(Fraction(x) for x in gamma)
    return isinstance(lp_membership(g, facets.gammas()), Inside)
