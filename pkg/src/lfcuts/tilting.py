"""Tilting of facets, perturbation bounds and reconstruction of bodies from corner data.

A tilt direction is a matrix ``A`` (one row per facet) keeping every covered
lattice point on its facet and every corner ray on the same pair of facets.
For small ``eps`` the bodies ``B + eps A`` and ``B - eps A`` stay lattice-free
and average to ``gamma(B)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import (
    AffineSolutionSet,
    Infeasible,
    UniqueSolution,
    Vec2,
    angle_key,
    cross,
    dot,
    nullspace,
    rot90,
    solve_or_nullspace,
    sub,
)
from .instance import Instance
from .latticefree import Body, Tag, classify, is_lattice_free


class NotInNullspace(ValueError):
    pass


class CoverIncomplete(ValueError):
    pass


class HypothesisViolated(ValueError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class SingularSystem(ValueError):
    pass


class PostValidationFailed(ValueError):
    pass


Cover = tuple  # per-row tuples of lattice points
TiltMatrix = tuple  # per-row 2-vectors


def full_cover(body: Body) -> Cover:
    """Assign every boundary lattice point to every facet containing it."""
    return tuple(body.facet_lattice_points(i) for i in range(len(body.rows)))


def _tilt_equations(body: Body, cover: Cover, rays: Sequence[Vec2]) -> list[list[Fraction]]:
    n = len(body.rows)
    if len(cover) != n:
        raise ValueError(f"cover has {len(cover)} facets, body has {n} rows")
    eqs = []
    for i, ys in enumerate(cover):
        for y in ys:
            row = [Fraction(0)] * (2 * n)
            z = sub(y, body.f)
            row[2 * i], row[2 * i + 1] = z[0], z[1]
            eqs.append(row)
    for r in rays:
        if body.psi(r) <= 0:
            continue
        act = body.active_set(r)
        for i0, i1 in zip(act, act[1:]):
            row = [Fraction(0)] * (2 * n)
            row[2 * i0], row[2 * i0 + 1] = Fraction(r[0]), Fraction(r[1])
            row[2 * i1], row[2 * i1 + 1] = -Fraction(r[0]), -Fraction(r[1])
            eqs.append(row)
    return eqs


def nullspace_basis(body: Body, cover: Cover, rays: Sequence[Vec2]) -> list[TiltMatrix]:
    """Basis of the tilting nullspace, each element reshaped to one 2-vector per row."""
    n = len(body.rows)
    eqs = _tilt_equations(body, cover, rays)
    basis = nullspace(eqs, 2 * n)
    return [tuple((v[2 * i], v[2 * i + 1]) for i in range(n)) for v in basis]


def tilt(body: Body, A: TiltMatrix, eps) -> Body:
    eps = Fraction(eps)
    return Body(body.f, tuple((b[0] + eps * a[0], b[1] + eps * a[1]) for b, a in zip(body.rows, A)))


def _capture_threshold(c: Sequence[Fraction], h: Sequence[Fraction]):
    """Smallest ``eps > 0`` from which ``c_i + eps h_i < 1`` holds for all ``i``.

    Returns None when no positive ``eps`` makes the point interior.
    """
    lower = Fraction(0)
    upper = None
    for ci, hi in zip(c, h):
        if hi == 0:
            if ci >= 1:
                return None
        elif hi < 0:
            if ci >= 1:
                lower = max(lower, (ci - 1) / -hi)
        else:
            bound = (1 - ci) / hi
            if bound <= 0:
                return None
            upper = bound if upper is None else min(upper, bound)
    if upper is not None and upper <= lower:
        return None
    return lower


def _gauge_radius(body: Body) -> Fraction:
    return max(max(abs(v[0] - body.f[0]), abs(v[1] - body.f[1])) for v in body.vertices)


def _capture_bound(body: Body, A: TiltMatrix, signs=(1, -1)) -> Fraction:
    """A bound ``d`` such that no lattice point enters ``M(B + s eps A)`` for ``0 < eps < d``."""
    R = _gauge_radius(body)
    alpha = max(abs(a[0]) + abs(a[1]) for a in A)
    if alpha == 0:
        return Fraction(1)
    cap = 1 / (2 * R * alpha)
    # for eps <= cap every tilted body lies in the box ||x - f|| <= 2R
    box = 2 * R
    best = cap
    x0, x1 = math.floor(body.f[0] - box), math.ceil(body.f[0] + box)
    y0, y1 = math.floor(body.f[1] - box), math.ceil(body.f[1] + box)
    for x in range(x0, x1 + 1):
        for y in range(y0, y1 + 1):
            z = (x - body.f[0], y - body.f[1])
            c = [b[0] * z[0] + b[1] * z[1] for b in body.rows]
            if max(c) <= 1:
                continue
            h = [a[0] * z[0] + a[1] * z[1] for a in A]
            for s in signs:
                t = _capture_threshold(c, [s * v for v in h])
                if t is not None and t < best:
                    best = t
    return best


def _active_bound(body: Body, A: TiltMatrix, rays: Sequence[Vec2]) -> Fraction | None:
    best = None
    for r in rays:
        act = set(body.active_set(r))
        vals = [dot(b, r) for b in body.rows]
        tilts = [dot(a, r) for a in A]
        for i in act:
            for j in range(len(body.rows)):
                if j in act:
                    continue
                g = vals[i] - vals[j]
                h = tilts[i] - tilts[j]
                if h != 0:
                    t = g / abs(h)
                    best = t if best is None else min(best, t)
    return best


def _check_tilt(body: Body, A: TiltMatrix, inst: Instance, eps: Fraction) -> None:
    plus, minus = tilt(body, A, eps), tilt(body, A, -eps)
    for r in inst.rays:
        if plus.active_set(r) != body.active_set(r) or minus.active_set(r) != body.active_set(r):
            raise AssertionError(f"active set of {r} changed at eps={eps}")
    g, gp, gm = body.gamma(inst.rays), plus.gamma(inst.rays), minus.gamma(inst.rays)
    if any(2 * a != b + c for a, b, c in zip(g, gp, gm)):
        raise AssertionError(f"tilting identity fails at eps={eps}")
    if not (is_lattice_free(plus) and is_lattice_free(minus)):
        raise AssertionError(f"tilted body captures a lattice point at eps={eps}")


def find_tilt_epsilon(body: Body, A: TiltMatrix, inst: Instance, cover: Cover) -> Fraction:
    """Positive ``delta`` such that every ``0 < eps < delta`` is a valid tilt step.

    The certified threshold is halved before it is returned, and the three
    tilting properties are re-checked exactly at half the returned value.
    """
    if not body.bounded:
        raise ValueError("tilting needs a bounded body")
    if len(A) != len(body.rows) or all(a[0] == 0 and a[1] == 0 for a in A):
        raise NotInNullspace("tilt direction is zero or has the wrong shape")
    flat = [x for a in A for x in a]
    for eq in _tilt_equations(body, cover, inst.rays):
        if dot(eq, flat) != 0:
            raise NotInNullspace("tilt direction violates a tilting equation")
    for i, ys in enumerate(cover):
        for y in ys:
            if dot(body.rows[i], sub(y, body.f)) != 1:
                raise CoverIncomplete(f"{y} is not on facet {i}")
    covered = {y for ys in cover for y in ys}
    missing = [y for y in body.boundary_lattice_points if y not in covered]
    if missing:
        raise CoverIncomplete(f"boundary lattice points {missing} are not covered")
    if not is_lattice_free(body):
        raise ValueError("body is not lattice-free")
    delta = _capture_bound(body, A)
    act = _active_bound(body, A, inst.rays)
    if act is not None:
        delta = min(delta, act)
    delta = delta / 2
    _check_tilt(body, A, inst, delta / 2)
    return delta


def single_facet_tilt(body: Body, inst: Instance, i: int) -> tuple[Body, Body, int]:
    """Tilt facet ``i`` about its unique lattice point; returns ``(B+, B-, witness ray)``."""
    if not body.bounded:
        raise HypothesisViolated("body is unbounded")
    edge = body.edge_of_row(i)
    if edge is None:
        raise HypothesisViolated(f"row {i} is not a facet")
    pts = body.facet_lattice_points(i)
    if len(pts) != 1:
        raise HypothesisViolated(f"facet {i} holds {len(pts)} lattice points, not exactly one")
    y = pts[0]
    if y in edge:
        raise HypothesisViolated(f"the lattice point {y} is a vertex of facet {i}")
    witness = None
    for j, r in enumerate(inst.rays):
        if i not in body.active_set(r) or body.psi(r) <= 0:
            continue
        if len(body.active_set(r)) > 1:
            raise HypothesisViolated(f"ray {j} hits a vertex of facet {i}")
        p = body.ray_intersection(r)
        if p != y and witness is None:
            witness = j
    if witness is None:
        raise HypothesisViolated(f"no non-integer ray hit on facet {i}")
    n = len(body.rows)
    A = tuple(rot90(sub(y, body.f)) if m == i else (Fraction(0), Fraction(0)) for m in range(n))
    cover = tuple((y,) if m == i else body.facet_lattice_points(m) for m in range(n))
    delta = find_tilt_epsilon(body, A, inst, cover)
    eps = delta / 2
    plus, minus = tilt(body, A, eps), tilt(body, A, -eps)
    assert plus.gamma(inst.rays) != minus.gamma(inst.rays)
    return plus, minus, witness


def _segment_parameter(p: Vec2, q: Vec2, y: Vec2) -> Fraction | None:
    """``t`` with ``y = p + t (q - p)``, or None if ``y`` is off the line."""
    d = sub(q, p)
    w = sub(y, p)
    if cross(d, w) != 0:
        return None
    return dot(w, d) / dot(d, d)


def edge_ratios(corners: Sequence[Vec2], points: Sequence[Vec2]) -> list[Fraction]:
    """Ratios ``|y^i - p^i| / |y^i - p^{i+1}|`` along each edge."""
    n = len(corners)
    if len(points) != n:
        raise ValueError("need one point per edge")
    out = []
    for i in range(n):
        p, q = corners[i], corners[(i + 1) % n]
        # points may come in any order; use the one inside this edge
        ts = [_segment_parameter(p, q, y) for y in points]
        inside = [t for t in ts if t is not None and 0 < t < 1]
        if len(inside) != 1:
            raise ValueError(f"edge {i} does not hold exactly one of the points in its interior")
        t = inside[0]
        out.append(t / (1 - t))
    return out


def ratio_condition(quad: Body, corners: Sequence[Vec2], points: Sequence[Vec2]) -> bool:
    """True iff the product of the four edge ratios differs from 1."""
    if len(corners) != 4:
        raise ValueError("a quadrilateral has four corners")
    verts = set(quad.vertices)
    if any(tuple(p) not in verts for p in corners):
        raise ValueError("corner hits must be vertices of the quadrilateral")
    alpha, beta, gam, delt = edge_ratios(corners, points)
    return alpha * beta * gam * delt != 1


def _order_corner_data(f: Vec2, rays: Sequence[Vec2], points: Sequence[Vec2]):
    """Sort rays counter-clockwise and attach each point to the cone it lies in."""
    n = len(rays)
    order = sorted(rays, key=angle_key)
    for a, b in zip(order, order[1:] + order[:1]):
        c = cross(a, b)
        if c == 0 and dot(a, b) > 0:
            raise SingularSystem(f"rays {a} and {b} point the same way")
        if c <= 0:
            raise PostValidationFailed("corner rays leave a gap of at least a half-turn")
    assigned = [None] * n
    for y in points:
        z = sub(y, f)
        slots = [
            i for i in range(n)
            if cross(order[i], z) > 0 and cross(z, order[(i + 1) % n]) > 0
        ]
        if len(slots) != 1 or assigned[slots[0]] is not None:
            raise PostValidationFailed("points do not separate consecutive corner rays")
        assigned[slots[0]] = y
    return order, assigned


def _corner_system(f: Vec2, rays, points):
    n = len(rays)
    M, rhs = [], []
    for i in range(n):
        row = [Fraction(0)] * (2 * n)
        z = sub(points[i], f)
        row[2 * i], row[2 * i + 1] = z[0], z[1]
        M.append(row)
        rhs.append(Fraction(1))
        # ray i+1 is the corner shared by facets i and i+1
        s = rays[(i + 1) % n]
        j = (i + 1) % n
        row = [Fraction(0)] * (2 * n)
        row[2 * i], row[2 * i + 1] = Fraction(s[0]), Fraction(s[1])
        row[2 * j], row[2 * j + 1] = -Fraction(s[0]), -Fraction(s[1])
        M.append(row)
        rhs.append(Fraction(0))
    return M, rhs


def _validate_corner_body(body: Body, rays, points) -> None:
    n = len(rays)
    if not body.bounded or len(body.edges) != n:
        raise PostValidationFailed("solution is not a bounded polygon with one edge per row")
    for i in range(n):
        s = rays[i]
        if body.psi(s) <= 0 or set(body.active_set(s)) != {(i - 1) % n, i}:
            raise PostValidationFailed(f"ray {s} is not a corner ray of the solution")
        z = sub(points[i], body.f)
        if body.value(points[i]) != 1 or body.active_set(z) != (i,):
            raise PostValidationFailed(f"point {points[i]} is not in the relative interior of facet {i}")


def triangle_from_rays_and_points(f: Vec2, rays: Sequence[Vec2], points: Sequence[Vec2]) -> Body:
    """The unique triangle with the given corner rays and one point inside each edge."""
    if len(rays) != 3 or len(points) != 3:
        raise ValueError("three rays and three points are required")
    f = tuple(Fraction(x) for x in f)
    order, assigned = _order_corner_data(f, rays, points)
    M, rhs = _corner_system(f, order, assigned)
    sol = solve_or_nullspace(M, rhs)
    if not isinstance(sol, UniqueSolution):
        raise SingularSystem("corner system has no unique solution")
    x = sol.x
    body = Body(f, tuple((x[2 * i], x[2 * i + 1]) for i in range(3)))
    _validate_corner_body(body, order, assigned)
    return body


@dataclass(frozen=True)
class Unique:
    body: Body


@dataclass(frozen=True)
class Underdetermined:
    particular: tuple
    basis: tuple


def quadrilateral_from_rays_and_points(f: Vec2, rays: Sequence[Vec2], points: Sequence[Vec2]):
    """Solve the corner system of a quadrilateral.

    Returns :class:`Unique`, :class:`Underdetermined` or
    :class:`~lfcuts.exact.Infeasible`.
    """
    if len(rays) != 4 or len(points) != 4:
        raise ValueError("four rays and four points are required")
    f = tuple(Fraction(x) for x in f)
    order, assigned = _order_corner_data(f, rays, points)
    M, rhs = _corner_system(f, order, assigned)
    sol = solve_or_nullspace(M, rhs)
    if isinstance(sol, Infeasible):
        return sol
    if isinstance(sol, AffineSolutionSet):
        return Underdetermined(sol.particular, sol.basis)
    x = sol.x
    body = Body(f, tuple((x[2 * i], x[2 * i + 1]) for i in range(4)))
    _validate_corner_body(body, order, assigned)
    return Unique(body)


def _type2_layouts(body: Body):
    """``(i1, i2, i3)`` row labelings matching the Type 2 pattern (``i3`` is the long facet)."""
    out = []
    for v in body.vertices:
        at_v = [i for i, p, q in body.edges if v in (p, q)]
        if len(at_v) != 2 or all(x.denominator == 1 for x in v):
            continue
        (i3,) = [i for i in body.facet_rows if i not in at_v]
        if len(body.facet_lattice_points(i3)) < 2:
            continue
        if all(len(body.facet_relint_points(i)) == 1 for i in at_v):
            out.append((at_v[0], at_v[1], i3))
            out.append((at_v[1], at_v[0], i3))
    return out


def type3_dominator(body: Body, inst: Instance) -> Body:
    """Tilt the long facet of a Type 2 triangle into a dominating Type 3 triangle."""
    if classify(body).tag != Tag.TYPE2:
        raise HypothesisViolated("body is not a Type 2 triangle")
    reasons = []
    for i1, i2, i3 in _type2_layouts(body):
        p, q = body.edge_of_row(i3)
        e1 = body.edge_of_row(i1)
        v = p if p in e1 else q
        relint = body.facet_relint_points(i3)
        y3 = min(relint, key=lambda y: dot(sub(y, v), sub(y, v)))
        hits = []
        for r in inst.rays:
            if i3 in body.active_set(r):
                hits.append(body.ray_intersection(r))
        seg = [_segment_parameter(v, y3, h) for h in hits]
        if any(t is None or t < 0 or t > 1 for t in seg):
            reasons.append(f"facet {i3}: hits leave the segment from {v} to {y3}")
            continue
        a3 = rot90(sub(y3, body.f))
        if dot(a3, sub(y3, v)) < 0:
            a3 = (-a3[0], -a3[1])
        A = tuple(a3 if m == i3 else (Fraction(0), Fraction(0)) for m in range(len(body.rows)))
        bound = _capture_bound(body, A, signs=(1,))
        for r in inst.rays:
            gain = dot(a3, r)
            if gain > 0 and i3 not in body.active_set(r):
                bound = min(bound, (body.psi(r) - dot(body.rows[i3], r)) / gain)
        result = tilt(body, A, bound / 2)
        if classify(result).tag != Tag.TYPE3:
            reasons.append(f"facet {i3}: tilted triangle is not Type 3")
            continue
        g, g2 = body.gamma(inst.rays), result.gamma(inst.rays)
        assert all(a <= b for a, b in zip(g2, g))
        return result
    raise HypothesisViolated("; ".join(reasons) or "no Type 2 layout found")
