"""Brute-force ground truth for ``conv(R_f)``.

Lattice points in a box around ``f`` are written as nonnegative
combinations of at most two rays, the lower-left hull of the resulting
points is computed, and the facets are read off as the vertices of the
blocking polyhedron by a small exact double-description routine.  Only the
exact-core module is shared with the rest of the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exact import Inside, cross, lp_membership, rank, solve2
from .facets import FacetList
from .instance import Instance
from .latticefree import Inequality


class ConeNotFull(ValueError):
    """The rays do not positively span the plane."""


@dataclass(frozen=True)
class Window:
    radius: int = 6

    def __post_init__(self):
        if self.radius < 2:
            raise ValueError("window radius must be at least 2")

    def lattice_points(self, f) -> list[tuple[int, int]]:
        r = self.radius
        xs = range(math.ceil(f[0] - r), math.floor(f[0] + r) + 1)
        ys = range(math.ceil(f[1] - r), math.floor(f[1] + r) + 1)
        return [(x, y) for x in xs for y in ys]


def _spans_plane(rays: Sequence) -> bool:
    # the rays span the plane positively iff no nonzero c has c.r <= 0 for all r;
    # checking the normals of every ray and their negations is enough in 2D
    rs = [r for r in rays if r != (0, 0)]
    if len(rs) < 3:
        return False
    for r in rs:
        for c in ((-r[1], r[0]), (r[1], -r[0])):
            if all(c[0] * s[0] + c[1] * s[1] <= 0 for s in rs):
                return False
    return True


def _solutions_full(inst: Instance, w: Window) -> list[tuple]:
    """Every basic solution ``s >= 0`` of ``sum r_j s_j = x - f`` over all window lattice points."""
    f, rays, k = inst.f, inst.rays, inst.k
    out = []
    for x in w.lattice_points(f):
        d = (x[0] - f[0], x[1] - f[1])
        for j, r in enumerate(rays):
            if cross(r, d) == 0:
                t = d[0] / r[0] if r[0] != 0 else d[1] / r[1]
                if t > 0:
                    s = [Fraction(0)] * k
                    s[j] = t
                    out.append(tuple(s))
        for i, j in combinations(range(k), 2):
            sol = solve2(rays[i], rays[j], d)
            if sol is None or sol[0] < 0 or sol[1] < 0:
                continue
            s = [Fraction(0)] * k
            s[i], s[j] = sol
            out.append(tuple(s))
    return out


def _row_range(lo: Fraction, hi: Fraction, bounds) -> tuple[int, int] | None:
    """Integer ``x`` range in ``[lo, hi]`` satisfying ``a x + b >= 0`` for each ``(a, b)``."""
    for a, b in bounds:
        if a > 0:
            lo = max(lo, -b / a)
        elif a < 0:
            hi = min(hi, -b / a)
        elif b < 0:
            return None
    xl, xh = math.ceil(lo), math.floor(hi)
    return (xl, xh) if xl <= xh else None


def _solutions(inst: Instance, w: Window) -> list[tuple]:
    """Basic solutions that can be vertices: the two ends of each lattice row in each pair cone.

    Lattice points of one row map to collinear points in the coordinates of
    a ray pair, so only the row ends can be extreme.  Singletons on each ray
    are added explicitly.
    """
    f, rays, k = inst.f, inst.rays, inst.k
    R = w.radius
    xlo, xhi = f[0] - R, f[0] + R
    out = []
    for j, r in enumerate(rays):
        for y in range(math.ceil(f[1] - R), math.floor(f[1] + R) + 1):
            if r[1] == 0:
                if y != f[1]:
                    continue
                xs = [x for x in range(math.ceil(xlo), math.floor(xhi) + 1) if (x - f[0]) * r[0] > 0]
                xs = xs[:1] if r[0] > 0 else xs[-1:]
            else:
                t = (y - f[1]) / r[1]
                x = f[0] + t * r[0]
                xs = [int(x)] if t > 0 and x.denominator == 1 and xlo <= x <= xhi else []
            for x in xs:
                s = [Fraction(0)] * k
                s[j] = (x - f[0]) / r[0] if r[0] != 0 else (y - f[1]) / r[1]
                out.append(tuple(s))
    for i, j in combinations(range(k), 2):
        ri, rj = rays[i], rays[j]
        det = cross(ri, rj)
        if det == 0:
            continue
        for y in range(math.ceil(f[1] - R), math.floor(f[1] + R) + 1):
            dy = y - f[1]
            # s_i = cross(d, rj) / det, s_j = cross(ri, d) / det with d = (x - f0, dy)
            bi = (rj[1] / det, (-f[0] * rj[1] - dy * rj[0]) / det)
            bj = (-ri[1] / det, (f[0] * ri[1] + ri[0] * dy) / det)
            rng = _row_range(xlo, xhi, (bi, bj))
            if rng is None:
                continue
            for x in sorted(set(rng)):
                d = (x - f[0], Fraction(dy))
                si, sj = cross(d, rj) / det, cross(ri, d) / det
                assert si >= 0 and sj >= 0
                s = [Fraction(0)] * k
                s[i], s[j] = si, sj
                out.append(tuple(s))
    return out


def certified_radius(inst: Instance) -> int:
    """A window radius that provably contains every vertex of ``conv(R_f)``.

    If ``x = f + a d_i + b d_j`` (primitive integer directions) with
    ``a >= 1`` then ``x - d_i`` is a lattice point of the same cone, so the
    point of ``x`` is not a vertex.  Vertices therefore lie in the half-open
    parallelograms ``f + [0,1) d_i + [0,1) d_j``; the oracle's axis ghost rays
    are included when the cone is not full.
    """
    rays = list(inst.rays)
    if not _spans_plane(rays):
        rays += [(1, 0), (0, 1), (-1, 0), (0, -1)]
    norms = sorted((max(abs(c) for c in _direction(r)) for r in rays), reverse=True)
    top = norms[0] + (norms[1] if len(norms) > 1 else 0)
    return max(2, int(top))


def _direction(r) -> tuple[int, int]:
    a, b = Fraction(r[0]), Fraction(r[1])
    den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    x, y = int(a * den), int(b * den)
    g = math.gcd(x, y)
    return (x // g, y // g)


def _pareto_chain(pts: list[tuple]) -> list[tuple]:
    """Vertices of ``conv(pts) + R^2_+`` for points given as ``(a, b, payload)``."""
    pts = sorted(pts, key=lambda p: (p[0], p[1]))
    front = []
    for p in pts:
        if not front or p[1] < front[-1][1]:
            front.append(p)
    chain: list = []
    for p in front:
        while len(chain) >= 2:
            o, a = chain[-2], chain[-1]
            if (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0]) <= 0:
                chain.pop()
            else:
                break
        chain.append(p)
    return chain


def _lower_hull_vertices(points: Sequence[tuple], k: int) -> list[tuple]:
    """Vertices of ``conv(points) + R^k_+``."""
    pts = sorted(set(points))
    # a vertex with support in {i, j} is a vertex of the face s_l = 0 (l not in {i, j})
    cand = set()
    for i, j in combinations(range(k), 2):
        sub_pts = [(p[i], p[j], p) for p in pts if all(p[l] == 0 for l in range(k) if l not in (i, j))]
        if sub_pts:
            cand.update(p[2] for p in _pareto_chain(sub_pts))
    if k == 1:
        cand = {min(pts)} if pts else set()
    cand = sorted(cand)
    cand = [p for p in cand if not any(q != p and all(a <= b for a, b in zip(q, p)) for q in cand)]
    out = list(cand)
    for p in cand:
        others = [q for q in out if q != p]
        if others and isinstance(lp_membership(p, others), Inside):
            out.remove(p)
    return out


def brute_force_vertices(inst: Instance, w: Window = Window()) -> list[tuple]:
    if not _spans_plane(inst.rays):
        raise ConeNotFull("rays do not span the plane; add ghost rays first")
    return _lower_hull_vertices(_solutions(inst, w), inst.k)


def _normalize(v: Sequence[Fraction]) -> tuple:
    s = sum(v)
    return tuple(x / s for x in v)


def _blocker_vertices(points: Sequence[tuple], k: int) -> list[tuple]:
    """Vertices of ``{g >= 0 : p . g >= 1 for all p}`` by double description.

    Works on the homogenized cone ``{(g, t) >= 0 : p . g - t >= 0}``; rays
    with ``t > 0`` give the vertices.
    """
    d = k + 1
    cons = [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]
    rays = [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]

    def zero_set(r):
        return frozenset(i for i, a in enumerate(cons) if sum(x * y for x, y in zip(a, r)) == 0)

    zs = {r: zero_set(r) for r in rays}
    for p in points:
        a = tuple(Fraction(x) for x in p) + (Fraction(-1),)
        val = {r: sum(x * y for x, y in zip(a, r)) for r in rays}
        pos = [r for r in rays if val[r] > 0]
        neg = [r for r in rays if val[r] < 0]
        zer = [r for r in rays if val[r] == 0]
        new = pos + zer
        for r1 in pos:
            for r2 in neg:
                common = zs[r1] & zs[r2]
                if len(common) < d - 2:
                    continue
                if any(r not in (r1, r2) and common <= zs[r] for r in rays):
                    continue
                x = _normalize([val[r1] * b - val[r2] * c for b, c in zip(r2, r1)])
                new.append(x)
        cons.append(a)
        rays = list(dict.fromkeys(new))
        zs = {r: zero_set(r) for r in rays}
    out = sorted(tuple(x / r[-1] for x in r[:-1]) for r in rays if r[-1] > 0)
    for v in out:
        assert all(x >= 0 for x in v) and all(sum(a * b for a, b in zip(p, v)) >= 1 for p in points)
        tight = [p for p in points if sum(a * b for a, b in zip(p, v)) == 1]
        tight_rows = [list(p) for p in tight] + [[int(i == j) for j in range(k)] for i in range(k) if v[i] == 0]
        assert rank(tight_rows) == k, "double description returned a non-vertex"
    return out


def _trivial(gammas: Sequence[tuple], k: int) -> tuple:
    out = []
    for j in range(k):
        # s_j = 0 leaves a nonempty (k-1)-dimensional face iff every gamma has support off j
        if all(any(g[i] > 0 for i in range(k) if i != j) for g in gammas):
            out.append(j)
    return tuple(out)


def _as_facets(gammas: Sequence[tuple], k: int, diag: dict) -> FacetList:
    gs = sorted(set(gammas))
    if any(all(x == 0 for x in g) for g in gs):
        zero = tuple(Fraction(0) for _ in range(k))
        return FacetList((Inequality(zero, None, "oracle"),), (), True, diag)
    ineqs = tuple(Inequality(g, None, "oracle") for g in gs)
    return FacetList(ineqs, _trivial(gs, k), False, diag)


def _irredundant(gammas: Sequence[tuple]) -> list[tuple]:
    gs = sorted(set(gammas))
    gs = [g for g in gs if not any(h != g and all(a <= b for a, b in zip(h, g)) for h in gs)]
    out = list(gs)
    for g in gs:
        others = [h for h in out if h != g]
        if others and isinstance(lp_membership(g, others), Inside):
            out.remove(g)
    return out


def brute_force_facets(inst: Instance, w: Window = Window()) -> FacetList:
    """Facets of ``conv(R_f)`` from the window; ghost axis rays are used when needed."""
    k = inst.k
    if _spans_plane(inst.rays):
        verts = brute_force_vertices(inst, w)
        return _as_facets(_blocker_vertices(verts, k), k, {"radius": w.radius, "vertices": len(verts)})
    full = inst.with_rays(list(inst.rays) + [(1, 0), (0, 1), (-1, 0), (0, -1)])
    verts = brute_force_vertices(full, w)
    gammas = [g[:k] for g in _blocker_vertices(verts, full.k)]
    if any(all(x == 0 for x in g) for g in gammas):
        return _as_facets(gammas, k, {"radius": w.radius, "ghosts": 4})
    return _as_facets(_irredundant(gammas), k, {"radius": w.radius, "vertices": len(verts), "ghosts": 4})


def original_vertices(inst: Instance, w: Window = Window()) -> list[tuple]:
    """Vertices of ``conv(R_f)`` seen in the window (ghost coordinates removed)."""
    if _spans_plane(inst.rays):
        return brute_force_vertices(inst, w)
    full = inst.with_rays(list(inst.rays) + [(1, 0), (0, 1), (-1, 0), (0, -1)])
    return [v[: inst.k] for v in brute_force_vertices(full, w) if all(x == 0 for x in v[inst.k:])]


def check_validity(gamma, inst: Instance, w: Window = Window()) -> bool:
    g = tuple(Fraction(x) for x in gamma)
    if len(g) != inst.k or any(x < 0 for x in g):
        return False
    return all(sum(a * b for a, b in zip(g, v)) >= 1 for v in original_vertices(inst, w))


def stable_facets(inst: Instance, radius: int = 6, check: int = 12) -> tuple[FacetList, bool]:
    """Facets at ``radius`` and whether they agree with those at ``check``.

    Agreement alone is a heuristic; compare ``radius`` with
    :func:`certified_radius` for a guarantee.
    """
    a = brute_force_facets(inst, Window(radius))
    b = brute_force_facets(inst, Window(check))
    return a, a.same_facets(b)


@dataclass(frozen=True)
class OracleReport:
    facets: FacetList
    radius: int  # window actually used
    stable: bool  # agreement with the doubled window
    certified: bool  # radius >= certified_radius
    requested: int


def oracle_facets(inst: Instance, radius: int = 6) -> OracleReport:
    """Facets from the requested window, enlarged to the certified radius when needed."""
    need = certified_radius(inst)
    used = max(radius, need)
    facets, stable = stable_facets(inst, used, 2 * used)
    return OracleReport(facets, used, stable, used >= need, radius)
