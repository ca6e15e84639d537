"""Finite candidate families of lattice-free cuts for a two-row instance.

Each enumerator builds bodies from the instance data alone (ray pairs,
cone integer hulls, ray hits on lattice lines) and keeps those that are
lattice-free.  The families are deliberately generous: every emitted
inequality carries a certificate body that was checked, so extra members
are harmless, and the closure module removes everything that is not
extreme.

Families are labelled ``split``, ``t1``, ``t2``, ``t3`` and ``quad``.
The integral-hit inequality (every ray meets a lattice point) may also be
labelled ``triangle`` or ``polygon`` when its certificate is a
non-maximal triangle or a general lattice-free polygon.
"""

from __future__ import annotations

import logging
import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Iterable, Optional, Sequence

from .conehull import AffineCone, ConeHull, ParallelRays, cone_integer_hull
from .exact import (
    Vec2,
    add,
    angle_key,
    bezout,
    canonical_key,
    cross,
    dot,
    format_rational,
    integer_direction,
    is_integral,
    positively_spanning,
    primitive_vector,
    rot90,
    scale,
    solve2,
    sub,
)
from .instance import Instance
from .latticefree import (
    Body,
    BodyError,
    Inequality,
    Tag,
    UnboundedNonSplit,
    classify,
    is_lattice_free,
    normalized_rows,
)
from .tilting import (
    PostValidationFailed,
    SingularSystem,
    Unique,
    quadrilateral_from_rays_and_points,
    triangle_from_rays_and_points,
)

log = logging.getLogger(__name__)

FAMILIES = ("split", "t1", "t2", "t3", "quad")
# certificate preference when several families produce the same gamma
FAMILY_ORDER = ("split", "t1", "t2", "t3", "triangle", "quad", "polygon")
TRIANGLE_FAMILIES = frozenset({"split", "t1", "t2", "t3", "triangle"})

Line = tuple  # (normal, offset): the points x with normal . x == offset


# --- candidate container ------------------------------------------------------

@dataclass
class CandidateSet:
    """Inequalities deduplicated by exact gamma.

    One certificate is kept per (gamma, family) pair together with every
    provenance string seen for that gamma.
    """

    k: int
    _certs: dict = field(default_factory=dict)  # gamma -> {family: Inequality}
    _provenance: dict = field(default_factory=dict)
    attempts: Counter = field(default_factory=Counter)
    dropped: list = field(default_factory=list)

    def add(self, ineq: Inequality) -> bool:
        """Record ``ineq``; returns True when its gamma is new."""
        g = tuple(Fraction(x) for x in ineq.gamma)
        if len(g) != self.k:
            raise ValueError(f"gamma of length {len(g)} in a set for k={self.k}")
        new = g not in self._certs
        if new:
            self._certs[g] = {}
            self._provenance[g] = []
        self._certs[g].setdefault(ineq.family, ineq)
        prov = self._provenance[g]
        prov.extend(p for p in ineq.provenance if p not in prov)
        return new

    def merge(self, other: "CandidateSet") -> None:
        for g in other.gammas():
            for fam in sorted(other._certs[g], key=_family_rank):
                ineq = other._certs[g][fam]
                self.add(Inequality(g, ineq.certificate, fam, tuple(other._provenance[g])))
        self.attempts.update(other.attempts)
        self.dropped.extend(other.dropped)

    def gammas(self) -> list[tuple]:
        return sorted(self._certs, key=canonical_key)

    def preferred(self, gamma) -> Inequality:
        g = tuple(Fraction(x) for x in gamma)
        fam = min(self._certs[g], key=_family_rank)
        ineq = self._certs[g][fam]
        return Inequality(g, ineq.certificate, fam, tuple(self._provenance[g]))

    @property
    def inequalities(self) -> list[Inequality]:
        return [self.preferred(g) for g in self.gammas()]

    def certificates(self) -> list[Inequality]:
        """Every stored (gamma, family) record, not only the preferred one."""
        return [self._certs[g][fam] for g in self.gammas() for fam in sorted(self._certs[g], key=_family_rank)]

    def families_of(self, gamma) -> frozenset:
        return frozenset(self._certs[tuple(Fraction(x) for x in gamma)])

    def family_counts(self) -> dict[str, int]:
        """Number of distinct gammas carrying each family label."""
        c: Counter = Counter()
        for certs in self._certs.values():
            c.update(certs.keys())
        return {fam: c[fam] for fam in FAMILY_ORDER if c[fam]}

    def restrict(self, families: Iterable[str]) -> "CandidateSet":
        keep = set(families)
        out = CandidateSet(self.k)
        for g in self.gammas():
            for fam, ineq in self._certs[g].items():
                if fam in keep:
                    out.add(Inequality(g, ineq.certificate, fam, tuple(self._provenance[g])))
        return out

    def __len__(self) -> int:
        return len(self._certs)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "counts": self.family_counts(),
            "inequalities": [
                dict(ineq.to_dict(), families=sorted(self._certs[ineq.gamma], key=_family_rank))
                for ineq in self.inequalities
            ],
        }


def _family_rank(fam: str) -> int:
    return FAMILY_ORDER.index(fam) if fam in FAMILY_ORDER else len(FAMILY_ORDER)


# --- planar helpers -------------------------------------------------------------

def _line_through(p: Vec2, q: Vec2) -> Line:
    n = rot90(sub(q, p))
    return (n, dot(n, p))


def _ray_hit(f: Vec2, r: Vec2, line: Line) -> Optional[Vec2]:
    n, c = line
    nr = dot(n, r)
    if nr == 0:
        return None
    t = (c - dot(n, f)) / nr
    if t <= 0:
        return None
    return add(f, scale(t, r))


def _body_from_lines(f: Vec2, lines: Sequence[Line]) -> Optional[Body]:
    """Polygon cut out by ``lines``, each oriented so that ``f`` is strictly inside."""
    oriented = []
    for n, c in lines:
        s = dot(n, f)
        if s == c:
            return None
        oriented.append((n, c) if s < c else ((-n[0], -n[1]), -c))
    try:
        return Body.from_lines(f, oriented)
    except BodyError:
        return None


def _triangle_from_lines(f: Vec2, lines: Sequence[Line]) -> Optional[Body]:
    body = _body_from_lines(f, lines)
    if body is None or not body.bounded or len(body.edges) != 3:
        return None
    return body


def first_lattice_point(f: Vec2, r: Vec2) -> Optional[tuple[Fraction, Vec2]]:
    """Smallest ``lam > 0`` with ``f + lam r`` integral, and that point."""
    d = integer_direction(r)
    pi = rot90(d)
    if dot(pi, f).denominator != 1:
        return None
    _, s, t = bezout(d[0], d[1])
    # lattice points on the line are f + (n - u.f) d for integers n
    tau = -(s * f[0] + t * f[1])
    step = tau - math.floor(tau)
    if step == 0:
        step = Fraction(1)
    q = (f[0] + step * d[0], f[1] + step * d[1])
    mu = r[0] / d[0] if d[0] != 0 else r[1] / d[1]
    return step / mu, q


@dataclass(frozen=True)
class _LatticeLine:
    """Lattice line through ``a`` with primitive direction ``u`` and ``f`` off the line.

    ``pi`` is the primitive normal with ``pi . f < pi . a``; the adjacent
    lattice line on the side of ``f`` is ``pi . x == pi . a - 1`` and
    ``w0`` is a lattice step onto it.  ``h`` is the lattice height of ``f``.
    """

    a: Vec2
    u: Vec2
    pi: Vec2
    w0: Vec2
    h: Fraction

    @classmethod
    def make(cls, f: Vec2, a: Vec2, u: Vec2) -> Optional["_LatticeLine"]:
        pi = rot90(u)
        s = dot(pi, sub(f, a))
        if s == 0:
            return None
        if s > 0:
            pi = (-pi[0], -pi[1])
        _, x, y = bezout(int(pi[0]), int(pi[1]))
        w0 = (Fraction(-x), Fraction(-y))
        return cls(a, u, pi, w0, dot(pi, a) - dot(pi, f))

    def step(self, t: int) -> Vec2:
        return add(self.w0, scale(t, self.u))

    def split_family(self, f: Vec2) -> list[int]:
        """All ``t`` with ``f`` strictly inside the split through ``a`` and ``a + u`` along ``step(t)``."""
        z = sub(f, self.a)
        a0 = dot(rot90(self.w0), z)
        a1 = dot(rot90(self.u), z)
        den = dot(rot90(self.w0), self.u)
        lo, hi = sorted(((-a0) / a1, (den - a0) / a1))
        return list(range(math.floor(lo) + 1, math.ceil(hi)))

    def crossing_steps(self, q: Vec2) -> list[int]:
        """Steps whose segment ``[a + step, a + u + step]`` contains ``q`` on the adjacent line."""
        sol = solve2(self.u, self.w0, sub(q, self.a))
        tau = sol[0]
        fl = math.floor(tau)
        return [fl - 1, fl] if tau == fl else [fl]

    def adjacent_crossings(self, f: Vec2, rays: Sequence[Vec2]) -> list[Vec2]:
        """Points where rays (or ``f`` itself, if on it) meet the adjacent lattice line."""
        line = (self.pi, dot(self.pi, self.a) - 1)
        pts = []
        if dot(self.pi, f) == line[1]:
            pts.append(f)
        for r in rays:
            q = _ray_hit(f, r, line)
            if q is not None:
                pts.append(q)
        return pts

    def steps(self, f: Vec2, rays: Sequence[Vec2]) -> list[int]:
        """Split-family step when ``f`` is above the adjacent line, else third-ray steps."""
        if self.h > 1:
            return self.split_family(f)
        out: list[int] = []
        for q in self.adjacent_crossings(f, rays):
            for t in self.crossing_steps(q):
                if t not in out:
                    out.append(t)
        return out


class _Context:
    """Per-instance caches for cone hulls and emitted bodies."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self.f = inst.f
        self.rays = inst.rays
        self.k = inst.k
        self._hulls: dict = {}

    def hull(self, i: int, j: int) -> Optional[ConeHull]:
        key = (i, j)
        if key not in self._hulls:
            try:
                self._hulls[key] = cone_integer_hull(AffineCone(self.f, self.rays[i], self.rays[j]))
            except ParallelRays:
                self._hulls[key] = None
        return self._hulls[key]

    def verts(self, i: int, j: int) -> tuple:
        h = self.hull(i, j)
        return h.vertices if h is not None else ()

    def bounded_lines(self, i: int, j: int) -> list[Line]:
        h = self.hull(i, j)
        if h is None:
            return []
        return [(fc.normal, Fraction(fc.offset)) for fc in h.bounded_facets()]

    def hit(self, j: int, line: Line) -> Optional[Vec2]:
        return _ray_hit(self.f, self.rays[j], line)

    def max_hull_facets(self) -> int:
        return max((len(self.bounded_lines(i, j)) for i, j in combinations(range(self.k), 2)), default=0)

    def max_hull_vertices(self) -> int:
        return max((len(self.verts(i, j)) for i, j in combinations(range(self.k), 2)), default=0)


class _Emitter:
    def __init__(self, ctx: _Context, family: str):
        self.ctx = ctx
        self.family = family
        self.cs = CandidateSet(ctx.k)
        self._seen: set = set()

    def offer(self, body: Optional[Body], prov: str, family: Optional[str] = None) -> bool:
        """Emit ``body`` if it is lattice-free; bodies are checked once."""
        if body is None:
            return False
        self.cs.attempts[self.family] += 1
        key = frozenset(body.rows)
        if key in self._seen:
            return False
        self._seen.add(key)
        try:
            if not is_lattice_free(body):
                return False
        except UnboundedNonSplit:
            return False
        cert = normalized_rows(body) if body.bounded else body
        gamma = body.gamma(self.ctx.rays)
        self.cs.add(Inequality(gamma, cert, family or self.family, (f"{self.family}:{prov}",)))
        return True


# --- count bounds ---------------------------------------------------------------

def count_bound(family: str, k: int, max_facets: int, max_verts: int) -> int:
    """Polynomial bound on the number of distinct gammas a family may emit."""
    F, V = max(max_facets, 1), max(max_verts, 1)
    c2, c3, c4 = math.comb(k, 2), math.comb(k, 3), math.comb(k, 4)
    steps = 2 * k + 2
    completions = 4 * k + 3
    if family == "split":
        return 1 + k + c2 * F
    if family == "t1":
        return 1 + c2 * F * steps
    if family == "t2":
        ordered2 = k * (k - 1)
        ordered3 = ordered2 * max(k - 2, 0)
        ordered4 = ordered3 * max(k - 3, 0)
        return (1 + ordered2 * F * steps * completions + ordered2 * steps * completions
                + ordered3 * V * V * completions + ordered4 * V ** 3)
    if family == "t3":
        return 1 + c3 * V ** 3
    if family == "quad":
        return 1 + c4 * V ** 4
    raise ValueError(f"unknown family {family!r}")


def _assert_bound(em: _Emitter) -> CandidateSet:
    ctx = em.ctx
    bound = count_bound(em.family, ctx.k, ctx.max_hull_facets(), ctx.max_hull_vertices())
    assert len(em.cs) <= bound, f"{em.family}: {len(em.cs)} candidates exceed bound {bound}"
    return em.cs


# --- integral hits ----------------------------------------------------------------

def _certificate_family(body: Body) -> str:
    if not body.bounded:
        return "split"
    tag = classify(body).tag
    if len(body.edges) == 3:
        return {Tag.TYPE1: "t1", Tag.TYPE2: "t2", Tag.TYPE3: "t3"}.get(tag, "triangle")
    return "quad" if tag is Tag.QUADRILATERAL else "polygon"


def _polygon_hull(points: Sequence[Vec2]) -> list[Vec2]:
    """Counter-clockwise convex hull vertices (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out: list = []
        for p in seq:
            while len(out) >= 2 and cross(sub(out[-1], out[-2]), sub(p, out[-2])) <= 0:
                out.pop()
            out.append(p)
        return out

    lower, upper = half(pts), half(reversed(pts))
    return lower[:-1] + upper[:-1]


def _matches(body: Optional[Body], rays, gamma) -> bool:
    if body is None or body.gamma(rays) != gamma:
        return False
    try:
        return is_lattice_free(body)
    except UnboundedNonSplit:
        return False


def _hit_split(f, rays, qs, gamma) -> Optional[Body]:
    normals = set()
    for a, b in combinations(qs, 2):
        normals.add(primitive_vector(rot90(sub(b, a))))
    for r in rays:
        normals.add(rot90(integer_direction(r)))
    normals |= {(1, 0), (0, 1), (1, 1), (1, -1)}
    canon = set()
    for n in normals:
        if n < (0, 0):
            n = (-n[0], -n[1])
        canon.add(n)
    for n in sorted(canon, key=lambda v: (abs(v[0]) + abs(v[1]), v)):
        pf = dot(n, f)
        if pf.denominator == 1:
            continue
        c = math.floor(pf)
        if all(dot(n, q) in (c, c + 1) for q in qs):
            body = Body.band(f, n, c, c + 1)
            if _matches(body, rays, gamma):
                return body
    return None


def _hit_triangles(f, rays, hull, gamma) -> Optional[Body]:
    """Lattice-free triangles through the hull of the hit points, one edge line at a time.

    Edge lines are hull edges of the hit points or lines through one hit
    point and a nearby lattice point that support the hull.
    """
    n = len(hull)
    lines: list[tuple[Line, int]] = []
    seen = set()

    def supports(line: Line) -> bool:
        nrm, c = line
        s = dot(nrm, f) - c
        if s == 0:
            return False
        return all((dot(nrm, q) - c) * s >= 0 for q in hull)

    def push(line: Line):
        nrm, c = line
        key = _line_key(line)
        if key in seen or not supports(line):
            return
        seen.add(key)
        mask = sum(1 << i for i, q in enumerate(hull) if dot(nrm, q) == c)
        lines.append((line, mask))

    for i in range(n):
        push(_line_through(hull[i], hull[(i + 1) % n]))
    for q in hull:
        for dx, dy in product(range(-2, 3), repeat=2):
            if (dx, dy) != (0, 0) and math.gcd(dx, dy) == 1:
                push(_line_through(q, (q[0] + dx, q[1] + dy)))
    full = (1 << n) - 1
    for (l1, m1), (l2, m2), (l3, m3) in combinations(lines, 3):
        if m1 | m2 | m3 != full:
            continue
        body = _triangle_from_lines(f, [l1, l2, l3])
        if _matches(body, rays, gamma):
            return body
    return None


def _line_key(line: Line) -> tuple:
    nrm, c = line
    # scale so the first nonzero normal entry is 1
    lead = nrm[0] if nrm[0] != 0 else nrm[1]
    return (nrm[0] / lead, nrm[1] / lead, c / lead)


def integral_hit_gamma(inst: Instance, shapes: Iterable[str] = ("split", "triangle", "polygon")) -> Optional[Inequality]:
    """The inequality whose body has every ray hit at the first lattice point on the ray.

    ``shapes`` limits the certificate search to splits, triangles and/or
    general polygons.  Returns None when some ray never meets the lattice
    or no admissible certificate is found.
    """
    allowed = set(shapes)
    f, rays = inst.f, inst.rays
    hits = []
    for r in rays:
        fl = first_lattice_point(f, r)
        if fl is None:
            return None
        hits.append(fl)
    gamma = tuple(1 / lam for lam, _ in hits)
    qs = sorted({q for _, q in hits})
    body = None
    if "split" in allowed:
        body = _hit_split(f, rays, qs, gamma)
    hull = _polygon_hull(qs)
    if body is None and len(hull) >= 3:
        poly = _body_from_lines(f, [_line_through(p, q) for p, q in zip(hull, hull[1:] + hull[:1])])
        if poly is not None and not _matches(poly, rays, gamma):
            poly = None
        if poly is not None and len(hull) == 3 and "triangle" in allowed:
            body = poly
        elif "triangle" in allowed and len(hull) > 3:
            body = _hit_triangles(f, rays, hull, gamma)
        if body is None and poly is not None and "polygon" in allowed:
            body = poly
    if body is None:
        log.info("integral hits %s admit no certificate among %s", qs, sorted(allowed))
        return None
    cert = normalized_rows(body) if body.bounded else body
    prov = "integral-hit:" + " ".join(f"({format_rational(q[0])},{format_rational(q[1])})" for q in qs)
    return Inequality(gamma, cert, _certificate_family(body), (prov,))


def _add_integral_hit(em: _Emitter, shapes: Iterable[str], families: Iterable[str]) -> None:
    ineq = integral_hit_gamma(em.ctx.inst, shapes)
    if ineq is None:
        em.cs.dropped.append(f"{em.family}: integral-hit case has no certificate")
        return
    if ineq.family in set(families):
        em.cs.add(ineq)


# --- splits -----------------------------------------------------------------------

def enumerate_splits(inst: Instance) -> CandidateSet:
    ctx = _Context(inst)
    em = _Emitter(ctx, "split")
    f = ctx.f
    _add_integral_hit(em, ("split",), ("split",))
    for j, r in enumerate(ctx.rays):
        pi = rot90(integer_direction(r))
        pf = dot(pi, f)
        if pf.denominator == 1:
            continue
        c = math.floor(pf)
        em.offer(Body.band(f, pi, c, c + 1), f"b ray {j}")
    for i, j in combinations(range(ctx.k), 2):
        for n, _ in ctx.bounded_lines(i, j):
            pf = dot(n, f)
            if pf.denominator == 1:
                continue
            c = math.floor(pf)
            em.offer(Body.band(f, n, c, c + 1), f"c rays {i},{j} normal {n}")
    return _assert_bound(em)


# --- Type 3 and quadrilaterals: corner rays plus one lattice point per gap ---------

def _ccw(rays: Sequence[Vec2], idx: Sequence[int]) -> list[int]:
    return sorted(idx, key=lambda j: angle_key(rays[j]))


def enumerate_type3(inst: Instance) -> CandidateSet:
    ctx = _Context(inst)
    em = _Emitter(ctx, "t3")
    _add_integral_hit(em, ("triangle",), ("t1", "t2", "t3", "triangle"))
    for triple in combinations(range(ctx.k), 3):
        s = _ccw(ctx.rays, triple)
        if not positively_spanning([ctx.rays[j] for j in s]):
            continue
        gaps = [(s[i], s[(i + 1) % 3]) for i in range(3)]
        choices = [ctx.verts(a, b) for a, b in gaps]
        for ys in product(*choices):
            if abs(cross(sub(ys[1], ys[0]), sub(ys[2], ys[0]))) != 1:
                continue
            try:
                body = triangle_from_rays_and_points(ctx.f, [ctx.rays[j] for j in s], list(ys))
            except (SingularSystem, PostValidationFailed, BodyError):
                continue
            em.offer(body, f"b rays {s} points {ys}")
    return _assert_bound(em)


def enumerate_quadrilaterals(inst: Instance) -> CandidateSet:
    ctx = _Context(inst)
    em = _Emitter(ctx, "quad")
    _add_integral_hit(em, ("polygon",), ("quad",))
    for quad in combinations(range(ctx.k), 4):
        s = _ccw(ctx.rays, quad)
        if not positively_spanning([ctx.rays[j] for j in s]):
            continue
        gaps = [(s[i], s[(i + 1) % 4]) for i in range(4)]
        last = set(ctx.verts(*gaps[3]))
        for y0, y1, y2 in product(*(ctx.verts(a, b) for a, b in gaps[:3])):
            y3 = sub(add(y0, y2), y1)
            if y3 not in last or abs(cross(sub(y1, y0), sub(y3, y0))) != 1:
                continue
            ys = [y0, y1, y2, y3]
            try:
                res = quadrilateral_from_rays_and_points(ctx.f, [ctx.rays[j] for j in s], ys)
            except (SingularSystem, PostValidationFailed, BodyError):
                continue
            if not isinstance(res, Unique):
                continue
            body = res.body
            if classify(body).tag is not Tag.QUADRILATERAL or set(body.boundary_lattice_points) != set(ys):
                continue
            em.offer(body, f"b rays {s} points {tuple(ys)}")
    return _assert_bound(em)


# --- Type 1 -------------------------------------------------------------------------

def enumerate_type1(inst: Instance) -> CandidateSet:
    ctx = _Context(inst)
    em = _Emitter(ctx, "t1")
    f = ctx.f
    _add_integral_hit(em, ("triangle",), ("t1", "t2", "t3", "triangle"))
    for j1, j2 in combinations(range(ctx.k), 2):
        for line in ctx.bounded_lines(j1, j2):
            v1, v2 = ctx.hit(j1, line), ctx.hit(j2, line)
            if v1 is None or v2 is None or not (is_integral(v1) and is_integral(v2)):
                continue
            d = sub(v2, v1)
            u = primitive_vector(d)
            if d != scale(2, u):
                continue
            ll = _LatticeLine.make(f, v1, u)
            if ll is None:
                continue
            case = "a" if ll.h > 1 else "b"
            for t in ll.steps(f, ctx.rays):
                v3 = add(v1, scale(2, ll.step(t)))
                try:
                    body = Body.from_vertices(f, [v1, v2, v3])
                except BodyError:
                    continue
                em.offer(body, f"{case} rays {j1},{j2} step {t}")
    return _assert_bound(em)


# --- Type 2 -------------------------------------------------------------------------

def _type2_completions(ctx: _Context, f1: Line, f3: Line, y2: Vec2, y4: Vec2, u3: Vec2) -> list[Body]:
    """Triangles with facet lines ``f1``, ``f3`` and a third facet line through ``y2``.

    The third line meets ``f3`` at ``y4 + x u3`` for ``x >= 0``.  Rays hitting
    either fixed line cut this parameter range into cells on which the hit
    pattern is constant; every cell endpoint and one interior value per cell
    are tried.
    """
    events = {Fraction(0)}
    n3, c3 = f3
    for j in range(ctx.k):
        p = ctx.hit(j, f3)
        if p is not None:
            x = _param_on(p, y4, u3)
            if x is not None and x >= 0:
                events.add(x)
        p = ctx.hit(j, f1)
        if p is not None and p != y2:
            hit3 = _intersect(_line_through(y2, p), f3)
            if hit3 is not None:
                x = _param_on(hit3, y4, u3)
                if x is not None and x >= 0:
                    events.add(x)
    ev = sorted(events)
    xs = list(ev) + [(a + b) / 2 for a, b in zip(ev, ev[1:])] + [ev[-1] + 1]
    out = []
    for x in xs:
        v23 = add(y4, scale(x, u3))
        if v23 == y2:
            continue
        body = _triangle_from_lines(ctx.f, [f1, f3, _line_through(y2, v23)])
        if body is not None:
            out.append(body)
    return out


def _param_on(p: Vec2, base: Vec2, u: Vec2) -> Optional[Fraction]:
    d = sub(p, base)
    if cross(d, u) != 0:
        return None
    return d[0] / u[0] if u[0] != 0 else d[1] / u[1]


def _intersect(l1: Line, l2: Line) -> Optional[Vec2]:
    (n1, c1), (n2, c2) = l1, l2
    det = cross(n1, n2)
    if det == 0:
        return None
    return ((c1 * n2[1] - c2 * n1[1]) / det, (n1[0] * c2 - n2[0] * c1) / det)


def _primitive_along(line: Line, toward: Vec2) -> Vec2:
    n, _ = line
    u = primitive_vector(rot90(n)) if is_integral(n) else integer_direction(rot90(n))
    u = (Fraction(u[0]), Fraction(u[1]))
    if dot(u, toward) < 0:
        u = (-u[0], -u[1])
    return u


def _type2_case_b(ctx: _Context, em: _Emitter) -> None:
    f = ctx.f
    for j1, j2 in permutations(range(ctx.k), 2):
        for line in ctx.bounded_lines(min(j1, j2), max(j1, j2)):
            v13, p2 = ctx.hit(j1, line), ctx.hit(j2, line)
            if v13 is None or p2 is None or v13 == p2:
                continue
            u = _primitive_along(line, sub(p2, v13))
            # first lattice point on the line at or after v13 in direction u
            s = solve2(u, rot90(u), sub(v13, _point_on(line)))
            y3 = add(_point_on(line), scale(math.ceil(s[0]), u))
            y4 = add(y3, u)
            ll = _LatticeLine.make(f, y3, u)
            if ll is None:
                continue
            case = "b1" if ll.h > 1 else "b2"
            for t in ll.steps(f, ctx.rays):
                w = ll.step(t)
                y1, y2 = add(y3, w), add(y4, w)
                if y1 == v13:
                    continue
                f1 = _line_through(v13, y1)
                for body in _type2_completions(ctx, f1, line, y2, y4, u):
                    em.offer(body, f"{case} rays {j1},{j2} step {t}")


def _point_on(line: Line) -> Vec2:
    """A lattice point on a line with primitive integer normal and integer offset."""
    n, c = line
    g, s, t = bezout(int(n[0]), int(n[1]))
    assert g == 1 and Fraction(c).denominator == 1
    return (Fraction(s * int(c)), Fraction(t * int(c)))


def _type2_case_c(ctx: _Context, em: _Emitter) -> None:
    f = ctx.f
    for j1, j2 in permutations(range(ctx.k), 2):
        fl = first_lattice_point(f, ctx.rays[j1])
        hull = ctx.hull(min(j1, j2), max(j1, j2))
        if fl is None or hull is None:
            continue
        p1 = fl[1]
        if p1 not in hull.vertices:
            continue
        for fc in hull.bounded_facets():
            if not fc.tight(p1):
                continue
            line = (fc.normal, Fraction(fc.offset))
            others = [v for v in hull.vertices if fc.tight(v) and v != p1]
            if not others:
                continue
            u1 = _primitive_along(line, sub(others[0], p1))
            y1 = add(p1, u1)
            ll = _LatticeLine.make(f, p1, u1)
            if ll is None:
                continue
            case = "c1" if ll.h > 1 else "c2"
            for t in ll.steps(f, ctx.rays):
                w = ll.step(t)
                y4, y2 = add(p1, w), add(y1, w)
                f3 = _line_through(p1, y4)
                for body in _type2_completions(ctx, line, f3, y2, y4, w):
                    em.offer(body, f"{case} rays {j1},{j2} step {t}")


def _type2_case_d12(ctx: _Context, em: _Emitter) -> None:
    f = ctx.f
    for j1, j2, j3 in permutations(range(ctx.k), 3):
        for y1 in ctx.verts(min(j1, j2), max(j1, j2)):
            for y3 in ctx.verts(min(j1, j3), max(j1, j3)):
                u = sub(y3, y1)
                if u == (0, 0) or math.gcd(int(u[0]), int(u[1])) != 1:
                    continue
                ll = _LatticeLine.make(f, y1, u)
                if ll is None or ll.h <= 1:
                    continue
                for t in ll.split_family(f):
                    w = ll.step(t)
                    y2, y4 = add(y1, w), add(y3, w)
                    f3 = _line_through(y3, y4)
                    v13 = ctx.hit(j1, f3)
                    if v13 is None or v13 == y1:
                        continue
                    f1 = _line_through(v13, y1)
                    for body in _type2_completions(ctx, f1, f3, y2, y4, w):
                        em.offer(body, f"d1/d2 rays {j1},{j2},{j3}")


def _type2_case_d3(ctx: _Context, em: _Emitter) -> None:
    for j1, j2, j3, j4 in permutations(range(ctx.k), 4):
        V12 = ctx.verts(min(j1, j2), max(j1, j2))
        V24 = ctx.verts(min(j2, j4), max(j2, j4))
        V13 = ctx.verts(min(j1, j3), max(j1, j3))
        for y1, y2, y3 in product(V12, V24, V13):
            if abs(cross(sub(y2, y1), sub(y3, y1))) != 1:
                continue
            y4 = sub(add(y2, y3), y1)
            f3 = _line_through(y3, y4)
            v13 = ctx.hit(j1, f3)
            if v13 is None or v13 == y1:
                continue
            f1 = _line_through(v13, y1)
            v12 = ctx.hit(j2, f1)
            if v12 is None or v12 == y2:
                continue
            body = _triangle_from_lines(ctx.f, [f1, f3, _line_through(v12, y2)])
            em.offer(body, f"d3 rays {j1},{j2},{j3},{j4}")


def enumerate_type2(inst: Instance) -> CandidateSet:
    ctx = _Context(inst)
    em = _Emitter(ctx, "t2")
    _add_integral_hit(em, ("triangle",), ("t1", "t2", "t3", "triangle"))
    _type2_case_b(ctx, em)
    _type2_case_c(ctx, em)
    _type2_case_d12(ctx, em)
    _type2_case_d3(ctx, em)
    return _assert_bound(em)


# --- all families ---------------------------------------------------------------------

ENUMERATORS = {
    "split": enumerate_splits,
    "t1": enumerate_type1,
    "t2": enumerate_type2,
    "t3": enumerate_type3,
    "quad": enumerate_quadrilaterals,
}


def _run_family(args):
    family, inst = args
    return ENUMERATORS[family](inst)


def threads() -> int:
    """Worker count from ``LFCUTS_THREADS`` (default 1, meaning in-process)."""
    try:
        return max(1, int(os.environ.get("LFCUTS_THREADS", "1")))
    except ValueError:
        return 1


def enumerate_candidates(inst: Instance, families: Iterable[str] = FAMILIES) -> CandidateSet:
    """Union of the requested families; the result does not depend on the worker count."""
    fams = [fam for fam in FAMILIES if fam in set(families)]
    unknown = set(families) - set(FAMILIES)
    if unknown:
        raise ValueError(f"unknown families {sorted(unknown)}")
    n = threads()
    if n > 1 and len(fams) > 1:
        with ProcessPoolExecutor(max_workers=min(n, len(fams))) as pool:
            parts = list(pool.map(_run_family, [(fam, inst) for fam in fams]))
    else:
        parts = [ENUMERATORS[fam](inst) for fam in fams]
    out = CandidateSet(inst.k)
    for part in parts:
        out.merge(part)
    return out
