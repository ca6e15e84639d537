"""Bodies ``M(B) = {x : B (x - f) <= 1}``, their gauge, lattice-freeness and type.

A :class:`Body` stores ``f`` and the rows ``b^i``.  Bounded bodies cache
their vertices in counter-clockwise order; splits are bodies whose rows are
all parallel with both orientations present.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .exact import (
    Vec2,
    angle_key,
    canonical_key,
    cross,
    dot,
    format_rational,
    integer_direction,
    is_integral,
    parse_rational,
    positively_spanning,
    sub,
)
from .instance import Instance


class BodyError(ValueError):
    """Rows do not describe a body with ``f`` in its interior."""


class UnboundedNonSplit(ValueError):
    """Lattice-freeness is only decided for bounded bodies and splits."""


class Tag(str, Enum):
    SPLIT = "Split"
    TYPE1 = "Type1"
    TYPE2 = "Type2"
    TYPE3 = "Type3"
    QUADRILATERAL = "Quadrilateral"
    NON_MAXIMAL = "NonMaximalLatticeFree"
    NOT_LATTICE_FREE = "NotLatticeFree"


TRIANGLE_TAGS = (Tag.TYPE1, Tag.TYPE2, Tag.TYPE3)


@dataclass(frozen=True)
class Body:
    f: Vec2
    rows: tuple

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(Fraction(x) for x in self.f))
        rows = tuple(tuple(Fraction(x) for x in b) for b in self.rows)
        if not rows:
            raise BodyError("a body needs at least one row")
        if any(b[0] == 0 and b[1] == 0 for b in rows):
            raise BodyError("zero row")
        object.__setattr__(self, "rows", rows)

    # --- constructors -----------------------------------------------------

    @classmethod
    def from_lines(cls, f: Vec2, lines: Sequence[tuple[Vec2, Fraction]]) -> "Body":
        """Body ``{x : n . x <= c}`` for lines ``(n, c)``; ``f`` must satisfy all strictly."""
        f = tuple(Fraction(x) for x in f)
        rows = []
        for n, c in lines:
            slack = Fraction(c) - dot(n, f)
            if slack <= 0:
                raise BodyError(f"f is not strictly inside {n} . x <= {c}")
            rows.append((Fraction(n[0]) / slack, Fraction(n[1]) / slack))
        return cls(f, tuple(rows))

    @classmethod
    def from_vertices(cls, f: Vec2, vertices: Sequence[Vec2]) -> "Body":
        """Convex polygon with the given vertices (any cyclic orientation)."""
        vs = [tuple(Fraction(x) for x in v) for v in vertices]
        if len(vs) < 3:
            raise BodyError("a polygon needs three vertices")
        lines = []
        for p, q in zip(vs, vs[1:] + vs[:1]):
            n = (q[1] - p[1], p[0] - q[0])
            c = dot(n, p)
            if dot(n, f) > c:
                n, c = (-n[0], -n[1]), -c
            lines.append((n, c))
        return cls.from_lines(f, lines)

    @classmethod
    def band(cls, f: Vec2, normal: Sequence[int], lo, hi) -> "Body":
        """The split ``lo <= normal . x <= hi``."""
        n = tuple(Fraction(x) for x in normal)
        return cls.from_lines(f, [(n, Fraction(hi)), ((-n[0], -n[1]), -Fraction(lo))])

    # --- gauge ------------------------------------------------------------

    def value(self, x: Vec2) -> Fraction:
        """``max_i b^i . (x - f)``; at most 1 exactly on ``M(B)``."""
        z = (x[0] - self.f[0], x[1] - self.f[1])
        return max(b[0] * z[0] + b[1] * z[1] for b in self.rows)

    def psi(self, r: Vec2) -> Fraction:
        return max(b[0] * r[0] + b[1] * r[1] for b in self.rows)

    def gamma(self, rays: Sequence[Vec2]) -> tuple:
        return tuple(self.psi(r) for r in rays)

    def ray_intersection(self, r: Vec2) -> Optional[Vec2]:
        """``f + r / psi(r)``, or None when ``r`` is a recession direction."""
        p = self.psi(r)
        if p <= 0:
            return None
        return (self.f[0] + r[0] / p, self.f[1] + r[1] / p)

    def active_set(self, r: Vec2) -> tuple[int, ...]:
        vals = [b[0] * r[0] + b[1] * r[1] for b in self.rows]
        top = max(vals)
        return tuple(i for i, v in enumerate(vals) if v == top)

    def contains(self, x: Vec2) -> bool:
        return self.value(x) <= 1

    def in_interior(self, x: Vec2) -> bool:
        return self.value(x) < 1

    # --- shape ------------------------------------------------------------

    @cached_property
    def split_normal(self) -> Optional[tuple[int, int]]:
        """Primitive normal when the rows describe a band, else None."""
        d = integer_direction(self.rows[0])
        if any(cross(b, d) != 0 for b in self.rows):
            return None
        signs = {dot(b, d) > 0 for b in self.rows}
        return d if signs == {True, False} else None

    @cached_property
    def band_bounds(self) -> tuple[Fraction, Fraction]:
        """``(lo, hi)`` with ``M(B) = {lo <= pi . x <= hi}`` for a split."""
        pi = self.split_normal
        if pi is None:
            raise ValueError("not a split")
        pf = dot(pi, self.f)
        his, los = [], []
        for b in self.rows:
            kappa = b[0] / pi[0] if pi[0] != 0 else b[1] / pi[1]
            (his if kappa > 0 else los).append(pf + 1 / kappa)
        return max(los), min(his)

    @cached_property
    def bounded(self) -> bool:
        return positively_spanning(self.rows)

    @cached_property
    def vertices(self) -> tuple:
        """Vertices counter-clockwise; empty for unbounded bodies."""
        if not self.bounded:
            return ()
        pts = set()
        n = len(self.rows)
        for i in range(n):
            for j in range(i + 1, n):
                bi, bj = self.rows[i], self.rows[j]
                det = cross(bi, bj)
                if det == 0:
                    continue
                z = ((bj[1] - bi[1]) / det, (bi[0] - bj[0]) / det)
                if all(b[0] * z[0] + b[1] * z[1] <= 1 for b in self.rows):
                    pts.add(z)
        ordered = sorted(pts, key=angle_key)
        return tuple((self.f[0] + z[0], self.f[1] + z[1]) for z in ordered)

    @cached_property
    def edges(self) -> tuple:
        """``(row index, start, end)`` for each edge, counter-clockwise."""
        vs = self.vertices
        out = []
        for p, q in zip(vs, vs[1:] + vs[:1]):
            i = next(
                i for i, b in enumerate(self.rows)
                if dot(b, sub(p, self.f)) == 1 and dot(b, sub(q, self.f)) == 1
            )
            out.append((i, p, q))
        return tuple(out)

    @cached_property
    def facet_rows(self) -> tuple[int, ...]:
        """Indices of rows supporting an edge, in counter-clockwise order."""
        return tuple(i for i, _, _ in self.edges)

    def edge_of_row(self, i: int) -> Optional[tuple[Vec2, Vec2]]:
        for j, p, q in self.edges:
            if j == i:
                return p, q
        return None

    # --- lattice points -----------------------------------------------------

    def _row_interval(self, n: int, strict: bool):
        """x-range of the body on the horizontal line ``y = n`` (as a pair or None)."""
        lo, hi = None, None
        dy = n - self.f[1]
        for b in self.rows:
            rest = 1 - b[1] * dy
            if b[0] == 0:
                if rest < 0 or (strict and rest == 0):
                    return None
                continue
            bound = self.f[0] + rest / b[0]
            if b[0] > 0:
                hi = bound if hi is None else min(hi, bound)
            else:
                lo = bound if lo is None else max(lo, bound)
        return lo, hi

    def lattice_points(self, strict: bool = False) -> list[tuple[int, int]]:
        """Lattice points in ``M(B)`` (or its interior when ``strict``) for a bounded body."""
        if not self.bounded:
            raise UnboundedNonSplit("lattice point enumeration needs a bounded body")
        ys = [v[1] for v in self.vertices]
        out = []
        for n in range(math.floor(min(ys)), math.ceil(max(ys)) + 1):
            iv = self._row_interval(n, strict)
            if iv is None:
                continue
            lo, hi = iv
            if strict:
                start, stop = math.floor(lo) + 1, math.ceil(hi) - 1
            else:
                start, stop = math.ceil(lo), math.floor(hi)
            for m in range(start, stop + 1):
                out.append((m, n))
        return out

    def interior_lattice_point(self) -> Optional[tuple[int, int]]:
        if self.bounded:
            pts = self.lattice_points(strict=True)
            return pts[0] if pts else None
        if self.split_normal is not None:
            lo, hi = self.band_bounds
            c = math.floor(lo) + 1
            if c < hi:
                return _point_on_level(self.split_normal, c)
            return None
        raise UnboundedNonSplit("unbounded body that is not a split")

    @cached_property
    def boundary_lattice_points(self) -> tuple:
        """``Y(B)``: lattice points on the boundary of a bounded body."""
        return tuple(
            (Fraction(p[0]), Fraction(p[1]))
            for p in self.lattice_points()
            if self.value(p) == 1
        )

    def facet_lattice_points(self, i: int) -> tuple:
        """Lattice points of ``M(B)`` on row ``i``'s line, ordered along the edge."""
        edge = self.edge_of_row(i)
        if edge is None:
            return ()
        p, q = edge
        b = self.rows[i]
        on = [y for y in self.boundary_lattice_points if dot(b, sub(y, self.f)) == 1]
        d = sub(q, p)
        return tuple(sorted(on, key=lambda y: dot(sub(y, p), d)))

    def facet_relint_points(self, i: int) -> tuple:
        edge = self.edge_of_row(i)
        if edge is None:
            return ()
        return tuple(y for y in self.facet_lattice_points(i) if y not in edge)

    # --- text format --------------------------------------------------------

    def to_text(self) -> str:
        lines = ["f = " + " ".join(format_rational(x) for x in self.f)]
        for i, b in enumerate(self.rows, start=1):
            lines.append(f"b{i} = " + " ".join(format_rational(x) for x in b))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "f": [format_rational(x) for x in self.f],
            "rows": [[format_rational(x) for x in b] for b in self.rows],
        }


def _point_on_level(pi: tuple[int, int], c: int) -> tuple[int, int]:
    """A lattice point with ``pi . x = c`` for primitive ``pi``."""
    a, b = pi
    # extended Euclid
    old_r, r, old_s, s, old_t, t = a, b, 1, 0, 0, 1
    while r != 0:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
        old_t, t = t, old_t - qt * t
    g = old_r
    return (old_s * c // g, old_t * c // g)


def parse_body(text: str) -> Body:
    f = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        parts = value.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected two rationals")
        vec = tuple(parse_rational(p) for p in parts)
        if key == "f":
            f = vec
        elif key.startswith("b"):
            rows.append(vec)
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    if f is None:
        raise ValueError("missing f line")
    return Body(f, tuple(rows))


def body_from_dict(d: dict) -> Body:
    return Body(
        tuple(parse_rational(x) for x in d["f"]),
        tuple(tuple(parse_rational(x) for x in b) for b in d["rows"]),
    )


# --- lattice-freeness and classification -------------------------------------

def is_lattice_free(body: Body) -> bool:
    return body.interior_lattice_point() is None


@dataclass(frozen=True)
class Classification:
    tag: Tag
    facet_points: tuple = ()  # per row: lattice points on that row's edge
    relint_points: tuple = ()  # per row: those in the edge's relative interior


def _triangle_tag(body: Body) -> Tag:
    edges = body.edges
    relint = {i: body.facet_relint_points(i) for i, _, _ in edges}
    closed = {i: body.facet_lattice_points(i) for i, _, _ in edges}
    if any(len(relint[i]) == 0 for i in relint):
        return Tag.NON_MAXIMAL
    verts = body.vertices
    if all(is_integral(v) for v in verts) and all(len(r) == 1 for r in relint.values()):
        return Tag.TYPE1
    if len(body.boundary_lattice_points) == 3 and all(len(r) == 1 for r in relint.values()):
        return Tag.TYPE3
    for v in verts:
        if is_integral(v):
            continue
        at_v = [i for i, p, q in edges if v in (p, q)]
        other = [i for i, _, _ in edges if i not in at_v]
        if len(at_v) == 2 and len(other) == 1:
            if all(len(relint[i]) == 1 for i in at_v) and len(closed[other[0]]) >= 2:
                return Tag.TYPE2
    raise AssertionError(f"maximal lattice-free triangle fits no type: {body.vertices}")


def _quadrilateral_tag(body: Body) -> Tag:
    ys = body.boundary_lattice_points
    edges = body.edges
    relint = [body.facet_relint_points(i) for i, _, _ in edges]
    if len(ys) != 4 or any(len(r) != 1 for r in relint):
        return Tag.NON_MAXIMAL
    y = [r[0] for r in relint]
    if sub(y[1], y[0]) != sub(y[2], y[3]):
        return Tag.NON_MAXIMAL
    if abs(cross(sub(y[1], y[0]), sub(y[3], y[0]))) != 1:
        return Tag.NON_MAXIMAL
    return Tag.QUADRILATERAL


def classify(body: Body) -> Classification:
    if body.bounded:
        if not is_lattice_free(body):
            return Classification(Tag.NOT_LATTICE_FREE)
        n = len(body.edges)
        if n == 3:
            tag = _triangle_tag(body)
        elif n == 4:
            tag = _quadrilateral_tag(body)
        else:
            tag = Tag.NON_MAXIMAL
        pts = tuple(body.facet_lattice_points(i) for i in range(len(body.rows)))
        rel = tuple(body.facet_relint_points(i) for i in range(len(body.rows)))
        return Classification(tag, pts, rel)
    if body.split_normal is None:
        raise UnboundedNonSplit("unbounded body that is not a split")
    if not is_lattice_free(body):
        return Classification(Tag.NOT_LATTICE_FREE)
    lo, hi = body.band_bounds
    if lo.denominator == 1 and hi == lo + 1:
        return Classification(Tag.SPLIT)
    return Classification(Tag.NON_MAXIMAL)


def corner_rays(body: Body, inst: Instance) -> list[tuple[int, Vec2]]:
    verts = set(body.vertices)
    out = []
    for j, r in enumerate(inst.rays):
        p = body.ray_intersection(r)
        if p is not None and p in verts:
            out.append((j, p))
    return out


def normalized_rows(body: Body) -> Body:
    """Facet rows counter-clockwise, starting at the facet with most lattice points.

    Ties are broken by the canonical order of the row vectors; rows that do
    not support an edge are dropped.
    """
    order = list(body.facet_rows)
    counts = [len(body.facet_lattice_points(i)) for i in order]
    best = max(range(len(order)), key=lambda s: (counts[s], _neg_key(body.rows[order[s]])))
    order = order[best:] + order[:best]
    return Body(body.f, tuple(body.rows[i] for i in order))


def _neg_key(v):
    return tuple(-x for x in canonical_key(v))


# --- inequalities -----------------------------------------------------------

@dataclass(frozen=True)
class Inequality:
    """``gamma . s >= 1`` with a lattice-free certificate body."""

    gamma: tuple
    certificate: Body
    family: str = ""
    provenance: tuple = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {
            "gamma": [format_rational(x) for x in self.gamma],
            "family": self.family,
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
            "provenance": list(self.provenance),
        }


def verify_certificate(ineq: Inequality, inst: Instance) -> bool:
    body = ineq.certificate
    if body is None:
        return False
    try:
        if not is_lattice_free(body):
            return False
    except UnboundedNonSplit:
        return False
    return tuple(body.gamma(inst.rays)) == tuple(Fraction(x) for x in ineq.gamma)
