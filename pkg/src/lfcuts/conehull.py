"""Integer hulls of planar affine cones ``apex + cone(ray1, ray2)``.

The cone is mapped by a unimodular transformation ``U`` so that ``ray1``
points along the positive x-axis and ``ray2`` into the upper half-plane.
Lattice points then sit on the horizontal lines ``y = n``, and the first
lattice point of each line inside the cone repeats with period ``(a, b) =
U d2``.  One period of these row-minimal points, plus the recession cone,
generates the whole hull, so the vertices are read off a lower-left convex
chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import Vec2, cross, dot, integer_direction, primitive_vector, rot90


class ParallelRays(ValueError):
    """The two cone rays are linearly dependent."""


@dataclass(frozen=True)
class AffineCone:
    apex: Vec2
    ray1: Vec2
    ray2: Vec2

    def __post_init__(self):
        if cross(self.ray1, self.ray2) == 0:
            raise ParallelRays(f"rays {self.ray1} and {self.ray2} are parallel")


@dataclass(frozen=True)
class HullFacet:
    """Inequality ``normal . x >= offset`` with integer data."""

    normal: tuple[int, int]
    offset: int
    bounded: bool

    def holds(self, x: Vec2) -> bool:
        return dot(self.normal, x) >= self.offset

    def tight(self, x: Vec2) -> bool:
        return dot(self.normal, x) == self.offset


@dataclass(frozen=True)
class ConeHull:
    cone: AffineCone
    vertices: tuple  # lattice points, counter-clockwise along the boundary
    facets: tuple  # HullFacet, counter-clockwise, unbounded ones first and last

    def bounded_facets(self) -> list[HullFacet]:
        return [fc for fc in self.facets if fc.bounded]

    def contains(self, x: Vec2) -> bool:
        return all(fc.holds(x) for fc in self.facets)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), (1 if a >= 0 else -1), 0)
    g, s, t = _ext_gcd(b, a % b)
    return g, t, s - (a // b) * t


def _unimodular_to_x_axis(d: tuple[int, int]) -> tuple[tuple[int, int], tuple[int, int]]:
    """Integer matrix with determinant 1 mapping primitive ``d`` to ``(1, 0)``."""
    p, q = d
    g, s, t = _ext_gcd(p, q)
    assert g == 1 and s * p + t * q == 1
    return ((s, t), (-q, p))


def _apply(U, v):
    return (U[0][0] * v[0] + U[0][1] * v[1], U[1][0] * v[0] + U[1][1] * v[1])


def _inverse(U):
    det = U[0][0] * U[1][1] - U[0][1] * U[1][0]
    assert det in (1, -1)
    return ((U[1][1] * det, -U[0][1] * det), (-U[1][0] * det, U[0][0] * det))


def _lower_left_chain(points: list[tuple[Fraction, Fraction, object]]) -> list[object]:
    """Vertices of ``conv(points) + R^2_+`` for points given as ``(u, v, payload)``.

    Returned from the minimal-``u`` vertex to the minimal-``v`` vertex.
    """
    pts = sorted(points, key=lambda p: (p[0], p[1]))
    hull: list[tuple] = []
    for p in pts:
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            turn = (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0])
            if turn <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    vmin = min(p[1] for p in hull)
    end = next(i for i, p in enumerate(hull) if p[1] == vmin)
    return [p[2] for p in hull[: end + 1]]


def cone_integer_hull(cone: AffineCone) -> ConeHull:
    """Vertices and facets of ``conv(C ∩ Z^2)`` for the affine cone ``C``."""
    d1 = integer_direction(cone.ray1)
    d2 = integer_direction(cone.ray2)
    U = _unimodular_to_x_axis(d1)
    a, b = _apply(U, d2)
    if b < 0:
        U = (U[0], (-U[1][0], -U[1][1]))
        a, b = _apply(U, d2)
    assert b > 0 and _apply(U, d1) == (1, 0)
    fx, fy = _apply(U, cone.apex)
    y0 = math.ceil(fy)
    candidates = []
    for y in range(y0, y0 + b):
        t = (y - fy) / b
        x = math.ceil(fx + a * t)
        u = x - fx - a * t
        candidates.append((u, t, (x, y)))
    chain = _lower_left_chain(candidates)
    Uinv = _inverse(U)
    verts = [tuple(Fraction(c) for c in _apply(Uinv, p)) for p in chain]

    def oriented(normal, anchor):
        n = primitive_vector(normal)
        if dot(n, (d1[0] + d2[0], d1[1] + d2[1])) < 0:
            n = (-n[0], -n[1])
        return HullFacet(n, int(dot(n, anchor)), False)

    facets = [oriented(rot90(d2), verts[0])]
    for p, q in zip(verts, verts[1:]):
        e = (int(q[0] - p[0]), int(q[1] - p[1]))
        fc = oriented(rot90(e), p)
        facets.append(HullFacet(fc.normal, fc.offset, True))
    facets.append(oriented(rot90(d1), verts[-1]))
    # the chain runs from the ray2 side to the ray1 side, which is
    # counter-clockwise exactly when det(ray1, ray2) > 0
    if cross(cone.ray1, cone.ray2) < 0:
        verts.reverse()
        facets.reverse()
    return ConeHull(cone, tuple(verts), tuple(facets))


def hull_vertex_candidates(cone: AffineCone) -> list[Vec2]:
    return list(cone_integer_hull(cone).vertices)


def hull_facet_lines(cone: AffineCone) -> list[tuple[tuple[int, int], int]]:
    """Lines ``normal . x = offset`` carrying the bounded facets of the hull."""
    return [(fc.normal, fc.offset) for fc in cone_integer_hull(cone).bounded_facets()]
