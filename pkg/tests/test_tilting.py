from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from generators import quad_with_points, random_maximal_triangle, square_quad, tilting_case, triangle_corner_data
from lfcuts.exact import rot90, sub
from lfcuts.instance import Instance
from lfcuts.latticefree import Body, Tag, classify, is_lattice_free
from lfcuts.tilting import (
    CoverIncomplete,
    HypothesisViolated,
    NotInNullspace,
    PostValidationFailed,
    SingularSystem,
    Underdetermined,
    Unique,
    edge_ratios,
    find_tilt_epsilon,
    full_cover,
    nullspace_basis,
    quadrilateral_from_rays_and_points,
    ratio_condition,
    single_facet_tilt,
    tilt,
    triangle_from_rays_and_points,
    type3_dominator,
)

H = Fraction(1, 2)
F = (H, H)
B1 = Body(F, ((-2, 0), (0, -2), (1, 1)))
DIAMOND = [(H, -H), (Fraction(3, 2), H), (H, Fraction(3, 2)), (-H, H)]
DIAMOND_POINTS = [(1, 0), (1, 1), (0, 1), (0, 0)]
PERTURBED = [(Fraction(1, 10), Fraction(-3, 10)), (Fraction(5, 2), H), (H, Fraction(7, 6)), (Fraction(-3, 10), Fraction(9, 10))]
TYPE2 = Body.from_vertices(F, [(-H, 0), (2, 0), (Fraction(1, 3), Fraction(5, 3))])


def interior(vs):
    return (sum(v[0] for v in vs) / len(vs), sum(v[1] for v in vs) / len(vs))


def _rays_to(f, vertices):
    return [sub(v, f) for v in vertices]


def _capture_epsilon(body: Body, A, y) -> Fraction | None:
    """Smallest |eps| putting lattice point ``y`` strictly inside ``B + eps A`` (or None)."""
    z = sub(y, body.f)
    lo, hi = -math.inf, math.inf
    for b, a in zip(body.rows, A):
        c, s = 1 - (b[0] * z[0] + b[1] * z[1]), a[0] * z[0] + a[1] * z[1]
        # need eps * s < c
        if s == 0:
            if c <= 0:
                return None
        elif s > 0:
            hi = min(hi, c / s)
        else:
            lo = max(lo, c / s)
    if not lo < hi:
        return None
    if lo <= 0 <= hi:
        return Fraction(0)
    return lo if lo > 0 else -hi


# --- tilting nullspace -------------------------------------------------------------------

def test_type3_with_two_corner_rays_has_tilt_directions():
    vs, _ = random_maximal_triangle(random.Random(7), want=Tag.TYPE3)
    f = (sum(v[0] for v in vs) / 3, sum(v[1] for v in vs) / 3)
    body = Body.from_vertices(f, vs)
    rays = _rays_to(f, vs[:2])
    assert len(nullspace_basis(body, full_cover(body), rays)) >= 1


def test_diamond_corner_rays_leave_a_tilt_direction():
    body = Body.from_vertices(F, DIAMOND)
    assert len(nullspace_basis(body, full_cover(body), _rays_to(F, DIAMOND))) >= 1


def test_perturbed_diamond_is_rigid():
    body = Body.from_vertices(F, PERTURBED)
    assert nullspace_basis(body, full_cover(body), _rays_to(F, PERTURBED)) == []


def _b1_rotation():
    y = (0, 1)
    A = (rot90(sub(y, F)), (0, 0), (0, 0))
    cover = ((y,), B1.facet_lattice_points(1), B1.facet_lattice_points(2))
    inst = Instance(F, ((-1, Fraction(1, 4)), (1, 0), (0, -1)))
    return A, cover, inst


def test_b1_rotation_about_midpoint():
    A, cover, inst = _b1_rotation()
    delta = find_tilt_epsilon(B1, A, inst, cover)
    assert delta > 0
    eps = delta / 2
    plus, minus = tilt(B1, A, eps), tilt(B1, A, -eps)
    g = B1.gamma(inst.rays)
    assert all(2 * a == b + c for a, b, c in zip(g, plus.gamma(inst.rays), minus.gamma(inst.rays)))
    assert is_lattice_free(plus) and is_lattice_free(minus)


def test_epsilon_stays_below_every_capture_threshold():
    A, cover, inst = _b1_rotation()
    delta = find_tilt_epsilon(B1, A, inst, cover)
    for x in range(-6, 7):
        for y in range(-6, 7):
            if B1.contains((x, y)):
                continue
            t = _capture_epsilon(B1, A, (x, y))
            assert t is None or delta < t


def test_zero_direction_rejected():
    _, cover, inst = _b1_rotation()
    with pytest.raises(NotInNullspace):
        find_tilt_epsilon(B1, ((0, 0), (0, 0), (0, 0)), inst, cover)


def test_direction_violating_equations_rejected():
    _, cover, inst = _b1_rotation()
    with pytest.raises(NotInNullspace):
        find_tilt_epsilon(B1, ((1, 0), (0, 0), (0, 0)), inst, cover)


def test_uncovered_boundary_point_rejected():
    A, _, inst = _b1_rotation()
    cover = (((0, 1),), (), ())
    with pytest.raises(CoverIncomplete):
        find_tilt_epsilon(B1, A, inst, cover)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_random_tilts_keep_identity(seed):
    case = None
    rng = random.Random(seed)
    while case is None:
        case = tilting_case(rng)
    body, inst, cover, A = case
    delta = find_tilt_epsilon(body, A, inst, cover)
    eps = delta / 3
    plus, minus = tilt(body, A, eps), tilt(body, A, -eps)
    g = body.gamma(inst.rays)
    assert all(2 * a == b + c for a, b, c in zip(g, plus.gamma(inst.rays), minus.gamma(inst.rays)))
    assert is_lattice_free(plus) and is_lattice_free(minus)


# --- single facet tilts and Type 2 dominators -----------------------------------------

def test_single_facet_tilt_on_type2():
    inst = Instance(F, ((-1, 0), (1, -1), (1, 1)))
    plus, minus, witness = single_facet_tilt(TYPE2, inst, 2)
    g = TYPE2.gamma(inst.rays)
    gp, gm = plus.gamma(inst.rays), minus.gamma(inst.rays)
    assert all(2 * a == b + c for a, b, c in zip(g, gp, gm))
    assert gp[witness] != gm[witness]
    assert is_lattice_free(plus) and is_lattice_free(minus)


def test_single_facet_tilt_hypotheses():
    inst = Instance(F, ((-1, 0), (1, -1), (1, 1)))
    with pytest.raises(HypothesisViolated):
        single_facet_tilt(TYPE2, inst, 0)  # three lattice points on the long facet
    # the only ray hitting facet 2 meets it at its lattice point (0, 1)
    integral_only = Instance(F, ((-1, 1), (1, -1), (1, 1)))
    with pytest.raises(HypothesisViolated):
        single_facet_tilt(TYPE2, integral_only, 2)


def test_type3_dominator():
    inst = Instance(F, ((-3, -2), (0, 1), (1, 1)))
    out = type3_dominator(TYPE2, inst)
    assert classify(out).tag is Tag.TYPE3
    g, g2 = TYPE2.gamma(inst.rays), out.gamma(inst.rays)
    assert all(a <= b for a, b in zip(g2, g)) and g2 != g


def test_type3_dominator_equality_case():
    inst = Instance(F, ((0, 1), (1, 1)))
    out = type3_dominator(TYPE2, inst)
    assert out.gamma(inst.rays) == TYPE2.gamma(inst.rays)


def test_type3_dominator_hits_straddling():
    inst = Instance(F, ((-2, -1), (3, -1), (-1, 7)))
    with pytest.raises(HypothesisViolated):
        type3_dominator(TYPE2, inst)


# --- ratio condition and corner systems -------------------------------------------------

def test_ratio_condition_examples():
    diamond = Body.from_vertices(F, DIAMOND)
    assert edge_ratios(DIAMOND, DIAMOND_POINTS) == [1, 1, 1, 1]
    assert not ratio_condition(diamond, DIAMOND, DIAMOND_POINTS)
    perturbed = Body.from_vertices(F, PERTURBED)
    assert ratio_condition(perturbed, PERTURBED, DIAMOND_POINTS)


def test_ratio_condition_one_edge_ratio_two():
    # edge ratios 2 and 1 on the first two edges; the closing edges follow from the construction
    vs = square_quad((H, Fraction(-1, 2)), H, Fraction(1))
    ratios = edge_ratios(vs, DIAMOND_POINTS)
    assert ratios[:2] == [2, 1]
    body = Body.from_vertices(interior(vs), vs)
    assert classify(body).tag is Tag.QUADRILATERAL
    assert ratio_condition(body, vs, DIAMOND_POINTS) == (math.prod(ratios) != 1)
    assert math.prod(ratios) != 1


def test_ratio_condition_inconsistent_labels():
    diamond = Body.from_vertices(F, DIAMOND)
    with pytest.raises(ValueError):
        ratio_condition(diamond, DIAMOND, [(1, 0), (1, 1), (0, 1), (2, 2)])


def test_triangle_from_b1_corner_data():
    body = triangle_from_rays_and_points(F, [(-1, -1), (3, -1), (-1, 3)], [(1, 0), (0, 1), (1, 1)])
    assert set(body.vertices) == {(0, 0), (2, 0), (0, 2)}


def test_degenerate_corner_data_rejected():
    with pytest.raises((SingularSystem, PostValidationFailed)):
        # (1, 1) lies on the ray (1, 1) from f
        triangle_from_rays_and_points(F, [(1, 1), (3, -1), (-1, 3)], [(1, 1), (0, 1), (1, 0)])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_triangle_round_trip(seed):
    rng = random.Random(seed)
    vs, _ = random_maximal_triangle(rng)
    f, rays, points, body = triangle_corner_data(rng, vs)
    assert set(triangle_from_rays_and_points(f, rays, points).vertices) == set(body.vertices)


def test_quadrilateral_reconstruction():
    res = quadrilateral_from_rays_and_points(F, _rays_to(F, PERTURBED), DIAMOND_POINTS)
    assert isinstance(res, Unique)
    assert set(res.body.vertices) == set(PERTURBED)
    res = quadrilateral_from_rays_and_points(F, _rays_to(F, DIAMOND), DIAMOND_POINTS)
    assert isinstance(res, Underdetermined) and len(res.basis) == 1


def test_rays_not_spanning_rejected():
    rays = [(1, 0), (1, 1), (0, 1), (1, 2)]
    with pytest.raises((PostValidationFailed, SingularSystem)):
        quadrilateral_from_rays_and_points(F, rays, DIAMOND_POINTS)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_ratio_condition_matches_rank(seed, product_one):
    body, corners, points = quad_with_points(random.Random(seed), product_one)
    res = quadrilateral_from_rays_and_points(body.f, _rays_to(body.f, corners), points)
    assert ratio_condition(body, corners, points) == isinstance(res, Unique)
