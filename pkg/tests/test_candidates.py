from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from lfcuts.candidates import (
    FAMILIES,
    CandidateSet,
    count_bound,
    enumerate_candidates,
    enumerate_quadrilaterals,
    enumerate_splits,
    enumerate_type1,
    enumerate_type2,
    enumerate_type3,
    first_lattice_point,
    integral_hit_gamma,
)
from lfcuts.closure import ensure_full_cone
from lfcuts.conehull import AffineCone, ParallelRays, cone_integer_hull
from lfcuts.corpus import load_corpus, random_instance
from lfcuts.instance import Instance
from lfcuts.latticefree import Body, Inequality, verify_certificate

H = Fraction(1, 2)
E1 = load_corpus("e1")
E2 = load_corpus("e2")


def _gammas(cs: CandidateSet) -> set:
    return set(cs.gammas())


def test_first_lattice_point():
    assert first_lattice_point((H, H), (1, 1)) == (H, (1, 1))
    assert first_lattice_point((H, H), (1, 0)) is None
    lam, q = first_lattice_point((Fraction(1, 3), 0), (Fraction(2, 3), 0))
    assert lam == 1 and q == (1, 0)


def test_integral_hit_examples():
    hit = integral_hit_gamma(E2)
    assert hit.gamma == (2, 2, 2, 2)
    assert hit.family == "split" and verify_certificate(hit, E2)
    assert integral_hit_gamma(E1) is None


def test_splits_of_worked_instances():
    assert {(0, 2, 0, 2), (2, 0, 2, 0)} <= _gammas(enumerate_splits(E1))
    assert (2, 2, 2, 2) in _gammas(enumerate_splits(E2))


def test_split_through_f_is_skipped():
    inst = Instance((H, Fraction(3, 2)), ((1, 1), (1, -2), (-2, 1)))
    provs = [p for q in enumerate_splits(inst).inequalities for p in q.provenance]
    assert "split:b ray 0" not in provs
    assert "split:b ray 1" in provs


def test_type3_needs_three_rays():
    inst = Instance((H, H), ((1, 0), (0, 1)))
    assert len(enumerate_type3(inst)) == 0


def test_type3_parallel_rays_skipped():
    inst = Instance((H, H), ((1, 0), (2, 0), (-1, 1)))
    assert all(verify_certificate(q, inst) for q in enumerate_type3(inst).certificates())


def test_type3_corner_solve_on_b1_rays():
    inst = Instance((H, H), ((-1, -1), (3, -1), (-1, 3)))
    cs = enumerate_type3(inst)
    assert all(verify_certificate(q, inst) for q in cs.certificates())
    # the standard triangle has these three corner rays and is recovered as a candidate
    assert Body(inst.f, ((-2, 0), (0, -2), (1, 1))).gamma(inst.rays) in _gammas(enumerate_candidates(inst))


def test_crafted_type1_recovered():
    inst = load_corpus("type1")
    tri = Body.from_vertices(inst.f, [(0, 0), (2, 0), (0, 2)])
    cs = enumerate_type1(inst)
    assert tri.gamma(inst.rays) in _gammas(cs)
    assert "t1" in cs.families_of(tri.gamma(inst.rays))


def test_crafted_type2_recovered():
    inst = load_corpus("type2")
    tri = Body.from_vertices(inst.f, [(-H, 0), (2, 0), (Fraction(1, 3), Fraction(5, 3))])
    assert tri.gamma(inst.rays) == (6, 2, 2)
    assert "t2" in enumerate_type2(inst).families_of((6, 2, 2))


def test_crafted_type3_recovered():
    inst = load_corpus("type3")
    third = Fraction(1, 3)
    tri = Body.from_vertices(inst.f, [(4 * third, third), (-2 * third, 4 * third), (third, -2 * third)])
    assert tri.gamma(inst.rays) == (1, 1, 1)
    assert "t3" in enumerate_type3(inst).families_of((1, 1, 1))


def test_pair_without_bounded_facet_gives_nothing():
    inst = Instance((H, H), ((2, 1), (1, 2)))
    assert len(enumerate_type1(inst)) == 0
    assert len(enumerate_type2(inst)) == 0


def test_type2_candidates_on_e1_verify():
    cs = enumerate_type2(E1)
    assert all(verify_certificate(q, E1) for q in cs.certificates())


def test_perturbed_diamond_quadrilateral_recovered():
    inst = load_corpus("perturbed-diamond")
    quad = Body.from_vertices(inst.f, [(Fraction(5, 2), H), (H, Fraction(7, 6)),
                                       (Fraction(-3, 10), Fraction(9, 10)), (Fraction(1, 10), Fraction(-3, 10))])
    assert quad.gamma(inst.rays) in _gammas(enumerate_quadrilaterals(inst))


def test_exact_diamond_not_a_quadrilateral_candidate():
    # E1's rays are the corner rays of the diamond through the unit square midpoints
    assert all(q.gamma != (1, 1, 1, 1) for q in enumerate_quadrilaterals(E1).certificates())


def test_quadrilaterals_need_four_rays():
    inst = Instance((H, H), ((1, 0), (0, 1), (-1, -1)))
    assert len(enumerate_quadrilaterals(inst)) == 0


def test_candidate_set_dedup_and_order():
    body = Body.band((H, H), (1, 0), 0, 1)
    cs = CandidateSet(4)
    cs.add(Inequality(body.gamma(E1.rays), body, "split", ("a",)))
    cs.add(Inequality(body.gamma(E1.rays), body, "split", ("b",)))
    assert len(cs) == 1 and cs.inequalities[0].provenance == ("a", "b")
    with pytest.raises(ValueError):
        cs.add(Inequality((1, 1), body, "split"))


def test_thread_count_does_not_change_result(monkeypatch):
    inst = load_corpus("perturbed-diamond")
    monkeypatch.setenv("LFCUTS_THREADS", "1")
    one = enumerate_candidates(inst).to_dict()
    monkeypatch.setenv("LFCUTS_THREADS", "3")
    many = enumerate_candidates(inst).to_dict()
    assert one == many


def _hull_sizes(inst: Instance) -> tuple[int, int]:
    F = V = 0
    for i, j in combinations(range(inst.k), 2):
        try:
            hull = cone_integer_hull(AffineCone(inst.f, inst.rays[i], inst.rays[j]))
        except ParallelRays:
            continue
        F = max(F, len(hull.bounded_facets()))
        V = max(V, len(hull.vertices))
    return F, V


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_random_candidates_verify_and_respect_bounds(seed):
    inst, _ = ensure_full_cone(random_instance(seed))
    F, V = _hull_sizes(inst)
    enumerators = {"split": enumerate_splits, "t1": enumerate_type1, "t2": enumerate_type2,
                   "t3": enumerate_type3, "quad": enumerate_quadrilaterals}
    for fam in FAMILIES:
        cs = enumerators[fam](inst)
        assert len(cs) <= count_bound(fam, inst.k, F, V)
        for q in cs.certificates():
            assert verify_certificate(q, inst)
