from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lfcuts.exact import (
    AffineSolutionSet,
    Infeasible,
    Inside,
    Outside,
    ParseError,
    UniqueSolution,
    bezout,
    canonical_key,
    format_rational,
    lp_membership,
    nullspace,
    parse_rational,
    positively_spanning,
    primitive_vector,
    qvec,
    rank,
    solve_or_nullspace,
)

fractions = st.fractions(max_denominator=50).filter(lambda x: abs(x.numerator) < 10**6)


@given(fractions)
def test_rational_text_round_trip(x):
    assert parse_rational(format_rational(x)) == x


@pytest.mark.parametrize("text", ["1/0", "0.5", "1e3", "", "1/", "/2", "a/b", "1//2"])
def test_malformed_rationals_rejected(text):
    with pytest.raises(ParseError):
        parse_rational(text)


def test_parse_normalizes():
    assert parse_rational("-4/6") == Fraction(-2, 3)
    assert parse_rational("+3") == 3
    assert format_rational(Fraction(4, 2)) == "2"
    assert qvec("1/2", 3, Fraction(1, 3)) == (Fraction(1, 2), Fraction(3), Fraction(1, 3))


def test_solve_examples():
    assert solve_or_nullspace([[1, 0], [0, 1]], [1, 2]) == UniqueSolution((1, 2))
    sol = solve_or_nullspace([[1, 1]], [0])
    assert isinstance(sol, AffineSolutionSet)
    assert len(sol.basis) == 1
    b = sol.basis[0]
    assert b[0] == -b[1] != 0
    assert isinstance(solve_or_nullspace([[1, 0], [1, 0]], [0, 1]), Infeasible)


@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=1, max_size=4))
def test_nullspace_is_orthogonal_and_complements_rank(rows):
    basis = nullspace(rows, 3)
    assert len(basis) + rank(rows) == 3
    for v in basis:
        assert all(sum(Fraction(a) * x for a, x in zip(row, v)) == 0 for row in rows)


@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_unique_solutions_satisfy_system(M, x):
    rhs = [sum(a * b for a, b in zip(row, x)) for row in M]
    sol = solve_or_nullspace(M, rhs)
    if rank(M) == 3:
        assert sol == UniqueSolution(tuple(Fraction(c) for c in x))
    else:
        assert isinstance(sol, AffineSolutionSet)


@pytest.mark.parametrize("v, out", [((4, -6), (2, -3)), ((0, 5), (0, 1)), ((7, 3), (7, 3))])
def test_primitive_vector(v, out):
    assert primitive_vector(v) == out


@given(st.integers(-1000, 1000), st.integers(-1000, 1000))
def test_bezout(a, b):
    g, s, t = bezout(a, b)
    assert g >= 0 and s * a + t * b == g
    if a or b:
        assert a % g == 0 and b % g == 0


def test_lp_membership_examples():
    gens = [(2, 0, 2, 0), (0, 2, 0, 2)]
    inside = lp_membership((1, 1, 2, 2), gens)
    assert isinstance(inside, Inside)
    assert sum(inside.weights) == 1
    assert isinstance(lp_membership((2, 0, 2, 0), [(0, 2, 0, 2)]), Outside)
    assert isinstance(lp_membership((3, 1, 3, 1), [(2, 0, 2, 0)]), Inside)


@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=5),
       st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6)))
def test_lp_membership_certificates(gens, p):
    res = lp_membership(p, gens)
    if isinstance(res, Inside):
        combo = [sum(w * Fraction(g[i]) for w, g in zip(res.weights, gens)) for i in range(3)]
        assert all(w >= 0 for w in res.weights) and sum(res.weights) == 1
        assert all(c <= x for c, x in zip(combo, p))
    else:
        c, thr = res.functional, res.threshold
        assert all(x >= 0 for x in c)
        assert all(sum(a * b for a, b in zip(c, g)) >= thr for g in gens)
        assert sum(a * b for a, b in zip(c, p)) < thr


def test_positively_spanning():
    assert positively_spanning([(1, 0), (0, 1), (-1, -1)])
    assert not positively_spanning([(1, 0), (0, 1), (-1, 0)])
    assert not positively_spanning([(1, 1)])


def test_canonical_key_orders_by_value():
    assert sorted([(2, 0), (Fraction(1, 2), 5), (1, 1)], key=canonical_key) == [(Fraction(1, 2), 5), (1, 1), (2, 0)]
