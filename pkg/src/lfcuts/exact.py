"""Exact rational scalars, planar vectors, dense linear algebra and a small LP.

Scalars are :class:`fractions.Fraction`; planar points and directions are
plain 2-tuples of fractions.  Every routine here is exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

Q = Fraction
Vec = tuple  # tuple of Fraction, any length
Vec2 = tuple  # (Fraction, Fraction)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


class ParseError(ValueError):
    """Malformed rational text."""


def parse_rational(text: str) -> Fraction:
    """Parse the ``p/q`` text format; floats and zero denominators are rejected."""
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ParseError(f"malformed rational {text!r}")
    if "/" in s:
        num, den = s.split("/")
        if int(den) == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def format_rational(x: Union[Fraction, int]) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def qvec(*xs: Union[int, str, Fraction]) -> tuple:
    """Build a tuple of fractions, accepting ints, fractions or ``p/q`` strings."""
    return tuple(parse_rational(x) if isinstance(x, str) else Fraction(x) for x in xs)


# --- planar vector helpers -------------------------------------------------

def add(u: Vec2, v: Vec2) -> Vec2:
    return (u[0] + v[0], u[1] + v[1])


def sub(u: Vec2, v: Vec2) -> Vec2:
    return (u[0] - v[0], u[1] - v[1])


def scale(c, v: Vec2) -> Vec2:
    return (c * v[0], c * v[1])


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def cross(u: Vec2, v: Vec2):
    """Determinant det[u v]."""
    return u[0] * v[1] - u[1] * v[0]


def rot90(v: Vec2) -> Vec2:
    """Counter-clockwise rotation by a quarter turn."""
    return (-v[1], v[0])


def is_integral(v: Iterable) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def integer_direction(v: Vec2) -> tuple[int, int]:
    """Smallest integer vector positively parallel to the nonzero rational ``v``."""
    a, b = Fraction(v[0]), Fraction(v[1])
    if a == 0 and b == 0:
        raise ValueError("zero vector has no direction")
    den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    return primitive_vector((int(a * den), int(b * den)))


def primitive_vector(v: Sequence[int]) -> tuple[int, int]:
    """Divide an integer vector by the gcd of its entries."""
    a, b = int(v[0]), int(v[1])
    if a != v[0] or b != v[1]:
        raise ValueError(f"primitive_vector needs an integer vector, got {v!r}")
    g = gcd(a, b)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return (a // g, b // g)


def parallel(u: Vec2, v: Vec2) -> bool:
    return cross(u, v) == 0


def canonical_key(v: Iterable) -> tuple:
    """Library-wide deterministic order for rational vectors (lexicographic by value)."""
    return tuple(Fraction(x) for x in v)


# --- dense linear algebra --------------------------------------------------

@dataclass(frozen=True)
class UniqueSolution:
    x: tuple


@dataclass(frozen=True)
class AffineSolutionSet:
    particular: tuple
    basis: tuple  # tuple of independent nullspace vectors


@dataclass(frozen=True)
class Infeasible:
    pass


LinearSolution = Union[UniqueSolution, AffineSolutionSet, Infeasible]


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns the matrix and its pivot columns."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        if piv != 1:
            m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                fac = m[i][c]
                mi, mr = m[i], m[r]
                m[i] = [a - fac * b for a, b in zip(mi, mr)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def solve_or_nullspace(M: Sequence[Sequence], rhs: Sequence) -> LinearSolution:
    """Describe the full solution set of ``M x = rhs`` exactly."""
    nrows = len(M)
    if len(rhs) != nrows:
        raise ValueError(f"rhs length {len(rhs)} does not match {nrows} rows")
    if nrows == 0:
        raise ValueError("empty system has no column count")
    n = len(M[0])
    if any(len(row) != n for row in M):
        raise ValueError("matrix is not rectangular")
    aug = [list(row) + [b] for row, b in zip(M, rhs)]
    red, pivots = rref(aug)
    if n in pivots:
        return Infeasible()
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = red[i][n]
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return UniqueSolution(tuple(x))
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -red[i][fc]
        basis.append(tuple(v))
    return AffineSolutionSet(tuple(x), tuple(basis))


def nullspace(M: Sequence[Sequence], ncols: int | None = None) -> list[tuple]:
    """Basis of ``{x : M x = 0}``; ``ncols`` is needed when ``M`` has no rows."""
    if not M:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    sol = solve_or_nullspace(M, [0] * len(M))
    if isinstance(sol, UniqueSolution):
        return []
    return list(sol.basis)


def rank(M: Sequence[Sequence]) -> int:
    if not M:
        return 0
    return len(rref(M)[1])


def solve2(a: Vec2, b: Vec2, rhs: Vec2) -> Vec2 | None:
    """Solve ``[a b] (s, t) = rhs`` for columns ``a``, ``b``; None if singular."""
    det = cross(a, b)
    if det == 0:
        return None
    return (cross(rhs, b) / det, cross(a, rhs) / det)


# --- exact LP: phase-one simplex with Bland's rule ---------------------------

def _phase_one(A: list[list[Fraction]], b: list[Fraction]):
    """Find ``x >= 0`` with ``A x = b`` or a Farkas vector ``y``.

    Returns ``(x, None)`` when feasible and ``(None, y)`` otherwise, where
    ``y A <= 0`` and ``y b > 0``.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    sign = [1] * m
    rows = []
    for i in range(m):
        row = list(A[i]) + [b[i]]
        if b[i] < 0:
            row = [-x for x in row]
            sign[i] = -1
        rows.append(row)
    # tableau columns: n originals, m artificials, rhs
    T = []
    for i in range(m):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        T.append(rows[i][:n] + art + [rows[i][n]])
    basis = [n + i for i in range(m)]
    # reduced costs for minimizing the sum of artificials
    obj = [Fraction(0)] * (n + m + 1)
    for i in range(m):
        for j in range(n):
            obj[j] -= T[i][j]
        obj[n + m] -= T[i][n + m]
    width = n + m
    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # cannot happen: phase one is bounded below by 0
            raise ArithmeticError("unbounded phase-one problem")
        piv = T[leave][enter]
        prow = [x / piv for x in T[leave]]
        T[leave] = prow
        for i in range(m):
            if i != leave and T[i][enter] != 0:
                fac = T[i][enter]
                T[i] = [a - fac * c for a, c in zip(T[i], prow)]
        if obj[enter] != 0:
            fac = obj[enter]
            obj = [a - fac * c for a, c in zip(obj, prow)]
        basis[leave] = enter
    value = -obj[width]
    if value == 0:
        x = [Fraction(0)] * n
        for i, j in enumerate(basis):
            if j < n:
                x[j] = T[i][width]
        return x, None
    # artificial reduced costs are 1 - y_i
    y = [(1 - obj[n + i]) * sign[i] for i in range(m)]
    return None, y


@dataclass(frozen=True)
class Inside:
    weights: tuple  # convex multipliers, one per generator


@dataclass(frozen=True)
class Outside:
    functional: tuple  # c with c.g >= threshold for all generators
    threshold: Fraction


def lp_membership(point: Sequence, generators: Sequence[Sequence], recession: bool = True):
    """Decide whether ``point`` lies in ``conv(generators) + R^k_+``.

    With ``recession=False`` the orthant is dropped and plain convex-hull
    membership is decided.  Outside answers carry a strictly separating
    functional (nonnegative when ``recession`` is set).
    """
    k = len(point)
    if not generators:
        if not recession:
            raise ValueError("empty generator list without recession")
        return Outside(tuple(Fraction(0) for _ in range(k)), Fraction(1))
    if any(len(g) != k for g in generators):
        raise ValueError("generator dimension mismatch")
    m = len(generators)
    cols = m + (k if recession else 0)
    A = [[Fraction(0)] * cols for _ in range(k + 1)]
    for j, g in enumerate(generators):
        for i in range(k):
            A[i][j] = Fraction(g[i])
        A[k][j] = Fraction(1)
    if recession:
        for i in range(k):
            A[i][m + i] = Fraction(1)
    b = [Fraction(p) for p in point] + [Fraction(1)]
    x, y = _phase_one(A, b)
    if x is not None:
        lam = tuple(x[:m])
        assert sum(lam) == 1 and all(v >= 0 for v in lam)
        return Inside(lam)
    u, w = y[:k], y[k]
    c = tuple(-v for v in u)
    cert = Outside(c, w)
    assert all(dot(c, g) >= w for g in generators)
    assert dot(c, point) < w
    assert not recession or all(v >= 0 for v in c)
    return cert


def _half(v: Vec2) -> int:
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def angle_key(v: Vec2):
    """Sort key ordering nonzero vectors counter-clockwise from the positive x-axis."""
    return _AngleKey(v)


class _AngleKey:
    __slots__ = ("v", "h")

    def __init__(self, v: Vec2):
        self.v = v
        self.h = _half(v)

    def __lt__(self, other: "_AngleKey") -> bool:
        if self.h != other.h:
            return self.h < other.h
        return cross(self.v, other.v) > 0

    def __eq__(self, other) -> bool:
        return self.h == other.h and cross(self.v, other.v) == 0


def positively_spanning(vectors: Sequence[Vec2]) -> bool:
    """True iff the nonnegative combinations of ``vectors`` cover the whole plane."""
    vs = sorted((v for v in vectors if v[0] != 0 or v[1] != 0), key=angle_key)
    if len(vs) < 3:
        return False
    for u, v in zip(vs, vs[1:] + vs[:1]):
        # every angular gap must be strictly below a half-turn
        c = cross(u, v)
        if c < 0 or (c == 0 and dot(u, v) < 0):
            return False
    return True


def bezout(a: int, b: int) -> tuple[int, int, int]:
    """``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t
