"""Facet lists of blocking polyhedra ``{s >= 0 : gamma . s >= 1}``."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import canonical_key, format_rational


@dataclass(frozen=True)
class FacetList:
    """Nontrivial facets ``gamma . s >= 1`` plus the facet-defining ``s_j >= 0``.

    ``empty`` marks an infeasible system (some gamma is zero); in that case
    ``nontrivial`` holds that single zero inequality.
    """

    nontrivial: tuple  # Inequality records, sorted by gamma
    trivial: tuple = ()
    empty: bool = False
    diagnostics: dict = field(default_factory=dict, compare=False)

    def gammas(self) -> list[tuple]:
        return [tuple(Fraction(x) for x in ineq.gamma) for ineq in self.nontrivial]

    def gamma_set(self) -> frozenset:
        return frozenset(self.gammas())

    def same_facets(self, other: "FacetList") -> bool:
        return (self.empty == other.empty and self.gamma_set() == other.gamma_set()
                and tuple(self.trivial) == tuple(other.trivial))

    def to_dict(self) -> dict:
        return {
            "empty": self.empty,
            "nontrivial": [ineq.to_dict() for ineq in self.nontrivial],
            "trivial": [f"s{j + 1} >= 0" for j in self.trivial],
            "diagnostics": self.diagnostics,
        }


def trivial_facets(gammas, k: int) -> tuple:
    """Indices ``j`` for which ``s_j >= 0`` defines a facet of ``{s >= 0 : g . s >= 1}``.

    The face ``s_j = 0`` has recession cone of dimension ``k - 1``, so it is
    a facet exactly when it is nonempty, i.e. when every gamma still has a
    positive entry off coordinate ``j``.
    """
    gs = [tuple(Fraction(x) for x in g) for g in gammas]
    if any(all(x == 0 for x in g) for g in gs):
        return ()
    return tuple(j for j in range(k) if all(any(x > 0 for i, x in enumerate(g) if i != j) for g in gs))


def sort_by_gamma(ineqs) -> tuple:
    return tuple(sorted(ineqs, key=lambda q: canonical_key(q.gamma)))


def gamma_text(g) -> str:
    return "(" + ", ".join(format_rational(x) for x in g) + ")"
