"""Facets of the mixed integer hull for the bundled corpus, with certificates."""

from __future__ import annotations

from lfcuts import classify, corpus, mixed_integer_hull_facets
from lfcuts.facets import gamma_text


def main() -> None:
    for inst in corpus():
        facets = mixed_integer_hull_facets(inst)
        print(f"{inst.name}: f = {tuple(str(x) for x in inst.f)}, {inst.k} rays")
        if facets.empty:
            print("  hull is empty")
            continue
        for q in facets.nontrivial:
            body = q.certificate
            print(f"  {gamma_text(q.gamma)}  <- {q.family} {classify(body).tag.value if body else '-'}")
        print(f"  trivial s_j >= 0 for j in {facets.trivial}")


if __name__ == "__main__":
    main()
