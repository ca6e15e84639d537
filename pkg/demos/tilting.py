"""Rotate one facet of a maximal triangle and watch its gamma split in two."""

from __future__ import annotations

from fractions import Fraction

from lfcuts import Body, Instance, classify
from lfcuts.exact import rot90, sub
from lfcuts.tilting import find_tilt_epsilon, nullspace_basis, tilt

H = Fraction(1, 2)


def show(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def main() -> None:
    f = (H, H)
    body = Body(f, ((-2, 0), (0, -2), (1, 1)))  # x1 >= 0, x2 >= 0, x1 + x2 <= 2
    inst = Instance(f, ((-1, Fraction(1, 4)), (1, 0), (0, -1)))
    y = (0, 1)
    cover = ((y,), body.facet_lattice_points(1), body.facet_lattice_points(2))
    print(f"{classify(body).tag.value}, gamma {show(body.gamma(inst.rays))}")
    print(f"tilt nullspace dimension for this cover: {len(nullspace_basis(body, cover, inst.rays))}")

    A = (rot90(sub(y, f)), (0, 0), (0, 0))  # spin the first facet about (0, 1)
    delta = find_tilt_epsilon(body, A, inst, cover)
    print(f"certified step delta = {delta}")
    for eps in (delta, -delta):
        b = tilt(body, A, eps)
        print(f"  eps {str(eps):>6}: rows {[show(r) for r in b.rows]}, gamma {show(b.gamma(inst.rays))}")
    plus, minus = tilt(body, A, delta), tilt(body, A, -delta)
    mid = tuple((a + b) / 2 for a, b in zip(plus.gamma(inst.rays), minus.gamma(inst.rays)))
    print(f"average of the two tilted gammas: {show(mid)}")


if __name__ == "__main__":
    main()
