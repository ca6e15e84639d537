"""Shipped regression instances and a seeded random instance generator."""

from __future__ import annotations

import random
from fractions import Fraction
from importlib import resources

from .instance import Instance, parse_instance


def corpus_names() -> list[str]:
    files = resources.files("lfcuts") / "corpus"
    return sorted(p.name[: -len(".inst")] for p in files.iterdir() if p.name.endswith(".inst"))


def load_corpus(name: str) -> Instance:
    text = (resources.files("lfcuts") / "corpus" / f"{name}.inst").read_text(encoding="utf-8")
    inst = parse_instance(text)
    return inst if inst.name else Instance(inst.f, inst.rays, name, inst.comment)


def corpus() -> list[Instance]:
    return [load_corpus(n) for n in corpus_names()]


def _rational(rng: random.Random, num: int, den: int) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_instance(seed: int, k: int | None = None, num: int = 8, den: int = 8) -> Instance:
    """Instance with ``k`` rays (2 to 4 when not given); entries are ``p/q`` with ``|p| <= num``, ``q <= den``."""
    rng = random.Random(seed)
    if k is None:
        k = rng.choice((2, 3, 4))
    while True:
        f = (_rational(rng, num, den), _rational(rng, num, den))
        if f[0].denominator != 1 or f[1].denominator != 1:
            break
    rays = []
    while len(rays) < k:
        r = (_rational(rng, num, den), _rational(rng, num, den))
        if r != (0, 0):
            rays.append(r)
    return Instance(f, tuple(rays), f"random-{seed}")
