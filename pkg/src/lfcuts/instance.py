"""Problem data ``x = f + sum_j r^j s_j`` and its text file format.

An instance file is line oriented::

    # comment
    name = e1
    f = 1/2 1/2
    r = 1 0
    r = 0 1

Rays keep their order; ``f`` must not be integral.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import Vec2, format_rational, integer_direction, is_integral, parse_rational


class InstanceError(ValueError):
    """Semantic rejection of instance data (integral f, zero ray)."""


class InstanceParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Instance:
    f: Vec2
    rays: tuple
    name: str = ""
    comment: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(Fraction(x) for x in self.f))
        object.__setattr__(self, "rays", tuple(tuple(Fraction(x) for x in r) for r in self.rays))
        if len(self.f) != 2 or any(len(r) != 2 for r in self.rays):
            raise InstanceError("f and every ray must have two coordinates")
        if is_integral(self.f):
            raise InstanceError(f"f = {self.f} is integral; no lattice-free body contains it in its interior")
        for j, r in enumerate(self.rays):
            if r[0] == 0 and r[1] == 0:
                raise InstanceError(f"ray {j} is zero")

    @property
    def k(self) -> int:
        return len(self.rays)

    def duplicate_rays(self) -> list[tuple[int, int]]:
        """Pairs ``(i, j)``, ``i < j``, of rays pointing in the same direction."""
        dirs = [integer_direction(r) for r in self.rays]
        return [(i, j) for i in range(self.k) for j in range(i + 1, self.k) if dirs[i] == dirs[j]]

    def with_rays(self, rays) -> "Instance":
        return Instance(self.f, tuple(rays), self.name, self.comment)

    def to_text(self) -> str:
        lines = []
        if self.name:
            lines.append(f"name = {self.name}")
        lines.append("f = " + " ".join(format_rational(x) for x in self.f))
        for r in self.rays:
            lines.append("r = " + " ".join(format_rational(x) for x in r))
        return "\n".join(lines) + "\n"


def _parse_pair(text: str, lineno: int, col: int) -> Vec2:
    parts = text.split()
    if len(parts) != 2:
        raise InstanceParseError(f"expected two rationals, got {text.strip()!r}", lineno, col)
    out = []
    for p in parts:
        try:
            out.append(parse_rational(p))
        except ValueError as exc:
            raise InstanceParseError(str(exc), lineno, col + text.find(p)) from None
    return tuple(out)


def parse_instance(text: str) -> Instance:
    f = None
    rays = []
    name = ""
    comments = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue
        if "=" not in line:
            raise InstanceParseError("expected 'key = value'", lineno)
        key, value = line.split("=", 1)
        key = key.strip()
        col = raw.index("=") + 2
        if key == "name":
            name = value.strip()
        elif key == "f":
            if f is not None:
                raise InstanceParseError("f given twice", lineno)
            f = _parse_pair(value, lineno, col)
        elif key == "r":
            rays.append(_parse_pair(value, lineno, col))
        else:
            raise InstanceParseError(f"unknown key {key!r}", lineno)
    if f is None:
        raise InstanceParseError("missing 'f = ...' line", 1)
    return Instance(f, tuple(rays), name, "\n".join(comments))


def load_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        inst = parse_instance(fh.read())
    if not inst.name:
        from pathlib import Path

        inst = Instance(inst.f, inst.rays, Path(path).stem, inst.comment)
    return inst
