"""Exact planar supports: lines, rays and segments with rational points and integral directions."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import gcd


def _prim(v) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return tuple(int(x) // g for x in v) if g else tuple(int(x) for x in v)


def normalize_covector(a) -> tuple[tuple[int, ...], int]:
    """(primitive a with first nonzero entry positive, sign applied)."""
    p = _prim(a)
    first = next((x for x in p if x), 0)
    s = -1 if first < 0 else 1
    return tuple(s * x for x in p), s


def fvec(v) -> tuple:
    return tuple(Fraction(x) for x in v)


def fdot(a, b):
    return sum(Fraction(x) * y for x, y in zip(a, b))


def rot90(d) -> tuple:
    """Anticlockwise quarter turn."""
    return (-d[1], d[0])


@dataclass(frozen=True)
class Support:
    """kind: 'line' | 'ray' | 'segment'.  Points are apex + t * direction with t in the kind's range."""

    kind: str
    apex: tuple
    direction: tuple  # primitive for lines and rays; end - apex for segments

    def __post_init__(self):
        object.__setattr__(self, "apex", fvec(self.apex))
        if self.kind in ("line", "ray"):
            d = _prim(self.direction)
        elif self.kind == "segment":
            d = fvec(self.direction)
        else:
            raise ValueError(f"unknown support kind {self.kind}")
        if not any(d):
            raise ValueError("support has zero direction, so it is not of codimension one")
        object.__setattr__(self, "direction", d)

    @classmethod
    def line(cls, point, direction) -> "Support":
        return cls("line", point, direction)

    @classmethod
    def ray(cls, apex, direction) -> "Support":
        return cls("ray", apex, direction)

    @classmethod
    def segment(cls, start, end) -> "Support":
        return cls("segment", start, tuple(Fraction(b) - Fraction(a) for a, b in zip(start, end)))

    @property
    def end(self):
        return tuple(a + b for a, b in zip(self.apex, self.direction)) if self.kind == "segment" else None

    @property
    def primitive_direction(self) -> tuple[int, ...]:
        if self.kind != "segment":
            return self.direction
        den = 1
        for x in self.direction:
            den = den * x.denominator // gcd(den, x.denominator)
        return _prim([x * den for x in self.direction])

    def line_key(self):
        a, _ = normalize_covector(rot90(self.primitive_direction))
        return a, fdot(a, self.apex)

    def param(self, x) -> Fraction:
        d = self.direction
        return fdot([Fraction(p) - q for p, q in zip(x, self.apex)], d) / fdot(d, d)

    def on_line(self, x) -> bool:
        a, b = self.line_key()
        return fdot(a, x) == b

    def contains(self, x) -> bool:
        if not self.on_line(x):
            return False
        t = self.param(x)
        if self.kind == "ray":
            return t >= 0
        if self.kind == "segment":
            return 0 <= t <= 1
        return True

    def endpoints(self) -> list[tuple]:
        if self.kind == "ray":
            return [self.apex]
        if self.kind == "segment":
            return [self.apex, self.end]
        return []

    def is_endpoint(self, x) -> bool:
        return any(tuple(x) == e for e in self.endpoints())

    def half_rays_at(self, x) -> list[tuple[int, ...]]:
        """Primitive directions of the support leaving x (x on the support)."""
        d = self.primitive_direction
        back = tuple(-c for c in d)
        if self.kind == "line":
            return [d, back]
        t = self.param(x)
        out = []
        hi = None if self.kind == "ray" else 1
        if hi is None or t < hi:
            out.append(d)
        if t > 0:
            out.append(back)
        return out

    def key(self):
        if self.kind == "line":
            a, b = self.line_key()
            return ("line", a, b)
        if self.kind == "ray":
            return ("ray", self.apex, self.direction)
        return ("segment",) + tuple(sorted([self.apex, self.end]))

    def describe(self) -> str:
        at = _text(self.apex)
        if self.kind == "line":
            return f"line through {at} along {_text(self.direction)}"
        if self.kind == "ray":
            return f"ray from {at} along {_text(self.direction)}"
        return f"segment {at} to {_text(self.end)}"

    def to_json(self) -> dict:
        out = {"apex": [_num(x) for x in self.apex]}
        if self.kind == "line":
            out["line"] = list(self.direction)
        elif self.kind == "ray":
            out["direction"] = list(self.direction)
        else:
            out["end"] = [_num(x) for x in self.end]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Support":
        apex = [Fraction(x) for x in data["apex"]]
        if "line" in data:
            return cls.line(apex, [int(x) for x in data["line"]])
        if "direction" in data:
            return cls.ray(apex, [int(x) for x in data["direction"]])
        if "end" in data:
            return cls.segment(apex, [Fraction(x) for x in data["end"]])
        raise ValueError("support needs one of 'line', 'direction' or 'end'")


def _num(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else str(x)


def _text(v) -> str:
    return "(" + ", ".join(str(_num(x)) for x in v) + ")"


def intersect_lines(a1, b1, a2, b2):
    """Intersection of a1.x = b1 and a2.x = b2, or None when parallel."""
    det = a1[0] * a2[1] - a1[1] * a2[0]
    if det == 0:
        return None
    x = (Fraction(b1) * a2[1] - Fraction(b2) * a1[1]) / det
    y = (Fraction(a1[0]) * b2 - Fraction(a2[0]) * b1) / det
    return (x, y)


def _half(v) -> int:
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def angle_cmp(a, b) -> int:
    """Order by angle in [0, 2 pi) measured from the positive first axis."""
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    cross = a[0] * b[1] - a[1] * b[0]
    return -1 if cross > 0 else 1 if cross < 0 else 0


angle_key = cmp_to_key(angle_cmp)
