"""Truncated rings of local monoids P = {(m, a_0..a_l) : a_i >= psi_i(m)}."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence


@dataclass(frozen=True)
class ConvexPL:
    """max of finitely many linear functions (convex, positively homogeneous)."""

    slopes: tuple

    def __call__(self, m: Sequence[int]) -> Fraction:
        return max(sum(Fraction(a) * b for a, b in zip(s, m)) for s in self.slopes)

    def is_strictly_convex(self) -> bool:
        # strict on a complete fan: every slope attains the max on a full-dimensional region;
        # detected by distinct slopes being pairwise different
        return len(set(self.slopes)) == len(self.slopes) and len(self.slopes) > 1


@dataclass(frozen=True)
class ToricMonoid:
    """Q[P]/(q^(order+1)) with q = z^(0, 1, 0, ..., 0)."""

    rank: int
    psis: tuple  # ConvexPL per extra coordinate; psis[0] strictly convex
    order: int

    def __post_init__(self):
        if not self.psis or not self.psis[0].is_strictly_convex():
            raise ValueError("psi_0 must be strictly convex")

    def contains(self, p: Sequence) -> bool:
        m, a = tuple(p[: self.rank]), p[self.rank:]
        return len(a) == len(self.psis) and all(ai >= psi(m) for ai, psi in zip(a, self.psis))

    def q_power(self, p: Sequence) -> int:
        """Largest j with p - j*varrho in P."""
        m, a0 = tuple(p[: self.rank]), p[self.rank]
        gap = Fraction(a0) - self.psis[0](m)
        return gap.numerator // gap.denominator

    def element(self, terms: Mapping) -> "MonoidElement":
        return MonoidElement(self, terms)

    def monomial(self, p: Sequence, c=1) -> "MonoidElement":
        return MonoidElement(self, {tuple(p): Fraction(c)})


class MonoidElement:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: ToricMonoid, terms: Mapping):
        self.ring = ring
        out = {}
        for p, c in terms.items():
            p = tuple(p)
            if not ring.contains(p):
                raise ValueError(f"{p} is not in the monoid")
            if ring.q_power(p) > ring.order:
                continue
            c = out.get(p, Fraction(0)) + Fraction(c)
            if c:
                out[p] = c
            else:
                out.pop(p, None)
        self.terms = out

    def __add__(self, other):
        out = dict(self.terms)
        for p, c in other.terms.items():
            out[p] = out.get(p, Fraction(0)) + c
        return MonoidElement(self.ring, out)

    def __mul__(self, other):
        if other.ring != self.ring:
            raise ValueError("mixed ring variants")
        out = {}
        for p1, c1 in self.terms.items():
            for p2, c2 in other.terms.items():
                p = tuple(a + b for a, b in zip(p1, p2))
                out[p] = out.get(p, Fraction(0)) + c1 * c2
        return MonoidElement(self.ring, out)

    def __eq__(self, other):
        return isinstance(other, MonoidElement) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return " + ".join(f"{c} z^{p}" for p, c in sorted(self.terms.items())) or "0"
