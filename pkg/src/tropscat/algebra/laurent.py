"""Truncated Laurent rings Q[Lambda][q]/(q^{k+1})."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


@dataclass(frozen=True)
class Laurent:
    rank: int
    order: int

    def zero(self) -> "RingElement":
        return RingElement(self, {})

    def one(self) -> "RingElement":
        return self.monomial((0,) * self.rank)

    def monomial(self, m: Sequence[int], j: int = 0, c=1) -> "RingElement":
        return RingElement(self, {(j, tuple(m)): Fraction(c)})

    def q(self, j: int = 1) -> "RingElement":
        return self.monomial((0,) * self.rank, j)

    def generators(self) -> list["RingElement"]:
        out = []
        for i in range(self.rank):
            e = tuple(int(i == k) for k in range(self.rank))
            out.append(self.monomial(e))
        return out

    def with_order(self, order: int) -> "Laurent":
        return Laurent(self.rank, order)


def _check_key(ring, j, m):
    if len(m) != ring.rank:
        raise ValueError(f"monomial {m} has wrong rank for {ring}")
    if j < 0:
        raise ValueError("negative q-power")


class RingElement:
    """Finite sum of c q^j z^m, truncated at q^{order+1}."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Laurent, terms: Mapping[tuple, Fraction] | Iterable = ()):
        self.ring = ring
        items = terms.items() if isinstance(terms, Mapping) else terms
        out: dict[tuple, Fraction] = {}
        for (j, m), c in items:
            if j > ring.order:
                continue
            m = tuple(int(x) for x in m)
            _check_key(ring, j, m)
            c = out.get((j, m), Fraction(0)) + Fraction(c)
            if c:
                out[(j, m)] = c
            else:
                out.pop((j, m), None)
        self.terms = out

    # arithmetic

    def _same(self, other: "RingElement"):
        if not isinstance(other, RingElement):
            raise TypeError("mixed ring variants")
        if other.ring != self.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.one() * other
        self._same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return RingElement(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RingElement(self.ring, {k: c * other for k, c in self.terms.items()})
        self._same(other)
        k = self.ring.order
        out: dict[tuple, Fraction] = {}
        for (j1, m1), c1 in self.terms.items():
            for (j2, m2), c2 in other.terms.items():
                j = j1 + j2
                if j > k:
                    continue
                key = (j, tuple(a + b for a, b in zip(m1, m2)))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return RingElement(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "RingElement":
        """Inverse when self = c z^m (1 + q h): monomial unit times 1 + O(q)."""
        lead = [(k, c) for k, c in self.terms.items() if k[0] == 0]
        if len(lead) != 1:
            raise ValueError("element is not a unit mod q")
        (_, m0), c0 = lead[0]
        unit_inv = self.ring.monomial(tuple(-x for x in m0), 0, 1 / c0)
        rest = self * unit_inv - self.ring.one()
        # 1/(1+r) = sum (-r)^s, r divisible by q
        acc = self.ring.one()
        power = self.ring.one()
        for _ in range(self.ring.order):
            power = power * (-rest)
            if not power:
                break
            acc = acc + power
        return acc * unit_inv

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.one() * other
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        from .text import format_function
        return format_function(self) or "0"

    # structure

    def truncate(self, j: int) -> "RingElement":
        return RingElement(self.ring.with_order(j), {k: c for k, c in self.terms.items() if k[0] <= j})

    def q_order(self) -> int | None:
        """Lowest q-power present (None for zero)."""
        return min((j for j, _ in self.terms), default=None)

    def derivative(self, n: Sequence) -> "RingElement":
        """Log derivation partial_n: z^m -> <m,n> z^m."""
        return RingElement(self.ring, {(j, m): c * sum(Fraction(a) * b for a, b in zip(m, n))
                                       for (j, m), c in self.terms.items()})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0][0], kv[0][1]))


def log_one_plus(g: RingElement) -> RingElement:
    """log(1 + g) for g divisible by q, truncated."""
    if g.q_order() is not None and g.q_order() < 1:
        raise ValueError("log(1+g) needs g divisible by q")
    acc = g.ring.zero()
    power = g.ring.one()
    for s in range(1, g.ring.order + 1):
        power = power * g
        if not power:
            break
        acc = acc + power * Fraction((-1) ** (s + 1), s)
    return acc
