"""The tropical vertex group exp(q g) as words of exponentials."""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Sequence

from .laurent import Laurent, RingElement
from .lie import LieElement, bracket


def _ad(theta: LieElement, x):
    """x -> [x, theta]: the derivation action on functions, the matching conjugation on fields."""
    if isinstance(x, RingElement):
        return theta.act_on_function(x)
    if isinstance(x, LieElement):
        return bracket(x, theta)
    raise TypeError(f"cannot act on {type(x).__name__}")


def exp_letter(theta: LieElement, x):
    """sum_s ad^s(x) / s!, finite because theta is divisible by q."""
    if theta.q_order() is not None and theta.q_order() < 1:
        raise ValueError("not in tropical vertex group")
    acc = x
    term = x
    for s in range(1, theta.ring.order + 1):
        term = _ad(theta, term)
        if not term:
            break
        acc = acc + _scale(term, Fraction(1, factorial(s)))
    return acc


def _scale(x, c):
    return x * c if isinstance(x, RingElement) else x.scale(c)


class VertexGroupElement:
    """exp(theta_1) o ... o exp(theta_r); equality compares actions on generators."""

    __slots__ = ("ring", "word")

    def __init__(self, ring: Laurent, word: Sequence[LieElement] = ()):
        self.ring = ring
        word = tuple(w for w in word if w)
        for w in word:
            if w.ring != ring:
                raise ValueError("letter lives in a different ring")
            if w.q_order() < 1:
                raise ValueError("not in tropical vertex group")
        self.word = word

    @classmethod
    def exp(cls, theta: LieElement) -> "VertexGroupElement":
        return cls(theta.ring, (theta,))

    @classmethod
    def identity(cls, ring: Laurent) -> "VertexGroupElement":
        return cls(ring, ())

    def __mul__(self, other: "VertexGroupElement") -> "VertexGroupElement":
        if other.ring != self.ring:
            raise ValueError("ring mismatch")
        return VertexGroupElement(self.ring, self.word + other.word)

    def inverse(self) -> "VertexGroupElement":
        return VertexGroupElement(self.ring, tuple(-w for w in reversed(self.word)))

    def act(self, x):
        for theta in reversed(self.word):
            x = exp_letter(theta, x)
        return x

    def images(self) -> list[RingElement]:
        return [self.act(g) for g in self.ring.generators()]

    def is_identity(self) -> bool:
        return all(img == g for img, g in zip(self.images(), self.ring.generators()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, VertexGroupElement):
            return NotImplemented
        return self.ring == other.ring and self.images() == other.images()

    def __hash__(self):
        return hash(tuple(self.images()))

    def truncate(self, j: int) -> "VertexGroupElement":
        ring = self.ring.with_order(j)
        return VertexGroupElement(ring, tuple(w.truncate(j) for w in self.word))

    def factorize(self) -> list[LieElement]:
        """Homogeneous p_1, p_2, ... (increasing q-order) with self = exp(p_1) o exp(p_2) o ..."""
        parts = []
        rest = self
        for j in range(1, self.ring.order + 1):
            part = order_part(rest, j)
            if part:
                parts.append(part)
                rest = VertexGroupElement(self.ring, (-part,)) * rest
        return parts

    def leading_defect(self) -> tuple[int, LieElement] | None:
        """(j, p) with self = exp(p) mod q^(j+1) and p homogeneous of order j; None if identity."""
        for j in range(1, self.ring.order + 1):
            part = order_part(self, j)
            if part:
                return j, part
        return None

    def __repr__(self):
        return f"VertexGroupElement({list(self.word)})"


def order_part(g: VertexGroupElement, j: int) -> LieElement:
    """Degree-j part of log g, assuming g = id mod q^j."""
    ring = g.ring
    out = LieElement(ring, {})
    for i, gen in enumerate(ring.generators()):
        img = g.act(gen)
        diff = img - gen
        e_i = tuple(int(a == i) for a in range(ring.rank))
        for (jj, m), c in diff.terms.items():
            if jj < j:
                raise ValueError("element is not the identity below the requested order")
            if jj != j:
                continue
            base = tuple(a - b for a, b in zip(m, e_i))
            n = tuple(Fraction(c) if a == i else Fraction(0) for a in range(ring.rank))
            out = out + LieElement(ring, {(j, base): n})
    return out


def exp_action(g, x):
    """Apply a VertexGroupElement (or a single logarithm) to a function or field."""
    if isinstance(g, LieElement):
        g = VertexGroupElement.exp(g)
    return g.act(x)


def wall_action_closed_form(f: RingElement, n: Sequence, x: RingElement) -> RingElement:
    """z^m' -> z^m' f^<m', n> extended linearly (valid for <m, n> = 0 on the support of f)."""
    ring = x.ring
    out = ring.zero()
    for (j, m), c in x.terms.items():
        e = sum(Fraction(a) * b for a, b in zip(m, n))
        if e.denominator != 1:
            raise ValueError("non-integral exponent in closed form")
        out = out + ring.monomial(m, j, c) * (f ** int(e))
    return out
