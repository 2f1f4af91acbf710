"""Log polyvector fields: wedge product, Gerstenhaber bracket, BV operator.

A polyvector is a finite sum of c q^j z^m theta_I where theta_i stands for the
log derivation along the i-th basis covector, so partial_n = sum n_i theta_i.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .laurent import Laurent, RingElement, log_one_plus


def _merge(I: tuple, J: tuple):
    """theta_I ^ theta_J = sign * theta_K."""
    if set(I) & set(J):
        return 0, ()
    seq = list(I) + list(J)
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return (-1 if inv % 2 else 1), tuple(sorted(seq))


def _pair(m, n) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(m, n)), Fraction(0))


class Polyvector:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: Laurent, terms: Mapping | Iterable = ()):
        self.ring = ring
        items = terms.items() if isinstance(terms, Mapping) else terms
        out: dict[tuple, Fraction] = {}
        for (j, m, I), c in items:
            if j > ring.order:
                continue
            key = (j, tuple(m), tuple(I))
            c = out.get(key, Fraction(0)) + Fraction(c)
            if c:
                out[key] = c
            else:
                out.pop(key, None)
        self.terms = out

    @classmethod
    def from_function(cls, f: RingElement) -> "Polyvector":
        return cls(f.ring, {(j, m, ()): c for (j, m), c in f.terms.items()})

    @classmethod
    def from_lie(cls, a: "LieElement") -> "Polyvector":
        out = {}
        for (j, m), n in a.terms.items():
            for i, x in enumerate(n):
                if x:
                    out[(j, m, (i,))] = out.get((j, m, (i,)), Fraction(0)) + x
        return cls(a.ring, out)

    @classmethod
    def term(cls, ring: Laurent, c, j: int, m: Sequence[int], *ns: Sequence) -> "Polyvector":
        """c q^j z^m partial_{n_1} ^ ... ^ partial_{n_l}."""
        pv = cls(ring, {(j, tuple(m), ()): Fraction(c)})
        for n in ns:
            pv = pv.wedge(cls(ring, {(0, (0,) * ring.rank, (i,)): Fraction(x) for i, x in enumerate(n) if x}))
        return pv

    def degree(self) -> int:
        degs = {len(I) for (_, _, I) in self.terms}
        if len(degs) > 1:
            raise ValueError("inhomogeneous polyvector")
        return degs.pop() if degs else 0

    def _same(self, other):
        if not isinstance(other, Polyvector) or other.ring != self.ring:
            raise ValueError("mixed ring variants")

    def __add__(self, other):
        self._same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return Polyvector(self.ring, out)

    def __neg__(self):
        return Polyvector(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Polyvector":
        return Polyvector(self.ring, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, Polyvector) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Polyvector({sorted(self.terms.items())})"

    def wedge(self, other: "Polyvector") -> "Polyvector":
        self._same(other)
        k = self.ring.order
        out: dict[tuple, Fraction] = {}
        for (j1, m1, I), c1 in self.terms.items():
            for (j2, m2, J), c2 in other.terms.items():
                j = j1 + j2
                if j > k:
                    continue
                s, K = _merge(I, J)
                if not s:
                    continue
                key = (j, tuple(a + b for a, b in zip(m1, m2)), K)
                out[key] = out.get(key, Fraction(0)) + s * c1 * c2
        return Polyvector(self.ring, out)

    def theta_derivative(self, i: int) -> "Polyvector":
        """Left derivative with respect to theta_i."""
        out = {}
        for (j, m, I), c in self.terms.items():
            if i in I:
                p = I.index(i)
                key = (j, m, I[:p] + I[p + 1:])
                out[key] = out.get(key, Fraction(0)) + (-c if p % 2 else c)
        return Polyvector(self.ring, out)

    def z_derivative(self, i: int) -> "Polyvector":
        """z^m -> m_i z^m on coefficients."""
        return Polyvector(self.ring, {(j, m, I): c * m[i] for (j, m, I), c in self.terms.items()})

    def truncate(self, j: int) -> "Polyvector":
        return Polyvector(self.ring.with_order(j), {k: c for k, c in self.terms.items() if k[0] <= j})


def bv_delta(a) -> Polyvector:
    """BV operator sum_i D_i d/dtheta_i (lowers polyvector degree by one)."""
    if isinstance(a, LieElement):
        a = Polyvector.from_lie(a)
    if isinstance(a, RingElement):
        return Polyvector(a.ring, {})
    out = Polyvector(a.ring, {})
    for i in range(a.ring.rank):
        out = out + a.theta_derivative(i).z_derivative(i)
    return out


def gerstenhaber(a: Polyvector, b: Polyvector) -> Polyvector:
    """Bracket extending [z^m1 d_n1, z^m2 d_n2] and [z^m, d_n] = <m,n> z^m."""
    sign = -1 if a.degree() % 2 else 1
    out = Polyvector(a.ring, {})
    for i in range(a.ring.rank):
        out = out + a.theta_derivative(i).wedge(b.z_derivative(i)).scale(sign)
        out = out + a.z_derivative(i).wedge(b.theta_derivative(i))
    return out


def check_bv_identity(v: Polyvector, w: Polyvector) -> bool:
    """(-1)^|v| [v,w] = D(v^w) - D(v)^w - (-1)^|v| v^D(w)."""
    s = -1 if v.degree() % 2 else 1
    lhs = gerstenhaber(v, w).scale(s)
    rhs = bv_delta(v.wedge(w)) - bv_delta(v).wedge(w) - v.wedge(bv_delta(w)).scale(s)
    return lhs == rhs


class LieElement:
    """Vector field sum q^j z^m partial_n in canonical form {(j, m): n}."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Laurent, terms: Mapping | Iterable = ()):
        self.ring = ring
        items = terms.items() if isinstance(terms, Mapping) else terms
        out: dict[tuple, tuple] = {}
        for (j, m), n in items:
            if j > ring.order:
                continue
            if len(n) != ring.rank or len(m) != ring.rank:
                raise ValueError("rank mismatch")
            key = (j, tuple(int(x) for x in m))
            prev = out.get(key)
            n = tuple(Fraction(x) for x in n)
            if prev is not None:
                n = tuple(a + b for a, b in zip(prev, n))
            if any(n):
                out[key] = n
            else:
                out.pop(key, None)
        self.terms = out

    @classmethod
    def term(cls, ring: Laurent, c, j: int, m: Sequence[int], n: Sequence) -> "LieElement":
        return cls(ring, {(j, tuple(m)): tuple(Fraction(c) * Fraction(x) for x in n)})

    @classmethod
    def from_terms(cls, ring: Laurent, terms: Iterable[tuple]) -> "LieElement":
        """terms: iterable of (coeff, j, m, n)."""
        out = cls(ring, {})
        for c, j, m, n in terms:
            out = out + cls.term(ring, c, j, m, n)
        return out

    @classmethod
    def log_wall(cls, ring: Laurent, j: int, m: Sequence[int], n: Sequence, c=1) -> "LieElement":
        """log(1 + c q^j z^m) partial_n, truncated."""
        g = ring.monomial(m, j, c)
        return cls.times_function(log_one_plus(g), n)

    @classmethod
    def times_function(cls, f: RingElement, n: Sequence) -> "LieElement":
        return cls(f.ring, {(j, m): tuple(c * Fraction(x) for x in n) for (j, m), c in f.terms.items()})

    def _same(self, other):
        if not isinstance(other, LieElement):
            raise TypeError("mixed ring variants")
        if other.ring != self.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other):
        self._same(other)
        out = dict(self.terms)
        for k, n in other.terms.items():
            prev = out.get(k)
            out[k] = n if prev is None else tuple(a + b for a, b in zip(prev, n))
        return LieElement(self.ring, out)

    def __neg__(self):
        return LieElement(self.ring, {k: tuple(-x for x in n) for k, n in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LieElement":
        c = Fraction(c)
        return LieElement(self.ring, {k: tuple(c * x for x in n) for k, n in self.terms.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        from .text import format_lie
        return format_lie(self) or "0"

    def q_order(self) -> int | None:
        return min((j for j, _ in self.terms), default=None)

    def truncate(self, j: int) -> "LieElement":
        return LieElement(self.ring.with_order(j), {k: n for k, n in self.terms.items() if k[0] <= j})

    def homogeneous(self, j: int) -> "LieElement":
        return LieElement(self.ring, {k: n for k, n in self.terms.items() if k[0] == j})

    def sorted_terms(self):
        return sorted(self.terms.items())

    def act_on_function(self, f: RingElement) -> RingElement:
        """Derivation action: z^m' -> sum <m', n> q^j z^(m+m') ... times coefficient."""
        if f.ring != self.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {f.ring}")
        k = self.ring.order
        out: dict = {}
        for (j2, m2), c in f.terms.items():
            for (j1, m1), n in self.terms.items():
                j = j1 + j2
                if j > k:
                    continue
                p = _pair(m2, n)
                if not p:
                    continue
                key = (j, tuple(a + b for a, b in zip(m1, m2)))
                out[key] = out.get(key, Fraction(0)) + c * p
        return RingElement(self.ring, out)


def bracket(a: LieElement, b: LieElement) -> LieElement:
    """[z^m1 d_n1, z^m2 d_n2] = z^(m1+m2) d_(<m1,n2> n1 - <m2,n1> n2), truncated."""
    a._same(b)
    k = a.ring.order
    out: dict = {}
    for (j1, m1), n1 in a.terms.items():
        for (j2, m2), n2 in b.terms.items():
            j = j1 + j2
            if j > k:
                continue
            p12 = _pair(m1, n2)
            p21 = _pair(m2, n1)
            if not p12 and not p21:
                continue
            key = (j, tuple(x + y for x, y in zip(m1, m2)))
            n = tuple(p12 * x - p21 * y for x, y in zip(n1, n2))
            prev = out.get(key)
            out[key] = n if prev is None else tuple(x + y for x, y in zip(prev, n))
    return LieElement(a.ring, out)


def divergence(a: LieElement) -> RingElement:
    """bv_delta of a vector field as a function: sum <m, n> q^j z^m."""
    return RingElement(a.ring, {k: _pair(k[1], n) for k, n in a.terms.items()})


def is_divergence_free(a: LieElement) -> bool:
    return not divergence(a)
