"""Slab rings Q[Lambda_rho][u, v][q] / (uv - q^l z^c f^t) with coefficients localized at f.

Elements are stored in normal form: no monomial contains both u and v.
The u/v part is a single integer w (u^w for w > 0, v^-w for w < 0); the
coefficient of (j, w) is N f^e with N a Laurent polynomial in Lambda_rho.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

Poly = dict  # m -> Fraction


def _padd(a: Poly, b: Poly, sb=1) -> Poly:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, Fraction(0)) + sb * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            v = out.get(m, Fraction(0)) + c1 * c2
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _ppow(a: Poly, e: int, rank: int) -> Poly:
    out = {(0,) * rank: Fraction(1)}
    for _ in range(e):
        out = _pmul(out, a)
    return out


def _shift(a: Poly, c: Sequence[int]) -> Poly:
    return {tuple(x + y for x, y in zip(m, c)): v for m, v in a.items()}


@dataclass(frozen=True)
class SlabUV:
    """uv = q^kink z^shift f^twist, truncated at q^(order+1)."""

    rank: int
    kink: int
    f: tuple  # sorted ((m, coeff), ...)
    order: int
    twist: int = 1
    shift: tuple = ()

    def __post_init__(self):
        if not self.shift:
            object.__setattr__(self, "shift", (0,) * self.rank)
        fp = dict(self.f)
        if fp.get((0,) * self.rank, 0) != 1:
            raise ValueError("slab function needs unit constant term 1")

    @classmethod
    def make(cls, rank: int, kink: int, f: Mapping, order: int) -> "SlabUV":
        f = tuple(sorted((tuple(m), Fraction(c)) for m, c in f.items() if c))
        return cls(rank, kink, f, order)

    @property
    def fpoly(self) -> Poly:
        return dict(self.f)

    def zero(self) -> "SlabElement":
        return SlabElement(self, {})

    def monomial(self, m=None, w: int = 0, j: int = 0, c=1) -> "SlabElement":
        m = tuple(m) if m is not None else (0,) * self.rank
        return SlabElement(self, {(j, w): ({m: Fraction(c)}, 0)})

    def one(self) -> "SlabElement":
        return self.monomial()

    def u(self) -> "SlabElement":
        return self.monomial(w=1)

    def v(self) -> "SlabElement":
        return self.monomial(w=-1)

    def generators(self) -> list["SlabElement"]:
        gens = [self.u(), self.v()]
        for i in range(self.rank):
            gens.append(self.monomial(tuple(int(i == k) for k in range(self.rank))))
        return gens

    def retwisted(self, dt: int, dshift: Sequence[int]) -> "SlabUV":
        return SlabUV(self.rank, self.kink, self.f, self.order, self.twist + dt,
                      tuple(a + b for a, b in zip(self.shift, dshift)))

    # localized coefficient arithmetic

    def _expand(self, N: Poly, e: int, target: int) -> Poly:
        """N f^e rewritten as N' f^target (target <= e)."""
        return _pmul(N, _ppow(self.fpoly, e - target, self.rank)) if e > target else N

    def cadd(self, a, b, sb=1):
        (Na, ea), (Nb, eb) = a, b
        e = min(ea, eb)
        return _padd(self._expand(Na, ea, e), self._expand(Nb, eb, e), sb), e


class SlabElement:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: SlabUV, terms: Mapping):
        self.ring = ring
        out = {}
        for (j, w), (N, e) in terms.items():
            if j > ring.order or not N:
                continue
            out[(j, w)] = (dict(N), e)
        self.terms = out

    def _same(self, other):
        if not isinstance(other, SlabElement):
            raise TypeError("mixed ring variants")
        if other.ring != self.ring:
            raise ValueError("slab ring mismatch")

    def __add__(self, other):
        self._same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = self.ring.cadd(out[k], c) if k in out else c
        return SlabElement(self.ring, out)

    def __neg__(self):
        return SlabElement(self.ring, {k: ({m: -c for m, c in N.items()}, e) for k, (N, e) in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SlabElement(self.ring, {k: ({m: c * other for m, c in N.items()}, e)
                                           for k, (N, e) in self.terms.items()})
        self._same(other)
        r = self.ring
        out = {}
        for (j1, w1), (N1, e1) in self.terms.items():
            for (j2, w2), (N2, e2) in other.terms.items():
                j, N, e = j1 + j2, _pmul(N1, N2), e1 + e2
                if w1 * w2 < 0:
                    c = min(abs(w1), abs(w2))
                    j += r.kink * c
                    N = _shift(N, [c * s for s in r.shift])
                    e += c * r.twist
                if j > r.order or not N:
                    continue
                key = (j, w1 + w2)
                out[key] = r.cadd(out[key], (N, e)) if key in out else (N, e)
        return SlabElement(r, out)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(not N for N, _ in self.terms.values())

    def __eq__(self, other):
        if not isinstance(other, SlabElement):
            return NotImplemented
        return self.ring == other.ring and (self - other).is_zero()

    def __hash__(self):
        return hash(self.ring)

    def __repr__(self):
        parts = []
        for (j, w), (N, e) in sorted(self.terms.items()):
            uv = "" if w == 0 else (f"u^{w}" if w > 0 else f"v^{-w}")
            poly = " + ".join(f"{c} z^{m}" for m, c in sorted(N.items()))
            den = f" f^{e}" if e else ""
            parts.append(f"q^{j} {uv} ({poly}){den}")
        return " + ".join(parts) or "0"

    def derivation(self, n: Sequence) -> "SlabElement":
        """partial_n with n = (n_rho, n_perp): u -> n_perp u, v -> (-n_perp + d log(z^c f^t)) v."""
        r = self.ring
        n_rho, n_perp = [Fraction(x) for x in n[:-1]], Fraction(n[-1])
        fp = r.fpoly
        df = {m: c * sum(a * b for a, b in zip(m, n_rho)) for m, c in fp.items()}
        df = {m: c for m, c in df.items() if c}
        shift_pair = sum(Fraction(a) * b for a, b in zip(r.shift, n_rho))
        out = SlabElement(r, {})
        for (j, w), (N, e) in self.terms.items():
            # z-part: <m, n_rho>; f^e: e * df/f; u/v part: w * n_perp or |w| * dlog v
            base = {m: c * sum(a * b for a, b in zip(m, n_rho)) for m, c in N.items()}
            base = {m: c for m, c in base.items() if c}
            pieces = [(base, e)]
            if e:
                pieces.append(({m: c * e for m, c in _pmul(N, df).items()}, e - 1))
            if w > 0:
                pieces.append(({m: c * w * n_perp for m, c in N.items()}, e))
            elif w < 0:
                k = -w
                pieces.append(({m: c * k * (shift_pair - n_perp) for m, c in N.items()}, e))
                if r.twist:
                    pieces.append(({m: c * k * r.twist for m, c in _pmul(N, df).items()}, e - 1))
            acc = ({}, e)
            for p in pieces:
                if p[0]:
                    acc = r.cadd(acc, p)
            out = out + SlabElement(r, {(j, w): acc})
        return out

    def series(self, depth: int) -> dict:
        """Expand f^-e as a geometric series in g = f - 1 up to total g-degree depth.

        Returns {(j, w): Poly}; used to compare against independent series oracles.
        """
        r = self.ring
        g = _padd(r.fpoly, {(0,) * r.rank: Fraction(1)}, -1)
        inv = {(0,) * r.rank: Fraction(1)}
        acc = dict(inv)
        p = dict(inv)
        for _ in range(depth):
            p = _pmul(p, {m: -c for m, c in g.items()})
            acc = _padd(acc, p)
        out = {}
        for key, (N, e) in self.terms.items():
            if e >= 0:
                out[key] = _pmul(N, _ppow(r.fpoly, e, r.rank))
            else:
                out[key] = _pmul(N, _ppow(acc, -e, r.rank))
        return out


def bv_delta_slab(x: SlabElement, n: Sequence) -> SlabElement:
    """Delta(x d_n) = [x, d_n] = partial_n(x) for a function x on the slab chart."""
    return x.derivation(n)


def cross_slab(x: SlabElement, h: Mapping, sign: int = 1) -> SlabElement:
    """Slab crossing: u -> u, v -> h^sign v, z^m -> z^m, for h = z^c f^s (s in {0, 1})."""
    r = x.ring
    h = {tuple(m): Fraction(c) for m, c in h.items() if c}
    c_shift, s = _as_monomial_times_f(h, r)
    # the relation uv = q^l g must map to u (h v) = q^l g, so g is divided by h
    new = r.retwisted(-sign * s, [-sign * a for a in c_shift])
    out = {}
    for (j, w), (N, e) in x.terms.items():
        if w < 0:
            k = -w
            N = _shift(N, [sign * k * a for a in c_shift])
            e += sign * k * s
        out[(j, w)] = (N, e)
    return SlabElement(new, out)


def _as_monomial_times_f(h: Poly, r: SlabUV):
    fp = r.fpoly
    if len(h) == 1:
        (m, c), = h.items()
        if c == 1:
            return m, 0
    if len(h) == len(fp):
        fm = min(fp)
        hm = min(h)
        c = tuple(a - b for a, b in zip(hm, fm))
        if _shift(fp, c) == h:
            return c, 1
    raise ValueError("slab function not in the localization of this slab ring")
