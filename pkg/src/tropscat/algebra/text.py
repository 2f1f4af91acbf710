"""Canonical text form: terms `c q^j z^(m) d_(n)` joined by ` + `."""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from functools import reduce

from .laurent import Laurent, RingElement


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _coef(c: Fraction, bare: bool) -> str:
    if bare:
        return "" if c == 1 else ("-" if c == -1 else str(c))
    return str(c)


def _term(c: Fraction, j: int, m, n=None) -> str:
    parts = []
    rest = []
    if j:
        rest.append("q" if j == 1 else f"q^{j}")
    if any(m) or n is not None or not rest:
        if any(m) or n is not None:
            rest.append(f"z^{_vec(m)}")
    if n is not None:
        rest.append(f"d_{_vec(n)}")
    if not rest:
        return str(c)
    cs = _coef(c, True)
    if cs:
        parts.append(cs)
    s = " ".join(parts + rest)
    return s.replace("- ", "-", 1) if cs == "-" else s


def format_function(f: RingElement) -> str:
    return " + ".join(_term(c, j, m) for (j, m), c in f.sorted_terms())


def _split_direction(n):
    """Write n = c * p with p primitive integral and c > 0."""
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in n), 1)
    ints = [int(x * den) for x in n]
    g = reduce(gcd, ints, 0)
    p = [x // g for x in ints]
    return Fraction(g, den), tuple(p)


def format_lie(a) -> str:
    out = []
    for (j, m), n in a.sorted_terms():
        c, p = _split_direction(n)
        out.append(_term(c, j, m, p))
    return " + ".join(out)


_TERM = re.compile(
    r"^\s*(?P<c>[-+]?\s*\d*(?:/\d+)?)\s*\*?\s*"
    r"(?P<q>q(?:\^(?P<j>\d+))?)?\s*"
    r"(?:z\^[\[(](?P<m>[-\d,\s]*)[\])])?\s*"
    r"(?:d_[\[(](?P<n>[-\d/,\s]*)[\])])?\s*$")


def _split_terms(text: str) -> list[str]:
    """Split on ' + ' or ' - ' outside of brackets, keeping the sign with the term."""
    pieces, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and ch in "+-" and cur.strip() and not cur.rstrip().endswith(("^", "*")):
            pieces.append(cur)
            cur = "" if ch == "+" else "-"
        else:
            cur += ch
    pieces.append(cur)
    return pieces


def _coefficient(cs: str) -> Fraction:
    cs = cs.replace(" ", "")
    if cs in ("", "+"):
        return Fraction(1)
    if cs == "-":
        return Fraction(-1)
    return Fraction(cs)


def _parse_terms(text: str):
    text = text.strip()
    if not text or text == "0":
        return []
    pieces = _split_terms(text)
    out = []
    for p in pieces:
        mt = _TERM.match(p)
        if not mt or not p.strip():
            raise ValueError(f"cannot parse term {p.strip()!r}")
        c = _coefficient(mt.group("c"))
        j = int(mt.group("j")) if mt.group("j") else (1 if mt.group("q") else 0)
        m = tuple(int(x) for x in mt.group("m").split(",")) if mt.group("m") else None
        n = tuple(Fraction(x) for x in mt.group("n").split(",")) if mt.group("n") else None
        out.append((c, j, m, n))
    return out


def parse_function(text: str, ring: Laurent) -> RingElement:
    terms = {}
    for c, j, m, n in _parse_terms(text):
        if n is not None:
            raise ValueError("function text contains a derivation")
        m = m if m is not None else (0,) * ring.rank
        terms[(j, m)] = terms.get((j, m), Fraction(0)) + c
    return RingElement(ring, terms)


def parse_lie(text: str, ring: Laurent):
    from .lie import LieElement
    out = LieElement(ring, {})
    for c, j, m, n in _parse_terms(text):
        if n is None:
            raise ValueError("vector field term without d_(n)")
        m = m if m is not None else (0,) * ring.rank
        out = out + LieElement.term(ring, c, j, m, n)
    return out


def parse_element(text: str, ring: Laurent):
    """Parse either a function or a vector field, deciding by the presence of d_."""
    if "d_" in text:
        return parse_lie(text, ring)
    return parse_function(text, ring)


def infer_rank(text: str) -> int | None:
    mt = re.search(r"[zd]_?\^?[\[(]([-\d/,\s]*)[\])]", text)
    if not mt:
        return None
    return len(mt.group(1).split(","))


_SLAB_TERM = re.compile(
    r"^\s*(?P<c>[-+]?\s*\d*(?:/\d+)?)\s*\*?\s*"
    r"(?P<q>q(?:\^(?P<j>\d+))?)?\s*"
    r"(?:(?P<uv>[uv])(?:\^(?P<w>\d+))?)?\s*"
    r"(?:z\^[\[(](?P<m>[-\d,\s]*)[\])])?\s*$")


def parse_slab(text: str, ring):
    """Parse sums of c q^j u^a z^(m) / c q^j v^b z^(m) into the slab ring."""
    text = text.strip()
    out = ring.zero()
    if not text or text == "0":
        return out
    for p in _split_terms(text):
        mt = _SLAB_TERM.match(p)
        if not mt or not p.strip():
            raise ValueError(f"cannot parse slab term {p.strip()!r}")
        c = _coefficient(mt.group("c"))
        j = int(mt.group("j")) if mt.group("j") else (1 if mt.group("q") else 0)
        w = int(mt.group("w")) if mt.group("w") else (1 if mt.group("uv") else 0)
        if mt.group("uv") == "v":
            w = -w
        m = tuple(int(x) for x in mt.group("m").split(",")) if mt.group("m") else (0,) * ring.rank
        if len(m) != ring.rank:
            raise ValueError(f"exponent {m} does not have rank {ring.rank}")
        out = out + ring.monomial(m, w, j, c)
    return out


def format_slab(x) -> str:
    """Terms c q^j u^w z^(m) f^e of a slab ring element, with (N) for multi-term coefficients."""
    parts = []
    for (j, w), (N, e) in sorted(x.terms.items()):
        head = []
        if w:
            letter = "u" if w > 0 else "v"
            head.append(letter if abs(w) == 1 else f"{letter}^{abs(w)}")
        tail = [] if not e else ["f" if e == 1 else f"f^{e}"]
        if len(N) == 1:
            (m, c), = N.items()
            core = _term(c, j, m)
            if not any(m) and head:
                q = [] if not j else ["q" if j == 1 else f"q^{j}"]
                cs = _coef(c, True)
                core = " ".join(([cs] if cs and cs != "-" else []) + q)
                core = ("-" if cs == "-" else "") + core
                parts.append(" ".join(b for b in [core] + head + tail if b).replace("- ", "-"))
                continue
            parts.append(" ".join([core] + head + tail))
        else:
            q = [] if not j else ["q" if j == 1 else f"q^{j}"]
            poly = " + ".join(_term(c, 0, m) for m, c in sorted(N.items()))
            parts.append(" ".join(q + head + [f"({poly})"] + tail))
    return " + ".join(parts) or "0"
