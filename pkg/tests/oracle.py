"""Independent reference arithmetic for wall-crossing products in rank two.

Series are dicts {(j, a, b): Fraction} standing for sum c q^j x^a y^b, truncated at q^k.
Nothing here imports the package, so results can be compared against it.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd


def mul(f: dict, g: dict, k: int) -> dict:
    out: dict = {}
    for (j1, a1, b1), c1 in f.items():
        for (j2, a2, b2), c2 in g.items():
            j = j1 + j2
            if j > k:
                continue
            key = (j, a1 + a2, b1 + b2)
            out[key] = out.get(key, 0) + c1 * c2
    return {key: c for key, c in out.items() if c}


def one() -> dict:
    return {(0, 0, 0): Fraction(1)}


def inverse_unit(f: dict, k: int) -> dict:
    """1 / f for f = 1 + g with g divisible by q, as the geometric series in -g."""
    assert f.get((0, 0, 0)) == 1 and all(j > 0 for (j, a, b) in f if (j, a, b) != (0, 0, 0))
    neg_g = {key: -c for key, c in f.items() if key != (0, 0, 0)}
    out, p = one(), one()
    for _ in range(k):
        p = mul(p, neg_g, k)
        for key, c in p.items():
            out[key] = out.get(key, 0) + c
    return {key: c for key, c in out.items() if c}


def power(f: dict, e: int, k: int) -> dict:
    base = f if e >= 0 else inverse_unit(f, k)
    out = one()
    for _ in range(abs(e)):
        out = mul(out, base, k)
    return out


def crossing(f: dict, n, sign: int, k: int):
    """x^a y^b -> x^a y^b f^(sign <(a,b), n>) applied termwise to a series."""
    def apply(series: dict) -> dict:
        out: dict = {}
        for (j, a, b), c in series.items():
            e = sign * (a * n[0] + b * n[1])
            assert e == int(e)
            for key, v in mul({(j, a, b): c}, power(f, int(e), k), k).items():
                out[key] = out.get(key, 0) + v
        return {key: c for key, c in out.items() if c}
    return apply


def _half(v) -> int:
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_key(v):
    # sort by angle in [0, 2 pi) using exact slopes per half-plane
    from functools import cmp_to_key

    def cmp(a, b):
        ha, hb = _half(a), _half(b)
        if ha != hb:
            return ha - hb
        cross = a[0] * b[1] - a[1] * b[0]
        return -1 if cross > 0 else (1 if cross < 0 else 0)
    return cmp_to_key(cmp)(v)


def loop_product(rays, k: int):
    """Anticlockwise loop around the origin crossing each ray once.

    rays: iterable of (direction h, f, n, normal).  Crossing h with velocity rot90(h) applies the
    wall map when it points along normal and its inverse otherwise.  Returns the images of x and y.
    """
    ordered = sorted(rays, key=lambda r: _angle_key(r[0]))
    x, y = {(0, 1, 0): Fraction(1)}, {(0, 0, 1): Fraction(1)}
    for h, f, n, normal in ordered:
        vel = (-h[1], h[0])
        s = 1 if normal[0] * vel[0] + normal[1] * vel[1] > 0 else -1
        step = crossing(f, n, s, k)
        x, y = step(x), step(y)
    return x, y


def is_identity(images) -> bool:
    x, y = images
    return x == {(0, 1, 0): 1} and y == {(0, 0, 1): 1}


def wall_function(j: int, m, c=1) -> dict:
    """1 + c q^j z^m."""
    return {(0, 0, 0): Fraction(1), (j, m[0], m[1]): Fraction(c)}


def primitive(v):
    g = gcd(abs(v[0]), abs(v[1]))
    return (v[0] // g, v[1] // g)


def line(m, f, n, normal):
    """Both half-rays of a line through the origin along m."""
    return [(tuple(m), f, n, normal), ((-m[0], -m[1]), f, n, normal)]


def ks2_rays(k: int, extra=()):
    """The two KS2 lines with normals (0, 1) and (1, 0), plus extra rays."""
    return (line((1, 0), wall_function(1, (1, 0)), (0, 1), (0, 1))
            + line((0, 1), wall_function(1, (0, 1)), (1, 0), (1, 0)) + list(extra))


def log_one_plus_series(g: dict, k: int) -> dict:
    """log(1 + g) = sum (-1)^(i+1) g^i / i, for g divisible by q."""
    out: dict = {}
    p = one()
    for i in range(1, k + 1):
        p = mul(p, g, k)
        for key, c in p.items():
            out[key] = out.get(key, 0) + Fraction((-1) ** (i + 1), i) * c
    return {key: c for key, c in out.items() if c}
