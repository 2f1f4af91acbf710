"""Double description: generators of {x : a_i . x >= 0} with lineality, in integer arithmetic."""
from __future__ import annotations

from functools import lru_cache, reduce
from math import gcd
from typing import Sequence

from .linalg import primitive


def _prim(v) -> tuple[int, ...]:
    g = reduce(gcd, v, 0)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def _int_rank(rows) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    r = 0
    ncols = len(m[0])
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        for i in range(r + 1, len(m)):
            f = m[i][c]
            if f:
                m[i] = _prim([pv * x - f * y for x, y in zip(m[i], m[r])])
        r += 1
        if r == len(m):
            break
    return r


def cone_from_inequalities(ineqs: Sequence[Sequence], dim: int):
    """Return (rays, lineality) with cone = lin(lineality) + cone(rays).

    rays are primitive integral and extreme modulo the lineality space;
    lineality is a list of integral basis vectors.
    """
    key = tuple(sorted({primitive(a) for a in ineqs if any(a)}))
    return _cone(key, dim)


@lru_cache(maxsize=20000)
def _cone(ineqs: tuple, dim: int):
    lin = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays: list[tuple] = []
    done: list[tuple] = []
    for a in ineqs:
        vals = [_dot(a, l) for l in lin]
        k = next((i for i, x in enumerate(vals) if x != 0), None)
        if k is not None:
            l0, c0 = lin[k], vals[k]
            if c0 < 0:
                l0, c0 = tuple(-x for x in l0), -c0
            lin = [_prim([c0 * x - _dot(a, l) * y for x, y in zip(l, l0)])
                   for i, l in enumerate(lin) if i != k]
            rays = [_prim([c0 * x - _dot(a, r) * y for x, y in zip(r, l0)]) for r in rays] + [l0]
            rays = [r for r in rays if any(r)]
            done.append(a)
            continue
        pos, zero, neg = [], [], []
        for r in rays:
            s = _dot(a, r)
            (pos if s > 0 else neg if s < 0 else zero).append((r, s))
        new = [r for r, _ in pos] + [r for r, _ in zero]
        budget = dim - len(lin) - 2
        ztab = {}
        for r, _ in pos + neg:
            ztab[r] = frozenset(i for i, b in enumerate(done) if _dot(b, r) == 0)
        for p, sp in pos:
            for n, sn in neg:
                common = ztab[p] & ztab[n]
                if len(common) < budget:
                    continue
                if budget > 0 and _int_rank([done[i] for i in common]) < budget:
                    continue
                c = _prim([sp * x - sn * y for x, y in zip(n, p)])
                if any(c):
                    new.append(c)
        done.append(a)
        rays = _extreme(new, done, dim - len(lin))
    return sorted(set(rays)), [tuple(l) for l in lin]


def _extreme(cands, constraints, pdim):
    """Keep extreme rays (deduplicated) of a cone pointed in dimension pdim."""
    out = []
    for r in dict.fromkeys(cands):
        if pdim <= 1:
            out.append(r)
            continue
        tight = [b for b in constraints if _dot(b, r) == 0]
        if tight and _int_rank(tight) >= pdim - 1:
            out.append(r)
    return out
