"""Exact linear algebra over Q and Z on tuples of Fractions and ints."""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Vec = tuple
Mat = tuple


def frac_vec(v: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def frac_mat(rows: Iterable[Iterable]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(frac_vec(r) for r in rows)


def int_vec(v: Iterable) -> tuple[int, ...]:
    out = []
    for x in v:
        x = Fraction(x)
        if x.denominator != 1:
            raise ValueError(f"non-integral entry {x}")
        out.append(int(x))
    return tuple(out)


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), 0)


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a):
    return tuple(c * x for x in a)


def vneg(a):
    return tuple(-x for x in a)


def is_zero(v) -> bool:
    return all(x == 0 for x in v)


def transpose(m: Sequence[Sequence]) -> tuple:
    if not m:
        return ()
    return tuple(zip(*m))


def matvec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in m)


def vecmat(v: Sequence, m: Sequence[Sequence]) -> tuple:
    """Row vector times matrix (covector pullback)."""
    if not m:
        return ()
    return tuple(dot(v, col) for col in zip(*m))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def identity(n: int) -> tuple:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def clear_denominators(v: Sequence) -> tuple[int, ...]:
    """Smallest positive integer multiple of a rational vector."""
    v = frac_vec(v)
    den = reduce(lcm, (x.denominator for x in v), 1)
    return tuple(int(x * den) for x in v)


def primitive(v: Sequence) -> tuple[int, ...]:
    """Primitive integral vector on the ray through v (0 stays 0)."""
    w = clear_denominators(v)
    g = reduce(gcd, w, 0)
    if g == 0:
        return w
    return tuple(x // g for x in w)


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    m = [list(frac_vec(r)) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of {x : rows . x = 0} over Q."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, piv):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(a: Sequence[Sequence], b: Sequence):
    """One solution of a x = b over Q, or None if inconsistent."""
    n = len(a[0]) if a else 0
    aug = [tuple(row) + (bi,) for row, bi in zip(a, b)]
    red, piv = rref(aug, n + 1)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(red, piv):
        x[p] = row[n]
    return tuple(x)


def det(m: Sequence[Sequence]) -> Fraction:
    a = [list(frac_vec(r)) for r in m]
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def inverse(m: Sequence[Sequence]) -> tuple:
    n = len(m)
    aug = [tuple(r) + tuple(Fraction(int(i == j)) for j in range(n)) for i, r in enumerate(m)]
    red, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(red) < n:
        raise ValueError("singular matrix")
    return tuple(tuple(row[n:]) for row in red)


def as_int_matrix(m: Sequence[Sequence]) -> tuple:
    return tuple(int_vec(r) for r in m)


def _column_hnf(a: list[list[int]], ncols: int):
    """Column-reduce an integer matrix; returns (reduced, unimodular U) with a U = reduced."""
    rows = len(a)
    a = [list(r) for r in a]
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def colop(i, j, q):  # col_j -= q col_i
        for r in range(rows):
            a[r][j] -= q * a[r][i]
        for r in range(ncols):
            u[r][j] -= q * u[r][i]

    def swap(i, j):
        for r in range(rows):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(ncols):
            u[r][i], u[r][j] = u[r][j], u[r][i]

    piv_col = 0
    for r in range(rows):
        if piv_col >= ncols:
            break
        while True:
            nz = [c for c in range(piv_col, ncols) if a[r][c] != 0]
            if not nz:
                break
            c0 = min(nz, key=lambda c: abs(a[r][c]))
            if c0 != piv_col:
                swap(c0, piv_col)
            done = True
            for c in range(piv_col + 1, ncols):
                if a[r][c] != 0:
                    colop(piv_col, c, a[r][c] // a[r][piv_col])
                    if a[r][c] != 0:
                        done = False
            if done:
                break
        if any(a[r][c] != 0 for c in range(piv_col, ncols)):
            piv_col += 1
    return a, u, piv_col


def integer_kernel(rows: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Z-basis of {x in Z^ncols : rows . x = 0} (rows may be rational)."""
    a = [list(clear_denominators(r)) for r in rows if not is_zero(r)]
    if not a:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    _, u, k = _column_hnf(a, ncols)
    basis = [tuple(u[r][c] for r in range(ncols)) for c in range(k, ncols)]
    return _lll_free_reduce(basis)


def _lll_free_reduce(basis: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Deterministic cosmetic reduction: Hermite-normalize the row lattice."""
    if not basis:
        return basis
    n = len(basis[0])
    rows = [list(b) for b in basis]
    r = 0
    for c in range(n):
        # euclid on column c among rows r..
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(rows[i][c]))
            rows[r], rows[i0] = rows[i0], rows[r]
            done = True
            for i in range(r + 1, len(rows)):
                if rows[i][c] != 0:
                    q = rows[i][c] // rows[r][c]
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
                    if rows[i][c] != 0:
                        done = False
            if done:
                break
        if r < len(rows) and rows[r][c] != 0:
            if rows[r][c] < 0:
                rows[r] = [-x for x in rows[r]]
            for i in range(r):
                q = rows[i][c] // rows[r][c]
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
            r += 1
            if r == len(rows):
                break
    return [tuple(row) for row in rows]


def saturated_basis(vectors: Sequence[Sequence], n: int) -> list[tuple[int, ...]]:
    """Z-basis of span(vectors) intersected with Z^n, in Hermite form."""
    vecs = [v for v in vectors if not is_zero(v)]
    if not vecs:
        return []
    ann = integer_kernel(vecs, n)
    if not ann:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return integer_kernel(ann, n)


def annihilator(vectors: Sequence[Sequence], n: int) -> list[tuple[int, ...]]:
    """Z-basis of integral covectors vanishing on the given vectors."""
    vecs = [v for v in vectors if not is_zero(v)]
    return integer_kernel(vecs, n)


def gcd_maximal_minors(m: Sequence[Sequence]) -> int:
    """gcd of maximal minors of an integer matrix with full row rank (0 otherwise)."""
    from itertools import combinations

    rows = len(m)
    cols = len(m[0]) if rows else 0
    if rows == 0:
        return 1
    g = 0
    for cs in combinations(range(cols), rows):
        d = det([[row[c] for c in cs] for row in m])
        g = gcd(g, int(d))
    return g


def is_integral(v) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def lex_key(v):
    return tuple(v)
