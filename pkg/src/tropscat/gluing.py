"""Open gluing data, D-invariants, the lifting condition, fan monoid rings and slab-function checks.

Values in C^* are modelled in a formal multiplicative group: a unit is a dict symbol -> rational
exponent, so prod t_i^{e_i} is {t_i: e_i}.  A piecewise multiplicative map on the star of a cell
is a dict sigma -> {symbol: covector on Lambda_sigma}.  Gluing data is a dict (omega, tau) -> map.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key

from .lattice.fan import Fan
from .lattice.linalg import (dot, frac_vec, inverse, matvec, nullspace, solve, transpose,
                             vecmat)
from .lattice.sparse import SparseSystem
from .manifold.complex import IntegralTropicalManifold
from .manifold.validate import ValidationReport, codim_one_normal
from .monodromy import _unit_against, m_rho, quotient_map, tangent_coords

# formal units


def unit_mul(a: dict, b: dict) -> dict:
    out = dict(a)
    for s, e in b.items():
        x = out.get(s, 0) + e
        if x:
            out[s] = Fraction(x)
        else:
            out.pop(s, None)
    return out


def unit_inv(a: dict) -> dict:
    return {s: -e for s, e in a.items()}


def unit_key(a: dict) -> tuple:
    return tuple(sorted((s, Fraction(e)) for s, e in a.items() if e))


def format_unit(a: dict) -> str:
    parts = []
    for s, e in unit_key(a):
        parts.append(s if e == 1 else f"{s}^({e})" if e.denominator != 1 or e < 0 else f"{s}^{e}")
    return "*".join(parts) or "1"


# piecewise multiplicative maps


@dataclass
class PiecewiseMultiplicativeMap:
    carrier: str
    values: dict = field(default_factory=dict)  # sigma -> {symbol: covector}

    def __call__(self, sigma: str, mvec) -> dict:
        return pm_eval(self.values, sigma, mvec)


def _values(mu) -> dict:
    return mu.values if isinstance(mu, PiecewiseMultiplicativeMap) else (mu or {})


def pm_eval(pm: dict, sigma: str, mvec) -> dict:
    """mu_sigma(z^m) as a formal unit."""
    return {s: Fraction(dot(a, mvec)) for s, a in pm.get(sigma, {}).items() if dot(a, mvec)}


def pm_mul(a: dict, b: dict, sign: int = 1) -> dict:
    out = {}
    for sigma in set(a) | set(b):
        syms = {}
        for s in set(a.get(sigma, {})) | set(b.get(sigma, {})):
            x = a.get(sigma, {}).get(s)
            y = b.get(sigma, {}).get(s)
            n = len(x if x is not None else y)
            x = x if x is not None else (0,) * n
            y = y if y is not None else (0,) * n
            v = tuple(p + sign * q if q else p for p, q in zip(x, y))
            if any(v):
                syms[s] = v
        if syms:
            out[sigma] = syms
    return out


def pm_restrict(m: IntegralTropicalManifold, pm: dict, tau: str) -> dict:
    """Restriction to the star of tau."""
    st = set(m.star(tau))
    return {s: v for s, v in pm.items() if s in st}


def pm_is_trivial(pm: dict) -> bool:
    return not any(any(any(a) for a in syms.values()) for syms in pm.values())


def _common_face(m, tau, s1, s2):
    best = None
    for w in m.cofaces(tau):
        if m.contains(w, s1) and m.contains(w, s2):
            if best is None or m.cells[w].dim > m.cells[best].dim:
                best = w
    return best


def _pm_constraints(m: IntegralTropicalManifold, tau: str):
    """(sigma1, sigma2, columns of Lambda_w in each chart) for pairs of maximal cells around tau."""
    cache = _cache(m).setdefault("pm_constraints", {})
    if tau in cache:
        return cache[tau]
    st = m.star(tau)
    out = []
    for i, s1 in enumerate(st):
        for s2 in st[i + 1:]:
            w = _common_face(m, tau, s1, s2)
            if w is None or m.cells[w].dim == 0:
                continue
            out.append((s1, s2, m.tangent_image(w, s1), m.tangent_image(w, s2)))
    cache[tau] = out
    return out


def pm_compatibility(m: IntegralTropicalManifold, pm: dict, tau: str) -> list[str]:
    """Failures of mu_sigma = mu_sigma' on the common faces of the star of tau."""
    out = []
    for s1, s2, c1, c2 in _pm_constraints(m, tau):
        a1, a2 = pm.get(s1, {}), pm.get(s2, {})
        for sym in sorted(set(a1) | set(a2)):
            for x, y in zip(c1, c2):
                v1 = dot(a1[sym], x) if sym in a1 else 0
                v2 = dot(a2[sym], y) if sym in a2 else 0
                if v1 != v2:
                    out.append(f"map on the star of {tau} disagrees on {s1} and {s2} for {sym}")
                    break
            else:
                continue
            break
    return out


def _cache(m) -> dict:
    c = m.__dict__.get("_gluing_cache")
    if c is None:
        c = {}
        m.__dict__["_gluing_cache"] = c
    return c


def random_pm(m: IntegralTropicalManifold, tau: str, rng: random.Random, symbols=("t",), bound: int = 3) -> dict:
    """A random piecewise multiplicative map on the star of tau with integral exponents."""
    basis = _pm_basis(m, tau)
    st = m.star(tau)
    n = m.dim
    out = {}
    for sym in symbols:
        x = [0] * (len(st) * n)
        for b in basis:
            c = rng.randint(-bound, bound)
            x = [p + c * q for p, q in zip(x, b)]
        for k, sigma in enumerate(st):
            cov = tuple(x[k * n:(k + 1) * n])
            if any(cov):
                out.setdefault(sigma, {})[sym] = cov
    return out


def _pm_basis(m, tau):
    cache = _cache(m).setdefault("pm_basis", {})
    if tau in cache:
        return cache[tau]
    st = m.star(tau)
    idx = {s: k for k, s in enumerate(st)}
    n = m.dim
    rows = []
    for s1, s2, c1, c2 in _pm_constraints(m, tau):
        for x, y in zip(c1, c2):
            row = [0] * (len(st) * n)
            for i in range(n):
                row[idx[s1] * n + i] += x[i]
                row[idx[s2] * n + i] -= y[i]
            rows.append(row)
    basis = nullspace(rows, len(st) * n)
    # integral basis vectors
    out = []
    for b in basis:
        den = 1
        for c in b:
            den = den * Fraction(c).denominator // _gcd(den, Fraction(c).denominator)
        out.append(tuple(int(c * den) for c in b))
    cache[tau] = out
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


# open gluing data


def _get(s: dict, w: str, t: str) -> dict:
    return s.get((w, t), {})


def check_gluing(m: IntegralTropicalManifold, s: dict | None = None) -> ValidationReport:
    """Piecewise multiplicativity, s_tau tau = 1 and s_omega rho = s_tau rho * s_omega tau|_rho."""
    s = m.gluing if s is None else s
    rep = ValidationReport()
    for (w, t), pm in sorted(s.items()):
        if w != t and (w, t) not in m.arrows:
            rep.add("gluing", [w, t], f"gluing map on {w} -> {t}, which is not an arrow")
            continue
        if w == t and not pm_is_trivial(pm):
            rep.add("gluing", [w], f"s_{w}{w} is not 1")
        extra = set(pm) - set(m.star(t))
        if extra:
            rep.add("gluing", [w, t], f"map on {w} -> {t} names cells outside the star of {t}: {sorted(extra)}")
        for msg in pm_compatibility(m, pm, t):
            rep.add("piecewise multiplicative", [w, t], msg)
    for (w, t) in sorted(m.arrows):
        for (t2, r) in sorted(m.arrows):
            if t2 != t or (w, r) not in m.arrows:
                continue
            lhs = pm_restrict(m, _get(s, w, r), r)
            rhs = pm_mul(pm_restrict(m, _get(s, t, r), r), pm_restrict(m, _get(s, w, t), r))
            if not _pm_equal(lhs, rhs):
                rep.add("cocycle", [w, t, r], f"cocycle condition fails on the chain {w} ⊂ {t} ⊂ {r}")
    return rep


def _pm_equal(a: dict, b: dict) -> bool:
    return pm_is_trivial(pm_mul(a, b, -1))


def coboundary(m: IntegralTropicalManifold, t: dict) -> dict:
    """s_omega tau = t_tau (t_omega|_tau)^{-1} for a family t: cell -> piecewise multiplicative map."""
    out = {}
    for (w, tau) in m.arrows:
        pm = pm_mul(pm_restrict(m, t.get(tau, {}), tau), pm_restrict(m, t.get(w, {}), tau), -1)
        if pm:
            out[(w, tau)] = pm
    return out


def gluing_product(m: IntegralTropicalManifold, a: dict, b: dict, sign: int = 1) -> dict:
    out = {}
    for key in set(a) | set(b):
        pm = pm_mul(a.get(key, {}), b.get(key, {}), sign)
        if pm:
            out[key] = pm
    return out


def _cohomology_system(m: IntegralTropicalManifold):
    cache = _cache(m)
    if "cohomology" in cache:
        return cache["cohomology"]
    n = m.dim
    index = {}
    for tau in sorted(m.cells):
        for sigma in m.star(tau):
            for i in range(n):
                index[(tau, sigma, i)] = len(index)
    rows = []
    labels = []
    for (w, tau) in sorted(m.arrows):
        for sigma in m.star(tau):
            for i in range(n):
                rows.append({index[(tau, sigma, i)]: 1, index[(w, sigma, i)]: -1})
                labels.append((w, tau, sigma, i))
    for tau in sorted(m.cells):
        for s1, s2, c1, c2 in _pm_constraints(m, tau):
            for x, y in zip(c1, c2):
                row = {}
                for i in range(n):
                    for key, c in (((tau, s1, i), x[i]), ((tau, s2, i), -y[i])):
                        if c:
                            j = index[key]
                            row[j] = row.get(j, 0) + c
                rows.append({k: v for k, v in row.items() if v})
                labels.append(None)
    system = (SparseSystem(rows, len(index)), index, labels)
    cache["cohomology"] = system
    return system


@dataclass
class CohomologyResult:
    cohomologous: bool
    witness: dict | None  # cell -> piecewise multiplicative map

    def __bool__(self) -> bool:
        return self.cohomologous


def are_cohomologous(m: IntegralTropicalManifold, s: dict, s2: dict) -> CohomologyResult:
    """Solve s_omega tau = t_tau (t_omega|_tau)^{-1} s'_omega tau for t; one linear solve per symbol."""
    system, index, labels = _cohomology_system(m)
    diff = gluing_product(m, s, s2, -1)
    symbols = sorted({sym for pm in diff.values() for syms in pm.values() for sym in syms})
    witness: dict = {}
    for sym in symbols:
        b = []
        for lab in labels:
            if lab is None:
                b.append(0)
                continue
            w, tau, sigma, i = lab
            cov = diff.get((w, tau), {}).get(sigma, {}).get(sym)
            b.append(cov[i] if cov is not None else 0)
        x = system.solve(b)
        if x is None:
            return CohomologyResult(False, None)
        for (tau, sigma, i), j in index.items():
            if x[j]:
                syms = witness.setdefault(tau, {}).setdefault(sigma, {})
                cov = list(syms.get(sym, (Fraction(0),) * m.dim))
                cov[i] = x[j]
                syms[sym] = tuple(cov)
    if not _gluing_equal(m, gluing_product(m, coboundary(m, witness), s2), s):
        raise ArithmeticError("recovered witness does not reproduce the gluing data")
    return CohomologyResult(True, witness)


def _gluing_equal(m, a, b) -> bool:
    d = gluing_product(m, a, b, -1)
    return all(pm_is_trivial(pm_restrict(m, pm, t)) for (w, t), pm in d.items())


# D-invariants


def _sides(m, rho):
    return m.codim_one_sides(rho)


def _d_choices(m, rho, v):
    """Two choices of m in Lambda_{sigma_plus} with <m, d_rho> = -1 and their transports to sigma_minus."""
    plus, minus = _sides(m, rho)
    d = codim_one_normal(m, v, rho)
    u = tuple(-x for x in _unit_against(d))
    sp = m.vertex_transition(v, plus)
    sm = m.vertex_transition(v, minus)
    out = []
    shifts = [(0,) * m.dim]
    if m.cells[rho].dim:
        shifts.append(tuple(m.to_vertex(v, plus, m.tangent_image(rho, plus)[0])))
    for sh in shifts:
        y = tuple(a + b for a, b in zip(u, sh))
        mp = matvec(inverse(sp), y)
        mm = matvec(inverse(sm), y)
        out.append((mp, mm))
    return plus, minus, out


def D_invariant(m: IntegralTropicalManifold, mu, rho: str, v: str) -> dict:
    """mu_{sigma}(m) / mu_{sigma'}(m') with m pointing from sigma_plus across rho and m' its transport through v."""
    if not m.contains(v, rho) or m.cells[v].dim != 0:
        raise ValueError(f"{v} is not a vertex of {rho}")
    if m.cells[rho].dim != m.dim - 1:
        raise ValueError(f"{rho} is not of codimension one")
    pm = _values(mu)
    plus, minus, choices = _d_choices(m, rho, v)
    vals = []
    for mp, mm in choices:
        vals.append(unit_mul(pm_eval(pm, plus, mp), unit_inv(pm_eval(pm, minus, mm))))
    if any(unit_key(x) != unit_key(vals[0]) for x in vals):
        raise ValueError(f"D-invariant at ({rho}, {v}) depends on the choice of m; map is not piecewise multiplicative")
    return vals[0]


def pm_eval_tangent(m: IntegralTropicalManifold, mu, rho: str, v: str, y) -> dict:
    """mu(z^y) for y in T_v tangent to rho (well defined on the common face)."""
    plus, _ = _sides(m, rho)
    return pm_eval(_values(mu), plus, m.from_vertex(v, plus, y))


def check_lifting_condition(m: IntegralTropicalManifold, s: dict | None = None) -> ValidationReport:
    """D(s_v tau, rho, v) = D(s_v' tau, rho, v') whenever m^rho_vv' = 0."""
    s = m.gluing if s is None else s
    rep = ValidationReport()
    for rho in m.cells_of_dim(m.dim - 1):
        if len(m.star(rho)) != 2:
            continue
        verts = m.vertices(rho)
        zero = {}
        for i, v in enumerate(verts):
            for w in verts[i + 1:]:
                zero[(v, w)] = not any(m_rho(m, rho, v, w))
        for tau in m.faces(rho):
            tv = m.vertices(tau)
            for i, v in enumerate(tv):
                for w in tv[i + 1:]:
                    if not zero[(v, w)]:
                        continue
                    a = D_invariant(m, _get(s, v, tau), rho, v)
                    b = D_invariant(m, _get(s, w, tau), rho, w)
                    if unit_key(a) != unit_key(b):
                        rep.add("lifting", [tau, rho, v, w],
                                f"lifting condition fails for ({v}, {w}) in {tau} ⊂ {rho}: "
                                f"{format_unit(a)} != {format_unit(b)}")
    return rep


# monoid rings of fans


class FanRing:
    """Q[Sigma]: z^p z^q = z^(p+q) when p and q lie in a common cone, else 0."""

    def __init__(self, fan: Fan):
        self.fan = fan

    def _check(self, p):
        if self.fan.cone_containing(p) is None:
            raise ValueError(f"monomial {tuple(p)} lies outside the support of the fan")

    def monomial_product(self, p, q):
        self._check(p)
        self._check(q)
        if self.fan.cone_containing(p, q) is None:
            return None
        return tuple(a + b for a, b in zip(p, q))

    def multiply(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for p, x in a.items():
            for q, y in b.items():
                r = self.monomial_product(p, q)
                if r is None:
                    continue
                c = out.get(r, 0) + Fraction(x) * Fraction(y)
                if c:
                    out[r] = c
                else:
                    out.pop(r, None)
        return out


def monoid_ring_multiply(a: dict, b: dict, ring: FanRing) -> dict:
    return ring.multiply(a, b)


# slab functions


class SlabDegenerate(ValueError):
    pass


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (p, u), x in a.items():
        for (q, w), y in b.items():
            key = (tuple(i + j for i, j in zip(p, q)), unit_key(unit_mul(dict(u), dict(w))))
            c = out.get(key, 0) + x * y
            if c:
                out[key] = c
            else:
                out.pop(key, None)
    return out


def _one(k: int) -> dict:
    return {((0,) * k, ()): Fraction(1)}


def _twisted(m, f: dict, rho: str, pm: dict, scalar: dict, shift=None) -> dict:
    """z^shift * scalar * s^{-1}(f) with s^{-1}(z^m) = s_sigma(m)^{-1} z^m."""
    plus, _ = _sides(m, rho)
    lin = m.linear(rho, plus)
    out = {}
    for mv, c in f.items():
        unit = unit_mul(unit_inv(pm_eval(pm, plus, matvec(lin, mv))), scalar)
        mm = tuple(int(x) for x in mv) if shift is None else tuple(int(x) + int(y) for x, y in zip(mv, shift))
        key = (mm, unit_key(unit))
        out[key] = out.get(key, 0) + Fraction(c)
    return {k: c for k, c in out.items() if c}


def _angle_cmp(a, b):
    def half(x):
        return 0 if (x[1] > 0 or (x[1] == 0 and x[0] > 0)) else 1
    ha, hb = half(a), half(b)
    if ha != hb:
        return ha - hb
    cross = a[0] * b[1] - a[1] * b[0]
    return -1 if cross > 0 else 1 if cross < 0 else 0


def cyclic_rays(m: IntegralTropicalManifold, tau: str) -> list[tuple[str, tuple]]:
    """Codimension one cells around a codimension two cell with their ray generators in Q_tau, ordered by angle."""
    out = []
    for rho in m.cofaces(tau):
        if m.cells[rho].dim != m.dim - 1:
            continue
        cone = m.cone_in_fan(tau, rho)
        out.append((rho, cone.rays[0]))
    out.sort(key=cmp_to_key(lambda a, b: _angle_cmp(a[1], b[1])))
    return out


def _restrict_to_stratum(m, f: dict, tau: str, rho: str) -> dict:
    """Keep the monomials of f (chart of rho) tangent to tau, in the chart of tau."""
    cols = m.tangent_image(tau, rho)
    k = m.cells[tau].dim
    out = {}
    for mv, c in f.items():
        if k == 0:
            if not any(mv):
                out[()] = out.get((), 0) + Fraction(c)
            continue
        x = solve(transpose(cols), frac_vec(mv))
        if x is None:
            continue
        key = tuple(int(a) for a in x)
        out[key] = out.get(key, 0) + Fraction(c)
    out = {k2: c for k2, c in out.items() if c}
    if not out:
        raise SlabDegenerate(f"slab degenerate on stratum {tau}")
    return out


def _lpow(f: dict, e: int, k: int) -> dict:
    out = {(0,) * k: Fraction(1)}
    for _ in range(e):
        nxt: dict = {}
        for p, x in out.items():
            for q, y in f.items():
                r = tuple(a + b for a, b in zip(p, q))
                nxt[r] = nxt.get(r, 0) + x * y
        out = {r: c for r, c in nxt.items() if c}
    return out


def check_slab_functions(m: IntegralTropicalManifold, f: dict | None = None, s: dict | None = None) -> ValidationReport:
    """Cross-vertex change of coordinates (a) and the codimension two log condition (b)."""
    f = m.slabs if f is None else f
    s = m.gluing if s is None else s
    rep = ValidationReport()
    n = m.dim
    slab_cells = sorted({r for (_, r) in f})
    for (v, rho), fv in sorted(f.items()):
        k = m.cells[rho].dim
        origin = tuple(0 for _ in range(k))
        cst = sum((c for mv, c in fv.items() if tuple(mv) == origin), Fraction(0))
        if cst != 1:
            rep.add("normalization", [v, rho], f"f_{v}{rho} does not take the value 1 at {v}")
    # (a)
    for rho in slab_cells:
        if len(m.star(rho)) != 2:
            rep.add("slab", [rho], f"slab function on {rho}, which does not separate two maximal cells")
            continue
        k = m.cells[rho].dim
        for tau in m.faces(rho):
            tv = m.vertices(tau)
            for i, v in enumerate(tv):
                for w in tv[i + 1:]:
                    fv = f.get((v, rho), {origin_key(k): 1})
                    fw = f.get((w, rho), {origin_key(k): 1})
                    sv, sw = _get(s, v, tau), _get(s, w, tau)
                    dv = D_invariant(m, sv, rho, v)
                    dw = D_invariant(m, sw, rho, w)
                    shift = tuple(-int(x) for x in tangent_coords(m, rho, v, m_rho(m, rho, v, w)))
                    lhs = _twisted(m, fw, rho, sw, unit_inv(dw))
                    rhs = _twisted(m, fv, rho, sv, unit_inv(dv), shift)
                    if lhs != rhs:
                        rep.add("change of coordinates", [tau, rho, v, w],
                                f"slab functions on {rho} at {v} and {w} are incompatible over {tau}")
    # (b)
    if n >= 2:
        for tau in m.cells_of_dim(n - 2):
            if not m.fan_at(tau).is_complete():
                continue
            around = cyclic_rays(m, tau)
            if not any(r in slab_cells for r, _ in around):
                continue
            k = m.cells[tau].dim
            for v in m.vertices(tau):
                q = quotient_map(m, tau, v)
                factors = []
                for rho, r in around:
                    g = f.get((v, rho))
                    if g is None:
                        continue
                    dcheck = vecmat((-r[1], r[0]), q)
                    factors.append((_restrict_to_stratum(m, g, tau, rho), dcheck))
                for j in range(n):
                    num, den = {(0,) * k: Fraction(1)}, {(0,) * k: Fraction(1)}
                    for g, dcheck in factors:
                        e = int(dcheck[j])
                        if e > 0:
                            num = _lmul(num, _lpow(g, e, k))
                        elif e < 0:
                            den = _lmul(den, _lpow(g, -e, k))
                    if num != den:
                        rep.add("log structure", [tau, v],
                                f"product of slab functions around {tau} at {v} is not 1 (component {j})")
                        break
    return rep


def origin_key(k: int) -> tuple:
    return (0,) * k


def _lmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for p, x in a.items():
        for q, y in b.items():
            r = tuple(i + j for i, j in zip(p, q))
            out[r] = out.get(r, 0) + x * y
    return {r: c for r, c in out.items() if c}


# fixtures for tests and the CLI


def random_coboundary(m: IntegralTropicalManifold, rng: random.Random, vertex_trivial: bool = False,
                      symbols=("t",)) -> tuple[dict, dict]:
    """(s, t) with s the coboundary of a random family t."""
    t = {}
    for tau in sorted(m.cells):
        if vertex_trivial and m.cells[tau].dim == 0:
            continue
        pm = random_pm(m, tau, rng, symbols)
        if pm:
            t[tau] = pm
    return coboundary(m, t), t


def cocycle_mutants(m: IntegralTropicalManifold, rng: random.Random, count: int = 10) -> list[tuple[dict, tuple]]:
    """Gluing data with one map perturbed on an arrow omega -> tau that factors through a middle cell."""
    chains = sorted((w, t) for (w, t) in m.arrows if m.cells[t].dim - m.cells[w].dim >= 2)
    out = []
    while len(out) < count:
        base, _ = random_coboundary(m, rng)
        w, t = rng.choice(chains)
        bump = {}
        while pm_is_trivial(bump):
            bump = random_pm(m, t, rng)
        base = dict(base)
        base[(w, t)] = pm_mul(base.get((w, t), {}), bump)
        out.append((base, (w, t)))
    return out


def lifting_mutants(m: IntegralTropicalManifold, rng: random.Random, count: int = 10) -> list[tuple[dict, tuple]]:
    """Coboundaries of a map at one vertex whose D-invariant differs across a zero-monodromy pair."""
    sites = []
    for rho in m.cells_of_dim(m.dim - 1):
        if len(m.star(rho)) != 2:
            continue
        verts = m.vertices(rho)
        for i, v in enumerate(verts):
            for w in verts[i + 1:]:
                if any(m_rho(m, rho, v, w)):
                    continue
                for tau in m.faces(rho):
                    if v in m.vertices(tau) and w in m.vertices(tau):
                        sites.append((rho, tau, v, w))
    if not sites:
        raise ValueError("no pair of vertices with vanishing monodromy")
    out = []
    while len(out) < count:
        rho, tau, v, w = rng.choice(sites)
        tv = random_pm(m, v, rng)
        if not D_invariant(m, pm_restrict(m, tv, tau), rho, v):
            continue
        out.append((coboundary(m, {v: tv}), (rho, tau, v, w)))
    return out
