"""Monodromy of the affine structure around singular strata, monodromy polytopes and simplicity."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .lattice.fan import is_elementary, is_standard_simplex
from .lattice.linalg import (
    frac_vec,
    inverse,
    matmul,
    matvec,
    primitive,
    solve,
    transpose,
    vsub,
)
from .lattice.polyhedron import Polyhedron
from .manifold.complex import IntegralTropicalManifold
from .manifold.validate import codim_one_normal


@dataclass(frozen=True)
class MonodromyTransform:
    base: str
    loop: tuple  # (sigma_plus, sigma_minus, via)
    matrix: tuple
    kappa: int | None = None

    def apply(self, m) -> tuple:
        return matvec(self.matrix, m)

    def is_unipotent(self) -> bool:
        n = len(self.matrix)
        nil = [[self.matrix[i][j] - (i == j) for j in range(n)] for i in range(n)]
        return all(x == 0 for row in matmul(nil, nil) for x in row)

    def to_json(self) -> dict:
        out = {"base": self.base, "loop": list(self.loop), "matrix": [[int(x) for x in r] for r in self.matrix]}
        if self.kappa is not None:
            out["kappa"] = self.kappa
        return out


def transport(m: IntegralTropicalManifold, v: str, w: str, sigma: str) -> tuple:
    """Parallel transport T_v -> T_w through the interior of sigma."""
    for x in (v, w):
        if not m.contains(x, sigma):
            raise ValueError(f"{x} is not a vertex of {sigma}")
    return matmul(m.vertex_transition(w, sigma), inverse(m.vertex_transition(v, sigma)))


def loop_matrix(m: IntegralTropicalManifold, v_plus: str, v_minus: str, sigma_plus: str, sigma_minus: str) -> tuple:
    """v_plus -> v_minus through sigma_plus, then back through sigma_minus, acting on T_{v_plus}."""
    there = transport(m, v_plus, v_minus, sigma_plus)
    back = transport(m, v_minus, v_plus, sigma_minus)
    mat = matmul(back, there)
    return tuple(tuple(int(x) for x in r) for r in mat)


def edge_direction(m: IntegralTropicalManifold, omega: str, v_plus: str) -> tuple:
    """Primitive d_omega in T_{v_plus} pointing from v_plus to the other end of omega."""
    ends = m.vertices(omega)
    if len(ends) != 2 or v_plus not in ends:
        raise ValueError(f"{omega} is not a bounded edge at {v_plus}")
    other = ends[1] if ends[0] == v_plus else ends[0]
    sigma = m.star(omega)[0]
    diff = vsub(m.position(other, sigma), m.position(v_plus, sigma))
    return primitive(m.to_vertex(v_plus, sigma, diff)), other


def monodromy(m: IntegralTropicalManifold, v_plus: str, sigma_plus: str, sigma_minus: str, via) -> MonodromyTransform:
    """via = ("edge", omega) | ("codim1", rho, v_minus) | ("both", omega, rho)."""
    kind = via[0]
    if kind == "edge":
        _, v_minus = edge_direction(m, via[1], v_plus)
    elif kind == "codim1":
        v_minus = via[2]
    elif kind == "both":
        _, v_minus = edge_direction(m, via[1], v_plus)
    else:
        raise ValueError(f"unknown loop kind {kind}")
    for s in (sigma_plus, sigma_minus):
        if not (m.contains(v_plus, s) and m.contains(v_minus, s)):
            raise ValueError(f"cells not incident: {s} misses {v_plus} or {v_minus}")
    mat = loop_matrix(m, v_plus, v_minus, sigma_plus, sigma_minus)
    kappa = None
    if kind == "both":
        omega, rho = via[1], via[2]
        if set(m.star(rho)) != {sigma_plus, sigma_minus}:
            raise ValueError(f"{sigma_plus}, {sigma_minus} are not the two sides of {rho}")
        kappa = kappa_from_matrix(m, mat, v_plus, omega, rho, sigma_plus)
    return MonodromyTransform(v_plus, (sigma_plus, sigma_minus) + tuple(via), mat, kappa)


def _dual_normal(m, v, rho, sigma_plus):
    d = codim_one_normal(m, v, rho)
    plus, _ = m.codim_one_sides(rho)
    return d if plus == sigma_plus else tuple(-x for x in d)


def _unit_against(d) -> tuple:
    """Integral m with <m, d> = 1 for a primitive covector d."""
    coeffs = [0] * len(d)
    g = 0
    for i, x in enumerate(d):
        if not x:
            continue
        if g == 0:
            g, coeffs[i] = x, 1
        else:
            a, b, g = _egcd(g, x)
            coeffs = [c * a for c in coeffs]
            coeffs[i] = b
    if g < 0:
        coeffs = [-c for c in coeffs]
    return tuple(coeffs)


def _egcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return x0, y0, a


def m_rho(m: IntegralTropicalManifold, rho: str, v: str, w: str) -> tuple:
    """m^rho_{v w} in T_v: T(m) = m + <m, d_rho> m^rho_{vw}."""
    plus, minus = m.codim_one_sides(rho)
    mat = loop_matrix(m, v, w, plus, minus)
    d = codim_one_normal(m, v, rho)
    n = m.dim
    t_minus_i = [[mat[i][j] - (i == j) for j in range(n)] for i in range(n)]
    u = _unit_against(d)
    out = matvec(t_minus_i, u)
    # (T - I) must factor through d
    for i in range(n):
        for j in range(n):
            if t_minus_i[i][j] != out[i] * d[j]:
                raise ValueError(f"monodromy around {rho} does not factor through its normal")
    return tuple(int(x) for x in out)


def kappa_from_matrix(m, mat, v_plus, omega, rho, sigma_plus) -> int:
    d_omega, _ = edge_direction(m, omega, v_plus)
    d_rho = _dual_normal(m, v_plus, rho, sigma_plus)
    n = m.dim
    t_minus_i = [[mat[i][j] - (i == j) for j in range(n)] for i in range(n)]
    u = _unit_against(d_rho)
    img = matvec(t_minus_i, u)
    i = next((k for k, x in enumerate(d_omega) if x), None)
    kappa = Fraction(img[i]) / d_omega[i]
    if any(img[k] != kappa * d_omega[k] for k in range(n)) or kappa.denominator != 1:
        raise ValueError(f"monodromy for ({omega}, {rho}) is not a multiple of d_omega")
    for a in range(n):
        for b in range(n):
            if t_minus_i[a][b] != kappa * d_omega[a] * d_rho[b]:
                raise ValueError(f"monodromy for ({omega}, {rho}) is not of rank one")
    return int(kappa)


def kappa(m: IntegralTropicalManifold, omega: str, rho: str) -> int:
    """kappa_{omega rho} for a bounded edge omega inside a codimension one cell rho."""
    if not m.contains(omega, rho):
        raise ValueError(f"{omega} is not contained in {rho}")
    v_plus = m.vertices(omega)[0]
    plus, minus = m.codim_one_sides(rho)
    return monodromy(m, v_plus, plus, minus, ("both", omega, rho)).kappa


def bounded_edges(m: IntegralTropicalManifold, tau: str) -> list[str]:
    return [w for w in m.faces(tau) if m.cells[w].dim == 1 and m.is_bounded(w)]


def codim_one_over(m: IntegralTropicalManifold, tau: str) -> list[str]:
    return [r for r in m.cofaces(tau) if m.cells[r].dim == m.dim - 1 and len(m.star(r)) == 2]


def kappa_table(m: IntegralTropicalManifold) -> dict:
    out = {}
    for rho in m.cells_of_dim(m.dim - 1):
        if len(m.star(rho)) != 2:
            continue
        for omega in bounded_edges(m, rho):
            out[(omega, rho)] = kappa(m, omega, rho)
    return out


def tangent_coords(m: IntegralTropicalManifold, tau: str, v: str, x) -> tuple:
    """Coordinates in the chart lattice of tau of a vector of T_v tangent to tau."""
    sigma = m.star(tau)[0]
    cols = [m.to_vertex(v, sigma, c) for c in m.tangent_image(tau, sigma)]
    if not cols:
        if any(x):
            raise ValueError("vector is not tangent to a vertex")
        return ()
    c = solve(transpose(cols), frac_vec(x))
    if c is None:
        raise ValueError(f"vector is not tangent to {tau}")
    return c


def quotient_map(m: IntegralTropicalManifold, tau: str, v: str) -> tuple:
    """T_v -> Q_tau, the fan structure along tau read in the vertex chart."""
    sigma = m.star(tau)[0]
    return matmul(m.fan_matrix(tau, sigma), inverse(m.vertex_transition(v, sigma)))


def n_omega(m: IntegralTropicalManifold, omega: str, sigma0: str, sigma: str, tau: str | None = None) -> tuple:
    """n^{sigma0 sigma}_omega as a covector on Q_tau (tau defaults to omega)."""
    tau = tau or omega
    v_plus = m.vertices(omega)[0]
    d, v_minus = edge_direction(m, omega, v_plus)
    mat = loop_matrix(m, v_plus, v_minus, sigma0, sigma)
    n = m.dim
    t_minus_i = [[mat[i][j] - (i == j) for j in range(n)] for i in range(n)]
    i = next(k for k, x in enumerate(d) if x)
    cov = tuple(Fraction(x, d[i]) for x in t_minus_i[i])
    for a in range(n):
        for b in range(n):
            if t_minus_i[a][b] != d[a] * cov[b]:
                raise ValueError(f"monodromy along {omega} is not of the form d_omega (x) n")
    q = quotient_map(m, tau, v_plus)
    if not q:
        if any(cov):
            raise ValueError("nonzero covector on a zero quotient")
        return ()
    sol = solve(transpose(q), cov)
    if sol is None:
        raise ValueError(f"n_omega does not descend to the quotient along {tau}")
    return sol


def normalize(points) -> Polyhedron:
    """Convex hull translated so that its lexicographically minimal vertex is the origin."""
    pts = [frac_vec(p) for p in points]
    dim = len(pts[0])
    poly = Polyhedron.from_points(pts, dim=dim)
    return poly.translate([-x for x in poly.vertices[0]]) if dim else poly


def delta_rho(m: IntegralTropicalManifold, rho: str, tau: str, v0: str | None = None) -> Polyhedron:
    """Delta_rho(tau) in the chart lattice of tau, normalized."""
    verts = m.vertices(tau)
    v0 = v0 or verts[0]
    pts = [tangent_coords(m, tau, v0, m_rho(m, rho, v0, v)) for v in verts]
    return normalize(pts)


def dual_delta_omega(m: IntegralTropicalManifold, omega: str, tau: str, sigma0: str | None = None) -> Polyhedron:
    """Dual polytope of omega along tau in Q_tau^*, built from the maximal cells containing tau."""
    star = m.star(tau)
    sigma0 = sigma0 or star[0]
    return normalize([n_omega(m, omega, sigma0, s, tau) for s in star])


@dataclass
class CellPolytopes:
    tau: str
    omegas: list
    rhos: list
    parts: list = field(default_factory=list)  # [(Omega_i, R_i)]
    deltas: list = field(default_factory=list)
    dual_deltas: list = field(default_factory=list)
    problems: list = field(default_factory=list)

    @property
    def p(self) -> int:
        return len(self.parts)

    def to_json(self) -> dict:
        return {"tau": self.tau,
                "parts": [{"edges": list(o), "facets": list(r)} for o, r in self.parts],
                "delta": [d.to_json() for d in self.deltas],
                "dual_delta": [d.to_json() for d in self.dual_deltas],
                "problems": list(self.problems)}


def _components(omegas, rhos, table):
    adj = {("w", o): set() for o in omegas}
    adj.update({("r", r): set() for r in rhos})
    for o in omegas:
        for r in rhos:
            if table.get((o, r), 0):
                adj[("w", o)].add(("r", r))
                adj[("r", r)].add(("w", o))
    seen, comps = set(), []
    for node in sorted(adj):
        if node in seen or not adj[node]:
            continue
        stack, comp = [node], set()
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(adj[x] - comp)
        seen |= comp
        comps.append((sorted(x[1] for x in comp if x[0] == "w"), sorted(x[1] for x in comp if x[0] == "r")))
    return sorted(comps)


def cell_polytopes(m: IntegralTropicalManifold, tau: str, table: dict | None = None) -> CellPolytopes:
    table = table if table is not None else kappa_table(m)
    omegas, rhos = bounded_edges(m, tau), codim_one_over(m, tau)
    out = CellPolytopes(tau, omegas, rhos)
    if not m.is_bounded(tau) and not omegas:
        return out
    for om, rs in _components(omegas, rhos, table):
        missing = [(o, r) for o in om for r in rs if not table.get((o, r), 0)]
        if missing:
            out.problems.append(f"kappa vanishes on {missing[0]} inside a block at {tau}")
        ds = {r: delta_rho(m, r, tau) for r in rs}
        dds = {o: dual_delta_omega(m, o, tau) for o in om}
        if len(set(ds.values())) > 1:
            out.problems.append(f"monodromy polytopes at {tau} differ across {rs}")
        if len(set(dds.values())) > 1:
            out.problems.append(f"dual monodromy polytopes at {tau} differ across {om}")
        out.parts.append((om, rs))
        out.deltas.append(ds[rs[0]])
        out.dual_deltas.append(dds[om[0]])
    return out


def cayley(polys: list) -> Polyhedron | None:
    """Conv of the union of P_i x {e_i}."""
    p = len(polys)
    if p == 0:
        return None
    pts = []
    for i, poly in enumerate(polys):
        e = tuple(Fraction(int(i == j)) for j in range(p))
        pts += [tuple(v) + e for v in poly.vertices]
    return Polyhedron.from_points(pts, dim=len(pts[0]))


@dataclass
class Certificate:
    ok: bool
    kappas: dict = field(default_factory=dict)
    cells: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "kappa": [{"edge": o, "facet": r, "kappa": k} for (o, r), k in sorted(self.kappas.items())],
                "cells": {t: c.to_json() for t, c in sorted(self.cells.items())},
                "violations": list(self.violations)}


def monodromy_polytopes(m: IntegralTropicalManifold) -> dict:
    table = kappa_table(m)
    return {t: cell_polytopes(m, t, table) for t in sorted(m.cells)}


def check_positive(m: IntegralTropicalManifold) -> Certificate:
    table = kappa_table(m)
    bad = [f"kappa({o}, {r}) = {k} < 0" for (o, r), k in sorted(table.items()) if k < 0]
    return Certificate(not bad, table, {}, bad)


def _check(m: IntegralTropicalManifold, strong: bool) -> Certificate:
    table = kappa_table(m)
    cells = {t: cell_polytopes(m, t, table) for t in sorted(m.cells)}
    bad = []
    for t, cp in cells.items():
        bad += cp.problems
        if cp.p == 0:
            continue  # empty index set: vacuous
        for name, polys in (("monodromy", cp.deltas), ("dual monodromy", cp.dual_deltas)):
            big = cayley(polys)
            if not is_elementary(big):
                bad.append(f"{name} polytope at {t} is not elementary")
            elif strong and not is_standard_simplex(big):
                bad.append(f"{name} polytope at {t} is not a standard simplex")
    return Certificate(not bad, table, cells, bad)


def check_simple(m: IntegralTropicalManifold) -> Certificate:
    return _check(m, strong=False)


def check_strongly_simple(m: IntegralTropicalManifold) -> Certificate:
    return _check(m, strong=True)
