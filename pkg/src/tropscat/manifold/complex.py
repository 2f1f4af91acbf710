"""Integral polyhedral complexes with fan structures: the base of a toric degeneration."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping

from ..lattice.fan import Cone, Fan
from ..lattice.linalg import (
    annihilator,
    frac_vec,
    identity,
    int_vec,
    matmul,
    matvec,
    solve,
    transpose,
    vsub,
)
from ..lattice.polyhedron import Polyhedron


@dataclass(frozen=True)
class Cell:
    id: str
    dim: int
    poly: Polyhedron  # in the cell's own chart Z^dim


@dataclass(frozen=True)
class Arrow:
    """Integral affine embedding x -> matrix x + vector from src chart into dst chart."""

    src: str
    dst: str
    matrix: tuple  # dst.dim rows, src.dim columns
    vector: tuple

    def linear(self, x) -> tuple:
        return matvec(self.matrix, x) if self.matrix and self.matrix[0] else tuple(0 for _ in self.vector)

    def __call__(self, x) -> tuple:
        return tuple(a + b for a, b in zip(self.linear(x), self.vector))


def _num(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else str(x)


def _frac(x) -> Fraction:
    return Fraction(x)


@dataclass
class IntegralTropicalManifold:
    """Cells with own charts, face arrows, and fan structures S_tau^sigma for maximal sigma.

    fan_structures[tau][sigma] is an integer matrix Lambda_sigma -> Q_tau = Z^(n - dim tau).
    phi[v][sigma] is the slope of the local convex representative on K_v sigma (a covector on T_v).
    orientation[rho] names the maximal cell on the positive side of the codimension one cell rho.
    """

    dim: int
    cells: dict
    arrows: dict
    fan_structures: dict
    phi: dict | None = None
    orientation: dict = field(default_factory=dict)
    gluing: dict = field(default_factory=dict)
    c_tau: dict = field(default_factory=dict)
    slabs: dict = field(default_factory=dict)
    name: str = ""
    meta: dict = field(default_factory=dict)

    # incidence

    @cached_property
    def maximal(self) -> list[str]:
        return sorted(c for c, cell in self.cells.items() if cell.dim == self.dim)

    def cells_of_dim(self, k: int) -> list[str]:
        return sorted(c for c, cell in self.cells.items() if cell.dim == k)

    def contains(self, tau: str, sigma: str) -> bool:
        return tau == sigma or (tau, sigma) in self.arrows

    def faces(self, sigma: str) -> list[str]:
        return sorted([t for (t, s) in self.arrows if s == sigma] + [sigma])

    def cofaces(self, tau: str) -> list[str]:
        return sorted([s for (t, s) in self.arrows if t == tau] + [tau])

    def star(self, tau: str) -> list[str]:
        """Maximal cells containing tau."""
        return [s for s in self.maximal if self.contains(tau, s)]

    def vertices(self, tau: str) -> list[str]:
        return [t for t in self.faces(tau) if self.cells[t].dim == 0]

    def is_bounded(self, tau: str) -> bool:
        return self.cells[tau].poly.is_bounded

    def codim_one_sides(self, rho: str) -> tuple[str, str]:
        """(sigma_plus, sigma_minus) for a codimension one cell with two adjacent maximal cells."""
        st = self.star(rho)
        if len(st) != 2:
            raise ValueError(f"{rho} does not separate two maximal cells")
        plus = self.orientation.get(rho, st[0])
        if plus not in st:
            raise ValueError(f"orientation of {rho} names a cell not containing it")
        minus = st[1] if plus == st[0] else st[0]
        return plus, minus

    # linear data

    def linear(self, tau: str, sigma: str) -> tuple:
        """Linear part Lambda_tau -> Lambda_sigma of the arrow (identity when equal)."""
        if tau == sigma:
            return identity(self.cells[tau].dim)
        return self.arrows[(tau, sigma)].matrix

    def position(self, v: str, sigma: str) -> tuple:
        """Image of vertex v in the chart of sigma."""
        if v == sigma:
            return ()
        return tuple(Fraction(x) for x in self.arrows[(v, sigma)].vector)

    def base_point(self, tau: str, sigma: str) -> tuple:
        """Image of the chart origin of tau in the chart of sigma."""
        if tau == sigma:
            return tuple(Fraction(0) for _ in range(self.cells[sigma].dim))
        return tuple(Fraction(x) for x in self.arrows[(tau, sigma)].vector)

    def tangent_image(self, tau: str, sigma: str) -> list[tuple]:
        """Columns of the linear embedding Lambda_tau -> Lambda_sigma."""
        mat = self.linear(tau, sigma)
        k = self.cells[tau].dim
        return [tuple(row[j] for row in mat) for j in range(k)]

    def fan_matrix(self, tau: str, sigma: str) -> tuple:
        """S_tau on Lambda_sigma for any sigma containing tau (through a maximal cell)."""
        fs = self.fan_structures.get(tau, {})
        if sigma in fs:
            return fs[sigma]
        for big in self.star(sigma):
            if big in fs:
                s = fs[big]
                if not s:
                    return ()
                return matmul(s, self.linear(sigma, big))
        raise KeyError(f"no fan structure at {tau} covering {sigma}")

    def quotient_dim(self, tau: str) -> int:
        return self.dim - self.cells[tau].dim

    def tangent_cone_generators(self, tau: str, sigma: str) -> list[tuple]:
        """Generators (in the chart of sigma) of the tangent wedge of sigma along tau."""
        p = self.base_point(tau, sigma)
        poly = self.cells[sigma].poly
        gens = [vsub(w, p) for w in poly.vertices] + [frac_vec(r) for r in poly.rays]
        return [g for g in gens if any(g)]

    def cone_in_fan(self, tau: str, sigma: str) -> Cone:
        """K_tau sigma in Q_tau."""
        k = self.quotient_dim(tau)
        if k == 0:
            return Cone.zero(0)
        s = self.fan_matrix(tau, sigma)
        gens = [matvec(s, g) for g in self.tangent_cone_generators(tau, sigma)]
        return Cone(gens, [], dim=k)

    def fan_at(self, tau: str) -> Fan:
        k = self.quotient_dim(tau)
        return Fan([self.cone_in_fan(tau, s) for s in self.star(tau)], k)

    def vertex_transition(self, v: str, sigma: str) -> tuple:
        """S_v^sigma: Lambda_sigma -> T_v (square, unimodular)."""
        return self.fan_matrix(v, sigma)

    def to_vertex(self, v: str, sigma: str, x) -> tuple:
        """A tangent vector of sigma (its chart) expressed in T_v."""
        return matvec(self.vertex_transition(v, sigma), x)

    def from_vertex(self, v: str, sigma: str, y) -> tuple:
        x = solve(self.vertex_transition(v, sigma), frac_vec(y))
        if x is None:
            raise ValueError("vertex transition is singular")
        return x

    def covector_to_vertex(self, v: str, sigma: str, a) -> tuple:
        """A covector on Lambda_sigma expressed on T_v."""
        s = self.vertex_transition(v, sigma)
        return tuple(solve(transpose(s), frac_vec(a)))

    def interior_direction(self, tau: str, sigma: str) -> tuple:
        """A direction in the chart of sigma pointing from relint(tau) into int(sigma)."""
        gens = self.tangent_cone_generators(tau, sigma)
        out = [Fraction(0)] * self.cells[sigma].dim
        for g in gens:
            out = [a + b for a, b in zip(out, g)]
        return tuple(out)

    # serialization

    def to_json(self) -> dict:
        cells = []
        for cid in sorted(self.cells, key=lambda c: (self.cells[c].dim, c)):
            cell = self.cells[cid]
            cells.append({"id": cid, "dim": cell.dim,
                          "vertices": [[_num(x) for x in v] for v in cell.poly.vertices],
                          "rays": [list(r) for r in cell.poly.rays]})
        arrows = [{"src": a.src, "dst": a.dst, "matrix": [[_num(x) for x in r] for r in a.matrix],
                   "vector": [_num(x) for x in a.vector]}
                  for _, a in sorted(self.arrows.items())]
        fans = {t: {s: [[_num(x) for x in r] for r in m] for s, m in sorted(d.items())}
                for t, d in sorted(self.fan_structures.items())}
        out = {"name": self.name, "dim": self.dim, "cells": cells, "arrows": arrows,
               "fan_structures": fans}
        if self.orientation:
            out["orientation"] = dict(sorted(self.orientation.items()))
        if self.phi is not None:
            out["phi"] = {v: {s: [_num(x) for x in a] for s, a in sorted(d.items())}
                          for v, d in sorted(self.phi.items())}
        if self.gluing:
            out["gluing"] = [
                {"src": w, "dst": t,
                 "maps": [{"cell": s, "symbol": sym, "exponent": [_num(x) for x in a]}
                          for s, syms in sorted(pm.items()) for sym, a in sorted(syms.items())]}
                for (w, t), pm in sorted(self.gluing.items())]
        if self.c_tau:
            out["c_tau"] = {t: [_num(x) for x in c] for t, c in sorted(self.c_tau.items())}
        if self.slabs:
            out["slabs"] = [
                {"id": f"f_{v}_{r}", "vertex": v, "cell": r,
                 "terms": [{"m": list(m), "coeff": _num(c)} for m, c in sorted(f.items())]}
                for (v, r), f in sorted(self.slabs.items())]
        if self.meta:
            out["meta"] = self.meta
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=False)

    @classmethod
    def from_json(cls, data: Mapping) -> "IntegralTropicalManifold":
        return manifold_from_json(data)


class SchemaError(ValueError):
    """Input file does not match the manifold schema."""


def _need(d: Mapping, key: str, where: str):
    if key not in d:
        raise SchemaError(f"{where}: missing field '{key}'")
    return d[key]


def _int_matrix(m, where: str) -> tuple:
    try:
        return tuple(int_vec(r) for r in m)
    except (TypeError, ValueError) as e:
        raise SchemaError(f"{where}: expected an integer matrix ({e})") from None


def _rat_vec(v, where: str) -> tuple:
    try:
        return tuple(Fraction(x) for x in v)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise SchemaError(f"{where}: expected rational entries ({e})") from None


def manifold_from_json(data: Mapping) -> IntegralTropicalManifold:
    n = _need(data, "dim", "manifold")
    if not isinstance(n, int) or n < 0:
        raise SchemaError("manifold.dim: expected a non-negative integer")
    cells = {}
    for i, c in enumerate(_need(data, "cells", "manifold")):
        where = f"cells[{i}]"
        cid = str(_need(c, "id", where))
        d = _need(c, "dim", where)
        verts = _need(c, "vertices", where)
        rays = c.get("rays", [])
        try:
            poly = Polyhedron.from_points([int_vec(v) for v in verts], [int_vec(r) for r in rays], dim=d)
        except (TypeError, ValueError) as e:
            raise SchemaError(f"{where}: bad polyhedron ({e})") from None
        if poly.dim != d:
            raise SchemaError(f"{where}: polyhedron has dimension {poly.dim}, declared {d}")
        cells[cid] = Cell(cid, d, poly)
    arrows = {}
    for i, a in enumerate(data.get("arrows", [])):
        where = f"arrows[{i}]"
        src, dst = str(_need(a, "src", where)), str(_need(a, "dst", where))
        for c in (src, dst):
            if c not in cells:
                raise SchemaError(f"{where}: unknown cell '{c}'")
        if (src, dst) in arrows:
            raise SchemaError(f"{where}: duplicate arrow {src}->{dst}")
        mat = _int_matrix(_need(a, "matrix", where), where + ".matrix")
        vec = _int_matrix([_need(a, "vector", where)], where + ".vector")[0]
        if len(vec) != cells[dst].dim or len(mat) not in (0, cells[dst].dim):
            raise SchemaError(f"{where}: shape does not match cell dimensions")
        if cells[src].dim == 0:
            mat = tuple(() for _ in range(cells[dst].dim))
        arrows[(src, dst)] = Arrow(src, dst, mat, vec)
    fans = {}
    for t, per in data.get("fan_structures", {}).items():
        if t not in cells:
            raise SchemaError(f"fan_structures: unknown cell '{t}'")
        fans[t] = {}
        for s, m in per.items():
            if s not in cells:
                raise SchemaError(f"fan_structures.{t}: unknown cell '{s}'")
            fans[t][s] = _int_matrix(m, f"fan_structures.{t}.{s}")
    phi = None
    if "phi" in data:
        phi = {v: {s: _rat_vec(a, f"phi.{v}.{s}") for s, a in per.items()} for v, per in data["phi"].items()}
    gluing = {}
    for i, g in enumerate(data.get("gluing", [])):
        where = f"gluing[{i}]"
        key = (str(_need(g, "src", where)), str(_need(g, "dst", where)))
        pm = {}
        for j, e in enumerate(_need(g, "maps", where)):
            s = str(_need(e, "cell", f"{where}.maps[{j}]"))
            sym = str(e.get("symbol", "t"))
            pm.setdefault(s, {})[sym] = _rat_vec(_need(e, "exponent", f"{where}.maps[{j}]"),
                                                 f"{where}.maps[{j}].exponent")
        gluing[key] = pm
    c_tau = {t: _rat_vec(c, f"c_tau.{t}") for t, c in data.get("c_tau", {}).items()}
    slabs = {}
    for i, s in enumerate(data.get("slabs", [])):
        where = f"slabs[{i}]"
        key = (str(_need(s, "vertex", where)), str(_need(s, "cell", where)))
        f = {}
        for j, term in enumerate(_need(s, "terms", where)):
            m = _int_matrix([_need(term, "m", f"{where}.terms[{j}]")], where)[0]
            f[m] = f.get(m, Fraction(0)) + Fraction(_need(term, "coeff", f"{where}.terms[{j}]"))
        slabs[key] = f
    return IntegralTropicalManifold(
        dim=n, cells=cells, arrows=arrows, fan_structures=fans, phi=phi,
        orientation=dict(data.get("orientation", {})), gluing=gluing, c_tau=c_tau, slabs=slabs,
        name=str(data.get("name", "")), meta=dict(data.get("meta", {})))


def _key(p: Polyhedron):
    return (p.vertices, p.rays)


def build_manifold(dim: int, maximal: Mapping[str, Polyhedron],
                   vertex_fans: Mapping | None = None, names: Mapping | None = None,
                   **extra) -> IntegralTropicalManifold:
    """Assemble a manifold from maximal cells drawn in one developing chart.

    vertex_fans maps a vertex point to {maximal cell id: S_v matrix on the global lattice};
    missing entries are the identity.  Faces are identified by their vertex and ray sets;
    names maps a face (given by its vertices and rays in global coordinates) to a cell id.
    Lower cells get a chart from a saturated basis of their tangent lattice; fan structures
    along a cell are pushed from a chosen vertex through the integral quotient by its tangent space.
    """
    vertex_fans = {tuple(Fraction(x) for x in k): v for k, v in (vertex_fans or {}).items()}
    names = dict(names or {})
    faces_of: dict = {}
    polys: dict = {}
    for sid, p in maximal.items():
        polys[_key(p)] = p
        faces_of[sid] = []
        for f in p.faces():
            polys.setdefault(_key(f), f)
            faces_of[sid].append(_key(f))
    ids: dict = {}
    for sid, p in maximal.items():
        ids[_key(p)] = sid
    counters: dict = {}
    named = {(tuple(tuple(Fraction(x) for x in v) for v in sorted(vs)),
              tuple(sorted(tuple(r) for r in rs))): n for (vs, rs), n in names.items()}
    for k in sorted(polys, key=lambda k: (polys[k].dim, k)):
        if k in ids:
            continue
        if k in named:
            ids[k] = named[k]
            continue
        d = polys[k].dim
        prefix = "v" if d == 0 else f"c{d}_"
        counters[d] = counters.get(d, -1) + 1
        ids[k] = f"{prefix}{counters[d]}"
    charts = {}
    cells = {}
    for k, p in polys.items():
        cid = ids[k]
        if p.dim == dim:
            origin = (Fraction(0),) * dim
            basis = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
            local = p
        else:
            origin, basis, local = p.chart()
        charts[cid] = (origin, basis)
        cells[cid] = Cell(cid, p.dim, local)

    def to_chart(cid, x, linear=False):
        origin, basis = charts[cid]
        if not basis:
            return ()
        rhs = frac_vec(x) if linear else vsub(frac_vec(x), origin)
        c = solve(transpose(basis), rhs)
        if c is None:
            raise ValueError("point outside the cell span")
        return c

    arrows = {}
    contains = {}
    for sid in maximal:
        for fk in faces_of[sid]:
            contains.setdefault(ids[fk], set()).add(sid)
    # face relations between all cells: tau <= sigma iff tau is a face of sigma's polyhedron
    for k, p in polys.items():
        for fk in ([_key(f) for f in p.faces()] if p.dim > 0 else []):
            if fk == k:
                continue
            src, dst = ids[fk], ids[k]
            origin_s, basis_s = charts[src]
            vec = to_chart(dst, origin_s)
            cols = [to_chart(dst, b, linear=True) for b in basis_s]
            mat = tuple(tuple(c[i] for c in cols) for i in range(cells[dst].dim)) if cols else \
                tuple(() for _ in range(cells[dst].dim))
            arrows[(src, dst)] = Arrow(src, dst, tuple(int_vec(r) for r in mat) if cols else mat,
                                       int_vec(vec))
    # fan structures
    fans: dict = {}
    vertex_of = {}
    for k, p in polys.items():
        if p.dim == 0:
            vertex_of[ids[k]] = p.vertices[0]
    for k, p in polys.items():
        tid = ids[k]
        star = sorted(contains[tid])
        if p.dim == dim:
            fans[tid] = {tid: ()}
            continue
        v0 = min((vertex_of[ids[fk]] for fk in [_key(f) for f in p.faces()] if polys[fk].dim == 0))
        sv = vertex_fans.get(v0, {})
        if p.dim == 0:
            fans[tid] = {s: tuple(tuple(int(x) for x in r) for r in sv.get(s, identity(dim)))
                         for s in star}
            continue
        s0 = sv.get(star[0], identity(dim))
        _, basis = charts[tid]
        w = [matvec(s0, b) for b in basis]
        quot = annihilator(w, dim)
        fans[tid] = {s: tuple(tuple(int(x) for x in r) for r in matmul(quot, sv.get(s, identity(dim))))
                     for s in star}
    m = IntegralTropicalManifold(dim=dim, cells=cells, arrows=arrows, fan_structures=fans, **extra)
    m.meta.setdefault("charts", {cid: {"origin": [_num(x) for x in o], "basis": [list(b) for b in bs]}
                                 for cid, (o, bs) in sorted(charts.items())})
    return m


def global_chart(m: IntegralTropicalManifold, cid: str) -> tuple[tuple, list]:
    """(origin, basis) of a cell in the developing chart recorded by build_manifold."""
    ch = m.meta.get("charts", {}).get(cid)
    if ch is None:
        raise KeyError(f"no developing chart recorded for {cid}")
    return tuple(Fraction(x) for x in ch["origin"]), [tuple(b) for b in ch["basis"]]
