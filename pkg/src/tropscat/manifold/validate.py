"""Axiom checks for integral tropical manifolds and convexity of multi-valued PL functions."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..lattice.fan import Fan
from ..lattice.linalg import (
    annihilator,
    det,
    dot,
    frac_vec,
    gcd_maximal_minors,
    is_zero,
    matmul,
    matvec,
    primitive,
    rank,
    solve,
    transpose,
)
from ..lattice.polyhedron import Polyhedron
from .complex import IntegralTropicalManifold

H1_NOTE = "unverified hypothesis: H^1(B, Q) = 0"


@dataclass
class Failure:
    axiom: str
    cells: tuple
    message: str

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "cells": list(self.cells), "message": self.message}


@dataclass
class ValidationReport:
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, axiom: str, cells, message: str):
        self.failures.append(Failure(axiom, tuple(cells), message))

    def messages(self) -> list[str]:
        return [f.message for f in self.failures]

    def to_json(self) -> dict:
        return {"valid": self.ok, "failures": [f.to_json() for f in self.failures], "notes": list(self.notes)}


def _image(m: IntegralTropicalManifold, tau: str, sigma: str) -> Polyhedron:
    """Image of tau's polyhedron inside sigma's chart."""
    a = m.arrows[(tau, sigma)]
    poly = m.cells[tau].poly
    verts = [a(v) for v in poly.vertices]
    rays = [a.linear(r) for r in poly.rays]
    return Polyhedron.from_points(verts, rays, dim=m.cells[sigma].dim)


def _check_faces(m, rep):
    for sigma, cell in m.cells.items():
        if cell.dim == 0:
            continue
        try:
            faces = {(f.vertices, f.rays) for f in cell.poly.faces() if f.dim < cell.dim}
        except ValueError as e:
            rep.add("cells", [sigma], f"cell {sigma}: {e}")
            continue
        hit: dict = {}
        for tau in m.faces(sigma):
            if tau == sigma:
                continue
            img = _image(m, tau, sigma)
            if img.dim != m.cells[tau].dim:
                rep.add("injectivity", [tau, sigma], f"arrow {tau}->{sigma} is not injective")
                continue
            key = (img.vertices, img.rays)
            if key not in faces:
                rep.add("faces", [tau, sigma], f"arrow {tau}->{sigma} does not land on a face")
                continue
            hit.setdefault(key, []).append(tau)
        for key in sorted(faces):
            owners = hit.get(key, [])
            if len(owners) != 1:
                desc = "no arrow" if not owners else f"arrows from {', '.join(owners)}"
                rep.add("faces", [sigma] + owners, f"face {list(map(list, key[0]))} of {sigma} has {desc}")


def _check_composition(m, rep):
    for (omega, tau) in sorted(m.arrows):
        for (t2, sigma) in sorted(m.arrows):
            if t2 != tau:
                continue
            if (omega, sigma) not in m.arrows:
                rep.add("composition", [omega, tau, sigma], f"missing composite arrow {omega}->{sigma}")
                continue
            a1, a2, a3 = m.arrows[(omega, tau)], m.arrows[(tau, sigma)], m.arrows[(omega, sigma)]
            pts = [tuple(0 for _ in range(m.cells[omega].dim))]
            pts += [tuple(int(i == j) for j in range(m.cells[omega].dim)) for i in range(m.cells[omega].dim)]
            if any(tuple(a2(a1(p))) != tuple(a3(p)) for p in pts):
                rep.add("composition", [omega, tau, sigma],
                        f"arrow {omega}->{sigma} differs from the composite through {tau}")


def _check_intersections(m, rep):
    mx = m.maximal
    for i, s1 in enumerate(mx):
        for s2 in mx[i + 1:]:
            common = set(m.faces(s1)) & set(m.faces(s2))
            if not common:
                continue
            tops = [c for c in common if all(m.contains(d, c) for d in common)]
            if len(tops) != 1:
                rep.add("intersection", [s1, s2], f"intersection of {s1} and {s2} is not a cell")


def _check_fan_structure(m, rep, allow_boundary):
    n = m.dim
    for tau in sorted(m.cells):
        k = m.quotient_dim(tau)
        star = m.star(tau)
        if not star:
            rep.add("cells", [tau], f"cell {tau} lies in no maximal cell")
            continue
        ok = True
        for sigma in star:
            try:
                s = m.fan_matrix(tau, sigma)
            except KeyError:
                rep.add("fan", [tau, sigma], f"missing fan structure at {tau} on {sigma}")
                ok = False
                continue
            if k == 0:
                continue
            if len(s) != k or any(len(r) != n for r in s):
                rep.add("submersion", [tau, sigma], f"fan structure not submersion at {tau}")
                ok = False
                continue
            killed = all(is_zero(matvec(s, col)) for col in m.tangent_image(tau, sigma))
            if rank(s) != k or gcd_maximal_minors(s) != 1 or not killed:
                rep.add("submersion", [tau, sigma], f"fan structure not submersion at {tau}")
                ok = False
        if not ok or k == 0:
            continue
        # agreement on shared faces of the star
        for i, s1 in enumerate(star):
            for s2 in star[i + 1:]:
                common = [w for w in set(m.faces(s1)) & set(m.faces(s2)) if m.contains(tau, w)]
                for w in common:
                    a = matmul(m.fan_matrix(tau, s1), m.linear(w, s1)) if m.cells[w].dim else ()
                    b = matmul(m.fan_matrix(tau, s2), m.linear(w, s2)) if m.cells[w].dim else ()
                    if a != b:
                        rep.add("fan", [tau, s1, s2, w],
                                f"fan structure at {tau} disagrees on {w} between {s1} and {s2}")
        cones = {s: m.cone_in_fan(tau, s) for s in star}
        if any(c.dim != k for c in cones.values()):
            bad = [s for s, c in cones.items() if c.dim != k]
            rep.add("fan", [tau] + bad, f"degenerate cone in the fan at {tau}")
            continue
        fan = Fan(cones.values(), k)
        if len(set(cones.values())) != len(cones) or not fan.is_fan():
            rep.add("fan", [tau], f"cones at {tau} do not form a fan")
        elif not allow_boundary and not fan.is_complete():
            rep.add("completeness", [tau], f"fan at {tau} is not complete")


def induced_witness(m: IntegralTropicalManifold, tau: str, omega: str):
    """Integral isomorphism Phi with Phi o (quotient of S_tau) = S_omega on every maximal cell.

    Returns (projection P, Phi) or raises ValueError naming the defect.
    """
    k = m.quotient_dim(omega)
    star = m.star(omega)
    if k == 0:
        return (), ()
    base = star[0]
    s_tau = m.fan_matrix(tau, base)
    span = [matvec(s_tau, c) for c in m.tangent_image(omega, base)]
    proj = annihilator(span, m.quotient_dim(tau))
    induced = matmul(proj, s_tau)
    target = m.fan_matrix(omega, base)
    # Phi * induced = target: solve row by row via the transpose system
    rows = []
    for r in target:
        x = solve(transpose(induced), frac_vec(r))
        if x is None:
            raise ValueError("induced fan structure has a different kernel")
        rows.append(x)
    phi = tuple(rows)
    if any(Fraction(x).denominator != 1 for r in phi for x in r) or abs(det(phi)) != 1:
        raise ValueError("induced fan structure is not lattice equivalent")
    for sigma in star[1:]:
        lhs = matmul(phi, matmul(proj, m.fan_matrix(tau, sigma)))
        if tuple(map(tuple, lhs)) != tuple(tuple(Fraction(x) for x in r) for r in m.fan_matrix(omega, sigma)):
            raise ValueError(f"induced fan structure differs on {sigma}")
    return proj, tuple(tuple(int(x) for x in r) for r in phi)


def _check_compatibility(m, rep):
    for (tau, omega) in sorted(m.arrows):
        if m.quotient_dim(omega) == 0:
            continue
        try:
            _, phi = induced_witness(m, tau, omega)
            rep.witnesses[f"{tau}->{omega}"] = [list(r) for r in phi]
        except (ValueError, KeyError) as e:
            rep.add("compatibility", [tau, omega], f"fan structure at {omega} not induced from {tau}: {e}")


def codim_one_normal(m: IntegralTropicalManifold, v: str, rho: str) -> tuple:
    """Primitive covector on T_v vanishing on K_v rho and positive on K_v sigma_plus."""
    plus, _ = m.codim_one_sides(rho)
    s = m.vertex_transition(v, plus)
    tangent = [matvec(s, c) for c in m.tangent_image(rho, plus)] if m.cells[rho].dim else []
    ann = annihilator(tangent, m.dim)
    if len(ann) != 1:
        raise ValueError(f"{rho} is not of codimension one")
    d = ann[0]
    inward = matvec(s, m.interior_direction(rho, plus))
    if dot(d, inward) < 0:
        d = tuple(-x for x in d)
    return primitive(d)


def kinks(m: IntegralTropicalManifold, phi=None) -> dict:
    """{(v, rho): kink} with phi_v(sigma_plus) - phi_v(sigma_minus) = kink * d_rho; raises on discontinuity."""
    phi = phi if phi is not None else m.phi
    if phi is None:
        raise ValueError("no multi-valued PL function supplied")
    out = {}
    for rho in m.cells_of_dim(m.dim - 1):
        if len(m.star(rho)) != 2:
            continue
        plus, minus = m.codim_one_sides(rho)
        for v in m.vertices(rho):
            if v not in phi:
                raise ValueError(f"no representative at vertex {v}")
            d = codim_one_normal(m, v, rho)
            diff = [Fraction(a) - Fraction(b) for a, b in zip(phi[v][plus], phi[v][minus])]
            i = next(j for j, x in enumerate(d) if x)
            k = diff[i] / d[i]
            if any(x != k * y for x, y in zip(diff, d)):
                raise ValueError(f"representative at {v} is discontinuous across {rho}")
            out[(v, rho)] = k
    return out


def check_strict_convexity(m: IntegralTropicalManifold, phi=None) -> dict:
    """{vertex: True iff every kink at the vertex is strictly positive}."""
    ks = kinks(m, phi)
    out = {v: True for v in m.cells_of_dim(0)}
    for (v, _), k in ks.items():
        if k <= 0:
            out[v] = False
    return out


def _check_phi(m, rep):
    try:
        ks = kinks(m)
    except (ValueError, KeyError) as e:
        rep.add("mpa", [], f"multi-valued function: {e}")
        return
    by_rho: dict = {}
    for (v, rho), k in ks.items():
        by_rho.setdefault(rho, {})[v] = k
    for rho, per in sorted(by_rho.items()):
        if len(set(per.values())) > 1:
            rep.add("mpa", [rho] + sorted(per), f"kinks across {rho} differ between vertices")


def validate_manifold(m: IntegralTropicalManifold, allow_boundary: bool = False) -> ValidationReport:
    rep = ValidationReport()
    _check_faces(m, rep)
    _check_composition(m, rep)
    _check_intersections(m, rep)
    _check_fan_structure(m, rep, allow_boundary)
    if rep.ok:
        _check_compatibility(m, rep)
    if m.phi is not None and rep.ok:
        _check_phi(m, rep)
    rep.notes.append(H1_NOTE)
    return rep
