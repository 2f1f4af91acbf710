"""Strata of the tropical singular locus inside the bounded cells of a manifold."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from ..lattice.fan import Cone, Fan
from ..lattice.linalg import frac_vec, matvec, transpose, vsub
from ..lattice.polyhedron import Polyhedron
from .complex import IntegralTropicalManifold


@dataclass(frozen=True)
class SingularStratum:
    cell: str
    cone: Cone  # in the dual of the chart lattice of the cell
    translation: tuple
    essential: bool

    @property
    def dim(self) -> int:
        return self.cone.dim

    def key(self):
        return (self.cell, self.cone.key, tuple(self.translation))

    def to_json(self) -> dict:
        return {"cell": self.cell, "dim": self.dim, "essential": self.essential,
                "cone": self.cone.to_json(),
                "translation": [str(x) if Fraction(x).denominator != 1 else int(x) for x in self.translation]}


def _vertex_cones(points, k: int) -> list[Cone]:
    """Inner normal cones at the vertices of Conv(points), in the dual of Z^k (lineality allowed)."""
    if k == 0:
        return [Cone.zero(0)]
    poly = Polyhedron.from_points(points, dim=k)
    cones = []
    for v in poly.vertices:
        ineqs = [vsub(w, v) for w in poly.vertices if w != v]
        cones.append(Cone.from_inequalities(ineqs, dim=k) if ineqs else Cone.whole(k))
    return cones


def cell_normal_fan(m: IntegralTropicalManifold, tau: str) -> Fan:
    k = m.cells[tau].dim
    return Fan(_vertex_cones(m.cells[tau].poly.vertices, k), k)


def minkowski_sum(polys: list, k: int) -> Polyhedron:
    if not polys:
        return Polyhedron.from_points([(0,) * k], dim=k)
    pts = [tuple(sum(Fraction(x[i]) for x in combo) for i in range(k))
           for combo in product(*[p.vertices for p in polys])]
    return Polyhedron.from_points(pts, dim=k)


def essential_fan(m: IntegralTropicalManifold, tau: str, polytopes=None) -> Fan:
    """Pull-back of the product of the normal fans of the monodromy polytopes along tau."""
    from ..monodromy import cell_polytopes

    cp = polytopes if polytopes is not None else cell_polytopes(m, tau)
    k = m.cells[tau].dim
    total = minkowski_sum(cp.deltas, k)
    return Fan(_vertex_cones(total.vertices, k), k)


def _translation(m, tau):
    k = m.cells[tau].dim
    return tuple(Fraction(x) for x in m.c_tau.get(tau, (0,) * k))


def carries_strata(m: IntegralTropicalManifold, tau: str) -> bool:
    """Bounded cells of intermediate dimension away from the boundary of B."""
    if not (0 < m.cells[tau].dim < m.dim and m.is_bounded(tau)):
        return False
    return m.fan_at(tau).is_complete()


def singular_locus(m: IntegralTropicalManifold, essential_only: bool = False, check_gluing: bool = True) -> list:
    """All strata (or only the essential ones), ordered by cell then cone."""
    if check_gluing and m.gluing:
        from ..gluing import check_gluing as _cg

        rep = _cg(m)
        if not rep.ok:
            raise ValueError(f"gluing data fails the cocycle check: {rep.messages()[0]}")
    out = []
    for tau in sorted(m.cells):
        if not carries_strata(m, tau):
            continue
        out.extend(cell_strata(m, tau, essential_only))
    return out


def cell_strata(m: IntegralTropicalManifold, tau: str, essential_only: bool = False) -> list:
    k = m.cells[tau].dim
    c = _translation(m, tau)
    ess = essential_fan(m, tau)
    ess_keys = {x.key for x in ess.cones if x.dim < k}
    out = []
    if essential_only:
        for cone in ess.cones:
            if cone.dim < k:
                out.append(SingularStratum(tau, cone, c, True))
        return out
    for cone in cell_normal_fan(m, tau).cones:
        if cone.dim < k:
            out.append(SingularStratum(tau, cone, c, cone.key in ess_keys))
    return out


def face_normal_cone(m: IntegralTropicalManifold, omega: str, tau: str) -> Cone:
    """Normal cone of tau along its face omega, in the dual of the chart lattice of tau."""
    k = m.cells[tau].dim
    arrow = m.arrows[(omega, tau)]
    p = arrow.vector
    ineqs = [vsub(w, p) for w in m.cells[tau].poly.vertices]
    eqs = [frac_vec(col) for col in m.tangent_image(omega, tau)]
    ineqs = [a for a in ineqs if any(a)]
    if not ineqs and not eqs:
        return Cone.whole(k)
    return Cone.from_inequalities(ineqs, eqs, dim=k)


def stratum_closure(m: IntegralTropicalManifold, s: SingularStratum, omega: str) -> tuple[Cone | None, tuple]:
    """(cone, translation) describing closure(s) meet int(omega), or (None, ()) when they are disjoint.

    Going to infinity inside the cone of s in a direction of the normal cone of omega lands in
    int(omega); the limit set is the restriction of the cone to the chart lattice of omega.
    """
    tau = s.cell
    if omega == tau or not m.contains(omega, tau):
        return None, ()
    normal = face_normal_cone(m, omega, tau)
    if not s.cone.contains_cone(normal):
        return None, ()
    lin = m.linear(omega, tau)
    if m.cells[omega].dim == 0:
        return Cone.zero(0), ()
    restrict = transpose(lin)
    image = s.cone.linear_image(restrict)
    trans = matvec(restrict, s.translation) if s.translation else ()
    return image, tuple(trans)


def check_closure(m: IntegralTropicalManifold, essential: bool = False) -> list[str]:
    """Failures of: closure of every stratum meets each face interior in a union of strata."""
    strata: dict = {}
    for tau in sorted(m.cells):
        if carries_strata(m, tau):
            strata[tau] = cell_strata(m, tau, essential_only=essential)
    failures = []
    for tau, ss in strata.items():
        for s in ss:
            for omega in m.faces(tau):
                if omega == tau:
                    continue
                cone, trans = stratum_closure(m, s, omega)
                if cone is None:
                    continue
                if m.cells[omega].dim == 0:
                    failures.append(f"closure of a stratum of {tau} reaches vertex {omega}")
                    continue
                targets = [t for t in strata.get(omega, []) if t.cone == cone]
                if not targets:
                    failures.append(f"closure of stratum {s.cone.rays} of {tau} meets {omega} outside its strata")
                elif tuple(trans) != tuple(targets[0].translation):
                    failures.append(f"translations of {tau} and {omega} disagree")
    return failures
