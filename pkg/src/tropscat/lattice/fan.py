"""Rational polyhedral cones and fans."""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .dd import cone_from_inequalities
from .linalg import dot, frac_vec, inverse, is_zero, matvec, primitive, rank, rref
from .polyhedron import Polyhedron


def _project_out(v, basis, gram_inv):
    """Orthogonal projection of v onto the complement of span(basis)."""
    if not basis:
        return frac_vec(v)
    coef = matvec(gram_inv, [dot(b, v) for b in basis])
    return tuple(x - sum(c * b[i] for c, b in zip(coef, basis)) for i, x in enumerate(v))


class Cone:
    """Cone lin(L) + cone(R) stored with canonical generators and H-representation.

    inequalities are normals a with a.x >= 0; equations are normals with a.x = 0.
    """

    def __init__(self, generators: Iterable[Sequence] = (), lineality: Iterable[Sequence] = (),
                 dim: int | None = None):
        gens = [frac_vec(g) for g in generators]
        lin = [frac_vec(l) for l in lineality]
        if dim is None:
            dim = len((gens or lin)[0])
        self.ambient_dim = dim
        all_gens = [g for g in gens if not is_zero(g)]
        for l in lin:
            if not is_zero(l):
                all_gens.append(l)
                all_gens.append(tuple(-x for x in l))
        drays, dlin = cone_from_inequalities(all_gens, dim)
        self.inequalities = tuple(sorted(tuple(r) for r in drays))
        eqs = []
        if dlin:
            red, _ = rref(dlin, dim)
            eqs = [tuple(primitive(r)) for r in red]
        self.equations = tuple(eqs)
        rows = [a for a in self.inequalities] + [e for e in eqs] + [tuple(-x for x in e) for e in eqs]
        prays, plin = cone_from_inequalities(rows, dim)
        if plin:
            red, _ = rref(plin, dim)
            self.lineality = tuple(tuple(primitive(r)) for r in red)
        else:
            self.lineality = ()
        if self.lineality:
            lb = [frac_vec(l) for l in self.lineality]
            gram_inv = inverse([[dot(a, b) for b in lb] for a in lb])
            prays = [primitive(_project_out(r, lb, gram_inv)) for r in prays]
            prays = [r for r in prays if not is_zero(r)]
        self.rays = tuple(sorted(set(tuple(r) for r in prays)))

    @classmethod
    def from_inequalities(cls, inequalities: Iterable[Sequence], equations: Iterable[Sequence] = (),
                          dim: int | None = None) -> "Cone":
        ineqs = [frac_vec(a) for a in inequalities]
        eqs = [frac_vec(a) for a in equations]
        if dim is None:
            dim = len((ineqs or eqs)[0])
        rows = ineqs + eqs + [tuple(-x for x in e) for e in eqs]
        rays, lin = cone_from_inequalities(rows, dim)
        return cls(rays, lin, dim=dim)

    @classmethod
    def zero(cls, dim: int) -> "Cone":
        return cls([], [], dim=dim)

    @classmethod
    def whole(cls, dim: int) -> "Cone":
        return cls([], [tuple(int(i == j) for j in range(dim)) for i in range(dim)], dim=dim)

    @property
    def key(self):
        return (self.ambient_dim, self.lineality, self.rays)

    def __eq__(self, other) -> bool:
        return isinstance(other, Cone) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __lt__(self, other: "Cone") -> bool:
        return (self.dim, self.key) < (other.dim, other.key)

    def __repr__(self) -> str:
        if self.lineality:
            return f"Cone(rays={list(self.rays)}, lineality={list(self.lineality)})"
        return f"Cone(rays={list(self.rays)})"

    @cached_property
    def dim(self) -> int:
        return rank([frac_vec(r) for r in self.rays] + [frac_vec(l) for l in self.lineality]) \
            if (self.rays or self.lineality) else 0

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    @property
    def generators(self) -> list[tuple[int, ...]]:
        """Generators as a plain cone (lineality entered with both signs)."""
        out = list(self.rays)
        for l in self.lineality:
            out.append(tuple(l))
            out.append(tuple(-x for x in l))
        return out

    def contains(self, x) -> bool:
        x = frac_vec(x)
        return all(dot(a, x) >= 0 for a in self.inequalities) and all(dot(e, x) == 0 for e in self.equations)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(g) for g in other.generators)

    def relative_interior_contains(self, x) -> bool:
        x = frac_vec(x)
        return self.contains(x) and all(dot(a, x) > 0 for a in self.inequalities)

    @cached_property
    def interior_point(self) -> tuple[Fraction, ...]:
        pt = [Fraction(0)] * self.ambient_dim
        for r in self.rays:
            for i, x in enumerate(r):
                pt[i] += x
        return tuple(pt)

    def intersection(self, other: "Cone") -> "Cone":
        return Cone.from_inequalities(self.inequalities + other.inequalities,
                                      self.equations + other.equations, dim=self.ambient_dim)

    def __add__(self, other: "Cone") -> "Cone":
        return Cone(self.rays + other.rays, self.lineality + other.lineality, dim=self.ambient_dim)

    def span_add(self, other: "Cone") -> "Cone":
        """self + span(other)."""
        return Cone(self.rays, self.lineality + tuple(other.generators), dim=self.ambient_dim)

    @cached_property
    def _faces(self) -> tuple["Cone", ...]:
        rays = self.rays
        inc = [frozenset(i for i, r in enumerate(rays) if dot(a, r) == 0) for a in self.inequalities]
        full = frozenset(range(len(rays)))
        seen = {full}
        stack = [full]
        while stack:
            s = stack.pop()
            for f in inc:
                t = s & f
                if t != s and t not in seen:
                    seen.add(t)
                    stack.append(t)
        seen.add(frozenset())
        faces = {Cone([rays[i] for i in sorted(s)], self.lineality, dim=self.ambient_dim) for s in seen}
        return tuple(sorted(faces))

    def faces(self) -> tuple["Cone", ...]:
        return self._faces

    def facets(self) -> list["Cone"]:
        return [f for f in self._faces if f.dim == self.dim - 1]

    def has_face(self, other: "Cone") -> bool:
        return other in set(self._faces)

    def facet_normal(self, facet: "Cone"):
        """Inequality normal of self vanishing on the facet."""
        for a in self.inequalities:
            if all(dot(a, g) == 0 for g in facet.generators):
                return a
        raise ValueError("not a facet")

    def linear_image(self, matrix) -> "Cone":
        rows = len(matrix)
        gens = [matvec(matrix, g) for g in self.rays]
        lin = [matvec(matrix, l) for l in self.lineality]
        return Cone(gens, lin, dim=rows)

    def to_json(self) -> dict:
        return {"rays": [list(r) for r in self.rays], "lineality": [list(l) for l in self.lineality]}

    @classmethod
    def from_json(cls, data: dict, dim: int) -> "Cone":
        return cls(data.get("rays", []), data.get("lineality", []), dim=dim)


class Fan:
    """A finite fan: closed under faces, deduplicated."""

    def __init__(self, cones: Iterable[Cone], dim: int):
        self.ambient_dim = dim
        allc = set()
        for c in cones:
            if c.ambient_dim != dim:
                raise ValueError("cone dimension mismatch")
            allc.update(c.faces())
        self.cones = tuple(sorted(allc))

    @cached_property
    def maximal(self) -> tuple[Cone, ...]:
        out = []
        for c in self.cones:
            if not any(d is not c and d.dim > c.dim and d.has_face(c) for d in self.cones):
                out.append(c)
        return tuple(out)

    def __contains__(self, cone: Cone) -> bool:
        return cone in set(self.cones)

    def __eq__(self, other) -> bool:
        return isinstance(other, Fan) and self.ambient_dim == other.ambient_dim and self.cones == other.cones

    def __hash__(self) -> int:
        return hash(self.cones)

    def __repr__(self) -> str:
        return f"Fan(maximal={list(self.maximal)})"

    def cones_of_dim(self, k: int) -> list[Cone]:
        return [c for c in self.cones if c.dim == k]

    @property
    def rays(self) -> list[tuple[int, ...]]:
        return [c.rays[0] for c in self.cones if c.dim == 1 and c.rays and not c.lineality]

    def cone_containing(self, *points) -> Cone | None:
        """Smallest cone containing all the points, if any."""
        for c in self.cones:
            if all(c.contains(p) for p in points):
                return c
        return None

    def is_complete(self) -> bool:
        return not self.completeness_defects()

    def completeness_defects(self) -> list[str]:
        d = self.ambient_dim
        out = []
        maxi = self.maximal
        for c in maxi:
            if c.dim != d:
                out.append(f"maximal cone {c} not full-dimensional")
        if out:
            return out
        if d == 0:
            return []
        for a, b in combinations(maxi, 2):
            if a.intersection(b).dim == d:
                out.append(f"cones {a} and {b} overlap")
        for a in maxi:
            for f in a.facets():
                nrm = a.facet_normal(f)
                others = [b for b in maxi if b is not a and b.has_face(f)]
                if len(others) != 1:
                    out.append(f"facet {f} of {a} is shared by {len(others)} other cones")
                    continue
                b = others[0]
                if not any(dot(nrm, g) < 0 for g in b.generators):
                    out.append(f"cones {a} and {b} lie on the same side of {f}")
        return out

    def is_fan(self) -> bool:
        for a, b in combinations(self.maximal, 2):
            i = a.intersection(b)
            if not (a.has_face(i) and b.has_face(i)):
                return False
        return True

    def to_json(self) -> dict:
        return {"dim": self.ambient_dim, "cones": [c.to_json() for c in self.maximal]}


def normal_fan(p: Polyhedron) -> Fan:
    """Inner normal fan of a polytope, in the dual of its tangent lattice."""
    if p.is_empty:
        raise ValueError("empty polyhedron")
    if not p.is_bounded:
        raise ValueError("not a polytope")
    _, _, local = p.chart()
    r = local.ambient_dim
    if r == 0:
        return Fan([Cone.zero(0)], 0)
    cones = []
    for v in local.vertices:
        normals = [tuple(w[i] - v[i] for i in range(r)) for w in local.vertices if w != v]
        cones.append(Cone.from_inequalities(normals, dim=r))
    return Fan(cones, r)


def localize_fan(fan: Fan, tau: Cone) -> Fan:
    """Fan {K + span(tau) : K in fan having tau as a face}."""
    if tau not in fan:
        raise ValueError("tau is not a cone of the fan")
    out = [c.span_add(tau) for c in fan.cones if c.has_face(tau)]
    return Fan(out, fan.ambient_dim)


def is_standard_simplex(p: Polyhedron) -> bool:
    if not p.is_bounded:
        raise ValueError("not a polytope")
    if not p.is_integral:
        raise ValueError("polytope is not integral")
    if len(p.vertices) != p.dim + 1:
        return False
    _, basis, local = p.chart()
    v0 = local.vertices[0]
    edges = [tuple(w[i] - v0[i] for i in range(local.ambient_dim)) for w in local.vertices[1:]]
    if not edges:
        return True
    from .linalg import det
    return abs(det(edges)) == 1


def is_elementary(p: Polyhedron) -> bool:
    if not p.is_bounded:
        raise ValueError("not a polytope")
    if not p.is_integral:
        raise ValueError("polytope is not integral")
    verts = {tuple(int(x) for x in v) for v in p.vertices}
    return set(p.lattice_points()) == verts
