"""Rational polyhedra and cones with both H- and V-representations."""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from .dd import cone_from_inequalities
from .linalg import (
    dot,
    frac_vec,
    is_integral,
    is_zero,
    primitive,
    rank,
    rref,
    saturated_basis,
    solve,
    transpose,
    vsub,
)


def _dual_generators(gens: Sequence[Sequence], dim: int):
    """Extreme rays and lineality of {a : a . g >= 0 for all g}."""
    return cone_from_inequalities(gens, dim)


class Polyhedron:
    """Pointed or general rational polyhedron {x : a.x >= b, c.x = d}.

    Construct with from_points / from_inequalities.  Vertices, rays and
    lineality form the V-representation; inequalities (a, b) mean a.x >= b.
    """

    __slots__ = ("ambient_dim", "vertices", "rays", "lineality", "inequalities", "equations",
                 "__dict__")

    def __init__(self, ambient_dim, vertices, rays, lineality, inequalities, equations):
        self.ambient_dim = ambient_dim
        self.vertices = tuple(sorted(tuple(frac_vec(v)) for v in vertices))
        self.rays = tuple(sorted(set(primitive(r) for r in rays)))
        self.lineality = tuple(lineality)
        self.inequalities = tuple(inequalities)
        self.equations = tuple(equations)

    # construction

    @classmethod
    def from_points(cls, vertices: Iterable[Sequence], rays: Iterable[Sequence] = (),
                    lineality: Iterable[Sequence] = (), dim: int | None = None) -> "Polyhedron":
        vertices = [frac_vec(v) for v in vertices]
        rays = [frac_vec(r) for r in rays if not is_zero(r)]
        lineality = [frac_vec(r) for r in lineality if not is_zero(r)]
        if dim is None:
            if not vertices:
                raise ValueError("a polyhedron needs at least one point")
            dim = len(vertices[0])
        gens = [v + (Fraction(1),) for v in vertices] + [r + (Fraction(0),) for r in rays]
        for l in lineality:
            gens.append(l + (Fraction(0),))
            gens.append(tuple(-x for x in l) + (Fraction(0),))
        drays, dlin = _dual_generators(gens, dim + 1)
        ineqs = []
        for r in drays:
            a, c = r[:dim], r[dim]
            if is_zero(a):
                continue
            ineqs.append((tuple(Fraction(x) for x in a), Fraction(-c)))
        eqs = []
        if dlin:
            red, _ = rref([l for l in dlin], dim + 1)
            for row in red:
                a, c = row[:dim], row[dim]
                eqs.append((tuple(primitive(a)), -c * _scale(a)))
        p = cls._from_h(dim, ineqs, eqs)
        return p

    @classmethod
    def from_inequalities(cls, inequalities: Iterable[tuple], equations: Iterable[tuple] = (),
                          dim: int | None = None) -> "Polyhedron":
        inequalities = [(frac_vec(a), Fraction(b)) for a, b in inequalities]
        equations = [(frac_vec(a), Fraction(b)) for a, b in equations]
        if dim is None:
            dim = len((inequalities or equations)[0][0])
        return cls._from_h(dim, inequalities, equations)

    @classmethod
    def _from_h(cls, dim, ineqs, eqs):
        rows = [a + (-b,) for a, b in ineqs]
        for a, b in eqs:
            rows.append(a + (-b,))
            rows.append(tuple(-x for x in a) + (b,))
        rows.append(tuple([Fraction(0)] * dim) + (Fraction(1),))
        crays, clin = cone_from_inequalities(rows, dim + 1)
        vertices, rays = [], []
        for r in crays:
            t = r[dim]
            if t > 0:
                vertices.append(tuple(Fraction(x, t) for x in r[:dim]))
            else:
                rays.append(r[:dim])
        if clin and any(l[dim] != 0 for l in clin):
            raise AssertionError("homogenization lineality must be horizontal")
        lineality = [tuple(l[:dim]) for l in clin]
        if not vertices and not lineality:
            return _Empty(dim)
        if not vertices:
            # non-pointed: pick a point on the lineality-quotient apex
            vertices = [_feasible_point(dim, ineqs, eqs)]
        # canonical irredundant H-rep from the V-rep
        return cls._canonical(dim, vertices, rays, lineality)

    @classmethod
    def _canonical(cls, dim, vertices, rays, lineality):
        gens = [tuple(frac_vec(v)) + (Fraction(1),) for v in vertices]
        gens += [tuple(frac_vec(r)) + (Fraction(0),) for r in rays]
        for l in lineality:
            gens.append(tuple(frac_vec(l)) + (Fraction(0),))
            gens.append(tuple(-Fraction(x) for x in l) + (Fraction(0),))
        drays, dlin = _dual_generators(gens, dim + 1)
        ineqs = []
        for r in drays:
            a, c = r[:dim], r[dim]
            if is_zero(a):
                continue
            ineqs.append((tuple(Fraction(x) for x in a), Fraction(-c)))
        eqs = []
        if dlin:
            red, _ = rref(dlin, dim + 1)
            for row in red:
                eqs.append((tuple(row[:dim]), -row[dim]))
        lin_basis = []
        if lineality:
            red, _ = rref(lineality, dim)
            lin_basis = [tuple(primitive(r)) for r in red]
        return cls(dim, vertices, rays, lin_basis, sorted(ineqs), sorted(eqs))

    # basic queries

    @property
    def is_empty(self) -> bool:
        return False

    @cached_property
    def dim(self) -> int:
        if not self.vertices:
            return -1
        v0 = self.vertices[0]
        vecs = [vsub(v, v0) for v in self.vertices[1:]] + [frac_vec(r) for r in self.rays]
        vecs += [frac_vec(l) for l in self.lineality]
        return rank(vecs) if vecs else 0

    @property
    def is_bounded(self) -> bool:
        return not self.rays and not self.lineality

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_integral(self) -> bool:
        return all(is_integral(v) for v in self.vertices)

    def contains(self, x) -> bool:
        x = frac_vec(x)
        return all(dot(a, x) >= b for a, b in self.inequalities) and all(
            dot(a, x) == b for a, b in self.equations)

    def contains_direction(self, r) -> bool:
        r = frac_vec(r)
        return all(dot(a, r) >= 0 for a, _ in self.inequalities) and all(
            dot(a, r) == 0 for a, _ in self.equations)

    def relative_interior_contains(self, x) -> bool:
        x = frac_vec(x)
        if not self.contains(x):
            return False
        return all(dot(a, x) > b for a, b in self.inequalities)

    @cached_property
    def interior_point(self) -> tuple[Fraction, ...]:
        """A relative-interior point (barycenter of vertices plus rays)."""
        n = len(self.vertices)
        pt = tuple(sum((v[i] for v in self.vertices), Fraction(0)) / n for i in range(self.ambient_dim))
        for r in self.rays:
            pt = tuple(p + x for p, x in zip(pt, r))
        return pt

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polyhedron):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.vertices == other.vertices
                and self.rays == other.rays and self.inequalities == other.inequalities
                and self.equations == other.equations)

    def __hash__(self) -> int:
        return hash((self.vertices, self.rays, self.inequalities, self.equations))

    def __repr__(self) -> str:
        vs = [tuple(str(x) for x in v) for v in self.vertices]
        return f"Polyhedron(vertices={vs}, rays={list(self.rays)})"

    # faces

    @cached_property
    def _incidence(self):
        vin = []
        for a, b in self.inequalities:
            vin.append((frozenset(i for i, v in enumerate(self.vertices) if dot(a, v) == b),
                        frozenset(i for i, r in enumerate(self.rays) if dot(a, r) == 0)))
        return vin

    def faces(self) -> list["Polyhedron"]:
        """All nonempty faces including self, sorted by dimension then vertices."""
        if self.lineality:
            raise ValueError("face enumeration needs a pointed polyhedron")
        full = (frozenset(range(len(self.vertices))), frozenset(range(len(self.rays))))
        seen = {full}
        stack = [full]
        while stack:
            vs, rs = stack.pop()
            for fv, fr in self._incidence:
                nv, nr = vs & fv, rs & fr
                if not nv or (nv, nr) == (vs, rs):
                    continue
                if (nv, nr) not in seen:
                    seen.add((nv, nr))
                    stack.append((nv, nr))
        out = []
        for vs, rs in seen:
            face = Polyhedron.from_points([self.vertices[i] for i in sorted(vs)],
                                          [self.rays[i] for i in sorted(rs)], dim=self.ambient_dim)
            out.append(face)
        # incidence intersections can repeat a face with a smaller ray set; dedupe
        uniq = {}
        for f in out:
            uniq[(f.vertices, f.rays)] = f
        return sorted(uniq.values(), key=lambda f: (f.dim, f.vertices, f.rays))

    def facets(self) -> list["Polyhedron"]:
        return [f for f in self.faces() if f.dim == self.dim - 1]

    # lattice geometry

    @cached_property
    def direction_vectors(self) -> list[tuple[Fraction, ...]]:
        v0 = self.vertices[0]
        vecs = [vsub(v, v0) for v in self.vertices[1:]] + [frac_vec(r) for r in self.rays]
        return [v for v in vecs if not is_zero(v)] + [frac_vec(l) for l in self.lineality]

    @cached_property
    def lattice_basis(self) -> list[tuple[int, ...]]:
        """Basis of the saturated lattice of the tangent space."""
        return saturated_basis(self.direction_vectors, self.ambient_dim)

    def chart(self):
        """(origin, basis, polyhedron in Z^dim) for the affine span lattice."""
        if not self.is_integral:
            raise ValueError("chart needs an integral polyhedron")
        origin = self.vertices[0]
        basis = self.lattice_basis
        bt = transpose(basis) if basis else ()

        def coords(x):
            if not basis:
                return ()
            c = solve(bt, vsub(x, origin))
            if c is None:
                raise ValueError("point outside the affine span")
            return c

        def dcoords(r):
            if not basis:
                return ()
            return solve(bt, frac_vec(r))

        local = Polyhedron.from_points([coords(v) for v in self.vertices],
                                       [dcoords(r) for r in self.rays], dim=len(basis))
        return origin, basis, local

    def lattice_points(self) -> list[tuple[int, ...]]:
        if not self.is_bounded:
            raise ValueError("not a polytope")
        lo = [min(v[i] for v in self.vertices) for i in range(self.ambient_dim)]
        hi = [max(v[i] for v in self.vertices) for i in range(self.ambient_dim)]
        ranges = [range(_ceil(a), _floor(b) + 1) for a, b in zip(lo, hi)]
        return [p for p in product(*ranges) if self.contains(p)]

    def translate(self, t) -> "Polyhedron":
        t = frac_vec(t)
        return Polyhedron.from_points([tuple(a + b for a, b in zip(v, t)) for v in self.vertices],
                                      self.rays, self.lineality, dim=self.ambient_dim)

    def to_json(self) -> dict:
        return {"vertices": [[_num(x) for x in v] for v in self.vertices],
                "rays": [list(r) for r in self.rays]}

    @classmethod
    def from_json(cls, data: dict) -> "Polyhedron":
        verts = data["vertices"]
        dim = len(verts[0]) if verts else None
        return cls.from_points(verts, data.get("rays", []), dim=dim)


class _Empty(Polyhedron):
    def __init__(self, dim):
        super().__init__(dim, [], [], [], [], [])

    @property
    def is_empty(self) -> bool:
        return True


def _scale(a) -> Fraction:
    """Factor by which primitive() rescales a."""
    p = primitive(a)
    for x, y in zip(a, p):
        if y != 0:
            return Fraction(y) / Fraction(x)
    return Fraction(1)


def _feasible_point(dim, ineqs, eqs):
    # lineality-only polyhedra in this package always contain the origin-shift from equations
    rows = [a for a, _ in eqs]
    rhs = [b for _, b in eqs]
    x = solve(rows, rhs) if rows else tuple([Fraction(0)] * dim)
    if x is None:
        raise ValueError("infeasible equations")
    if not all(dot(a, x) >= b for a, b in ineqs):
        raise ValueError("cannot locate a point of a non-pointed polyhedron")
    return x


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _num(x: Fraction):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else str(x)


def simplex(dim: int) -> Polyhedron:
    pts = [tuple([0] * dim)] + [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    return Polyhedron.from_points(pts)
