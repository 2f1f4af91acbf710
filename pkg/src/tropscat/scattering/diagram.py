"""Walls, slabs and scattering diagrams, with their JSON form."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from ..algebra.group import VertexGroupElement
from ..algebra.laurent import Laurent, RingElement, log_one_plus
from ..algebra.lie import LieElement, is_divergence_free
from ..algebra.slab import SlabUV
from ..algebra.text import _split_direction, format_lie
from .geometry import Support, _num, fdot, normalize_covector

PLANE = "plane"


class DiagramError(ValueError):
    pass


def _lie_terms(log: LieElement) -> list[dict]:
    out = []
    for (j, m), n in log.sorted_terms():
        c, p = _split_direction(n)
        out.append({"q": j, "m": list(m), "n": list(p), "coeff": _num(c)})
    return out


def _function_log(ring: Laurent, terms, n) -> LieElement:
    f = RingElement(ring, {(j, tuple(m)): Fraction(c) for (j, m), c in terms})
    return LieElement.times_function(log_one_plus(f), n)


@dataclass(frozen=True)
class Wall:
    id: str
    cell: str
    support: Support
    normal: tuple
    log: LieElement
    function: tuple | None = None  # (((j, m), c), ...), n) with log = log(1 + sum c q^j z^m) d_n

    def __post_init__(self):
        d = self.support.primitive_direction
        if fdot(self.normal, d) != 0 or not any(self.normal):
            raise DiagramError(f"wall {self.id}: normal {tuple(self.normal)} is not orthogonal to its support")
        if self.log.q_order() is not None and self.log.q_order() < 1:
            raise DiagramError(f"wall {self.id}: logarithm is not divisible by q")
        if not is_divergence_free(self.log):
            raise DiagramError(f"wall {self.id}: logarithm is not divergence-free")

    @property
    def factor(self) -> VertexGroupElement:
        return VertexGroupElement.exp(self.log)

    def with_order(self, k: int) -> "Wall":
        ring = self.log.ring.with_order(k)
        if self.function is not None:
            terms, n = self.function
            return replace(self, log=_function_log(ring, terms, n))
        return replace(self, log=LieElement(ring, self.log.terms))

    def oriented(self) -> tuple:
        """(normal, log) with the normal's first nonzero entry positive."""
        a, s = normalize_covector(self.normal)
        return a, (self.log if s == 1 else -self.log)

    def to_json(self) -> dict:
        out = {"id": self.id, "cell": self.cell, "support": self.support.to_json(),
               "normal": list(self.normal)}
        if self.function is not None:
            terms, n = self.function
            out["function"] = {"terms": [{"q": j, "m": list(m), "coeff": _num(c)} for (j, m), c in terms],
                               "n": [_num(x) for x in n]}
        else:
            out["log_terms"] = _lie_terms(self.log)
        return out

    def describe(self) -> str:
        return f"{self.id} on {self.support.describe()}: {format_lie(self.log)}"


@dataclass(frozen=True)
class Slab:
    """Component of a codimension one cell rho minus the singular locus, at the vertex v."""

    id: str
    vertex: str
    cell: str
    function_id: str
    support: Support | None
    normal: tuple  # d_rho, positive on the sigma_plus side
    kink: int
    f: tuple  # sorted ((m, coeff), ...) in the chart lattice of rho
    sides: tuple = ()

    @property
    def rank(self) -> int:
        return len(self.f[0][0]) if self.f else 0

    def fpoly(self) -> dict:
        return dict(self.f)

    def ring(self, order: int) -> SlabUV:
        return SlabUV.make(self.rank, self.kink, self.fpoly(), order)

    def is_identity(self) -> bool:
        return all(not any(m) for m, _ in self.f)

    def to_json(self) -> dict:
        out = {"id": self.id, "vertex": self.vertex, "cell": self.cell, "function": self.function_id,
               "normal": list(self.normal), "kink": self.kink,
               "terms": [{"m": list(m), "coeff": _num(c)} for m, c in self.f]}
        if self.support is not None:
            out["support"] = self.support.to_json()
        if self.sides:
            out["sides"] = list(self.sides)
        return out

    @classmethod
    def from_json(cls, d: dict) -> "Slab":
        f = tuple(sorted((tuple(int(x) for x in t["m"]), Fraction(t["coeff"])) for t in d["terms"]))
        sup = Support.from_json(d["support"]) if "support" in d else None
        return cls(str(d["id"]), str(d["vertex"]), str(d["cell"]), str(d.get("function", "")), sup,
                   tuple(int(x) for x in d["normal"]), int(d.get("kink", 1)), f, tuple(d.get("sides", ())))


@dataclass
class ScatteringDiagram:
    rank: int
    order: int
    walls: tuple = ()
    slabs: tuple = ()
    singular_points: tuple = ()  # ((cell, point), ...)
    manifold: object = None
    name: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def ring(self) -> Laurent:
        return Laurent(self.rank, self.order)

    def wall(self, wid: str) -> Wall:
        for w in self.walls:
            if w.id == wid:
                return w
        raise KeyError(wid)

    def slab(self, sid: str) -> Slab:
        for s in self.slabs:
            if s.id == sid:
                return s
        raise KeyError(sid)

    def regions(self) -> dict:
        """Maximal cells (in their charts) carrying walls; the whole plane without a manifold."""
        m = self.manifold
        if m is None:
            return {PLANE: None}
        return {s: m.cells[s].poly for s in m.maximal}

    def with_order(self, k: int) -> "ScatteringDiagram":
        walls = tuple(w for w in (w.with_order(k) for w in self.walls) if w.log)
        return replace(self, order=k, walls=walls)

    def truncate(self, j: int) -> "ScatteringDiagram":
        if j > self.order:
            raise DiagramError("truncation order exceeds the diagram order")
        return self.with_order(j)

    def add_walls(self, new: list) -> "ScatteringDiagram":
        """Insert walls, multiplying factors of walls with equal support in the same cell."""
        walls = list(self.walls)
        index = {(w.cell, w.support.key()): i for i, w in enumerate(walls)}
        for w in new:
            key = (w.cell, w.support.key())
            if key in index:
                old = walls[index[key]]
                a_old, log_old = old.oriented()
                a_new, log_new = w.oriented()
                if a_old != a_new:
                    raise DiagramError("walls with equal support have different normals")
                log = log_old + log_new
                if old.normal != a_old:
                    log = -log
                walls[index[key]] = replace(old, log=log, function=None)
            else:
                index[key] = len(walls)
                walls.append(replace(w, id=_fresh_id(walls)))
        walls = [w for w in walls if w.log]
        return replace(self, walls=tuple(walls))

    def canonical(self) -> tuple:
        merged: dict = {}
        for w in self.walls:
            key = (w.cell, w.support.key())
            a, log = w.oriented()
            if key in merged:
                merged[key] = (a, merged[key][1] + log)
            else:
                merged[key] = (a, log)
        out = []
        for key in sorted(merged, key=repr):
            a, log = merged[key]
            if log:
                out.append((key, a, tuple(log.sorted_terms())))
        slabs = tuple(sorted((s.vertex, s.cell, s.f) for s in self.slabs))
        return self.rank, tuple(out), slabs

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScatteringDiagram):
            return NotImplemented
        return self.canonical() == other.canonical()

    def to_json(self) -> dict:
        out = {"name": self.name, "rank": self.rank, "order": self.order,
               "walls": [w.to_json() for w in self.walls]}
        if self.slabs:
            out["slabs"] = [s.to_json() for s in self.slabs]
        if self.singular_points:
            out["singular_points"] = [{"cell": c, "point": [_num(x) for x in p]} for c, p in self.singular_points]
        if self.manifold is not None:
            out["manifold"] = self.manifold.to_json()
        if self.meta:
            out["meta"] = self.meta
        return out


def _fresh_id(walls) -> str:
    used = {w.id for w in walls}
    i = len(walls)
    while f"W{i}" in used:
        i += 1
    return f"W{i}"


def _need(d, key, where):
    if key not in d:
        raise DiagramError(f"{where}: missing field '{key}'")
    return d[key]


def wall_from_json(d: dict, ring: Laurent, where: str = "wall") -> Wall:
    try:
        sup = Support.from_json(_need(d, "support", where))
    except (KeyError, TypeError, ValueError) as e:
        raise DiagramError(f"{where}.support: {e}") from None
    normal = tuple(int(x) for x in _need(d, "normal", where))
    if len(normal) != ring.rank or len(sup.apex) != ring.rank:
        raise DiagramError(f"{where}: dimension does not match rank {ring.rank}")
    function = None
    if "function" in d:
        fd = d["function"]
        terms = tuple(sorted(((int(t.get("q", 0)), tuple(int(x) for x in t["m"])), Fraction(t.get("coeff", 1)))
                             for t in _need(fd, "terms", where + ".function")))
        n = tuple(Fraction(x) for x in _need(fd, "n", where + ".function"))
        function = (terms, n)
        log = _function_log(ring, terms, n)
    else:
        log = LieElement(ring, {})
        for i, t in enumerate(_need(d, "log_terms", where)):
            try:
                log = log + LieElement.term(ring, Fraction(t.get("coeff", 1)), int(_need(t, "q", where)),
                                            tuple(int(x) for x in _need(t, "m", where)),
                                            tuple(Fraction(x) for x in _need(t, "n", where)))
            except (TypeError, ValueError) as e:
                raise DiagramError(f"{where}.log_terms[{i}]: {e}") from None
    return Wall(str(d.get("id", "")), str(d.get("cell", PLANE)), sup, normal, log, function)


def diagram_from_json(data: dict, order: int | None = None) -> ScatteringDiagram:
    from ..manifold.complex import manifold_from_json

    rank = int(_need(data, "rank", "diagram"))
    k = int(order if order is not None else data.get("order", 1))
    if k < 1:
        raise DiagramError("diagram order must be at least 1")
    ring = Laurent(rank, k)
    walls = []
    for i, w in enumerate(data.get("walls", [])):
        wall = wall_from_json(w, ring, f"walls[{i}]")
        if not wall.id:
            wall = replace(wall, id=f"W{i}")
        walls.append(wall)
    slabs = tuple(Slab.from_json(s) for s in data.get("slabs", []))
    sing = tuple((str(p["cell"]), tuple(Fraction(x) for x in p["point"])) for p in data.get("singular_points", []))
    m = manifold_from_json(data["manifold"]) if "manifold" in data else None
    ids = [w.id for w in walls] + [s.id for s in slabs]
    if len(set(ids)) != len(ids):
        raise DiagramError("duplicate wall or slab ids")
    return ScatteringDiagram(rank, k, tuple(walls), slabs, sing, m, str(data.get("name", "")),
                             dict(data.get("meta", {})))


def line_wall(ring: Laurent, wid: str, m, n, c=1, j: int = 1, point=None) -> Wall:
    """Full line through point in the direction of m with log = log(1 + c q^j z^m) d_n."""
    from .geometry import rot90

    point = point if point is not None else (0,) * ring.rank
    sup = Support.line(point, m)
    normal, _ = normalize_covector(rot90(sup.direction))
    terms = (((j, tuple(m)), Fraction(c)),)
    return Wall(wid, PLANE, sup, normal, _function_log(ring, terms, tuple(Fraction(x) for x in n)),
                (terms, tuple(Fraction(x) for x in n)))
