"""Joints and chambers of a planar scattering diagram, by exact line-arrangement sweeps."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..lattice.polyhedron import Polyhedron
from .diagram import PLANE, DiagramError, ScatteringDiagram
from .geometry import Support, angle_key, fdot, intersect_lines, rot90


@dataclass(frozen=True)
class Joint:
    point: tuple
    kind: str  # interior | singular | slab | boundary
    incident: tuple  # ((direction, (wall or slab ids)), ...) anticlockwise from angle 0
    cell: str = PLANE
    steps: tuple = field(default=(), compare=False, repr=False)

    @property
    def key(self):
        return tuple(self.point)

    def to_json(self) -> dict:
        return {"point": [str(x) if Fraction(x).denominator != 1 else int(x) for x in self.point],
                "kind": self.kind, "cell": self.cell,
                "incident": [{"direction": list(d), "ids": list(ids)} for d, ids in self.incident]}


@dataclass(frozen=True)
class Crossing:
    """Passing from chamber `left` to chamber `right` through the listed items, in that direction."""

    left: str
    right: str
    items: tuple  # ((kind, id, sign), ...) kind in wall | slab | facet
    point: tuple


@dataclass
class Chamber:
    id: str
    cell: str
    point: tuple  # a representative interior point


@dataclass
class Decomposition:
    joints: list
    chambers: list
    crossings: list

    def chamber(self, cid: str) -> Chamber:
        for c in self.chambers:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def adjacency(self) -> dict:
        out: dict = {c.id: set() for c in self.chambers}
        for x in self.crossings:
            out[x.left].add(x.right)
            out[x.right].add(x.left)
        return {k: sorted(v) for k, v in out.items()}

    def to_json(self) -> dict:
        return {"joints": [j.to_json() for j in self.joints],
                "chambers": [{"id": c.id, "cell": c.cell,
                              "point": [str(x) if x.denominator != 1 else int(x) for x in c.point]}
                             for c in self.chambers],
                "adjacency": self.adjacency()}


def _separators(d: ScatteringDiagram):
    """(kind, id, support, normal, cell) for walls, slabs and codimension one cells of the manifold."""
    out = []
    for w in d.walls:
        out.append(("wall", w.id, w.support, w.normal, w.cell))
    for s in d.slabs:
        if s.support is None:
            raise DiagramError(f"slab {s.id} has no planar support")
        out.append(("slab", s.id, s.support, s.normal, s.cell))
    m = d.manifold
    if m is not None:
        for rho in m.cells_of_dim(m.dim - 1):
            poly = face_image(m, rho, m.star(rho)[0])
            verts = [tuple(Fraction(x) for x in v) for v in poly.vertices]
            if len(verts) == 2:
                sup = Support.segment(verts[0], verts[1])
            elif poly.rays:
                sup = Support.ray(verts[0], poly.rays[0])
            else:
                continue
            out.append(("facet", rho, sup, None, rho))
    return out


def face_image(m, tau: str, sigma: str):
    """Polyhedron of a face tau drawn in the chart of the maximal cell sigma."""
    if tau == sigma:
        return m.cells[sigma].poly
    a = m.arrows[(tau, sigma)]
    poly = m.cells[tau].poly
    return Polyhedron.from_points([a(v) for v in poly.vertices], [a.linear(r) for r in poly.rays],
                                  dim=m.cells[sigma].dim)


def carrier_face(m, sigma: str, x) -> str:
    """Smallest face of sigma whose image contains x."""
    best = None
    for t in m.faces(sigma):
        if face_image(m, t, sigma).contains(x):
            if best is None or m.cells[t].dim < m.cells[best].dim:
                best = t
    if best is None:
        raise DiagramError(f"point outside {sigma}")
    return best


def _check_planar(d: ScatteringDiagram):
    if d.rank != 2:
        raise DiagramError("decomposition is implemented for planar diagrams (rank 2) only")
    if d.manifold is not None and d.manifold.dim != 2:
        raise DiagramError("decomposition is implemented for two-dimensional manifolds only")


def decompose(d: ScatteringDiagram) -> Decomposition:
    _check_planar(d)
    check_supports(d)
    seps = _separators(d)
    joints = _joints(d, seps)
    chambers, crossings = _chambers(d, seps)
    return Decomposition(joints, chambers, crossings)


def find_joints(d: ScatteringDiagram) -> list:
    _check_planar(d)
    check_supports(d)
    return _joints(d, _separators(d))


def param_interval(poly, apex, direction):
    """(lo, hi) with apex + t direction in poly exactly for lo <= t <= hi (None = unbounded); None if empty."""
    lo, hi = None, None
    for a, b in poly.inequalities:
        rate = fdot(a, direction)
        slack = fdot(a, apex) - b
        if rate == 0:
            if slack < 0:
                return None
            continue
        t = -slack / rate
        if rate > 0:
            lo = t if lo is None else max(lo, t)
        else:
            hi = t if hi is None else min(hi, t)
    for a, b in poly.equations:
        if fdot(a, direction) != 0 or fdot(a, apex) != b:
            return None
    if lo is not None and hi is not None and lo > hi:
        return None
    return lo, hi


def check_supports(d: ScatteringDiagram):
    """Every wall lies in its carrier cell and meets the cell's interior."""
    if d.manifold is None:
        for w in d.walls:
            if w.cell != PLANE:
                raise DiagramError(f"wall {w.id} names cell {w.cell} but the diagram has no manifold")
        return
    regions = d.regions()
    for w in d.walls:
        if w.cell not in regions:
            raise DiagramError(f"wall {w.id}: {w.cell} is not a maximal cell")
        sup = w.support
        iv = param_interval(regions[w.cell], sup.apex, sup.direction)
        lo_need = None if sup.kind == "line" else Fraction(0)
        hi_need = Fraction(1) if sup.kind == "segment" else None
        if iv is None or not _within(iv, lo_need, hi_need):
            raise DiagramError(f"wall {w.id} leaves its cell {w.cell}")
        if any(fdot(a, sup.direction) == 0 and fdot(a, sup.apex) == b for a, b in regions[w.cell].inequalities):
            raise DiagramError(f"wall {w.id} does not meet the interior of {w.cell}")


def _within(iv, lo_need, hi_need) -> bool:
    lo, hi = iv
    if lo is not None and (lo_need is None or lo > lo_need):
        return False
    if hi is not None and (hi_need is None or hi < hi_need):
        return False
    return True


def sector_cell(d: ScatteringDiagram, x, w) -> str | None:
    """The maximal cell entered from x in the direction w (w not along any cell boundary)."""
    regions = d.regions()
    if PLANE in regions:
        return PLANE
    for name in sorted(regions):
        poly = regions[name]
        if not poly.contains(x):
            continue
        if all(fdot(a, w) > 0 for a, b in poly.inequalities if fdot(a, x) == b):
            return name
    return None


def _sector_direction(a, b, single: bool):
    if single:
        return tuple(-c for c in a)
    cross = a[0] * b[1] - a[1] * b[0]
    if cross > 0:
        return tuple(p + q for p, q in zip(a, b))
    if cross == 0:
        return rot90(a)
    return tuple(-(p + q) for p, q in zip(a, b))


@dataclass(frozen=True)
class Step:
    """One half-ray crossed by the anticlockwise loop around a point."""

    direction: tuple
    items: tuple  # ((kind, id, sign), ...); sign +1 when the loop moves along the item's normal
    before: str | None
    after: str | None


def loop_around(d: ScatteringDiagram, x, seps=None) -> list[Step]:
    """Half-rays of walls, slabs and cell boundaries at x, anticlockwise starting from angle 0."""
    seps = _separators(d) if seps is None else seps
    inc: dict = {}
    for kind, sid, sup, normal, _ in seps:
        if sup.contains(x):
            for h in sup.half_rays_at(x):
                inc.setdefault(h, []).append((kind, sid, normal))
    rays = sorted(inc, key=angle_key)
    if not rays:
        return []
    cells = []
    for i, h in enumerate(rays):
        nxt = rays[(i + 1) % len(rays)]
        cells.append(sector_cell(d, x, _sector_direction(h, nxt, len(rays) == 1)))
    steps = []
    for i, h in enumerate(rays):
        across = rot90(h)
        items = []
        for kind, sid, normal in sorted(inc[h], key=lambda t: (t[0], t[1])):
            sign = 1 if normal is None else (1 if fdot(normal, across) > 0 else -1)
            items.append((kind, sid, sign))
        steps.append(Step(h, tuple(items), cells[i - 1], cells[i]))
    return steps


def _joints(d: ScatteringDiagram, seps) -> list[Joint]:
    active = [s for s in seps if s[0] != "facet"]
    points: set = set()
    for i, a in enumerate(active):
        for b in active[i + 1:]:
            ka, kb = a[2].line_key(), b[2].line_key()
            if ka == kb:
                continue
            x = intersect_lines(ka[0], ka[1], kb[0], kb[1])
            if x is not None and a[2].contains(x) and b[2].contains(x):
                points.add(x)
        if a[0] == "wall":
            for e in a[2].endpoints():
                points.add(tuple(e))
    singular = {tuple(p): c for c, p in d.singular_points}
    out = []
    for x in sorted(points | set(singular)):
        steps = loop_around(d, x, seps)
        if any(s.after is None for s in steps):
            continue  # on the boundary of B
        kinds = {k for s in steps for k, _, _ in s.items}
        if x in singular:
            kind = "singular"
        elif "slab" in kinds:
            kind = "slab"
        elif "facet" in kinds:
            kind = "boundary"
        else:
            kind = "interior"
        incident = tuple((s.direction, tuple(i for k, i, _ in s.items if k != "facet"))
                         for s in steps if any(k != "facet" for k, _, _ in s.items))
        cell = singular.get(x) or _cell_at(d, x)
        out.append(Joint(x, kind, incident, cell, tuple(steps)))
    return out


def _cell_at(d: ScatteringDiagram, x) -> str:
    regions = d.regions()
    if PLANE in regions:
        return PLANE
    hits = [name for name, poly in sorted(regions.items()) if poly.contains(x)]
    return hits[0] if len(hits) == 1 else ",".join(hits)


def _chambers(d: ScatteringDiagram, seps):
    lines: dict = {}
    for s in seps:
        key = s[2].line_key()
        lines.setdefault(key, []).append(s)
    keys = sorted(lines)
    regions = d.regions()

    def region(x):
        if PLANE in regions:
            return PLANE
        for name in sorted(regions):
            poly = regions[name]
            if poly.contains(x):
                return name
        return None

    def cell_key(x):
        return tuple((fdot(a, x) > b) - (fdot(a, x) < b) for a, b in keys)

    parent: dict = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    samples: dict = {}
    edges = []
    if not keys:
        origin = (Fraction(0),) * 2
        samples[()] = origin
        find(())
    for key in keys:
        a, b = key
        direction = (a[1], -a[0])
        base = _point_on(a, b)
        ts = set()
        for other in keys:
            if other == key:
                continue
            x = intersect_lines(a, b, other[0], other[1])
            if x is not None:
                ts.add(_param(base, direction, x))
        for s in lines[key]:
            for e in s[2].endpoints():
                ts.add(_param(base, direction, e))
        ts = sorted(ts)
        mids = []
        if not ts:
            mids.append(Fraction(0))
        else:
            mids.append(ts[0] - 1)
            mids.extend((p + q) / 2 for p, q in zip(ts, ts[1:]))
            mids.append(ts[-1] + 1)
        for t in mids:
            mid = tuple(p + t * q for p, q in zip(base, direction))
            eps = _epsilon(mid, a, keys, key)
            lo = tuple(p - eps * q for p, q in zip(mid, a))
            hi = tuple(p + eps * q for p, q in zip(mid, a))
            klo, khi = cell_key(lo), cell_key(hi)
            for k, pt in ((klo, lo), (khi, hi)):
                if k not in samples or pt < samples[k]:
                    samples[k] = pt
                find(k)
            covering = [s for s in lines[key] if s[2].contains(mid)]
            if not covering:
                union(klo, khi)
            else:
                edges.append((klo, khi, covering, a, mid))
    # drop cells outside the manifold; name chambers by region and lexicographically least sample
    classes: dict = {}
    for k, pt in samples.items():
        r = region(pt)
        if r is None:
            continue
        root = find(k)
        best = classes.get(root)
        if best is None or (r, pt) < best:
            classes[root] = (r, pt)
    order = sorted(classes.items(), key=lambda kv: (kv[1][0], kv[1][1]))
    names = {root: f"C{i}" for i, (root, _) in enumerate(order)}
    chambers = [Chamber(names[root], r, pt) for root, (r, pt) in order]
    crossings: dict = {}
    for klo, khi, covering, a, mid in edges:
        lo, hi = find(klo), find(khi)
        if lo not in names or hi not in names:
            continue
        items = []
        for kind, sid, _, normal, _ in sorted(covering, key=lambda s: (s[0], s[1])):
            sign = 1 if normal is None else (1 if fdot(normal, a) > 0 else -1)
            items.append((kind, sid, sign))
        key = (names[lo], names[hi], tuple(items))
        if key not in crossings or mid < crossings[key].point:
            crossings[key] = Crossing(names[lo], names[hi], tuple(items), mid)
    return chambers, sorted(crossings.values(), key=lambda c: (c.left, c.right, c.items))


def _point_on(a, b):
    if a[0]:
        return (Fraction(b, 1) / a[0], Fraction(0))
    return (Fraction(0), Fraction(b, 1) / a[1])


def _param(base, direction, x) -> Fraction:
    diff = [Fraction(p) - q for p, q in zip(x, base)]
    return fdot(diff, direction) / fdot(direction, direction)


def _epsilon(mid, a, keys, own) -> Fraction:
    eps = Fraction(1)
    for other in keys:
        if other == own:
            continue
        a2, b2 = other
        val = abs(fdot(a2, mid) - b2)
        rate = abs(fdot(a2, a))
        if rate and val:
            eps = min(eps, val / (2 * rate))
    return eps


def angle_cmp_dirs(a, b, w) -> str:
    """Where w sits in the anticlockwise sector from a to b: 'inside', 'from', 'to' or 'outside'."""
    w = tuple(w)
    if w == tuple(a):
        return "from"
    if w == tuple(b):
        return "to"
    if tuple(a) == tuple(b):
        return "inside"
    ka, kb, kw = angle_key(a), angle_key(b), angle_key(w)
    if ka < kb:
        return "inside" if ka < kw < kb else "outside"
    return "inside" if kw > ka or kw < kb else "outside"
