"""Path-ordered products, consistency at joints, order-by-order completion and chamber paths."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from ..algebra.group import VertexGroupElement, order_part
from ..algebra.laurent import Laurent, RingElement
from ..algebra.lie import LieElement
from ..algebra.slab import SlabElement, cross_slab
from ..algebra.text import format_lie
from ..lattice.linalg import identity, inverse, matmul, matvec, primitive, transpose, vecmat
from .decompose import (
    Decomposition,
    Joint,
    angle_cmp_dirs,
    carrier_face,
    decompose,
    find_joints,
    param_interval,
    sector_cell,
)
from .diagram import PLANE, DiagramError, ScatteringDiagram, Slab, Wall
from .geometry import Support, fdot, normalize_covector, rot90


def worker_count() -> int:
    raw = os.environ.get("TROPSCAT_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


# chart changes between maximal cells


def chart_change(m, sigma: str, sigma2: str, via: str) -> tuple | None:
    """Linear map Lambda_sigma -> Lambda_sigma2 through the vertices of the common face `via`.

    None when the vertices disagree, i.e. the face carries monodromy.
    """
    out = None
    for v in m.vertices(via):
        mat = matmul(inverse(m.vertex_transition(v, sigma2)), m.vertex_transition(v, sigma))
        mat = tuple(tuple(Fraction(x) for x in row) for row in mat)
        if out is None:
            out = mat
        elif mat != out:
            return None
    return out


def _crossing_face(m, before: str, after: str, facet: str, x) -> str:
    """The face whose vertex charts relate the two cells at x: a vertex if x is one, else the facet."""
    t = carrier_face(m, before, x)
    return t if m.cells[t].dim == 0 else facet


def transport_lie(theta: LieElement, a) -> LieElement:
    """Push z^m d_n forward by the lattice map a: m -> a m, n -> a^-T n."""
    if a is None or a == identity(theta.ring.rank):
        return theta
    a_inv_t = transpose(inverse(a))
    terms = {}
    for (j, mv), n in theta.terms.items():
        m2 = tuple(int(x) for x in matvec(a, mv))
        terms[(j, m2)] = tuple(Fraction(x) for x in matvec(a_inv_t, n))
    return LieElement(theta.ring, terms)


def transport_function(x: RingElement, a) -> RingElement:
    if a is None or a == identity(x.ring.rank):
        return x
    return RingElement(x.ring, {(j, tuple(int(c) for c in matvec(a, mv))): c for (j, mv), c in x.terms.items()})


# products around joints


class UncheckedJoint(DiagramError):
    pass


def _is_identity(a) -> bool:
    return a == identity(len(a))


def path_product(d: ScatteringDiagram, joint: Joint, ring: Laurent | None = None) -> VertexGroupElement:
    """Anticlockwise product around a joint, in the chart of the sector just below angle 0.

    The first crossing acts first.
    """
    ring = ring or d.ring
    m = d.manifold
    letters = []
    chart = None  # current chart -> start chart
    for step in joint.steps:
        for kind, sid, sign in step.items:
            if kind == "slab":
                raise UncheckedJoint(f"joint {_pt(joint.point)} lies on slab {sid}")
            if kind == "wall":
                log = d.wall(sid).log
                if log.ring != ring:
                    log = LieElement(ring, log.truncate(ring.order).terms)
                letters.append(transport_lie(log if sign > 0 else -log, chart))
        if any(k == "facet" for k, _, _ in step.items):
            facet = next(i for k, i, _ in step.items if k == "facet")
            mat = chart_change(m, step.before, step.after,
                               _crossing_face(m, step.before, step.after, facet, joint.point))
            if mat is None:
                raise DiagramError(f"cell boundary {facet} carries monodromy at {_pt(joint.point)}")
            back = inverse(mat)
            chart = back if chart is None else matmul(chart, back)
    if chart is not None and not _is_identity(chart):
        raise DiagramError(f"nontrivial monodromy around {_pt(joint.point)}")
    return VertexGroupElement(ring, tuple(reversed(letters)))


def _pt(x) -> str:
    return "(" + ", ".join(str(c) for c in x) + ")"


@dataclass
class JointResult:
    point: tuple
    kind: str
    cell: str
    status: str  # ok | defect | unchecked
    order: int | None = None
    defect: LieElement | None = None
    messages: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"point": [int(x) if Fraction(x).denominator == 1 else str(x) for x in self.point],
               "kind": self.kind, "cell": self.cell, "status": self.status}
        if self.order is not None:
            out["order"] = self.order
        if self.defect is not None:
            out["defect"] = format_lie(self.defect)
        if self.messages:
            out["messages"] = list(self.messages)
        return out

    def text(self) -> str:
        head = f"joint {_pt(self.point)} [{self.kind}]"
        if self.status == "ok":
            return f"{head}: ok"
        if self.status == "unchecked":
            return f"{head}: unchecked: {'; '.join(self.messages)}"
        if self.defect is not None:
            return f"{head}: defect at order {self.order}: {format_lie(self.defect)}"
        return f"{head}: {'; '.join(self.messages)}"


@dataclass
class ConsistencyReport:
    order: int
    joints: list

    @property
    def consistent(self) -> bool:
        return all(j.status != "defect" for j in self.joints)

    def __bool__(self) -> bool:
        return self.consistent

    @property
    def failures(self) -> list:
        return [j for j in self.joints if j.status == "defect"]

    def to_json(self) -> dict:
        return {"order": self.order, "consistent": self.consistent,
                "joints": [j.to_json() for j in self.joints]}

    def text(self) -> str:
        lines = [j.text() for j in self.joints]
        verdict = "consistent" if self.consistent else "inconsistent"
        lines.append(f"{verdict} to order {self.order}")
        return "\n".join(lines)


def _singular_messages(d: ScatteringDiagram, joint: Joint) -> list[str]:
    from ..gluing import check_slab_functions

    m = d.manifold
    if m is None:
        return ["singular point without a manifold"]
    f = {(s.vertex, s.cell): s.fpoly() for s in d.slabs}
    rep = check_slab_functions(m, f)
    rho = joint.cell
    near = set(m.faces(rho)) if rho in m.cells else set()
    return [x.message for x in rep.failures if near & set(x.cells) or rho in x.cells]


def check_joint(d: ScatteringDiagram, joint: Joint, order: int) -> JointResult:
    res = JointResult(joint.point, joint.kind, joint.cell, "ok")
    if joint.kind == "singular":
        msgs = _singular_messages(d, joint)
        if msgs:
            res.status, res.messages = "defect", msgs
        return res
    try:
        p = path_product(d, joint, d.ring.with_order(order))
    except UncheckedJoint as e:
        res.status, res.messages = "unchecked", [str(e)]
        return res
    lead = p.leading_defect()
    if lead is not None:
        res.status = "defect"
        res.order, res.defect = lead
    return res


def check_consistency(d: ScatteringDiagram, order: int | None = None,
                      decomposition: Decomposition | None = None) -> ConsistencyReport:
    """Path-ordered products around every joint are the identity mod q^(order+1)."""
    k = d.order if order is None else order
    if k > d.order:
        d = d.with_order(k)
    joints = decomposition.joints if decomposition is not None else find_joints(d)
    return ConsistencyReport(k, [check_joint(d, j, k) for j in joints])


# completion


def _new_walls(d: ScatteringDiagram, joint: Joint, j: int) -> list[Wall]:
    """Rays cancelling the order-j defect at a joint."""
    try:
        p = path_product(d, joint, d.ring.with_order(j))
    except UncheckedJoint:
        return []
    theta = order_part(p, j)
    out = []
    for (jj, mv), n in theta.sorted_terms():
        if not any(mv):
            raise DiagramError(f"undirectional defect at {_pt(joint.point)}: {format_lie(LieElement(theta.ring, {(jj, mv): n}))}")
        if fdot(mv, n) != 0:
            raise DiagramError(f"defect at {_pt(joint.point)} is not divergence-free")
        term = LieElement(d.ring, {(jj, mv): tuple(-x for x in n)})
        out.extend(_emit_ray(d, joint, mv, term))
    return out


def _sectors(d: ScatteringDiagram, joint: Joint) -> list[tuple]:
    """(from, to, cell, chart) for the sector before each step; chart maps it to the start chart."""
    m = d.manifold
    steps = joint.steps
    out = []
    chart = None
    for i, step in enumerate(steps):
        out.append((steps[i - 1], step, step.before, chart))
        facet = next((sid for k, sid, _ in step.items if k == "facet"), None)
        if facet is not None:
            mat = chart_change(m, step.before, step.after,
                               _crossing_face(m, step.before, step.after, facet, joint.point))
            if mat is None:
                raise DiagramError("scattering hits singular locus")
            back = inverse(mat)
            chart = back if chart is None else matmul(chart, back)
    return out


def _emit_ray(d: ScatteringDiagram, joint: Joint, mdir, log: LieElement) -> list[Wall]:
    """A ray from the joint along the exponent, clipped to cells and continued across chart changes."""
    x = tuple(joint.point)
    direction = primitive(mdir)
    m = d.manifold
    if m is None:
        return [_ray_wall(PLANE, Support.ray(x, direction), log)]
    cell = None
    for prev, step, here_cell, chart in _sectors(d, joint):
        here = direction if chart is None else primitive(matvec(inverse(chart), direction))
        where = angle_cmp_dirs(prev.direction, step.direction, here)
        if where == "outside":
            continue
        boundary = prev if where == "from" else step if where == "to" else None
        if boundary is not None and any(k == "facet" for k, _, _ in boundary.items):
            raise DiagramError(f"new wall at {_pt(x)} runs along a cell boundary")
        cell, direction = here_cell, here
        log = transport_lie(log, None if chart is None else inverse(chart))
        break
    if cell is None:
        raise DiagramError(f"no cell carries the new wall at {_pt(x)}")
    out = []
    for _ in range(4 * len(m.cells)):
        lo, hi = param_interval(m.cells[cell].poly, x, direction)
        if hi is None:
            out.append(_ray_wall(cell, Support.ray(x, direction), log))
            return out
        end = tuple(a + hi * b for a, b in zip(x, direction))
        out.append(_ray_wall(cell, Support.segment(x, end), log))
        face = carrier_face(m, cell, end)
        nxt = None
        for s2 in m.maximal:
            if s2 == cell or not m.contains(face, s2):
                continue
            mat = chart_change(m, cell, s2, face)
            if mat is None:
                raise DiagramError("scattering hits singular locus")
            d2 = primitive(matvec(mat, direction))
            if sector_cell(d, end, d2) == s2:
                nxt = (s2, d2, mat)
                break
        if nxt is None:
            if len(m.star(face)) > 1:
                raise DiagramError(f"new wall from {_pt(joint.point)} runs along a cell boundary")
            return out  # reached the boundary of B
        if m.cells[face].dim == m.dim - 1 and _carries_slab(d, face):
            raise DiagramError("scattering hits singular locus")
        cell, direction, mat = nxt
        log = transport_lie(log, mat)
        x = end
    raise DiagramError("new wall does not leave the manifold")


def _carries_slab(d: ScatteringDiagram, face: str) -> bool:
    return any(s.cell == face for s in d.slabs) or any(c == face for c, _ in d.singular_points)


def _ray_wall(cell: str, sup: Support, log: LieElement) -> Wall:
    normal, _ = normalize_covector(rot90(sup.primitive_direction))
    return Wall("", cell, sup, normal, log if fdot(normal, rot90(sup.primitive_direction)) > 0 else -log)


def _check_order_one(d: ScatteringDiagram, joints):
    for joint in joints:
        if joint.kind in ("singular",):
            continue
        try:
            p = path_product(d, joint, d.ring.with_order(1))
        except UncheckedJoint:
            continue
        if not p.is_identity():
            raise DiagramError(f"diagram is not consistent to order 1 at {_pt(joint.point)}")


def complete(d: ScatteringDiagram, order: int, threads: int | None = None) -> ScatteringDiagram:
    """Insert rays order by order until every joint is consistent mod q^(order+1)."""
    if order < 1:
        raise DiagramError("completion order must be at least 1")
    d = d.with_order(order)
    _check_order_one(d, find_joints(d))
    workers = threads or worker_count()
    for j in range(2, order + 1):
        joints = [jt for jt in find_joints(d) if jt.kind != "singular"]
        if workers > 1 and len(joints) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                batches = list(pool.map(lambda jt: _new_walls(d, jt, j), joints))
        else:
            batches = [_new_walls(d, jt, j) for jt in joints]
        new = [w for batch in batches for w in batch]
        if new:
            d = d.add_walls(new)
    return d


# chamber paths


def _crossings_between(dec: Decomposition, a: str, b: str):
    out = []
    for c in dec.crossings:
        if c.left == a and c.right == b:
            out.append((c, 1))
        elif c.left == b and c.right == a:
            out.append((c, -1))
    return out


def _parse_path(path) -> list[str]:
    if isinstance(path, str):
        path = [p.strip() for p in path.split(",") if p.strip()]
    return list(path)


def path_crossings(d: ScatteringDiagram, path, decomposition: Decomposition | None = None) -> list:
    """[(crossing, +1 | -1), ...] for a chamber path; ids of walls or slabs between chambers pick a crossing."""
    dec = decomposition or decompose(d)
    ids = {c.id for c in dec.chambers}
    tokens = _parse_path(path)
    if not tokens or tokens[0] not in ids:
        raise DiagramError("path must start with a chamber id")
    cur = tokens[0]
    pick = None
    out = []
    for tok in tokens[1:]:
        if tok not in ids:
            pick = tok
            continue
        options = _crossings_between(dec, cur, tok)
        if pick is not None:
            options = [(c, s) for c, s in options if any(i == pick for _, i, _ in c.items)]
        if not options:
            raise DiagramError(f"non-adjacent step {cur} -> {tok}" + (f" through {pick}" if pick else ""))
        if len({c.items for c, _ in options}) > 1:
            raise DiagramError(f"ambiguous step {cur} -> {tok}; name the wall or slab to cross")
        out.append(options[0])
        cur, pick = tok, None
    if pick is not None:
        raise DiagramError(f"path ends with {pick}, which is not a chamber")
    return out


def apply_path(d: ScatteringDiagram, path, x, decomposition: Decomposition | None = None):
    """Carry x along a chamber path, applying each crossing's factor (or its inverse when reversed)."""
    dec = decomposition or decompose(d)
    for crossing, direction in path_crossings(d, path, dec):
        x = _cross(d, dec, crossing, direction, x)
    return x


def _cross(d: ScatteringDiagram, dec: Decomposition, crossing, direction: int, x):
    items = crossing.items if direction > 0 else tuple(reversed(crossing.items))
    slabbed = any(k == "slab" for k, _, _ in items)
    for kind, sid, sign in items:
        s = sign * direction
        if kind == "wall":
            if not isinstance(x, RingElement):
                raise DiagramError("crossing a wall needs an element of the Laurent ring")
            log = d.wall(sid).log
            if x.ring != log.ring:
                log = LieElement(x.ring, log.truncate(x.ring.order).terms)
            x = VertexGroupElement.exp(log if s > 0 else -log).act(x)
        elif kind == "slab":
            if not isinstance(x, SlabElement):
                raise DiagramError("crossing a slab needs an element of the slab ring (u, v, z^m)")
            x = cross_slab(x, d.slab(sid).fpoly(), s)
        elif kind == "facet" and not slabbed:
            if isinstance(x, SlabElement):
                raise DiagramError("slab ring elements cannot leave the slab")
            m = d.manifold
            a, b = (crossing.left, crossing.right) if direction > 0 else (crossing.right, crossing.left)
            ca, cb = dec.chamber(a).cell, dec.chamber(b).cell
            mat = chart_change(m, ca, cb, sid)
            if mat is None:
                raise DiagramError(f"crossing {sid} changes charts inconsistently")
            x = transport_function(x, mat)
    return x


# initial data


def initial_diagram(m, f: dict | None = None, order: int = 1, check: bool = True) -> ScatteringDiagram:
    """One slab per component of a codimension one cell minus the essential singular locus.

    check=False skips the slab-function checks (e.g. identity slabs on a manifold with monodromy).
    """
    from ..gluing import check_slab_functions
    from ..manifold.singular import singular_locus
    from ..manifold.validate import codim_one_normal, kinks

    f = m.slabs if f is None else f
    rep = check_slab_functions(m, f) if check else None
    if rep is not None and not rep.ok:
        raise DiagramError(f"slab functions fail: {rep.messages()[0]}")
    essential = {s.cell for s in singular_locus(m, essential_only=True)}
    rhos = [r for r in m.cells_of_dim(m.dim - 1) if r in essential and len(m.star(r)) == 2]
    if rhos and m.phi is None:
        raise DiagramError("initial diagram needs a multi-valued PL function for the slab kinks")
    ks = kinks(m) if rhos else {}
    slabs, sing = [], []
    for rho in rhos:
        plus, minus = m.codim_one_sides(rho)
        k = m.cells[rho].dim
        point = None
        if m.dim == 2:
            ends = [m.position(v, plus) for v in m.vertices(rho)]
            point = tuple(sum(c) / len(ends) for c in zip(*ends))
            sing.append((rho, point))
        for v in m.vertices(rho):
            a_v = codim_one_normal(m, v, rho)
            normal = primitive(vecmat(a_v, m.vertex_transition(v, plus)))
            fv = f.get((v, rho), {tuple(0 for _ in range(k)): Fraction(1)})
            kink = ks[(v, rho)]
            if Fraction(kink).denominator != 1:
                raise DiagramError(f"kink at ({v}, {rho}) is not integral")
            sup = Support.segment(m.position(v, plus), point) if point is not None else None
            slabs.append(Slab(f"S{len(slabs)}", v, rho, f"f_{v}_{rho}", sup, normal, int(kink),
                              tuple(sorted((tuple(mv), Fraction(c)) for mv, c in fv.items() if c)),
                              (plus, minus)))
    return ScatteringDiagram(m.dim, order, (), tuple(slabs), tuple(sing), m, m.name)
