"""Small integral tropical manifolds used as worked examples and in the test-suite."""
from __future__ import annotations

from fractions import Fraction

from .lattice.polyhedron import Polyhedron
from .manifold.complex import IntegralTropicalManifold, build_manifold

P = Polyhedron.from_points


def _names(pairs):
    return {(tuple(vs), tuple(rs)): name for (vs, rs), name in pairs}


def focus_focus(kink: int = 1) -> IntegralTropicalManifold:
    """One bounded edge rho = [v0, v1] with a single focus-focus point on it.

    The plane is cut into the upper and lower strips over rho and four quadrants at its ends.
    The fan structure at v1 shears the upper cells by [[1, kink], [0, 1]].
    """
    cells = {
        "s+": P([(0, 0), (1, 0)], [(0, 1)]), "s-": P([(0, 0), (1, 0)], [(0, -1)]),
        "L+": P([(0, 0)], [(-1, 0), (0, 1)]), "L-": P([(0, 0)], [(-1, 0), (0, -1)]),
        "R+": P([(1, 0)], [(1, 0), (0, 1)]), "R-": P([(1, 0)], [(1, 0), (0, -1)]),
    }
    shear = ((1, kink), (0, 1))
    names = _names([
        ((((0, 0),), ()), "v0"), ((((1, 0),), ()), "v1"),
        ((((0, 0), (1, 0)), ()), "rho"),
        ((((0, 0),), ((-1, 0),)), "a0"), ((((0, 0),), ((0, 1),)), "b0"), ((((0, 0),), ((0, -1),)), "c0"),
        ((((1, 0),), ((1, 0),)), "a1"), ((((1, 0),), ((0, 1),)), "b1"), ((((1, 0),), ((0, -1),)), "c1"),
    ])
    k = Fraction(kink)
    half = Fraction(1, 2)
    phi = {
        "v0": {"s+": (1, k), "L+": (0, k), "L-": (0, 0), "s-": (1, 0)},
        "v1": {"s+": (0, k), "s-": (0, 0), "R+": (half, k / 2), "R-": (half, 0)},
    }
    m = build_manifold(2, cells, {(1, 0): {"s+": shear, "R+": shear}}, names,
                       phi={v: {s: tuple(Fraction(x) for x in a) for s, a in d.items()} for v, d in phi.items()},
                       orientation={"rho": "s+"},
                       slabs={("v0", "rho"): {(0,): Fraction(1), (1,): Fraction(1)},
                              ("v1", "rho"): {(0,): Fraction(1), (-1,): Fraction(1)}},
                       name="focus-focus" if kink == 1 else f"focus-focus-{kink}")
    if kink != 1:
        # slab functions compatible with a kink-fold shift along rho
        m.slabs = {("v0", "rho"): {(0,): Fraction(1), (kink,): Fraction(1)},
                   ("v1", "rho"): {(0,): Fraction(1), (-kink,): Fraction(1)}}
    return m


def _outward(edge_dir):
    x, y = edge_dir
    return (y, -x)


def triangle_3d() -> IntegralTropicalManifold:
    """Standard triangle T in the plane z = 0, thickened by the upper and lower half-spaces.

    The plane is cut into T, the three strips over its edges and three corner regions; each
    cell is crossed with the upward and downward rays.  The fan structure at a vertex v shears the
    upper cells by I + (v - v0) e3^T, so all monodromy sits on T and the strips.
    """
    pts = [(0, 0), (1, 0), (0, 1)]
    edges = [(0, 1), (1, 2), (2, 0)]
    normals = {}
    for i, j in edges:
        a, b = pts[i], pts[j]
        d = (b[0] - a[0], b[1] - a[1])
        n = _outward(d)
        g = max(abs(n[0]), abs(n[1]))
        normals[(i, j)] = (n[0] // g, n[1] // g) if g else n
    planar = {"T": ([p for p in pts], [])}
    for (i, j), n in normals.items():
        planar[f"O{i}{j}"] = ([pts[i], pts[j]], [n])
    for k, p in enumerate(pts):
        adj = [n for (i, j), n in normals.items() if k in (i, j)]
        planar[f"V{k}"] = ([p], adj)
    cells = {}
    for name, (vs, rs) in planar.items():
        for tag, e in (("+", 1), ("-", -1)):
            cells[name + tag] = P([(x, y, 0) for x, y in vs], [(a, b, 0) for a, b in rs] + [(0, 0, e)])
    fans = {}
    for k, p in enumerate(pts):
        s = ((1, 0, p[0]), (0, 1, p[1]), (0, 0, 1))
        fans[(p[0], p[1], 0)] = {c: s for c in cells if c.endswith("+")}
    names = [((((x, y, 0),), ()), f"v{k}") for k, (x, y) in enumerate(pts)]
    names.append(((tuple((x, y, 0) for x, y in sorted(pts)), ()), "T"))
    for (i, j) in edges:
        names.append(((tuple(sorted([(*pts[i], 0), (*pts[j], 0)])), ()), f"E{min(i, j)}{max(i, j)}"))
        names.append(((tuple(sorted([(*pts[i], 0), (*pts[j], 0)])), ((*normals[(i, j)], 0),)), f"O{i}{j}"))
    m = build_manifold(3, cells, fans, _names(names), name="triangle-3d")
    m.orientation = {"T": "T+"}
    for (i, j) in edges:
        m.orientation[f"O{i}{j}"] = f"O{i}{j}+"
    m.slabs = triangle_slabs(m)
    return m


def triangle_slabs(m: IntegralTropicalManifold) -> dict:
    """Slab functions for triangle_3d, written in the chart lattice of each slab."""
    slabs = {}
    for v in m.cells_of_dim(0):
        k = int(v[1:])
        shift = [(0, 0), (-1, 0), (0, -1)][k]
        # f_{v,T} = z^{-(v - v0)} (1 + z^{e1} + z^{e2}) in the chart of T
        terms = {}
        for e in [(0, 0), (1, 0), (0, 1)]:
            vec = (e[0] + shift[0], e[1] + shift[1], 0)
            terms[_chart_vector(m, "T", vec)] = Fraction(1)
        slabs[(v, "T")] = terms
        for (i, j) in [(0, 1), (1, 2), (2, 0)]:
            if k not in (i, j):
                continue
            other = j if k == i else i
            pts = [(0, 0), (1, 0), (0, 1)]
            d = (pts[other][0] - pts[k][0], pts[other][1] - pts[k][1], 0)
            slabs[(v, f"O{i}{j}")] = {(0, 0): Fraction(1), _chart_vector(m, f"O{i}{j}", d): Fraction(1)}
    return slabs


def _chart_vector(m, cell, vec) -> tuple:
    """Coordinates of a developing-chart vector in the chart lattice of a cell."""
    from .lattice.linalg import solve, transpose
    from .manifold.complex import global_chart

    _, basis = global_chart(m, cell)
    c = solve(transpose(basis), tuple(Fraction(x) for x in vec))
    return tuple(int(x) for x in c)


def two_squares() -> IntegralTropicalManifold:
    """Two unit squares sharing an edge; a manifold with boundary."""
    cells = {"A": P([(0, 0), (1, 0), (0, 1), (1, 1)]), "B": P([(1, 0), (2, 0), (1, 1), (2, 1)])}
    return build_manifold(2, cells, name="two-squares")


def projective_line(slopes=((0,), (1,))) -> IntegralTropicalManifold:
    """The fan of P^1 as a one-dimensional manifold with a single vertex."""
    cells = {"neg": P([(0,)], [(-1,)]), "pos": P([(0,)], [(1,)])}
    m = build_manifold(1, cells, name="projective-line")
    v = m.cells_of_dim(0)[0]
    m.phi = {v: {"neg": tuple(Fraction(x) for x in slopes[0]), "pos": tuple(Fraction(x) for x in slopes[1])}}
    m.orientation = {v: "pos"}
    return m


def ks2(order: int = 1):
    """Two transverse lines through the origin carrying log(1 + q z^(1,0)) d_(0,1) and log(1 + q z^(0,1)) d_(1,0)."""
    from .algebra.laurent import Laurent
    from .scattering.diagram import ScatteringDiagram, line_wall

    ring = Laurent(2, order)
    walls = (line_wall(ring, "W0", (1, 0), (0, 1)), line_wall(ring, "W1", (0, 1), (1, 0)))
    return ScatteringDiagram(2, order, walls, name="ks2")


def random_lines(rng, order: int = 4, max_lines: int = 3, bound: int = 2):
    """Up to max_lines distinct lines through the origin, each with one term c q z^m d_n, n orthogonal to m."""
    from .algebra.laurent import Laurent
    from .algebra.lie import LieElement
    from .scattering.diagram import PLANE, ScatteringDiagram, Wall
    from .scattering.geometry import Support, normalize_covector, rot90

    ring = Laurent(2, order)
    count = rng.randint(1, max_lines)
    dirs: list = []
    while len(dirs) < count:
        mv = (rng.randint(-bound, bound), rng.randint(-bound, bound))
        if mv == (0, 0) or any(normalize_covector(mv)[0] == normalize_covector(x)[0] for x in dirs):
            continue
        dirs.append(mv)
    walls = []
    for i, mv in enumerate(dirs):
        c = rng.choice([1, -1, 2])
        n = tuple(c * x for x in rot90(normalize_covector(mv)[0]))
        sup = Support.line((0, 0), mv)
        normal, _ = normalize_covector(rot90(sup.direction))
        walls.append(Wall(f"W{i}", PLANE, sup, normal, LieElement(ring, {(1, mv): n})))
    return ScatteringDiagram(2, order, tuple(walls), name="random-lines")
