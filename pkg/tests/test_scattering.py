from __future__ import annotations

import json
import random

import pytest

from tropscat.algebra import Laurent, LieElement, VertexGroupElement, is_divergence_free
from tropscat.algebra.text import format_slab
from tropscat.fixtures import focus_focus, ks2, random_lines, triangle_3d, two_squares
from tropscat.scattering import (
    DiagramError,
    ScatteringDiagram,
    Support,
    apply_path,
    check_consistency,
    complete,
    decompose,
    diagram_from_json,
    initial_diagram,
    line_wall,
    path_product,
    worker_count,
)

from conftest import FIXTURES


# decomposition


def test_single_line():
    d = ScatteringDiagram(2, 2, (line_wall(Laurent(2, 2), "A", (1, 0), (0, 1)),))
    dec = decompose(d)
    assert dec.joints == [] and len(dec.chambers) == 2
    assert check_consistency(d, 5).consistent


def test_ks2_decomposition():
    dec = decompose(ks2())
    assert len(dec.joints) == 1 and len(dec.chambers) == 4
    joint = dec.joints[0]
    assert joint.kind == "interior"
    assert joint.incident == (((1, 0), ("W0",)), ((0, 1), ("W1",)), ((-1, 0), ("W0",)), ((0, -1), ("W1",)))
    assert dec.adjacency() == {"C0": ["C1", "C2"], "C1": ["C0", "C3"], "C2": ["C0", "C3"], "C3": ["C1", "C2"]}


def test_focus_focus_decomposition():
    d = initial_diagram(focus_focus(), order=3)
    dec = decompose(d)
    assert [c.id for c in dec.chambers] == ["C0", "C1", "C2", "C3", "C4", "C5"]
    (joint,) = dec.joints
    assert joint.kind == "singular" and joint.cell == "rho"
    assert sorted(ids for _, ids in joint.incident) == [("S0",), ("S1",)]
    slabbed = [x for x in dec.crossings if any(k == "slab" for k, _, _ in x.items)]
    assert len(slabbed) == 2 and {(x.left, x.right) for x in slabbed} == {("C5", "C4")}


def test_zero_direction_support_is_rejected():
    with pytest.raises(ValueError, match="not of codimension one"):
        Support.line((0, 0), (0, 0))


def test_decomposition_is_planar_only():
    d = ScatteringDiagram(3, 1)
    with pytest.raises(DiagramError, match="planar"):
        decompose(d)


# paths


def test_ks2_crossing_the_horizontal_wall():
    d = ks2(4)
    r = d.ring
    y = r.monomial((0, 1))
    assert apply_path(d, "C0,C1", y) == y * (r.one() + r.monomial((1, 0), 1))
    assert apply_path(d, "C0,C1,C0", y) == y
    assert apply_path(d, ["C2", "C0", "C2"], r.monomial((3, -2), 1)) == r.monomial((3, -2), 1)


def test_path_errors():
    d = ks2()
    with pytest.raises(DiagramError, match="non-adjacent step C0 -> C3"):
        apply_path(d, "C0,C3", d.ring.one())
    with pytest.raises(DiagramError, match="start with a chamber"):
        apply_path(d, "W0,C1", d.ring.one())
    ff = initial_diagram(focus_focus(), order=2)
    with pytest.raises(DiagramError, match="ambiguous step C5 -> C4"):
        apply_path(ff, "C5,C4", ff.slab("S0").ring(2).u())


def test_focus_focus_slab_crossing():
    d = initial_diagram(focus_focus(), order=3)
    s = d.slab("S0").ring(3)
    assert format_slab(apply_path(d, "C5,S0,C4", s.u())) == "u"
    assert format_slab(apply_path(d, "C5,S0,C4", s.v())) == "v f"
    for x in (s.u(), s.v(), s.monomial((1,)), s.u() * s.v()):
        assert apply_path(d, "C5,S0,C4,S0,C5", x) == x
    with pytest.raises(DiagramError, match="slab ring"):
        apply_path(d, "C5,S0,C4", d.ring.one())


def test_paths_through_facets_without_walls():
    d = initial_diagram(focus_focus(), order=2)
    x = d.ring.monomial((1, 1))
    assert apply_path(d, "C0,C4,C2", x) == x


# consistency


def test_ks2_defect_at_order_two():
    rep = check_consistency(ks2(2))
    assert not rep.consistent
    (bad,) = rep.failures
    assert bad.order == 2
    assert bad.defect == LieElement.term(Laurent(2, 2), 1, 2, (1, 1), (1, -1))


def test_ks2_with_pentagon_ray_is_consistent():
    d = ks2(6)
    data = d.to_json()
    data["walls"].append({"id": "R", "cell": "plane", "support": {"apex": [0, 0], "direction": [1, 1]},
                          "normal": [1, -1], "function": {"terms": [{"q": 2, "m": [1, 1], "coeff": 1}], "n": [1, -1]}})
    with_ray = diagram_from_json(data)
    assert check_consistency(with_ray, 6).consistent
    (joint,) = decompose(with_ray).joints
    assert path_product(with_ray, joint).is_identity()


def test_focus_focus_initial_diagram_is_consistent():
    d = initial_diagram(focus_focus(), order=3)
    assert check_consistency(d).consistent
    assert check_consistency(d).text().splitlines()[-1] == "consistent to order 3"


# completion


def test_ks2_completion():
    done = complete(ks2(), 2)
    assert len(done.walls) == 3
    new = [w for w in done.walls if w.id not in ("W0", "W1")]
    assert [w.support.primitive_direction for w in new] == [(1, 1)]
    assert complete(ks2(), 6).walls[2].support.primitive_direction == (1, 1)
    assert len(complete(ks2(), 6).walls) == 3
    assert check_consistency(complete(ks2(), 6), 6).consistent


def test_parallel_walls_complete_to_themselves():
    r = Laurent(2, 5)
    d = ScatteringDiagram(2, 5, (line_wall(r, "A", (1, 0), (0, 1)), line_wall(r, "B", (2, 0), (0, 1))))
    for k in range(1, 6):
        assert complete(d, k) == d.with_order(k)


@pytest.mark.parametrize("seed", range(6))
def test_completion_idempotent_and_coherent(seed):
    d = random_lines(random.Random(seed))
    done = complete(d, 4)
    assert complete(done, 4) == done
    for j in (1, 2, 3):
        assert done.truncate(j) == complete(d, j)
    assert check_consistency(done, 4).consistent
    assert all(is_divergence_free(w.log) for w in done.walls)


def test_threads_do_not_change_completion():
    d = random_lines(random.Random(4))
    assert complete(d, 4, threads=1) == complete(d, 4, threads=4)


def test_worker_count(monkeypatch):
    monkeypatch.setenv("TROPSCAT_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("TROPSCAT_THREADS", "zero")
    assert worker_count() >= 1


# semicircles around a joint agree


def test_semicircles_agree_on_completed_ks2():
    d = complete(ks2(), 4)
    dec = decompose(d)
    start, end = "C0", "C3"
    ids = {c.id for c in dec.chambers}
    adj = dec.adjacency()
    # walk anticlockwise and clockwise from the lowest chamber to the opposite one
    def walk(first):
        path, prev, cur = [start], start, first
        while cur != end:
            path.append(cur)
            nxt = [c for c in adj[cur] if c != prev]
            prev, cur = cur, nxt[0]
        return path + [end]

    a, b = (walk(c) for c in adj[start])
    assert set(a) | set(b) == ids
    for g in d.ring.generators():
        assert apply_path(d, a, g) == apply_path(d, b, g)


# initial diagrams


def test_focus_focus_initial_slabs():
    d = initial_diagram(focus_focus())
    assert [(s.vertex, s.cell, dict(s.f)) for s in d.slabs] == [
        ("v0", "rho", {(0,): 1, (1,): 1}),
        ("v1", "rho", {(-1,): 1, (0,): 1}),
    ]
    assert d.walls == ()


def test_identity_slabs_on_focus_focus():
    m = focus_focus()
    one = {key: {(0,): 1} for key in m.slabs}
    with pytest.raises(DiagramError, match="incompatible"):
        initial_diagram(m, one)
    d = initial_diagram(m, one, check=False)
    assert len(d.slabs) == 2 and all(s.is_identity() for s in d.slabs)


def test_monodromy_free_manifold_gives_empty_diagram():
    d = initial_diagram(two_squares(), {})
    assert d.walls == () and d.slabs == ()


def test_three_dimensional_fixture_needs_a_pl_function():
    with pytest.raises(DiagramError, match="PL function"):
        initial_diagram(triangle_3d())


# serialization


def test_diagram_json_round_trip():
    for d in (complete(ks2(), 6), initial_diagram(focus_focus(), order=2)):
        again = diagram_from_json(json.loads(json.dumps(d.to_json())))
        assert again == d
        assert again.to_json() == json.loads(json.dumps(d.to_json()))


def test_ks2_fixture_file():
    data = json.loads((FIXTURES / "ks2.json").read_text())
    assert diagram_from_json(data) == ks2(int(data.get("order", 1)))


def test_diagram_errors():
    with pytest.raises(DiagramError, match="missing field 'rank'"):
        diagram_from_json({"walls": []})
    data = ks2().to_json()
    data["walls"][0]["normal"] = [1, 0]
    with pytest.raises(DiagramError, match="not orthogonal"):
        diagram_from_json(data)
    data = ks2().to_json()
    data["walls"][1]["id"] = "W0"
    with pytest.raises(DiagramError, match="duplicate"):
        diagram_from_json(data)


def test_wall_logs_must_be_divergence_free():
    data = ks2().to_json()
    data["walls"][0] = {"id": "W0", "support": {"apex": [0, 0], "line": [1, 0]}, "normal": [0, 1],
                        "log_terms": [{"q": 1, "m": [1, 0], "n": [1, 0], "coeff": 1}]}
    with pytest.raises(DiagramError, match="divergence-free"):
        diagram_from_json(data)


def test_group_element_of_wall():
    w = ks2(3).walls[0]
    assert w.factor == VertexGroupElement.exp(w.log)
