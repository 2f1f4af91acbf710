from __future__ import annotations

import copy
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropscat.fixtures import focus_focus, triangle_3d, two_squares
from tropscat.gluing import (
    D_invariant,
    FanRing,
    SlabDegenerate,
    are_cohomologous,
    check_gluing,
    check_lifting_condition,
    check_slab_functions,
    coboundary,
    cocycle_mutants,
    lifting_mutants,
    monoid_ring_multiply,
    pm_compatibility,
    pm_eval_tangent,
    random_coboundary,
    unit_inv,
    unit_mul,
)
from tropscat.lattice import Cone, Fan, normal_fan, simplex
from tropscat.monodromy import m_rho


# open gluing data


@pytest.mark.parametrize("make", [focus_focus, triangle_3d])
def test_trivial_data_is_cohomologous_to_itself(make):
    m = make()
    assert check_gluing(m, {}).ok
    res = are_cohomologous(m, {}, {})
    assert res and res.witness == {}


@pytest.mark.parametrize("make", [focus_focus, triangle_3d])
def test_coboundary_round_trip(make):
    m = make()
    rng = random.Random(7)
    for _ in range(5):
        s, t = random_coboundary(m, rng)
        assert check_gluing(m, s).ok
        res = are_cohomologous(m, s, {})
        assert res
        # the witness may differ from t, but its coboundary reproduces s
        again = coboundary(m, res.witness)
        assert are_cohomologous(m, again, s)


def test_cocycle_failure_names_the_chain():
    m = focus_focus()
    s, (w, t) = cocycle_mutants(m, random.Random(1), 1)[0]
    msgs = check_gluing(m, s).messages()
    assert msgs and all(msg.startswith("cocycle condition fails on the chain") for msg in msgs)
    assert any(msg.startswith(f"cocycle condition fails on the chain {w} ⊂ ") for msg in msgs)
    assert not are_cohomologous(m, s, {})


# D-invariants


def test_trivial_map_has_trivial_d():
    m = focus_focus()
    assert D_invariant(m, {}, "rho", "v0") == {} == D_invariant(m, {}, "rho", "v1")


def test_d_invariant_on_one_side():
    m = focus_focus()
    mu = {"s+": {"t": (0, 1)}}
    # m = (0, -1) leaves s+ across rho
    assert D_invariant(m, mu, "rho", "v0") == {"t": Fraction(-1)}
    assert D_invariant(m, mu, "rho", "v1") == {"t": Fraction(-1)}


@pytest.mark.parametrize("mu, d0, d1", [
    ({"s+": {"t": (1, 0)}, "s-": {"t": (1, 0)}}, {}, {"t": 1}),
    ({"s+": {"t": (1, 1)}, "s-": {"t": (1, 0)}}, {"t": -1}, {}),
    ({"s+": {"t": (2, -1)}, "s-": {"t": (2, 3)}}, {"t": 4}, {"t": 6}),
    ({"s+": {"t": (0, 1)}}, {"t": -1}, {"t": -1}),
])
def test_monodromy_relation(mu, d0, d1):
    m = focus_focus()
    assert pm_compatibility(m, mu, "rho") == []
    a, b = D_invariant(m, mu, "rho", "v0"), D_invariant(m, mu, "rho", "v1")
    assert a == d0 and b == d1
    shift = pm_eval_tangent(m, mu, "rho", "v0", m_rho(m, "rho", "v0", "v1"))
    assert a == unit_mul(unit_inv(shift), b)


def test_d_invariant_rejects_incompatible_map():
    m = focus_focus()
    mu = {"s+": {"t": (1, 0)}}
    assert pm_compatibility(m, mu, "rho") == ["map on the star of rho disagrees on s+ and s- for t"]
    with pytest.raises(ValueError, match="depends on the choice of m"):
        D_invariant(m, mu, "rho", "v0")


# lifting condition


@pytest.mark.parametrize("make", [focus_focus, triangle_3d])
def test_lifting_trivial_and_coboundaries(make):
    m = make()
    assert check_lifting_condition(m, {}).ok
    rng = random.Random(3)
    for _ in range(4):
        s, _ = random_coboundary(m, rng, vertex_trivial=True)
        assert check_lifting_condition(m, s).ok


def test_lifting_mutants_fail_naming_the_pair():
    m = triangle_3d()
    for s, (rho, tau, v, w) in lifting_mutants(m, random.Random(11), 6):
        msgs = check_lifting_condition(m, s).messages()
        assert msgs
        assert any(f"({v}, {w}) in " in msg or f"({w}, {v}) in " in msg for msg in msgs)


# monoid rings of fans


def _p2_boundary():
    return FanRing(Fan([Cone([(1, 0)]), Cone([(0, 1)]), Cone([(-1, -1)])], 2))


def test_boundary_ring_of_p2():
    ring = _p2_boundary()
    x, y, z = {(1, 0): 1}, {(0, 1): 1}, {(-1, -1): 1}
    assert monoid_ring_multiply(x, y, ring) == {}
    assert monoid_ring_multiply(y, z, ring) == {}
    assert monoid_ring_multiply(x, z, ring) == {}
    assert monoid_ring_multiply(x, x, ring) == {(2, 0): 1}


def test_full_fan_ring():
    ring = FanRing(normal_fan(simplex(2)))
    assert monoid_ring_multiply({(1, 0): 1}, {(2, 0): 1}, ring) == {(3, 0): 1}
    assert monoid_ring_multiply({(-1, -1): 1}, {(0, 0): 1}, ring) == {(-1, -1): 1}
    # (1,0) and (0,1) span a common cone here
    assert monoid_ring_multiply({(1, 0): 1}, {(0, 1): 1}, ring) == {(1, 1): 1}


def test_monomial_outside_support_raises():
    with pytest.raises(ValueError, match="outside the support"):
        monoid_ring_multiply({(1, 1): 1}, {(0, 0): 1}, _p2_boundary())


_FAN = FanRing(normal_fan(simplex(2)))
elements = st.dictionaries(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), st.integers(-3, 3).filter(bool), max_size=3)


@given(elements, elements, elements)
def test_fan_ring_axioms(a, b, c):
    r = _FAN
    assert r.multiply(a, b) == r.multiply(b, a)
    assert r.multiply(r.multiply(a, b), c) == r.multiply(a, r.multiply(b, c))
    assert r.multiply(a, {(0, 0): 1}) == {k: Fraction(v) for k, v in a.items()}


@given(elements, elements, elements)
def test_boundary_ring_axioms(a, b, c):
    r = _p2_boundary()
    keep = lambda e: {k: v for k, v in e.items() if r.fan.cone_containing(k) is not None}  # noqa: E731
    a, b, c = keep(a), keep(b), keep(c)
    assert r.multiply(a, b) == r.multiply(b, a)
    assert r.multiply(r.multiply(a, b), c) == r.multiply(a, r.multiply(b, c))
    assert r.multiply(a, {(0, 0): 1}) == {k: Fraction(v) for k, v in a.items()}


# slab functions


def test_identity_slabs_pass_without_monodromy():
    m = two_squares()
    f = {(v, "c1_3"): {(0,): Fraction(1)} for v in m.vertices("c1_3")}
    assert check_slab_functions(m, f, {}).ok


def test_identity_slabs_fail_with_monodromy():
    m = focus_focus()
    f = {key: {(0,): Fraction(1)} for key in m.slabs}
    assert check_slab_functions(m, f).messages() == ["slab functions on rho at v0 and v1 are incompatible over rho"]


def test_focus_focus_slabs_reproduce_the_shift():
    m = focus_focus()
    assert m.slabs[("v0", "rho")] == {(0,): 1, (1,): 1}
    assert m.slabs[("v1", "rho")] == {(0,): 1, (-1,): 1}
    assert check_slab_functions(m, None, {}).ok


def test_focus_focus_mismatch_fails():
    m = focus_focus()
    f = dict(m.slabs)
    f[("v0", "rho")] = {(0,): Fraction(1), (1,): Fraction(2)}
    assert "slab functions on rho at v0 and v1 are incompatible over rho" in check_slab_functions(m, f).messages()


def test_normalization_is_checked():
    m = focus_focus()
    f = dict(m.slabs)
    f[("v0", "rho")] = {(0,): Fraction(2), (1,): Fraction(2)}
    assert any("does not take the value 1 at v0" in msg for msg in check_slab_functions(m, f).messages())


@pytest.mark.parametrize("bad", [{}, {(1,): Fraction(1)}])
def test_degenerate_slab_raises(bad):
    m = focus_focus()
    f = dict(m.slabs)
    f[("v0", "rho")] = bad
    with pytest.raises(SlabDegenerate, match="slab degenerate on stratum v0"):
        check_slab_functions(m, f)


def test_triangle_3d_slabs_and_cyclic_product():
    m = triangle_3d()
    assert check_slab_functions(m).ok
    f = copy.deepcopy(m.slabs)
    del f[("v0", "O01")], f[("v1", "O01")]
    assert check_slab_functions(m, f).messages() == [
        "product of slab functions around E01 at v0 is not 1 (component 2)",
        "product of slab functions around E01 at v1 is not 1 (component 2)",
    ]
    with pytest.raises(SlabDegenerate, match="E01"):
        check_slab_functions(m, {**m.slabs, ("v0", "O01"): {}})


@pytest.mark.parametrize("make", [focus_focus, triangle_3d])
def test_slab_check_is_stable_under_coboundaries(make):
    m = make()
    rng = random.Random(5)
    bad = dict(m.slabs)
    key = sorted(bad)[0]
    bad[key] = {mv: 3 * c if any(mv) else c for mv, c in bad[key].items()}
    for _ in range(3):
        s, _ = random_coboundary(m, rng, vertex_trivial=True)
        assert check_slab_functions(m, None, s).ok
        assert not check_slab_functions(m, bad, s).ok
