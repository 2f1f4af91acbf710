from __future__ import annotations

import pytest

from tropscat.fixtures import focus_focus, triangle_3d, two_squares
from tropscat.lattice import is_standard_simplex
from tropscat.lattice.linalg import det, inverse, matmul
from tropscat.monodromy import (
    check_positive,
    check_simple,
    check_strongly_simple,
    delta_rho,
    kappa,
    kappa_table,
    m_rho,
    monodromy,
    monodromy_polytopes,
)


def _int(mat):
    return tuple(tuple(int(x) for x in row) for row in mat)


def test_loop_inside_one_cell_is_identity():
    m = focus_focus()
    t = monodromy(m, "v0", "s+", "s+", ("edge", "rho"))
    assert _int(t.matrix) == ((1, 0), (0, 1))


@pytest.mark.parametrize("k", [1, 2])
def test_focus_focus_matrix_and_kappa(k):
    m = focus_focus(k)
    # hand composition: the shear sits in the fan structure at v1 on the upper cells
    t = monodromy(m, "v0", "s+", "s-", ("both", "rho", "rho"))
    assert _int(t.matrix) == ((1, k), (0, 1))
    assert t.kappa == k == kappa(m, "rho", "rho")
    assert t.is_unipotent() and det(t.matrix) == 1


def test_reversed_loop_is_inverse():
    for m in (focus_focus(), focus_focus(2)):
        there = monodromy(m, "v0", "s+", "s-", ("edge", "rho"))
        back = monodromy(m, "v0", "s-", "s+", ("edge", "rho"))
        assert _int(back.matrix) == _int(inverse(there.matrix))
    m = triangle_3d()
    for (omega, rho), _ in kappa_table(m).items():
        plus, minus = m.codim_one_sides(rho)
        v = m.vertices(omega)[0]
        a = monodromy(m, v, plus, minus, ("edge", omega))
        b = monodromy(m, v, minus, plus, ("edge", omega))
        assert _int(matmul(a.matrix, b.matrix)) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_edge_codim1_and_both_forms_agree():
    m = triangle_3d()
    for (omega, rho), k in kappa_table(m).items():
        plus, minus = m.codim_one_sides(rho)
        v, w = m.vertices(omega)
        by_edge = monodromy(m, v, plus, minus, ("edge", omega))
        by_facet = monodromy(m, v, plus, minus, ("codim1", rho, w))
        both = monodromy(m, v, plus, minus, ("both", omega, rho))
        assert _int(by_edge.matrix) == _int(by_facet.matrix) == _int(both.matrix)
        assert both.kappa == k
        assert both.is_unipotent()


def test_non_incident_cells_raise():
    m = focus_focus()
    with pytest.raises(ValueError, match="not incident"):
        monodromy(m, "v0", "L+", "s-", ("edge", "rho"))
    with pytest.raises(ValueError):
        monodromy(m, "v0", "s+", "s-", ("edge", "a0"))


def test_m_rho_on_focus_focus():
    assert m_rho(focus_focus(), "rho", "v0", "v1") == (1, 0)
    assert m_rho(focus_focus(2), "rho", "v0", "v1") == (2, 0)


def test_focus_focus_certificates():
    m = focus_focus()
    assert check_positive(m).ok and check_simple(m).ok and check_strongly_simple(m).ok
    cells = monodromy_polytopes(m)
    assert cells["rho"].p == 1
    assert cells["rho"].deltas[0].to_json() == {"vertices": [[0], [1]], "rays": []}


def test_kappa_two_is_positive_but_not_simple():
    m = focus_focus(2)
    assert check_positive(m).ok
    cert = check_simple(m)
    assert not cert.ok
    assert any("not elementary" in v for v in cert.violations)
    assert monodromy_polytopes(m)["rho"].deltas[0].to_json() == {"vertices": [[0], [2]], "rays": []}


def test_monodromy_free_complex():
    m = two_squares()
    assert set(kappa_table(m).values()) <= {0}
    assert check_positive(m).ok and check_simple(m).ok
    assert all(c.p == 0 for c in monodromy_polytopes(m).values())


def test_triangle_3d_is_strongly_simple():
    m = triangle_3d()
    assert set(kappa_table(m).values()) == {0, 1}
    assert check_strongly_simple(m).ok
    t = monodromy_polytopes(m)["T"]
    assert t.p == 1 and is_standard_simplex(t.deltas[0])


def test_delta_is_independent_of_base_vertex():
    m = triangle_3d()
    for rho in m.cells_of_dim(2):
        if len(m.star(rho)) != 2:
            continue
        for tau in m.faces(rho):
            if m.cells[tau].dim == 0:
                continue
            forms = {delta_rho(m, rho, tau, v) for v in m.vertices(tau)}
            assert len(forms) == 1
