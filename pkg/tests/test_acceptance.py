"""Acceptance criteria 1-8, each reported as one PASS/FAIL line with its runtime."""
from __future__ import annotations

import random
import time
from fractions import Fraction

import oracle
from tropscat.algebra import (
    Laurent,
    LieElement,
    Polyvector,
    RingElement,
    bracket,
    bv_delta,
    check_bv_identity,
    exp_action,
    is_divergence_free,
    log_one_plus,
    wall_action_closed_form,
)
from tropscat.fixtures import focus_focus, ks2, random_lines, triangle_3d
from tropscat.gluing import (
    are_cohomologous,
    check_gluing,
    check_lifting_condition,
    check_slab_functions,
    cocycle_mutants,
    coboundary,
    gluing_product,
    lifting_mutants,
    pm_is_trivial,
    pm_restrict,
    random_coboundary,
)
from tropscat.manifold import check_closure, singular_locus, validate_manifold
from tropscat.monodromy import check_positive, check_strongly_simple, kappa_table, monodromy
from tropscat.scattering import apply_path, check_consistency, complete, initial_diagram

RESULTS: list[str] = []


def _report(number: int, title: str, ok: bool, seconds: float, limit: float, detail: str = ""):
    verdict = "PASS" if ok and seconds < limit else "FAIL"
    extra = f"; {detail}" if detail else ""
    RESULTS.append(f"criterion {number} {verdict}: {title} ({seconds:.2f} s, limit {limit:g} s{extra})")
    assert ok, detail
    assert seconds < limit, f"took {seconds:.2f} s"


# random elements


def _monomial(rng, rank: int, bound: int = 2) -> tuple:
    return tuple(rng.randint(-bound, bound) for _ in range(rank))


def _lie(rng, ring: Laurent, terms: int | None = None) -> LieElement:
    out = LieElement(ring, {})
    for _ in range(terms or rng.randint(1, 3)):
        n = tuple(Fraction(rng.randint(-3, 3)) for _ in range(ring.rank))
        out = out + LieElement(ring, {(rng.randint(0, ring.order), _monomial(rng, ring.rank)): n})
    return out


def _polyvector(rng, ring: Laurent, degree: int) -> Polyvector:
    out = Polyvector(ring, {})
    for _ in range(rng.randint(1, 3)):
        ns = [tuple(rng.randint(-2, 2) for _ in range(ring.rank)) for _ in range(degree)]
        out = out + Polyvector.term(ring, rng.choice([1, -1, 2, Fraction(1, 2)]),
                                    rng.randint(0, ring.order), _monomial(rng, ring.rank), *ns)
    return out


def _function(rng, ring: Laurent) -> RingElement:
    out = ring.zero()
    for _ in range(rng.randint(1, 3)):
        out = out + ring.monomial(_monomial(rng, ring.rank), rng.randint(0, ring.order), rng.randint(-3, 3))
    return out


def test_criterion_1_algebra_laws():
    rng = random.Random(1001)
    t0 = time.perf_counter()
    cases = 0
    bad = []
    while cases < 200:
        ring = Laurent(rng.randint(1, 3), rng.randint(1, 4))
        a, b, c = (_lie(rng, ring) for _ in range(3))
        if bracket(a, b) != -bracket(b, a):
            bad.append(("antisymmetry", a, b))
        jac = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))
        if jac:
            bad.append(("jacobi", a, b, c))
        p = _polyvector(rng, ring, rng.randint(0, ring.rank))
        if bv_delta(bv_delta(p)):
            bad.append(("delta squared", p))
        v = _polyvector(rng, ring, rng.randint(0, ring.rank))
        w = _polyvector(rng, ring, rng.randint(0, ring.rank))
        if not check_bv_identity(v, w):
            bad.append(("bv identity", v, w))
        cases += 1
    _report(1, "bracket antisymmetry, Jacobi, Delta^2 = 0, BV identity", not bad,
            time.perf_counter() - t0, 5, f"{cases} cases, {len(bad)} failures")


def test_criterion_2_vertex_group_action():
    rng = random.Random(2002)
    t0 = time.perf_counter()
    bad = []
    for _ in range(100):
        rank = rng.randint(2, 3)
        ring = Laurent(rank, rng.randint(1, 6))
        m = _monomial(rng, rank)
        while not any(m):
            m = _monomial(rng, rank)
        # n orthogonal to m: a random integer combination of pairwise cross terms
        pairs = [(i, k) for i in range(rank) for k in range(i + 1, rank)]
        n = [0] * rank
        for i, k in pairs:
            c = rng.randint(-2, 2)
            n[i] += c * m[k]
            n[k] -= c * m[i]
        if not any(n):
            i, k = next((i, k) for i, k in pairs if m[i] or m[k])
            n[i], n[k] = m[k], -m[i]
        f = ring.one() + ring.monomial(m, 1)
        theta = LieElement.times_function(log_one_plus(f - ring.one()), n)
        x, y = _function(rng, ring), _function(rng, ring)
        gx, gy = exp_action(theta, x), exp_action(theta, y)
        if exp_action(theta, x * y) != gx * gy or exp_action(theta, x + y) != gx + gy:
            bad.append(("not a ring map", m, n, x, y))
        if exp_action(-theta, gx) != x:
            bad.append(("not invertible", m, n, x))
        if wall_action_closed_form(f, n, x) != gx:
            bad.append(("closed form", m, n, x))
    _report(2, "exp_action is a ring automorphism and matches the closed form", not bad,
            time.perf_counter() - t0, 10, f"100 cases, {len(bad)} failures")


def test_criterion_3_ks2():
    t0 = time.perf_counter()
    problems = []
    # oracle: every single ray 1 + c q^2 z^m (|m_i| <= 2) that makes the order-2 loop trivial
    admissible = set()
    for a in range(-2, 3):
        for b in range(-2, 3):
            if (a, b) == (0, 0):
                continue
            h = oracle.primitive((a, b))
            perp = oracle.primitive((-b, a))
            for hd in (h, (-h[0], -h[1])):
                for c in (1, -1, 2, -2):
                    for s in (1, -1):
                        ray = (hd, oracle.wall_function(2, (a, b), c), (s * perp[0], s * perp[1]), (-hd[1], hd[0]))
                        if oracle.is_identity(oracle.loop_product(oracle.ks2_rays(2, [ray]), 2)):
                            admissible.add((hd, (a, b)))
    if admissible != {((1, 1), (1, 1)), ((-1, -1), (1, 1))}:
        problems.append(f"oracle admits {sorted(admissible)}")

    signs: list = []
    d2 = complete(ks2(), 2)
    new = [w for w in d2.walls if w.id not in ("W0", "W1")]
    if len(new) != 1:
        problems.append(f"order 2 inserted {len(new)} walls")
    else:
        w = new[0]
        h = tuple(int(x) for x in w.support.direction)
        normal, log = w.oriented()
        if w.support.kind != "ray" or not any(h == hd for hd, _ in admissible):
            problems.append(f"inserted wall {w.support.describe()} is not an admissible ray")
        # the sign of n is whichever the oracle accepts at order 6
        for s in (1, -1):
            n = (s * normal[0], s * normal[1])
            ray = (h, oracle.wall_function(2, (1, 1)), n, normal)
            if oracle.is_identity(oracle.loop_product(oracle.ks2_rays(6, [ray]), 6)):
                signs.append(s)
        if len(signs) != 1:
            problems.append(f"oracle sign choices at order 6: {signs}")
        else:
            ring = Laurent(2, 2)
            n = tuple(signs[0] * x for x in normal)
            expected = LieElement.times_function(log_one_plus(ring.monomial((1, 1), 2)), n)
            if log != expected:
                problems.append(f"order 2 logarithm {log} differs from {expected}")

    for k in range(3, 7):
        dk = complete(ks2(), k)
        if len(dk.walls) != 3:
            problems.append(f"order {k}: {len(dk.walls)} walls")
    d6 = complete(ks2(), 6)
    if not check_consistency(d6, 6).consistent:
        problems.append("check_consistency fails at order 6")
    w2 = [w for w in d6.walls if w.id not in ("W0", "W1")][0]
    normal, log = w2.oriented()
    ring = Laurent(2, 6)
    n = tuple(signs[0] * x for x in normal) if len(signs) == 1 else normal
    if log != LieElement.times_function(log_one_plus(ring.monomial((1, 1), 2)), n):
        problems.append(f"order 6 logarithm {log}")
    # the oracle's own loop with the package's walls at order 6
    rays = oracle.ks2_rays(6, [(tuple(int(x) for x in w2.support.direction), oracle.wall_function(2, (1, 1)),
                                n, normal)])
    if not oracle.is_identity(oracle.loop_product(rays, 6)):
        problems.append("oracle loop with the completed diagram is not trivial")
    if any(not is_divergence_free(w.log) for w in d6.walls):
        problems.append("non divergence-free wall")
    _report(3, "KS2 completion inserts one ray along (1,1) and nothing more to order 6", not problems,
            time.perf_counter() - t0, 30, "; ".join(problems))


def test_criterion_4_random_diagrams():
    t0 = time.perf_counter()
    problems = []
    for seed in range(25):
        d = random_lines(random.Random(seed), order=4)
        c = complete(d, 4)
        if not check_consistency(c, 4).consistent:
            problems.append(f"seed {seed}: inconsistent")
        if complete(c, 4) != c:
            problems.append(f"seed {seed}: not idempotent")
        for j in range(1, 4):
            if c.truncate(j) != complete(d.with_order(j), j):
                problems.append(f"seed {seed}: truncation to {j} differs")
        if any(not is_divergence_free(w.log) for w in c.walls):
            problems.append(f"seed {seed}: non divergence-free wall")
    _report(4, "25 random diagrams: consistent, idempotent, order-coherent", not problems,
            time.perf_counter() - t0, 120, "; ".join(problems[:3]))


def test_criterion_5_focus_focus():
    t0 = time.perf_counter()
    problems = []
    m = focus_focus()
    if not validate_manifold(m).ok:
        problems.append("does not validate")
    # hand composition: v0 -> v1 through s+ picks up the shear, v1 -> v0 through s- is trivial
    shear = ((1, 1), (0, 1))
    there = shear
    back = ((1, 0), (0, 1))
    hand = tuple(tuple(sum(back[i][r] * there[r][c] for r in range(2)) for c in range(2)) for i in range(2))
    t = monodromy(m, "v0", "s+", "s-", ("edge", "rho"))
    if tuple(tuple(int(x) for x in row) for row in t.matrix) != hand:
        problems.append(f"monodromy {t.matrix} differs from {hand}")
    if not t.is_unipotent():
        problems.append("monodromy not unipotent")
    # hand kappa: (T - 1) applied to the primitive normal of rho, in units of rho's direction
    shift = tuple(hand[i][1] - (i == 1) for i in range(2))
    if shift != (1, 0) or set(kappa_table(m).values()) != {1}:
        problems.append(f"kappa table {kappa_table(m)}")
    if not check_positive(m).ok or not check_strongly_simple(m).ok:
        problems.append("positivity or strong simplicity fails")
    ess = singular_locus(m, essential_only=True)
    if len(ess) != 1 or ess[0].dim != 0:
        problems.append(f"essential strata {[s.to_json() for s in ess]}")
    if not check_slab_functions(m).ok:
        problems.append("slab checks fail")
    for k in range(1, 5):
        d = initial_diagram(m, order=k)
        ring = d.slab("S0").ring(k)
        for g in ring.generators():
            y = apply_path(d, "C5,S0,C4", g)
            if apply_path(d, "C4,S0,C5", y) != g:
                problems.append(f"order {k}: crossing twice moves {g}")
    _report(5, "focus-focus pipeline", not problems, time.perf_counter() - t0, 5, "; ".join(problems))


def _same_gluing(m, a, b) -> bool:
    diff = gluing_product(m, a, b, -1)
    return all(pm_is_trivial(pm_restrict(m, pm, tau)) for (_, tau), pm in diff.items())


def test_criterion_6_gluing_cohomology():
    t0 = time.perf_counter()
    problems = []
    rng = random.Random(6006)
    fixtures = [focus_focus(), triangle_3d()]
    for i in range(50):
        m = fixtures[i % 2]
        s, _ = random_coboundary(m, rng)
        if not check_gluing(m, s).ok:
            problems.append(f"{m.name}: coboundary {i} fails the cocycle check")
        res = are_cohomologous(m, s, {})
        if not res.cohomologous or not _same_gluing(m, coboundary(m, res.witness), s):
            problems.append(f"{m.name}: round trip {i} fails")
    mutants = [x for m in fixtures for x, _ in cocycle_mutants(m, rng, 5)]
    rejected = sum(not check_gluing(m, x).ok for m, x in zip([fixtures[0]] * 5 + [fixtures[1]] * 5, mutants))
    lm = lifting_mutants(fixtures[1], rng, 10)
    rejected += sum(not check_lifting_condition(fixtures[1], x).ok for x, _ in lm)
    if rejected != 20:
        problems.append(f"only {rejected} of 20 mutants rejected")
    _report(6, "50 coboundary round trips, 20 mutants rejected", not problems,
            time.perf_counter() - t0, 10, "; ".join(problems[:3]))


def test_criterion_7_stratum_closure():
    t0 = time.perf_counter()
    m = triangle_3d()
    problems = check_closure(m) + check_closure(m, essential=True)
    strata = singular_locus(m)
    if not strata:
        problems.append("no strata")
    _report(7, "3D stratum closures are unions of strata", not problems,
            time.perf_counter() - t0, 10, "; ".join([f"{len(strata)} strata"] + problems[:3]))


def test_criterion_8_divergence_free():
    t0 = time.perf_counter()
    inserted = []
    for k in (2, 6):
        inserted += [w for w in complete(ks2(), k).walls if w.id not in ("W0", "W1")]
    for seed in range(25):
        d = random_lines(random.Random(seed), order=4)
        ids = {w.id for w in d.walls}
        inserted += [w for w in complete(d, 4).walls if w.id not in ids]
    bad = [w.id for w in inserted if not is_divergence_free(w.log)]
    # runs inside the budgets of criteria 3 and 4
    _report(8, "inserted walls are divergence-free", not bad and bool(inserted),
            time.perf_counter() - t0, 30 + 120, f"{len(inserted)} walls checked")
