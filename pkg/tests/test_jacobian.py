import random
from fractions import Fraction

import pytest

from skelcov.complex import default_complex
from skelcov.coverenum import voltage_to_covering
from skelcov.errors import InvalidInput
from skelcov.galois import check_totally_split
from skelcov.graph import AugmentedMetricGraph, first_betti
from skelcov.jacobian import (Divisor, abel_jacobi, cocycle_normal_form, cyclic_split_covers, distance_divisor,
                              divisor_class, divisor_of, is_principal, jacobian_torsion_count,
                              random_principal_divisor, tate_module_ranks, torsion_filtration,
                              tropical_jacobian)
from skelcov.linalg import is_positive_definite
from skelcov.presets import cycle_c2, genus2_complex, path_tree, tate_complex, theta_graph

from helpers import random_base

F = Fraction


def test_period_matrices():
    assert tropical_jacobian(cycle_c2()).period_matrix == [[2]]
    assert tropical_jacobian(theta_graph()).period_matrix == [[2, 1], [1, 2]]
    assert tropical_jacobian(cycle_c2(F(1, 2))).period_matrix == [[1]]
    assert tropical_jacobian(path_tree(4)).dimension == 0


def test_period_matrix_positive_definite_on_random_graphs():
    rng = random.Random(2)
    for _ in range(50):
        g = random_base(rng)
        jac = tropical_jacobian(g)
        assert jac.dimension == first_betti(g)
        if jac.dimension:
            assert is_positive_definite(jac.period_matrix)


def test_c2_examples():
    g = cycle_c2()
    d = Divisor.on(g, [("v1", 1), ("v2", -1)])
    cls = divisor_class(g, d)
    assert cls.lattice_coords == [F(1, 2)] and not cls.is_zero()
    assert is_principal(g, d) == (False, None)
    ok, f = is_principal(g, d.scaled(2))
    assert ok
    assert divisor_of(f) == d.scaled(2)
    assert f.slopes == {"e1": 1, "e2": 1}
    assert f.values == {"v1": 0, "v2": 1}


def test_points_at_edge_ends_are_vertices():
    g = cycle_c2()
    assert Divisor.on(g, [(("e1", 0), 1), (("e1", 1), -1)]) == Divisor({"v1": 1, "v2": -1})
    with pytest.raises(InvalidInput):
        Divisor.on(g, [(("e1", 2), 1)])
    with pytest.raises(InvalidInput):
        divisor_class(g, Divisor.on(g, [("v1", 1)]))


def _circle_coordinate(pt, l1):
    # C2 as a circle: v1 at 0, e1 runs forward to v2 at l1, e2 runs backward from v1
    if pt == "v1":
        return F(0)
    if pt == "v2":
        return l1
    e, t = pt
    return t if e == "e1" else -t


def test_c2_classes_match_circle_arithmetic():
    rng = random.Random(4)
    for _ in range(200):
        l1, l2 = F(rng.randint(1, 6), rng.randint(1, 3)), F(rng.randint(1, 6), rng.randint(1, 3))
        g = AugmentedMetricGraph.build(["v1", "v2"], [("e1", "v1", "v2", l1), ("e2", "v1", "v2", l2)])
        terms = []
        for _ in range(rng.randint(1, 4)):
            e = rng.choice(["e1", "e2", "v1", "v2"])
            length = l1 if e == "e1" else l2
            pt = e if e.startswith("v") else (e, length * F(rng.randint(1, 5), 6))
            terms.append((pt, rng.randint(-3, 3)))
        k = sum(c for _, c in terms)
        terms.append(("v1", -k))
        d = Divisor.on(g, terms)
        total = l1 + l2
        s = sum((c * _circle_coordinate(pt, l1) for pt, c in d.items()), F(0))
        expected_zero = (s / total).denominator == 1
        assert divisor_class(g, d).is_zero() == expected_zero
        ok, f = is_principal(g, d)
        assert ok == expected_zero
        if ok:
            assert divisor_of(f) == d


def test_distance_functions_give_principal_divisors():
    rng = random.Random(8)
    for _ in range(60):
        g = random_base(rng, leaves=False)
        v = rng.choice(g.vertex_ids)
        d = distance_divisor(g, v)
        assert d.degree() == 0
        assert divisor_class(g, d).is_zero()


def test_random_principal_round_trip():
    rng = random.Random(6)
    for g in (cycle_c2(), theta_graph(), cycle_c2(genus=(1, 0))):
        for _ in range(50):
            d = random_principal_divisor(g, rng)
            assert divisor_class(g, d).is_zero()
            ok, f = is_principal(g, d)
            assert ok and divisor_of(f) == d


def test_abel_jacobi_is_additive():
    g = theta_graph()
    jac = tropical_jacobian(g)
    a = Divisor.on(g, [(("e2", F(1, 3)), 1), ("v1", -1)])
    b = Divisor.on(g, [(("e3", F(1, 2)), 2), ("v2", -2)])
    sa, sb, sab = abel_jacobi(g, jac, a), abel_jacobi(g, jac, b), abel_jacobi(g, jac, a + b)
    assert sab == [x + y for x, y in zip(sa, sb)]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_jacobian_torsion_count(n):
    assert jacobian_torsion_count(cycle_c2(), n) == n
    assert jacobian_torsion_count(theta_graph(), n) == n**2


def test_torsion_filtration_examples():
    assert {k: torsion_filtration(tate_complex(), 2)[k] for k in ("toric", "connected", "total")} == \
        {"toric": 2, "connected": 2, "total": 4}
    tf = torsion_filtration(genus2_complex(), 2)
    assert (tf["toric"], tf["connected"], tf["total"]) == (2, 8, 16)
    assert tate_module_ranks(genus2_complex()) == {"toric": 1, "connected": 3, "total": 4}
    assert tate_module_ranks(tate_complex()) == {"toric": 1, "connected": 1, "total": 2}


def test_torsion_order_must_be_tame():
    with pytest.raises(InvalidInput):
        torsion_filtration(tate_complex(2), 4)
    assert torsion_filtration(tate_complex(2), 3)["toric"] == 3


@pytest.mark.parametrize("n", [2, 3, 5])
@pytest.mark.parametrize("make", [tate_complex, genus2_complex, lambda: default_complex(theta_graph())])
def test_split_covers_are_distinct_classes(make, n):
    cx = make()
    covers = cyclic_split_covers(cx, n)
    t = first_betti(cx.graph)
    assert len(covers) == n**t
    forms = {tuple(sorted(cocycle_normal_form(cx.graph, lab, n).items())) for lab, _ in covers}
    assert len(forms) == n**t
    for _, rep in covers:
        _, phi = voltage_to_covering(rep, cx)
        assert check_totally_split(phi)


def test_coboundaries_have_zero_normal_form():
    rng = random.Random(1)
    for _ in range(50):
        g = random_base(rng)
        n = rng.randint(2, 5)
        f = {v: rng.randrange(n) for v in g.vertex_ids}
        lab = {e.id: (f[e.head] - f[e.tail]) % n for e in g.edges}
        assert not any(cocycle_normal_form(g, lab, n).values())
