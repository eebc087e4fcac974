import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from skelcov.bounds import Bounds
from skelcov.errors import ResourceBoundExceeded
from skelcov.complex import default_complex, subcomplex, validate_complex
from skelcov.coverenum import (are_isomorphic, count_index_subgroups_free, count_transitive_tuples,
                               covering_rep, enumerate_coverings, fiber_product, is_connected_rep,
                               voltage_to_covering)
from skelcov.galois import (check_totally_split, check_unramified, classify_abelian_covers, closure_is_minimal,
                            deck_group, galois_closure, is_galois, quotient)
from skelcov.graph import AugmentedMetricGraph, Edge, Leaf, Vertex, betti_numbers, first_betti, spanning_tree, \
    subdivide, validate_graph
from skelcov.jacobian import (Divisor, divisor_class, divisor_of, is_principal, random_principal_divisor,
                              torsion_filtration, tropical_jacobian)
from skelcov.morphism import compose, degree, is_covering, subdivide_morphism, validate_harmonic
from skelcov.presets import cycle_c2, theta_graph
from skelcov.rigid import lifting_classes

from helpers import closure, equivariant_exists, random_base, random_branched_rep, random_covering, random_perm

seeds = st.integers(0, 2**32 - 1)
SETTINGS = settings(max_examples=40, deadline=None)


def _rename(g, tag):
    return AugmentedMetricGraph(tuple(Vertex(tag + v.id, v.genus) for v in g.vertices),
                                tuple(Edge(tag + e.id, tag + e.tail, tag + e.head, e.length) for e in g.edges),
                                tuple(Leaf(tag + l.id, tag + l.at) for l in g.leaves))


@SETTINGS
@given(seeds, seeds)
def test_betti_is_additive_over_components(s1, s2):
    a, b = _rename(random_base(random.Random(s1)), "a"), _rename(random_base(random.Random(s2)), "b")
    union = AugmentedMetricGraph(a.vertices + b.vertices, a.edges + b.edges, a.leaves + b.leaves)
    assert betti_numbers(union) == [first_betti(a), first_betti(b)]
    assert first_betti(union) == first_betti(a) + first_betti(b)


@SETTINGS
@given(seeds)
def test_valid_graphs_support_every_operation(seed):
    g = random_base(random.Random(seed))
    assert validate_graph(g).ok
    spanning_tree(g)
    tropical_jacobian(g)
    torsion_filtration(g, 2)
    if first_betti(g) <= Bounds().max_betti:
        enumerate_coverings(g, 2)
    else:
        with pytest.raises(ResourceBoundExceeded):
            enumerate_coverings(g, 2)


@SETTINGS
@given(seeds, st.integers(1, 9))
def test_subdivision_keeps_betti(seed, k):
    rng = random.Random(seed)
    g = random_base(rng)
    if not g.edges:
        return
    e = rng.choice(g.edges)
    h = subdivide(g, e.id, e.length * Fraction(k, 10))
    assert first_betti(h) == first_betti(g)
    assert validate_graph(h).ok


@SETTINGS
@given(seeds)
def test_subcomplex_is_idempotent(seed):
    rng = random.Random(seed)
    cx = default_complex(random_base(rng))
    assert validate_complex(cx).ok and validate_graph(cx.graph).ok
    verts = [v for v in cx.graph.vertex_ids if rng.random() < 0.7] or [cx.graph.vertex_ids[0]]
    inside = set(verts)
    edges = [e.id for e in cx.graph.edges if e.tail in inside and e.head in inside and rng.random() < 0.7]
    once = subcomplex(cx, verts, edges)
    assert subcomplex(once, verts, edges) == once
    assert validate_complex(once).ok


@SETTINGS
@given(seeds)
def test_degree_is_multiplicative(seed):
    rng = random.Random(seed)
    g = random_base(rng, max_edges=4)
    n1 = rng.randint(1, 3)
    rep1 = covering_rep(g, [random_perm(rng, n1) for _ in range(first_betti(g))], n1)
    if not is_connected_rep(rep1):
        return
    cover1, phi1 = voltage_to_covering(rep1)
    n2 = rng.randint(1, 2)
    rep2 = covering_rep(cover1, [random_perm(rng, n2) for _ in range(first_betti(cover1))], n2)
    _, phi2 = voltage_to_covering(rep2, phi1.source)
    both = compose(phi2, phi1)
    assert validate_harmonic(both).ok
    assert degree(both) == degree(phi1) * degree(phi2) == n1 * n2


@SETTINGS
@given(seeds)
def test_fibers_over_edges_sum_to_degree(seed):
    rep, phi = random_covering(random.Random(seed))
    tgt = phi.target.graph
    for e in list(tgt.edges) + list(tgt.leaves):
        assert sum(phi.d(x) for x, img in phi.edge_map.items() if img == e.id) == rep.degree


@SETTINGS
@given(seeds, st.integers(1, 9))
def test_subdivision_preserves_harmonicity(seed, k):
    rng = random.Random(seed)
    rep, phi = random_covering(rng)
    if not phi.target.graph.edges:
        return
    e = rng.choice(phi.target.graph.edges)
    psi = subdivide_morphism(phi, e.id, e.length * Fraction(k, 10))
    assert validate_harmonic(psi).ok
    assert is_covering(psi)


@SETTINGS
@given(seeds)
def test_unbranched_voltage_covers_are_totally_split(seed):
    rng = random.Random(seed)
    g = random_base(rng)
    n = rng.randint(1, 4)
    rep = covering_rep(g, [random_perm(rng, n) for _ in range(first_betti(g))], n)
    _, phi = voltage_to_covering(rep)
    assert is_covering(phi) and check_totally_split(phi)


@SETTINGS
@given(seeds)
def test_fiber_product_degree(seed):
    rng = random.Random(seed)
    g = random_base(rng, leaves=False)
    r = first_betti(g)
    n1, n2 = rng.randint(1, 3), rng.randint(1, 3)
    r1 = covering_rep(g, [random_perm(rng, n1) for _ in range(r)], n1)
    r2 = covering_rep(g, [random_perm(rng, n2) for _ in range(r)], n2)
    fp = fiber_product(r1, r2)
    assert fp.rep.degree == n1 * n2
    assert all(is_covering(p) for p in fp.projections)


def test_split_covers_of_complex_match_graph_covers():
    for g in (cycle_c2(), theta_graph()):
        cx = default_complex(g)
        for n in range(1, 4):
            reps = enumerate_coverings(g, n, True)
            assert all(check_totally_split(voltage_to_covering(r, cx)[1]) for r in reps)


def _log_series_transitive(r, n):
    # exponential formula: sum t_m x^m / m! = log(sum (m!)^r x^m / m!)
    a = [Fraction(0)] + [Fraction(factorial(m) ** r, factorial(m)) for m in range(1, n + 1)]
    b = [Fraction(0)] * (n + 1)
    for m in range(1, n + 1):
        b[m] = a[m] - sum(Fraction(k, m) * b[k] * a[m - k] for k in range(1, m))
    return [b[m] * factorial(m) for m in range(n + 1)]


def test_subgroup_counts_for_small_ranks_and_indices():
    for r in range(1, 4):
        t = _log_series_transitive(r, 5)
        for n in range(1, 6):
            assert count_transitive_tuples(r, n) == t[n]
            assert count_index_subgroups_free(r, n) == t[n] / factorial(n - 1)


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_unramified_covers_have_one_lifting_class(seed):
    rng = random.Random(seed)
    g = random_base(rng, max_edges=3, leaves=False)
    if len(g.vertices) > 2:
        return
    n = rng.randint(1, 3)
    rep = covering_rep(g, [random_perm(rng, n) for _ in range(first_betti(g))], n)
    _, phi = voltage_to_covering(rep)
    assert len(lifting_classes(phi).classes) == 1


@SETTINGS
@given(seeds, st.integers(2, 5))
def test_torsion_divisibility_chain(seed, n):
    g = random_base(random.Random(seed))
    tf = torsion_filtration(g, n)
    assert tf["connected"] == tf["toric"] * n ** (2 * tf["a"])
    assert tf["total"] == tf["connected"] * n ** tf["t"]


@SETTINGS
@given(seeds)
def test_principal_divisors_form_a_subgroup(seed):
    rng = random.Random(seed)
    g = random_base(rng, leaves=False)
    d1, d2 = random_principal_divisor(g, rng), random_principal_divisor(g, rng)
    assert is_principal(g, d1)[0] and is_principal(g, d2)[0]
    assert is_principal(g, d1 + d2)[0] and is_principal(g, -d1)[0]
    ok, f = is_principal(g, d1 + d2)
    assert divisor_class(g, divisor_of(f)).is_zero()
    assert divisor_of(f) == Divisor(d1 + d2)


@SETTINGS
@given(seeds)
def test_closure_is_galois_and_recovers_input(seed):
    rep = random_branched_rep(random.Random(seed))
    if not is_connected_rep(rep):
        return
    gc = galois_closure(rep)
    assert is_galois(gc.rep)
    assert are_isomorphic(quotient(gc.rep, gc.stabilizer_deck), rep)


def _brute_minimal(rep, order):
    gens = rep.generators()
    r = len(gens)
    import itertools
    for m in range(1, order):
        perms = list(itertools.permutations(range(m)))
        for tup in itertools.product(perms, repeat=r):
            if equivariant_exists(tup, gens, m, rep.degree) and len(closure(tup, m)) == m:
                return False
    return True


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_minimality_against_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 3)
    g = theta_graph() if rng.random() < 0.5 else cycle_c2()
    rep = covering_rep(g, [random_perm(rng, n) for _ in range(first_betti(g))], n)
    if not is_connected_rep(rep):
        return
    order = len(closure(rep.generators(), n))
    assert closure_is_minimal(rep) == _brute_minimal(rep, order) == True  # noqa: E712


@SETTINGS
@given(seeds)
def test_quotients_of_split_galois_covers_are_split(seed):
    rng = random.Random(seed)
    g = random_base(rng, max_edges=4, leaves=False)
    n = rng.randint(1, 3)
    rep = covering_rep(g, [random_perm(rng, n) for _ in range(first_betti(g))], n)
    if not is_connected_rep(rep):
        return
    top = galois_closure(rep).rep
    deck = deck_group(top)
    h = rng.choice(deck)
    sub = sorted(closure([h], top.degree))
    low = quotient(top, sub)
    assert check_totally_split(voltage_to_covering(top)[1])
    assert check_totally_split(voltage_to_covering(low)[1])


@SETTINGS
@given(seeds, st.integers(2, 4))
def test_totally_split_implies_unramified_over_subcomplexes(seed, n):
    rng = random.Random(seed)
    rep, phi = random_covering(rng)
    tg = phi.target.graph
    verts = [v for v in tg.vertex_ids if rng.random() < 0.6] or [tg.vertex_ids[0]]
    sub = (verts, [], [])
    if check_totally_split(phi, sub):
        assert check_unramified(phi, sub)


@SETTINGS
@given(seeds, st.integers(2, 4))
def test_classify_strata_sum_to_total(seed, n):
    cx = default_complex(random_base(random.Random(seed), max_edges=4))
    out = classify_abelian_covers(cx, n)
    assert out["totally_split"] + out["etale_not_split"] + out["ramified"] == out["total"]
    assert out["total"] == torsion_filtration(cx, n)["total"]
