import random

import pytest

from skelcov import perm as P
from skelcov.coverenum import are_isomorphic, covering_rep, is_connected_rep, voltage_to_covering
from skelcov.errors import InvalidInput
from skelcov.galois import (branched_covering, check_totally_split, check_unramified, classify_abelian_covers,
                            closure_is_minimal, deck_group, galois_closure, is_galois, monodromy_group,
                            quotient)
from skelcov.graph import total_genus
from skelcov.morphism import degree, is_covering
from skelcov.presets import (c2_double_cover, c2_triple_cover, cycle_c2, genus2_complex, s3_base, s3_cover,
                             tate_complex, tate_double_cover, theta_graph)

from helpers import closure, random_branched_rep, random_covering


def test_s3_monodromy():
    rep = s3_cover()
    grp = monodromy_group(rep)
    assert grp.order == 6 and grp.transitive
    assert not is_galois(rep)
    assert deck_group(rep) == [P.identity(3)]


def test_cyclic_cover_is_its_own_closure():
    rep = c2_triple_cover()
    assert is_galois(rep)
    assert len(deck_group(rep)) == 3
    gc = galois_closure(rep)
    assert gc.rep.degree == 3
    assert are_isomorphic(gc.rep, rep)
    assert closure_is_minimal(rep)


def test_s3_closure():
    rep = s3_cover()
    gc = galois_closure(rep)
    assert gc.rep.degree == 6
    assert is_galois(gc.rep)
    assert len(gc.stabilizer) == 2
    assert len(deck_group(gc.rep)) == 6
    back = quotient(gc.rep, gc.stabilizer_deck)
    assert back.degree == 3 and are_isomorphic(back, rep)
    assert closure_is_minimal(rep)


def test_quotient_rejects_non_deck_permutations():
    rep = s3_cover()
    with pytest.raises(InvalidInput):
        quotient(rep, [P.parse_perm("(1 2)", 3)])


def test_closure_needs_connected_cover():
    rep = covering_rep(cycle_c2(), ["(1 2)"], 3)
    with pytest.raises(InvalidInput):
        galois_closure(rep)


def test_random_closures():
    rng = random.Random(12)
    done = 0
    while done < 40:
        rep = random_branched_rep(rng)
        if not is_connected_rep(rep):
            continue
        done += 1
        order = len(closure(rep.generators(), rep.degree))
        gc = galois_closure(rep)
        assert gc.rep.degree == order
        assert is_galois(gc.rep)
        assert len(gc.stabilizer) * rep.degree == order
        assert are_isomorphic(quotient(gc.rep, gc.stabilizer_deck), rep)


def test_s3_branched_cover_shape():
    _, phi = branched_covering(s3_cover())
    g = phi.source.graph
    assert is_covering(phi) and degree(phi) == 3
    assert [v.genus for v in g.vertices] == [0]
    assert len(g.leaves) == 5
    _, psi = branched_covering(galois_closure(s3_cover()).rep)
    assert is_covering(psi) and degree(psi) == 6
    assert len(psi.source.graph.leaves) == 8
    assert total_genus(psi.source.graph) == 0


def test_branched_cover_requires_product_one():
    rep = covering_rep(s3_base(), [], 3, ["(1 2)", "(2 3)", "(1 2)"], ["P1", "P2", "P3"])
    with pytest.raises(InvalidInput):
        branched_covering(rep)


def test_split_and_unramified_predicates():
    phi = tate_double_cover()
    assert not check_unramified(phi) and not check_totally_split(phi)
    _, psi = voltage_to_covering(c2_double_cover())
    assert check_unramified(psi) and check_totally_split(psi)
    _, chi = branched_covering(s3_cover())
    assert check_unramified(chi, (["x"], [], [])) and not check_totally_split(chi, (["x"], [], []))
    assert not check_unramified(chi)


def test_totally_split_implies_unramified_on_random_covers():
    rng = random.Random(13)
    for _ in range(100):
        _, phi = random_covering(rng)
        if check_totally_split(phi):
            assert check_unramified(phi)


def test_classify_counts():
    assert classify_abelian_covers(tate_complex(), 2) == \
        {"totally_split": 2, "etale_not_split": 0, "ramified": 2, "total": 4}
    assert classify_abelian_covers(genus2_complex(), 2) == \
        {"totally_split": 2, "etale_not_split": 6, "ramified": 8, "total": 16}
    out = classify_abelian_covers(theta_graph(), 3)
    assert out["totally_split"] == 9 and out["total"] == 81


def test_classify_over_a_subcomplex():
    out = classify_abelian_covers(genus2_complex(), 3, (["v1", "v2"], ["e1"]))
    sub = out["subcomplex"]
    assert sub["graph_classes"] == 3
    assert sub["totally_split_above"] == 3
    # a tree carries no cyclic monodromy, so every class restricts trivially
    assert sub["trivial_on_subcomplex"] == 3
    out = classify_abelian_covers(theta_graph(), 2, (["v1", "v2"], ["e1", "e2"]))
    assert out["subcomplex"]["trivial_on_subcomplex"] == 2
