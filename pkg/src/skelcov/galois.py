"""Monodromy groups, Galois closures and quotients of coverings.

All group computations use the permutation action on the sheets.  The
Galois closure of a connected covering with monodromy group G is the
covering whose fiber is G itself, each generator acting by left
multiplication; right multiplications are its deck transformations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import perm as P
from .bounds import Bounds, resolve
from .complex import MetrizedComplex, ResidueCurve, default_complex, subcomplex
from .coverenum import (CoveringRep, enumerate_tuples, is_connected_rep, lift_id,
                        voltage_to_covering)
from .errors import InvalidInput
from .graph import AugmentedMetricGraph, Edge, Leaf, Vertex
from .jacobian import _check_order, cocycle_normal_form, cyclic_split_covers, toric_and_abelian_rank
from .morphism import HarmonicMorphism, degree


@dataclass(frozen=True)
class MonodromyGroup:
    degree: int
    generators: tuple[P.Perm, ...]
    order: int
    transitive: bool
    chain: P.StabilizerChain = field(repr=False, compare=False)

    def contains(self, g: P.Perm) -> bool:
        return self.chain.contains(g)


def monodromy_group(rep: CoveringRep, bounds: Bounds | None = None) -> MonodromyGroup:
    b = resolve(bounds)
    gens = tuple(g for g in rep.generators() if not P.is_identity(g))
    chain = P.StabilizerChain(list(gens), rep.degree)
    order = chain.order()
    b.check("max_group_order", order)
    return MonodromyGroup(rep.degree, gens, order, P.is_transitive(gens, rep.degree), chain)


def is_galois(rep: CoveringRep, bounds: Bounds | None = None) -> bool:
    """Regular monodromy action, cross-checked against the centralizer size."""
    grp = monodromy_group(rep, bounds)
    if not grp.transitive:
        raise InvalidInput("Galois test needs a connected covering")
    regular = grp.order == rep.degree
    centralizer = P.centralizer_of_transitive(list(grp.generators), rep.degree)
    assert regular == (len(centralizer) == rep.degree)
    return regular


@dataclass(frozen=True)
class GaloisClosure:
    rep: CoveringRep
    group: MonodromyGroup
    elements: list[P.Perm]  # fiber of the closure; sheet k is elements[k]
    stabilizer: list[P.Perm]  # H = Stab(point 0), as elements of G
    stabilizer_deck: list[P.Perm]  # H acting on the closure's sheets by right multiplication


def galois_closure(rep: CoveringRep, bounds: Bounds | None = None) -> GaloisClosure:
    b = resolve(bounds)
    grp = monodromy_group(rep, b)
    if not grp.transitive:
        raise InvalidInput("Galois closure needs a connected covering")
    n = rep.degree
    elements = P.generate_elements(list(grp.generators), n, b.max_group_order)
    index = {g: k for k, g in enumerate(elements)}

    def left(s):
        return tuple(index[P.compose(s, g)] for g in elements)

    volts = {e: left(p) for e, p in rep.voltages.items()}
    extra = tuple(left(p) for p in rep.extra_monodromy)
    closure = CoveringRep(rep.base, rep.spanning_tree, volts, len(elements), extra, rep.monodromy_sites)
    stab = [g for g in elements if g[0] == 0]
    deck = [tuple(index[P.compose(g, h)] for g in elements) for h in stab]
    assert len(elements) == n * len(stab)
    return GaloisClosure(closure, grp, elements, stab, deck)


def deck_group(rep: CoveringRep) -> list[P.Perm]:
    """Permutations of the sheets commuting with all the monodromy."""
    if not is_connected_rep(rep):
        raise InvalidInput("deck group computed for connected coverings only")
    return P.centralizer_of_transitive(rep.generators(), rep.degree)


def quotient(rep: CoveringRep, deck: list[P.Perm]) -> CoveringRep:
    """Covering on the orbits of a group of deck transformations."""
    n = rep.degree
    gens = rep.generators()
    for c in deck:
        P.check_perm(c)
        if len(c) != n:
            raise InvalidInput("deck permutation of the wrong degree")
        for s in gens:
            if P.compose(c, s) != P.compose(s, c):
                raise InvalidInput(f"{P.format_cycles(c)} is not a deck transformation")
    orbs = P.orbits(deck, n)
    where = {x: i for i, orb in enumerate(orbs) for x in orb}
    size = len(orbs[0])
    if any(len(o) != size for o in orbs):
        raise InvalidInput("deck group does not act freely")

    def induced(p):
        return tuple(where[p[orb[0]]] for orb in orbs)

    return CoveringRep(rep.base, rep.spanning_tree, {e: induced(p) for e, p in rep.voltages.items()},
                       len(orbs), tuple(induced(p) for p in rep.extra_monodromy), rep.monodromy_sites)


def _sites(rep: CoveringRep, base: AugmentedMetricGraph) -> dict[str, list[P.Perm]]:
    """Extra monodromy grouped by leaf; vertex sites are not supported."""
    out: dict[str, list[P.Perm]] = {}
    if rep.extra_monodromy and rep.monodromy_sites is None:
        raise InvalidInput("extra monodromy has no sites; only group data is available")
    for site, p in zip(rep.monodromy_sites or (), rep.extra_monodromy):
        if not base.is_leaf(site):
            raise InvalidInput(f"monodromy site {site!r} must be a leaf of the base")
        if site in out:
            raise InvalidInput(f"two permutations at leaf {site!r}")
        out[site] = p
    return out


def branched_covering(rep: CoveringRep, base_complex: MetrizedComplex | None = None
                      ) -> tuple[AugmentedMetricGraph, HarmonicMorphism]:
    """Covering complex with ramification at the leaves carrying extra monodromy.

    Above a base vertex the sheets split into orbits of the local monodromy
    at its leaves; each orbit is one vertex whose genus follows from local
    Riemann-Hurwitz.  Above a leaf with permutation p there is one leaf per
    cycle of p, with dilation the cycle length.  The leaf permutations at a
    vertex, applied in order, must compose to the identity.
    """
    base = rep.base
    cx = base_complex or default_complex(base)
    n = rep.degree
    local = _sites(rep, base)
    verts, edges, leaves = [], [], []
    vmap, emap, dil, vdeg = {}, {}, {}, {}
    owner: dict[tuple[str, int], str] = {}
    genus_of = {}
    for v in base.vertices:
        perms = [local[l] for l in base.incident_leaves(v.id) if l in local]
        total = P.identity(n)
        for p in perms:
            total = P.compose(p, total)
        if not P.is_identity(total):
            raise InvalidInput(f"local monodromy at {v.id} does not compose to the identity")
        for orb in P.orbits(perms, n):
            vid = lift_id(v.id, orb[0])
            inside = set(orb)
            ram = sum(len(c) - 1 for p in perms for c in P.cycles(p) if c[0] in inside)
            two_g_minus_2 = len(orb) * (2 * v.genus - 2) + ram
            if two_g_minus_2 % 2:
                raise InvalidInput(f"odd Riemann-Hurwitz total above {v.id}")
            genus = two_g_minus_2 // 2 + 1
            if genus < 0:
                raise InvalidInput(f"negative genus above {v.id}")
            genus_of[vid] = genus
            verts.append(Vertex(vid, genus))
            vmap[vid] = v.id
            vdeg[vid] = len(orb)
            for x in orb:
                owner[(v.id, x)] = vid
    for e in base.edges:
        sigma = rep.voltages.get(e.id)
        for i in range(n):
            j = sigma[i] if sigma is not None else i
            a, c = owner[(e.tail, i)], owner[(e.head, j)]
            eid = lift_id(e.id, i)
            edges.append(Edge(eid, a, c, e.length))
            emap[eid], dil[eid] = e.id, 1
    for l in base.leaves:
        p = local.get(l.id, P.identity(n))
        for cyc in P.cycles(p):
            lid = lift_id(l.id, cyc[0])
            leaves.append(Leaf(lid, owner[(l.at, cyc[0])]))
            emap[lid], dil[lid] = l.id, len(cyc)
    cover = AugmentedMetricGraph(tuple(verts), tuple(edges), tuple(leaves))
    curves = {v: ResidueCurve(genus_of[v], {h: h for h in cover.half_edges(v)}) for v in cover.vertex_ids}
    source = MetrizedComplex(cover, curves, cx.residue_char)
    return cover, HarmonicMorphism(source, cx, vmap, emap, dil, vdeg)


def closure_is_minimal(rep: CoveringRep, bounds: Bounds | None = None, max_degree: int | None = None) -> bool:
    """No Galois covering of smaller degree than the closure dominates ``rep``.

    Exhaustive: every transitive regular tuple of each smaller degree that is
    a multiple of deg(rep) is tested for an equivariant map onto ``rep``.
    """
    b = resolve(bounds)
    order = monodromy_group(rep, b).order
    gens = rep.generators()
    r = len(gens)
    top = order if max_degree is None else min(order, max_degree + 1)
    for m in range(rep.degree, top):
        if m % rep.degree:
            continue
        for tup in enumerate_tuples(m, r, True, Bounds(max_degree=max(b.max_degree, m),
                                                       max_betti=max(b.max_betti, r),
                                                       max_search=b.max_search)):
            if P.group_order(list(tup), m) != m:
                continue
            for target in range(rep.degree):
                f = P.equivariant_map(list(tup), gens, m, target)
                if f is not None:
                    return False
    return True


def _selection(target: MetrizedComplex, sub) -> MetrizedComplex:
    if isinstance(sub, MetrizedComplex):
        g, h = sub.graph, target.graph
        for v in g.vertex_ids:
            if not h.has_vertex(v):
                raise InvalidInput(f"subcomplex vertex {v} is not in the target")
        for e in g.edges:
            if not h.is_edge(e.id) or {h.edge(e.id).tail, h.edge(e.id).head} != {e.tail, e.head}:
                raise InvalidInput(f"subcomplex edge {e.id} is not in the target")
        for l in g.leaves:
            if not h.is_leaf(l.id):
                raise InvalidInput(f"subcomplex leaf {l.id} is not in the target")
        return sub
    if sub is None:
        return target
    vertices, edges = sub[0], sub[1]
    leaves = sub[2] if len(sub) > 2 else None
    return subcomplex(target, vertices, edges, leaves)


def check_unramified(phi: HarmonicMorphism, sub=None) -> bool:
    """Dilation 1 on every edge and leaf above the subcomplex."""
    s = _selection(phi.target, sub)
    wanted = {e.id for e in s.graph.edges} | {l.id for l in s.graph.leaves}
    return all(phi.d(e) == 1 for e, img in phi.edge_map.items()
               if img in wanted and not phi.is_contracted(e))


def check_totally_split(phi: HarmonicMorphism, sub=None) -> bool:
    """Unramified, and deg(φ) distinct vertices above every vertex of the subcomplex."""
    s = _selection(phi.target, sub)
    if not check_unramified(phi, s):
        return False
    d = degree(phi)
    for w in s.graph.vertex_ids:
        if sum(1 for v, img in phi.vertex_map.items() if img == w) != d:
            return False
    return True


def classify_abelian_covers(cx, n: int, sub=None, residue_char: int | None = None,
                            bounds: Bounds | None = None) -> dict:
    """Stratify the n^{2(t+a)} cyclic classes by their behaviour above Σ.

    Only the totally split stratum is materialized (as graph coverings); each
    of those is checked with the predicates above.  With a proper subcomplex
    the graph-layer classes are also checked above it and counted by whether
    their restriction to it is trivial.
    """
    if not isinstance(cx, MetrizedComplex):
        cx = default_complex(cx)
    p = cx.residue_char if residue_char is None else residue_char
    _check_order(n, p)
    t, a = toric_and_abelian_rank(cx)
    split = n**t
    etale = n ** (t + 2 * a)
    total = n ** (2 * (t + a))
    reps = cyclic_split_covers(cx, n, p, bounds)
    verified = 0
    for _, rep in reps:
        _, phi = voltage_to_covering(rep, cx)
        if check_totally_split(phi, cx) and check_unramified(phi, cx):
            verified += 1
    if verified != split:
        raise AssertionError("a cyclic graph covering failed the totally split check")
    out = {"totally_split": split, "etale_not_split": etale - split, "ramified": total - etale,
           "total": total}
    if sub is not None:
        s = _selection(cx, sub)
        out["subcomplex"] = _restricted_counts(cx, s, reps)
    return out


def _restricted_counts(cx: MetrizedComplex, s: MetrizedComplex, reps) -> dict:
    inside = {e.id for e in s.graph.edges}
    comps = s.graph.components
    trivial = 0
    split = 0
    for lab, rep in reps:
        _, phi = voltage_to_covering(rep, cx)
        split += check_totally_split(phi, s)
        n = rep.degree
        restricted = {e: lab[e] for e in inside}
        ok = True
        for comp in comps:
            piece = s.graph.induced(comp)
            if piece.edges:
                nf = cocycle_normal_form(piece, {e.id: restricted[e.id] for e in piece.edges}, n)
                ok = ok and not any(nf.values())
        trivial += ok
    return {"graph_classes": len(reps), "totally_split_above": split, "trivial_on_subcomplex": trivial}
