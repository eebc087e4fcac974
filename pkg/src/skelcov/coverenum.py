"""Finite coverings of graphs presented by permutation voltages.

A covering of degree n of a connected graph is given by one permutation of
the sheets per co-tree edge of a fixed spanning tree.  Isomorphism classes
of coverings are simultaneous-conjugacy classes of these tuples, which are
enumerated here by orderly generation: a tuple is emitted only when it is
the lexicographically least member of its class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial, gcd
from typing import Sequence

from . import perm as P
from .bounds import Bounds, resolve
from .complex import MetrizedComplex, ResidueCurve, default_complex, require_valid_complex
from .errors import InvalidInput
from .graph import (AugmentedMetricGraph, Edge, Leaf, Vertex, first_betti, require_valid,
                    spanning_tree)
from .linalg import count_hom_to_cyclic
from .morphism import HarmonicMorphism


@dataclass(frozen=True)
class CoveringRep:
    base: AugmentedMetricGraph
    spanning_tree: tuple[str, ...]
    voltages: dict[str, P.Perm]  # co-tree edge -> permutation of the sheets
    degree: int
    extra_monodromy: tuple[P.Perm, ...] = ()
    monodromy_sites: tuple[str, ...] | None = None  # vertex or leaf per extra permutation

    @property
    def cotree(self) -> tuple[str, ...]:
        tree = set(self.spanning_tree)
        return tuple(e.id for e in self.base.edges if e.id not in tree)

    def voltage_tuple(self) -> tuple[P.Perm, ...]:
        return tuple(self.voltages[e] for e in self.cotree)

    def generators(self) -> list[P.Perm]:
        """Voltages in co-tree order followed by the extra monodromy."""
        return list(self.voltage_tuple()) + list(self.extra_monodromy)

    def with_tuple(self, perms: Sequence[P.Perm], extra: Sequence[P.Perm] | None = None,
                   degree: int | None = None) -> CoveringRep:
        n = self.degree if degree is None else degree
        return CoveringRep(self.base, self.spanning_tree, dict(zip(self.cotree, perms)), n,
                           tuple(self.extra_monodromy if extra is None else extra),
                           self.monodromy_sites)


def covering_rep(base: AugmentedMetricGraph, voltages=None, degree: int | None = None,
                 extra_monodromy=(), monodromy_sites=None, tree_edges=None) -> CoveringRep:
    """Build and validate a rep; voltages may be a dict or a list in co-tree order.

    Permutations are accepted in any notation understood by ``parse_perm``.
    """
    require_valid(base)
    tree = spanning_tree(base, tree_edges)
    voltages = voltages if voltages is not None else {}
    if not isinstance(voltages, dict):
        voltages = list(voltages)
        if len(voltages) != len(tree.cotree_edges):
            raise InvalidInput(f"expected {len(tree.cotree_edges)} voltages, got {len(voltages)}")
        voltages = dict(zip(tree.cotree_edges, voltages))
    raw = list(voltages.values()) + list(extra_monodromy)
    if degree is None:
        degree = _infer_degree(raw)
    volts = {e: P.parse_perm(p, degree) if not _is_internal(p) else tuple(p) for e, p in voltages.items()}
    extra = tuple(P.parse_perm(p, degree) if not _is_internal(p) else tuple(p) for p in extra_monodromy)
    rep = CoveringRep(base, tree.tree_edges, volts, degree, extra,
                      None if monodromy_sites is None else tuple(monodromy_sites))
    validate_rep(rep)
    return rep


def _is_internal(p) -> bool:
    return isinstance(p, tuple) and all(isinstance(x, int) for x in p) and sorted(p) == list(range(len(p)))


def _infer_degree(perms) -> int:
    best = 1
    for p in perms:
        if isinstance(p, (list, tuple)) and all(isinstance(x, int) for x in p):
            best = max(best, len(p))
        else:
            best = max(best, len(P.parse_perm(p)))
    return best


def validate_rep(rep: CoveringRep) -> None:
    if rep.degree < 1:
        raise InvalidInput("degree must be positive")
    if set(rep.voltages) != set(rep.cotree):
        raise InvalidInput(f"voltages must be given exactly on the co-tree edges {list(rep.cotree)}")
    if len(rep.voltages) != first_betti(rep.base):
        raise InvalidInput("number of voltages differs from the first Betti number")
    for p in rep.generators():
        P.check_perm(p)
        if len(p) != rep.degree:
            raise InvalidInput(f"permutation {P.format_cycles(p)} is not of degree {rep.degree}")
    if rep.monodromy_sites is not None and len(rep.monodromy_sites) != len(rep.extra_monodromy):
        raise InvalidInput("one site is needed per extra monodromy permutation")


def lift_id(x: str, sheet: int) -> str:
    return f"{x}.{sheet + 1}"


def voltage_to_covering(rep: CoveringRep, base_complex: MetrizedComplex | None = None
                        ) -> tuple[AugmentedMetricGraph, HarmonicMorphism]:
    """Covering graph on V×{1..n} with its projection to the base complex.

    Tree edges lift sheet-wise; a co-tree edge with voltage σ lifts to
    (u, i) → (v, σ(i)).  Residue curves above a vertex copy the labels and
    automorphism tables of the base curve.
    """
    base = rep.base
    cx = base_complex or default_complex(base)
    if base_complex is not None:
        require_valid_complex(cx)
        if cx.graph != base:
            raise InvalidInput("complex does not sit on the covering's base graph")
    n = rep.degree
    verts, edges, leaves = [], [], []
    vmap, emap = {}, {}
    for v in base.vertices:
        for i in range(n):
            vid = lift_id(v.id, i)
            verts.append(Vertex(vid, v.genus))
            vmap[vid] = v.id
    for e in base.edges:
        sigma = rep.voltages.get(e.id)
        for i in range(n):
            j = sigma[i] if sigma is not None else i
            eid = lift_id(e.id, i)
            edges.append(Edge(eid, lift_id(e.tail, i), lift_id(e.head, j), e.length))
            emap[eid] = e.id
    for l in base.leaves:
        for i in range(n):
            lid = lift_id(l.id, i)
            leaves.append(Leaf(lid, lift_id(l.at, i)))
            emap[lid] = l.id
    cover = AugmentedMetricGraph(tuple(verts), tuple(edges), tuple(leaves))
    curves = {}
    for v in cover.vertices:
        below = cx.curve(vmap[v.id])
        marks = {h: below.marks[emap[h]] for h in cover.half_edges(v.id)}
        curves[v.id] = ResidueCurve(below.genus, marks, below.automorphisms)
    source = MetrizedComplex(cover, curves, cx.residue_char)
    dil = {x: 1 for x in emap}
    phi = HarmonicMorphism(source, cx, vmap, emap, dil, {v: 1 for v in vmap})
    return cover, phi


def _conj_min(sigma: P.Perm, conjugators: list[P.Perm]) -> bool:
    """True iff sigma is lexicographically least among its conjugates c∘σ∘c⁻¹."""
    for c in conjugators:
        if P.conjugate(sigma, c) < sigma:
            return False
    return True


def enumerate_tuples(n: int, r: int, connected_only: bool = False,
                     bounds: Bounds | None = None) -> list[tuple[P.Perm, ...]]:
    """Lex-least representatives of simultaneous-conjugacy classes of r-tuples in S_n."""
    b = resolve(bounds)
    b.check("max_degree", n)
    b.check("max_betti", r)
    perms = [tuple(p) for p in P.all_perms(n)]
    out: list[tuple[P.Perm, ...]] = []
    visited = [0]

    def grow(prefix: list[P.Perm], stab: list[P.Perm]):
        if len(prefix) == r:
            if not connected_only or P.is_transitive(prefix, n):
                out.append(tuple(prefix))
            return
        for sigma in perms:
            visited[0] += 1
            if visited[0] > b.max_search:
                b.check("max_search", visited[0])
            if not _conj_min(sigma, stab):
                continue
            nxt = [c for c in stab if P.conjugate(sigma, c) == sigma]
            grow(prefix + [sigma], nxt)

    grow([], perms)
    return out


def enumerate_coverings(base: AugmentedMetricGraph, n: int, connected_only: bool = False,
                        bounds: Bounds | None = None) -> list[CoveringRep]:
    if n < 1:
        raise InvalidInput("degree must be at least 1")
    require_valid(base)
    tree = spanning_tree(base)
    r = len(tree.cotree_edges)
    reps = []
    for tup in enumerate_tuples(n, r, connected_only, bounds):
        reps.append(CoveringRep(base, tree.tree_edges, dict(zip(tree.cotree_edges, tup)), n))
    return reps


def count_index_subgroups_free(r: int, n: int) -> int:
    """Number of index-n subgroups of the free group of rank r (Hall's recursion)."""
    if r < 0 or n < 1:
        raise InvalidInput("need r >= 0 and n >= 1")
    if r == 0:
        return 1 if n == 1 else 0
    a = [0] * (n + 1)
    for m in range(1, n + 1):
        total = m * factorial(m) ** (r - 1)
        for i in range(1, m):
            total -= factorial(m - i) ** (r - 1) * a[i]
        a[m] = total
    return a[n]


def count_transitive_tuples(r: int, n: int) -> int:
    """Transitive r-tuples in S_n, recovered from counts of all tuples by orbit of 0."""
    if r == 0:
        return 1 if n == 1 else 0
    t = [0] * (n + 1)
    for m in range(1, n + 1):
        rest = sum(comb(m - 1, k - 1) * t[k] * factorial(m - k) ** r for k in range(1, m))
        t[m] = factorial(m) ** r - rest
    return t[n]


def abelian_relation_matrix(genus: int, punctures: int) -> list[list[int]]:
    """Abelianized relation of the tame presentation on x_i, y_i, z_j.

    The commutators die, leaving the single relation z_1 + ... + z_d = 0.
    """
    if punctures == 0:
        return []
    return [[0] * (2 * genus) + [1] * punctures]


def count_abelian_tame_covers(genus: int, punctures: int, n: int, residue_char: int = 0) -> int:
    """|Hom(π, Z/n)| for the tame group of a genus-g curve with d punctures."""
    if genus < 0 or punctures < 0 or n < 1:
        raise InvalidInput("need genus >= 0, punctures >= 0, n >= 1")
    if residue_char and gcd(n, residue_char) != 1:
        raise InvalidInput(f"order {n} is not prime to the residue characteristic {residue_char}")
    ngens = 2 * genus + punctures
    count = count_hom_to_cyclic(abelian_relation_matrix(genus, punctures), ngens, n)
    closed = n ** (2 * genus + max(punctures - 1, 0))
    assert count == closed, (count, closed)
    return count


@dataclass(frozen=True)
class FiberProduct:
    rep: CoveringRep
    projections: tuple[HarmonicMorphism, HarmonicMorphism]
    components: list[list[int]]  # sheet orbits of the product, 0-based
    component_reps: list[CoveringRep] = field(default_factory=list)


def product_perm(p: P.Perm, q: P.Perm) -> P.Perm:
    n2 = len(q)
    return tuple(p[i] * n2 + q[j] for i in range(len(p)) for j in range(n2))


def fiber_product(rep1: CoveringRep, rep2: CoveringRep) -> FiberProduct:
    """Fiber product over the common base; sheet (i, j) gets index i*n2 + j."""
    if rep1.base != rep2.base or rep1.spanning_tree != rep2.spanning_tree:
        raise InvalidInput("fiber product needs the same base graph and spanning tree")
    if len(rep1.extra_monodromy) != len(rep2.extra_monodromy) or \
            rep1.monodromy_sites != rep2.monodromy_sites:
        raise InvalidInput("extra monodromy must be located at the same sites")
    n1, n2 = rep1.degree, rep2.degree
    volts = {e: product_perm(rep1.voltages[e], rep2.voltages[e]) for e in rep1.cotree}
    extra = tuple(product_perm(p, q) for p, q in zip(rep1.extra_monodromy, rep2.extra_monodromy))
    rep = CoveringRep(rep1.base, rep1.spanning_tree, volts, n1 * n2, extra, rep1.monodromy_sites)
    cover, _ = voltage_to_covering(rep)
    cover1, _ = voltage_to_covering(rep1)
    cover2, _ = voltage_to_covering(rep2)
    projections = (
        _projection(rep, cover, cover1, lambda k: k // n2),
        _projection(rep, cover, cover2, lambda k: k % n2),
    )
    comps = P.orbits(rep.generators(), rep.degree)
    return FiberProduct(rep, projections, comps, [restrict(rep, c) for c in comps])


def _projection(rep, cover, target_graph, sheet) -> HarmonicMorphism:
    base = rep.base
    vmap, emap = {}, {}
    for v in base.vertex_ids:
        for k in range(rep.degree):
            vmap[lift_id(v, k)] = lift_id(v, sheet(k))
    for e in list(base.edges) + list(base.leaves):
        for k in range(rep.degree):
            emap[lift_id(e.id, k)] = lift_id(e.id, sheet(k))
    src = default_complex(cover)
    tgt = default_complex(target_graph)
    return HarmonicMorphism(src, tgt, vmap, emap, {x: 1 for x in emap}, {v: 1 for v in vmap})


def restrict(rep: CoveringRep, orbit: Sequence[int]) -> CoveringRep:
    """Sub-covering on an invariant set of sheets, relabelled in increasing order."""
    pts = sorted(orbit)
    index = {x: i for i, x in enumerate(pts)}

    def cut(p):
        try:
            return tuple(index[p[x]] for x in pts)
        except KeyError:
            raise InvalidInput("sheet set is not invariant") from None

    return CoveringRep(rep.base, rep.spanning_tree, {e: cut(p) for e, p in rep.voltages.items()},
                       len(pts), tuple(cut(p) for p in rep.extra_monodromy), rep.monodromy_sites)


def _relabel_from(gens: Sequence[P.Perm], n: int, start: int) -> tuple[P.Perm, ...]:
    label = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for g in gens:
            y = g[x]
            if y not in label:
                label[y] = len(order)
                order.append(y)
    if len(order) != n:
        raise InvalidInput("relabelling needs a transitive tuple")
    out = []
    for g in gens:
        h = [0] * n
        for x in order:
            h[label[x]] = label[g[x]]
        out.append(tuple(h))
    return tuple(out)


def canonical_tuple(gens: Sequence[P.Perm], n: int):
    """Invariant of a permutation tuple under simultaneous conjugation.

    Transitive tuples get the least BFS relabelling over all base points;
    otherwise the sorted list of the orbit-wise forms.
    """
    gens = [tuple(g) for g in gens]
    if n == 0:
        return ()
    orbs = P.orbits(gens, n)
    if len(orbs) == 1:
        return min(_relabel_from(gens, n, b) for b in range(n))
    parts = []
    for orb in orbs:
        index = {x: i for i, x in enumerate(orb)}
        sub = [tuple(index[g[x]] for x in orb) for g in gens]
        parts.append((len(orb), canonical_tuple(sub, len(orb))))
    return tuple(sorted(parts))


def canonical_form(rep: CoveringRep):
    return (rep.degree, canonical_tuple(rep.generators(), rep.degree))


def are_isomorphic(rep1: CoveringRep, rep2: CoveringRep) -> bool:
    if rep1.base != rep2.base or rep1.spanning_tree != rep2.spanning_tree:
        return False
    if len(rep1.extra_monodromy) != len(rep2.extra_monodromy):
        return False
    return canonical_form(rep1) == canonical_form(rep2)


def is_connected_rep(rep: CoveringRep) -> bool:
    return P.is_transitive(rep.generators(), rep.degree)


def trivial_rep(base: AugmentedMetricGraph, n: int = 1) -> CoveringRep:
    tree = spanning_tree(base)
    return CoveringRep(base, tree.tree_edges, {e: P.identity(n) for e in tree.cotree_edges}, n)
