"""Tropical Jacobians of metric graphs and torsion counts from skeleton data.

Cycles come from the co-tree edges of the deterministic spanning tree, the
period matrix is the length-weighted intersection form on them, and the
Abel-Jacobi image of a point is the vector of signed path integrals from
the root to that point against the cycle basis.  Everything is exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from heapq import heappop, heappush
from itertools import product
from math import gcd

from . import perm as P
from .bounds import Bounds, resolve
from .complex import MetrizedComplex
from .coverenum import CoveringRep
from .errors import InvalidInput
from .graph import (AugmentedMetricGraph, Edge, Vertex, as_fraction, first_betti, require_valid,
                    spanning_tree, tree_path)
from .linalg import is_positive_definite, mat_vec, solve


@dataclass(frozen=True)
class JacobianData:
    dimension: int
    cycles: list[dict[str, int]]  # signed edge multiplicities, one per co-tree edge
    period_matrix: list[list[Fraction]]
    root: str
    cotree: tuple[str, ...]


def _graph_of(obj) -> AugmentedMetricGraph:
    return obj.graph if isinstance(obj, MetrizedComplex) else obj


def tropical_jacobian(g) -> JacobianData:
    g = _graph_of(g)
    require_valid(g)
    if not g.is_connected() or not g.vertices:
        raise InvalidInput("tropical Jacobian needs a connected non-empty graph")
    tree = spanning_tree(g)
    cycles = []
    for f in tree.cotree_edges:
        e = g.edge(f)
        c = {f: 1}
        for eid, s in tree_path(tree, g, e.head):
            c[eid] = c.get(eid, 0) - s
        for eid, s in tree_path(tree, g, e.tail):
            c[eid] = c.get(eid, 0) + s
        cycles.append({k: v for k, v in c.items() if v})
    gm = [[sum((g.edge(e).length * ci[e] * cj.get(e, 0) for e in ci), Fraction(0)) for cj in cycles]
          for ci in cycles]
    assert all(gm[i][j] == gm[j][i] for i in range(len(gm)) for j in range(len(gm)))
    assert is_positive_definite(gm)
    return JacobianData(len(cycles), cycles, gm, tree.root, tree.cotree_edges)


def _point(g: AugmentedMetricGraph, pt):
    """Normalize a point to a vertex id or (edge, interior position)."""
    if isinstance(pt, str):
        g.vertex(pt)
        return pt
    if isinstance(pt, dict):
        pt = (pt.get("edge"), pt.get("pos"))
    eid, pos = pt
    e = g.edge(eid)
    pos = as_fraction(pos)
    if pos < 0 or pos > e.length:
        raise InvalidInput(f"position {pos} outside edge {eid} of length {e.length}")
    if pos == 0:
        return e.tail
    if pos == e.length:
        return e.head
    return (eid, pos)


class Divisor(dict):
    """Finite formal sum of points with integer coefficients; zero terms dropped."""

    @classmethod
    def on(cls, g: AugmentedMetricGraph, terms) -> Divisor:
        g = _graph_of(g)
        out = cls()
        items = terms.items() if isinstance(terms, dict) else terms
        for pt, k in items:
            if not isinstance(k, int) or isinstance(k, bool):
                raise InvalidInput(f"coefficient {k!r} is not an integer")
            key = _point(g, pt)
            out[key] = out.get(key, 0) + k
        return cls({k: v for k, v in out.items() if v})

    def degree(self) -> int:
        return sum(self.values())

    def __add__(self, other):
        out = Divisor(self)
        for k, v in other.items():
            out[k] = out.get(k, 0) + v
        return Divisor({k: v for k, v in out.items() if v})

    def __neg__(self):
        return Divisor({k: -v for k, v in self.items()})

    def scaled(self, m: int) -> Divisor:
        return Divisor({k: m * v for k, v in self.items() if m * v})


def _signed_path(g, tree, pt) -> dict[str, Fraction]:
    """Signed lengths traversed by the tree path from the root to ``pt``."""
    if isinstance(pt, str):
        return {eid: s * g.edge(eid).length for eid, s in tree_path(tree, g, pt)}
    eid, pos = pt
    e = g.edge(eid)
    path = {x: s * g.edge(x).length for x, s in tree_path(tree, g, e.tail)}
    path[eid] = path.get(eid, Fraction(0)) + pos
    return path


def abel_jacobi(g, jac: JacobianData, d: Divisor) -> list[Fraction]:
    g = _graph_of(g)
    tree = spanning_tree(g)
    out = [Fraction(0)] * jac.dimension
    for pt, k in d.items():
        path = _signed_path(g, tree, pt)
        for i, c in enumerate(jac.cycles):
            out[i] += k * sum((c.get(e, 0) * val for e, val in path.items()), Fraction(0))
    return out


@dataclass(frozen=True)
class DivisorClass:
    vector: list[Fraction]  # reduced representative in R^g
    lattice_coords: list[Fraction]  # coordinates in the period basis, in [0, 1)
    period_matrix: list[list[Fraction]]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.lattice_coords)


def divisor_class(g, d: Divisor, jac: JacobianData | None = None) -> DivisorClass:
    g = _graph_of(g)
    if not isinstance(d, Divisor):
        d = Divisor.on(g, d)
    if d.degree() != 0:
        raise InvalidInput(f"divisor has degree {d.degree()}, expected 0")
    jac = jac or tropical_jacobian(g)
    v = abel_jacobi(g, jac, d)
    if jac.dimension == 0:
        return DivisorClass([], [], [])
    coords = [c - (c.numerator // c.denominator) for c in solve(jac.period_matrix, v)]
    return DivisorClass(mat_vec(jac.period_matrix, coords), coords, jac.period_matrix)


@dataclass(frozen=True)
class PLFunction:
    """Piecewise-linear function, linear on each edge of ``graph``."""

    graph: AugmentedMetricGraph
    slopes: dict[str, int]  # slope along each edge, tail to head
    values: dict[str, Fraction]
    origin: dict[str, object]  # vertex of ``graph`` -> point of the original graph


def subdivide_at(g: AugmentedMetricGraph, points) -> tuple[AugmentedMetricGraph, dict[str, object]]:
    """Insert genus-0 vertices at interior points; returns the graph and a point map."""
    cuts: dict[str, list[Fraction]] = {}
    for pt in points:
        if not isinstance(pt, str):
            cuts.setdefault(pt[0], []).append(pt[1])
    origin: dict[str, object] = {v: v for v in g.vertex_ids}
    verts = list(g.vertices)
    edges = []
    for e in g.edges:
        positions = sorted(set(cuts.get(e.id, [])))
        if not positions:
            edges.append(e)
            continue
        chain = [e.tail]
        for pos in positions:
            vid = f"{e.id}@{pos}"
            verts.append(Vertex(vid, 0))
            origin[vid] = (e.id, pos)
            chain.append(vid)
        chain.append(e.head)
        marks = [Fraction(0)] + positions + [e.length]
        for i in range(len(chain) - 1):
            edges.append(Edge(f"{e.id}#{i}", chain[i], chain[i + 1], marks[i + 1] - marks[i]))
    return AugmentedMetricGraph(tuple(verts), tuple(edges), g.leaves), origin


def principal_witness(g, d: Divisor) -> PLFunction | None:
    """A function F with div(F) = d, or None when d is not principal.

    Outgoing slopes sum to the coefficient at every point.  A tree flow
    fixes the vertex equations; co-tree slopes then close every cycle.
    """
    g = _graph_of(g)
    if not isinstance(d, Divisor):
        d = Divisor.on(g, d)
    if d.degree() != 0:
        raise InvalidInput(f"divisor has degree {d.degree()}, expected 0")
    h, origin = subdivide_at(g, list(d))
    back = {pt: v for v, pt in origin.items()}
    coeff = {back[pt]: k for pt, k in d.items()}
    tree = spanning_tree(h)
    jac = tropical_jacobian(h)
    # subtree sums, children before parents
    order = [tree.root]
    children: dict[str, list[str]] = {v: [] for v in h.vertex_ids}
    for v, (_, p) in tree.parent.items():
        children[p].append(v)
    i = 0
    while i < len(order):
        order.extend(children[order[i]])
        i += 1
    sub = {v: coeff.get(v, 0) for v in h.vertex_ids}
    slopes = {e.id: 0 for e in h.edges}
    for v in reversed(order[1:]):
        eid, p = tree.parent[v]
        e = h.edge(eid)
        slopes[eid] = sub[v] if e.tail == v else -sub[v]
        sub[p] += sub[v]
    if jac.dimension:
        w = [sum((h.edge(e).length * c * slopes[e] for e, c in cyc.items()), Fraction(0))
             for cyc in jac.cycles]
        k = solve(jac.period_matrix, [-x for x in w])
        if any(x.denominator != 1 for x in k):
            return None
        for cyc, ki in zip(jac.cycles, k):
            for e, c in cyc.items():
                slopes[e] += int(ki) * c
    values = {tree.root: Fraction(0)}
    for v in order[1:]:
        eid, p = tree.parent[v]
        e = h.edge(eid)
        step = slopes[eid] * e.length
        values[v] = values[p] + (step if e.tail == p else -step)
    for e in h.edges:
        assert values[e.head] - values[e.tail] == slopes[e.id] * e.length
    return PLFunction(h, slopes, values, origin)


def divisor_of(f: PLFunction) -> Divisor:
    """div(F) as a divisor on the original graph: outgoing slope sums."""
    total: dict[str, int] = {v: 0 for v in f.graph.vertex_ids}
    for e in f.graph.edges:
        total[e.tail] += f.slopes[e.id]
        total[e.head] -= f.slopes[e.id]
    return Divisor({f.origin[v]: k for v, k in total.items() if k})


def is_principal(g, d) -> tuple[bool, PLFunction | None]:
    w = principal_witness(g, d)
    return w is not None, w


def _distances(g: AugmentedMetricGraph, source: str) -> dict[str, Fraction]:
    dist = {source: Fraction(0)}
    heap = [(Fraction(0), source)]
    done = set()
    while heap:
        du, u = heappop(heap)
        if u in done:
            continue
        done.add(u)
        for eid in g.incident_edges(u):
            e = g.edge(eid)
            v = e.other(u)
            nd = du + e.length
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heappush(heap, (nd, v))
    return dist


def distance_divisor(g: AugmentedMetricGraph, source) -> Divisor:
    """div of the distance function to ``source`` (a point of g)."""
    src = _point(g, source)
    h, origin = subdivide_at(g, [src])
    start = next(v for v, pt in origin.items() if pt == src)
    dist = _distances(h, start)
    out: dict = {}

    def add(pt, k):
        key = origin.get(pt, pt) if isinstance(pt, str) else pt
        out[key] = out.get(key, 0) + k

    for e in h.edges:
        da, db, ell = dist[e.tail], dist[e.head], e.length
        t = (ell + db - da) / 2  # where the two ends' distances meet
        if t <= 0:
            add(e.tail, -1)
            add(e.head, 1)
        elif t >= ell:
            add(e.tail, 1)
            add(e.head, -1)
        else:
            add(e.tail, 1)
            add(e.head, 1)
            add(_interior(h, e, t, origin), -2)
    return Divisor.on(g, [(pt, k) for pt, k in out.items() if k])


def _interior(h, e, t, origin):
    """Point of the original graph at distance t from the tail of sub-edge e."""
    base = e.id.split("#")[0]
    if "#" not in e.id:
        return (base, t)
    start = origin[e.tail]
    offset = Fraction(0) if isinstance(start, str) else start[1]
    return (base, offset + t)


def random_principal_divisor(g: AugmentedMetricGraph, rng: random.Random, terms: int = 3,
                             max_coeff: int = 3) -> Divisor:
    """div(Σ a_i·dist(·, p_i)) for random rational points p_i."""
    total = Divisor()
    for _ in range(terms):
        if g.edges and rng.random() < 0.6:
            e = rng.choice(g.edges)
            den = rng.randint(2, 6)
            num = rng.randint(1, den - 1)
            pt = (e.id, e.length * Fraction(num, den))
        else:
            pt = rng.choice(g.vertex_ids)
        a = rng.randint(-max_coeff, max_coeff)
        if a:
            total = total + distance_divisor(g, pt).scaled(a)
    return total


def _check_order(n: int, residue_char: int) -> None:
    if n < 1:
        raise InvalidInput("order must be positive")
    if residue_char and gcd(n, residue_char) != 1:
        raise InvalidInput(f"order {n} is not prime to the residue characteristic {residue_char}")


def toric_and_abelian_rank(obj) -> tuple[int, int]:
    g = _graph_of(obj)
    if not g.is_connected():
        raise InvalidInput("torsion counts need a connected skeleton")
    if isinstance(obj, MetrizedComplex):
        a = sum(c.genus for c in obj.curves.values())
    else:
        a = sum(v.genus for v in g.vertices)
    return first_betti(g), a


def torsion_filtration(obj, n: int, residue_char: int | None = None) -> dict[str, int]:
    p = residue_char if residue_char is not None else getattr(obj, "residue_char", 0)
    _check_order(n, p)
    t, a = toric_and_abelian_rank(obj)
    return {"toric": n**t, "connected": n ** (t + 2 * a), "total": n ** (2 * (t + a)), "t": t, "a": a}


def tate_module_ranks(obj) -> dict[str, int]:
    t, a = toric_and_abelian_rank(obj)
    return {"toric": t, "connected": t + 2 * a, "total": 2 * t + 2 * a}


def cocycle_normal_form(g, labeling: dict[str, int], n: int) -> dict[str, int]:
    """Cohomologous labeling that vanishes on the spanning tree.

    The co-tree value of an edge is the sum of the labeling around its
    fundamental cycle, so two labelings are cohomologous iff their normal
    forms agree.
    """
    g = _graph_of(g)
    jac = tropical_jacobian(g)
    out = {e.id: 0 for e in g.edges}
    for f, cyc in zip(jac.cotree, jac.cycles):
        out[f] = sum(c * labeling.get(e, 0) for e, c in cyc.items()) % n
    return out


def cyclic_voltage_rep(g: AugmentedMetricGraph, labeling: dict[str, int], n: int) -> CoveringRep:
    tree = spanning_tree(g)
    volts = {e: tuple((i + labeling.get(e, 0)) % n for i in range(n)) for e in tree.cotree_edges}
    return CoveringRep(g, tree.tree_edges, volts, n)


def cyclic_split_covers(obj, n: int, residue_char: int | None = None,
                        bounds: Bounds | None = None) -> list[tuple[dict[str, int], CoveringRep]]:
    """H¹(Γ, Z/n) in co-tree normal form, each class with its cyclic covering."""
    g = _graph_of(obj)
    p = residue_char if residue_char is not None else getattr(obj, "residue_char", 0)
    _check_order(n, p)
    require_valid(g)
    tree = spanning_tree(g)
    b = resolve(bounds)
    b.check("max_gluing", n ** len(tree.cotree_edges))
    out = []
    for vals in product(range(n), repeat=len(tree.cotree_edges)):
        lab = {e.id: 0 for e in g.edges}
        lab.update(zip(tree.cotree_edges, vals))
        out.append((lab, cyclic_voltage_rep(g, lab, n)))
    return out


def jacobian_torsion_count(g, n: int) -> int:
    """#((1/n)·L / L) for the period lattice L, by explicit enumeration."""
    jac = tropical_jacobian(g)
    seen = set()
    for k in product(range(n), repeat=jac.dimension):
        v = mat_vec(jac.period_matrix, [Fraction(x, n) for x in k])
        coords = solve(jac.period_matrix, v)
        seen.add(tuple(c - (c.numerator // c.denominator) for c in coords))
    return len(seen)


def is_cyclic_perm(p: P.Perm) -> bool:
    n = len(p)
    return n == 0 or all(p[i] == (i + p[0]) % n for i in range(n))
