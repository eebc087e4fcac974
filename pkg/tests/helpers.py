"""Random object generators and brute-force oracles for the tests.

The oracles deliberately avoid the library's permutation and counting code:
they work on plain tuples with itertools so a shared bug cannot hide.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from skelcov.coverenum import covering_rep
from skelcov.galois import branched_covering
from skelcov.graph import AugmentedMetricGraph, first_betti


# permutations as tuples, x -> p[x]; (p*q)(x) = p[q[x]]

def mul(p, q):
    return tuple(p[x] for x in q)


def inv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def orbit_partition(gens, n):
    seen, parts = set(), []
    for s in range(n):
        if s in seen:
            continue
        block, stack = {s}, [s]
        while stack:
            x = stack.pop()
            for g in gens:
                for y in (g[x], inv(g)[x]):
                    if y not in block:
                        block.add(y)
                        stack.append(y)
        seen |= block
        parts.append(sorted(block))
    return parts


def transitive(gens, n):
    return len(orbit_partition(gens, n)) == 1


def closure(gens, n):
    ident = tuple(range(n))
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = mul(g, a)
                if b not in elems:
                    elems.add(b)
                    nxt.append(b)
        frontier = nxt
    return elems


def conjugacy_classes_of_tuples(n, r, only_transitive):
    """Simultaneous-conjugacy classes of r-tuples in S_n, by brute force."""
    perms = list(itertools.permutations(range(n)))
    seen = set()
    classes = 0
    for tup in itertools.product(perms, repeat=r):
        if only_transitive and not transitive(tup, n):
            continue
        if tup in seen:
            continue
        classes += 1
        for c in perms:
            ci = inv(c)
            seen.add(tuple(mul(mul(c, p), ci) for p in tup))
    return classes


def transitive_tuple_count(n, r):
    perms = list(itertools.permutations(range(n)))
    return sum(1 for tup in itertools.product(perms, repeat=r) if transitive(tup, n))


def equivariant_exists(src, dst, m, n):
    """Is there a map {0..m-1} -> {0..n-1} with f(s_i x) = d_i f(x) for all i?"""
    for target in range(n):
        f = {0: target}
        stack = [0]
        ok = True
        while stack and ok:
            x = stack.pop()
            for s, d in zip(src, dst):
                y, fy = s[x], d[f[x]]
                if y in f:
                    if f[y] != fy:
                        ok = False
                        break
                else:
                    f[y] = fy
                    stack.append(y)
        if ok and len(f) == m:
            return True
    return False


# random objects

def random_frac(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 5), rng.randint(1, 3))


def random_base(rng: random.Random, max_edges: int = 6, leaves: bool = True,
                genus: bool = True) -> AugmentedMetricGraph:
    """A connected loopless augmented graph with at most ``max_edges`` edges."""
    k = rng.randint(1, 4)
    vs = [(f"v{i + 1}", rng.choice((0, 0, 0, 1)) if genus else 0) for i in range(k)]
    edges = []
    for i in range(1, k):
        j = rng.randrange(i)
        edges.append((vs[j][0], vs[i][0]))
    if k >= 2:
        extra = rng.randint(0, max_edges - len(edges))
        for _ in range(extra):
            a, b = rng.sample(range(k), 2)
            edges.append((vs[a][0], vs[b][0]))
    es = [(f"e{i + 1}", a, b, random_frac(rng)) for i, (a, b) in enumerate(edges[:max_edges])]
    ls = []
    if leaves:
        for i in range(rng.randint(0, 3)):
            ls.append((f"L{i + 1}", rng.choice(vs)[0]))
    return AugmentedMetricGraph.build(vs, es, ls)


def random_perm(rng: random.Random, n: int):
    p = list(range(n))
    rng.shuffle(p)
    return tuple(p)


def random_branched_rep(rng: random.Random, n: int | None = None, max_edges: int = 6):
    """Random permutation voltages plus leaf monodromy composing to 1 at each vertex."""
    g = random_base(rng, max_edges)
    n = n or rng.randint(1, 4)
    volts = [random_perm(rng, n) for _ in range(first_betti(g))]
    extra, sites = [], []
    for v in g.vertex_ids:
        here = g.incident_leaves(v)
        if len(here) < 2:
            continue
        perms = [random_perm(rng, n) for _ in here[:-1]]
        total = tuple(range(n))
        for p in perms:
            total = mul(p, total)
        perms.append(inv(total))
        extra.extend(perms)
        sites.extend(here)
    return covering_rep(g, volts, n, extra, sites)


def random_covering(rng: random.Random, n: int | None = None, max_edges: int = 6):
    rep = random_branched_rep(rng, n, max_edges)
    _, phi = branched_covering(rep)
    return rep, phi
