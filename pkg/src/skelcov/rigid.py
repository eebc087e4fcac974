"""Gluing data of tame coverings and its classification up to automorphism.

Above every finite edge of dilation d the annulus identifications form a
torsor under μ_d.  After fixing one trivialization per edge this becomes
Z/d, so a gluing assignment is a vector in ∏ Z/d_e.  An automorphism of
the covering complex over the base acts on assignments; given on edge
e = x → y it sends Θ to

    (α·Θ)_e = ±Θ_{α(e)} + c_α(x, e) - c_α(y, e)   (mod d_e)

where the sign records whether α reverses e and c_α are the correction
residues declared by the curve automorphisms.  This is a right action:
α·(β·Θ) = compose_automorphisms(α, β)·Θ.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from math import prod

from .bounds import Bounds, resolve
from .errors import InvalidInput
from .morphism import HarmonicMorphism, require_harmonic

GluingAssignment = dict[str, int]


@dataclass(frozen=True)
class ComplexAutomorphism:
    vertex_map: dict[str, str]
    edge_map: dict[str, str]  # finite edges and leaves
    curve_parts: dict[str, str]  # vertex -> name of the curve automorphism used there
    corrections: dict[tuple[str, str], int]  # (vertex, incident finite edge) -> residue
    ends: dict[str, tuple[str, str]] = field(repr=False)
    moduli: dict[str, int] = field(repr=False)

    def sign(self, e: str) -> int:
        tail = self.ends[e][0]
        return 1 if self.ends[self.edge_map[e]][0] == self.vertex_map[tail] else -1

    def c(self, v: str, e: str) -> int:
        return self.corrections.get((v, e), 0)

    def is_identity(self) -> bool:
        return (all(k == v for k, v in self.vertex_map.items())
                and all(k == v for k, v in self.edge_map.items())
                and all(r % self.moduli[e] == 0 for (_, e), r in self.corrections.items()))

    def key(self):
        """Hashable identity of the automorphism as it acts on the complex."""
        corr = tuple(sorted(((v, e), r % self.moduli[e]) for (v, e), r in self.corrections.items()
                            if r % self.moduli[e]))
        return (tuple(sorted(self.vertex_map.items())), tuple(sorted(self.edge_map.items())), corr)


def finite_edges(phi: HarmonicMorphism) -> list[str]:
    return [e.id for e in phi.source.graph.edges]


def moduli(phi: HarmonicMorphism) -> dict[str, int]:
    return {e: phi.d(e) for e in finite_edges(phi)}


def gluing_data_count(phi: HarmonicMorphism) -> int:
    """Size of the gluing torsor: product of the finite-edge dilations."""
    return prod(moduli(phi).values())


_MOD_RE = re.compile(r"^\s*(-?\d+)\s*(?:mod\s*(\d+))?\s*$")


def normalize_gluing(phi: HarmonicMorphism, theta) -> GluingAssignment:
    """Reduce an assignment to canonical residues; strings like '1 mod 2' are accepted.

    Edges missing from ``theta`` get 0.  A stated modulus must equal the dilation.
    """
    mods = moduli(phi)
    out = {}
    theta = dict(theta or {})
    unknown = set(theta) - set(mods)
    if unknown:
        raise InvalidInput(f"gluing data on unknown edges {sorted(unknown)}")
    for e, d in mods.items():
        val = theta.get(e, 0)
        if isinstance(val, str):
            m = _MOD_RE.match(val)
            if not m:
                raise InvalidInput(f"cannot parse residue {val!r}")
            if m.group(2) is not None and int(m.group(2)) != d:
                raise InvalidInput(f"residue on {e} is mod {m.group(2)} but the dilation is {d}")
            val = int(m.group(1))
        elif not isinstance(val, int) or isinstance(val, bool):
            raise InvalidInput(f"residue on {e} must be an integer")
        out[e] = val % d
    return out


def all_gluings(phi: HarmonicMorphism, bounds: Bounds | None = None) -> list[GluingAssignment]:
    """Every gluing assignment, in lexicographic order of the edge list."""
    b = resolve(bounds)
    mods = moduli(phi)
    b.check("max_gluing", prod(mods.values()))
    edges = list(mods)
    return [dict(zip(edges, vals)) for vals in itertools.product(*(range(mods[e]) for e in edges))]


def format_gluing(theta: GluingAssignment, mods: dict[str, int]) -> dict[str, str]:
    return {e: f"{theta[e]} mod {mods[e]}" for e in mods}


def conjugation_action(alpha: ComplexAutomorphism, theta: GluingAssignment) -> GluingAssignment:
    out = {}
    for e, d in alpha.moduli.items():
        tail, head = alpha.ends[e]
        val = alpha.sign(e) * theta[alpha.edge_map[e]] + alpha.c(tail, e) - alpha.c(head, e)
        out[e] = val % d
    return out


def compose_automorphisms(alpha: ComplexAutomorphism, beta: ComplexAutomorphism) -> ComplexAutomorphism:
    """The automorphism acting as α·(β·Θ); its underlying map is β∘α."""
    vmap = {v: beta.vertex_map[alpha.vertex_map[v]] for v in alpha.vertex_map}
    emap = {e: beta.edge_map[alpha.edge_map[e]] for e in alpha.edge_map}
    corr = {}
    for e, (tail, head) in alpha.ends.items():
        for x in (tail, head):
            val = alpha.c(x, e) + beta.c(alpha.vertex_map[x], alpha.edge_map[e])
            corr[(x, e)] = val % alpha.moduli[e]
    parts = {v: f"{alpha.curve_parts.get(v, 'id')}*{beta.curve_parts.get(alpha.vertex_map[v], 'id')}"
             for v in alpha.vertex_map}
    return ComplexAutomorphism(vmap, emap, parts, corr, alpha.ends, alpha.moduli)


def identity_automorphism(phi: HarmonicMorphism) -> ComplexAutomorphism:
    g = phi.source.graph
    ends = {e.id: (e.tail, e.head) for e in g.edges}
    emap = {e.id: e.id for e in g.edges}
    emap.update({l.id: l.id for l in g.leaves})
    return ComplexAutomorphism({v: v for v in g.vertex_ids}, emap, {v: "id" for v in g.vertex_ids},
                               {}, ends, moduli(phi))


def automorphism_group(phi: HarmonicMorphism, bounds: Bounds | None = None) -> list[ComplexAutomorphism]:
    """Automorphisms of the source complex over the base, identity first.

    Backtracks over vertex bijections inside fibers, then over bijections of
    edges sharing endpoints and image, then over curve-table entries whose
    mark permutation matches the induced map of tangent directions.
    """
    b = resolve(bounds)
    require_harmonic(phi)
    src = phi.source
    g = src.graph
    verts = list(g.vertex_ids)
    ends = {e.id: (e.tail, e.head) for e in g.edges}
    mods = moduli(phi)

    def vkey(v):
        return (phi.vertex_map[v], g.genus(v), phi.vdeg(v), g.valence(v))

    candidates = {v: [u for u in [v] + [w for w in verts if w != v] if vkey(u) == vkey(v)] for v in verts}
    found: list[ComplexAutomorphism] = []
    steps = [0]

    def edge_class(e, vm):
        x = g.edge(e)
        return (frozenset((vm[x.tail], vm[x.head])), phi.edge_map[e], phi.d(e))

    def leaf_class(l, vm):
        return (vm[g.leaf(l).at], phi.edge_map[l], phi.d(l))

    base_edge_classes: dict = {}
    for e in g.edges:
        base_edge_classes.setdefault(edge_class(e.id, {v: v for v in verts}), []).append(e.id)
    for l in g.leaves:
        base_edge_classes.setdefault(("leaf",) + leaf_class(l.id, {v: v for v in verts}), []).append(l.id)

    def edge_bijections(vm):
        # edges of a class must land on the class of their image endpoints
        groups = []
        for key, members in base_edge_classes.items():
            if key[0] == "leaf":
                _, at, img, d = key
                target = base_edge_classes.get(("leaf", vm[at], img, d))
            else:
                ends_, img, d = key
                target = base_edge_classes.get((frozenset(vm[x] for x in ends_), img, d))
            if target is None or len(target) != len(members):
                return
            groups.append((members, target))
        for choice in itertools.product(*(itertools.permutations(t) for _, t in groups)):
            emap = {}
            for (members, _), images in zip(groups, choice):
                emap.update(zip(members, images))
            yield emap

    def finish(vm):
        for emap in edge_bijections(vm):
            options = []
            for v in verts:
                c_src, c_dst = src.curve(v), src.curve(vm[v])
                ok = []
                for aut in c_src.automorphisms:
                    if all(aut.image(c_src.marks[h]) == c_dst.marks[emap[h]] for h in g.half_edges(v)):
                        ok.append(aut)
                if not ok:
                    break
                options.append(ok)
            else:
                for pick in itertools.product(*options):
                    parts = {v: a.name for v, a in zip(verts, pick)}
                    corr = {}
                    for v, a in zip(verts, pick):
                        for h in g.incident_edges(v):
                            r = a.residue(src.curve(v).marks[h]) % mods[h]
                            if r:
                                corr[(v, h)] = r
                    found.append(ComplexAutomorphism(dict(vm), emap, parts, corr, ends, mods))
                    b.check("max_automorphisms", len(found))

    def grow(i, vm, used):
        steps[0] += 1
        b.check("max_search", steps[0])
        if i == len(verts):
            finish(vm)
            return
        v = verts[i]
        for u in candidates[v]:
            if u in used:
                continue
            vm[v] = u
            used.add(u)
            grow(i + 1, vm, used)
            used.discard(u)
            del vm[v]

    grow(0, {}, set())
    # a table listing the same entry twice would otherwise yield duplicates
    unique, seen = [], set()
    for a in found:
        k = (a.key(), tuple(sorted(a.curve_parts.items())))
        if k not in seen:
            seen.add(k)
            unique.append(a)
    return unique


@dataclass(frozen=True)
class LiftingClass:
    representative: GluingAssignment
    orbit_size: int
    stabilizer_order: int
    orbit: tuple[tuple[int, ...], ...] = field(repr=False, default=())


@dataclass(frozen=True)
class LiftingClassification:
    classes: list[LiftingClass]
    group_order: int
    gluing_count: int
    burnside_fixed_total: int
    trivialization_independent: bool

    @property
    def burnside_ok(self) -> bool:
        return len(self.classes) * self.group_order == self.burnside_fixed_total


def _orbits(gluings, auts, act):
    edges = list(gluings[0]) if gluings else []
    seen = set()
    classes = []
    for theta in gluings:
        key = tuple(theta[e] for e in edges)
        if key in seen:
            continue
        images = [act(a, theta) for a in auts]
        orbit = sorted({tuple(im[e] for e in edges) for im in images})
        stab = sum(1 for im in images if im == theta)
        seen.update(orbit)
        classes.append(LiftingClass(theta, len(orbit), stab, tuple(orbit)))
    return classes


def _retrivialized(alpha: ComplexAutomorphism, unit: int = -1, shift: int = 1) -> ComplexAutomorphism:
    """The same automorphism written in the trivialization Θ' = unit·Θ + shift."""
    corr = {}
    for e, (tail, head) in alpha.ends.items():
        d = alpha.moduli[e]
        corr[(tail, e)] = (unit * alpha.c(tail, e) + shift - alpha.sign(e) * shift) % d
        corr[(head, e)] = (unit * alpha.c(head, e)) % d
    return ComplexAutomorphism(alpha.vertex_map, alpha.edge_map, alpha.curve_parts, corr,
                               alpha.ends, alpha.moduli)


def lifting_classes(phi: HarmonicMorphism, auts: list[ComplexAutomorphism] | None = None,
                    bounds: Bounds | None = None) -> LiftingClassification:
    """Orbits of gluing data under the automorphism group, with stabilizer orders.

    The Burnside total and a re-run in a different trivialization are
    computed alongside so callers can assert both.
    """
    b = resolve(bounds)
    if auts is None:
        auts = automorphism_group(phi, b)
    gluings = all_gluings(phi, b)
    classes = _orbits(gluings, auts, conjugation_action)
    for c in classes:
        if c.orbit_size * c.stabilizer_order != len(auts):
            raise AssertionError("orbit-stabilizer identity fails; automorphisms do not form a group")
    fixed = sum(1 for a in auts for theta in gluings if conjugation_action(a, theta) == theta)
    mods = moduli(phi)
    shifted = [{e: (-t[e] + 1) % mods[e] for e in mods} for t in gluings]
    other = _orbits(shifted, [_retrivialized(a) for a in auts], conjugation_action)
    independent = (sorted((c.orbit_size, c.stabilizer_order) for c in classes)
                   == sorted((c.orbit_size, c.stabilizer_order) for c in other))
    return LiftingClassification(classes, len(auts), len(gluings), fixed, independent)


def automorphism_as_morphism(phi: HarmonicMorphism, alpha: ComplexAutomorphism
                             ) -> tuple[HarmonicMorphism, dict[tuple[str, str], int]]:
    """View α as a degree-1 morphism of the source complex plus its corrections."""
    src = phi.source
    dil = {e: 1 for e in alpha.edge_map}
    psi = HarmonicMorphism(src, src, dict(alpha.vertex_map), dict(alpha.edge_map), dil,
                           {v: 1 for v in alpha.vertex_map})
    return psi, dict(alpha.corrections)


def rigidified_morphism_check(psi: HarmonicMorphism, first, second,
                              corrections: dict[tuple[str, str], int] | None = None) -> bool:
    """Does ψ: Σ1 → Σ2 over Σ carry the gluing data of ``first`` to ``second``?

    ``first`` and ``second`` are (covering, gluing) pairs.  For each edge e1
    with image e2 the residue of Θ1 at e1, reduced to Z/d(e2), must equal
    ±Θ2 at e2 plus the corrections of ψ at the endpoints of e1.
    """
    phi1, theta1 = first
    phi2, theta2 = second
    theta1 = normalize_gluing(phi1, theta1)
    theta2 = normalize_gluing(phi2, theta2)
    require_harmonic(psi)
    corrections = corrections or {}
    for v in phi1.source.graph.vertex_ids:
        if phi2.vertex_map[psi.vertex_map[v]] != phi1.vertex_map[v]:
            raise InvalidInput(f"triangle does not commute at vertex {v}")
    for e, img in psi.edge_map.items():
        if psi.is_contracted(e):
            raise InvalidInput(f"ψ contracts edge {e}")
        if phi2.edge_map[img] != phi1.edge_map[e] or phi1.d(e) != psi.d(e) * phi2.d(img):
            raise InvalidInput(f"triangle does not commute at edge {e}")
    for e in phi1.source.graph.edges:
        img = psi.edge_map[e.id]
        d2 = phi2.d(img)
        val = (theta1[e.id] - psi.sign(e.id) * theta2[img]
               - corrections.get((e.tail, e.id), 0) + corrections.get((e.head, e.id), 0))
        if val % d2:
            return False
    return True
