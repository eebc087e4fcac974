"""Harmonic morphisms between metrized complexes.

A morphism is purely combinatorial: a vertex map, an edge map (finite edges
to finite edges or, when contracted, to a vertex; leaves to leaves), integer
dilations on edges and leaves, a positive local degree per source vertex and
a map of marked points with local ramification indices.  Dilations are
constant along edges, so harmonicity reduces to a finite check at vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complex import MetrizedComplex, default_complex, subdivide_complex
from .errors import InvalidInput
from .graph import ValidationReport, Violation, as_fraction, first_betti


@dataclass(frozen=True)
class HarmonicMorphism:
    source: MetrizedComplex
    target: MetrizedComplex
    vertex_map: dict[str, str]
    edge_map: dict[str, str]
    dilation: dict[str, int] = field(default_factory=dict)
    vertex_degree: dict[str, int] = field(default_factory=dict)
    mark_map: dict[str, dict[str, tuple[str, int]]] | None = None

    def d(self, e: str) -> int:
        """Dilation of a finite edge or leaf; leaves default to 1."""
        if e in self.dilation:
            return self.dilation[e]
        if self.source.graph.is_leaf(e):
            return 1
        raise InvalidInput(f"no dilation for edge {e!r}")

    def vdeg(self, v: str) -> int:
        return self.vertex_degree.get(v, 1)

    def is_contracted(self, e: str) -> bool:
        return self.source.graph.is_edge(e) and self.target.graph.has_vertex(self.edge_map.get(e, ""))

    def sign(self, e: str) -> int:
        """+1 when edge ``e`` keeps its orientation under the map, -1 otherwise."""
        src = self.source.graph.edge(e)
        img = self.target.graph.edge(self.edge_map[e])
        return 1 if self.vertex_map[src.tail] == img.tail else -1

    def marks_at(self, v: str) -> dict[str, tuple[str, int]]:
        if self.mark_map is not None and v in self.mark_map:
            return self.mark_map[v]
        return derived_marks(self, v)


def derived_marks(phi: HarmonicMorphism, v: str) -> dict[str, tuple[str, int]]:
    src_curve = phi.source.curve(v)
    tgt_curve = phi.target.curves.get(phi.vertex_map.get(v))
    out = {}
    if tgt_curve is None:
        return out
    for h in phi.source.graph.half_edges(v):
        if phi.is_contracted(h) or h not in src_curve.marks:
            continue
        img = phi.edge_map.get(h)
        if img in tgt_curve.marks:
            out[src_curve.marks[h]] = (tgt_curve.marks[img], phi.d(h))
    return out


def identity_morphism(cx: MetrizedComplex) -> HarmonicMorphism:
    g = cx.graph
    return HarmonicMorphism(
        cx, cx,
        {v: v for v in g.vertex_ids},
        {**{e.id: e.id for e in g.edges}, **{l.id: l.id for l in g.leaves}},
        {**{e.id: 1 for e in g.edges}, **{l.id: 1 for l in g.leaves}},
        {v: 1 for v in g.vertex_ids},
    )


def _directions(phi: HarmonicMorphism, v: str) -> dict[str, int]:
    """Sum of dilations over source half-edges at ``v`` above each target direction."""
    tgt = phi.target.graph
    w = phi.vertex_map[v]
    sums = {h: 0 for h in tgt.half_edges(w)}
    for h in phi.source.graph.half_edges(v):
        img = phi.edge_map.get(h)
        if img in sums:
            sums[img] += phi.d(h)
    return sums


def validate_harmonic(phi: HarmonicMorphism) -> ValidationReport:
    src, tgt = phi.source.graph, phi.target.graph
    out: list[Violation] = []
    for v in src.vertex_ids:
        if v not in phi.vertex_map:
            out.append(Violation("unmapped vertex", v))
        elif not tgt.has_vertex(phi.vertex_map[v]):
            out.append(Violation("vertex image not in target", v, phi.vertex_map[v]))
        if phi.vdeg(v) < 1:
            out.append(Violation("non-positive vertex degree", v))
    if out:
        return ValidationReport(tuple(out))
    for e in src.edges:
        img = phi.edge_map.get(e.id)
        a, b = phi.vertex_map[e.tail], phi.vertex_map[e.head]
        d = phi.dilation.get(e.id)
        if img is None:
            out.append(Violation("unmapped edge", e.id))
            continue
        if d is None or d < 0:
            out.append(Violation("missing or negative dilation", e.id))
            continue
        if tgt.has_vertex(img):
            if d != 0:
                out.append(Violation("contracted edge with positive dilation", e.id))
            if a != img or b != img:
                out.append(Violation("endpoint mismatch", e.id, "contracted edge endpoints"))
            continue
        if not tgt.is_edge(img):
            out.append(Violation("edge image not in target", e.id, img))
            continue
        if d == 0:
            out.append(Violation("zero dilation on non-contracted edge", e.id))
            continue
        t = tgt.edge(img)
        if {a, b} != {t.tail, t.head} or a == b:
            out.append(Violation("endpoint mismatch", e.id, f"image {img}"))
            continue
        if t.length != d * e.length:
            out.append(Violation("length mismatch", e.id,
                                 f"{t.length} != {d} * {e.length}"))
    for l in src.leaves:
        img = phi.edge_map.get(l.id)
        if img is None or not tgt.is_leaf(img):
            out.append(Violation("leaf must map to a leaf", l.id))
            continue
        if tgt.leaf(img).at != phi.vertex_map[l.at]:
            out.append(Violation("endpoint mismatch", l.id, f"image {img}"))
        if phi.d(l.id) < 1:
            out.append(Violation("non-positive leaf dilation", l.id))
    if out:
        return ValidationReport(tuple(out))
    for v in src.vertex_ids:
        sums = _directions(phi, v)
        values = set(sums.values())
        if len(values) > 1:
            out.append(Violation("degree depends on direction", v,
                                 ", ".join(f"{h}:{s}" for h, s in sums.items())))
        elif values and values != {phi.vdeg(v)}:
            out.append(Violation("vertex degree mismatch", v,
                                 f"directions give {values.pop()}, declared {phi.vdeg(v)}"))
    out.extend(_check_marks(phi))
    out.extend(_check_surjective(phi))
    return ValidationReport(tuple(out))


def _check_marks(phi: HarmonicMorphism) -> list[Violation]:
    out = []
    if phi.mark_map is None:
        return out
    for v, mm in phi.mark_map.items():
        if not phi.source.graph.has_vertex(v):
            out.append(Violation("mark map at unknown vertex", v))
            continue
        expected = derived_marks(phi, v)
        if mm != expected:
            out.append(Violation("mark map inconsistent with edge map", v))
    return out


def _check_surjective(phi: HarmonicMorphism) -> list[Violation]:
    src, tgt = phi.source.graph, phi.target.graph
    hit_v = set(phi.vertex_map.values())
    hit_e = {img for e, img in phi.edge_map.items() if not phi.is_contracted(e)}
    out = []
    comp_of = {v: i for i, comp in enumerate(tgt.components) for v in comp}
    touched = {comp_of[phi.vertex_map[v]] for v in src.vertex_ids}
    for i in sorted(touched):
        comp = set(tgt.components[i])
        for v in tgt.components[i]:
            if v not in hit_v:
                out.append(Violation("not surjective", v))
        for e in list(tgt.edges) + list(tgt.leaves):
            anchor = e.tail if hasattr(e, "tail") else e.at
            if anchor in comp and e.id not in hit_e:
                out.append(Violation("not surjective", e.id))
    return out


def require_harmonic(phi: HarmonicMorphism) -> None:
    report = validate_harmonic(phi)
    if not report.ok:
        raise InvalidInput("not harmonic: " + "; ".join(map(str, report)))


def component_degrees(phi: HarmonicMorphism) -> list[int | None]:
    """Degree over each target component, None for components not hit.

    Every vertex and every edge interior of a component is evaluated; a
    mismatch means the data is not harmonic.
    """
    src, tgt = phi.source.graph, phi.target.graph
    out: list[int | None] = []
    for comp in tgt.components:
        inside = set(comp)
        values = {}
        for w in comp:
            values[w] = sum(phi.vdeg(v) for v in src.vertex_ids if phi.vertex_map[v] == w)
        for e in list(tgt.edges) + list(tgt.leaves):
            anchor = getattr(e, "tail", None) or e.at
            if anchor in inside:
                values[e.id] = sum(phi.d(x) for x, img in phi.edge_map.items()
                                   if img == e.id and not phi.is_contracted(x))
        distinct = set(values.values())
        if distinct == {0}:
            out.append(None)
            continue
        if len(distinct) != 1:
            detail = ", ".join(f"{k}:{v}" for k, v in values.items())
            raise InvalidInput(f"degree not well-defined ({detail})")
        out.append(distinct.pop())
    return out


def degree(phi: HarmonicMorphism) -> int:
    """Common degree over the target components that are hit."""
    degs = {d for d in component_degrees(phi) if d is not None}
    if not degs:
        raise InvalidInput("degree not well-defined: empty source")
    if len(degs) > 1:
        raise InvalidInput(f"degree differs between target components: {sorted(degs)}")
    return degs.pop()


def total_degree(phi: HarmonicMorphism) -> int:
    """Sum of the degrees over all target components."""
    return sum(d for d in component_degrees(phi) if d is not None)


def is_finite(phi: HarmonicMorphism) -> bool:
    return all(phi.dilation.get(e.id, 0) > 0 for e in phi.source.graph.edges)


def is_tame(phi: HarmonicMorphism, residue_char: int | None = None) -> bool:
    p = phi.target.residue_char if residue_char is None else residue_char
    if p == 0:
        return True
    numbers = [phi.d(e.id) for e in phi.source.graph.edges]
    numbers += [phi.d(l.id) for l in phi.source.graph.leaves]
    numbers += [phi.vdeg(v) for v in phi.source.graph.vertex_ids]
    for v in phi.source.graph.vertex_ids:
        numbers += [deg for _, deg in phi.marks_at(v).values()]
    return all(n % p != 0 for n in numbers)


def local_rh_defect(phi: HarmonicMorphism, v: str) -> int:
    """(2g'-2) minus the Riemann-Hurwitz right-hand side at source vertex ``v``."""
    g_src = phi.source.curve(v).genus
    g_tgt = phi.target.curve(phi.vertex_map[v]).genus
    d = phi.vdeg(v)
    ram = sum(deg - 1 for _, deg in phi.marks_at(v).values())
    return (2 * g_src - 2) - (d * (2 * g_tgt - 2) + ram)


def check_local_rh(phi: HarmonicMorphism, enabled: bool = True) -> ValidationReport:
    if not enabled:
        return ValidationReport(warnings=("local Riemann-Hurwitz check disabled",))
    out = []
    for v in phi.source.graph.vertex_ids:
        defect = local_rh_defect(phi, v)
        if defect:
            out.append(Violation("local Riemann-Hurwitz fails", v, f"defect {defect}"))
    return ValidationReport(tuple(out))


def is_covering(phi: HarmonicMorphism, residue_char: int | None = None, local_rh: bool = True) -> bool:
    if not validate_harmonic(phi).ok or not is_finite(phi):
        return False
    if not is_tame(phi, residue_char):
        return False
    return check_local_rh(phi, local_rh).ok


def compose(phi: HarmonicMorphism, psi: HarmonicMorphism) -> HarmonicMorphism:
    """psi∘phi for phi: A→B and psi: B→C."""
    vmap = {v: psi.vertex_map[w] for v, w in phi.vertex_map.items()}
    emap, dil = {}, {}
    for e, img in phi.edge_map.items():
        if phi.is_contracted(e):
            emap[e] = psi.vertex_map[img]
            dil[e] = 0
        else:
            emap[e] = psi.edge_map[img]
            dil[e] = 0 if psi.is_contracted(img) else phi.d(e) * psi.d(img)
    vdeg = {v: phi.vdeg(v) * psi.vdeg(phi.vertex_map[v]) for v in phi.source.graph.vertex_ids}
    return HarmonicMorphism(phi.source, psi.target, vmap, emap, dil, vdeg)


def subdivide_morphism(phi: HarmonicMorphism, target_edge: str, pos) -> HarmonicMorphism:
    """Subdivide a target edge and, compatibly, every edge above it."""
    pos = as_fraction(pos)
    tgt = phi.target.graph
    te = tgt.edge(target_edge)
    new_w = f"{target_edge}@{pos}"
    ta, tb = f"{target_edge}a", f"{target_edge}b"
    target = subdivide_complex(phi.target, target_edge, pos, new_w, (ta, tb))
    source = phi.source
    vmap = dict(phi.vertex_map)
    emap = dict(phi.edge_map)
    dil = dict(phi.dilation)
    vdeg = dict(phi.vertex_degree)
    for e, img in phi.edge_map.items():
        if img != target_edge or phi.is_contracted(e):
            continue
        d = phi.d(e)
        s = phi.sign(e)
        src_pos = pos / d if s == 1 else (te.length - pos) / d
        nv, na, nb = f"{e}@{src_pos}", f"{e}a", f"{e}b"
        source = subdivide_complex(source, e, src_pos, nv, (na, nb))
        vmap[nv] = new_w
        del emap[e], dil[e]
        emap[na], emap[nb] = (ta, tb) if s == 1 else (tb, ta)
        dil[na] = dil[nb] = d
        vdeg[nv] = d
    return HarmonicMorphism(source, target, vmap, emap, dil, vdeg)


def morphism_from_graphs(src_graph, tgt_graph, vertex_map, edge_map, dilation=None,
                         vertex_degree=None, residue_char: int = 0) -> HarmonicMorphism:
    """Convenience wrapper with default residue curves on both sides."""
    src = default_complex(src_graph, residue_char)
    tgt = default_complex(tgt_graph, residue_char)
    dil = dict(dilation or {})
    for e in src_graph.edges:
        dil.setdefault(e.id, 1)
    return HarmonicMorphism(src, tgt, dict(vertex_map), dict(edge_map), dil, dict(vertex_degree or {}))


def same_numbers(phi: HarmonicMorphism, psi: HarmonicMorphism) -> bool:
    """Equality of the combinatorial data of two morphisms with the same source."""
    return (phi.vertex_map == psi.vertex_map and phi.edge_map == psi.edge_map
            and {e: phi.d(e) for e in phi.edge_map} == {e: psi.d(e) for e in psi.edge_map}
            and {v: phi.vdeg(v) for v in phi.vertex_map} == {v: psi.vdeg(v) for v in psi.vertex_map})


def riemann_hurwitz_genus(phi: HarmonicMorphism) -> int | None:
    """Total source genus predicted from local data, per connected source.

    Sums the local Riemann-Hurwitz right-hand sides and the cycle count of
    the source graph; None when the source is disconnected.
    """
    g = phi.source.graph
    if not g.is_connected():
        return None
    local = 0
    for v in g.vertex_ids:
        g_tgt = phi.target.curve(phi.vertex_map[v]).genus
        ram = sum(deg - 1 for _, deg in phi.marks_at(v).values())
        two_g_minus_2 = phi.vdeg(v) * (2 * g_tgt - 2) + ram
        local += (two_g_minus_2 + 2) // 2
    return first_betti(g) + local
