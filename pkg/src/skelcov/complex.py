"""Metrized complexes: augmented graphs whose vertices carry residue curves.

A residue curve is an abstract record.  It has a genus, a marking that
sends every tangent direction at its vertex (finite edge or leaf) to a
distinct marked-point label, and a finite table of declared automorphisms.
Each automorphism permutes marked-point labels and, for the annuli attached
at its marked points, states a correction residue used by the gluing model
in :mod:`skelcov.rigid`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidInput
from .graph import (AugmentedMetricGraph, Edge, ValidationReport, Violation, as_fraction,
                    subdivide, validate_graph)


@dataclass(frozen=True)
class CurveAutomorphism:
    name: str
    perm: dict[str, str]  # marked-point label -> label
    residues: dict[str, int] = field(default_factory=dict)  # label -> correction residue

    def __post_init__(self):
        object.__setattr__(self, "perm", {k: v for k, v in self.perm.items() if k != v})
        object.__setattr__(self, "residues", {k: r for k, r in self.residues.items() if r})

    def image(self, label: str) -> str:
        return self.perm.get(label, label)

    def residue(self, label: str) -> int:
        return self.residues.get(label, 0)

    def is_identity(self) -> bool:
        return all(k == v for k, v in self.perm.items()) and not any(self.residues.values())


IDENTITY_NAME = "id"


@dataclass(frozen=True)
class ResidueCurve:
    genus: int
    marks: dict[str, str]  # half-edge id -> marked-point label
    automorphisms: tuple[CurveAutomorphism, ...] = ()

    def __post_init__(self):
        auts = tuple(self.automorphisms)
        if not any(a.is_identity() for a in auts):
            auts = (CurveAutomorphism(IDENTITY_NAME, {}),) + auts
        object.__setattr__(self, "automorphisms", auts)

    def label(self, half_edge: str) -> str:
        return self.marks[half_edge]


@dataclass(frozen=True)
class MetrizedComplex:
    graph: AugmentedMetricGraph
    curves: dict[str, ResidueCurve]
    residue_char: int = 0

    def curve(self, v: str) -> ResidueCurve:
        try:
            return self.curves[v]
        except KeyError:
            raise InvalidInput(f"no residue curve at vertex {v!r}") from None

    def label(self, v: str, half_edge: str) -> str:
        return self.curve(v).marks[half_edge]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def default_curves(g: AugmentedMetricGraph) -> dict[str, ResidueCurve]:
    """Curves of the vertex genus, each half-edge marked by its own id."""
    return {v.id: ResidueCurve(v.genus, {h: h for h in g.half_edges(v.id)}) for v in g.vertices}


def default_complex(g: AugmentedMetricGraph, residue_char: int = 0) -> MetrizedComplex:
    return MetrizedComplex(g, default_curves(g), residue_char)


def validate_complex(cx: MetrizedComplex) -> ValidationReport:
    report = validate_graph(cx.graph)
    if not report.ok:
        return report
    out = []
    g = cx.graph
    if not (cx.residue_char == 0 or is_prime(cx.residue_char)):
        out.append(Violation("bad residue characteristic", "", str(cx.residue_char)))
    for v in g.vertices:
        curve = cx.curves.get(v.id)
        if curve is None:
            out.append(Violation("missing residue curve", v.id))
            continue
        if curve.genus != v.genus:
            out.append(Violation("genus mismatch", v.id, f"curve {curve.genus}, graph {v.genus}"))
        halves = set(g.half_edges(v.id))
        if set(curve.marks) != halves:
            extra = sorted(set(curve.marks) - halves)
            missing = sorted(halves - set(curve.marks))
            out.append(Violation("marks do not match tangent directions", v.id,
                                 f"missing {missing}, extra {extra}"))
        labels = list(curve.marks.values())
        if len(set(labels)) != len(labels):
            out.append(Violation("reduction map not injective", v.id))
        label_set = set(labels)
        for aut in curve.automorphisms:
            image = [aut.image(l) for l in labels]
            if set(aut.perm) - label_set or sorted(image) != sorted(labels):
                out.append(Violation("automorphism is not a permutation of marks", v.id, aut.name))
            if set(aut.residues) - label_set:
                out.append(Violation("residue on unknown mark", v.id, aut.name))
    for v in sorted(set(cx.curves) - set(g.vertex_ids)):
        out.append(Violation("curve at unknown vertex", v))
    return ValidationReport(tuple(out), report.warnings)


def require_valid_complex(cx: MetrizedComplex) -> None:
    report = validate_complex(cx)
    if not report.ok:
        raise InvalidInput("invalid complex: " + "; ".join(map(str, report)))


def subcomplex(cx: MetrizedComplex, vertices, edges=(), leaves=None) -> MetrizedComplex:
    """Induced complex on a closed selection of vertices and edges.

    Leaves at selected vertices are kept unless ``leaves`` lists a subset.
    Residue curves keep only the marks of surviving tangent directions, so
    the result validates whenever ``cx`` does.
    """
    g = cx.graph
    keep = list(dict.fromkeys(vertices))
    for v in keep:
        g.vertex(v)
    inside = set(keep)
    for eid in edges:
        e = g.edge(eid)
        if e.tail not in inside or e.head not in inside:
            raise InvalidInput(f"selection is not closed: edge {eid} leaves the selected vertices")
    if leaves is None:
        leaf_ids = [l.id for l in g.leaves if l.at in inside]
    else:
        leaf_ids = list(leaves)
        for lid in leaf_ids:
            if g.leaf(lid).at not in inside:
                raise InvalidInput(f"selection is not closed: leaf {lid} is at an unselected vertex")
    sub = g.induced(keep, list(edges), leaf_ids)
    curves = {}
    for v in sub.vertex_ids:
        c = cx.curve(v)
        halves = set(sub.half_edges(v))
        marks = {h: l for h, l in c.marks.items() if h in halves}
        curves[v] = ResidueCurve(c.genus, marks, c.automorphisms)
    return MetrizedComplex(sub, curves, cx.residue_char)


def full_selection(cx: MetrizedComplex) -> tuple[list[str], list[str]]:
    return list(cx.graph.vertex_ids), [e.id for e in cx.graph.edges]


def subdivide_complex(cx: MetrizedComplex, edge_id: str, pos, new_vertex: str | None = None,
                      names: tuple[str, str] | None = None) -> MetrizedComplex:
    """Subdivide an edge and give the new vertex a genus-0 curve with two marks.

    The endpoint curves keep their labels: the tail's mark for the old edge
    now refers to the tail half, the head's mark to the head half.
    """
    g = cx.graph
    e: Edge = g.edge(edge_id)
    pos = as_fraction(pos)
    a, b = names or (f"{edge_id}a", f"{edge_id}b")
    vid = new_vertex or f"{edge_id}@{pos}"
    sub = subdivide(g, edge_id, pos, vid, (a, b))
    curves = dict(cx.curves)
    for end, half in ((e.tail, a), (e.head, b)):
        c = cx.curve(end)
        marks = {(half if h == edge_id else h): l for h, l in c.marks.items()}
        curves[end] = ResidueCurve(c.genus, marks, c.automorphisms)
    curves[vid] = ResidueCurve(0, {a: a, b: b})
    return MetrizedComplex(sub, curves, cx.residue_char)
