"""JSON encoding of graphs, complexes, morphisms, coverings and divisors.

Lengths travel as strings ("3/2") so they stay exact.  Permutations of
sheets are read in cycle or 1-based one-line notation and written in
one-line notation.  Every ``*_to_json`` output parses back to an equal
object with the matching ``*_from_json``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from . import perm as P
from .complex import IDENTITY_NAME, CurveAutomorphism, MetrizedComplex, ResidueCurve, default_curves
from .coverenum import CoveringRep, covering_rep
from .errors import InvalidInput
from .graph import AugmentedMetricGraph, Edge, Leaf, Vertex, as_fraction
from .jacobian import Divisor
from .morphism import HarmonicMorphism


class MalformedJSON(InvalidInput):
    def __init__(self, where: str, err: json.JSONDecodeError):
        super().__init__(f"{where}: malformed JSON at line {err.lineno}, column {err.colno}: {err.msg}")
        self.lineno, self.colno = err.lineno, err.colno


def loads(text: str, where: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise MalformedJSON(where, err) from None


def load_file(path) -> object:
    p = Path(path)
    return loads(p.read_text(encoding="utf-8"), str(p))


def dumps(obj) -> str:
    """Compact, deterministic JSON."""
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def frac_str(x: Fraction) -> str:
    return str(Fraction(x))


def _need(d: dict, key: str, what: str):
    if not isinstance(d, dict) or key not in d:
        raise InvalidInput(f"{what} needs a {key!r} field")
    return d[key]


def graph_from_json(data: dict) -> AugmentedMetricGraph:
    if not isinstance(data, dict):
        raise InvalidInput("graph must be a JSON object")
    verts = []
    for v in data.get("vertices", []):
        if isinstance(v, str):
            verts.append(Vertex(v, 0))
            continue
        genus = v.get("genus", 0)
        if not isinstance(genus, int) or isinstance(genus, bool):
            raise InvalidInput(f"genus of {v.get('id')!r} must be an integer")
        verts.append(Vertex(str(_need(v, "id", "vertex")), genus))
    edges = []
    for i, e in enumerate(data.get("edges", [])):
        length = _need(e, "length", "edge")
        if isinstance(length, float):
            raise InvalidInput("edge lengths must be strings or integers, not floats")
        edges.append(Edge(str(e.get("id", f"e{i + 1}")), str(_need(e, "from", "edge")),
                          str(_need(e, "to", "edge")), as_fraction(length)))
    leaves = []
    for l in data.get("leaves", []):
        label = l.get("label", l.get("id"))
        if label is None:
            raise InvalidInput("leaf needs a 'label'")
        leaves.append(Leaf(str(label), str(_need(l, "at", "leaf"))))
    return AugmentedMetricGraph(tuple(verts), tuple(edges), tuple(leaves))


def graph_to_json(g: AugmentedMetricGraph) -> dict:
    return {
        "vertices": [{"id": v.id, "genus": v.genus} for v in g.vertices],
        "edges": [{"id": e.id, "from": e.tail, "to": e.head, "length": frac_str(e.length)} for e in g.edges],
        "leaves": [{"at": l.at, "label": l.id} for l in g.leaves],
    }


def _label_perm(value, labels) -> dict[str, str]:
    """A permutation of mark labels: a map, one cycle, a list of cycles or '(a b)'."""
    if isinstance(value, dict):
        return {str(k): str(v) for k, v in value.items()}
    if isinstance(value, str):
        text = value.strip()
        if text in ("", "()", "e", "id"):
            return {}
        cycles = [c.split() for c in text.replace(",", " ").strip("()").split(")(")]
    elif isinstance(value, list) and all(isinstance(x, str) for x in value):
        cycles = [value]
    elif isinstance(value, list) and all(isinstance(x, list) for x in value):
        cycles = value
    else:
        raise InvalidInput(f"cannot read automorphism {value!r}")
    out = {}
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if a in out:
                raise InvalidInput(f"label {a!r} repeated in automorphism {value!r}")
            out[str(a)] = str(b)
    return out


def _aut_from_json(value, labels, k: int) -> CurveAutomorphism:
    if isinstance(value, dict) and ("perm" in value or "residues" in value or "name" in value):
        perm = _label_perm(value.get("perm", {}), labels)
        residues = {str(m): int(r) for m, r in value.get("residues", {}).items()}
        return CurveAutomorphism(str(value.get("name", f"a{k}")), perm, residues)
    return CurveAutomorphism(f"a{k}", _label_perm(value, labels), {})


def _aut_to_json(a: CurveAutomorphism) -> dict:
    out: dict = {"name": a.name, "perm": {k: v for k, v in a.perm.items() if k != v}}
    if any(a.residues.values()):
        out["residues"] = {k: v for k, v in a.residues.items() if v}
    return out


def complex_from_json(data: dict) -> MetrizedComplex:
    g = graph_from_json(data)
    curves = default_curves(g)
    by_id = {v.get("id"): v for v in data.get("vertices", []) if isinstance(v, dict)}
    for vid, v in by_id.items():
        c = v.get("curve")
        if c is None:
            continue
        marks = c.get("marks")
        if marks is None:
            marks = dict(curves[vid].marks) if vid in curves else {}
        marks = {str(h): str(l) for h, l in marks.items()}
        auts = tuple(_aut_from_json(a, set(marks.values()), k) for k, a in enumerate(c.get("auts", []), 1))
        genus = c.get("genus", v.get("genus", 0))
        curves[vid] = ResidueCurve(genus, marks, auts)
    p = data.get("residue_char", data.get("char", 0))
    if not isinstance(p, int) or isinstance(p, bool) or p < 0:
        raise InvalidInput("residue_char must be a non-negative integer")
    return MetrizedComplex(g, curves, p)


def complex_to_json(cx: MetrizedComplex) -> dict:
    out = graph_to_json(cx.graph)
    for v in out["vertices"]:
        c = cx.curves.get(v["id"])
        if c is None:
            continue
        entry = {"genus": c.genus, "marks": dict(c.marks)}
        auts = [a for a in c.automorphisms if not (a.name == IDENTITY_NAME and a.is_identity())]
        if auts or c.automorphisms[0].name != IDENTITY_NAME:
            entry["auts"] = [_aut_to_json(a) for a in c.automorphisms]
        v["curve"] = entry
    out["residue_char"] = cx.residue_char
    return out


def morphism_from_json(data: dict, source: MetrizedComplex | None = None,
                       target: MetrizedComplex | None = None) -> HarmonicMorphism:
    src = source if source is not None else complex_from_json(_need(data, "source", "morphism"))
    tgt = target if target is not None else complex_from_json(_need(data, "target", "morphism"))
    marks = None
    if "marks" in data:
        marks = {}
        for v, mm in data["marks"].items():
            marks[v] = {m: (str(_need(x, "to", "mark")), int(x.get("deg", 1))) for m, x in mm.items()}
    dil = {str(k): int(v) for k, v in data.get("dilation", {}).items()}
    for e in src.graph.edges:
        dil.setdefault(e.id, 1)
    return HarmonicMorphism(src, tgt, {str(k): str(v) for k, v in _need(data, "vertex_map", "morphism").items()},
                            {str(k): str(v) for k, v in _need(data, "edge_map", "morphism").items()},
                            dil, {str(k): int(v) for k, v in data.get("vertex_degree", {}).items()}, marks)


def morphism_to_json(phi: HarmonicMorphism) -> dict:
    out = {
        "source": complex_to_json(phi.source),
        "target": complex_to_json(phi.target),
        "vertex_map": dict(phi.vertex_map),
        "edge_map": dict(phi.edge_map),
        "dilation": dict(phi.dilation),
        "vertex_degree": dict(phi.vertex_degree),
    }
    if phi.mark_map is not None:
        out["marks"] = {v: {m: {"to": t, "deg": d} for m, (t, d) in mm.items()}
                        for v, mm in phi.mark_map.items()}
    return out


def rep_from_json(data: dict) -> CoveringRep:
    base = graph_from_json(_need(data, "base", "covering"))
    degree = data.get("degree")
    return covering_rep(base, data.get("voltages", {}), degree, data.get("extra_monodromy", []),
                        data.get("sites"), data.get("tree"))


def perm_json(p: P.Perm, cycles: bool = False):
    return P.format_cycles(p) if cycles else P.to_oneline(p)


def rep_to_json(rep: CoveringRep, cycles: bool = False) -> dict:
    """Voltages in one-line notation, or cycle notation with ``cycles``."""
    out = {
        "base": graph_to_json(rep.base),
        "degree": rep.degree,
        "tree": list(rep.spanning_tree),
        "voltages": {e: perm_json(rep.voltages[e], cycles) for e in rep.cotree},
    }
    if rep.extra_monodromy:
        out["extra_monodromy"] = [perm_json(p, cycles) for p in rep.extra_monodromy]
    if rep.monodromy_sites is not None:
        out["sites"] = list(rep.monodromy_sites)
    return out


def divisor_from_json(g: AugmentedMetricGraph, data) -> Divisor:
    if not isinstance(data, list):
        raise InvalidInput("divisor must be a list of {at, coeff} terms")
    terms = []
    for t in data:
        at = _need(t, "at", "divisor term")
        coeff = t.get("coeff", 1)
        terms.append((at if isinstance(at, str) else (at.get("edge"), at.get("pos")), coeff))
    return Divisor.on(g, terms)


def point_json(pt):
    return pt if isinstance(pt, str) else {"edge": pt[0], "pos": frac_str(pt[1])}


def divisor_to_json(d: Divisor) -> list:
    def key(item):
        pt = item[0]
        return (0, pt, "") if isinstance(pt, str) else (1, pt[0], pt[1])

    return [{"at": point_json(pt), "coeff": k} for pt, k in sorted(d.items(), key=key)]


def kind_of(data) -> str:
    if isinstance(data, list):
        return "divisor"
    if not isinstance(data, dict):
        raise InvalidInput("expected a JSON object")
    if "kind" in data:
        return str(data["kind"])
    if "base" in data:
        return "covering"
    if "source" in data and "target" in data:
        return "morphism"
    if "psi" in data or ("first" in data and "second" in data):
        return "rigid-morphism"
    if "vertices" in data:
        has_curves = any(isinstance(v, dict) and "curve" in v for v in data["vertices"])
        return "complex" if has_curves or "residue_char" in data else "graph"
    raise InvalidInput("cannot tell what kind of object this JSON describes")


def object_from_json(data):
    kind = kind_of(data)
    if kind == "graph":
        return graph_from_json(data)
    if kind == "complex":
        return complex_from_json(data)
    if kind == "morphism":
        return morphism_from_json(data)
    if kind == "covering":
        return rep_from_json(data)
    raise InvalidInput(f"no loader for {kind!r}")


def object_to_json(obj):
    if isinstance(obj, AugmentedMetricGraph):
        return graph_to_json(obj)
    if isinstance(obj, MetrizedComplex):
        return complex_to_json(obj)
    if isinstance(obj, HarmonicMorphism):
        return morphism_to_json(obj)
    if isinstance(obj, CoveringRep):
        return rep_to_json(obj)
    if isinstance(obj, Divisor):
        return divisor_to_json(obj)
    raise TypeError(f"cannot encode {type(obj).__name__}")
