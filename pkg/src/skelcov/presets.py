"""Named example objects: the Tate-curve skeleton and its covers, the genus-2
skeleton, and the degree-3 branched cover with monodromy group S_3."""

from __future__ import annotations

from fractions import Fraction

from . import perm as P
from .complex import CurveAutomorphism, MetrizedComplex, ResidueCurve, default_complex
from .coverenum import CoveringRep, covering_rep
from .graph import AugmentedMetricGraph
from .morphism import HarmonicMorphism


def cycle_c2(length=1, genus=(0, 0)) -> AugmentedMetricGraph:
    """Two vertices joined by two parallel edges."""
    return AugmentedMetricGraph.build([("v1", genus[0]), ("v2", genus[1])],
                                      [("e1", "v1", "v2", length), ("e2", "v1", "v2", length)])


def theta_graph(length=1) -> AugmentedMetricGraph:
    return AugmentedMetricGraph.build(["v1", "v2"], [("e1", "v1", "v2", length), ("e2", "v1", "v2", length),
                                                     ("e3", "v1", "v2", length)])


def path_tree(k: int = 3) -> AugmentedMetricGraph:
    vs = [f"v{i + 1}" for i in range(k)]
    es = [(f"e{i + 1}", vs[i], vs[i + 1], 1) for i in range(k - 1)]
    return AugmentedMetricGraph.build(vs, es)


def mu2(name: str = "-1", marks=("m0", "m_inf")) -> CurveAutomorphism:
    """t ↦ -t on a projective line fixing 0 and ∞; it shifts each annulus by 1 mod 2."""
    return CurveAutomorphism(name, {m: m for m in marks}, {m: 1 for m in marks})


def p1_curve(e0: str, e_inf: str, with_mu2: bool = False) -> ResidueCurve:
    auts = (mu2(),) if with_mu2 else ()
    return ResidueCurve(0, {e0: "m0", e_inf: "m_inf"}, auts)


def tate_complex(residue_char: int = 0) -> MetrizedComplex:
    """The Tate-curve skeleton: C2 with projective lines marked at 0 and ∞."""
    g = cycle_c2()
    curves = {"v1": p1_curve("e1", "e2"), "v2": p1_curve("e1", "e2")}
    return MetrizedComplex(g, curves, residue_char)


def genus2_complex(residue_char: int = 0) -> MetrizedComplex:
    """C2 with one vertex of genus 1 and one of genus 0."""
    g = cycle_c2(genus=(1, 0))
    curves = {"v1": ResidueCurve(1, {"e1": "p", "e2": "q"}), "v2": p1_curve("e1", "e2")}
    return MetrizedComplex(g, curves, residue_char)


def tate_double_cover(residue_char: int = 0) -> HarmonicMorphism:
    """Degree-2 self-cover of the Tate skeleton with dilation 2 on both edges.

    Each source vertex carries t ↦ t^2 ramified at 0 and ∞, with the μ_2
    action declared on the source curves.
    """
    base = tate_complex(residue_char)
    half = Fraction(1, 2)
    g = AugmentedMetricGraph.build(["w1", "w2"], [("f1", "w1", "w2", half), ("f2", "w1", "w2", half)])
    curves = {"w1": p1_curve("f1", "f2", True), "w2": p1_curve("f1", "f2", True)}
    src = MetrizedComplex(g, curves, residue_char)
    return HarmonicMorphism(src, base, {"w1": "v1", "w2": "v2"}, {"f1": "e1", "f2": "e2"},
                            {"f1": 2, "f2": 2}, {"w1": 2, "w2": 2})


def c2_double_cover() -> CoveringRep:
    """Connected unramified double cover of C2 (a 4-cycle)."""
    return covering_rep(cycle_c2(), ["(1 2)"], 2)


def c2_triple_cover() -> CoveringRep:
    return covering_rep(cycle_c2(), ["(1 2 3)"], 3)


def s3_base() -> AugmentedMetricGraph:
    """A projective line with three branch points."""
    return AugmentedMetricGraph.build(["x"], [], [("P1", "x"), ("P2", "x"), ("P3", "x")])


def s3_cover() -> CoveringRep:
    """Degree-3 cover of a projective line branched at three points.

    The local monodromies (1 2), (2 3) and (1 2 3) compose to the identity
    and generate S_3.
    """
    a = P.parse_perm("(1 2)", 3)
    b = P.parse_perm("(2 3)", 3)
    c = P.inverse(P.compose(b, a))
    return covering_rep(s3_base(), [], 3, [a, b, c], ["P1", "P2", "P3"])


def single_edge_cover(d: int = 3) -> HarmonicMorphism:
    """One edge of dilation d over one edge, totally ramified at both ends.

    A leaf at each end carries the second ramification point of t ↦ t^d.
    """
    base = AugmentedMetricGraph.build(["a", "b"], [("e", "a", "b", d)], [("A", "a"), ("B", "b")])
    src = AugmentedMetricGraph.build(["a'", "b'"], [("e'", "a'", "b'", 1)], [("A'", "a'"), ("B'", "b'")])
    return HarmonicMorphism(default_complex(src), default_complex(base), {"a'": "a", "b'": "b"},
                            {"e'": "e", "A'": "A", "B'": "B"}, {"e'": d, "A'": d, "B'": d},
                            {"a'": d, "b'": d})


PRESETS = {
    "c2": cycle_c2,
    "theta2": theta_graph,
    "tate": tate_complex,
    "genus2": genus2_complex,
    "tate-cover": tate_double_cover,
    "c2-double-cover": c2_double_cover,
    "s3-cover": s3_cover,
}
