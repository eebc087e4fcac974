"""Combinatorial tame coverings of skeleta of curves: metric graphs, metrized
complexes, harmonic morphisms, voltage covers, gluing data, tropical
Jacobians and Galois closures, all in exact arithmetic."""

from .bounds import Bounds
from .complex import MetrizedComplex, ResidueCurve, CurveAutomorphism
from .coverenum import CoveringRep, covering_rep, enumerate_coverings, fiber_product
from .errors import InvalidInput, ResourceBoundExceeded, SkelcovError
from .galois import galois_closure, is_galois, monodromy_group
from .graph import AugmentedMetricGraph
from .jacobian import Divisor, divisor_class, is_principal, torsion_filtration, tropical_jacobian
from .morphism import HarmonicMorphism, degree, is_covering
from .rigid import automorphism_group, lifting_classes

__version__ = "0.1.0"

__all__ = [
    "AugmentedMetricGraph", "Bounds", "CoveringRep", "CurveAutomorphism", "Divisor", "HarmonicMorphism",
    "InvalidInput", "MetrizedComplex", "ResidueCurve", "ResourceBoundExceeded", "SkelcovError",
    "automorphism_group", "covering_rep", "degree", "divisor_class", "enumerate_coverings", "fiber_product",
    "galois_closure", "is_covering", "is_galois", "is_principal", "lifting_classes", "monodromy_group",
    "torsion_filtration", "tropical_jacobian",
]
