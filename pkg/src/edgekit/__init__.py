"""Jets, invariants and normal forms of cuspidal edges on surfaces in R^3."""

from .expr import ExprError, ExprSyntaxError, parse, parse_map
from .forms import AdaptedGerm, curvature_parabola, fundamental_forms, to_adapted
from .germ import Classification, GeometryError, SurfaceGerm, classify, singular_curve, unit_normal
from .invariants import (InvariantSet, derived_invariants, frame_invariants, invariants_at, kt_winding,
                         relation_residuals, sphere_center)
from .jet import Jet2, Jet2Vec3, JetError
from .normal_form import NormalFormCoefficients, equivalent_to_order3, realize, reduce, replay

__version__ = "0.1.0"

__all__ = [
    "AdaptedGerm", "Classification", "ExprError", "ExprSyntaxError", "GeometryError", "InvariantSet",
    "Jet2", "Jet2Vec3", "JetError", "NormalFormCoefficients", "SurfaceGerm", "classify",
    "curvature_parabola", "derived_invariants", "equivalent_to_order3", "frame_invariants",
    "fundamental_forms", "invariants_at", "kt_winding", "parse", "parse_map", "realize", "reduce",
    "relation_residuals", "replay", "singular_curve", "sphere_center", "to_adapted", "unit_normal",
]
