"""Riemannian surfaces attached to ``u' = phi(x, u)``: curvature, deformations and integrability."""

from .expr import Region, parse, simplify, to_text
from .surface import Deformation, OdeProblem, build_surface, classify_curvature, curvature, delta_eps

__version__ = "0.1.0"

__all__ = [
    "Deformation", "OdeProblem", "Region", "build_surface", "classify_curvature", "curvature",
    "delta_eps", "parse", "simplify", "to_text",
]
