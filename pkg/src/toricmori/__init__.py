"""Exact toric geometry: fans, intersection numbers, Mori cones and contractions."""

from .constructions import Example, build, corpus
from .divisor import (
    TorusDivisor,
    Verdict,
    canonical_divisor,
    cartier_index,
    global_generation,
    is_cartier,
    is_pseudo_effective,
    is_q_cartier,
    prime_divisor,
    principal_divisor,
    pullback,
    sections_count,
    top_self_intersection,
    very_ample,
)
from .document import FanDocument, parse_divisor
from .errors import ToricError
from .fan import Fan, refinement_map, star_subdivision, validate_fan, walls
from .intersect import curve_class, fake_wps_audit, wall_degree
from .mori import (
    adjoint_report,
    classify_divisorial,
    contract_ray,
    is_ample,
    is_nef,
    mori_cone,
    nef_threshold,
    ray_length,
    reid_profile,
    theorem_suite,
)

__version__ = "0.1.0"

__all__ = [
    "Example", "Fan", "FanDocument", "ToricError", "TorusDivisor", "Verdict",
    "adjoint_report", "build", "canonical_divisor", "cartier_index", "classify_divisorial",
    "contract_ray", "corpus", "curve_class", "fake_wps_audit", "global_generation",
    "is_ample", "is_cartier", "is_nef", "is_pseudo_effective", "is_q_cartier", "mori_cone",
    "nef_threshold", "parse_divisor", "prime_divisor", "principal_divisor", "pullback",
    "ray_length", "refinement_map", "reid_profile", "sections_count", "star_subdivision",
    "theorem_suite", "top_self_intersection", "validate_fan", "very_ample", "wall_degree",
    "walls",
]
