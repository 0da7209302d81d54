"""Homogeneous Ricci flow on reductive presentations ``g = h + m``.

Lie algebras are given by structure constants, metrics by positive definite
operators on ``m`` relative to an invariant background inner product.
"""

from .algebra import (
    LieAlgebra,
    LieAlgebraError,
    Subspace,
    bracket,
    derived_subalgebra,
    direct_sum,
    intersect,
    is_compact_semisimple,
    is_ideal,
    is_subalgebra,
    jacobi_residual,
    killing_form,
    semidirect_sum,
)
from .bochner import (
    BochnerData,
    BochnerViolation,
    HypothesisError,
    build_bochner,
    mixed_term_audit,
    positive_direction,
    reduce_to_semisimple,
)
from .catalog import CatalogEntry, Expected, random_metric
from .curvature import RicciData, mean_curvature, ricci_oracle, ricci_quadratic, ricci_tensor, scalar_curvature
from .flow import FlowOptions, FlowResult, Verdict, extinction_bound, fiber_sup, integrate
from .presentation import (
    Metric,
    MetricError,
    Presentation,
    PresentationError,
    check_presentation,
    effectiveness_kernel,
    make_presentation,
)

__all__ = [
    "BochnerData", "BochnerViolation", "CatalogEntry", "Expected", "FlowOptions", "FlowResult",
    "HypothesisError", "LieAlgebra", "LieAlgebraError", "Metric", "MetricError", "Presentation",
    "PresentationError", "RicciData", "Subspace", "Verdict", "bracket", "build_bochner",
    "check_presentation", "derived_subalgebra", "direct_sum", "effectiveness_kernel",
    "extinction_bound", "fiber_sup", "integrate", "intersect", "is_compact_semisimple",
    "is_ideal", "is_subalgebra", "jacobi_residual", "killing_form", "make_presentation",
    "mean_curvature", "mixed_term_audit", "positive_direction", "random_metric",
    "reduce_to_semisimple", "ricci_oracle", "ricci_quadratic", "ricci_tensor",
    "scalar_curvature", "semidirect_sum",
]
