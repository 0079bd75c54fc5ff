"""Power allocation under position and channel uncertainty."""
from .cover import (Circle, CircleUncertainty, UncertaintyCover, cos2_range, derive_intervals,
                    derive_intervals_rnl, derive_intervals_wnl, hex_cover, nominal_points, nuss_cover,
                    single_circle_cover)
from .oracle import arc_support, max_projection, worst_case_speb, worst_case_speb_oracle
from .bounds import (BoundVectors, SpebBounds, bound_vectors, check_validity, gap_constant, grid_angles,
                     speb_bounds_eval)
from .builders import (build_robust_socp_asymptotic, build_robust_socp_efficient,
                       build_robust_socp_efficient_rnl, build_robust_socp_efficient_wnl,
                       efficient_rnl_vectors, tilde_vectors_wnl)

__all__ = [
    "Circle", "CircleUncertainty", "UncertaintyCover", "cos2_range", "derive_intervals",
    "derive_intervals_rnl", "derive_intervals_wnl", "hex_cover", "nominal_points", "nuss_cover",
    "single_circle_cover", "arc_support", "max_projection", "worst_case_speb", "worst_case_speb_oracle",
    "BoundVectors", "SpebBounds", "bound_vectors", "check_validity", "gap_constant", "grid_angles",
    "speb_bounds_eval", "build_robust_socp_asymptotic", "build_robust_socp_efficient",
    "build_robust_socp_efficient_rnl", "build_robust_socp_efficient_wnl", "efficient_rnl_vectors",
    "tilde_vectors_wnl",
]
