"""freelat: exact Euclidean-lattice slopes, freeness of rational points on
projective space, and counting surveys of congruent-close point pairs."""

from .errors import (
    DegenerateHeightError,
    DimensionMismatchError,
    FreelatError,
    ResourceLimitError,
    ValidationError,
)
from .harness import (
    CountRecord,
    DensityEstimate,
    EulerProduct,
    FloorReport,
    SurveyConfig,
    congruence_density,
    dyadic_bounds,
    emit_report,
    euler_product,
    freeness_floor_check,
    report_rows,
    run_survey,
)
from .lattice import (
    GramLattice,
    SlopeProfile,
    direct_sum,
    enumerate_short_vectors,
    freeness_from_profile,
    merge_slopes,
    min_covolume_sq,
    slope_profile,
    successive_minima_sq,
)
from .pairs import (
    PointPair,
    chordal_distance_sq,
    congruence_modulus,
    in_s,
    make_pair,
    second_height,
)
from .projective import (
    PairFreeness,
    ProjectivePoint,
    TangentLatticeResult,
    anticanonical_log_height,
    enumerate_points,
    freeness,
    normalize,
    pair_freeness,
    pair_tangent,
    parse_point,
    tangent_lattice,
)

__version__ = "0.1.0"

__all__ = [
    "CountRecord",
    "DegenerateHeightError",
    "DensityEstimate",
    "DimensionMismatchError",
    "EulerProduct",
    "FloorReport",
    "FreelatError",
    "GramLattice",
    "PairFreeness",
    "PointPair",
    "ProjectivePoint",
    "ResourceLimitError",
    "SlopeProfile",
    "SurveyConfig",
    "TangentLatticeResult",
    "ValidationError",
    "anticanonical_log_height",
    "chordal_distance_sq",
    "congruence_density",
    "congruence_modulus",
    "direct_sum",
    "dyadic_bounds",
    "emit_report",
    "enumerate_points",
    "enumerate_short_vectors",
    "euler_product",
    "freeness",
    "freeness_floor_check",
    "freeness_from_profile",
    "in_s",
    "make_pair",
    "merge_slopes",
    "min_covolume_sq",
    "normalize",
    "pair_freeness",
    "pair_tangent",
    "parse_point",
    "report_rows",
    "run_survey",
    "second_height",
    "slope_profile",
    "successive_minima_sq",
    "tangent_lattice",
]
