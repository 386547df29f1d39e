"""Self-intersections of Laurent polynomial curves on the unit circle and
approximation of circle maps by positively oriented Jordan curves."""

from .errors import (
    BalancedModulusError,
    BoundViolation,
    BudgetExceeded,
    DegenerateInput,
    DomainError,
    ExceptionalInput,
    ExcisionFailure,
    GenericityFailure,
    InsufficientSamples,
    NoPathFound,
    OrientationFailure,
    RangeError,
    SaturationWarning,
    SelfxError,
    SingularSystem,
)
from .laurent import (
    ExceptionalStatus,
    LaurentPolynomial,
    detect_exceptional,
    fit_from_samples,
    normalize,
    reduce_balanced,
    sample,
)
from .pairing import build_g, build_g_star, resultant_in_z, resultant_roots, verify_identity
from .intersector import (
    DEFAULT_TOLERANCES,
    AnalysisReport,
    SelfIntersection,
    ToleranceSet,
    extremal,
    self_intersections,
    upper_bound,
)
from .oracle import EquivalenceReport, OracleConfig, compare, oracle_self_intersections
from .geometry import PlanarCurve, polyline_is_simple, signed_area
from .embedder import EmbeddingRequest, EmbeddingResult, embed, lp_distance, polyline_fourier
from .documents import CurveDocument, Samples

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport", "BalancedModulusError", "BoundViolation", "BudgetExceeded", "CurveDocument",
    "DEFAULT_TOLERANCES", "DegenerateInput", "DomainError", "EmbeddingRequest", "EmbeddingResult",
    "EquivalenceReport", "ExceptionalInput", "ExceptionalStatus", "ExcisionFailure", "GenericityFailure",
    "InsufficientSamples", "LaurentPolynomial", "NoPathFound", "OracleConfig", "OrientationFailure",
    "PlanarCurve", "RangeError", "Samples", "SaturationWarning", "SelfIntersection", "SelfxError",
    "SingularSystem", "ToleranceSet", "build_g", "build_g_star", "compare", "detect_exceptional", "embed",
    "extremal", "fit_from_samples", "lp_distance", "normalize", "oracle_self_intersections",
    "polyline_fourier", "polyline_is_simple", "reduce_balanced", "resultant_in_z", "resultant_roots",
    "sample", "self_intersections", "signed_area", "upper_bound", "verify_identity",
]
