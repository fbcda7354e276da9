"""Exact mixed volumes, mixed discriminants, and concavity checks of
log V_I on the discrete simplex, in pure rational arithmetic."""

from .bodies import (
    AxisBox,
    Body,
    Interval,
    VPolytope,
    Zonotope,
    affine_dimension,
    body_from_json,
    body_to_json,
    convex_hull_3d,
    minkowski_sum,
    scale,
    volume,
)
from .inequalities import (
    Certificate,
    LogValue,
    PreconditionError,
    Report,
    af_check_discriminants,
    af_check_volumes,
    envelope_vertex_comparisons,
    gromov_concavity,
    gromov_triple_check,
    minkowski_sequence_check,
    recheck_certificate,
    segment_concavity,
    vdw_check,
)
from .mixed import (
    BodyTuple,
    MatrixTuple,
    VolumePolynomial,
    discrete_simplex,
    discriminant_polynomial,
    mixed_discriminant,
    mixed_volume,
    mixed_volume_boxes,
    mixed_volume_segments,
    multinomial,
    volume_polynomial,
    volume_polynomial_interpolated,
)
from .numerics import (
    DimensionError,
    LPResult,
    Matrix,
    SingularSystemError,
    SymMatrix,
    as_rational,
    determinant,
    format_rational,
    is_positive_definite,
    permanent,
    simplex_max,
    solve_linear,
)
from .search import (
    Finding,
    SearchConfig,
    SearchResult,
    SearchSpace,
    findings_from_jsonl,
    result_to_jsonl,
    search,
    verify_finding,
)

__all__ = [
    "AxisBox",
    "Body",
    "BodyTuple",
    "Certificate",
    "DimensionError",
    "Finding",
    "Interval",
    "LPResult",
    "LogValue",
    "Matrix",
    "MatrixTuple",
    "PreconditionError",
    "Report",
    "SearchConfig",
    "SearchResult",
    "SearchSpace",
    "SingularSystemError",
    "SymMatrix",
    "VPolytope",
    "VolumePolynomial",
    "Zonotope",
    "af_check_discriminants",
    "af_check_volumes",
    "affine_dimension",
    "as_rational",
    "body_from_json",
    "body_to_json",
    "convex_hull_3d",
    "determinant",
    "discrete_simplex",
    "discriminant_polynomial",
    "envelope_vertex_comparisons",
    "findings_from_jsonl",
    "format_rational",
    "gromov_concavity",
    "gromov_triple_check",
    "is_positive_definite",
    "minkowski_sequence_check",
    "minkowski_sum",
    "mixed_discriminant",
    "mixed_volume",
    "mixed_volume_boxes",
    "mixed_volume_segments",
    "multinomial",
    "permanent",
    "recheck_certificate",
    "result_to_jsonl",
    "scale",
    "search",
    "segment_concavity",
    "simplex_max",
    "solve_linear",
    "verify_finding",
    "vdw_check",
    "volume",
    "volume_polynomial",
    "volume_polynomial_interpolated",
]
