"""Deformation ring classification for modules over presented quiver algebras.

The pipeline: parse a small text format describing a field, a quiver,
relations, and modules; materialize the quotient algebra; compute Hom
and Ext spaces with exact arithmetic; lift a module through truncated
polynomial rings order by order; and classify the weak universal
deformation ring from the shape of that lifting tree, with a
re-verifiable certificate attached.
"""

from .algebra import HereditaryModeUnsupported, PresentedAlgebra
from .certificates import VerificationResult, verify_report
from .classify import (
    BudgetExceeded,
    ClassificationReport,
    Checks,
    ClassifyConfig,
    SearchResult,
    Verdict,
    classify,
    ladder_search,
    source_digest,
    stable_end_note,
    tangent_dimension,
)
from .dsl import (
    ModuleDef,
    ParseError,
    Relation,
    SourceFile,
    parse,
    print_source,
    report_to_text,
    serialize_report,
)
from .fields import FieldSpec, Scalar
from .lift import (
    CheckFailed,
    Ladder,
    LadderTranscript,
    Lift,
    LiftExtensions,
    Obstruction,
    as_representation,
    base_embedding,
    extend_step,
    first_order_space,
    is_valid,
    residual_coefficients,
    shift_endomorphism,
    verify_ladder,
)
from .linalg import Matrix
from .oracle import (
    EnumerationResult,
    enumerate_lifts,
    incremental_valid_points,
    oracle_max_order,
)
from .quiver import Arrow, Path, Quiver
from .rep import (
    DeformationSystem,
    HomSpace,
    IsoResult,
    Representation,
    direct_sum,
    ext1_cocycle,
    ext1_dim,
    ext1_hereditary,
    ext1_syzygy,
    hom_basis,
    hom_dim,
    hom_stable,
    iso_test,
    projective_cover,
    radical,
    syzygy,
    top,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "Arrow",
    "BudgetExceeded",
    "CheckFailed",
    "Checks",
    "ClassificationReport",
    "ClassifyConfig",
    "DeformationSystem",
    "EnumerationResult",
    "FieldSpec",
    "HereditaryModeUnsupported",
    "HomSpace",
    "IsoResult",
    "Ladder",
    "LadderTranscript",
    "Lift",
    "LiftExtensions",
    "Matrix",
    "ModuleDef",
    "Obstruction",
    "ParseError",
    "Path",
    "PresentedAlgebra",
    "Quiver",
    "Relation",
    "Representation",
    "Scalar",
    "SearchResult",
    "SourceFile",
    "Verdict",
    "VerificationResult",
    "as_representation",
    "base_embedding",
    "classify",
    "direct_sum",
    "enumerate_lifts",
    "ext1_cocycle",
    "ext1_dim",
    "ext1_hereditary",
    "ext1_syzygy",
    "extend_step",
    "first_order_space",
    "hom_basis",
    "hom_dim",
    "hom_stable",
    "incremental_valid_points",
    "is_valid",
    "iso_test",
    "ladder_search",
    "oracle_max_order",
    "parse",
    "print_source",
    "projective_cover",
    "radical",
    "report_to_text",
    "residual_coefficients",
    "serialize_report",
    "shift_endomorphism",
    "source_digest",
    "stable_end_note",
    "syzygy",
    "tangent_dimension",
    "top",
    "validate",
    "verify_ladder",
    "verify_report",
]
