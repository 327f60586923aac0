from .base import ambient, apply_phi, c12, c12_bar, CLASS_RESIDUALS, constraint_matrix, max_residual
from .decomposition import (
    ClassDecomposition,
    classify,
    ClassificationReport,
    class_span,
    decompose,
    decompose_structure,
    DEFAULT_RELATIVE_TOLERANCE,
    NAMED_TYPE_SPANS,
    PARALLEL_TOLERANCE
)
from .invariants import (
    coordinate_components,
    frame_components,
    invariants_from_frame_components,
    N_INVARIANTS,
    quadratic_invariants,
    QuadraticInvariants,
    RELATION_ROWS,
    relation_check,
    RelationReport
)
from .subspaces import (
    AMBIENT,
    ambient_basis,
    all_bases,
    cache_info,
    CLASS_DIMENSIONS,
    CV_DIMENSION,
    frame_key,
    frame_structure,
    FrameStructure,
    membership_residual,
    subspace_basis,
    SubspaceBasis
)
from .theorems import (
    ClaimResult,
    ClosednessResult,
    D_OMEGA_THRESHOLD,
    evaluate_field,
    FieldEvaluation,
    IdentityResult,
    LEIBNIZ_TOLERANCE,
    ledger_from_evaluations,
    THEOREM_CASES,
    theorem_suite,
    TheoremCase,
    TheoremLedger
)
