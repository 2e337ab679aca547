"""svcalc: singular value functional calculus with sharp Lipschitz bounds.

Apply scalar functions to the singular values of complex matrices,
compute the Lipschitz and complex rotation moduli that govern how such
maps stretch Frobenius distances, decompose doubly substochastic
matrices into permutation-phase extreme points, and verify the sharp
bounds (1 for real-valued functions, sqrt(2) for complex-valued ones)
constructively.
"""

from .cdss import (
    CdssDecomposition,
    NotCdssError,
    PermutationPhase,
    decompose,
    distance_identity_check,
    is_cdss,
    pp_to_matrix,
    term_bound,
)
from .estimators import PermutationPhaseDecomposition, SingularValueTransform
from .functions import (
    SQRT2,
    Clip,
    HardThreshold,
    Identity,
    LipschitzModuli,
    PiecewiseLinear,
    Power,
    Scale,
    ScalarFunction,
    ScanResult,
    SoftThreshold,
    extremal_ratio,
    lip_c_modulus,
    lip_modulus,
    lipschitz_moduli,
    maxnorm_margin,
    maxnorm_ratio,
    maxnorm_scan,
    parse_function,
    tight_function,
)
from .linalg import (
    DEFAULT_TOLERANCES,
    SingularDecomposition,
    Tolerances,
    frobenius_norm,
    hadamard,
    load_matrix,
    matrix_from_dict,
    matrix_from_json,
    matrix_to_dict,
    matrix_to_json,
    orthonormality_defect,
    random_unitary,
    save_matrix,
    svd,
)
from .svfc import (
    NormalComparison,
    apply_kernel_formula,
    apply_svfc,
    classical_fc_normal,
    compare_normal,
    linear_map,
    monomial,
    plane_from_scalar,
)
from .verify import (
    TrialConfig,
    VerificationReport,
    dimension_sweep,
    operator_ratio,
    scalar_tightness,
    verify_bound,
)

__version__ = "0.1.0"

__all__ = [
    "SQRT2",
    "CdssDecomposition",
    "Clip",
    "DEFAULT_TOLERANCES",
    "HardThreshold",
    "Identity",
    "LipschitzModuli",
    "NormalComparison",
    "NotCdssError",
    "PermutationPhase",
    "PermutationPhaseDecomposition",
    "PiecewiseLinear",
    "Power",
    "Scale",
    "ScalarFunction",
    "ScanResult",
    "SingularDecomposition",
    "SingularValueTransform",
    "SoftThreshold",
    "Tolerances",
    "TrialConfig",
    "VerificationReport",
    "apply_kernel_formula",
    "apply_svfc",
    "classical_fc_normal",
    "compare_normal",
    "decompose",
    "dimension_sweep",
    "distance_identity_check",
    "extremal_ratio",
    "frobenius_norm",
    "hadamard",
    "is_cdss",
    "linear_map",
    "lip_c_modulus",
    "lip_modulus",
    "lipschitz_moduli",
    "load_matrix",
    "matrix_from_dict",
    "matrix_from_json",
    "matrix_to_dict",
    "matrix_to_json",
    "maxnorm_margin",
    "maxnorm_ratio",
    "maxnorm_scan",
    "monomial",
    "operator_ratio",
    "orthonormality_defect",
    "parse_function",
    "plane_from_scalar",
    "pp_to_matrix",
    "random_unitary",
    "save_matrix",
    "scalar_tightness",
    "svd",
    "term_bound",
    "tight_function",
    "verify_bound",
]
