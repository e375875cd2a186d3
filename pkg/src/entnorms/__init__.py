"""Entanglement norms for bipartite operators: certified bounds for the
Schmidt-restricted operator norm, the restricted numerical radius, the
projective tensor norm and robustness, plus realignment-based
Schmidt-number detection, generation of seeded test ensembles, and a
command line front end."""

from .criteria import (
    DetectionReport,
    FilterResult,
    cross_norm_test,
    detect_schmidt_number,
    local_filter,
    pure_state_sr_test,
    realignment_value,
    weak_realignment,
)
from .dualnorms import (
    ConjectureProbe,
    Decomposition,
    SnCertification,
    Witness,
    best_gamma_witness,
    build_decomposition,
    certified_upper_from_decomposition,
    conjecture_probe,
    decomposition_from_mixture,
    decomposition_oracle,
    gamma_bounds,
    gamma_pure,
    gamma_rank_one,
    robustness_bounds,
    robustness_to_entanglement,
    sn_certify,
)
from .errors import (
    DegenerateInputError,
    DimensionError,
    EntnormsError,
    InfeasibleError,
    NumericalError,
    ParameterError,
    PreconditionError,
)
from .kyfan import BreakIndexResult, break_index, k2_dual, k2_norm
from .linalg import (
    BipartiteOperator,
    MatrixNorms,
    bipartite,
    eig_hermitian,
    hs_inner,
    is_hermitian,
    kron,
    matrix_norms,
    partial_trace,
    partial_transpose,
    realign,
    realign_inverse,
    svd,
    swap_operator,
)
from .schmidt import (
    PureState,
    SchmidtDecomposition,
    pure_state,
    s_k_dual,
    s_k_norm,
    schmidt_decompose,
    schmidt_rank,
    schmidt_truncate,
)
from .sknorm import (
    BlockPositivityResult,
    NormInterval,
    SeeSawResult,
    block_positivity_check,
    prod_radius_bisect,
    prod_radius_bounds,
    seesaw_lower,
    sk_bounds,
    sk_elementary,
    sk_pure,
)
from .states import KINDS, EnsembleSpec, generate, haar_unitary, sn_bounded_ensemble

__version__ = "0.1.0"

__all__ = [
    "BipartiteOperator",
    "BlockPositivityResult",
    "BreakIndexResult",
    "ConjectureProbe",
    "Decomposition",
    "DegenerateInputError",
    "DetectionReport",
    "DimensionError",
    "EnsembleSpec",
    "EntnormsError",
    "FilterResult",
    "InfeasibleError",
    "KINDS",
    "MatrixNorms",
    "NormInterval",
    "NumericalError",
    "ParameterError",
    "PreconditionError",
    "PureState",
    "SchmidtDecomposition",
    "SeeSawResult",
    "SnCertification",
    "Witness",
    "best_gamma_witness",
    "bipartite",
    "block_positivity_check",
    "build_decomposition",
    "certified_upper_from_decomposition",
    "conjecture_probe",
    "cross_norm_test",
    "decomposition_from_mixture",
    "decomposition_oracle",
    "detect_schmidt_number",
    "eig_hermitian",
    "gamma_bounds",
    "gamma_pure",
    "gamma_rank_one",
    "generate",
    "haar_unitary",
    "hs_inner",
    "is_hermitian",
    "k2_dual",
    "k2_norm",
    "kron",
    "local_filter",
    "matrix_norms",
    "partial_trace",
    "partial_transpose",
    "prod_radius_bisect",
    "prod_radius_bounds",
    "pure_state",
    "pure_state_sr_test",
    "realign",
    "realign_inverse",
    "realignment_value",
    "robustness_bounds",
    "robustness_to_entanglement",
    "s_k_dual",
    "s_k_norm",
    "schmidt_decompose",
    "schmidt_rank",
    "schmidt_truncate",
    "seesaw_lower",
    "sk_bounds",
    "sk_elementary",
    "sk_pure",
    "sn_bounded_ensemble",
    "sn_certify",
    "svd",
    "swap_operator",
    "weak_realignment",
]
