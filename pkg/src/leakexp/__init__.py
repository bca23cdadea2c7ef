"""Exact leakage of linear-hash privacy amplification over binary side
channels, the matching decoding-error bound, and error-exponent curves."""
from .channels import (
    ChannelSpec,
    JointSource,
    bec_joint,
    bsc_joint,
    less_noisy_erasure_param,
    parse_channel,
)
from .errors import (
    DegenerateParameterError,
    InputParseError,
    InvariantViolationError,
    SizeLimitError,
)
from .exponents import (
    CurvePoint,
    CurveTable,
    OptResult,
    critical_rate,
    curve,
    expurgation_exponent_bec,
    expurgation_exponent_bsc,
    expurgation_exponent_min_form,
    expurgation_rate,
    lagrangian_dual,
    lagrangian_dual_max,
    random_coding_exponent,
    random_coding_exponent_bec,
    random_coding_exponent_bsc,
    renyi_exponent,
)
from .gf2 import (
    BinMatrix,
    IndexSet,
    format_matrix,
    min_distance,
    parse_matrix,
    random_matrix,
    rank,
    submatrix_cols,
)
from .leakage import (
    LeakageReport,
    PmlResult,
    best_matrix_search,
    brute_force_leakage,
    exact_leakage_bec,
    exact_leakage_bsc,
    mc_p_ml_erasure,
    p_ml_erasure,
    verify_leakage_bound,
)

__version__ = "0.1.0"

__all__ = [
    "BinMatrix",
    "IndexSet",
    "rank",
    "submatrix_cols",
    "min_distance",
    "random_matrix",
    "parse_matrix",
    "format_matrix",
    "JointSource",
    "ChannelSpec",
    "bec_joint",
    "bsc_joint",
    "less_noisy_erasure_param",
    "parse_channel",
    "LeakageReport",
    "PmlResult",
    "exact_leakage_bec",
    "exact_leakage_bsc",
    "brute_force_leakage",
    "p_ml_erasure",
    "mc_p_ml_erasure",
    "verify_leakage_bound",
    "best_matrix_search",
    "OptResult",
    "CurvePoint",
    "CurveTable",
    "renyi_exponent",
    "random_coding_exponent",
    "random_coding_exponent_bec",
    "random_coding_exponent_bsc",
    "expurgation_exponent_bec",
    "expurgation_exponent_bsc",
    "expurgation_exponent_min_form",
    "lagrangian_dual",
    "lagrangian_dual_max",
    "critical_rate",
    "expurgation_rate",
    "curve",
    "InputParseError",
    "SizeLimitError",
    "DegenerateParameterError",
    "InvariantViolationError",
    "__version__",
]
