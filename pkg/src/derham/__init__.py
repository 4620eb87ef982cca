"""de Rham functional equations: solutions, exponents, classification.

The continuous solution of G(t) = f_i(G(mt - i)) for a weak-contraction
family (f_0 .. f_{m-1}) is evaluated exactly at m-adic rationals by
branch composition; the regularity exponents alpha and beta (averages
of -log_m of the extreme singular values of Df along the curve) decide
differentiability almost everywhere.
"""

from .errors import (
    ConvergenceError,
    DerhamError,
    DomainError,
    ResourceLimitError,
    SpecParseError,
    SystemValidationError,
)
from .ifs_core import (
    DeRhamSystem,
    DifferentiableMap,
    Jacobian,
    ValidationReport,
    endpoint_fixes,
    fixed_point,
    jacobian_norms,
    map_eval,
    map_jacobian,
    validate_system,
)
from .oracles import (
    AffineDigitFamily,
    affine_digit_series,
    minkowski_q,
    minkowski_q_inverse,
    takagi,
)
from .perturbation import (
    FAMILIES,
    StudyTable,
    SystemFamily,
    TakagiFit,
    convergence_study,
    get_family,
    perturbation_derivative,
    sup_distance,
    takagi_fit,
)
from .presets import PRESETS, build_preset, closed_form_alpha
from .regularity import (
    ExponentTrace,
    RegularityEstimate,
    RegularityVerdict,
    VariationTable,
    alpha_beta_monte_carlo,
    alpha_beta_quadrature,
    classify,
    empirical_exponent,
    integrand_at,
    p_variation_table,
    quadrature_with_margin,
)
from .serialization import (
    emit_csv,
    emit_svg,
    load_document,
    load_system,
    parse_system_spec,
    system_to_document,
)
from .solver import (
    CurveSample,
    IncrementTable,
    MadicDigits,
    eval_G,
    eval_G_madic,
    eval_G_with_bracket,
    increment_Mn,
    increment_table,
    madic_digits,
    sample_curve,
    shift,
    successor,
)

__version__ = "0.1.0"

__all__ = [
    "AffineDigitFamily",
    "ConvergenceError",
    "CurveSample",
    "DeRhamSystem",
    "DerhamError",
    "DifferentiableMap",
    "DomainError",
    "ExponentTrace",
    "FAMILIES",
    "IncrementTable",
    "Jacobian",
    "MadicDigits",
    "PRESETS",
    "RegularityEstimate",
    "RegularityVerdict",
    "ResourceLimitError",
    "SpecParseError",
    "StudyTable",
    "SystemFamily",
    "SystemValidationError",
    "TakagiFit",
    "ValidationReport",
    "VariationTable",
    "affine_digit_series",
    "alpha_beta_monte_carlo",
    "alpha_beta_quadrature",
    "build_preset",
    "classify",
    "closed_form_alpha",
    "convergence_study",
    "emit_csv",
    "emit_svg",
    "empirical_exponent",
    "endpoint_fixes",
    "eval_G",
    "eval_G_madic",
    "eval_G_with_bracket",
    "fixed_point",
    "get_family",
    "increment_Mn",
    "increment_table",
    "integrand_at",
    "jacobian_norms",
    "load_document",
    "load_system",
    "madic_digits",
    "map_eval",
    "map_jacobian",
    "minkowski_q",
    "minkowski_q_inverse",
    "p_variation_table",
    "parse_system_spec",
    "perturbation_derivative",
    "quadrature_with_margin",
    "sample_curve",
    "shift",
    "successor",
    "sup_distance",
    "system_to_document",
    "takagi",
    "takagi_fit",
    "validate_system",
]
