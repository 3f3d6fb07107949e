"""Green's functions and solutions of linear difference equations with
variable coefficients, computed through banded Hessenbergian determinants
and cross-verified against independent expansions."""

from .scalar import (
    BACKENDS,
    FLOAT64,
    RATIONAL,
    SYMBOLIC,
    BackendMismatchError,
    Scalar,
    TermSum,
    add,
    backend_of,
    format_rational,
    h_sym,
    is_zero,
    mul,
    one,
    parse_rational,
    phi_sym,
    scalar_from_json,
    scalar_to_json,
    scalars_close,
    term_sum_from_json,
    term_sum_to_json,
    v_sym,
    y_sym,
    zero,
)
from .hessenberg import (
    BandedHessenbergMatrix,
    HessenbergMatrix,
    Permutation,
    StructureError,
    det_leibniz_oracle,
    det_recurrence,
    hessenberg_from_json,
    hessenberg_to_json,
    leading_principal_chain,
)
from .leibnizian import (
    DEFAULT_ENUM_LIMIT,
    EnumLimitError,
    SepTerm,
    StringPropertyReport,
    column_for_index,
    det_leibnizian,
    enumerate_seps,
    factor_column,
    initial_strings,
    mask_from_index,
    mask_from_sep,
    sep_columns,
    sep_from_mask,
    validate_string_properties,
    zero_run,
    zero_run_piecewise,
)
from .nested_sum import SuperdiagonalError, det_nested_sum, green_nested_sum
from .coefficients import (
    CoefficientModel,
    DomainError,
    PrincipalMatrixSpec,
    build_phi_matrix,
)
from .lde import (
    CasoratiMatrix,
    CompanionMatrix,
    GREEN_METHODS,
    MissingForcingError,
    SOLVE_METHODS,
    SolutionProblem,
    casorati,
    companion_matrix,
    companion_product,
    evaluate_green,
    evaluate_solution,
    general_solution,
    general_solution_kittappa,
    general_solution_leibnizian,
    general_solution_nested,
    green,
    green_leibnizian,
    homogeneous_solution,
    homogeneous_solution_green,
    particular_solution,
    particular_solution_det,
    principal_chain,
    recursion_oracle,
    xi,
    xi_via_green,
)

__version__ = "0.1.0"

__all__ = [
    "BACKENDS",
    "BackendMismatchError",
    "BandedHessenbergMatrix",
    "CasoratiMatrix",
    "CoefficientModel",
    "CompanionMatrix",
    "DEFAULT_ENUM_LIMIT",
    "DomainError",
    "EnumLimitError",
    "FLOAT64",
    "GREEN_METHODS",
    "HessenbergMatrix",
    "MissingForcingError",
    "Permutation",
    "PrincipalMatrixSpec",
    "RATIONAL",
    "SOLVE_METHODS",
    "SYMBOLIC",
    "Scalar",
    "SepTerm",
    "SolutionProblem",
    "StringPropertyReport",
    "StructureError",
    "SuperdiagonalError",
    "TermSum",
    "add",
    "backend_of",
    "build_phi_matrix",
    "casorati",
    "column_for_index",
    "companion_matrix",
    "companion_product",
    "det_leibniz_oracle",
    "det_leibnizian",
    "det_nested_sum",
    "det_recurrence",
    "enumerate_seps",
    "evaluate_green",
    "evaluate_solution",
    "factor_column",
    "format_rational",
    "general_solution",
    "general_solution_kittappa",
    "general_solution_leibnizian",
    "general_solution_nested",
    "green",
    "green_leibnizian",
    "green_nested_sum",
    "h_sym",
    "hessenberg_from_json",
    "hessenberg_to_json",
    "homogeneous_solution",
    "homogeneous_solution_green",
    "initial_strings",
    "is_zero",
    "leading_principal_chain",
    "mask_from_index",
    "mask_from_sep",
    "mul",
    "one",
    "parse_rational",
    "particular_solution",
    "particular_solution_det",
    "phi_sym",
    "principal_chain",
    "recursion_oracle",
    "scalar_from_json",
    "scalar_to_json",
    "scalars_close",
    "sep_columns",
    "sep_from_mask",
    "term_sum_from_json",
    "term_sum_to_json",
    "v_sym",
    "validate_string_properties",
    "xi",
    "xi_via_green",
    "y_sym",
    "zero",
    "zero_run",
    "zero_run_piecewise",
]
