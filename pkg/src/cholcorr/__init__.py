"""Closed-form Cholesky parametrizations of correlation and covariance
matrices, the identities that tie them together, a random correlation
generator, AR(1) tools, and a sequential dependence t-test.
"""

__version__ = "0.1.0"

from .ar1_sampling import Ar1Spec, ar1_cholesky, ar1_matrix, ar1_transform, sample_mvn
from .dependence_test import (
    SampleMatrix,
    StageResult,
    TestReport,
    sample_correlation,
    sequential_test,
    t_quantile,
    t_statistic,
)
from .errors import (
    DegenerateColumn,
    InvalidSemiPartial,
    NearSingular,
    NegativeRadicand,
    NotPositiveDefinite,
    SchurNonPositive,
)
from .identities import (
    ALL_VERIFIERS,
    DeterminantLadder,
    IdentityReport,
    check_order_conditions,
    determinant_ladders,
    verify_general_recursion,
    verify_product_sums,
    verify_ratio_differences,
    verify_recursion,
)
from .matrix_core import (
    CholeskyFactor,
    CorrelationMatrix,
    CovarianceMatrix,
    SquareMatrix,
    banachiewicz_inverse,
    bordered_determinant,
    bordered_minor_column,
    leading_minor_determinants,
    reference_cholesky,
)
from .parametrizations import (
    SemiPartialTable,
    SignPattern,
    chol_covariance,
    chol_detratio,
    chol_semipartial,
    extract_signs,
    semipartial_coefficient,
    semipartial_table,
)
from .randcorr import GeneratorConfig, RngState, generate, generate_batch, stream

__all__ = [
    "Ar1Spec",
    "CholeskyFactor",
    "CorrelationMatrix",
    "CovarianceMatrix",
    "DegenerateColumn",
    "DeterminantLadder",
    "GeneratorConfig",
    "IdentityReport",
    "InvalidSemiPartial",
    "NearSingular",
    "NegativeRadicand",
    "NotPositiveDefinite",
    "RngState",
    "SampleMatrix",
    "SchurNonPositive",
    "SemiPartialTable",
    "SignPattern",
    "SquareMatrix",
    "StageResult",
    "TestReport",
    "ALL_VERIFIERS",
    "ar1_cholesky",
    "ar1_matrix",
    "ar1_transform",
    "banachiewicz_inverse",
    "bordered_determinant",
    "bordered_minor_column",
    "check_order_conditions",
    "chol_covariance",
    "chol_detratio",
    "chol_semipartial",
    "determinant_ladders",
    "extract_signs",
    "generate",
    "generate_batch",
    "leading_minor_determinants",
    "reference_cholesky",
    "sample_correlation",
    "sample_mvn",
    "semipartial_coefficient",
    "semipartial_table",
    "sequential_test",
    "stream",
    "t_quantile",
    "t_statistic",
    "verify_general_recursion",
    "verify_product_sums",
    "verify_ratio_differences",
    "verify_recursion",
]
