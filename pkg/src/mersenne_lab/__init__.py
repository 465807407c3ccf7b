"""Arithmetic of Mersenne numbers 2^n - 1 and of integers with dense divisors."""

from .arith import (
    DEFAULT_BUDGET,
    FactorBudget,
    FactoredInteger,
    IncompleteFactorizationError,
    Ratio,
    Status,
    divisors,
    factor_integer,
    is_prime,
    largest_prime_factor,
    moebius,
    multiplicative_order,
    omega,
    phi,
    pow_mod,
    tau,
)
from .cache import FactorCache, FactorCacheRecord
from .density import (
    DenseCount,
    DensityProfile,
    Method,
    count_dense,
    delta,
    delta0,
    dense_chain_test,
    generate_dense,
    saias_ratio,
    smooth_count,
)
from .mersenne import (
    MersenneFactorization,
    MultiplierSet,
    cyclotomic_value,
    divisor_multiplier_set,
    factor_mersenne,
    largest_prime_factor_mersenne,
    primitive_divisor,
    verify_product,
)
from .series import (
    ClassificationFlags,
    PartialSumReport,
    TermRecord,
    classify_n,
    partial_sum_sigma,
    phi_min_order,
    schinzel_check,
    stewart_A_exceptions,
    stewart_B_check,
    stewart_lemma_ratio,
    tau_sum_check,
)

__version__ = "0.1.0"

__all__ = [
    "FactorCache",
    "FactorCacheRecord",
    "ClassificationFlags",
    "DEFAULT_BUDGET",
    "DenseCount",
    "DensityProfile",
    "FactorBudget",
    "FactoredInteger",
    "IncompleteFactorizationError",
    "MersenneFactorization",
    "Method",
    "MultiplierSet",
    "PartialSumReport",
    "Ratio",
    "Status",
    "TermRecord",
    "classify_n",
    "count_dense",
    "cyclotomic_value",
    "delta",
    "delta0",
    "dense_chain_test",
    "divisor_multiplier_set",
    "divisors",
    "factor_integer",
    "factor_mersenne",
    "generate_dense",
    "is_prime",
    "largest_prime_factor",
    "largest_prime_factor_mersenne",
    "moebius",
    "multiplicative_order",
    "omega",
    "partial_sum_sigma",
    "phi",
    "phi_min_order",
    "pow_mod",
    "primitive_divisor",
    "saias_ratio",
    "schinzel_check",
    "smooth_count",
    "stewart_A_exceptions",
    "stewart_B_check",
    "stewart_lemma_ratio",
    "tau",
    "tau_sum_check",
    "verify_product",
]
