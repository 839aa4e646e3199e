"""Maximization of non-negative monotone weakly submodular set functions
under matroid constraints, with brute-force verification tooling and a
benchmark CLI."""

from .algorithms import (
    AnalysisTrace,
    IterationRecord,
    RunTrace,
    brute_force_opt,
    padded_variant,
    random_baseline,
    residual_random_greedy,
    rrg_with_analysis,
    standard_greedy,
)
from .matroids import (
    ContractedMatroid,
    CountingMatroid,
    ExchangeMap,
    GraphicMatroid,
    Matroid,
    PartitionMatroid,
    UniformMatroid,
    exchange_map,
    iter_independent_sets,
    matroid_from_json,
    max_weight_base,
    random_base,
)
from .objectives import (
    KernelGramian,
    LogisticProblem,
    RegressionProblem,
    coverage_function,
    dpp_determinant,
    gaussian_gram,
    least_squares_loglik,
    logistic_loglik,
    modular_function,
)
from .oracles import (
    GammaEstimate,
    ValueOracle,
    check_monotone,
    estimate_gamma_restricted,
    marginal,
    normalize,
)
from .selection import GreedyMatroidSelector

__version__ = "0.1.0"

__all__ = [
    "AnalysisTrace",
    "ContractedMatroid",
    "CountingMatroid",
    "ExchangeMap",
    "GammaEstimate",
    "GraphicMatroid",
    "GreedyMatroidSelector",
    "IterationRecord",
    "KernelGramian",
    "LogisticProblem",
    "Matroid",
    "PartitionMatroid",
    "RegressionProblem",
    "RunTrace",
    "UniformMatroid",
    "ValueOracle",
    "brute_force_opt",
    "check_monotone",
    "coverage_function",
    "dpp_determinant",
    "estimate_gamma_restricted",
    "exchange_map",
    "gaussian_gram",
    "iter_independent_sets",
    "least_squares_loglik",
    "logistic_loglik",
    "marginal",
    "matroid_from_json",
    "max_weight_base",
    "modular_function",
    "normalize",
    "padded_variant",
    "random_base",
    "random_baseline",
    "residual_random_greedy",
    "rrg_with_analysis",
    "standard_greedy",
]
