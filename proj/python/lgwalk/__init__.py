"""Leggett-Garg tests on one-dimensional discrete-time quantum walks.

Thin Python layer over the C++ core: exact pipeline values, sampled LG
tests with bootstrap/Monte Carlo uncertainties, the ideal-negative removal
protocol, classical baselines, and the closed-form K(theta) oracles.
"""

from lgwalk._core import (
    ConfigError,
    analytic_k_constant,
    analytic_k_dichotomic,
    classical_binomial,
    classical_k_uniform,
    clopper_pearson,
    exact_lg_test,
    lg_k,
    lg_k_prime,
    macroscopicity,
    max_analytic_k_dichotomic,
    negative_measurement,
    run_lg_test,
    venality_bound,
    venality_decompose,
    walk_distribution,
    witness,
)
from lgwalk._core import __version__

__all__ = [
    "ConfigError",
    "analytic_k_constant",
    "analytic_k_dichotomic",
    "classical_binomial",
    "classical_k_uniform",
    "clopper_pearson",
    "exact_lg_test",
    "lg_k",
    "lg_k_prime",
    "macroscopicity",
    "max_analytic_k_dichotomic",
    "negative_measurement",
    "run_lg_test",
    "venality_bound",
    "venality_decompose",
    "walk_distribution",
    "witness",
    "__version__",
]
