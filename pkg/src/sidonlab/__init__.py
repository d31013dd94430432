"""Sidon-set toolkit: constructions, exact maximization, sum asymptotics.

A Sidon set is a set of integers whose pairwise differences are all
distinct (equivalently, whose pairwise sums a + b with a <= b are all
distinct).  This package provides

* validated Sidon-set types and an exhaustive small-n oracle (``core``),
* the classical algebraic constructions over finite fields plus the
  greedy sequence and prime utilities (``constructions``),
* an exact branch-and-bound solver for the maximum size S_n with
  incremental tables, budgets, checkpoints, and deterministic
  multi-threading (``solver``),
* exact rational Bernoulli numbers/polynomials and power sums
  (``bernoulli``),
* reports comparing exact element sums against their leading asymptotic
  terms, interval-discrepancy checks, and log-log exponent fits
  (``analysis``),
* a reproducible command-line front end (``cli``).
"""
from __future__ import annotations

from .analysis import (
    DiscrepancyRecord,
    ExponentFit,
    LindstromSumReport,
    MeanErrorScan,
    PivotIdentityReport,
    PowerSumReport,
    WeightedSumReport,
    discrepancy_scan,
    error_exponent_fit,
    first_branch,
    lindstrom_sum_report,
    mean_error_scan,
    pivot_identity_check,
    power_sum_report,
    weighted_sum_report,
)
from .bernoulli import (
    BernoulliPoly,
    Rational,
    bernoulli_number,
    bernoulli_poly,
    bernoulli_poly_eval,
    power_sum,
    range_power_sum,
)
from .constructions import (
    FieldElementP2,
    PrimeGapRecord,
    bose,
    bose_integer,
    greedy_mian_chowla,
    is_prime,
    largest_prime_with_square_below,
    prime_gaps,
    primes_up_to,
    singer,
)
from .core import (
    IncompleteResult,
    InternalError,
    ModularSidonSet,
    NotSidonError,
    SidonSet,
    SolveResult,
    ValidationError,
    brute_force_max,
    is_sidon,
    is_sidon_modular,
    reflect,
    set_from_csv_line,
    set_from_json,
    set_to_csv_line,
    set_to_json,
)
from .solver import cilleruelo_ceiling, s_n_table, solve_max

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # core
    "SidonSet", "ModularSidonSet", "SolveResult", "IncompleteResult",
    "ValidationError", "NotSidonError", "InternalError",
    "is_sidon", "is_sidon_modular", "reflect", "brute_force_max",
    "set_to_json", "set_from_json", "set_to_csv_line", "set_from_csv_line",
    # constructions
    "bose", "bose_integer", "singer", "greedy_mian_chowla",
    "primes_up_to", "is_prime", "prime_gaps",
    "largest_prime_with_square_below", "FieldElementP2", "PrimeGapRecord",
    # solver
    "solve_max", "s_n_table", "cilleruelo_ceiling",
    # bernoulli
    "Rational", "BernoulliPoly", "bernoulli_number", "bernoulli_poly",
    "bernoulli_poly_eval", "power_sum", "range_power_sum",
    # analysis
    "PowerSumReport", "WeightedSumReport", "LindstromSumReport",
    "DiscrepancyRecord", "MeanErrorScan", "ExponentFit",
    "PivotIdentityReport", "first_branch", "power_sum_report",
    "weighted_sum_report", "lindstrom_sum_report", "discrepancy_scan",
    "mean_error_scan", "error_exponent_fit", "pivot_identity_check",
]
