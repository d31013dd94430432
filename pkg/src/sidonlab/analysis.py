"""Numerical harness for Sidon-set sum asymptotics.

For a Sidon set S = {a_1 < ... < a_t} in [1, n] the toolkit compares exact
sums against their leading terms:

  power sums        sum a_i^ell      vs  t * n^ell / (ell+1)
  weighted sums     sum i * a_i^ell  vs  t^2 * n^ell / (ell+2)
  reversed-weight   sum (n+1-i) a_i  vs  n^2 * t / 2

Each report carries the exact integer sum, the exact rational main term,
their exact difference, and a floating-point error normalized by the
expected error scale.  The scale has two regimes decided exactly in
integer arithmetic by the predicate t >= sqrt(n) - n^(1/4): sets that are
near-maximum use the n^(ell+3/8) scale, smaller sets the
n^(ell+1/4) * sqrt(sqrt(n) - t) scale (weighted sums carry an extra factor
t, the reversed-weight sum uses n^(19/8) / n^(9/4) * sqrt(sqrt(n) - t)).

The interval-discrepancy scan checks that every examined subinterval I of
length c*n holds c*t + E_I elements with

  |E_I| <= 52 * n^(1/4) * (1 + c^(1/2) n^(1/8)) * (1 + L+^(1/2) n^(-1/8)),

where L+ = max(0, sqrt(n) - t).  The budget is evaluated in floating point
and nudged up by one part in 10^12, so the exact comparison
|E_I| <= budget errs on the side of the proven inequality.

The mean-error scan aggregates |sum(S_n-witness) - n^(3/2)/2| over
1 <= n <= n_max for either exact maximum sets (solver-backed, bounded
n_max) or a labeled near-maximal stand-in family; the pivot identity check
verifies, in exact rational arithmetic,

  sum_{k=1}^{n} k^(ell-1) |S cap [1,k]|
      = B_ell(n+1) t / ell  -  (1/ell) sum_{a in S} B_ell(a).
"""
from __future__ import annotations

import math
import statistics
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .bernoulli import Rational, bernoulli_poly_eval
from .constructions import bose_integer, largest_prime_with_square_below
from .core import InternalError, SidonSet, ValidationError

__all__ = [
    "PowerSumReport",
    "WeightedSumReport",
    "LindstromSumReport",
    "DiscrepancyRecord",
    "MeanErrorScan",
    "ExponentFit",
    "PivotIdentityReport",
    "first_branch",
    "power_sum_report",
    "weighted_sum_report",
    "lindstrom_sum_report",
    "discrepancy_scan",
    "mean_error_scan",
    "error_exponent_fit",
    "pivot_identity_check",
    "POWER_SUM_CSV_HEADER",
    "DISCREPANCY_CSV_HEADER",
    "power_sum_csv_row",
    "discrepancy_csv_row",
    "write_power_sum_csv",
    "write_discrepancy_csv",
    "power_sum_summary",
    "discrepancy_summary",
    "mean_error_summary",
    "exponent_fit_summary",
    "EXACT_SCAN_LIMIT",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = 1
ELL_MAX = 8
EXACT_SCAN_LIMIT = 128          # largest n_max the exact mean-error scan accepts
_BUDGET_NUDGE = 1.0 + 1e-12


def first_branch(t: int, n: int) -> bool:
    """Exact decision of t >= sqrt(n) - n^(1/4) by integer comparisons.

    For t^2 >= n the inequality is immediate; otherwise both sides of
    n^(1/4) >= sqrt(n) - t are nonnegative and squaring twice gives the
    equivalent integer test n*(2t+1)^2 >= (n + t^2)^2.  Equality lands in
    this (first) branch.
    """
    return t * t >= n or n * (2 * t + 1) ** 2 >= (n + t * t) ** 2


def _validate_ell(ell: int) -> None:
    if not isinstance(ell, int):
        raise ValidationError(f"ell must be an integer, got {ell!r}")
    if ell == 0:
        raise ValidationError(
            "ell = 0 reduces the sum to the plain count t; use len(s) instead"
        )
    if ell < 1 or ell > ELL_MAX:
        raise ValidationError(f"ell must be in 1..{ELL_MAX}, got {ell}")


@dataclass(frozen=True)
class PowerSumReport:
    """Exact sum of a_i^ell against its leading term t*n^ell/(ell+1)."""

    ell: int
    t: int
    n: int
    actual_sum: int
    main_term: Rational
    error: Rational
    error_budget_exponent: Rational     # ell + 3/8 (near-maximum) or ell + 1/4
    normalized_error: float


@dataclass(frozen=True)
class WeightedSumReport:
    """Exact sum of i*a_i^ell against its leading term t^2*n^ell/(ell+2)."""

    ell: int
    t: int
    n: int
    actual_sum: int
    main_term: Rational
    error: Rational
    error_budget_exponent: Rational
    normalized_error: float


@dataclass(frozen=True)
class LindstromSumReport:
    """Exact sum of (n+1-i)*a_i against its leading term n^2*t/2."""

    t: int
    n: int
    actual_sum: int
    main_term: Rational
    error: Rational
    error_budget_exponent: Rational     # 19/8 (near-maximum) or 9/4
    normalized_error: float


def _normalizer(n: int, t: int, exponent: float, extra_t: bool) -> float:
    """Error scale n^exponent [* t] [* sqrt(sqrt(n) - t) in the small-t regime]."""
    scale = float(n) ** exponent
    if extra_t:
        scale *= t
    return scale


def power_sum_report(s: SidonSet, ell: int) -> PowerSumReport:
    """Compare sum(a^ell for a in s) with t*n^ell/(ell+1), exactly."""
    _validate_ell(ell)
    t, n = s.t, s.ambient_n
    actual = sum(a ** ell for a in s.elements)
    main = Fraction(t * n ** ell, ell + 1)
    error = Fraction(actual) - main
    if first_branch(t, n):
        exponent = Fraction(8 * ell + 3, 8)
        scale = _normalizer(n, t, ell + 0.375, False)
    else:
        exponent = Fraction(4 * ell + 1, 4)
        scale = _normalizer(n, t, ell + 0.25, False) * math.sqrt(math.sqrt(n) - t)
    return PowerSumReport(
        ell=ell, t=t, n=n, actual_sum=actual, main_term=main, error=error,
        error_budget_exponent=exponent, normalized_error=float(error) / scale,
    )


def weighted_sum_report(s: SidonSet, ell: int) -> WeightedSumReport:
    """Compare sum(i*a_i^ell) (1-based ranks) with t^2*n^ell/(ell+2), exactly."""
    _validate_ell(ell)
    t, n = s.t, s.ambient_n
    actual = sum(i * a ** ell for i, a in enumerate(s.elements, start=1))
    main = Fraction(t * t * n ** ell, ell + 2)
    error = Fraction(actual) - main
    if first_branch(t, n):
        exponent = Fraction(8 * ell + 3, 8)
        scale = _normalizer(n, t, ell + 0.375, True)
    else:
        exponent = Fraction(4 * ell + 1, 4)
        scale = _normalizer(n, t, ell + 0.25, True) * math.sqrt(math.sqrt(n) - t)
    return WeightedSumReport(
        ell=ell, t=t, n=n, actual_sum=actual, main_term=main, error=error,
        error_budget_exponent=exponent, normalized_error=float(error) / scale,
    )


def lindstrom_sum_report(s: SidonSet) -> LindstromSumReport:
    """Compare sum((n+1-i)*a_i) with n^2*t/2, exactly.

    The sum is computed both directly and as (n+1)*sum(a_i) - sum(i*a_i);
    the two must agree identically (pure algebra), which guards the
    index bookkeeping.
    """
    t, n = s.t, s.ambient_n
    direct = sum((n + 1 - i) * a for i, a in enumerate(s.elements, start=1))
    plain = sum(s.elements)
    weighted = sum(i * a for i, a in enumerate(s.elements, start=1))
    via_identity = (n + 1) * plain - weighted
    if direct != via_identity:
        raise InternalError(
            f"reversed-weight sum mismatch: direct={direct} identity={via_identity}"
        )
    main = Fraction(n * n * t, 2)
    error = Fraction(direct) - main
    if first_branch(t, n):
        exponent = Fraction(19, 8)
        scale = float(n) ** 2.375
    else:
        exponent = Fraction(9, 4)
        scale = float(n) ** 2.25 * math.sqrt(math.sqrt(n) - t)
    return LindstromSumReport(
        t=t, n=n, actual_sum=direct, main_term=main, error=error,
        error_budget_exponent=exponent, normalized_error=float(error) / scale,
    )


# ---------------------------------------------------------------------------
# Interval discrepancy.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiscrepancyRecord:
    """Element count of S in [lo, hi] against the proportional count c*t."""

    n: int
    interval: tuple[int, int]
    c: Rational
    count: int
    expected: Rational
    e_i: Rational
    budget: float           # upward-rounded float evaluation of the bound
    l_plus: float

    @property
    def lo(self) -> int:
        return self.interval[0]

    @property
    def hi(self) -> int:
        return self.interval[1]

    @property
    def ok(self) -> bool:
        """|e_i| <= budget, compared exactly against the rounded-up budget."""
        return abs(self.e_i) <= Fraction(self.budget)


_DYADIC_DEPTH_CAP = 10
_SLIDING_DENOMS = (10, 4, 2)    # window lengths n/10, n/4, n/2


def _interval_budget(n: int, t: int, c: Rational) -> tuple[float, float]:
    l_plus = max(0.0, math.sqrt(n) - t)
    raw = (
        52.0
        * n ** 0.25
        * (1.0 + math.sqrt(float(c)) * n ** 0.125)
        * (1.0 + math.sqrt(l_plus) * n ** -0.125)
    )
    return raw * _BUDGET_NUDGE, l_plus


def _record(elements: tuple[int, ...], n: int, t: int, lo: int, hi: int
            ) -> DiscrepancyRecord:
    count = bisect_right(elements, hi) - bisect_left(elements, lo)
    c = Fraction(hi - lo + 1, n)
    expected = c * t
    budget, l_plus = _interval_budget(n, t, c)
    return DiscrepancyRecord(
        n=n, interval=(lo, hi), c=c, count=count, expected=expected,
        e_i=count - expected, budget=budget, l_plus=l_plus,
    )


def discrepancy_scan(s: SidonSet, interval_count: int = 100
                     ) -> list[DiscrepancyRecord]:
    """Discrepancy records over dyadic partitions plus sliding windows.

    Dyadic: [1, n] is split into 2^j near-equal blocks for every level
    j = 0 .. min(floor(log2 n), 10).  Sliding: for each window length in
    {n/10, n/4, n/2}, ``interval_count`` evenly spaced windows (all of
    them when fewer starting positions exist).  Records appear in that
    generation order, which is deterministic.
    """
    if not isinstance(interval_count, int) or interval_count < 1:
        raise ValidationError(
            f"interval_count must be a positive integer, got {interval_count!r}"
        )
    n, t = s.ambient_n, s.t
    elements = s.elements
    records: list[DiscrepancyRecord] = []
    depth = min(n.bit_length() - 1, _DYADIC_DEPTH_CAP)
    for j in range(depth + 1):
        blocks = 1 << j
        prev = 0
        for i in range(1, blocks + 1):
            edge = (i * n) // blocks
            records.append(_record(elements, n, t, prev + 1, edge))
            prev = edge
    for d in _SLIDING_DENOMS:
        length = max(1, n // d)
        max_start = n - length + 1
        if max_start <= interval_count:
            starts = range(1, max_start + 1)
        else:
            starts = sorted({
                1 + (k * (max_start - 1)) // (interval_count - 1)
                for k in range(interval_count)
            })
        for lo in starts:
            records.append(_record(elements, n, t, lo, lo + length - 1))
    return records


# ---------------------------------------------------------------------------
# Mean-error scan over a family of sets.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeanErrorScan:
    """Per-n deviation |sum(S) - n^(3/2)/2| aggregated over 1 <= n <= n_max."""

    n_max: int
    family: str
    per_n_error: tuple[float, ...]
    exceed_count: int           # n with error > n^(11/8) * ln(n)
    total_error: float
    note: str

    @property
    def normalized_total_error(self) -> float:
        """total_error / n_max^(19/8), the bounded-aggregate diagnostic."""
        return self.total_error / float(self.n_max) ** 2.375


_EXACT_NOTE = (
    "exact family: element sums use the solver's canonical maximum-set "
    "witness for each n"
)
_BOSE_NOTE = (
    "bose-nearest family: near-maximal stand-in sets (largest p with "
    "p^2-1 <= n), NOT true maximum sets; this scan is an empirical "
    "diagnostic, not a literal verification of the mean-error statement"
)


def mean_error_scan(n_max: int, family: str = "exact") -> MeanErrorScan:
    """Scan |sum(S_n set) - n^(3/2)/2| for n = 1 .. n_max.

    ``family="exact"`` draws each set from the exact solver table and is
    limited to n_max <= EXACT_SCAN_LIMIT (the search grows exponentially
    past that range).  ``family="bose-nearest"`` substitutes, for each n,
    the integer Bose set of the largest prime p with p^2 - 1 <= n (the
    trivial sets {1} and {1,2} for n < 3); those are near-maximal
    stand-ins, so the result is labeled as a diagnostic only.
    """
    if not isinstance(n_max, int) or n_max < 1:
        raise ValidationError(f"n_max must be a positive integer, got {n_max!r}")
    sums: list[int] = []
    if family == "exact":
        if n_max > EXACT_SCAN_LIMIT:
            raise ValidationError(
                f"exact scan limited to n_max <= {EXACT_SCAN_LIMIT} "
                f"(got {n_max}); use family='bose-nearest' for large ranges"
            )
        from .solver import s_n_table

        rows = s_n_table(n_max)
        sums = [sum(r.witness.elements) for r in rows]
        note = _EXACT_NOTE
    elif family == "bose-nearest":
        by_p: dict[int, int] = {}
        for n in range(1, n_max + 1):
            if n < 3:
                sums.append(1 if n == 1 else 3)
                continue
            p = largest_prime_with_square_below(n + 1)
            if p not in by_p:
                by_p[p] = sum(bose_integer(p).elements)
            sums.append(by_p[p])
        note = _BOSE_NOTE
    else:
        raise ValidationError(
            f"family must be 'exact' or 'bose-nearest', got {family!r}"
        )
    errors: list[float] = []
    exceed = 0
    for n, total in enumerate(sums, start=1):
        err = abs(total - n ** 1.5 / 2.0)
        errors.append(err)
        if err > n ** 1.375 * math.log(n):
            exceed += 1
    return MeanErrorScan(
        n_max=n_max, family=family, per_n_error=tuple(errors),
        exceed_count=exceed, total_error=math.fsum(errors), note=note,
    )


# ---------------------------------------------------------------------------
# Log-log error-exponent fit.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentFit:
    """Least-squares slope/intercept of log|error| against log n."""

    slope: float
    intercept: float
    points_used: int
    zeros_excluded: int


def error_exponent_fit(reports: list[PowerSumReport] | list[WeightedSumReport]
                       ) -> ExponentFit:
    """Fit log|error| = slope*log(n) + intercept over the given reports.

    All reports must share the same ell and the same error-scale branch
    and have pairwise distinct n.  Zero errors cannot be log-transformed;
    they are dropped and counted.  Fewer than 5 usable points is refused.
    """
    if not reports:
        raise ValidationError("no reports given")
    ells = {r.ell for r in reports}
    if len(ells) != 1:
        raise ValidationError(f"reports mix several ell values: {sorted(ells)}")
    branches = {r.error_budget_exponent for r in reports}
    if len(branches) != 1:
        raise ValidationError(
            "reports mix both error-scale branches; fit them separately"
        )
    ns = [r.n for r in reports]
    if len(set(ns)) != len(ns):
        raise ValidationError("reports must have pairwise distinct n")
    usable = [r for r in reports if r.error != 0]
    zeros = len(reports) - len(usable)
    if len(usable) < 5:
        raise ValidationError(
            f"need at least 5 usable (nonzero-error) points, have {len(usable)}"
        )
    xs = [math.log(r.n) for r in usable]
    ys = [math.log(abs(r.error)) for r in usable]
    slope, intercept = statistics.linear_regression(xs, ys)
    return ExponentFit(
        slope=slope, intercept=intercept,
        points_used=len(usable), zeros_excluded=zeros,
    )


# ---------------------------------------------------------------------------
# Exact pivot identity.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PivotIdentityReport:
    """Both sides of the partial-summation pivot, in exact rationals."""

    ell: int
    n: int
    t: int
    lhs: Rational
    rhs: Rational

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def pivot_identity_check(s: SidonSet, ell: int) -> PivotIdentityReport:
    """Verify sum_k k^(ell-1)|S cap [1,k]| = B_ell(n+1)t/ell - sum_a B_ell(a)/ell.

    Both sides are computed independently: the left by direct counting
    with integer powers, the right through Bernoulli polynomial values in
    exact rational arithmetic.
    """
    _validate_ell(ell)
    n, t = s.ambient_n, s.t
    elements = s.elements
    lhs = 0
    idx = 0
    for k in range(1, n + 1):
        while idx < t and elements[idx] <= k:
            idx += 1
        lhs += k ** (ell - 1) * idx
    rhs = (
        bernoulli_poly_eval(ell, n + 1) * t
        - sum(bernoulli_poly_eval(ell, a) for a in elements)
    ) / ell
    return PivotIdentityReport(ell=ell, n=n, t=t, lhs=Fraction(lhs), rhs=rhs)


# ---------------------------------------------------------------------------
# CSV / JSON emission.
# ---------------------------------------------------------------------------

POWER_SUM_CSV_HEADER = "n,t,ell,actual,main_num,main_den,error,normalized"
DISCREPANCY_CSV_HEADER = "n,lo,hi,count,expected,e_i,budget,ok"


def _rat(x: Rational) -> str:
    return f"{x.numerator}/{x.denominator}"


def power_sum_csv_row(r: PowerSumReport | WeightedSumReport) -> str:
    return (
        f"{r.n},{r.t},{r.ell},{r.actual_sum},"
        f"{r.main_term.numerator},{r.main_term.denominator},"
        f"{_rat(r.error)},{r.normalized_error!r}"
    )


def discrepancy_csv_row(rec: DiscrepancyRecord) -> str:
    return (
        f"{rec.n},{rec.lo},{rec.hi},{rec.count},"
        f"{_rat(rec.expected)},{_rat(rec.e_i)},{rec.budget!r},"
        f"{'true' if rec.ok else 'false'}"
    )


def write_power_sum_csv(reports, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(POWER_SUM_CSV_HEADER + "\n")
        for r in reports:
            fh.write(power_sum_csv_row(r) + "\n")


def write_discrepancy_csv(records, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(DISCREPANCY_CSV_HEADER + "\n")
        for rec in records:
            fh.write(discrepancy_csv_row(rec) + "\n")


def _report_dict(r: PowerSumReport | WeightedSumReport | LindstromSumReport
                 ) -> dict:
    d = {
        "t": r.t,
        "n": r.n,
        "actual_sum": r.actual_sum,
        "main_term": _rat(r.main_term),
        "error": _rat(r.error),
        "error_budget_exponent": _rat(r.error_budget_exponent),
        "normalized_error": r.normalized_error,
    }
    if hasattr(r, "ell"):
        d["ell"] = r.ell
    return d


def power_sum_summary(reports) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "power-sum",
        "reports": [_report_dict(r) for r in reports],
    }


def discrepancy_summary(records: list[DiscrepancyRecord]) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "discrepancy",
        "interval_records": len(records),
        "violations": sum(0 if rec.ok else 1 for rec in records),
        "max_abs_e_i": max((abs(float(rec.e_i)) for rec in records), default=0.0),
        "min_budget": min((rec.budget for rec in records), default=0.0),
        "records": [
            {
                "n": rec.n, "lo": rec.lo, "hi": rec.hi, "count": rec.count,
                "expected": _rat(rec.expected), "e_i": _rat(rec.e_i),
                "budget": rec.budget, "ok": rec.ok,
            }
            for rec in records
        ],
    }


def mean_error_summary(scan: MeanErrorScan) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "mean-error",
        "n_max": scan.n_max,
        "family": scan.family,
        "exceed_count": scan.exceed_count,
        "total_error": scan.total_error,
        "normalized_total_error": scan.normalized_total_error,
        "note": scan.note,
        "per_n_error": list(scan.per_n_error),
    }


def exponent_fit_summary(fit: ExponentFit, ell: int) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "exponent-fit",
        "ell": ell,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "points_used": fit.points_used,
        "zeros_excluded": fit.zeros_excluded,
    }
