"""Command-line front end for reproducible Sidon-set computations.

Subcommands
-----------
construct   build a named Sidon set (bose / singer / greedy) and write it
            as canonical JSON
solve       exact maximum Sidon-set size S_n with witness; optionally
            append to a CSV table
sums        power-sum / weighted-sum / reversed-weight reports for a set
            stored in a JSON file
scan        batch analyses: interval discrepancy, mean-error scan, or the
            log-log error-exponent fit over the Bose family

Exit codes: 0 success, 2 invalid input, 3 budget exhausted before the
answer was certified, 4 internal invariant failure.

All JSON artifacts carry a ``generated_at`` timestamp unless
``--no-timestamp`` is given; with identical flags and inputs every output
file is byte-identical apart from that field (the solver CSV additionally
carries a wall-clock diagnostic column).  An optional JSON config file
(``--config``) may hold any of the long flag values, with explicit flags
taking precedence.
"""
from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone

from . import analysis
from .constructions import bose_integer, greedy_mian_chowla, primes_up_to, singer
from .core import (
    IncompleteResult,
    InternalError,
    SidonSet,
    ValidationError,
    is_sidon,
)
from .solver import result_to_csv_row, s_n_table, solve_max, table_csv_header

__all__ = ["main", "build_parser"]

_CONFIG_KEYS = {
    "n", "ell", "budget_nodes", "threads", "out", "table",
    "no_ceiling", "family", "no_timestamp",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="JSON",
                        help="JSON file holding flag values; flags override it")
    common.add_argument("--out", metavar="PATH",
                        help="output file for the primary JSON artifact")
    common.add_argument("--no-timestamp", action="store_true", default=None,
                        help="omit the generated_at field from JSON outputs")

    parser = argparse.ArgumentParser(
        prog="sidonlab",
        description="Sidon-set construction, exact maximization, and "
                    "sum-asymptotics verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common],
                       help="build a named Sidon set and write it as JSON")
    p.add_argument("kind", choices=["bose", "singer", "greedy"])
    p.add_argument("parameter", type=int,
                   help="prime p (bose), prime q (singer), or length (greedy)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("solve", parents=[common],
                       help="exact maximum Sidon-set size in [1, n]")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--budget-nodes", type=int, default=None,
                   help="stop after this many search nodes")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--no-ceiling", action="store_true", default=None,
                   help="disable the proven upper-bound early exit")
    p.add_argument("--table", metavar="CSV",
                   help="append table rows n,s_n,witness,nodes,millis here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sums", parents=[common],
                       help="power-sum reports for a stored set")
    p.add_argument("set_file", help="JSON file with {\"n\": ..., \"elements\": [...]}")
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--weighted", action="store_true",
                   help="also report sum(i * a_i^ell)")
    p.add_argument("--lindstrom", action="store_true",
                   help="also report sum((n+1-i) * a_i)")
    p.set_defaults(func=cmd_sums)

    p = sub.add_parser("scan", parents=[common],
                       help="batch analysis scans")
    p.add_argument("kind", choices=["discrepancy", "mean-error", "exponent"])
    p.add_argument("set_file", nargs="?", default=None,
                   help="discrepancy only: scan this stored set instead of "
                        "the built-in family")
    p.add_argument("--n", type=int, default=None,
                   help="mean-error: scan 1..n")
    p.add_argument("--ell", type=int, default=None,
                   help="exponent: power-sum exponent to fit")
    p.add_argument("--family", choices=["exact", "bose-nearest"], default=None,
                   help="mean-error: which family of sets to sum")
    p.add_argument("--table", metavar="CSV",
                   help="discrepancy: also write the records as CSV here")
    p.set_defaults(func=cmd_scan)
    return parser


def _apply_config(args: argparse.Namespace) -> None:
    path = getattr(args, "config", None)
    if not path:
        return
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError("config must be a JSON object of flag values")
    for key, value in data.items():
        attr = key.replace("-", "_")
        if attr not in _CONFIG_KEYS:
            raise ValidationError(f"unknown config key {key!r}")
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, value)


def _timestamped(obj: dict, no_timestamp: bool) -> dict:
    if not no_timestamp:
        obj = dict(obj)
        obj["generated_at"] = datetime.now(timezone.utc).isoformat()
    return obj


def _write_json(obj: dict, path: str | None, no_timestamp: bool) -> None:
    if path is None:
        return
    payload = json.dumps(_timestamped(obj, no_timestamp),
                         indent=2, sort_keys=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(payload + "\n")


def _set_payload(s: SidonSet) -> dict:
    return {"n": s.ambient_n, "elements": list(s.elements)}


def _load_set(path: str) -> SidonSet:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: expected a JSON object")
    if "modulus" in data:
        raise ValidationError(
            f"{path} stores a modular set; sums need an integer set"
        )
    if "n" not in data or "elements" not in data:
        raise ValidationError(
            f'{path}: expected a JSON object with "n" and "elements"'
        )
    if not isinstance(data["elements"], list):
        raise ValidationError(f'{path}: "elements" must be a list')
    return SidonSet(tuple(data["elements"]), data["n"])


# ---------------------------------------------------------------------------
# Subcommands.
# ---------------------------------------------------------------------------

def cmd_construct(args: argparse.Namespace) -> int:
    kind, parameter = args.kind, args.parameter
    no_ts = bool(args.no_timestamp)
    if kind == "bose":
        s = bose_integer(parameter)
        payload = _set_payload(s)
        confirmed = is_sidon(list(s.elements), s.ambient_n)
        print(f"bose p={parameter}: size={s.t} ambient_n={s.ambient_n} "
              f"is_sidon={str(confirmed).lower()}")
    elif kind == "singer":
        m = singer(parameter)
        payload = {"modulus": m.modulus, "elements": list(m.elements)}
        print(f"singer q={parameter}: size={m.t} modulus={m.modulus} "
              f"is_sidon_modular=true")
    else:
        s = greedy_mian_chowla(parameter)
        payload = _set_payload(s)
        confirmed = is_sidon(list(s.elements), s.ambient_n)
        print(f"greedy count={parameter}: size={s.t} ambient_n={s.ambient_n} "
              f"is_sidon={str(confirmed).lower()}")
        print("elements: " + " ".join(str(e) for e in s.elements))
    if args.out:
        _write_json(payload, args.out, no_ts)
    else:
        print(json.dumps(_timestamped(payload, no_ts), sort_keys=True))
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    if args.n is None:
        raise ValidationError("solve requires --n")
    threads = args.threads if args.threads is not None else 1
    use_ceiling = not bool(args.no_ceiling)
    result = solve_max(args.n, budget_nodes=args.budget_nodes,
                       use_ceiling=use_ceiling, threads=threads)
    if isinstance(result, IncompleteResult):
        print(f"incomplete: table certified through n={result.n_completed} "
              f"({result.reason}); best lower bound "
              f"S_{args.n} >= {result.lower_bound.t}")
        return 3
    witness = " ".join(str(e) for e in result.witness.elements)
    print(f"S_{args.n} = {result.s_n}")
    print(f"witness: {witness}")
    print(f"nodes={result.nodes_explored} millis={result.wall_time * 1000.0:.3f}")
    if args.table:
        rows = s_n_table(args.n, use_ceiling=use_ceiling, threads=threads,
                         csv_path=args.table)
        last = rows[-1]
        if isinstance(last, IncompleteResult):
            return 3
    _write_json(
        {
            "schema_version": analysis.SCHEMA_VERSION,
            "kind": "solve",
            "n": result.n,
            "s_n": result.s_n,
            "witness": list(result.witness.elements),
            "nodes_explored": result.nodes_explored,
        },
        args.out, bool(args.no_timestamp),
    )
    return 0


def cmd_sums(args: argparse.Namespace) -> int:
    s = _load_set(args.set_file)
    ell = args.ell if args.ell is not None else 1
    no_ts = bool(args.no_timestamp)
    reports = []
    r = analysis.power_sum_report(s, ell)
    ratio = r.actual_sum / float(r.main_term) if r.main_term else float("nan")
    print(f"power-sum ell={ell}: actual={r.actual_sum} "
          f"main={r.main_term.numerator}/{r.main_term.denominator} "
          f"ratio={ratio:.6f} normalized_error={r.normalized_error:.6g}")
    reports.append(("power-sum", analysis._report_dict(r)))
    if args.weighted:
        w = analysis.weighted_sum_report(s, ell)
        ratio = w.actual_sum / float(w.main_term) if w.main_term else float("nan")
        print(f"weighted-sum ell={ell}: actual={w.actual_sum} "
              f"main={w.main_term.numerator}/{w.main_term.denominator} "
              f"ratio={ratio:.6f} normalized_error={w.normalized_error:.6g}")
        reports.append(("weighted-sum", analysis._report_dict(w)))
    if args.lindstrom:
        ls = analysis.lindstrom_sum_report(s)
        ratio = ls.actual_sum / float(ls.main_term) if ls.main_term else float("nan")
        print(f"reversed-weight sum: actual={ls.actual_sum} "
              f"main={ls.main_term.numerator}/{ls.main_term.denominator} "
              f"ratio={ratio:.6f} normalized_error={ls.normalized_error:.6g}")
        reports.append(("lindstrom-sum", analysis._report_dict(ls)))
    _write_json(
        {
            "schema_version": analysis.SCHEMA_VERSION,
            "kind": "sums",
            "set": _set_payload(s),
            "reports": [dict(d, kind=k) for k, d in reports],
        },
        args.out, no_ts,
    )
    return 0


_DISCREPANCY_FAMILY_PRIMES = (13, 31, 101, 199)
_DISCREPANCY_GREEDY_COUNT = 30
_EXPONENT_PRIME_LO = 11
_EXPONENT_PRIME_HI = 199


def _scan_discrepancy(args: argparse.Namespace) -> int:
    if args.set_file is not None:
        sets = [_load_set(args.set_file)]
    else:
        sets = [bose_integer(p) for p in _DISCREPANCY_FAMILY_PRIMES]
        sets.append(greedy_mian_chowla(_DISCREPANCY_GREEDY_COUNT))
    all_records = []
    violations = 0
    for s in sets:
        records = analysis.discrepancy_scan(s)
        bad = sum(0 if rec.ok else 1 for rec in records)
        violations += bad
        all_records.extend(records)
        print(f"n={s.ambient_n} t={s.t}: {len(records)} intervals, "
              f"violations={bad}")
    print(f"total: {len(all_records)} intervals, violations={violations}")
    if args.table:
        analysis.write_discrepancy_csv(all_records, args.table)
    _write_json(analysis.discrepancy_summary(all_records),
                args.out, bool(args.no_timestamp))
    return 0


def _scan_mean_error(args: argparse.Namespace) -> int:
    if args.n is None:
        raise ValidationError("scan mean-error requires --n")
    family = args.family if args.family is not None else "exact"
    scan = analysis.mean_error_scan(args.n, family=family)
    print(f"mean-error n_max={scan.n_max} family={scan.family}: "
          f"exceed_count={scan.exceed_count} total_error={scan.total_error:.6g} "
          f"normalized_total_error={scan.normalized_total_error:.6g}")
    print(f"note: {scan.note}")
    _write_json(analysis.mean_error_summary(scan),
                args.out, bool(args.no_timestamp))
    return 0


def _scan_exponent(args: argparse.Namespace) -> int:
    ell = args.ell if args.ell is not None else 1
    primes = [p for p in primes_up_to(_EXPONENT_PRIME_HI)
              if p >= _EXPONENT_PRIME_LO]
    reports = [analysis.power_sum_report(bose_integer(p), ell) for p in primes]
    fit = analysis.error_exponent_fit(reports)
    print(f"exponent fit ell={ell} over bose p in "
          f"[{_EXPONENT_PRIME_LO}, {_EXPONENT_PRIME_HI}]: "
          f"slope={fit.slope:.6f} intercept={fit.intercept:.6f} "
          f"points={fit.points_used} zeros_excluded={fit.zeros_excluded}")
    _write_json(analysis.exponent_fit_summary(fit, ell),
                args.out, bool(args.no_timestamp))
    return 0


def cmd_scan(args: argparse.Namespace) -> int:
    if args.kind == "discrepancy":
        return _scan_discrepancy(args)
    if args.kind == "mean-error":
        return _scan_mean_error(args)
    return _scan_exponent(args)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InternalError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
