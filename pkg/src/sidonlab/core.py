"""Sidon-set data types, validation, serialization, and the brute-force oracle.

A Sidon set (B2 set) is a set of integers whose pairwise sums a+b (a <= b)
are all distinct; equivalently, whose pairwise differences are all distinct.
This module fixes the canonical data types used everywhere else and provides
a deliberately simple exhaustive oracle against which the real solver is
checked.

Validation failures are a third outcome, distinct from "not Sidon": malformed
input raises :class:`ValidationError` instead of returning ``False``, so a
caller can never mistake a bad call for a falsified property.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "ValidationError",
    "NotSidonError",
    "InternalError",
    "SidonSet",
    "ModularSidonSet",
    "SolveResult",
    "IncompleteResult",
    "is_sidon",
    "is_sidon_modular",
    "brute_force_max",
    "reflect",
    "set_to_json",
    "set_from_json",
    "set_to_csv_line",
    "set_from_csv_line",
    "write_sets_csv",
    "read_sets_csv",
    "BRUTE_FORCE_GUARD",
]


class ValidationError(ValueError):
    """Malformed input (unsorted, duplicated, out of range, wrong shape)."""


class NotSidonError(ValidationError):
    """A set handed to a constructor violates the Sidon property itself."""


class InternalError(AssertionError):
    """An invariant the library itself must maintain failed; always a bug."""


def _check_elements(elements: Sequence[int], ambient_n: int) -> None:
    """Shape checks shared by is_sidon and the SidonSet constructor."""
    if not isinstance(ambient_n, int) or ambient_n < 1:
        raise ValidationError(f"ambient_n must be a positive integer, got {ambient_n!r}")
    if len(elements) == 0:
        raise ValidationError("elements must be non-empty")
    prev = 0
    for e in elements:
        if not isinstance(e, int):
            raise ValidationError(f"element {e!r} is not an integer")
        if e <= prev:
            raise ValidationError(
                f"elements must be strictly increasing and >= 1, got {list(elements)}"
            )
        prev = e
    if elements[-1] > ambient_n:
        raise ValidationError(
            f"element {elements[-1]} exceeds ambient_n={ambient_n}"
        )


def _differences_distinct(elements: Sequence[int]) -> bool:
    """All pairwise differences distinct, via a difference bitmask in O(t^2)."""
    used = 0
    for i in range(len(elements)):
        ai = elements[i]
        for j in range(i + 1, len(elements)):
            d = elements[j] - ai
            if (used >> d) & 1:
                return False
            used |= 1 << d
    return True


def is_sidon(elements: Sequence[int], ambient_n: int) -> bool:
    """True iff all pairwise differences of ``elements`` are distinct.

    The sum formulation (a+b distinct, a=b permitted) is equivalent to the
    difference formulation, which needs no multiset bookkeeping.  Malformed
    input (empty, unsorted, duplicates, out of [1, ambient_n]) raises
    :class:`ValidationError` rather than returning False.
    """
    _check_elements(elements, ambient_n)
    return _differences_distinct(elements)


def is_sidon_modular(elements: Sequence[int], modulus: int) -> bool:
    """True iff all pairwise differences are distinct modulo ``modulus``.

    Distinctness is over ordered pairs: the differences d and modulus-d from
    one unordered pair must not collide with those of another pair (nor with
    each other, which happens when 2d = 0 mod modulus).
    """
    if not isinstance(modulus, int) or modulus < 1:
        raise ValidationError(f"modulus must be a positive integer, got {modulus!r}")
    if len(elements) == 0:
        raise ValidationError("elements must be non-empty")
    seen_res = set()
    for e in elements:
        if not isinstance(e, int):
            raise ValidationError(f"element {e!r} is not an integer")
        r = e % modulus
        if r in seen_res:
            raise ValidationError(f"duplicate residue {r} modulo {modulus}")
        seen_res.add(r)
    elems = sorted(seen_res)
    seen = set()
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            d = (elems[j] - elems[i]) % modulus
            md = (modulus - d) % modulus
            if d == md or d in seen or md in seen:
                return False
            seen.add(d)
            seen.add(md)
    return True


@dataclass(frozen=True)
class SidonSet:
    """A validated Sidon set in {1, ..., ambient_n}.

    Immutable after construction and safe to share across threads.
    Construction re-validates every invariant: elements strictly increasing
    within [1, ambient_n] (else :class:`ValidationError`) and all pairwise
    differences distinct (else :class:`NotSidonError`).
    """

    elements: tuple[int, ...]
    ambient_n: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(self.elements))
        _check_elements(self.elements, self.ambient_n)
        if not _differences_distinct(self.elements):
            raise NotSidonError(
                f"differences collide: {list(self.elements)} is not a Sidon set"
            )

    @property
    def t(self) -> int:
        """Number of elements."""
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@dataclass(frozen=True)
class ModularSidonSet:
    """Residues with all pairwise differences distinct modulo ``modulus``."""

    elements: tuple[int, ...]
    modulus: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(self.elements))
        if not is_sidon_modular(self.elements, self.modulus):
            raise NotSidonError(
                f"differences collide modulo {self.modulus}: {list(self.elements)}"
            )

    @property
    def t(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@dataclass(frozen=True)
class SolveResult:
    """Exact S_n together with a witness set and search statistics."""

    n: int
    s_n: int
    witness: SidonSet
    nodes_explored: int
    wall_time: float

    def __post_init__(self) -> None:
        if self.witness.ambient_n != self.n:
            raise InternalError(
                f"witness ambient_n {self.witness.ambient_n} != n {self.n}"
            )
        if len(self.witness) != self.s_n:
            raise InternalError(
                f"witness size {len(self.witness)} != s_n {self.s_n}"
            )


@dataclass(frozen=True)
class IncompleteResult:
    """A budget-exhausted solve: a lower bound only, never an exact answer.

    ``lower_bound`` is the largest Sidon set found before the budget ran out
    (a valid subset of [1, n], so s_n >= len(lower_bound)); ``n_completed``
    is the largest m <= n whose exact S_m was established.
    """

    n: int
    lower_bound: SidonSet
    n_completed: int
    nodes_explored: int
    wall_time: float
    reason: str = "budget exhausted"


def reflect(s: SidonSet) -> SidonSet:
    """The mirror image {n+1-a : a in s} in the same ambient interval."""
    n = s.ambient_n
    return SidonSet(tuple(n + 1 - a for a in reversed(s.elements)), n)


# ---------------------------------------------------------------------------
# Serialization: canonical JSON object and one-set-per-line CSV.
# ---------------------------------------------------------------------------

def set_to_json(s: SidonSet) -> str:
    """Canonical JSON form {"n": int, "elements": [int, ...]}."""
    return json.dumps({"n": s.ambient_n, "elements": list(s.elements)})


def set_from_json(text: str) -> SidonSet:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or set(obj) != {"n", "elements"}:
        raise ValidationError('expected a JSON object {"n": ..., "elements": [...]}')
    if not isinstance(obj["elements"], list):
        raise ValidationError('"elements" must be a list')
    return SidonSet(tuple(obj["elements"]), obj["n"])


def set_to_csv_line(s: SidonSet) -> str:
    """One-set-per-line CSV: "n,t,e1 e2 e3 ..." with elements space-separated."""
    return f"{s.ambient_n},{s.t},{' '.join(str(e) for e in s.elements)}"


def set_from_csv_line(line: str) -> SidonSet:
    parts = line.strip().split(",")
    if len(parts) != 3:
        raise ValidationError(f"expected 'n,t,elements' with 3 fields, got {line!r}")
    try:
        n = int(parts[0])
        t = int(parts[1])
        elements = tuple(int(x) for x in parts[2].split())
    except ValueError as exc:
        raise ValidationError(f"non-integer field in {line!r}") from exc
    if len(elements) != t:
        raise ValidationError(f"declared t={t} but {len(elements)} elements given")
    return SidonSet(elements, n)


def write_sets_csv(sets: Iterable[SidonSet]) -> str:
    return "\n".join(set_to_csv_line(s) for s in sets) + "\n"


def read_sets_csv(text: str) -> list[SidonSet]:
    return [set_from_csv_line(line) for line in text.splitlines() if line.strip()]


# ---------------------------------------------------------------------------
# Brute-force oracle.
# ---------------------------------------------------------------------------

BRUTE_FORCE_GUARD = 40


def brute_force_max(n: int, guard: int = BRUTE_FORCE_GUARD) -> SolveResult:
    """Exact S_n by exhaustive depth-first enumeration of every Sidon subset.

    No pruning beyond feasibility: the search visits each Sidon subset of
    [1, n] exactly once, extending in ascending order, and keeps the first
    maximum-size subset found (the lexicographically least one).  Intended
    purely as ground truth for the real solver; refuses n above ``guard``.

    Feasibility is tested incrementally with two integer bitmasks: ``used``
    (bit d set iff difference d occurs) and ``blocked`` (bit p set iff
    adding p would repeat a difference; exact because a single new element
    cannot create two equal new differences).
    """
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    if n > guard:
        raise ValidationError(
            f"brute_force_max refuses n={n} > guard={guard}; this oracle is "
            f"exhaustive -- pass guard={n} explicitly to accept the cost"
        )
    t0 = time.perf_counter()
    full = (1 << (n + 1)) - 2          # candidate positions 1..n
    best: list[int] = []
    nodes = 0
    stack: list[int] = []

    def extend(used: int, blocked: int, last: int) -> None:
        nonlocal nodes, best
        avail = full & ~blocked & (-1 << (last + 1))
        while avail:
            lsb = avail & -avail
            avail ^= lsb
            c = lsb.bit_length() - 1
            nodes += 1
            stack.append(c)
            if len(stack) > len(best):
                best = stack.copy()
            newd = 0
            for e in stack[:-1]:
                newd |= 1 << (c - e)
            nused = used | newd
            nblocked = blocked | (nused << c)
            for e in stack[:-1]:
                nblocked |= newd << e
            extend(nused, nblocked, c)
            stack.pop()

    extend(0, 0, 0)
    wall = time.perf_counter() - t0
    witness = SidonSet(tuple(best), n)
    return SolveResult(n=n, s_n=len(best), witness=witness,
                       nodes_explored=nodes, wall_time=wall)
