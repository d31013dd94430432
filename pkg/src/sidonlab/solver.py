"""Exact maximum-Sidon-set solver: S_n by incremental branch and bound.

The table S_1, S_2, ... is built incrementally: S_n is either S_{n-1} or
S_{n-1}+1, and any Sidon set of size S_{n-1}+1 inside [1, n] must contain
both 1 and n (otherwise it would fit in a shorter interval, contradicting
the table so far).  Each step is therefore a single anchored decision
problem, solved by a depth-first search over 256-bit masks:

  used    bit d set  <=>  difference d already occurs
  urev    mirror of ``used`` (bit 255-d), enabling "element - difference"
          positions via right shifts
  B       bit x set  <=>  position x would repeat a difference (exact,
          maintained incrementally; one new element cannot create two equal
          new differences, so blocked-bit lookups fully decide feasibility)

At each node the candidate window is narrowed by three width bounds on the
segment that must still hold the remaining rr points: the solved
minimal-ambient table (a segment holding k points is at least as wide as
the smallest interval any k-point Sidon set fits in), the sum of the rr
smallest still-free differences (the segment's rr adjacent gaps are
distinct free differences), and the C(rr+1,2)-th smallest free difference
(all within-segment pairwise differences are free and bounded by the
width).  The search then branches on whichever frontier (minimum remaining
point or maximum remaining point) has fewer surviving candidates; an empty
side refutes the node.  A canonical-reflection rule (distance of the least
inner element to 1 never exceeds the distance of the greatest inner
element to n) removes mirror duplicates.

The kernel is JIT-compiled with numba and releases the GIL, so multiple
workers can split the root by first-placement choice; results (sizes,
witnesses, and node counts) are identical to the single-threaded search.
"""
from __future__ import annotations

import json
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from decimal import Decimal, getcontext

import numpy as np
from llvmlite import ir
from numba import njit, types
from numba.extending import intrinsic

from .core import IncompleteResult, InternalError, SidonSet, SolveResult, ValidationError

__all__ = [
    "solve_max",
    "s_n_table",
    "cilleruelo_ceiling",
    "cilleruelo_bound_decimal",
    "table_csv_header",
    "result_to_csv_row",
    "clear_cache",
]

U64 = np.uint64
_FULL = U64(0xFFFFFFFFFFFFFFFF)

_MAX_AMBIENT = 255      # one 256-bit vector of positions/differences


@intrinsic
def _popcnt(typingctx, x):
    sig = types.int64(types.uint64)

    def codegen(context, builder, signature, args):
        f = builder.module.declare_intrinsic("llvm.ctpop", [ir.IntType(64)])
        return builder.call(f, [args[0]])

    return sig, codegen


@intrinsic
def _ctz(typingctx, x):
    sig = types.int64(types.uint64)

    def codegen(context, builder, signature, args):
        i64 = ir.IntType(64)
        i1 = ir.IntType(1)
        fnty = ir.FunctionType(i64, [i64, i1])
        f = builder.module.declare_intrinsic("llvm.cttz", [i64], fnty)
        return builder.call(f, [args[0], ir.Constant(i1, 0)])

    return sig, codegen


@njit(inline="always", cache=True)
def _msb64(x):
    # x != 0: isolate the highest set bit
    x |= x >> U64(1)
    x |= x >> U64(2)
    x |= x >> U64(4)
    x |= x >> U64(8)
    x |= x >> U64(16)
    x |= x >> U64(32)
    return x - (x >> U64(1))


@njit(inline="always", cache=True)
def _bit_set(w, i):
    w[i >> 6] |= U64(1) << U64(i & 63)


@njit(inline="always", cache=True)
def _bit_clear(w, i):
    w[i >> 6] &= ~(U64(1) << U64(i & 63))


@njit(inline="always", cache=True)
def _bit_test(w, i):
    return (w[i >> 6] >> U64(i & 63)) & U64(1)


@njit(inline="always", cache=True)
def _or_shl(dst, src, s):
    """dst |= src << s for 256-bit vectors, 0 <= s < 256."""
    ws = s >> 6
    bs = s & 63
    if bs == 0:
        for k in range(3, ws - 1, -1):
            dst[k] |= src[k - ws]
    else:
        b = U64(bs)
        nb = U64(64 - bs)
        for k in range(3, ws, -1):
            dst[k] |= (src[k - ws] << b) | (src[k - ws - 1] >> nb)
        dst[ws] |= src[0] << b


@njit(inline="always", cache=True)
def _or_shr(dst, src, s):
    """dst |= src >> s for 256-bit vectors, 0 <= s < 256."""
    ws = s >> 6
    bs = s & 63
    if bs == 0:
        for k in range(0, 4 - ws):
            dst[k] |= src[k + ws]
    else:
        b = U64(bs)
        nb = U64(64 - bs)
        for k in range(0, 3 - ws):
            dst[k] |= (src[k + ws] >> b) | (src[k + ws + 1] << nb)
        dst[3 - ws] |= src[3] >> b


@njit(inline="always", cache=True)
def _range_mask(out, lo, hi):
    """out = mask of bits lo..hi inclusive (assumes 0 <= lo <= hi < 256)."""
    for k in range(4):
        out[k] = U64(0)
    wlo = lo >> 6
    whi = hi >> 6
    mlo = _FULL << U64(lo & 63)
    mhi = _FULL >> U64(63 - (hi & 63))
    if wlo == whi:
        out[wlo] = mlo & mhi
    else:
        out[wlo] = mlo
        for k in range(wlo + 1, whi):
            out[k] = _FULL
        out[whi] = mhi


@njit(cache=True, nogil=True)
def _decide(n, T, min_amb, budget, abort_flag, root_fix):
    """Search for a Sidon set of size T inside [1, n] containing 1 and n.

    min_amb[k] must be the exact minimal ambient bound for a k-element
    Sidon set, for every k <= T-1 (entries beyond are never read).  When
    root_fix > 0 the first inner placement is constrained to that value,
    which partitions the search tree for parallel workers.

    Returns (status, witness, nodes): 1 found / 0 refuted / -1 budget or
    abort.
    """
    wit = np.zeros(T, np.int64)
    nodes = np.int64(0)
    if T == 1:
        wit[0] = 1
        return 1, wit, nodes
    if T == 2:
        if n >= 2:
            wit[0] = 1
            wit[1] = n
            return 1, wit, nodes
        return 0, wit, nodes
    M = T - 2                       # inner points still to place at the root
    used = np.zeros(4, U64)
    urev = np.zeros(4, U64)
    B = np.zeros(4, U64)
    win = np.zeros(4, U64)
    win2 = np.zeros(4, U64)
    # anchors 1 and n
    elems = np.zeros(T, np.int64)
    elems[0] = 1
    elems[1] = n
    ecount = 2
    _bit_set(used, n - 1)
    _bit_set(urev, 255 - (n - 1))
    _or_shl(B, used, 1)
    _or_shr(B, urev, 255 - 1)
    _or_shl(B, used, n)
    _or_shr(B, urev, 255 - n)
    # per-level stacks
    usedS = np.zeros((M + 1, 4), U64)
    urevS = np.zeros((M + 1, 4), U64)
    BS = np.zeros((M + 1, 4), U64)
    Ls = np.zeros(M + 1, np.int64)
    Rs = np.zeros(M + 1, np.int64)
    sideS = np.zeros(M + 1, np.int64)      # 0 = left frontier, 1 = right
    survS = np.zeros((M + 1, 4), U64)      # unconsumed candidates per level
    flS = np.zeros(M + 1, np.int64)        # least inner point so far (0 = none)
    frS = np.zeros(M + 1, np.int64)        # greatest inner point so far
    Ls[0] = 1
    Rs[0] = n
    level = 0
    entering = True
    while level >= 0:
        rr = M - level                      # points left to place, incl. this one
        if entering:
            entering = False
            nodes += 1
            if budget > 0 and nodes > budget:
                return -1, wit, nodes
            if abort_flag[0] != 0:
                return -1, wit, nodes
            L = Ls[level]
            R = Rs[level]
            gap = min_amb[rr + 1] - 1       # segment keeps rr+1 of the points
            # free-difference bounds on the same segment width:
            #   rr adjacent gaps are distinct free differences -> their sum
            #   C(rr+1,2) pairwise differences fit below the width
            pairs = rr * (rr + 1) // 2
            got = np.int64(0)
            fsum = np.int64(0)
            nth = np.int64(0)
            for k in range(4):
                f = ~used[k]
                if k == 0:
                    f &= _FULL - U64(1)      # difference 0 does not exist
                while f != U64(0):
                    d = (k << 6) + _ctz(f)
                    if d >= n:
                        break
                    f &= f - U64(1)
                    got += 1
                    if got <= rr:
                        fsum += d
                    if got == pairs:
                        nth = d
                        break
                if got == pairs:
                    break
            if got < pairs:
                # fewer free differences below n than any placement needs
                level -= 1
                if level >= 0:
                    ecount -= 1
                    for k in range(4):
                        used[k] = usedS[level][k]
                        urev[k] = urevS[level][k]
                        B[k] = BS[level][k]
                continue
            if fsum > gap:
                gap = fsum
            if nth > gap:
                gap = nth
            # candidate windows on both sides have equal width
            lo_l = L + 1
            hi_l = R - gap
            lo_r = L + gap
            hi_r = R - 1
            if level == 0:
                # the root places the least inner point; cap by reflection
                hi_half = (n + 1) // 2
                if hi_l > hi_half:
                    hi_l = hi_half
                if hi_l < lo_l:
                    level -= 1
                    continue                # root: nothing to undo
                sideS[level] = 0
                _range_mask(win, lo_l, hi_l)
                if root_fix > 0:
                    for k in range(4):
                        win2[k] = U64(0)
                    if lo_l <= root_fix <= hi_l:
                        _bit_set(win2, root_fix)
                    for k in range(4):
                        win[k] &= win2[k]
                for k in range(4):
                    survS[level][k] = win[k] & ~B[k]
            else:
                fl = flS[level]
                fr = frS[level]
                # canonical form: (least inner - 1) <= (n - greatest inner)
                if fl == 0 and fr != 0:
                    cap = (n - fr) + 1
                    if hi_l > cap:
                        hi_l = cap
                if fr == 0 and fl != 0:
                    cap = n - (fl - 1)
                    if hi_r > cap:
                        hi_r = cap
                nl = np.int64(0)
                nr = np.int64(0)
                if hi_l >= lo_l:
                    _range_mask(win, lo_l, hi_l)
                    for k in range(4):
                        win[k] &= ~B[k]
                        nl += _popcnt(win[k])
                if nl == 0:
                    # no choice for the least remaining point
                    level -= 1
                    if level >= 0:
                        ecount -= 1
                        for k in range(4):
                            used[k] = usedS[level][k]
                            urev[k] = urevS[level][k]
                            B[k] = BS[level][k]
                    continue
                if hi_r >= lo_r:
                    _range_mask(win2, lo_r, hi_r)
                    for k in range(4):
                        win2[k] &= ~B[k]
                        nr += _popcnt(win2[k])
                if nr == 0:
                    # no choice for the greatest remaining point
                    level -= 1
                    if level >= 0:
                        ecount -= 1
                        for k in range(4):
                            used[k] = usedS[level][k]
                            urev[k] = urevS[level][k]
                            B[k] = BS[level][k]
                    continue
                if nl <= nr:
                    sideS[level] = 0
                    for k in range(4):
                        survS[level][k] = win[k]
                else:
                    sideS[level] = 1
                    for k in range(4):
                        survS[level][k] = win2[k]
            # snapshot state for rollback
            for k in range(4):
                usedS[level][k] = used[k]
                urevS[level][k] = urev[k]
                BS[level][k] = B[k]
            continue
        # resume scanning candidates at this level
        side = sideS[level]
        placed = False
        while True:
            c = np.int64(-1)
            if side == 0:
                for k in range(4):
                    if survS[level][k] != U64(0):
                        c = np.int64((k << 6) + _ctz(survS[level][k]))
                        survS[level][k] &= survS[level][k] - U64(1)
                        break
            else:
                for k in range(3, -1, -1):
                    if survS[level][k] != U64(0):
                        b = _msb64(survS[level][k])
                        survS[level][k] ^= b
                        c = np.int64((k << 6) + _popcnt(b - U64(1)))
                        break
            if c < 0:
                break
            # exact placement: mark differences to all elements, catch repeats
            okc = True
            nm = np.int64(0)
            for i in range(ecount):
                d = c - elems[i]
                if d < 0:
                    d = -d
                if _bit_test(used, d) != U64(0):
                    okc = False
                    break
                _bit_set(used, d)
                nm += 1
            if not okc:
                for i in range(nm):
                    d = c - elems[i]
                    if d < 0:
                        d = -d
                    _bit_clear(used, d)
                continue
            if ecount + 1 == T:
                for i in range(ecount):
                    wit[i] = elems[i]
                wit[ecount] = c
                return 1, wit, nodes
            # commit: mirror bits, then extend the blocked mask
            for i in range(ecount):
                d = c - elems[i]
                if d < 0:
                    d = -d
                _bit_set(urev, 255 - d)
                e = elems[i]
                if e + d <= n:
                    _bit_set(B, e + d)
                if e - d >= 1:
                    _bit_set(B, e - d)
            _or_shl(B, used, c)
            _or_shr(B, urev, 255 - c)
            elems[ecount] = c
            ecount += 1
            if side == 0:
                Ls[level + 1] = c
                Rs[level + 1] = Rs[level]
                flS[level + 1] = flS[level] if flS[level] != 0 else c
                frS[level + 1] = frS[level]
            else:
                Ls[level + 1] = Ls[level]
                Rs[level + 1] = c
                flS[level + 1] = flS[level]
                frS[level + 1] = frS[level] if frS[level] != 0 else c
            level += 1
            entering = True
            placed = True
            break
        if placed:
            continue
        # level exhausted: undo this level's placement and pop
        level -= 1
        if level >= 0:
            ecount -= 1
            for k in range(4):
                used[k] = usedS[level][k]
                urev[k] = urevS[level][k]
                B[k] = BS[level][k]
    return 0, wit, nodes


# ---------------------------------------------------------------------------
# Cilleruelo upper bound, evaluated safely.
# ---------------------------------------------------------------------------

def cilleruelo_bound_decimal(n: int) -> Decimal:
    """n^{1/2} + n^{1/4} + 1/2 to 50 significant digits."""
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    getcontext().prec = 50
    root = Decimal(n).sqrt()
    return root + root.sqrt() + Decimal("0.5")


def cilleruelo_ceiling(n: int) -> int:
    """floor(n^{1/2} + n^{1/4} + 1/2): a proven ceiling for S_n."""
    return int(cilleruelo_bound_decimal(n))


# ---------------------------------------------------------------------------
# Incremental table engine.
# ---------------------------------------------------------------------------

_NO_ABORT = np.zeros(1, np.int64)


def _run_decision(n: int, T: int, min_amb: list[int], budget: int,
                  abort_flag: np.ndarray, threads: int):
    """One anchored decision, optionally root-split across worker threads.

    Returns (status, witness_list_or_None, nodes).  Node counts are
    normalized so that multi-threaded runs report exactly the
    single-threaded number: each fixed-root task re-enters the same root
    node, so per-task counts are summed minus the duplicated root entries.
    """
    ma = np.array(min_amb + [-1] * 4, np.int64)
    if threads <= 1 or T <= 3 or n < 6:
        status, wit, nodes = _decide(n, T, ma, budget, abort_flag, 0)
        witness = sorted(int(x) for x in wit) if status == 1 else None
        return status, witness, int(nodes)

    # Parallel mode: split on the first placement (the least inner point,
    # at most (n+1)//2 by the reflection rule), dispatched in waves so the
    # merge is deterministic: the winner is the lowest successful root.
    roots = list(range(2, (n + 1) // 2 + 1))
    total_nodes = 1                     # the shared root entry
    found_status = 0
    found_witness = None
    aborted = False
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for wave_start in range(0, len(roots), threads):
            wave = roots[wave_start : wave_start + threads]
            futs = [
                pool.submit(_decide, n, T, ma, budget, abort_flag, r)
                for r in wave
            ]
            results = [f.result() for f in futs]
            for (status, wit, nodes) in results:
                total_nodes += max(0, int(nodes) - 1)
                if status == -1:
                    aborted = True
                if status == 1 and found_status == 0:
                    found_status = 1
                    found_witness = sorted(int(x) for x in wit)
                    break
            if found_status == 1 or aborted:
                break
    if found_status == 1:
        return 1, found_witness, total_nodes
    if aborted:
        return -1, None, total_nodes
    return 0, None, total_nodes


class _TableEngine:
    """Incremental S_n table: exact sizes, witnesses, per-n statistics."""

    def __init__(self, use_ceiling: bool = True):
        self.use_ceiling = use_ceiling
        self.s: list[int] = [0, 1]           # s[n] for n <= n_done
        self.witnesses: list[list[int]] = [[], [1]]
        self.nodes: list[int] = [0, 0]
        self.millis: list[float] = [0.0, 0.0]
        self.min_amb: list[int] = [0, 1]     # minimal ambient per size
        self.lock = threading.Lock()

    @property
    def n_done(self) -> int:
        return len(self.s) - 1

    def extend_to(self, n_max: int, budget_nodes: int | None = None,
                  budget_seconds: float | None = None, threads: int = 1,
                  on_row=None) -> tuple[bool, int]:
        """Extend the table to n_max; returns (completed, nodes_spent).

        Stops early when the node budget or the wall-clock budget runs out;
        the table always holds a consistent completed prefix.
        """
        if n_max > _MAX_AMBIENT:
            raise ValidationError(
                f"n_max={n_max} exceeds the engine's {_MAX_AMBIENT}-position limit"
            )
        spent = 0
        abort_flag = _NO_ABORT
        timer = None
        if budget_seconds is not None:
            abort_flag = np.zeros(1, np.int64)

            def _expire():
                abort_flag[0] = 1

            timer = threading.Timer(budget_seconds, _expire)
            timer.daemon = True
            timer.start()
        try:
            with self.lock:
                while self.n_done < n_max:
                    n = self.n_done + 1
                    T = self.s[n - 1] + 1
                    if self.use_ceiling and T > cilleruelo_ceiling(n):
                        # the proven upper bound is already attained
                        self.s.append(self.s[n - 1])
                        self.witnesses.append(self.witnesses[n - 1])
                        self.nodes.append(0)
                        self.millis.append(0.0)
                        if on_row:
                            on_row(self._row(n))
                        continue
                    remaining = 0
                    if budget_nodes is not None:
                        remaining = budget_nodes - spent
                        if remaining <= 0:
                            return False, spent
                    t0 = time.perf_counter()
                    status, witness, nodes = _run_decision(
                        n, T, self.min_amb[:T], remaining, abort_flag, threads
                    )
                    dt = time.perf_counter() - t0
                    spent += nodes
                    if status == -1:
                        return False, spent
                    if status == 1:
                        self._check_witness(witness, n, T)
                        self.s.append(T)
                        self.witnesses.append(witness)
                        if len(self.min_amb) != T:
                            raise InternalError(
                                f"size jump to {T} at n={n} out of order"
                            )
                        self.min_amb.append(n)
                    else:
                        self.s.append(self.s[n - 1])
                        self.witnesses.append(self.witnesses[n - 1])
                    self.nodes.append(nodes)
                    self.millis.append(dt * 1000.0)
                    if on_row:
                        on_row(self._row(n))
        finally:
            if timer is not None:
                timer.cancel()
        return True, spent

    @staticmethod
    def _check_witness(witness: list[int], n: int, T: int) -> None:
        if witness is None or len(witness) != T:
            raise InternalError(f"bad witness for n={n}: {witness}")
        diffs = set()
        for i in range(T):
            for j in range(i + 1, T):
                d = witness[j] - witness[i]
                if d <= 0 or d in diffs:
                    raise InternalError(
                        f"witness for n={n} is not Sidon: {witness}"
                    )
                diffs.add(d)
        if witness[0] < 1 or witness[-1] > n:
            raise InternalError(f"witness for n={n} out of range: {witness}")

    def _row(self, n: int) -> SolveResult:
        return SolveResult(
            n=n,
            s_n=self.s[n],
            witness=SidonSet(tuple(self.witnesses[n]), n),
            nodes_explored=self.nodes[n],
            wall_time=self.millis[n] / 1000.0,
        )

    def results(self, n_max: int) -> list[SolveResult]:
        return [self._row(n) for n in range(1, n_max + 1)]

    # -- checkpointing -----------------------------------------------------

    def state_dict(self) -> dict:
        return {
            "schema_version": 1,
            "use_ceiling": self.use_ceiling,
            "n_done": self.n_done,
            "s": self.s[1:],
            "witnesses": self.witnesses[1:],
            "nodes": self.nodes[1:],
            "millis": self.millis[1:],
            "min_amb": self.min_amb,
        }

    @classmethod
    def from_state_dict(cls, state: dict) -> "_TableEngine":
        if state.get("schema_version") != 1:
            raise ValidationError(
                f"unsupported checkpoint schema: {state.get('schema_version')!r}"
            )
        eng = cls(use_ceiling=state["use_ceiling"])
        eng.s = [0] + [int(x) for x in state["s"]]
        eng.witnesses = [[]] + [[int(e) for e in w] for w in state["witnesses"]]
        eng.nodes = [0] + [int(x) for x in state["nodes"]]
        eng.millis = [0.0] + [float(x) for x in state["millis"]]
        eng.min_amb = [int(x) for x in state["min_amb"]]
        if eng.n_done != state["n_done"]:
            raise ValidationError("checkpoint inconsistent: n_done mismatch")
        for n in range(1, eng.n_done + 1):
            if len(eng.witnesses[n]) != eng.s[n]:
                raise ValidationError(f"checkpoint witness size mismatch at n={n}")
            try:
                eng._check_witness(eng.witnesses[n], n, len(eng.witnesses[n]))
            except InternalError as exc:
                raise ValidationError(f"checkpoint invalid: {exc}") from exc
        return eng


_SHARED: dict[bool, _TableEngine] = {}
_SHARED_LOCK = threading.Lock()


def _shared_engine(use_ceiling: bool) -> _TableEngine:
    with _SHARED_LOCK:
        if use_ceiling not in _SHARED:
            _SHARED[use_ceiling] = _TableEngine(use_ceiling=use_ceiling)
        return _SHARED[use_ceiling]


def clear_cache() -> None:
    """Drop the shared incremental tables (mainly for tests)."""
    with _SHARED_LOCK:
        _SHARED.clear()


# ---------------------------------------------------------------------------
# Public API.
# ---------------------------------------------------------------------------

def solve_max(n: int, budget_nodes: int | None = None, *,
              budget_seconds: float | None = None, use_ceiling: bool = True,
              threads: int = 1) -> SolveResult | IncompleteResult:
    """Exact S_n with a witness, or a typed incomplete result on budget.

    The witness is deterministic: the first maximum set found by the fixed
    anchored search order.  ``use_ceiling=False`` disables the proven
    upper-bound early exit (debug aid: the solver then refutes every size
    bound itself).  ``budget_nodes`` caps the nodes spent by this call;
    exhausting it returns :class:`IncompleteResult` carrying the best
    lower bound established, never a silently wrong exact answer.
    """
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    engine = _shared_engine(use_ceiling)
    t0 = time.perf_counter()
    completed, spent = engine.extend_to(
        n, budget_nodes=budget_nodes, budget_seconds=budget_seconds,
        threads=threads,
    )
    if completed:
        return engine._row(n)
    m = engine.n_done
    lb = SidonSet(tuple(engine.witnesses[m]), n)
    return IncompleteResult(
        n=n,
        lower_bound=lb,
        n_completed=m,
        nodes_explored=spent,
        wall_time=time.perf_counter() - t0,
        reason=f"budget exhausted while deciding n={m + 1}",
    )


def table_csv_header() -> str:
    return "n,s_n,witness,nodes,millis"


def result_to_csv_row(r: SolveResult) -> str:
    witness = " ".join(str(e) for e in r.witness.elements)
    return f"{r.n},{r.s_n},{witness},{r.nodes_explored},{r.wall_time * 1000.0:.3f}"


def s_n_table(n_max: int, budget_nodes: int | None = None, *,
              budget_seconds: float | None = None, use_ceiling: bool = True,
              threads: int = 1, csv_path: str | None = None,
              checkpoint_path: str | None = None,
              checkpoint_every: int = 10,
              ) -> list[SolveResult | IncompleteResult]:
    """S_n for 1 <= n <= n_max, computed incrementally.

    Returns one :class:`SolveResult` per n; if the node or wall-clock
    budget runs out at some n, the list ends with a single
    :class:`IncompleteResult` for that n instead.

    ``csv_path`` appends rows "n,s_n,witness,nodes,millis" as they are
    produced (a header is written first when the file is new or empty).
    ``checkpoint_path`` names a JSON file used both to resume a previous
    run and to store progress every ``checkpoint_every`` rows.
    """
    if not isinstance(n_max, int) or n_max < 1:
        raise ValidationError(f"n_max must be a positive integer, got {n_max!r}")
    if checkpoint_path is not None:
        if os.path.exists(checkpoint_path):
            with open(checkpoint_path, "r", encoding="utf-8") as fh:
                engine = _TableEngine.from_state_dict(json.load(fh))
            if engine.use_ceiling != use_ceiling:
                raise ValidationError(
                    "checkpoint was produced with a different use_ceiling setting"
                )
        else:
            engine = _TableEngine(use_ceiling=use_ceiling)
    else:
        engine = _shared_engine(use_ceiling)

    csv_fh = None
    if csv_path is not None:
        new_file = not os.path.exists(csv_path) or os.path.getsize(csv_path) == 0
        csv_fh = open(csv_path, "a", encoding="utf-8")
        if new_file:
            csv_fh.write(table_csv_header() + "\n")
            # rows the engine already holds will not be produced again
            for n in range(1, min(engine.n_done, n_max) + 1):
                csv_fh.write(result_to_csv_row(engine._row(n)) + "\n")
            csv_fh.flush()

    rows_since_ckpt = 0

    def _save_checkpoint() -> None:
        if checkpoint_path is None:
            return
        tmp = checkpoint_path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(engine.state_dict(), fh)
        os.replace(tmp, checkpoint_path)

    def _on_row(row: SolveResult) -> None:
        nonlocal rows_since_ckpt
        if csv_fh is not None:
            csv_fh.write(result_to_csv_row(row) + "\n")
            csv_fh.flush()
        rows_since_ckpt += 1
        if checkpoint_path is not None and rows_since_ckpt >= checkpoint_every:
            _save_checkpoint()
            rows_since_ckpt = 0

    t0 = time.perf_counter()
    try:
        completed, spent = engine.extend_to(
            n_max, budget_nodes=budget_nodes, budget_seconds=budget_seconds,
            threads=threads, on_row=_on_row,
        )
    finally:
        if checkpoint_path is not None:
            _save_checkpoint()
        if csv_fh is not None:
            csv_fh.close()

    done = min(engine.n_done, n_max)
    out: list[SolveResult | IncompleteResult] = engine.results(done)
    if not completed:
        m = engine.n_done
        out.append(IncompleteResult(
            n=m + 1,
            lower_bound=SidonSet(tuple(engine.witnesses[m]), m + 1),
            n_completed=m,
            nodes_explored=spent,
            wall_time=time.perf_counter() - t0,
            reason=f"budget exhausted while deciding n={m + 1}",
        ))
    return out
