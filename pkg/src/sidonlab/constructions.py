"""Explicit Sidon-set constructions and the prime utilities they lean on.

Provides the discrete-log construction over GF(p^2) (p residues Sidon modulo
p^2-1), the perfect-difference-set construction over GF(q^3) (q+1 residues
modulo q^2+q+1), the greedy baseline sequence, a plain sieve with gap
records, and a small binary cache format for prime tables.

All field choices are deterministic so construction output is reproducible:
the quadratic is x^2 - r with r the least quadratic non-residue (x^2+x+1 for
p=2), the cubic is the least lexicographic rootless monic, and primitive
elements are the least generators in lexicographic coefficient order
(highest coefficient first).
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from math import isqrt

from .core import (
    InternalError,
    ModularSidonSet,
    SidonSet,
    ValidationError,
)

__all__ = [
    "FieldElementP2",
    "PrimeGapRecord",
    "primes_up_to",
    "prime_gaps",
    "largest_prime_with_square_below",
    "is_prime",
    "bose",
    "bose_integer",
    "singer",
    "greedy_mian_chowla",
    "save_prime_cache",
    "load_prime_cache",
    "PRIME_CACHE_MAGIC",
]


# ---------------------------------------------------------------------------
# Primes.
# ---------------------------------------------------------------------------

def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit by a byte sieve; limit < 2 is a caller bug."""
    if not isinstance(limit, int) or limit < 2:
        raise ValidationError(f"limit must be an integer >= 2, got {limit!r}")
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray((limit - p * p) // p + 1)
    return [i for i in range(2, limit + 1) if sieve[i]]


def is_prime(n: int) -> bool:
    if not isinstance(n, int) or n < 2:
        return False
    for p in range(2, isqrt(n) + 1):
        if n % p == 0:
            return False
    return True


@dataclass(frozen=True)
class PrimeGapRecord:
    """One consecutive-prime pair with its gap and the gap/p^0.525 ratio."""

    p_k: int
    p_k_plus_1: int
    gap: int
    ratio: float

    def __post_init__(self) -> None:
        if self.gap != self.p_k_plus_1 - self.p_k:
            raise InternalError("gap must equal p_{k+1} - p_k")


def prime_gaps(limit: int) -> list[PrimeGapRecord]:
    """Gap records for all consecutive primes up to ``limit``."""
    ps = primes_up_to(limit)
    out = []
    for a, b in zip(ps, ps[1:]):
        gap = b - a
        out.append(PrimeGapRecord(p_k=a, p_k_plus_1=b, gap=gap,
                                  ratio=gap / a**0.525))
    return out


def largest_prime_with_square_below(n: int) -> int:
    """The largest prime p with p^2 - 1 < n (equivalently p^2 <= n); n >= 4."""
    if not isinstance(n, int) or n < 4:
        raise ValidationError(f"n must be an integer >= 4, got {n!r}")
    ps = primes_up_to(isqrt(n) + 1)
    best = 0
    for p in ps:
        if p * p <= n:
            best = p
    if best == 0:
        raise InternalError(f"no prime with square <= {n} despite n >= 4")
    return best


PRIME_CACHE_MAGIC = b"SIDPRIMES1"


def save_prime_cache(path: str, primes: list[int]) -> None:
    """Write a prime table as magic header + count + little-endian u64s."""
    with open(path, "wb") as fh:
        fh.write(PRIME_CACHE_MAGIC)
        fh.write(struct.pack("<Q", len(primes)))
        fh.write(struct.pack(f"<{len(primes)}Q", *primes))


def load_prime_cache(path: str) -> list[int]:
    with open(path, "rb") as fh:
        blob = fh.read()
    if not blob.startswith(PRIME_CACHE_MAGIC):
        raise ValidationError(f"{path} is not a prime cache (bad magic)")
    (count,) = struct.unpack_from("<Q", blob, len(PRIME_CACHE_MAGIC))
    offset = len(PRIME_CACHE_MAGIC) + 8
    expected = offset + 8 * count
    if len(blob) != expected:
        raise ValidationError(
            f"{path} truncated: expected {expected} bytes, got {len(blob)}"
        )
    return list(struct.unpack_from(f"<{count}Q", blob, offset))


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# GF(p^2): elements c0 + c1*theta with theta^2 = alpha*theta + beta.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElementP2:
    """c0 + c1*theta in GF(p^2), coefficients reduced modulo p."""

    c0: int
    c1: int


class _GFp2:
    """Arithmetic in GF(p^2) over a verified-irreducible monic quadratic.

    For odd p the quadratic is x^2 - r with r the least quadratic
    non-residue mod p; for p = 2 it is x^2 + x + 1.  Internally
    theta^2 = alpha*theta + beta.
    """

    def __init__(self, p: int):
        self.p = p
        if p == 2:
            self.alpha, self.beta = 1, 1          # theta^2 = theta + 1
        else:
            r = self._least_qnr(p)
            self.alpha, self.beta = 0, r          # theta^2 = r
        self._assert_irreducible()

    @staticmethod
    def _least_qnr(p: int) -> int:
        for r in range(2, p):
            if pow(r, (p - 1) // 2, p) == p - 1:
                return r
        raise InternalError(f"no quadratic non-residue mod {p}")

    def _assert_irreducible(self) -> None:
        # x^2 - alpha*x - beta must have no root in GF(p).
        p = self.p
        for x in range(p):
            if (x * x - self.alpha * x - self.beta) % p == 0:
                raise InternalError(
                    f"quadratic for GF({p}^2) has root {x}; not irreducible"
                )

    def mul(self, a: FieldElementP2, b: FieldElementP2) -> FieldElementP2:
        p = self.p
        hi = a.c1 * b.c1                          # theta^2 coefficient
        c0 = (a.c0 * b.c0 + self.beta * hi) % p
        c1 = (a.c0 * b.c1 + a.c1 * b.c0 + self.alpha * hi) % p
        return FieldElementP2(c0, c1)

    def pow(self, a: FieldElementP2, e: int) -> FieldElementP2:
        acc = FieldElementP2(1, 0)
        base = a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def primitive_element(self) -> FieldElementP2:
        """Least generator of GF(p^2)* in lexicographic (c1, c0) order."""
        order = self.p * self.p - 1
        divisors = [order // q for q in _prime_factors(order)]
        one = FieldElementP2(1, 0)
        for c1 in range(self.p):
            for c0 in range(self.p):
                if c0 == 0 and c1 == 0:
                    continue
                g = FieldElementP2(c0, c1)
                if all(self.pow(g, d) != one for d in divisors):
                    return g
        raise InternalError(f"GF({self.p}^2) has no primitive element")


def bose(p: int) -> ModularSidonSet:
    """Bose's construction: p residues Sidon modulo p^2 - 1.

    With g a primitive element of GF(p^2), returns the discrete logs
    { a in [1, p^2-1] : g^a - g in GF(p) } -- one for each c in GF(p),
    since g^a = g + c has a unique solution and g + c is never 0 or 1.
    """
    if not is_prime(p):
        raise ValidationError(f"p = {p!r} is not prime")
    field = _GFp2(p)
    g = field.primitive_element()
    order = p * p - 1
    logs = []
    acc = g
    for a in range(1, order):
        if acc.c1 == g.c1:                        # g^a - g has zero theta part
            logs.append(a)
        acc = field.mul(acc, g)
    if len(logs) != p:
        raise InternalError(
            f"Bose construction for p={p} produced {len(logs)} elements, not {p}"
        )
    return ModularSidonSet(tuple(sorted(logs)), order)


def bose_integer(p: int) -> SidonSet:
    """The bose(p) residues as integers in [1, p^2-1]; Sidon without wrap."""
    m = bose(p)
    return SidonSet(m.elements, m.modulus)


# ---------------------------------------------------------------------------
# GF(q^3): elements c0 + c1*theta + c2*theta^2.
# ---------------------------------------------------------------------------

class _GFq3:
    """Arithmetic in GF(q^3) over the least-lex rootless monic cubic.

    The cubic x^3 + d2 x^2 + d1 x + d0 is chosen with (d2, d1, d0) least in
    lexicographic order among those with no root in GF(q); for degree 3,
    rootless is the same as irreducible.
    """

    def __init__(self, q: int):
        self.q = q
        d2, d1, d0 = self._least_rootless_cubic(q)
        # theta^3 = s2*theta^2 + s1*theta + s0
        s2, s1, s0 = (-d2) % q, (-d1) % q, (-d0) % q
        self.t3 = (s0, s1, s2)
        # theta^4 = theta * theta^3
        self.t4 = (
            (s2 * s0) % q,
            (s0 + s2 * s1) % q,
            (s1 + s2 * s2) % q,
        )

    @staticmethod
    def _least_rootless_cubic(q: int) -> tuple[int, int, int]:
        for d2 in range(q):
            for d1 in range(q):
                for d0 in range(q):
                    if all((x**3 + d2 * x * x + d1 * x + d0) % q for x in range(q)):
                        return d2, d1, d0
        raise InternalError(f"no rootless cubic over GF({q})")

    def mul(self, a: tuple[int, int, int], b: tuple[int, int, int]) -> tuple[int, int, int]:
        q = self.q
        a0, a1, a2 = a
        b0, b1, b2 = b
        c0 = a0 * b0
        c1 = a0 * b1 + a1 * b0
        c2 = a0 * b2 + a1 * b1 + a2 * b0
        c3 = a1 * b2 + a2 * b1
        c4 = a2 * b2
        t3, t4 = self.t3, self.t4
        return (
            (c0 + c3 * t3[0] + c4 * t4[0]) % q,
            (c1 + c3 * t3[1] + c4 * t4[1]) % q,
            (c2 + c3 * t3[2] + c4 * t4[2]) % q,
        )

    def pow(self, a: tuple[int, int, int], e: int) -> tuple[int, int, int]:
        acc = (1, 0, 0)
        base = a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def primitive_element(self) -> tuple[int, int, int]:
        """Least generator of GF(q^3)* in lexicographic (c2, c1, c0) order."""
        order = self.q**3 - 1
        divisors = [order // f for f in _prime_factors(order)]
        one = (1, 0, 0)
        for c2 in range(self.q):
            for c1 in range(self.q):
                for c0 in range(self.q):
                    if c0 == 0 and c1 == 0 and c2 == 0:
                        continue
                    g = (c0, c1, c2)
                    if all(self.pow(g, d) != one for d in divisors):
                        return g
        raise InternalError(f"GF({self.q}^3) has no primitive element")


def singer(q: int) -> ModularSidonSet:
    """Singer's perfect difference set: q+1 residues modulo q^2 + q + 1.

    With g primitive in GF(q^3), the discrete logs (mod q^2+q+1) of the
    nonzero elements of the plane span{1, theta} form q+1 residues whose
    pairwise differences cover every nonzero residue exactly once.
    """
    if not is_prime(q):
        raise ValidationError(f"q = {q!r} is not prime")
    field = _GFq3(q)
    g = field.primitive_element()
    modulus = q * q + q + 1
    logs: set[int] = set()
    acc = (1, 0, 0)
    for i in range(q**3 - 1):
        if acc[2] == 0:                           # in span{1, theta}
            logs.add(i % modulus)
        acc = field.mul(acc, g)
    if len(logs) != q + 1:
        raise InternalError(
            f"Singer construction for q={q} produced {len(logs)} residues, "
            f"not {q + 1}"
        )
    return ModularSidonSet(tuple(sorted(logs)), modulus)


# ---------------------------------------------------------------------------
# Greedy baseline.
# ---------------------------------------------------------------------------

def greedy_mian_chowla(count: int) -> SidonSet:
    """First ``count`` terms of the greedy Sidon sequence 1, 2, 4, 8, 13, ...

    Each next term is the least integer exceeding the last that keeps the
    set Sidon; the ambient bound is the last element.
    """
    if not isinstance(count, int) or count < 1:
        raise ValidationError(f"count must be a positive integer, got {count!r}")
    elems = [1]
    used = 0                                       # difference bitmask
    c = 1
    while len(elems) < count:
        c += 1
        newd = 0
        ok = True
        for e in elems:
            bit = 1 << (c - e)
            if (used | newd) & bit:
                ok = False
                break
            newd |= bit
        if ok:
            used |= newd
            elems.append(c)
    return SidonSet(tuple(elems), elems[-1])
