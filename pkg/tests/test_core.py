"""Core types, validation, serialization, and the brute-force oracle."""
from __future__ import annotations

import dataclasses
import random

import pytest

from sidonlab.core import (
    BRUTE_FORCE_GUARD,
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
    read_sets_csv,
    reflect,
    set_from_csv_line,
    set_from_json,
    set_to_csv_line,
    set_to_json,
    write_sets_csv,
)


# ---------------------------------------------------------------------------
# is_sidon: three distinct outcomes.
# ---------------------------------------------------------------------------

def test_is_sidon_examples():
    assert is_sidon([1, 2, 5, 7], 7) is True
    assert is_sidon([1], 1) is True
    assert is_sidon([1, 2, 3], 3) is False          # difference 1 repeats


def test_is_sidon_rejects_malformed_input():
    with pytest.raises(ValidationError):
        is_sidon([], 5)                              # empty
    with pytest.raises(ValidationError):
        is_sidon([2, 1], 5)                          # unsorted
    with pytest.raises(ValidationError):
        is_sidon([1, 1, 4], 5)                       # duplicate
    with pytest.raises(ValidationError):
        is_sidon([0, 2], 5)                          # below range
    with pytest.raises(ValidationError):
        is_sidon([1, 6], 5)                          # above ambient
    with pytest.raises(ValidationError):
        is_sidon([1, 2.5], 5)                        # non-integer
    with pytest.raises(ValidationError):
        is_sidon([1, 2], 0)                          # bad ambient


def test_is_sidon_modular_examples():
    assert is_sidon_modular([0, 1, 3], 7) is True
    assert is_sidon_modular([0], 5) is True
    assert is_sidon_modular([0, 1, 2], 4) is False   # 1-0 == 2-1 mod 4


def test_is_sidon_modular_rejects_malformed():
    with pytest.raises(ValidationError):
        is_sidon_modular([0, 0], 5)                  # duplicate residue
    with pytest.raises(ValidationError):
        is_sidon_modular([0, 5], 5)                  # duplicate after reduction
    with pytest.raises(ValidationError):
        is_sidon_modular([], 5)
    with pytest.raises(ValidationError):
        is_sidon_modular([0, "1"], 5)
    with pytest.raises(ValidationError):
        is_sidon_modular([0, 1], 0)


def test_is_sidon_modular_reduces_representatives():
    # any integer stands for its residue class: -1 mod 5 is 4
    assert is_sidon_modular([-1, 2], 5) is True
    assert is_sidon_modular([4, 2], 5) is True
    assert is_sidon_modular([-1, 2], 5) == is_sidon_modular([4, 2], 5)


def test_sum_multiset_cardinality_property():
    rng = random.Random(11)
    from conftest import make_random_sidon_set

    for _ in range(40):
        s = make_random_sidon_set(rng, n_max=120, t_max=12)
        elements = s.elements
        t = len(elements)
        sums = {elements[i] + elements[j]
                for i in range(t) for j in range(i, t)}
        assert len(sums) == t * (t + 1) // 2


def test_modular_equivalence_above_twice_max():
    rng = random.Random(12)
    for _ in range(40):
        n = rng.randint(3, 60)
        t = rng.randint(1, 8)
        elements = sorted(rng.sample(range(1, n + 1), min(t, n)))
        modulus = 2 * max(elements) + rng.randint(1, 10)
        assert (is_sidon(elements, n)
                == is_sidon_modular(elements, modulus))


def test_downward_closure():
    rng = random.Random(13)
    base = [1, 2, 5, 11, 31, 36, 38]                # Sidon in [1, 38]
    assert is_sidon(base, 38)
    for _ in range(30):
        k = rng.randint(1, len(base))
        sub = sorted(rng.sample(base, k))
        assert is_sidon(sub, 38) is True


# ---------------------------------------------------------------------------
# Types.
# ---------------------------------------------------------------------------

def test_sidon_set_type():
    s = SidonSet((1, 2, 5, 7), 7)
    assert s.t == 4 and len(s) == 4 and list(s) == [1, 2, 5, 7]
    with pytest.raises(NotSidonError):
        SidonSet((1, 2, 3), 3)
    with pytest.raises(ValidationError):
        SidonSet((2, 1), 5)
    with pytest.raises(ValidationError):
        SidonSet((), 5)
    with pytest.raises(dataclasses.FrozenInstanceError):
        s.ambient_n = 9


def test_modular_sidon_set_type():
    m = ModularSidonSet((0, 1, 3), 7)
    assert m.t == 3
    with pytest.raises(ValidationError):
        ModularSidonSet((0, 1, 2), 4)


def test_solve_result_invariants():
    w = SidonSet((1, 2, 5, 7), 7)
    r = SolveResult(n=7, s_n=4, witness=w, nodes_explored=2, wall_time=0.0)
    assert r.witness.ambient_n == r.n
    with pytest.raises(InternalError):
        SolveResult(n=7, s_n=3, witness=w, nodes_explored=2, wall_time=0.0)
    with pytest.raises(InternalError):
        SolveResult(n=9, s_n=4, witness=w, nodes_explored=2, wall_time=0.0)
    inc = IncompleteResult(n=50, lower_bound=SidonSet((1, 2, 5, 7), 50),
                           n_completed=7, nodes_explored=10, wall_time=0.1,
                           reason="budget exhausted")
    assert inc.lower_bound.t == 4


def test_reflect():
    s = SidonSet((1, 2, 5, 7), 7)
    r = reflect(s)
    assert r.elements == (1, 3, 6, 7)
    assert reflect(r) == s
    assert sum(r.elements) == s.t * (s.ambient_n + 1) - sum(s.elements)


# ---------------------------------------------------------------------------
# Serialization.
# ---------------------------------------------------------------------------

def test_json_round_trip():
    s = SidonSet((1, 2, 5, 11, 22), 25)
    text = set_to_json(s)
    assert set_from_json(text) == s
    assert '"n": 25' in text
    with pytest.raises(ValidationError):
        set_from_json("not json")
    with pytest.raises(ValidationError):
        set_from_json('{"n": 5}')
    with pytest.raises(ValidationError):
        set_from_json('{"n": 3, "elements": [1, 2, 3]}')    # not Sidon


def test_csv_round_trip():
    s = SidonSet((1, 2, 5, 11, 22), 25)
    line = set_to_csv_line(s)
    assert line == "25,5,1 2 5 11 22"
    assert set_from_csv_line(line) == s
    sets = [SidonSet((1,), 1), SidonSet((1, 2, 5, 7), 7), s]
    assert read_sets_csv(write_sets_csv(sets)) == sets
    with pytest.raises(ValidationError):
        set_from_csv_line("25,5")
    with pytest.raises(ValidationError):
        set_from_csv_line("25,4,1 2 5 11 22")                # t mismatch


# ---------------------------------------------------------------------------
# Brute-force oracle.
# ---------------------------------------------------------------------------

def test_brute_force_examples():
    assert brute_force_max(3).s_n == 2
    r7 = brute_force_max(7)
    assert r7.s_n == 4 and r7.witness.elements == (1, 2, 5, 7)
    assert brute_force_max(1).s_n == 1


def test_brute_force_monotone_steps():
    prev = 0
    for n in range(1, 23):
        s_n = brute_force_max(n).s_n
        assert prev <= s_n <= prev + 1
        prev = s_n


def test_brute_force_guard():
    with pytest.raises(ValidationError, match="guard"):
        brute_force_max(BRUTE_FORCE_GUARD + 1)
    with pytest.raises(ValidationError):
        brute_force_max(13, guard=12)
    result = brute_force_max(13, guard=13)
    assert result.s_n == 5
    assert result.witness.elements == (1, 2, 4, 8, 13)
    with pytest.raises(ValidationError):
        brute_force_max(0)
