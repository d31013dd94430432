"""Shared helpers: a deterministic random-Sidon-set factory."""
from __future__ import annotations

import random

import pytest

from sidonlab.core import SidonSet


def make_random_sidon_set(rng: random.Random, n_max: int = 100,
                          t_max: int = 10) -> SidonSet:
    """A random Sidon set in [1, n] with n <= n_max and at most t_max elements.

    Grows the set greedily along a shuffled candidate order, so any prefix
    stays Sidon by construction; never returns an empty set.
    """
    n = rng.randint(5, n_max)
    target = rng.randint(1, t_max)
    elements: list[int] = []
    diffs: set[int] = set()
    pool = list(range(1, n + 1))
    rng.shuffle(pool)
    for c in pool:
        if len(elements) >= target:
            break
        new_diffs = [abs(c - e) for e in elements]
        if len(set(new_diffs)) != len(new_diffs):
            continue
        if any(d in diffs for d in new_diffs):
            continue
        diffs.update(new_diffs)
        elements.append(c)
    elements.sort()
    return SidonSet(tuple(elements), n)


@pytest.fixture
def sidon_factory():
    return make_random_sidon_set
