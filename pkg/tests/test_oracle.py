import random

import pytest

from lch.disks import enumerate_disks
from lch.oracle import brute_force_disks, random_front

from corpus_cache import SEED, oracle_mismatches, resolved


@pytest.mark.parametrize("name", ["unknot", "trefoil", "5_2"])
def test_sweep_matches_brute_force_on_corpus(name):
    plat = resolved(name).plat
    assert enumerate_disks(plat, 1) == brute_force_disks(plat, 1, ordered=True)


def test_sweep_matches_brute_force_on_random_fronts():
    assert oracle_mismatches(SEED) == ()


def test_unordered_oracle_agrees_on_small_fronts():
    for name in ("unknot", "trefoil"):
        plat = resolved(name).plat
        assert brute_force_disks(plat, 1) == brute_force_disks(plat, 1, ordered=True)


def test_random_fronts_are_reproducible():
    a = [random_front(random.Random(SEED)).to_text() for _ in range(2)]
    assert a[0] == a[1]
