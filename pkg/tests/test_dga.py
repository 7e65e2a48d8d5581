import pytest

from lch import parse_front, resolve
from lch.dga import (
    DGA,
    DiskLimitExceeded,
    check_dga,
    differential,
    enumerate_disks,
    format_poly,
    gamma_filter,
    mod2,
    poly_mul,
)

from corpus_cache import CORPUS, dga, resolved


def words(*ws):
    return frozenset(tuple(w.split()) if w else () for w in ws)


EXAMPLE_5_2 = {
    "q1": words(),
    "q2": words(),
    "q3": words("", "q1 q2"),
    "q4": words("", "q2 q1"),
    "q5": words("q3 q1", "q1 q4"),
    "q6": words(),
    "q7": words(),
    "q8": words("", "q1", "q1 q6 q7"),
    "q9": words("", "q1", "q7 q6 q1"),
}


def test_5_2_differential_golden():
    d = dga("5_2")
    assert d.generators == tuple(f"q{i}" for i in range(1, 10))
    assert dict(d.boundary) == EXAMPLE_5_2


def test_5_2_format():
    assert format_poly(dga("5_2").d("q8")) == "1 + q1 + q1q6q7"


def test_unknot_two_disks_cancel():
    r = resolve(parse_front("L1 R1"))
    disks = enumerate_disks(r, 1)
    assert len(disks) == 2
    assert all(d.positive == ((0, d.corners[0][1]),) and not d.negative for d in disks)
    assert differential(r).d("q1") == frozenset()


def test_5_2_two_positive_corners():
    r = resolved("5_2")
    names = r.names
    found = [
        d for d in enumerate_disks(r, 2)
        if sorted(names[x] for x, _ in d.positive) == ["q5", "q6"]
    ]
    assert found
    assert all(names[x] in ("q1", "q2") for d in found for x, _ in d.negative)


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_is_a_dga(name):
    rep = check_dga(dga(name))
    assert rep.ok, rep


def test_degree_violation_reported():
    bad = DGA(("a",), {"a": 3}, {"a": words("a")})
    rep = check_dga(bad)
    assert rep.degree_violations == [("a", ("a",))]
    assert not rep.ok


def test_square_residue_reported():
    # d a = b, d b = 1 has d^2 a = 1
    bad = DGA(("a", "b"), {"a": 2, "b": 1}, {"a": words("b"), "b": words("")})
    assert check_dga(bad).square_residues == [("a", ())]


def test_leibniz():
    d = dga("5_2")
    # d(q3 q1) = (1 + q1 q2) q1
    assert d.d_word(("q3", "q1")) == words("q1", "q1 q2 q1")


def test_mod2_and_products():
    assert mod2([("a",), ("a",), ("b",)]) == words("b")
    assert poly_mul(words("", "a"), words("", "a")) == words("", "a a")


def test_gamma_filter():
    labels = {"q6^0": (0, 0), "p6^1": (0, 1), "x": (1, 0)}
    assert gamma_filter((), 2, 2, labels)
    assert not gamma_filter((), 0, 1, labels)
    assert not gamma_filter(("x",), 0, 1, labels)
    assert gamma_filter(("x",), 1, 0, labels)
    with pytest.raises(KeyError):
        gamma_filter(("nope",), 0, 0, labels)


def test_gamma_filter_copy_word():
    # the thin word of d q6^1: levels 1 -> 0 -> 1 -> 0 chained as (1,0)(0,1)(1,0)
    labels = {"q6^0": (1, 0), "p6^1": (0, 1)}
    assert gamma_filter(("q6^0", "p6^1", "q6^0"), 1, 0, labels)


def test_disk_limit():
    with pytest.raises(DiskLimitExceeded):
        differential(resolved("5_2"), max_disks=3)


def test_json_roundtrip_deterministic():
    assert dga("trefoil").dumps() == differential(resolved("trefoil")).dumps()
