import random

import pytest

from lch import FrontError, classical_invariants, maslov_potential, parse_front, resolve
from lch.oracle import random_front

from corpus_cache import front, resolved


def test_parse_unknot():
    f = parse_front("L1 R1")
    assert f.events == (("L", 1), ("R", 1))
    assert f.n_crossings == 0
    assert f.n_right_cusps == 1


def test_parse_trefoil_is_a_knot():
    f = parse_front("L1 L1 X2 X2 X2 R1 R1")
    assert f.n_crossings == 3
    assert f.to_text() == "L1 L1 X2 X2 X2 R1 R1"


def test_parse_comments_and_whitespace():
    assert parse_front("L1  # left\n R1\n") == parse_front("L1 R1")


@pytest.mark.parametrize(
    "text",
    ["L1 X1", "", "L1 R2", "X1", "L1 Q1 R1", "L1 R1 L1 R1", "L1 L1 X2 X2 R1 R1"],
)
def test_parse_rejects(text):
    with pytest.raises(FrontError):
        parse_front(text)


def test_invariants_unknot_and_trefoil():
    ci = classical_invariants(parse_front("L1 R1"))
    assert (ci.tb, ci.rot) == (-1, 0)
    ci = classical_invariants(front("trefoil"))
    assert (ci.tb, ci.rot) == (1, 0)


def test_corpus_invariants():
    assert (resolved("5_2").tb, resolved("5_2").rot) == (1, 0)
    assert (resolved("figure8").tb, resolved("figure8").rot) == (-3, 0)
    for name in ("5_2_r2", "5_2_swap"):
        assert (resolved(name).tb, resolved(name).rot) == (1, 0)


def test_stabilization_changes_rotation():
    ci = classical_invariants(parse_front("L1 X1 R1"))
    assert abs(ci.rot) == 1
    assert ci.tb == -2


def test_tb_plus_rot_is_odd():
    rng = random.Random(7)
    for _ in range(30):
        ci = classical_invariants(random_front(rng))
        assert (ci.tb + ci.rot) % 2 == 1


def test_unknot_potential():
    mu = maslov_potential(parse_front("L1 R1"))
    assert sorted(mu.potential) == [0, 1]


def test_shifted_potential_same_gradings():
    f = front("5_2")
    mu = maslov_potential(f)
    a = [c.grading for c in resolve(f, mu).crossings]
    b = [c.grading for c in resolve(f, mu.shifted(1)).crossings]
    assert a == b


def test_5_2_gradings():
    r = resolved("5_2")
    got = {c.id: c.grading for c in r.crossings}
    assert got == {"q1": 0, "q2": 0, "q3": 1, "q4": 1, "q5": 2, "q6": -2, "q7": 2, "q8": 1, "q9": 1}
    assert [c.source for c in r.crossings].count("cusp") == 2


def test_unknot_resolution():
    r = resolve(parse_front("L1 R1"))
    assert [(c.id, c.grading, c.source) for c in r.crossings] == [("q1", 1, "cusp")]


def test_resolved_json_deterministic():
    assert resolved("trefoil").dumps() == resolve(parse_front("L1 L1 X2 X2 X2 R1 R1")).dumps()
