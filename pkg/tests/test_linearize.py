import itertools
import math

import numpy as np
import pytest

from lch import parse_front, resolve
from lch.dga import DGA, differential
from lch.linearize import (
    Augmentation,
    AugmentationError,
    LaurentPoly,
    LinearComplex,
    augmented_differential,
    conjugate,
    find_augmentations,
    homology,
    is_augmentation,
    linear_part,
    linearize,
    poincare_set,
)

from corpus_cache import CORPUS, augmentations, dga


def brute_dims(c: LinearComplex) -> dict[int, int]:
    """Homology dimensions by listing every vector of each degree."""
    out = {}
    for k in c.degrees():
        idx = c.in_degree(k)
        up = c.in_degree(k + 1)
        cycles = 0
        for bits in itertools.product((0, 1), repeat=len(idx)):
            v = np.zeros(len(c.basis), dtype=np.uint8)
            v[idx] = bits
            cycles += not c.apply(v).any()
        images = set()
        for bits in itertools.product((0, 1), repeat=len(up)):
            v = np.zeros(len(c.basis), dtype=np.uint8)
            v[up] = bits
            images.add(c.apply(v).tobytes())
        dim = round(math.log2(cycles)) - round(math.log2(len(images)))
        if dim:
            out[k] = dim
    return out


def test_5_2_unique_augmentation():
    assert [sorted(a.augmented) for a in augmentations("5_2")] == [["q1", "q2"]]


def test_figure8_two_augmentations():
    assert len(augmentations("figure8")) == 2


def test_unknot_empty_augmentation():
    assert [a.augmented for a in augmentations("unknot")] == [frozenset()]


def test_trefoil_five_augmentations():
    assert len(augmentations("trefoil")) == 5


def test_conjugate_q3():
    conj = conjugate(dga("5_2"), Augmentation(frozenset({"q1", "q2"})))
    assert conj.d("q3") == frozenset({("q1",), ("q2",), ("q1", "q2")})


def test_conjugate_empty_is_identity():
    d = dga("trefoil")
    assert dict(conjugate(d, Augmentation(frozenset())).boundary) == dict(d.boundary)


def test_conjugate_is_involution():
    d = dga("5_2")
    a = augmentations("5_2")[0]
    assert dict(conjugate(conjugate(d, a), a).boundary) == dict(d.boundary)


def test_5_2_linearized_table():
    lin = linearize(dga("5_2"), augmentations("5_2")[0])
    got = {g: lin.complex.d(g) for g in lin.complex.basis}
    assert got == {
        "q1": (), "q2": (), "q6": (), "q7": (),
        "q3": ("q1", "q2"), "q4": ("q1", "q2"), "q5": ("q3", "q4"),
        "q8": ("q1",), "q9": ("q1",),
    }


def test_5_2_homology_and_polynomial():
    lin = linearize(dga("5_2"), augmentations("5_2")[0])
    assert dict(lin.homology.reps) == {-2: (("q6",),), 1: (("q8", "q9"),), 2: (("q7",),)}
    assert poincare_set(dga("5_2")) == {LaurentPoly.from_dict({-2: 1, 1: 1, 2: 1})}
    assert str(lin.polynomial) == "t^-2 + t + t^2"


def test_unknot_polynomial():
    lin = linearize(dga("unknot"), augmentations("unknot")[0])
    assert not lin.complex.matrix.any()
    assert poincare_set(dga("unknot")) == {LaurentPoly.from_dict({1: 1})}


def test_figure8_polynomial():
    assert poincare_set(dga("figure8")) == {LaurentPoly.from_dict({-1: 1, 1: 2})}


@pytest.mark.parametrize("name", CORPUS)
def test_homology_matches_brute_force(name):
    for a in augmentations(name):
        lin = linearize(dga(name), a)
        assert not lin.complex.check()
        assert dict(lin.homology.dims) == brute_dims(lin.complex)


def test_zero_complex_homology():
    c = LinearComplex(("a", "b", "c"), {"a": 0, "b": 0, "c": 3}, np.zeros((3, 3), dtype=np.uint8))
    assert dict(homology(c).dims) == {0: 2, 3: 1}


def test_stabilization_pair_acyclic():
    m = np.array([[0, 1], [0, 0]], dtype=np.uint8)
    c = LinearComplex(("b", "a"), {"a": 1, "b": 0}, m)
    assert dict(homology(c).dims) == {}


def test_rejects_non_augmentation():
    d = dga("5_2")
    bad = Augmentation(frozenset({"q1"}))
    assert is_augmentation(d, bad) is not None
    with pytest.raises(AugmentationError):
        augmented_differential(d, bad)
    with pytest.raises(AugmentationError):
        conjugate(d, Augmentation(frozenset({"q3"})))


def test_linear_part_needs_no_constants():
    with pytest.raises(AugmentationError):
        linear_part(dga("5_2"))


def test_rotation_graded_mod():
    r = resolve(parse_front("L1 X1 X1 X1 R1"))
    assert r.rot != 0
    d = differential(r)
    assert d.modulus == 2 * abs(r.rot)
    for a in find_augmentations(d):
        assert linearize(d, a).polynomial.modulus == d.modulus


def test_laurent_mirror():
    p = LaurentPoly.from_dict({-2: 1, 1: 1, 2: 1})
    assert p.mirror() == LaurentPoly.from_dict({2: 1, -1: 1, -2: 1})
    assert p.to_json() == {"-2": 1, "1": 1, "2": 1}


def test_dga_empty_augmentation_on_zero_differential():
    d = DGA(("a",), {"a": 0}, {"a": frozenset()})
    assert dict(conjugate(d, Augmentation(frozenset())).boundary) == {"a": frozenset()}
