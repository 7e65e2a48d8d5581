import pytest

from lch.copies import SCHEMES, perturbation_data
from lch.dga import check_dga, format_poly
from lch.duality import DualityError, build_copies, extend_augmentation, split_linearized
from lch.linearize import Augmentation, AugmentationError, is_augmentation
from lch import parse_front, resolve

from corpus_cache import CORPUS, augmentations, copies, lengths, resolved


def test_5_2_critical_points():
    p = perturbation_data(resolved("5_2"))
    assert len(p.maxima) == 2 and len(p.minima) == 2
    # minima sit on the right-cusp loops
    loops = {e for e, ev in enumerate(resolved("5_2").plat.events) if ev.kind == "death"}
    assert {ev for _s, ev in p.minima} == loops


def test_unknot_critical_points():
    p = perturbation_data(resolved("unknot"))
    assert len(p.maxima) == 1 and len(p.minima) == 1


@pytest.mark.parametrize("name", CORPUS)
@pytest.mark.parametrize("scheme", SCHEMES)
def test_critical_points_alternate(name, scheme):
    assert perturbation_data(resolved(name), scheme).alternates()


def test_unknown_scheme():
    with pytest.raises(ValueError):
        perturbation_data(resolved("unknot"), "sideways")


def test_5_2_q6_thick_part():
    assert format_poly(copies("5_2").thick["q6^1"]) == "p5^1 + p7^1"


def test_5_2_q6_thin_part():
    assert ("q6^0", "p6^1", "q6^0") in copies("5_2").thin["q6^1"]


def test_5_2_length_two_golden():
    assert ("q6^1", "p9^1") in lengths("5_2").Phi_QP["p7^2"]


def test_generator_gradings():
    c = copies("5_2")
    g = c.dga.gradings
    knot = {x.id: x.grading for x in resolved("5_2").crossings}
    for i in range(1, 10):
        assert g[f"q{i}^1"] == knot[f"q{i}"]
        assert g[f"p{i}^1"] == -1 - knot[f"q{i}"]
    assert {g[x] for x in c.of_kind("c")} == {0}
    assert {g[x] for x in c.of_kind("d")} == {-1}


def test_unknot_circle_complex():
    c = copies("unknot")
    assert c.of_kind("c", 1) == ["c1^1"] and c.of_kind("d", 1) == ["d1^1"]
    # no words of length one in d c1^1 other than the p's: the flowlines cancel
    assert not [w for w in c.d("c1^1") if len(w) == 1 and w[0].startswith("d")]


def copy_cases():
    for name in CORPUS:
        for n in (2, 3):
            yield name, n


@pytest.mark.parametrize("name,n", list(copy_cases()))
def test_copy_algebra_is_a_dga(name, n):
    c = copies(name, n)
    rep = check_dga(c.dga)
    assert not rep.square_residues
    assert not rep.degree_violations
    assert not c.gamma_violations


def test_extended_augmentation():
    c = copies("5_2")
    ext = extend_augmentation(c, augmentations("5_2")[0])
    assert ext.augmented == {"q1^0", "q2^0"}
    assert is_augmentation(c.dga, ext) is None


def test_empty_augmentation_of_unknot_copy():
    c = copies("unknot")
    assert is_augmentation(c.dga, extend_augmentation(c, augmentations("unknot")[0])) is None


def test_level_one_augmentation_rejected():
    with pytest.raises(AugmentationError):
        split_linearized(copies("5_2"), Augmentation(frozenset({"q1^0", "q2^0", "q1^1"})))


def test_copy_limit():
    from lch.disks import DiskLimitExceeded

    with pytest.raises(DiskLimitExceeded):
        build_copies(resolve(parse_front("L1 L1 X2 X2 X2 R1 R1")), 2, max_disks=5)


def test_duality_error_carries_witness():
    e = DualityError("boom", ("q1^1", ()))
    assert e.witness == ("q1^1", ())
