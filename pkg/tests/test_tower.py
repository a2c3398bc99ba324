import pytest

from nakajima_curves.modules.errors import InconsistentDataError, RamificationError
from nakajima_curves.modules.places import torsion_place
from nakajima_curves.modules.polyrat import Poly, RatFun
from nakajima_curves.modules.tower import (
    ELLIPTIC,
    RATIONAL,
    ASExt,
    RationalPlace,
    as_reduce_at,
    genus_elementary_abelian,
    genus_hurwitz,
    nakajima_bound_holds,
    prank_ds,
    ramification_data,
    subfield_elements,
    verify_reduction,
)


def _rat(ctx, text: str) -> RatFun:
    return RatFun(Poly.parse(ctx, text))


@pytest.mark.parametrize(
    "text, genus, prank",
    [
        ("x", 0, 0),
        ("x^3", 1, 0),
        ("x^2", 0, 0),
        ("x^5 + x^2", 2, 0),
    ],
)
def test_polynomial_layers(gf16, text, genus, prank):
    data = ramification_data(ASExt(RATIONAL, _rat(gf16, text)))
    assert (data.genus, data.prank) == (genus, prank)


def test_layer_with_finite_pole(gf16):
    x = RatFun.x(gf16)
    data = ramification_data(ASExt(RATIONAL, x.inverse() + x))
    assert data.ramified_count == 2
    assert (data.genus, data.prank) == (1, 1)


def test_even_pole_is_reduced(gf16):
    m, w = as_reduce_at(_rat(gf16, "x^2"), RationalPlace(None))
    assert m == 1
    assert w == RatFun.x(gf16)


def test_trivial_layer_rejected(gf16):
    with pytest.raises(RamificationError):
        ramification_data(ASExt(RATIONAL, _rat(gf16, "x^2 + x")))


def test_base_type_checked(gf16):
    with pytest.raises(TypeError):
        ASExt(ELLIPTIC, RatFun.x(gf16))
    with pytest.raises(ValueError):
        ASExt("hyperbolic", RatFun.x(gf16))


def test_hurwitz_and_deuring_shafarevich():
    assert genus_hurwitz(1, 2, [(8, 2)]) == 9
    assert genus_hurwitz(0, 2, [(1, 4)]) == 1
    assert prank_ds(1, 2, [1] * 8) == 9
    assert prank_ds(0, 4, [1, 2]) == 2
    with pytest.raises(RamificationError):
        genus_hurwitz(0, 2, [(1, 1)])
    with pytest.raises(ValueError):
        prank_ds(1, 2, [2])
    with pytest.raises(InconsistentDataError):
        prank_ds(0, 2, [])


def test_subfield_elements(gf16):
    gf4 = subfield_elements(gf16, 4)
    assert len(gf4) == 3
    for c in gf4:
        assert gf16.pow(c, 3) == 1
    with pytest.raises(ValueError):
        subfield_elements(gf16, 8)


def test_elementary_abelian_layers(gf16):
    assert genus_elementary_abelian(_rat(gf16, "x^3"), 4) == (3, 0)
    X = Poly.x(gf16)
    e = RatFun(Poly.one(gf16), X ** 4 + X)
    assert genus_elementary_abelian(e, 4) == (9, 9)


def test_nakajima_bound():
    assert nakajima_bound_holds(32, 9)
    assert not nakajima_bound_holds(64, 9)
    assert nakajima_bound_holds(128, 1)


def test_main_family_reduction(main_family):
    report, W = main_family
    place = torsion_place(W.action, -W.k)
    m, witness = as_reduce_at(W.e, place)
    assert m == 1
    assert verify_reduction(W.e, place, m, witness)
    data = ramification_data(ASExt(ELLIPTIC, W.e), action=W.action)
    assert data.genus == report["genus"]
    assert data.ramified_count == report["iota_fixed"]
