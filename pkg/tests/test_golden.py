import pytest

from nakajima_curves.modules.errors import GoldenFileError
from nakajima_curves.modules.gf2m import get_field
from nakajima_curves.reproduce.bivar import BivarPoly
from nakajima_curves.reproduce.golden import (
    descend,
    frobenius_orbit,
    golden_ctx,
    load_golden,
    match_golden,
    primitive_exponents,
    read_golden,
)


def test_read_header():
    gf = read_golden("case_ib")
    assert gf.field_spec == "gf2^4:0x13"
    assert gf.names == ("X", "Y")
    assert gf.text
    assert golden_ctx("case_ib") is get_field(4)


def test_missing_file():
    with pytest.raises(GoldenFileError):
        read_golden("no_such_curve")


def test_load_with_exponent(gf16):
    base = load_golden("case_ib")
    relabelled = load_golden("case_ib", 7)
    assert base.names == ("X", "Y")
    assert [(a, b) for a, b, _ in base.terms()] == [(a, b) for a, b, _ in relabelled.terms()]
    for (_, _, c), (_, _, c7) in zip(base.terms(), relabelled.terms()):
        assert c7 == gf16.pow(c, 7)


def test_primitive_exponents_and_orbits(gf16):
    assert primitive_exponents(gf16) == [1, 2, 4, 7, 8, 11, 13, 14]
    assert frobenius_orbit(gf16, 1) == [1, 2, 4, 8]
    assert frobenius_orbit(gf16, 7) == [7, 14, 13, 11]


def test_self_match():
    printed = load_golden("case_ib")
    match = match_golden(printed, "case_ib")
    assert match.matched
    assert match.exponent == 1
    assert match.diff == []


def test_relabelled_match():
    match = match_golden(load_golden("case_ib", 7), "case_ib")
    assert match.matched
    assert match.exponent is not None


def test_match_ignores_variable_names():
    printed = load_golden("case_ib").with_names(("U", "V"))
    assert match_golden(printed, "case_ib").matched


def test_mismatch_reports_diff(gf16):
    match = match_golden(BivarPoly.parse(gf16, "Z + X"), "case_ib")
    assert not match.matched
    assert match.diff
    assert match.to_json()["matched"] is False


def test_descend(gf16):
    gf256 = get_field(8)
    F = BivarPoly.parse(gf16, "mu*X*Z + Z^2 + mu^3")
    up = F.embed(gf256)
    assert descend(up, gf16) == F
    outside = BivarPoly.parse(gf256, "mu*X + Z")
    assert descend(outside, gf16) is None
    assert not match_golden(outside, "case_ib").matched
