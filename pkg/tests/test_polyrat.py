import random

import pytest

from nakajima_curves.modules.errors import ZeroDivisionAlgebraError
from nakajima_curves.modules.polyrat import Poly, RatFun, ratfun_sqrt_test


def test_parse_and_text(gf16):
    p = Poly.parse(gf16, "x^4 + x + 1")
    assert p.coeffs == (1, 1, 0, 0, 1)
    assert Poly.parse(gf16, p.to_text()) == p
    assert Poly.parse(gf16, "mu^3*x^2 + mu").coeffs == (2, 0, 8)
    with pytest.raises(ValueError):
        Poly.parse(gf16, "y + 1")


def test_divmod_reconstructs(gf16):
    rng = random.Random(1)
    for _ in range(20):
        a = Poly.random_poly(gf16, 7, rng)
        b = Poly.random_poly(gf16, 3, rng)
        q, r = a.divmod(b)
        assert q * b + r == a
        assert r.deg < b.deg


def test_division_by_zero(gf16):
    with pytest.raises(ZeroDivisionAlgebraError):
        Poly.x(gf16).divmod(Poly.zero(gf16))


def test_gcd_and_xgcd(gf16):
    rng = random.Random(2)
    common = Poly.from_roots(gf16, [3, 5])
    a = common * Poly.from_roots(gf16, [7])
    b = common * Poly.from_roots(gf16, [9, 11])
    assert a.gcd(b) == common
    a = Poly.random_poly(gf16, 5, rng)
    b = Poly.random_poly(gf16, 4, rng)
    g, s, t = a.xgcd(b)
    assert s * a + t * b == g
    assert g.lc == 1


def test_roots_of_field_polynomial(gf16):
    x = Poly.x(gf16)
    assert (x ** 16 + x).roots() == list(range(16))
    assert Poly.parse(gf16, "x^2 + x + mu^3").roots() == []  # Tr(mu^3) = 1


def test_factors_of_a_product(gf16):
    p = Poly.from_roots(gf16, [1, 1, 2]) * Poly.parse(gf16, "x^2 + x + mu^3")
    facs = p.factors()
    assert (Poly.parse(gf16, "x + 1"), 2) in facs
    assert (Poly.parse(gf16, "x + mu"), 1) in facs
    assert (Poly.parse(gf16, "x^2 + x + mu^3"), 1) in facs


def test_derivative_and_sqrt(gf16):
    p = Poly.parse(gf16, "x^3 + mu*x^2 + x")
    assert p.derivative() == Poly.parse(gf16, "x^2 + 1")
    assert (p.square()).sqrt() == p
    assert p.sqrt() is None


def test_compose(gf16):
    p = Poly.parse(gf16, "x^2 + x")
    q = Poly.parse(gf16, "x + mu")
    for a in range(16):
        assert p.compose(q)(a) == p(q(a))


def test_ratfun_normalization(gf16):
    num = Poly.from_roots(gf16, [1, 2]).scale(3)
    den = Poly.from_roots(gf16, [2, 4]).scale(5)
    f = RatFun(num, den)
    assert f.den.lc == 1
    assert f.num.deg == 1 and f.den.deg == 1
    assert f.den == Poly.from_roots(gf16, [4])
    with pytest.raises(ZeroDivisionAlgebraError):
        RatFun(num, Poly.zero(gf16))


def test_ratfun_field_operations(gf16):
    x = RatFun.x(gf16)
    one = RatFun.one(gf16)
    f = (x * x + one) / (x + RatFun.const(gf16, 2))
    assert f * f.inverse() == one
    assert f + f == RatFun.zero(gf16)
    assert (f.square()).sqrt() == f
    assert ratfun_sqrt_test(x) is None


def test_valuation_and_degree(gf16):
    x = RatFun.x(gf16)
    p = Poly.parse(gf16, "x + 1")
    f = RatFun(Poly.from_roots(gf16, [1, 1, 3]), Poly.from_roots(gf16, [0]))
    assert f.valuation_at(p) == 2
    assert f.valuation_at(Poly.x(gf16)) == -1
    assert f.degree() == 2
    assert x.inverse().degree() == -1
    with pytest.raises(ValueError):
        RatFun.zero(gf16).valuation_at(p)
