import pytest

from nakajima_curves.modules.autcheck import pullback_matches_group_law, setup_torsion
from nakajima_curves.modules.errors import InconsistentDataError, ZeroDivisionAlgebraError
from nakajima_curves.modules.funcfield import BaseMap, FFElem, TorsionAction, ff_square_test
from nakajima_curves.modules.places import (
    divisor_checks,
    infinite_place,
    principal_divisor,
    torsion_place,
    valuation,
)
from nakajima_curves.modules.polyrat import Poly, RatFun


@pytest.fixture(scope="module")
def action():
    return setup_torsion(8)


def _sample(curve):
    x, y = FFElem.x(curve), FFElem.y(curve)
    ctx = curve.ctx
    den = RatFun(Poly.one(ctx), Poly.parse(ctx, "x + 1"))
    return x.square() + y.scale(2) + FFElem(curve, den, RatFun.x(ctx))


def test_field_arithmetic(curve16):
    f = _sample(curve16)
    one = FFElem.one(curve16)
    assert f * f.inverse() == one
    assert f / f == one
    assert f.conjugate().conjugate() == f
    prod = f * f.conjugate()
    assert prod.in_kx()
    assert prod.A == f.norm()
    assert f ** 3 == f * f * f
    assert f ** -1 == f.inverse()


def test_curve_equation_holds(curve16):
    x, y = FFElem.x(curve16), FFElem.y(curve16)
    mu = FFElem.const(curve16, curve16.mu)
    assert y.square() + x * y == x * x * x + mu


def test_inverse_of_zero(curve16):
    with pytest.raises(ZeroDivisionAlgebraError):
        FFElem.zero(curve16).inverse()


def test_square_test(curve16):
    f = _sample(curve16)
    assert ff_square_test(f.square()) == f
    assert ff_square_test(FFElem.y(curve16)) is None
    assert ff_square_test(FFElem.x(curve16)) is None


def test_evaluate(curve16):
    P = next(pt for x0 in range(1, 16) for pt in curve16.lift_x(x0))
    y = FFElem.y(curve16)
    assert y.evaluate(P.x, P.y) == P.y
    assert (y * y).evaluate(P.x, P.y) == curve16.ctx.mul(P.y, P.y)


def test_divisor_of_x(curve16):
    x = FFElem.x(curve16)
    div = principal_divisor(x)
    assert div.degree() == 0
    assert sorted(div.entries.values()) == [-2, 2]
    assert valuation(x, infinite_place(curve16)) == -2
    T = curve16.two_torsion()
    assert div.entries[next(p for p in div.entries if p.point == T)] == 2
    assert not div.is_effective()
    assert div.is_even()


def test_divisor_of_y(curve16):
    y = FFElem.y(curve16)
    div = principal_divisor(y)
    assert div.degree() == 0
    assert valuation(y, infinite_place(curve16)) == -3
    assert div.zeros().degree() == 3


def test_torsion_action_basics(action):
    assert action.order == 16
    assert action.n == 8
    assert action.point(16).is_infinity()
    assert action.index_of(action.point(5)) == 5


def test_translations_compose(action):
    x = FFElem.x(action.curve)
    assert action.pullback(action.pullback(x, 1), 1) == action.pullback(x, 2)
    assert action.pullback(action.pullback(x, 3), -3) == x
    assert action.g(x, action.n) == x


def test_base_map_composition(action):
    y = FFElem.y(action.curve)
    a, b = BaseMap(3, 1), BaseMap(2, 0)
    ab = a.compose(b, action.order)
    # pullbacks compose contravariantly: (y o a) o b = y o (a o b)
    assert action.apply(action.apply(y, a), b) == action.apply(y, ab)


def test_pullback_agrees_with_group_law(action):
    assert pullback_matches_group_law(action, 4)


def test_torsion_action_rejects_wrong_order(action):
    with pytest.raises(InconsistentDataError):
        TorsionAction(action.curve, action.P0, 8)


def test_divisor_closed_forms(action):
    checks = divisor_checks(action)
    assert checks == {name: True for name in checks}


def test_torsion_place_labels(action):
    assert str(torsion_place(action, 0)) == "Yinf"
    assert str(torsion_place(action, -1)) == "[15]P0"
