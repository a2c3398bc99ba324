import itertools

import pytest

from nakajima_curves import config
from nakajima_curves.modules.ellcurve import CurveE
from nakajima_curves.modules.errors import TorsionSearchError
from nakajima_curves.modules.gf2m import get_field


def _brute_count(E: CurveE) -> int:
    ctx = E.ctx
    return 1 + sum(1 for x, y in itertools.product(ctx.elements(), repeat=2) if E.contains(x, y))


def _all_points(E: CurveE):
    pts = [E.infinity()]
    for x in E.ctx.elements():
        pts += E.lift_x(x)
    return pts


@pytest.mark.parametrize("mu", [1, 2, 7, 13])
def test_point_count_matches_brute_force(gf16, mu):
    E = CurveE(gf16, mu)
    assert E.point_count() == _brute_count(E)
    assert len(_all_points(E)) == E.point_count()


def test_count_over_extension(gf16):
    E = CurveE(gf16, 2)
    assert E.count_over_extension(1) == E.point_count()
    assert E.count_over_extension(2) == E.over(get_field(8)).point_count()


def test_singular_curve_rejected(gf16):
    with pytest.raises(ValueError):
        CurveE(gf16, 0)


def test_group_law(gf16):
    E = CurveE(gf16, 2)
    pts = _all_points(E)
    N = len(pts)
    O = E.infinity()
    for P in pts:
        assert P + O == P
        assert (P + (-P)).is_infinity()
        assert (P * N).is_infinity()
    sample = pts[:8]
    for P, Q, R in itertools.product(sample, repeat=3):
        assert (P + Q) + R == P + (Q + R)
        assert P + Q == Q + P


def test_two_torsion_point(gf16):
    E = CurveE(gf16, 2)
    T = E.two_torsion()
    assert E.contains(T.x, T.y)
    assert not T.is_infinity()
    assert (T + T).is_infinity()


@pytest.mark.parametrize("order", [8, 16])
def test_find_torsion_generator(gf16, order):
    E = CurveE(gf16, 2)
    P, ext = E.find_torsion_generator(order, seed=3)
    assert P.ctx is ext
    assert E.contains(P.x, P.y, ext)
    assert (P * order).is_infinity()
    assert not (P * (order // 2)).is_infinity()


def test_torsion_search_gives_up(gf16, monkeypatch):
    monkeypatch.setattr(config, "TORSION_MAX_EXTENSION", 1)
    with pytest.raises(TorsionSearchError) as exc:
        CurveE(gf16, 2).find_torsion_generator(1 << 10)
    assert 1 in exc.value.diagnostics


def test_torsion_order_validated(gf16):
    with pytest.raises(ValueError):
        CurveE(gf16, 2).find_torsion_generator(12)


@pytest.mark.parametrize("order", [16, 32])
def test_torsion_generator_without_seed(gf16, order):
    # for mu = gen^7 the small abscissae of GF(2^16) all have trace 0, i.e. lie on doubles
    E = CurveE(gf16, gf16.gen_pow(7))
    P, ext = E.find_torsion_generator(order)
    assert (P * order).is_infinity()
    assert not (P * (order // 2)).is_infinity()
    assert ext.m % gf16.m == 0


def test_torsion_generator_is_not_a_double(gf16):
    E = CurveE(gf16, gf16.gen_pow(7))
    P, ext = E.find_torsion_generator(16)
    count = E.count_over_extension(ext.m // gf16.m)
    if count % 32:
        # the 2-part is exactly 16, so a generator of it is never halvable
        assert ext.trace(P.x) == 1
