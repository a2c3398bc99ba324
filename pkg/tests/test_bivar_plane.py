import pytest

from nakajima_curves.modules.errors import SingularityError
from nakajima_curves.modules.funcfield import FFElem
from nakajima_curves.modules.polyrat import Poly
from nakajima_curves.modules.tower import ELLIPTIC, RATIONAL, ASExt
from nakajima_curves.reproduce.bivar import BivarPoly, eliminate_to_plane, resultant_in_v
from nakajima_curves.reproduce.plane import (
    PlaneMap,
    SingularityReport,
    check_plane_automorphism,
    fixed_places,
    map_group,
    plane_genus,
    plane_singularity_analysis,
    rational_places,
)

XY = ("X", "Y")


@pytest.fixture(scope="module")
def product_curve(gf16):
    # (X^4 + X)(Y^4 + Y) + 1 over GF(16), a plane octic of geometric genus 9
    return BivarPoly.parse(gf16, "X^4*Y^4 + X^4*Y + X*Y^4 + X*Y + 1", XY)


def _translation(ctx, a, b, name="t"):
    return PlaneMap.linear(name, ctx, [[1, 0, a], [0, 1, b], [0, 0, 1]])


def test_parse_and_shape(gf16):
    F = BivarPoly.parse(gf16, "mu*X^3*Z^2 + Z + X^2", ("X", "Z"))
    assert (F.deg_u, F.deg_v, F.total_degree) == (3, 2, 5)
    assert F.coeff(3, 2) == 2
    assert BivarPoly.parse(gf16, F.to_text()) == F
    assert F.swap().names == ("Z", "X")
    assert F.swap().coeff(2, 3) == 2
    with pytest.raises(ValueError):
        BivarPoly.parse(gf16, "W + 1")


def test_ring_operations(gf16):
    F = BivarPoly.parse(gf16, "X*Z + 1")
    G = BivarPoly.parse(gf16, "Z + X")
    prod = F * G
    assert prod.exact_div(G) == F
    for u0 in (0, 3, 7):
        for v0 in (1, 5):
            assert prod.evaluate(u0, v0) == gf16.mul(F.evaluate(u0, v0), G.evaluate(u0, v0))
    assert F.square() == F * F


def test_resultant(gf16):
    F = BivarPoly.parse(gf16, "Z + X")
    G = BivarPoly.parse(gf16, "Z^2 + X")
    assert resultant_in_v(F, G) == Poly.parse(gf16, "x^2 + x")


def test_normalized_removes_content(gf16):
    F = BivarPoly.parse(gf16, "mu*X*Z^2 + mu*X^2")
    N = F.normalized()
    assert N == BivarPoly.parse(gf16, "Z^2 + X")
    assert F.content() == Poly.x(gf16)


def test_elimination_of_a_rational_function(curve16):
    F = eliminate_to_plane(ASExt(ELLIPTIC, FFElem.x(curve16)))
    assert F.names == ("X", "Z")
    assert F == BivarPoly.parse(curve16.ctx, "Z^4 + Z^2 + X^2")


def test_elimination_needs_elliptic_base(gf16):
    from nakajima_curves.modules.polyrat import RatFun

    with pytest.raises(ValueError):
        eliminate_to_plane(ASExt(RATIONAL, RatFun.x(gf16)))


def test_elimination_vanishes_on_curve(curve16):
    x, y = FFElem.x(curve16), FFElem.y(curve16)
    e = y / (x + FFElem.one(curve16))
    F = eliminate_to_plane(ASExt(ELLIPTIC, e))
    ctx = curve16.ctx
    # every point (x0, y0) of E with a root z0 of z^2 + z = e(x0, y0) lies on F
    hits = 0
    for x0 in range(2, 16):
        for P in curve16.lift_x(x0):
            z0 = ctx.solve_quadratic(e.evaluate(P.x, P.y))
            if z0 is None:
                continue
            assert F.evaluate(x0, z0) == 0
            hits += 1
    assert hits > 0


def test_smooth_conic(gf16):
    F = BivarPoly.parse(gf16, "X^2 + Y", XY)
    sing = plane_singularity_analysis(F)
    assert sing.complete
    assert sing.points == []
    assert plane_genus(2, sing) == 0
    assert len(rational_places(F, gf16)) == 17


def test_fixed_places_on_conic(gf16):
    F = BivarPoly.parse(gf16, "X^2 + Y", XY)
    shift = _translation(gf16, 1, 1)
    assert check_plane_automorphism(F, shift)
    places = fixed_places(F, shift)
    assert [p.point for p in places] == [(0, 1, 0)]


def test_product_curve_singularities(product_curve):
    sing = plane_singularity_analysis(product_curve)
    assert sing.complete
    assert sorted(p.point for p in sing.points) == [(0, 1, 0), (1, 0, 0)]
    assert all(p.multiplicity == 4 and p.ordinary for p in sing.points)
    assert plane_genus(product_curve.total_degree, sing) == 9


def test_plane_genus_refuses_incomplete_scan():
    with pytest.raises(SingularityError):
        plane_genus(4, SingularityReport(4, complete=False, notes=["skipped"]))


def test_plane_automorphisms(gf16, product_curve):
    swap = PlaneMap.linear("swap", gf16, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    assert check_plane_automorphism(product_curve, swap)
    assert check_plane_automorphism(product_curve, _translation(gf16, 1, 0))
    assert not check_plane_automorphism(product_curve, _translation(gf16, 2, 0))
    scale = PlaneMap.linear("scale", gf16, [[2, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert not check_plane_automorphism(product_curve, scale)


def test_translation_group(gf16, product_curve):
    group = map_group(product_curve, [_translation(gf16, 1, 0, "a"), _translation(gf16, 0, 1, "b")])
    assert group.order == 4
    assert group.group_type == "abelian"
    assert group.central_involutions == 3
    assert group.contains(_translation(gf16, 1, 1))
    assert not group.contains(_translation(gf16, 2, 0))


def test_parse_plane_map(gf16):
    pm = PlaneMap.parse("psi", gf16, ("X + Z", "Y", "Z"))
    assert pm.degree == 1
    assert pm.matrix() == [[1, 0, 1], [0, 1, 0], [0, 0, 1]]
    with pytest.raises(ValueError):
        PlaneMap.parse("bad", gf16, ("X^2", "Y", "Z"))
