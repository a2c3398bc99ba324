"""Places of E, local expansions, valuations and principal divisors."""
import logging
from dataclasses import dataclass, field

from nakajima_curves import config
from nakajima_curves.modules.ellcurve import CurveE, ECPoint
from nakajima_curves.modules.errors import (
    DivisorDegreeError,
    FieldTooLargeError,
    InconsistentDataError,
    PrecisionError,
)
from nakajima_curves.modules.funcfield import FFElem, TorsionAction, WittData, ff_square_test
from nakajima_curves.modules.gf2m import FieldCtx
from nakajima_curves.modules.polyrat import Poly
from nakajima_curves.modules.series import Laurent, eval_poly, power_sum_coeff

logger = logging.getLogger(__name__)

INFINITY_LABEL = "Yinf"


@dataclass(frozen=True, eq=False)
class Place:
    """A point of E over ctx standing for its whole Galois orbit (of size `weight`) over the base field."""

    point: ECPoint
    weight: int = 1
    label: str | None = None

    @property
    def ctx(self) -> FieldCtx:
        return self.point.ctx

    def is_infinite(self) -> bool:
        return self.point.is_infinity()

    def _key(self):
        return (self.point.ctx.m, self.point.x, self.point.y)

    def __eq__(self, other):
        return isinstance(other, Place) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def with_label(self, label: str) -> "Place":
        return Place(self.point, self.weight, label)

    def __str__(self):
        if self.label:
            return self.label
        if self.is_infinite():
            return INFINITY_LABEL
        return repr(self.point)


def infinite_place(curve: CurveE) -> Place:
    return Place(curve.infinity(), 1, INFINITY_LABEL)


@dataclass(frozen=True)
class LocalExpansion:
    place: Place
    parameter: str
    series_x: Laurent
    series_y: Laurent


_expansion_cache: dict[tuple, LocalExpansion] = {}


def local_expand(place: Place, prec: int) -> LocalExpansion:
    """x and y as Laurent series in a local parameter at `place`, relative precision prec."""
    if prec < 1:
        raise ValueError(f"precision must be positive, got {prec}")
    if prec > config.VALUATION_MAX_PRECISION:
        raise PrecisionError(f"precision {prec} exceeds {config.VALUATION_MAX_PRECISION}")
    key = (place, prec)
    got = _expansion_cache.get(key)
    if got is not None:
        return got
    P = place.point
    ctx = P.ctx
    nu, mu, _ = P.curve.coeffs_in(ctx)
    if P.is_infinity():
        exp = _expand_at_infinity(place, ctx, nu, mu, prec)
    elif P.x == 0:
        exp = _expand_at_two_torsion(place, ctx, nu, P.y, prec)
    else:
        exp = _expand_generic(place, ctx, nu, mu, P.x, P.y, prec)
    _expansion_cache[key] = exp
    return exp


def _expand_generic(place, ctx, nu, mu, x0, y0, prec) -> LocalExpansion:
    # t = x - x0; y = sum s_j t^j with s_j = (c_j + s_(j-1) + (y^2)_j) / x0
    f = Poly(ctx, (mu, 0, nu, 1)).compose(Poly(ctx, (x0, 1)))
    inv_x0 = ctx.inv(x0)
    s = [y0]
    for j in range(1, prec):
        v = f.coeff(j) ^ s[j - 1] ^ power_sum_coeff(s, 2, j, ctx)
        s.append(ctx.mul(v, inv_x0))
    return LocalExpansion(
        place,
        "x + x0",
        Laurent(ctx, 0, [x0, 1] + [0] * (prec - 2)) if prec > 1 else Laurent(ctx, 0, [x0]),
        Laurent(ctx, 0, s),
    )


def _expand_at_two_torsion(place, ctx, nu, y0, prec) -> LocalExpansion:
    # t = y + sqrt(mu); t^2 + x(y0 + t) + x^3 + nu x^2 = 0
    inv_y0 = ctx.inv(y0)
    xs = [0]
    for j in range(1, prec + 2):
        v = xs[j - 1] ^ power_sum_coeff(xs, 3, j, ctx) ^ ctx.mul(nu, power_sum_coeff(xs, 2, j, ctx))
        if j == 2:
            v ^= 1
        xs.append(ctx.mul(v, inv_y0))
    series_x = Laurent(ctx, 0, xs)
    return LocalExpansion(
        place,
        "y + sqrt(mu)",
        series_x.truncate(series_x.val + prec),
        Laurent(ctx, 0, [y0, 1] + [0] * max(prec - 2, 0)),
    )


def _expand_at_infinity(place, ctx, nu, mu, prec) -> LocalExpansion:
    # t = x/y, w = 1/y: w = t^3 + t w + nu t^2 w + mu w^3
    size = prec + 4
    w = [0] * size
    for j in range(1, size):
        v = w[j - 1]
        if j >= 2:
            v ^= ctx.mul(nu, w[j - 2])
        v ^= ctx.mul(mu, power_sum_coeff(w, 3, j, ctx))
        if j == 3:
            v ^= 1
        w[j] = v
    ws = Laurent(ctx, 0, w)
    winv = ws.inverse()
    t = Laurent(ctx, 1, [1] + [0] * (size - 1))
    return LocalExpansion(place, "x/y", (t * winv).truncate(-2 + prec), winv.truncate(-3 + prec))


# --- valuations ---


def _ord_at(p: Poly, x0: int) -> int:
    """Order of vanishing of p at x0 (p over the field of x0)."""
    if p.is_zero():
        raise ValueError("order of the zero polynomial")
    lin = Poly(p.ctx, (x0, 1))
    k = 0
    while True:
        q, r = p.divmod(lin)
        if not r.is_zero():
            return k
        p = q
        k += 1


def _norm_poly(P: Poly, Q: Poly, curve: CurveE) -> Poly:
    ctx = P.ctx
    nu, mu, _ = curve.coeffs_in(ctx)
    f = Poly(ctx, (mu, 0, nu, 1))
    return P.square() + P * Q * Poly.x(ctx) + Q.square() * f


def _embedded_parts(f: FFElem, ctx: FieldCtx) -> tuple[Poly, Poly, Poly]:
    P, Q, D = f.common_denominator()
    if ctx is not f.ctx:
        P, Q, D = P.embed(ctx), Q.embed(ctx), D.embed(ctx)
    return P, Q, D


def _infinite_valuation(P: Poly, Q: Poly, D: Poly) -> int:
    # v(x) = -2 and v(y) = -3 have different parity, so the two parts never cancel
    cands = []
    if not P.is_zero():
        cands.append(-2 * P.deg)
    if not Q.is_zero():
        cands.append(-2 * Q.deg - 3)
    return min(cands) + 2 * D.deg


def _eval_pair(P: Poly, Q: Poly, exp: LocalExpansion, prec: int) -> Laurent:
    s = eval_poly(P, exp.series_x, prec)
    if Q.is_zero():
        return s
    return s + eval_poly(Q, exp.series_x, prec) * exp.series_y


def _pair_valuation(P: Poly, Q: Poly, place: Place) -> int:
    """v_place(P + Q*y) for polynomials over the place's field, by adaptive expansion."""
    pt = place.point
    ram = 2 if pt.x == 0 else 1
    # (P+Qy)(P+Q(x+y)) = norm and both factors are regular here
    bound = ram * _ord_at(_norm_poly(P, Q, pt.curve), pt.x)
    if bound == 0:
        return 0
    prec = config.VALUATION_START_PRECISION
    while True:
        prec = min(prec, bound + 1)
        exp = local_expand(place, prec)
        s = _eval_pair(P, Q, exp, prec)
        if not s.is_zero():
            return s.val
        if prec > bound:
            raise InconsistentDataError(f"P + Q*y vanishes beyond its certified bound {bound} at {place}")
        logger.debug(f"Повышение точности до {2 * prec} в {place}")
        prec *= 2


def valuation(f: FFElem, place: Place) -> int:
    """Exact order of f at place."""
    if f.is_zero():
        raise ValueError("valuation of zero")
    P, Q, D = _embedded_parts(f, place.ctx)
    if place.is_infinite():
        return _infinite_valuation(P, Q, D)
    x0 = place.point.x
    ram = 2 if x0 == 0 else 1
    return _pair_valuation(P, Q, place) - ram * _ord_at(D, x0)


def expand_element(f: FFElem, place: Place, rel_prec: int) -> Laurent:
    """Laurent expansion of f at place with relative precision rel_prec."""
    v = valuation(f, place)
    P, Q, D = _embedded_parts(f, place.ctx)
    if place.is_infinite():
        exp = local_expand(place, rel_prec)
        num = _eval_pair(P, Q, exp, rel_prec)
        return num / eval_poly(D, exp.series_x, rel_prec)
    ram = 2 if place.point.x == 0 else 1
    v_den = ram * _ord_at(D, place.point.x)
    v_num = v + v_den
    prec = max(v_num, v_den) + rel_prec
    exp = local_expand(place, prec)
    num = _eval_pair(P, Q, exp, v_num + rel_prec)
    den = eval_poly(D, exp.series_x, v_den + rel_prec)
    return num.truncate(v_num + rel_prec) / den.truncate(v_den + rel_prec)


# --- divisors ---


@dataclass
class Divisor:
    entries: dict[Place, int] = field(default_factory=dict)

    def add(self, place: Place, mult: int):
        total = self.entries.get(place, 0) + mult
        if total:
            self.entries[place] = total
        else:
            self.entries.pop(place, None)

    def degree(self) -> int:
        return sum(m * p.weight for p, m in self.entries.items())

    def is_effective(self) -> bool:
        return all(m > 0 for m in self.entries.values())

    def zeros(self) -> "Divisor":
        return Divisor({p: m for p, m in self.entries.items() if m > 0})

    def poles(self) -> "Divisor":
        return Divisor({p: m for p, m in self.entries.items() if m < 0})

    def by_label(self) -> dict[str, int]:
        return {str(p): m for p, m in self.entries.items()}

    def to_entries(self) -> list[tuple[str, int]]:
        return sorted(self.by_label().items())

    def is_even(self) -> bool:
        return all(m % 2 == 0 for m in self.entries.values())

    def __str__(self):
        if not self.entries:
            return "0"
        return " + ".join(f"{m}*({name})" for name, m in self.to_entries())


def _places_above(curve: CurveE, p: Poly, base: FieldCtx) -> list[Place]:
    """Representatives of the places of E over the roots of an irreducible p over base."""
    d = p.deg
    if d > config.CANDIDATE_MAX_DEGREE:
        raise FieldTooLargeError(f"irreducible factor of degree {d} exceeds {config.CANDIDATE_MAX_DEGREE}")
    ext = base.extension(d) if d > 1 else base
    roots = p.embed(ext).roots() if d > 1 else p.roots()
    x0 = roots[0]
    pts = curve.lift_x(x0, ext)
    if pts:
        return [Place(pt, d) for pt in pts]
    ext2 = base.extension(2 * d)
    x0 = p.embed(ext2).roots()[0]
    return [Place(curve.lift_x(x0, ext2)[0], 2 * d)]


def candidate_places(f: FFElem) -> list[Place]:
    """Every zero and pole of f: places above the roots of the norm and the denominator, and Y_inf."""
    P, Q, D = f.common_denominator()
    curve = f.curve
    places = [infinite_place(curve)]
    seen: set[Poly] = set()
    for poly in (_norm_poly(P, Q, curve), D):
        for p, _ in poly.factors():
            if p in seen:
                continue
            seen.add(p)
            places.extend(_places_above(curve, p, f.ctx))
    return places


def principal_divisor(f: FFElem, places: list[Place] | None = None, action: TorsionAction | None = None) -> Divisor:
    """div(f); the degree must vanish, otherwise places are missing."""
    if f.is_zero():
        raise ValueError("divisor of zero")
    if places is None:
        places = candidate_places(f)
    div = Divisor()
    for place in places:
        v = valuation(f, place)
        if v:
            div.add(label_place(place, action) if action else place, v)
    deficit = div.degree()
    if deficit:
        raise DivisorDegreeError(f"divisor of {f} has degree {deficit}", deficit)
    logger.debug(f"div = {div}")
    return div


def label_place(place: Place, action: TorsionAction) -> Place:
    if place.label:
        return place
    pt = place.point
    if pt.is_infinity():
        return place.with_label(INFINITY_LABEL)
    if place.weight == 1:
        for i, Q in enumerate(action.multiples):
            if not Q.is_infinity() and pt.ctx.m % Q.ctx.m == 0 and Q.embed(pt.ctx) == pt:
                return place.with_label(f"[{i}]P0")
    return place


def torsion_place(action: TorsionAction, i: int) -> Place:
    i %= action.order
    if i == 0:
        return infinite_place(action.curve)
    return Place(action.multiples[i], 1, f"[{i}]P0")


def expected_divisor(action: TorsionAction, terms: dict[int, int]) -> dict[str, int]:
    """{i: m} over multiples of P0 written with the labels used by principal_divisor."""
    out: dict[str, int] = {}
    for i, m in terms.items():
        name = str(torsion_place(action, i))
        out[name] = out.get(name, 0) + m
    return {k: v for k, v in out.items() if v}


def even_multiplicity_certificate(delta: FFElem) -> bool:
    """x*delta a square forces every multiplicity of div(delta) to be even, as div(x) = 2(T) - 2Y_inf."""
    return ff_square_test(FFElem.x(delta.curve) * delta) is not None


def poles(f: FFElem, action: TorsionAction | None = None) -> Divisor:
    """Pole divisor of f, scanning only the denominator and Y_inf."""
    _, _, D = f.common_denominator()
    curve = f.curve
    places = [infinite_place(curve)]
    for p, _ in D.factors():
        places.extend(_places_above(curve, p, f.ctx))
    div = Divisor()
    for place in places:
        v = valuation(f, place)
        if v < 0:
            div.add(label_place(place, action) if action else place, v)
    return div


def pole_lemma_checks(W: WittData) -> dict[str, bool]:
    """Pole orders of e_k: confined to the torsion places, regular at Y_inf, bounded at odd multiples."""
    act = W.action
    n, order, k = act.n, act.order, W.k
    e = W.e
    pole_div = poles(e, act)
    torsion_labels = {str(torsion_place(act, i)) for i in range(order)}
    checks = {
        "poles_in_torsion": all(str(p) in torsion_labels for p in pole_div.entries),
        "regular_at_infinity": valuation(e, infinite_place(act.curve)) >= 0,
        "odd_multiples_at_least_minus_4": all(
            valuation(e, torsion_place(act, i)) >= -4 for i in range(1, order, 2)
        ),
        "minus_k_at_least_minus_2": valuation(e, torsion_place(act, -k)) >= -2,
    }
    logger.info(f"Полюса e_{k}: {pole_div} (n={n})")
    return checks


def divisor_checks(action: TorsionAction) -> dict[str, bool]:
    """Divisors of Tr_g(x), x + g(x) and x*g(x) + w1^2 against their closed forms."""
    n, order = action.n, action.order
    curve = action.curve
    x = FFElem.x(curve)
    gx = action.g(x)
    trace_x = action.trace_g(x)
    w1 = action.P0.x
    w1sq = FFElem.const(curve, action.ctx.sqr(w1))
    cases = {
        "div_trace_x": (
            trace_x,
            {**{2 * j + 1: 2 for j in range(n)}, **{2 * j: -2 for j in range(n)}},
        ),
        "div_x_plus_gx": (x + gx, {-1: 2, n - 1: 2, 0: -2, -2: -2}),
        "div_x_gx_plus_w1_squared": (x * gx + w1sq, {-1: 4, 0: -2, -2: -2}),
    }
    checks = {}
    for name, (func, terms) in cases.items():
        got = principal_divisor(func, action=action).by_label()
        want = expected_divisor(action, terms)
        checks[name] = got == want
        if got != want:
            logger.warning(f"{name}: получено {got}, ожидалось {want}")
    checks["x_times_trace_even"] = even_multiplicity_certificate(trace_x)
    return checks
