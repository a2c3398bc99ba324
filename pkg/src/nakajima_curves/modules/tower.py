"""Artin-Schreier layers z^2 + z = e over K(x) or K(E): reduction, differents, genus and 2-rank."""
import logging
from dataclasses import asdict, dataclass, field

from nakajima_curves.modules.errors import InconsistentDataError, RamificationError
from nakajima_curves.modules.funcfield import FFElem, TorsionAction
from nakajima_curves.modules.gf2m import FieldCtx
from nakajima_curves.modules.places import Place, expand_element, poles, torsion_place, valuation
from nakajima_curves.modules.polyrat import Poly, RatFun
from nakajima_curves.modules.series import Laurent

logger = logging.getLogger(__name__)

RATIONAL = "rational"
ELLIPTIC = "elliptic"


@dataclass(frozen=True)
class RationalPlace:
    """Place of K(x) given by a monic irreducible p, or the place at infinity when p is None."""

    p: Poly | None = None

    @property
    def degree(self) -> int:
        return 1 if self.p is None else self.p.deg

    def is_infinite(self) -> bool:
        return self.p is None

    def __str__(self):
        return "x=inf" if self.p is None else f"({self.p.to_text()})"


@dataclass
class ASExt:
    base: str
    e: RatFun | FFElem

    def __post_init__(self):
        if self.base not in (RATIONAL, ELLIPTIC):
            raise ValueError(f"unknown base {self.base!r}")
        if self.base == RATIONAL and not isinstance(self.e, RatFun):
            raise TypeError("rational base needs e in K(x)")
        if self.base == ELLIPTIC and not isinstance(self.e, FFElem):
            raise TypeError("elliptic base needs e in K(E)")

    @property
    def base_invariants(self) -> tuple[int, int]:
        """(genus, 2-rank) of the base; E is ordinary by its shape."""
        return (0, 0) if self.base == RATIONAL else (1, 1)


@dataclass
class RamEntry:
    place: str
    weight: int
    reduced_order: int
    different: int


@dataclass
class RamData:
    base: str
    entries: list[RamEntry] = field(default_factory=list)
    genus: int | None = None
    prank: int | None = None

    @property
    def ramified_count(self) -> int:
        return sum(en.weight for en in self.entries)

    def differents(self) -> list[tuple[int, int]]:
        return [(en.weight, en.different) for en in self.entries]

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "places": [asdict(en) for en in self.entries],
            "genus": self.genus,
            "prank": self.prank,
        }


# --- reduction over the elliptic base ---


def _local_parameter(place: Place, curve) -> FFElem:
    pt = place.point
    if pt.is_infinity():
        return FFElem.x(curve) / FFElem.y(curve)
    if pt.x == 0:
        return FFElem.y(curve) + FFElem.const(curve, pt.y)
    return FFElem.x(curve) + FFElem.const(curve, pt.x)


def _reduce_series(s: Laurent, guard: int) -> tuple[int, list[tuple[int, int]]]:
    """Kill even pole terms; returns (odd pole order or 0, [(j, sqrt c)] used as sqrt(c) t^-j)."""
    ctx = s.ctx
    steps: list[tuple[int, int]] = []
    while not s.is_zero() and s.val < 0:
        if s.val % 2:
            return -s.val, steps
        if len(steps) > guard:
            raise RamificationError(f"reduction did not terminate after {guard} steps")
        j = -s.val // 2
        c = s.coeffs[0]
        r = ctx.sqrt(c)
        # w^2 + w with w = r t^-j, both exact up to the precision of s
        w2 = Laurent(ctx, -2 * j, [c] + [0] * (s.prec + 2 * j - 1))
        w1 = Laurent(ctx, -j, [r] + [0] * (s.prec + j - 1))
        s = s + w2 + w1
        steps.append((j, r))
    return 0, steps


def as_reduce_at(e: RatFun | FFElem, place: Place | RationalPlace) -> tuple[int, RatFun | FFElem]:
    """Reduced pole order m_P of e at place (0 when unramified) and the witness w of e + w^2 + w."""
    if isinstance(place, RationalPlace):
        return _rational_reduce_at(e, place)
    ctx = place.ctx
    curve = e.curve.over(ctx)
    if e.is_zero():
        return 0, FFElem.zero(curve)
    v = valuation(e, place)
    if v >= 0:
        return 0, FFElem.zero(curve)
    s = expand_element(e, place, -v + 1)
    m, steps = _reduce_series(s, -v)
    witness = FFElem.zero(curve)
    if steps:
        t_inv = _local_parameter(place, curve).inverse()
        for j, r in steps:
            witness = witness + (t_inv ** j).scale(r)
    logger.debug(f"Редукция в {place}: v={v}, m={m}, шагов {len(steps)}")
    return m, witness


def verify_reduction(e: FFElem, place: Place, m: int, witness: FFElem) -> bool:
    """Re-apply the witness and check the resulting pole order."""
    reduced = e.embed(place.ctx) + witness.square() + witness
    if reduced.is_zero():
        return m == 0
    v = valuation(reduced, place)
    return v == -m if m else v >= 0


# --- reduction over the rational base ---


def _residue_sqrt(c: Poly, p: Poly) -> Poly:
    """Square root in F_q[x]/(p): c^(2^(m deg p - 1))."""
    return c.frobenius_mod(c.ctx.m * p.deg - 1, p)


def _rational_reduce_at(e: RatFun, place: RationalPlace) -> tuple[int, RatFun]:
    ctx = e.ctx
    witness = RatFun.zero(ctx)
    guard = 1 + max(e.num.deg, e.den.deg)
    steps = 0
    while not e.is_zero():
        if place.is_infinite():
            v = -e.degree()
        else:
            v = e.valuation_at(place.p)
        if v >= 0:
            return 0, witness
        if v % 2:
            return -v, witness
        if steps > guard:
            raise RamificationError(f"reduction at {place} did not terminate")
        j = -v // 2
        if place.is_infinite():
            c = ctx.div(e.num.lc, e.den.lc)
            w = RatFun(Poly.monomial(ctx, ctx.sqrt(c), j), normalized=True)
        else:
            p = place.p
            num, den = e.num, e.den
            while (den % p).is_zero():
                den = den.exact_div(p)
            # leading coefficient of e * p^(2j) in the residue field
            _, inv, _ = den.xgcd(p)
            lead = (num * inv) % p
            s = _residue_sqrt(lead, p)
            w = RatFun(s, p ** j)
        e = e + w.square() + w
        witness = witness + w
        steps += 1
    return 0, witness


def rational_candidate_places(e: RatFun) -> list[RationalPlace]:
    places = [RationalPlace(None)]
    places.extend(RationalPlace(p) for p, _ in e.den.factors())
    return places


# --- ramification data and the two formulas ---


def ramification_data(
    X: ASExt,
    candidate_places: list | None = None,
    action: TorsionAction | None = None,
    require_irreducible: bool = True,
) -> RamData:
    """Per-place reduction, differents, and the resulting genus and 2-rank."""
    data = RamData(X.base)
    if candidate_places is None:
        if X.base == RATIONAL:
            candidate_places = rational_candidate_places(X.e)
        else:
            candidate_places = list(poles(X.e, action).entries)
            if action is not None:
                # poles are g-invariant as a set; close up under the torsion places
                known = set(candidate_places)
                for i in range(action.order):
                    tp = torsion_place(action, i)
                    if tp not in known:
                        candidate_places.append(tp)
                        known.add(tp)
    for place in candidate_places:
        m, _ = as_reduce_at(X.e, place)
        if not m:
            continue
        d = m + 1
        if d % 2:
            raise RamificationError(f"odd different exponent {d} at {place}")
        weight = place.degree if isinstance(place, RationalPlace) else place.weight
        data.entries.append(RamEntry(str(place), weight, m, d))
    if require_irreducible and not data.entries:
        raise RamificationError(f"no place with odd reduced pole order: irreducibility of z^2 + z = {X.e} not certified")
    base_genus, base_prank = X.base_invariants
    data.genus = genus_hurwitz(base_genus, 2, data.differents())
    data.prank = prank_ds(base_prank, 2, [1] * data.ramified_count)
    logger.info(
        f"Ветвление над базой {X.base}: {data.ramified_count} точек, род {data.genus}, 2-ранг {data.prank}"
    )
    return data


def genus_hurwitz(base_genus: int, group_order: int, d_list: list[tuple[int, int]]) -> int:
    """2g - 2 = |S|(2g' - 2) + sum of differents, d_list given as (place count, d_P)."""
    total = group_order * (2 * base_genus - 2) + sum(count * d for count, d in d_list)
    if total % 2:
        raise RamificationError(f"2g - 2 = {total} is odd")
    return total // 2 + 1


def prank_ds(base_prank: int, group_order: int, short_orbit_sizes: list[int]) -> int:
    """gamma - 1 = |S|(gamma' - 1) + sum(|S| - l_i)."""
    for size in short_orbit_sizes:
        if size >= group_order or group_order % size:
            raise ValueError(f"short orbit of size {size} for a group of order {group_order}")
    gamma = group_order * (base_prank - 1) + sum(group_order - size for size in short_orbit_sizes) + 1
    if gamma < 0:
        raise InconsistentDataError(f"negative 2-rank {gamma}")
    return gamma


def subfield_elements(ctx: FieldCtx, q: int) -> list[int]:
    """Nonzero elements of the subfield F_q of ctx."""
    if q < 2 or q & (q - 1) or (ctx.order - 1) % (q - 1):
        raise ValueError(f"F_{q} is not a subfield of {ctx.spec}")
    base = ctx.gen_pow((ctx.order - 1) // (q - 1))
    out, c = [], 1
    for _ in range(q - 1):
        out.append(c)
        c = ctx.mul(c, base)
    return out


def genus_elementary_abelian(e: RatFun, q: int) -> tuple[int, int]:
    """Genus and 2-rank of Y^q + Y = e over K(x), summed over the quadratic subfields W^2 + W = c e."""
    genus = prank = 0
    for c in subfield_elements(e.ctx, q):
        data = ramification_data(ASExt(RATIONAL, e.scale(c)))
        genus += data.genus
        prank += data.prank
    logger.info(f"Слой Y^{q} + Y = e: род {genus}, 2-ранг {prank}")
    return genus, prank


def nakajima_bound_holds(group_order: int, prank: int) -> bool:
    """|S| <= 4(gamma - 1) for 2-groups once gamma >= 2."""
    if prank < 2:
        return True
    return group_order <= 4 * (prank - 1)
