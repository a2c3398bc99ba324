"""Automorphisms (x, y, z) -> (sigma*(x), sigma*(y), z + t) of the tower z^2 + z = e_k over E."""
import logging
import random
from collections import Counter
from dataclasses import dataclass, field

from nakajima_curves import config
from nakajima_curves.modules.ellcurve import CurveE
from nakajima_curves.modules.errors import AlgebraError, DegenerateTraceError, GroupClosureError
from nakajima_curves.modules.funcfield import (
    BaseMap,
    FFElem,
    TorsionAction,
    WittData,
    identities_not_computed,
    witt_identities,
)
from nakajima_curves.modules.gf2m import FieldCtx, parse_field_spec
from nakajima_curves.modules.places import (
    divisor_checks,
    even_multiplicity_certificate,
    pole_lemma_checks,
    torsion_place,
    valuation,
)
from nakajima_curves.modules.tower import ELLIPTIC, ASExt, nakajima_bound_holds, ramification_data

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TowerAut:
    base: BaseMap
    shift: FFElem

    def __eq__(self, other):
        return isinstance(other, TowerAut) and self.base == other.base and self.shift == other.shift

    def __hash__(self):
        return hash((self.base, self.shift))

    def __repr__(self):
        return f"TowerAut(shift={self.base.shift}, flip={self.base.flip}, t={self.shift})"


def identity_aut(action: TorsionAction) -> TowerAut:
    return TowerAut(BaseMap(0, 0), FFElem.zero(action.curve))


def aut_compose(a: TowerAut, b: TowerAut, action: TorsionAction) -> TowerAut:
    """Field map a followed by b: z -> z + t_b + sigma_b*(t_a)."""
    shift = b.shift + action.apply(a.shift, b.base)
    return TowerAut(a.base.compose(b.base, action.order), shift)


def aut_power(a: TowerAut, k: int, action: TorsionAction) -> TowerAut:
    result = identity_aut(action)
    for _ in range(k):
        result = aut_compose(result, a, action)
    return result


def is_automorphism(a: TowerAut, e: FFElem, action: TorsionAction) -> tuple[bool, FFElem]:
    """(ok, residual) with residual = sigma*(e) + e + t^2 + t."""
    residual = action.apply(e, a.base) + e + a.shift.square() + a.shift
    return residual.is_zero(), residual


@dataclass
class GroupDescriptor:
    order: int
    group_type: str
    element_orders: dict[int, int] = field(default_factory=dict)
    involutions: int = 0
    center_order: int = 0
    relations_verified: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "group_type": self.group_type,
            "element_orders": {str(k): v for k, v in sorted(self.element_orders.items())},
            "involutions": self.involutions,
            "center_order": self.center_order,
            "relations_verified": list(self.relations_verified),
        }


class _Closure:
    """Elements of <gens> with memoized products."""

    def __init__(self, gens: list[TowerAut], action: TorsionAction, bound: int):
        self.action = action
        self.identity = identity_aut(action)
        self._products: dict[tuple[int, int], TowerAut] = {}
        self.elements = [self.identity]
        self._index = {self.identity: 0}
        queue = [self.identity]
        while queue:
            g = queue.pop(0)
            for h in gens:
                prod = self.mul(g, h)
                if prod not in self._index:
                    self._index[prod] = len(self.elements)
                    self.elements.append(prod)
                    queue.append(prod)
                    if len(self.elements) > bound:
                        raise GroupClosureError(f"closure exceeds {bound} elements")

    def mul(self, a: TowerAut, b: TowerAut) -> TowerAut:
        key = (id(a), id(b))
        got = self._products.get(key)
        if got is None:
            got = aut_compose(a, b, self.action)
            self._products[key] = got
        return got

    def canonical(self, a: TowerAut) -> TowerAut:
        return self.elements[self._index[a]]

    def order_of(self, a: TowerAut) -> int:
        # 2-groups: square until the identity appears
        k, p = 1, a
        while p != self.identity:
            p = self.canonical(self.mul(p, p))
            k *= 2
            if k > len(self.elements):
                raise GroupClosureError(f"{a} has no 2-power order")
        return k

    def power(self, a: TowerAut, k: int) -> TowerAut:
        result = self.identity
        for _ in range(k):
            result = self.canonical(self.mul(result, a))
        return result


def classify_two_group(cl: _Closure, orders: dict[int, int], gens: list[TowerAut]) -> str:
    N = len(cl.elements)
    if N == 1:
        return "trivial"
    if any(o == N for o in orders.values()):
        return "cyclic"
    if all(cl.mul(a, b) == cl.mul(b, a) for a in gens for b in gens):
        return "abelian"
    r_idx = next((i for i, o in orders.items() if o == N // 2), None)
    if r_idx is None:
        return "other"
    r = cl.elements[r_idx]
    powers = [cl.identity]
    for _ in range(N // 2 - 1):
        powers.append(cl.canonical(cl.mul(powers[-1], r)))
    inside = set(powers)
    outside = [i for i, g in enumerate(cl.elements) if g not in inside]
    h_idx = min(outside, key=lambda i: orders[i])
    h = cl.elements[h_idx]
    h_inv = cl.power(h, orders[h_idx] - 1)
    conj = cl.canonical(cl.mul(cl.mul(h_inv, r), h))
    e = powers.index(conj)
    half = N // 2
    if e == 1:
        return "abelian"
    if e == half - 1:
        return "dihedral" if orders[h_idx] == 2 else "quaternion"
    if N >= 16 and e == N // 4 - 1:
        return "semidihedral"
    if N >= 16 and e == N // 4 + 1:
        return "modular"
    return "other"


def group_structure(gens: list[TowerAut], action: TorsionAction, bound: int | None = None) -> GroupDescriptor:
    """Close <gens> under composition and identify the 2-group."""
    bound = bound or config.GROUP_CLOSURE_FACTOR * action.n
    cl = _Closure(gens, action, bound)
    orders = {i: cl.order_of(g) for i, g in enumerate(cl.elements)}
    center = [
        g for g in cl.elements if all(cl.mul(g, h) == cl.mul(h, g) for h in gens)
    ]
    desc = GroupDescriptor(
        order=len(cl.elements),
        group_type=classify_two_group(cl, orders, gens),
        element_orders=dict(Counter(orders.values())),
        involutions=sum(1 for o in orders.values() if o == 2),
        center_order=len(center),
    )
    logger.info(
        f"Группа: порядок {desc.order}, тип {desc.group_type}, инволюций {desc.involutions}, центр {desc.center_order}"
    )
    return desc


def rho_psi(W: WittData) -> tuple[TowerAut, TowerAut]:
    """rho = (g, z + d) and psi = (phi, z + d)."""
    return TowerAut(BaseMap(2, 0), W.d), TowerAut(BaseMap(0, 1), W.d)


def dihedral_relations(
    rho: TowerAut, psi: TowerAut, action: TorsionAction, d_variant: str = "standard"
) -> dict[str, bool]:
    """Relations of <rho, psi>. With the alternative d, phi(d) = d + 1 and psi squares to iota,
    so (psi rho) is the involution and rho is conjugated to rho^(n - 1): a semidihedral group."""
    n = action.n
    ident = identity_aut(action)
    iota = TowerAut(BaseMap(0, 0), FFElem.one(action.curve))
    rho_n = aut_power(rho, n, action)
    rho_inv = aut_power(rho, 2 * n - 1, action)
    psi_rho = aut_compose(psi, rho, action)
    x = FFElem.x(action.curve)
    y = FFElem.y(action.curve)
    psi_sq = aut_compose(psi, psi, action)
    relations = {
        "rho^n = iota": rho_n == iota,
        "rho^2n = 1": aut_compose(rho_n, rho_n, action) == ident,
    }
    if d_variant == "standard":
        relations["psi^2 = 1"] = psi_sq == ident
    else:
        relations["psi^2 = iota"] = psi_sq == iota
    relations.update({
        "psi rho psi = rho^-1": aut_compose(psi_rho, psi, action) == rho_inv,
        "(psi rho)^2 = 1": aut_compose(psi_rho, psi_rho, action) == ident,
        "rho mod iota = g": action.apply(x, rho.base) == action.g(x) and action.apply(y, rho.base) == action.g(y),
        "psi mod iota = phi": action.apply(y, psi.base) == action.phi(y),
    })
    return relations


def find_good_k(action: TorsionAction, d_variant: str = "standard") -> tuple[int, dict[int, int | None]]:
    """Smallest odd k with v_([-k]P0)(e_k) = -2, plus the valuations seen on the way."""
    seen: dict[int, int | None] = {}
    if d_variant == "alternative":
        candidates = [action.n - 1, 2 * action.n - 1]
    else:
        candidates = list(range(1, action.order, 2))
    for k in candidates:
        try:
            W = WittData(action, k, d_variant)
        except DegenerateTraceError as e:
            logger.warning(f"k={k}: {e}")
            seen[k] = None
            continue
        v = valuation(W.e, torsion_place(action, -k))
        seen[k] = v
        if v == -2:
            logger.info(f"Выбрано k={k}")
            return k, seen
        logger.info(f"k={k} отклонено: v = {v}")
    raise AlgebraError(f"no odd k with a simple pole pair at [-k]P0; valuations {seen}")


def setup_torsion(n: int, field_spec: str | None = None, mu_exp: int = 1, seed: int | None = None) -> TorsionAction:
    """E: y^2 + xy = x^3 + mu over the base field with mu = gen^mu_exp, and a point of order 2n."""
    if n < 8 or n & (n - 1):
        raise ValueError(f"n must be a power of two >= 8, got {n}")
    base: FieldCtx = parse_field_spec(field_spec or config.DEFAULT_FIELD)
    E = CurveE(base, base.gen_pow(mu_exp))
    P0, ext = E.find_torsion_generator(2 * n, seed)
    return TorsionAction(E.over(ext), P0, 2 * n)


def random_even_multiplicity(action: TorsionAction, count: int, seed: int = 0) -> bool:
    """Random combinations of the g0^i(x) pass the square certificate."""
    rng = random.Random(seed)
    ctx = action.ctx
    xs = [action.images(i)[0] for i in range(action.order)]
    for _ in range(count):
        delta = FFElem.zero(action.curve)
        for xi in xs:
            c = ctx.random_element(rng)
            if c:
                delta = delta + xi.scale(c)
        if delta.is_zero():
            continue
        if not even_multiplicity_certificate(delta):
            return False
    return True


def pullback_matches_group_law(action: TorsionAction, samples: int, seed: int = 0) -> bool:
    """g0^i(x) at P equals x(P + [i]P0) on random affine points."""
    rng = random.Random(seed)
    ctx, curve = action.ctx, action.curve
    checked = 0
    while checked < samples:
        pts = curve.lift_x(ctx.random_nonzero(rng))
        if not pts:
            continue
        P = pts[0]
        for i in range(1, action.order):
            Q = P + action.point(i)
            xi = action.images(i)[0]
            if Q.is_infinity() or xi.A.den(P.x) == 0 or xi.B.den(P.x) == 0:
                continue
            if xi.evaluate(P.x, P.y) != Q.x:
                return False
        checked += 1
    return True


def verify_lemmas(action: TorsionAction, k: int, random_combinations: int = 200) -> dict[str, bool]:
    """Every identity and divisor statement behind the construction, as name -> bool."""
    W = WittData(action, k)
    claims: dict[str, bool] = {}
    claims.update(witt_identities(W))
    claims.update(divisor_checks(action))
    claims.update(pole_lemma_checks(W))
    claims["even_multiplicity_random"] = random_even_multiplicity(action, random_combinations)
    claims["pullback_matches_group_law"] = pullback_matches_group_law(action, config.SAMPLE_POINTS)
    failed = [name for name, ok in claims.items() if not ok]
    logger.info(f"Проверка лемм: {len(claims) - len(failed)} из {len(claims)} выполнено")
    return claims


def main_family_with_data(
    n: int,
    field_spec: str | None = None,
    k: int | str = "auto",
    d_variant: str = "standard",
    seed: int | None = None,
    mu_exp: int = 1,
    action: TorsionAction | None = None,
) -> tuple[dict, WittData]:
    """Torsion search, choice of k, e_k, ramification, genus, 2-rank and the group <rho, psi>."""
    action = action or setup_torsion(n, field_spec, mu_exp, seed)
    if k == "auto":
        k, _ = find_good_k(action, d_variant)
    W = WittData(action, int(k), d_variant)
    identities = witt_identities(W)
    ram = ramification_data(ASExt(ELLIPTIC, W.e), action=action)
    rho, psi = rho_psi(W)
    rho_ok, _ = is_automorphism(rho, W.e, action)
    psi_ok, _ = is_automorphism(psi, W.e, action)
    relations = dihedral_relations(rho, psi, action, d_variant)
    group = group_structure([rho, psi], action)
    group.relations_verified = [name for name, ok in relations.items() if ok]
    report = {
        "n": n,
        "k": W.k,
        "d_variant": d_variant,
        "field": action.ctx.spec,
        "P0": repr(action.P0),
        "e": repr(W.e),
        "genus": ram.genus,
        "prank": ram.prank,
        "group_order": group.order,
        "group_type": group.group_type,
        "involutions": group.involutions,
        "relations_verified": group.relations_verified,
        "iota_fixed": ram.ramified_count,
        "rho_is_automorphism": rho_ok,
        "psi_is_automorphism": psi_ok,
        "nakajima_equality": group.order == 4 * (ram.prank - 1),
        "nakajima_bound": nakajima_bound_holds(group.order, ram.prank),
        "identities": identities,
        "identities_not_computed": identities_not_computed(W),
        "ramification": ram.to_json(),
    }
    failed = [name for name, ok in identities.items() if not ok]
    failed += [name for name, ok in relations.items() if not ok]
    if not (rho_ok and psi_ok):
        failed.append("automorphism")
    report["status"] = "error" if failed else "success"
    report["failed"] = failed
    logger.info(
        config.get_construction_summary_text(n, W.k, action.ctx.spec, ram.genus, ram.prank, group.group_type)
    )
    return report, W


def construct_main_family(n: int, **kwargs) -> dict:
    report, _ = main_family_with_data(n, **kwargs)
    return report
