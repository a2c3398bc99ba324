"""Worked examples: recompute each printed claim and record it as matched, mismatched or not computed."""
import logging
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

from nakajima_curves import config
from nakajima_curves.modules.autcheck import main_family_with_data, setup_torsion
from nakajima_curves.modules.errors import RamificationError, SingularityError
from nakajima_curves.modules.funcfield import WittData
from nakajima_curves.modules.gf2m import FieldCtx, embed_int, get_field
from nakajima_curves.modules.polyrat import Poly, RatFun
from nakajima_curves.modules.tower import (
    ELLIPTIC,
    RATIONAL,
    ASExt,
    genus_elementary_abelian,
    nakajima_bound_holds,
    ramification_data,
    subfield_elements,
)
from nakajima_curves.reproduce import plane
from nakajima_curves.reproduce.bivar import BivarPoly, eliminate_to_plane
from nakajima_curves.reproduce.golden import descend, frobenius_orbit, golden_ctx, load_golden, match_golden

logger = logging.getLogger(__name__)

EXAMPLES = ("6.1a", "6.1b", "6.2", "6.3", "6.4", "6.5", "6.6q")

MATCHED = "matched"
MISMATCHED = "mismatched"
NOT_COMPUTED = "not-computed"
ERROR = "error"

# representatives of the two Frobenius classes of primitive elements of GF(16)
GOLDEN_MU_EXPONENTS = (1, 7)


class NotComputed(Exception):
    """Raised inside a claim when the machinery cannot decide it."""


@dataclass
class Claim:
    name: str
    expected: Any
    computed: Any = None
    status: str = NOT_COMPUTED
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "claim": self.name,
            "expected": self.expected,
            "computed": self.computed,
            "status": self.status,
            "detail": self.detail,
        }


@dataclass
class CensusReport:
    example: str
    params: dict = field(default_factory=dict)
    claims: list[Claim] = field(default_factory=list)
    findings: dict = field(default_factory=dict)
    seconds: float = 0.0

    def counts(self) -> dict[str, int]:
        out = {status: 0 for status in config.STATUS_MARKS}
        for c in self.claims:
            out[c.status] = out.get(c.status, 0) + 1
        return out

    def has_mismatch(self) -> bool:
        return any(c.status == MISMATCHED for c in self.claims)

    def claim(self, name: str) -> Claim:
        for c in self.claims:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "example": self.example,
            "params": dict(self.params),
            "claims": [c.to_json() for c in self.claims],
            "findings": self.findings,
            "counts": self.counts(),
            "seconds": round(self.seconds, 3),
        }


class _ClaimBook:
    def __init__(self, report: CensusReport):
        self.report = report

    def _add(self, claim: Claim) -> Claim:
        self.report.claims.append(claim)
        line = config.get_claim_line_text(self.report.example, claim.name, claim.expected, claim.computed, claim.status)
        if claim.status == MISMATCHED:
            logger.warning(line)
        else:
            logger.info(line)
        return claim

    def record(self, name: str, expected, computed, detail: str = "") -> Claim:
        status = MATCHED if computed == expected else MISMATCHED
        return self._add(Claim(name, expected, computed, status, detail))

    def check(self, name: str, expected, compute: Callable[[], Any], detail: str = "") -> Claim:
        try:
            computed = compute()
        except (NotComputed, SingularityError) as e:
            return self._add(Claim(name, expected, None, NOT_COMPUTED, str(e)))
        except Exception as e:
            logger.error(f"[{self.report.example}] {name}: ошибка вычисления: {e}", exc_info=True)
            return self._add(Claim(name, expected, None, ERROR, f"{type(e).__name__}: {e}"))
        return self.record(name, expected, computed, detail)

    def not_computed(self, name: str, expected, reason: str) -> Claim:
        return self._add(Claim(name, expected, None, NOT_COMPUTED, reason))


def _q_field(q: int) -> FieldCtx:
    if q < 4 or q & (q - 1):
        raise ValueError(f"q must be a power of two >= 4, got {q}")
    return get_field(q.bit_length() - 1)


def _fq(ctx: FieldCtx, q: int) -> list[int]:
    return [0] + subfield_elements(ctx, q)


def _fq_basis(ctx: FieldCtx, q: int) -> list[int]:
    powers = subfield_elements(ctx, q)
    return powers[: q.bit_length() - 1]


def _group_label(group: plane.MapGroup) -> str:
    if group.group_type == "abelian" and max(group.element_orders) <= 2:
        return "elementary abelian"
    return group.group_type


def _translation(ctx: FieldCtx, a: int, b: int, name: str) -> plane.PlaneMap:
    return plane.PlaneMap.linear(name, ctx, [[1, 0, a], [0, 1, b], [0, 0, 1]])


def _swap(ctx: FieldCtx) -> plane.PlaneMap:
    return plane.PlaneMap.linear("rho", ctx, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])


def _bivar(ctx: FieldCtx, text: str) -> BivarPoly:
    return BivarPoly.parse(ctx, text, ("X", "Y"))


def _product_curve(ctx: FieldCtx, q: int) -> BivarPoly:
    """(Y^q + Y)(X^q + X) + 1."""
    return _bivar(ctx, f"X^{q}*Y^{q} + X^{q}*Y + X*Y^{q} + X*Y + 1")


def _singular_at(sing: plane.SingularityReport, point) -> plane.SingularPoint | None:
    return next((p for p in sing.points if p.point == point), None)


# --- 6.1: the bielliptic family ---


def _main_family_claims(book: _ClaimBook, report: dict):
    book.record("genus", 9, report["genus"])
    book.record("2-rank", 9, report["prank"])
    book.record("iota fixes n places", 8, report["iota_fixed"])


def _match_e1(W, j_orbit: list[int]):
    """e_1 = (delta/xi) y + omega/xi against the printed delta, xi, omega."""
    ctx16 = golden_ctx("e1_xi")
    P, Q, D = W.e.common_denominator()
    parts = [descend(BivarPoly.from_poly_u(p, ("x", "y")), ctx16) for p in (P, Q, D)]
    if any(p is None for p in parts):
        return None
    P, Q, D = (p.row(0) for p in parts)
    for j in j_orbit:
        delta, xi, omega = (load_golden(f"e1_{v}", j, ctx16).row(0) for v in ("delta", "xi", "omega"))
        if RatFun(Q, D) == RatFun(delta, xi) and RatFun(P, D) == RatFun(omega, xi):
            return j
    return None


def _generator_multiples(order: int) -> list[int]:
    # [-j]P0 pulls e back to phi(e), which has the same plane model
    return list(range(1, order // 2, 2))


def _bielliptic(example: str, field_spec: str | None) -> CensusReport:
    alternative = example == "6.1b"
    k, variant = (7, "alternative") if alternative else (1, "standard")
    golden = "bielliptic_k7_alt" if alternative else "bielliptic_k1"
    rep = CensusReport(example, {"n": 8, "k": k, "d_variant": variant, "field": field_spec or config.DEFAULT_FIELD})
    book = _ClaimBook(rep)
    attempts = []
    e1_exponent = None
    for mu_exp in GOLDEN_MU_EXPONENTS:
        base_action = setup_torsion(8, field_spec, mu_exp)
        orbit = frobenius_orbit(golden_ctx(golden), mu_exp)
        for j in _generator_multiples(base_action.order):
            action = base_action.with_generator(j)
            W = WittData(action, k, variant)
            F = eliminate_to_plane(ASExt(ELLIPTIC, W.e))
            match = match_golden(F, golden, orbit)
            if not alternative and e1_exponent is None:
                e1_exponent = _match_e1(W, orbit)
            attempts.append((mu_exp, j, action, F, match))
            if match.matched:
                break
            logger.info(f"mu^{mu_exp}, образующая [{j}]P0: нет совпадения с {golden}")
        if attempts[-1][4].matched:
            break
    mu_exp, j, action, F, match = next((a for a in attempts if a[4].matched), attempts[0])
    rep.params["mu_exp"] = mu_exp
    rep.params["generator_multiple"] = j
    report, _ = main_family_with_data(8, k=k, d_variant=variant, action=action)
    _main_family_claims(book, report)
    book.record("group order", 32, report["group_order"])
    book.record("|S| = 4(g - 1)", True, report["nakajima_equality"])
    if alternative:
        # the curve is printed as a second dihedral example; only <rho, psi> is certified
        book.record("group type", "dihedral", report["group_type"], "<rho, psi> with psi^2 = iota")
        for name in report["identities_not_computed"]:
            book.not_computed(name, True, "proved for d = x/Tr_g(x) only")
    else:
        book.record("group type", "dihedral", report["group_type"])
        book.record("printed e_1", True, e1_exponent is not None, f"mu -> mu^{e1_exponent}" if e1_exponent else "")
    book.record(
        f"printed plane model ({golden})",
        True,
        match.matched,
        f"mu -> mu^{match.exponent}" if match.matched else "; ".join(match.diff[:3]) or match.note,
    )
    rep.findings["golden_attempts"] = [
        {"mu_exp": a[0], "generator_multiple": a[1], "matched": a[4].matched} for a in attempts
    ]
    rep.findings["golden_match"] = match.to_json()
    rep.findings["plane_degrees"] = {"X": F.deg_u, "Z": F.deg_v, "total": F.total_degree}

    def plane_vs_hurwitz():
        sing = plane.plane_singularity_analysis(F)
        rep.findings["singularities"] = sing.to_json()
        return plane.plane_genus(F.total_degree, sing) == report["genus"]

    book.check("plane genus = Hurwitz genus", True, plane_vs_hurwitz)
    rep.findings["construction"] = {key: report[key] for key in ("genus", "prank", "group_order", "group_type", "status")}
    return rep


# --- 6.2 ---


def _case_ib(field_spec: str | None) -> CensusReport:
    rep = CensusReport("6.2", {"golden": "case_ib"})
    book = _ClaimBook(rep)
    F = load_golden("case_ib")
    fa, g = F.row(4), F.row(0)
    shape_ok = F.deg_v == 4 and F.row(1) == fa and F.row(2).is_zero() and F.row(3).is_zero()
    book.record("shape f(X)(Y^4 + Y) + g(X)", True, shape_ok)
    rep.findings["degree"] = F.total_degree
    rep.findings["f"] = fa.to_text("X")
    rep.findings["g"] = g.to_text("X")
    e = RatFun(g, fa)

    def irreducible():
        if not shape_ok:
            raise NotComputed("printed polynomial is not of the form f(X)(Y^4 + Y) + g(X)")
        if not F.content().is_one():
            return False
        try:
            genus_elementary_abelian(e, 4)
        except RamificationError:
            return False
        return True

    book.check("irreducible", True, irreducible)
    book.check("genus", 9, lambda: genus_elementary_abelian(e, 4)[0])
    for name, expected in (
        ("group S = D8 x C2 of order 32", "D8 x C2"),
        ("quotient genus", 5),
        ("quotient group dihedral of order 8", "dihedral"),
    ):
        book.not_computed(name, expected, "no automorphisms of this model are printed")
    return rep


# --- 6.3 ---


def _hyperelliptic_family(q: int) -> CensusReport:
    ctx = _q_field(q)
    rep = CensusReport("6.3", {"q": q, "field": ctx.spec})
    book = _ClaimBook(rep)
    xq_x = Poly.monomial(ctx, 1, q) + Poly.x(ctx)
    summed = RatFun.zero(ctx)
    for a in _fq(ctx, q):
        summed = summed + RatFun(Poly.one(ctx), Poly(ctx, (a, 1)))
    book.record("sum of 1/(X + a) = 1/(X^q + X)", True, summed == RatFun(Poly.one(ctx), xq_x))
    e = RatFun.x(ctx) + summed
    ram = ramification_data(ASExt(RATIONAL, e))
    rep.findings["ramification"] = ram.to_json()
    book.record("genus (Hurwitz)", q - 1, ram.genus)
    rep.findings["prank"] = ram.prank

    # (Y^2 + Y + X)(X^q + X) + sum (X^q + X)/(X + a)
    F = _bivar(ctx, f"X^{q}*Y^2 + X*Y^2 + X^{q}*Y + X*Y + X^{q + 1} + X^2 + 1")
    printed = BivarPoly.from_poly_u(xq_x, ("X", "Y")) * _bivar(ctx, "Y^2 + Y + X")
    for a in _fq(ctx, q):
        printed = printed + BivarPoly.from_poly_u(xq_x.exact_div(Poly(ctx, (a, 1))), ("X", "Y"))
    book.record("printed equation = (Y^2 + Y + X)(X^q + X) + 1", True, printed == F)
    sing = plane.plane_singularity_analysis(F)
    rep.findings["singularities"] = sing.to_json()
    x_inf, y_inf = _singular_at(sing, (1, 0, 0)), _singular_at(sing, (0, 1, 0))
    book.record("X_inf multiplicity", q, x_inf.multiplicity if x_inf else 1)
    book.record("Y_inf multiplicity", 2, y_inf.multiplicity if y_inf else 1)
    book.record("no affine singular point", True, not any(p.point[2] for p in sing.points))
    book.record("singularities ordinary", True, sing.all_ordinary())
    plane_g = book.check("genus (plane model)", q - 1, lambda: plane.plane_genus(F.total_degree, sing))
    book.record("plane genus = Hurwitz genus", True, plane_g.computed == ram.genus)

    L = ctx.extension(2)
    maps = []
    for b in _fq(ctx, q):
        bL = embed_int(b, ctx, L)
        for m in L.additive_solutions(lambda t: L.sqr(t) ^ t, bL):
            maps.append(_translation(L, bL, m, f"phi[{L.fmt(bL)},{L.fmt(m)}]"))
    book.record("translations (X + b, Y + m) preserve C", True, all(plane.check_plane_automorphism(F, pm) for pm in maps))
    group = plane.map_group(F, maps)
    rep.findings["group"] = group.to_json()
    book.record("group order", 2 * q, group.order)
    book.record("group type", "elementary abelian", _group_label(group))
    book.record("|S| = 2g + 2", True, group.order == 2 * ram.genus + 2)
    book.record("Nakajima bound", True, nakajima_bound_holds(group.order, ram.prank))
    return rep


# --- 6.4 ---


def _product_family(q: int) -> CensusReport:
    ctx = _q_field(q)
    rep = CensusReport("6.4", {"q": q, "field": ctx.spec})
    book = _ClaimBook(rep)
    F = _product_curve(ctx, q)
    sing = plane.plane_singularity_analysis(F)
    rep.findings["singularities"] = sing.to_json()
    for label, point in (("X_inf", (1, 0, 0)), ("Y_inf", (0, 1, 0))):
        sp = _singular_at(sing, point)
        book.record(f"{label} ordinary of multiplicity q", True, bool(sp and sp.ordinary and sp.multiplicity == q))
    book.record("no affine singular point", True, not any(p.point[2] for p in sing.points))
    genus_claim = book.check("genus (plane model)", (q - 1) ** 2, lambda: plane.plane_genus(F.total_degree, sing))
    genus = genus_claim.computed

    ea_genus, ea_prank = genus_elementary_abelian(RatFun(Poly.one(ctx), Poly.monomial(ctx, 1, q) + Poly.x(ctx)), q)
    book.record("genus (Y^q + Y = 1/(X^q + X))", (q - 1) ** 2, ea_genus)
    rep.findings["prank"] = ea_prank

    gens = [_translation(ctx, a, 0, f"phi[{ctx.fmt(a)},0]") for a in _fq_basis(ctx, q)]
    gens += [_translation(ctx, 0, b, f"phi[0,{ctx.fmt(b)}]") for b in _fq_basis(ctx, q)]
    rho = _swap(ctx)
    gens.append(rho)
    book.record("phi and rho preserve C", True, all(plane.check_plane_automorphism(F, g) for g in gens))
    group = plane.map_group(F, gens)
    rep.findings["group"] = group.to_json()
    book.record("group order", 2 * q * q, group.order)
    book.record("central involutions", q - 1, group.central_involutions)
    g_val = genus if genus is not None else ea_genus
    book.record("|S| = 2(g - 1) + 4q - 2", True, group.order == 2 * (g_val - 1) + 4 * q - 2)
    book.record("Nakajima equality only for q = 4", q == 4, group.order == 4 * (ea_prank - 1))
    book.record("Nakajima bound", True, nakajima_bound_holds(group.order, ea_prank))

    samples = {
        "phi[1,0]": _translation(ctx, 1, 0, "phi[1,0]"),
        "phi[0,1]": _translation(ctx, 0, 1, "phi[0,1]"),
        "u = phi[1,1]": _translation(ctx, 1, 1, "u"),
        "rho": rho,
        "rho o phi[1,0]": plane.compose_linear(_translation(ctx, 1, 0, "t"), rho, "rho o phi[1,0]"),
        "rho o phi[1,1]": plane.compose_linear(_translation(ctx, 1, 1, "t"), rho, "rho o phi[1,1]"),
    }
    fixed: dict[str, int] = {}

    def count_fixed():
        for name, pm in samples.items():
            fixed[name] = len(plane.fixed_places(F, pm))
        rep.findings["fixed_places"] = dict(fixed)
        return all(v == 0 for v in fixed.values())

    book.check("no non-trivial element fixes a place", True, count_fixed)
    book.check("u = phi[1,1] fixes no place", True, lambda: fixed["u = phi[1,1]"] == 0)
    return rep


# --- 6.5: the quotient chain for q = 4 ---

PSI_MAPS = {
    "psi1": (
        "X*Y^2 + X^2*Z + X*Y*Z + mu^10*Y^2*Z + X*Z^2 + mu^5*Y*Z^2 + mu^5*Z^3",
        "X*Y^2 + X^2*Z + X*Y*Z + mu^10*Y^2*Z + mu^10*Y*Z^2 + mu^5*Z^3",
        "Y^2*Z + Y*Z^2 + Z^3",
    ),
    "psi2": ("X", "Y + Z", "Z"),
    "psi3": ("X + Z", "Y + Z", "Z"),
    "psi4": ("Y^2 + X*Z + Y*Z + Z^2", "Y*Z + Z^2", "Z^2"),
    "psi5": ("Y^2 + X*Z + Y*Z", "Y*Z", "Z^2"),
}
PSI5_PRINTED_FIXED = (("mu^5", "1"), ("mu^10", "1"), ("mu", "0"), ("mu^10", "0"))
HYPERELLIPTIC_H = "mu^10*X^4 + X^3 + 1"
HYPERELLIPTIC_F = "mu^13*X^8 + mu^5*X^7 + mu^3*X^6 + mu^3*X^5 + mu^14*X^4 + mu^7*X^3 + mu^11*X^2 + X + 1"


def quotient_model(ctx: FieldCtx) -> BivarPoly:
    """(X^2 + X)(Y^4 + Y + X^2 + X) + 1, the affine part of the genus 5 model."""
    x2x = _bivar(ctx, "X^2 + X")
    return x2x * (_bivar(ctx, "Y^4 + Y") + x2x) + BivarPoly.one(ctx, ("X", "Y"))


def _quotient_relation(ctx: FieldCtx) -> BivarPoly:
    """(z^2 + z)(t^4 + t + z^2 + z) + 1 with z = y^2 + y, t = x + y."""
    z = _bivar(ctx, "Y^2 + Y")
    t = _bivar(ctx, "X + Y")
    zz = z.square() + z
    return zz * (t.pow(4) + t + zz) + BivarPoly.one(ctx, ("X", "Y"))


def _projection(ctx: FieldCtx, pt):
    x, y, _ = pt
    return plane.normalize(ctx, (ctx.sqr(y) ^ y, x ^ y, 1))


def _find_lift(F4: BivarPoly, psi: plane.PlaneMap, candidates: list[plane.PlaneMap], seed: int = 0):
    """An element s with pi o s = psi o pi on sample points of the q = 4 model."""
    L = F4.ctx.extension(3)
    pts = plane.sample_points(F4, L, config.SAMPLE_POINTS, random.Random(seed))
    for s in candidates:
        agree = True
        for pt in pts:
            image = psi.image(_projection(L, pt), L)
            if image is None:
                continue
            if _projection(L, s.image(pt, L)) != image:
                agree = False
                break
        if agree:
            return s
    return None


def _hyperelliptic_points(h: Poly, f: Poly) -> int:
    """Rational places of Y^2 + h(X)Y = f(X) with deg h = g + 1, deg f = 2g + 2."""
    ctx = h.ctx
    count = 0
    for x0 in ctx.elements():
        hx = h(x0)
        if hx:
            count += 2 if ctx.trace(ctx.div(f(x0), ctx.sqr(hx))) == 0 else 0
        else:
            count += 1
    if h.lc:
        count += 2 if ctx.trace(ctx.div(f.coeff(2 * h.deg), ctx.sqr(h.lc))) == 0 else 0
    return count


def _inductive_chain(field_spec: str | None) -> CensusReport:
    ctx = get_field(4)
    rep = CensusReport("6.5", {"q": 4, "field": ctx.spec})
    book = _ClaimBook(rep)
    F4 = _product_curve(ctx, 4)
    book.record(
        "(z^2 + z)(t^4 + t + z^2 + z) + 1 = 0 on X", True, plane.curve_divides(F4, _quotient_relation(ctx))
    )
    Fbar = quotient_model(ctx)
    u = _translation(ctx, 1, 1, "u")
    rho = _swap(ctx)
    S = [_translation(ctx, a, b, f"phi[{ctx.fmt(a)},{ctx.fmt(b)}]") for a in _fq(ctx, 4) for b in _fq(ctx, 4)]
    S += [plane.compose_linear(s, rho, f"rho o {s.name}") for s in list(S)]

    sing4 = plane.plane_singularity_analysis(F4)
    genus4 = plane.plane_genus(F4.total_degree, sing4)
    _, prank4 = genus_elementary_abelian(RatFun(Poly.one(ctx), Poly.monomial(ctx, 1, 4) + Poly.x(ctx)), 4)
    r_u = len(plane.fixed_places(F4, u))
    rep.findings["u_fixed_places"] = r_u

    def quotient_genus():
        if r_u:
            raise NotComputed(f"u fixes {r_u} places, different exponents unknown")
        return (genus4 - 1) // 2 + 1

    genus_bar = book.check("genus of X/<u>", 5, quotient_genus).computed
    prank_bar = book.check("2-rank of X/<u>", 5, lambda: (prank4 - 1 - r_u) // 2 + 1).computed

    def count_points():
        own = plane.rational_places(F4, ctx)
        twisted = plane.twisted_places(F4, ctx, u)
        rep.findings["places_on_X"] = {"rational": len(own), "frobenius_equals_u": len(twisted)}
        total = own + twisted
        sizes = plane.place_orbits(total, S)
        rep.findings["orbit_sizes_on_quotient"] = [s // 2 for s in sizes]
        return (len(own) + len(twisted)) // 2

    book.check("F16-rational points of X/<u>", 28, count_points)
    book.check(
        "short orbits of S/<u> on rational points",
        [8, 4],
        lambda: sorted((s for s in rep.findings["orbit_sizes_on_quotient"] if s < 16), reverse=True),
    )

    psis = {name: plane.PlaneMap.parse(name, ctx, texts) for name, texts in PSI_MAPS.items()}
    relabel = None
    for name, pm in psis.items():
        ok = plane.check_plane_automorphism(Fbar, pm)
        if not ok and name == "psi1":
            for j in (e for e in range(2, 15) if math.gcd(e, 15) == 1):
                cand = pm.map_coeffs(lambda c, j=j: ctx.pow(c, j))
                if plane.check_plane_automorphism(Fbar, cand):
                    psis[name], ok, relabel = cand, True, j
                    break
        book.record(f"{name} is an automorphism", True, ok, f"after mu -> mu^{relabel}" if relabel and name == "psi1" else "")
    full = plane.map_group(Fbar, [psis["psi1"], psis["psi2"], psis["psi3"]])
    sub = plane.map_group(Fbar, [psis["psi1"], psis["psi2"]])
    rep.findings["group"] = full.to_json()
    rep.findings["dihedral_part"] = sub.to_json()
    book.record("|<psi1, psi2, psi3>|", 16, full.order)
    book.record("<psi1, psi2> dihedral of order 8", True, sub.order == 8 and sub.group_type == "dihedral")
    book.record("central involutions", 3, full.central_involutions)
    for name in ("psi3", "psi4", "psi5"):
        book.record(f"{name} central in S", True, full.is_central(psis[name]))
    if isinstance(genus_bar, int):
        book.record("|S/<u>| = 4(g - 1)", True, full.order == 4 * (genus_bar - 1))

    fixed_counts: dict[str, int] = {}

    def lifted_fixed(name: str) -> int:
        s = _find_lift(F4, psis[name], S)
        if s is None:
            raise NotComputed(f"no lift of {name} among the 32 linear maps")
        su = plane.compose_linear(u, s, f"{s.name} o u")
        count = (len(plane.fixed_places(F4, s)) + len(plane.fixed_places(F4, su))) // 2
        fixed_counts[name] = count
        rep.findings.setdefault("lifts", {})[name] = s.name
        return count

    book.check("psi3 fixes no point", 0, lambda: lifted_fixed("psi3"))
    book.check("psi4 fixes no point", 0, lambda: lifted_fixed("psi4"))
    book.check("psi5 fixes four points", 4, lambda: lifted_fixed("psi5"))

    affine_fixed = plane.fixed_affine_points(Fbar, psis["psi5"], ctx)
    rep.findings["psi5_affine_fixed"] = [[ctx.fmt(c) for c in p[:2]] for p in affine_fixed]
    printed = [(ctx.parse_elem(a), ctx.parse_elem(b), 1) for a, b in PSI5_PRINTED_FIXED]
    bad = [p for p in printed if p not in affine_fixed]
    book.record(
        "printed fixed points of psi5",
        True,
        not bad,
        "not fixed or not on the curve: " + ", ".join(f"({ctx.fmt(p[0])}, {ctx.fmt(p[1])})" for p in bad) if bad else "",
    )

    def psi5_quotient_elliptic():
        if "psi5" not in fixed_counts or not isinstance(prank_bar, int) or not isinstance(genus_bar, int):
            raise NotComputed("fixed points of psi5 or invariants of X/<u> unavailable")
        r = fixed_counts["psi5"]
        prank_q = (prank_bar - 1 - r) // 2 + 1
        genus_upper = (2 * genus_bar - 2 - 2 * r) // 4 + 1
        rep.findings["psi5_quotient"] = {"prank": prank_q, "genus_upper_bound": genus_upper}
        return prank_q == 1 and genus_upper == 1

    book.check("X/<u, psi5> elliptic", True, psi5_quotient_elliptic)

    quartic = load_golden("quartic_quotient", ctx=ctx)
    qsing = plane.plane_singularity_analysis(quartic)
    book.record("quartic non-singular", True, qsing.complete and not qsing.points)
    book.check("quartic genus", 3, lambda: plane.plane_genus(quartic.total_degree, qsing))

    def psi3_quotient_prank():
        if "psi3" not in fixed_counts or not isinstance(prank_bar, int):
            raise NotComputed("fixed points of psi3 unavailable")
        return (prank_bar - 1 - fixed_counts["psi3"]) // 2 + 1

    book.check("2-rank of X/<u, psi3>", 3, psi3_quotient_prank)
    book.record(
        "S/<psi3> dihedral of order 8",
        True,
        full.is_central(psis["psi3"]) and not sub.contains(psis["psi3"]) and sub.group_type == "dihedral",
    )

    h = Poly.parse(ctx, HYPERELLIPTIC_H, "X")
    f = Poly.parse(ctx, HYPERELLIPTIC_F, "X")
    hyp = ramification_data(ASExt(RATIONAL, RatFun(f, h.square())))
    rep.findings["hyperelliptic_ramification"] = hyp.to_json()
    book.record("hyperelliptic genus", 3, hyp.genus)
    book.record("hyperelliptic 2-rank", 3, hyp.prank)
    book.record("hyperelliptic F16-rational points", 30, _hyperelliptic_points(h, f))
    book.record(
        "S/<psi4> elementary abelian of order 8",
        True,
        full.order == 16 and full.quotient_is_elementary_abelian(psis["psi4"]),
    )
    rep.findings["printed_model_note"] = "the printed projective model ends in Z^4; its affine part is used"
    return rep


# --- 6.6: the elliptic quotient ---


def _semidihedral_quotient(field_spec: str | None) -> CensusReport:
    rep = CensusReport("6.6q", {"golden": "semidihedral_f1..f4"})
    book = _ClaimBook(rep)
    f1, f2, f3, f4 = (load_golden(f"semidihedral_f{i}").row(0) for i in range(1, 5))
    s = f1 + f2
    book.record("f3 = f1 + f2", True, f3 == s)
    printed = ramification_data(ASExt(RATIONAL, RatFun(f4, s.square())))
    rep.findings["printed_quotient"] = printed.to_json()
    book.record("genus of Z^2 + (f1 + f2)Z + f4 = 0", 1, printed.genus)
    if f3 == s:
        # F = f1 z^2 + (f1 + f2) z + f4 with z = y^2 + y
        derived = ramification_data(ASExt(RATIONAL, RatFun(f1 * f4, s.square())))
        rep.findings["derived_quotient"] = derived.to_json()
        book.record("genus of f1 Z^2 + (f1 + f2)Z + f4 = 0", 1, derived.genus)
    for name, expected in (("genus", 17), ("2-rank", 9), ("automorphism group semidihedral of order 32", "SD32")):
        book.not_computed(name, expected, "the quartic layer in Y is outside the supported towers")
    return rep


# --- dispatch ---


def census(example: str, q: int | None = None, field_spec: str | None = None) -> CensusReport:
    if example not in EXAMPLES:
        raise ValueError(f"unknown example {example!r}, expected one of {', '.join(EXAMPLES)}")
    started = time.monotonic()
    logger.info(f"Перепроверка примера {example}")
    if example in ("6.1a", "6.1b"):
        rep = _bielliptic(example, field_spec)
    elif example == "6.2":
        rep = _case_ib(field_spec)
    elif example == "6.3":
        rep = _hyperelliptic_family(q or config.CENSUS_DEFAULT_Q["6.3"])
    elif example == "6.4":
        rep = _product_family(q or config.CENSUS_DEFAULT_Q["6.4"])
    elif example == "6.5":
        rep = _inductive_chain(field_spec)
    else:
        rep = _semidihedral_quotient(field_spec)
    rep.seconds = time.monotonic() - started
    logger.info(f"Пример {example}: {rep.counts()} за {rep.seconds:.1f} с")
    return rep


def _run_job(args: tuple[str, int | None, str | None]) -> CensusReport:
    example, q, field_spec = args
    try:
        return census(example, q, field_spec)
    except Exception as e:
        logger.error(f"Пример {example} завершился ошибкой: {e}", exc_info=True)
        rep = CensusReport(example, {"q": q})
        rep.claims.append(Claim("run", "completed", None, ERROR, f"{type(e).__name__}: {e}"))
        return rep


def run_census(
    examples: list[str] | tuple[str, ...] | None = None,
    q: int | None = None,
    workers: int | None = None,
    field_spec: str | None = None,
) -> list[CensusReport]:
    """Independent census jobs, aggregated in example order."""
    examples = list(examples or EXAMPLES)
    workers = workers or config.CENSUS_WORKERS
    jobs = [(ex, q if ex in config.CENSUS_DEFAULT_Q else None, field_spec) for ex in examples]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_run_job, jobs))
    else:
        reports = [_run_job(job) for job in jobs]
    order = {ex: i for i, ex in enumerate(EXAMPLES)}
    reports.sort(key=lambda r: order.get(r.example, len(order)))
    return reports
