"""Projective plane models F(X, Y) = 0 over GF(2^m).

Points are normalized coordinate triples (last nonzero entry 1) together with
the field they live in; lines are row vectors normalized the same way. All
extension fields are taken with their default (Conway) moduli, so points found
in a subfield embed consistently into every larger field.
"""
import logging
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

from nakajima_curves import config
from nakajima_curves.modules.autcheck import classify_two_group
from nakajima_curves.modules.errors import GroupClosureError, SingularityError
from nakajima_curves.modules.gf2m import FieldCtx, embed_int
from nakajima_curves.modules.polyrat import Poly, parse_terms
from nakajima_curves.reproduce.bivar import BivarPoly, resultant_in_v

logger = logging.getLogger(__name__)

Vec = tuple[int, int, int]


# --- small projective helpers ---


def normalize(ctx: FieldCtx, v) -> Vec | None:
    for i in (2, 1, 0):
        if v[i]:
            inv = ctx.inv(v[i])
            return tuple(ctx.mul(c, inv) for c in v)
    return None


def embed_vec(v: Vec, src: FieldCtx, dst: FieldCtx) -> Vec:
    return tuple(embed_int(c, src, dst) for c in v)


def _common_field(*ctxs: FieldCtx) -> FieldCtx:
    top = max(ctxs, key=lambda c: c.m)
    m = math.lcm(*(c.m for c in ctxs))
    return top if m == top.m else ctxs[0].extension(m // ctxs[0].m)


def _mat_vec(ctx: FieldCtx, M, v) -> Vec:
    mul = ctx.mul
    return tuple(mul(r[0], v[0]) ^ mul(r[1], v[1]) ^ mul(r[2], v[2]) for r in M)


def _vec_mat(ctx: FieldCtx, v, M) -> Vec:
    mul = ctx.mul
    return tuple(mul(v[0], M[0][j]) ^ mul(v[1], M[1][j]) ^ mul(v[2], M[2][j]) for j in range(3))


def _mat_mul(ctx: FieldCtx, A, B):
    mul = ctx.mul
    return [[mul(A[i][0], B[0][j]) ^ mul(A[i][1], B[1][j]) ^ mul(A[i][2], B[2][j]) for j in range(3)] for i in range(3)]


def _is_scalar(M) -> bool:
    return all(M[i][j] == 0 for i in range(3) for j in range(3) if i != j) and M[0][0] == M[1][1] == M[2][2] != 0


def projective_order(ctx: FieldCtx, M, bound: int = 64) -> int:
    P = M
    for k in range(1, bound + 1):
        if _is_scalar(P):
            return k
        P = _mat_mul(ctx, P, M)
    raise GroupClosureError(f"projective map has order above {bound}")


def _nullspace(ctx: FieldCtx, M) -> list[Vec]:
    rows = [list(r) for r in M]
    pivots: list[int] = []
    r = 0
    for col in range(3):
        piv = next((i for i in range(r, 3) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ctx.inv(rows[r][col])
        rows[r] = [ctx.mul(c, inv) for c in rows[r]]
        for i in range(3):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a ^ ctx.mul(f, b) for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    basis = []
    for free in (c for c in range(3) if c not in pivots):
        v = [0, 0, 0]
        v[free] = 1
        for i, col in enumerate(pivots):
            v[col] = rows[i][free]
        basis.append(tuple(v))
    return basis


def _charpoly(ctx: FieldCtx, M) -> Poly:
    """det(M + t*I)."""
    e = [[Poly(ctx, (M[i][j], 1 if i == j else 0)) for j in range(3)] for i in range(3)]
    return (
        e[0][0] * (e[1][1] * e[2][2] + e[1][2] * e[2][1])
        + e[0][1] * (e[1][0] * e[2][2] + e[1][2] * e[2][0])
        + e[0][2] * (e[1][0] * e[2][1] + e[1][1] * e[2][0])
    )


def split_roots(p: Poly) -> tuple[FieldCtx, list[int]]:
    """Distinct roots of p in the smallest extension of its field where p splits."""
    if p.deg < 1:
        return p.ctx, []
    s = math.lcm(*(f.deg for f, _ in p.factors()))
    L = p.ctx if s == 1 else p.ctx.extension(s)
    return L, p.embed(L).roots()


# --- charts and local structure ---


def homogeneous_terms(F: BivarPoly) -> dict[tuple[int, int, int], int]:
    d = F.total_degree
    return {(a, b, d - a - b): c for a, b, c in F.terms()}


@lru_cache(maxsize=64)
def chart(F: BivarPoly, axis: str) -> BivarPoly:
    """Dehomogenization of F at axis = 1; Z gives F itself, Y gives H(U, 1, V), X gives H(1, U, V)."""
    if axis == "Z":
        return F
    terms: dict[tuple[int, int], int] = {}
    for (a, b, c), coef in homogeneous_terms(F).items():
        key = (a, c) if axis == "Y" else (b, c)
        terms[key] = terms.get(key, 0) ^ coef
    names = ("X", "Z") if axis == "Y" else ("Y", "Z")
    return BivarPoly.from_terms(F.ctx, terms, names)


def _locate(point: Vec) -> tuple[str, int, int]:
    x, y, z = point
    if z:
        return "Z", x, y
    if y:
        return "Y", x, 0
    return "X", 0, 0


@lru_cache(maxsize=256)
def _chart_in(F: BivarPoly, axis: str, ctx: FieldCtx) -> tuple[BivarPoly, BivarPoly, BivarPoly]:
    G = chart(F, axis).embed(ctx)
    return G, G.derivative_u(), G.derivative_v()


def on_curve(F: BivarPoly, point: Vec, ctx: FieldCtx) -> bool:
    axis, u0, v0 = _locate(point)
    G, _, _ = _chart_in(F, axis, ctx)
    return G.evaluate(u0, v0) == 0


def is_smooth_point(F: BivarPoly, point: Vec, ctx: FieldCtx) -> bool:
    axis, u0, v0 = _locate(point)
    _, Gu, Gv = _chart_in(F, axis, ctx)
    return Gu.evaluate(u0, v0) != 0 or Gv.evaluate(u0, v0) != 0


@lru_cache(maxsize=256)
def local_form(F: BivarPoly, point: Vec, ctx: FieldCtx) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Multiplicity m at point and the tangent cone as ((a, c), ...) for c*u^a*v^(m-a)."""
    axis, u0, v0 = _locate(point)
    G, _, _ = _chart_in(F, axis, ctx)
    G = G.translate(u0, v0)
    if G.is_zero():
        raise SingularityError("the chart polynomial vanishes identically")
    m = min(a + b for a, b, _ in G.terms())
    cone = tuple(sorted((a, c) for a, b, c in G.terms() if a + b == m))
    return m, cone


def _cone_poly(cone, m: int, ctx: FieldCtx) -> tuple[Poly, int]:
    """T(1, w) and the multiplicity of the direction (0, 1)."""
    coeffs = [0] * (m + 1)
    for a, c in cone:
        coeffs[m - a] ^= c
    p = Poly(ctx, coeffs)
    return p, m - max(p.deg, 0) if not p.is_zero() else m


def cone_is_squarefree(cone, m: int, ctx: FieldCtx) -> bool:
    p, at_infinity = _cone_poly(cone, m, ctx)
    if at_infinity > 1:
        return False
    if p.deg < 1:
        return True
    return p.gcd(p.derivative()).is_one()


def _line_from_direction(axis: str, u0: int, v0: int, alpha: int, beta: int, ctx: FieldCtx) -> Vec:
    mul = ctx.mul
    if axis == "Z":
        vec = (alpha, beta, mul(alpha, u0) ^ mul(beta, v0))
    elif axis == "Y":
        vec = (alpha, mul(alpha, u0) ^ mul(beta, v0), beta)
    else:
        vec = (mul(alpha, u0) ^ mul(beta, v0), alpha, beta)
    return normalize(ctx, vec)


def tangent_lines(F: BivarPoly, point: Vec, ctx: FieldCtx, split: bool = True) -> tuple[FieldCtx, list[Vec]]:
    """Tangent lines at point, over the splitting field of the cone (or only those over ctx)."""
    m, cone = local_form(F, point, ctx)
    p, at_infinity = _cone_poly(cone, m, ctx)
    if split:
        L, roots = split_roots(p)
    else:
        L, roots = ctx, p.roots() if p.deg >= 1 else []
    axis, u0, v0 = _locate(embed_vec(point, ctx, L))
    lines = [_line_from_direction(axis, u0, v0, w, 1, L) for w in roots]
    if at_infinity:
        lines.append(_line_from_direction(axis, u0, v0, 1, 0, L))
    return L, lines


# --- singularity analysis ---


@dataclass(frozen=True)
class SingularPoint:
    point: Vec
    ctx: FieldCtx = field(compare=False)
    multiplicity: int = 2
    ordinary: bool = False

    @property
    def branches(self) -> int | None:
        return self.multiplicity if self.ordinary else None

    def at_infinity(self) -> bool:
        return self.point[2] == 0

    def to_json(self) -> dict:
        return {
            "point": [self.ctx.fmt(c) for c in self.point],
            "field": self.ctx.spec,
            "multiplicity": self.multiplicity,
            "ordinary": self.ordinary,
        }


@dataclass
class SingularityReport:
    degree: int
    points: list[SingularPoint] = field(default_factory=list)
    complete: bool = True
    scanned: tuple[int, ...] = ()
    notes: list[str] = field(default_factory=list)

    def all_ordinary(self) -> bool:
        return all(p.ordinary for p in self.points)

    def multiplicity_at(self, point: Vec) -> int:
        for p in self.points:
            if p.point == point:
                return p.multiplicity
        return 1

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "points": [p.to_json() for p in self.points],
            "complete": self.complete,
            "scanned_extensions": list(self.scanned),
            "notes": list(self.notes),
        }


def _record(report: SingularityReport, F: BivarPoly, point: Vec, ctx: FieldCtx):
    m, cone = local_form(F, point, ctx)
    if m < 2:
        return
    sp = SingularPoint(point, ctx, m, cone_is_squarefree(cone, m, ctx))
    report.points.append(sp)
    logger.debug(f"Особая точка {point} над {ctx.spec}: кратность {m}, обыкновенная: {sp.ordinary}")


def plane_singularity_analysis(F: BivarPoly, extensions: tuple[int, ...] | None = None) -> SingularityReport:
    """Singular points of the projective closure of F over the base field and the configured extensions."""
    extensions = tuple(extensions or config.PLANE_SCAN_EXTENSIONS)
    ctx = F.ctx
    report = SingularityReport(F.total_degree, scanned=extensions)

    def allowed(deg: int) -> bool:
        return any(s % deg == 0 for s in extensions)

    def skip(what: str):
        report.complete = False
        report.notes.append(what)

    Fu, Fv = F.derivative_u(), F.derivative_v()
    partner = Fv if not Fv.is_zero() else Fu
    if partner.is_zero():
        skip("F is a square, its derivatives vanish")
        return report
    r = resultant_in_v(F, partner) if F.deg_v > 0 else Poly(ctx)
    if F.deg_v > 0 and r.is_zero():
        skip("F and its derivative share a factor: F is not squarefree")
    elif F.deg_v > 0:
        for p, _ in r.factors():
            if not allowed(p.deg):
                skip(f"affine candidates with x of degree {p.deg}")
                continue
            L = ctx.extension(p.deg) if p.deg > 1 else ctx
            FL, FuL, FvL = F.embed(L), Fu.embed(L), Fv.embed(L)
            for x0 in p.embed(L).roots():
                h = FL.at_u(x0).gcd(FuL.at_u(x0)).gcd(FvL.at_u(x0))
                if h.is_zero():
                    skip(f"the line X = {L.fmt(x0)} is a component")
                    continue
                for g, _ in h.factors():
                    deg = p.deg * g.deg
                    if not allowed(deg):
                        skip(f"affine singular candidates of degree {deg}")
                        continue
                    L2 = ctx.extension(deg) if deg > 1 else ctx
                    x2 = embed_int(x0, L, L2)
                    for y0 in g.embed(L2).roots():
                        _record(report, F, (x2, y0, 1), L2)
    # points at infinity: zeros of the top form
    d = F.total_degree
    top = Poly(ctx, [F.coeff(a, d - a) for a in range(d + 1)])
    for p, _ in top.factors():
        if not allowed(p.deg):
            skip(f"points at infinity of degree {p.deg}")
            continue
        L = ctx.extension(p.deg) if p.deg > 1 else ctx
        for w in p.embed(L).roots():
            _record(report, F, normalize(L, (w, 1, 0)), L)
    if not F.coeff(d, 0):
        _record(report, F, (1, 0, 0), ctx)
    logger.info(
        f"Особые точки: {len(report.points)}, все обыкновенные: {report.all_ordinary()}, полный перебор: {report.complete}"
    )
    return report


def plane_genus(d: int, sing: SingularityReport) -> int:
    """(d - 1)(d - 2)/2 minus m(m - 1)/2 over the ordinary singular points."""
    if not sing.complete:
        raise SingularityError(f"singularity scan incomplete: {'; '.join(sing.notes)}")
    bad = [p for p in sing.points if not p.ordinary]
    if bad:
        raise SingularityError(f"non-ordinary singularities at {[p.point for p in bad]}")
    return (d - 1) * (d - 2) // 2 - sum(p.multiplicity * (p.multiplicity - 1) // 2 for p in sing.points)


def curve_divides(F: BivarPoly, G: BivarPoly) -> bool:
    """F | G for a primitive F (as a polynomial in its second variable)."""
    if G.is_zero():
        return True
    if F.deg_v == 0:
        f = F.rows[0]
        return all(f.divides(row) for row in G.rows)
    return G.pseudo_remainder(F).is_zero()


# --- plane maps ---


def parse_form(ctx: FieldCtx, text: str) -> tuple[BivarPoly, int]:
    """A homogeneous form in X, Y, Z, returned dehomogenized at Z = 1 with its degree."""
    terms: dict[tuple[int, int], int] = {}
    degree = None
    for coef, powers in parse_terms(ctx, text):
        exps = {"X": 0, "Y": 0, "Z": 0}
        for name, e in powers:
            if name not in exps:
                raise ValueError(f"unexpected variable {name!r} in {text!r}")
            exps[name] += e
        total = sum(exps.values())
        if degree is None:
            degree = total
        elif total != degree:
            raise ValueError(f"{text!r} is not homogeneous")
        key = (exps["X"], exps["Y"])
        terms[key] = terms.get(key, 0) ^ coef
    return BivarPoly.from_terms(ctx, terms, ("X", "Y")), degree or 0


@dataclass(frozen=True)
class PlaneMap:
    """(X : Y : Z) -> (A : B : C); components stored at Z = 1 in (X, Y)."""

    name: str
    components: tuple[BivarPoly, BivarPoly, BivarPoly]
    degree: int

    @property
    def ctx(self) -> FieldCtx:
        return self.components[0].ctx

    @classmethod
    def linear(cls, name: str, ctx: FieldCtx, matrix) -> "PlaneMap":
        comps = []
        for a, b, c in matrix:
            comps.append(BivarPoly.from_terms(ctx, {(1, 0): a, (0, 1): b, (0, 0): c}, ("X", "Y")))
        return cls(name, tuple(comps), 1)

    @classmethod
    def affine(cls, name: str, p: BivarPoly, q: BivarPoly) -> "PlaneMap":
        degree = max(p.total_degree, q.total_degree, 1)
        return cls(name, (p, q, BivarPoly.one(p.ctx, ("X", "Y"))), degree)

    @classmethod
    def parse(cls, name: str, ctx: FieldCtx, texts: tuple[str, str, str]) -> "PlaneMap":
        parsed = [parse_form(ctx, t) for t in texts]
        degrees = {deg for _, deg in parsed}
        if len(degrees) != 1:
            raise ValueError(f"components of {name} have different degrees {sorted(degrees)}")
        return cls(name, tuple(p for p, _ in parsed), degrees.pop())

    def matrix(self) -> list[list[int]] | None:
        if self.degree != 1:
            return None
        return [[c.coeff(1, 0), c.coeff(0, 1), c.coeff(0, 0)] for c in self.components]

    def embed(self, ctx: FieldCtx) -> "PlaneMap":
        if ctx is self.ctx:
            return self
        return PlaneMap(self.name, tuple(c.embed(ctx) for c in self.components), self.degree)

    def map_coeffs(self, func, name: str | None = None) -> "PlaneMap":
        return PlaneMap(name or self.name, tuple(c.map_coeffs(func, self.ctx) for c in self.components), self.degree)

    def image(self, point: Vec, ctx: FieldCtx) -> Vec | None:
        """Image of a point with coordinates in ctx; None at a base point."""
        return _evaluator(self, ctx)(point)

    def pullback(self, F: BivarPoly) -> BivarPoly:
        """H(A, B, C) at Z = 1, with H the homogenization of F."""
        A, B, C = self.components
        d = F.total_degree
        pa, pb, pc = _powers(A, d), _powers(B, d), _powers(C, d)
        result = BivarPoly.zero(F.ctx, ("X", "Y"))
        for (a, b, c), coef in homogeneous_terms(F).items():
            result = result + (pa[a] * pb[b] * pc[c]).scale(coef)
        return result

    def __str__(self):
        A, B, C = self.components
        return f"{self.name}: ({A.to_text()} : {B.to_text()} : {C.to_text()})"


def _powers(p: BivarPoly, d: int) -> list[BivarPoly]:
    out = [BivarPoly.one(p.ctx, p.names)]
    for _ in range(d):
        out.append(out[-1] * p)
    return out


@lru_cache(maxsize=256)
def _evaluator(pmap: PlaneMap, ctx: FieldCtx):
    emb = pmap.embed(ctx)
    M = emb.matrix()
    if M is not None:
        return lambda pt: normalize(ctx, _mat_vec(ctx, M, pt))
    comps = [list(c.terms()) for c in emb.components]
    tops = [[(a, b, c) for a, b, c in terms if a + b == pmap.degree] for terms in comps]
    pw = ctx.pow
    mul = ctx.mul

    def value(terms, x, y):
        r = 0
        for a, b, c in terms:
            r ^= mul(c, mul(pw(x, a), pw(y, b)))
        return r

    def apply(pt):
        x, y, z = pt
        if z:
            inv = ctx.inv(z)
            x, y = mul(x, inv), mul(y, inv)
            vals = tuple(value(t, x, y) for t in comps)
        else:
            vals = tuple(value(t, x, y) for t in tops)
        return normalize(ctx, vals)

    return apply


def _same_field(F: BivarPoly, pmap: PlaneMap) -> tuple[BivarPoly, PlaneMap]:
    L = _common_field(F.ctx, pmap.ctx)
    return F.embed(L), pmap.embed(L)


def check_plane_automorphism(F: BivarPoly, pmap: PlaneMap) -> bool:
    """True iff the map sends the curve to itself: F o map = lambda*F, or F | F o map for maps of degree > 1."""
    F, pmap = _same_field(F, pmap)
    G = pmap.pullback(F)
    if G.is_zero():
        return False
    a, b, c = next(F.terms())
    lam = F.ctx.div(G.coeff(a, b), c)
    if lam and G == F.scale(lam):
        logger.debug(f"{pmap.name}: F o map = {F.ctx.fmt(lam)} * F")
        return True
    if pmap.degree == 1:
        return False
    if all(curve_divides(F, comp) for comp in pmap.components):
        return False
    ok = curve_divides(F, G)
    logger.debug(f"{pmap.name}: F делит F o map: {ok}")
    return ok


# --- places on the normalization (ordinary singularities) ---


@dataclass(frozen=True)
class PlanePlace:
    """A smooth point, or a branch (point, tangent) at an ordinary singular point."""

    point: Vec
    ctx: FieldCtx = field(compare=False)
    tangent: Vec | None = None

    def key(self, target: FieldCtx) -> tuple:
        t = embed_vec(self.tangent, self.ctx, target) if self.tangent else None
        return embed_vec(self.point, self.ctx, target), t

    def to_json(self) -> dict:
        return {
            "point": [self.ctx.fmt(c) for c in self.point],
            "tangent": [self.ctx.fmt(c) for c in self.tangent] if self.tangent else None,
            "field": self.ctx.spec,
        }


def _branches_fixed(F: BivarPoly, point: Vec, ctx: FieldCtx, M) -> list[PlanePlace]:
    if is_smooth_point(F, point, ctx):
        return [PlanePlace(point, ctx)]
    m, cone = local_form(F, point, ctx)
    if not cone_is_squarefree(cone, m, ctx):
        raise SingularityError(f"branches at the non-ordinary point {point} over {ctx.spec}")
    L, lines = tangent_lines(F, point, ctx)
    ML = [[embed_int(c, ctx, L) for c in row] for row in M]
    pt = embed_vec(point, ctx, L)
    out = []
    for line in lines:
        if normalize(L, _vec_mat(L, line, ML)) == line:
            out.append(PlanePlace(pt, L, line))
    return out


def fixed_places(F: BivarPoly, pmap: PlaneMap) -> list[PlanePlace]:
    """Places of the normalization fixed by a projective-linear map (ordinary singularities only)."""
    F, pmap = _same_field(F, pmap)
    ctx = F.ctx
    M = pmap.matrix()
    if M is None:
        raise ValueError(f"{pmap.name} is not projective-linear")
    L1, eigs = split_roots(_charpoly(ctx, M))
    M1 = [[embed_int(c, ctx, L1) for c in row] for row in M]
    found: list[PlanePlace] = []
    for c in sorted(set(eigs)):
        shifted = [[M1[i][j] ^ (c if i == j else 0) for j in range(3)] for i in range(3)]
        kernel = _nullspace(L1, shifted)
        if len(kernel) == 3:
            raise ValueError(f"{pmap.name} is the identity on the plane")
        candidates: list[tuple[Vec, FieldCtx]] = []
        if len(kernel) == 1:
            pt = normalize(L1, kernel[0])
            if on_curve(F, pt, L1):
                candidates.append((pt, L1))
        else:
            v1, v2 = kernel
            g = _restrict_to_line(F, v1, v2, L1)
            if g.is_zero():
                raise SingularityError(f"the fixed line of {pmap.name} is a component of the curve")
            L2, ts = split_roots(g)
            a1, a2 = embed_vec(v1, L1, L2), embed_vec(v2, L1, L2)
            for t in ts:
                candidates.append((normalize(L2, tuple(x ^ L2.mul(t, y) for x, y in zip(a1, a2))), L2))
            if on_curve(F, normalize(L1, v2), L1):
                candidates.append((normalize(L1, v2), L1))
        for pt, L in candidates:
            ML = [[embed_int(x, ctx, L) for x in row] for row in M]
            found.extend(_branches_fixed(F.embed(L), pt, L, ML))
    logger.debug(f"{pmap.name}: неподвижных мест {len(found)}")
    return found


def _restrict_to_line(F: BivarPoly, v1: Vec, v2: Vec, ctx: FieldCtx) -> Poly:
    """H(v1 + t*v2) as a polynomial in t, for v1, v2 over ctx."""
    lin = [Poly(ctx, (v1[i], v2[i])) for i in range(3)]
    d = F.total_degree
    pw = [[Poly.one(ctx)] for _ in range(3)]
    for i in range(3):
        for _ in range(d):
            pw[i].append(pw[i][-1] * lin[i])
    result = Poly(ctx)
    for (a, b, c), coef in homogeneous_terms(F.embed(ctx)).items():
        result = result + (pw[0][a] * pw[1][b] * pw[2][c]).scale(coef)
    return result


def affine_points(F: BivarPoly, ctx: FieldCtx):
    """Affine points of F over ctx."""
    FL = F.embed(ctx)
    for x0 in ctx.elements():
        h = FL.at_u(x0)
        if h.is_zero():
            raise SingularityError(f"the line X = {ctx.fmt(x0)} is a component")
        for y0 in h.roots():
            yield (x0, y0, 1)


def points_at_infinity(F: BivarPoly, ctx: FieldCtx) -> list[Vec]:
    d = F.total_degree
    top = Poly(ctx, [embed_int(F.coeff(a, d - a), F.ctx, ctx) for a in range(d + 1)])
    pts = [normalize(ctx, (w, 1, 0)) for w in top.roots()] if top.deg >= 1 else []
    if not top.coeff(d):
        pts.append((1, 0, 0))
    return pts


def twisted_places(F: BivarPoly, base: FieldCtx, twist: PlaneMap | None = None) -> list[PlanePlace]:
    """Places P with Frob_base(P) = twist(P); without a twist these are the base-rational places."""
    for ctx in (F.ctx, twist.ctx if twist else F.ctx):
        if base.m % ctx.m:
            raise ValueError(f"{ctx.spec} is not a subfield of {base.spec}")
    M = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    k = 1
    if twist is not None:
        M = twist.embed(base).matrix()
        if M is None:
            raise ValueError(f"twist {twist.name} is not projective-linear")
        k = projective_order(base, M)
    L = base.extension(k) if k > 1 else base
    M = [[embed_int(c, base, L) for c in row] for row in M]
    q = base.order

    def frob(v: Vec) -> Vec:
        return tuple(L.pow(c, q) for c in v)

    def matches(pt: Vec) -> bool:
        return normalize(L, frob(pt)) == normalize(L, _mat_vec(L, M, pt))

    FL = F.embed(L)
    places: list[PlanePlace] = []
    singular: list[Vec] = []
    for pt in list(affine_points(FL, L)) + points_at_infinity(FL, L):
        if not is_smooth_point(FL, pt, L):
            singular.append(pt)
        elif matches(pt):
            places.append(PlanePlace(pt, L))
    for pt in singular:
        m, cone = local_form(FL, pt, L)
        if not cone_is_squarefree(cone, m, L):
            raise SingularityError(f"non-ordinary singularity at {pt}: branch count unknown")
        if not matches(pt):
            continue
        _, lines = tangent_lines(FL, pt, L, split=False)
        for line in lines:
            if normalize(L, _vec_mat(L, frob(line), M)) == line:
                places.append(PlanePlace(pt, L, line))
    logger.info(f"Мест с Frob = twist над {base.spec}: {len(places)} (twist: {twist.name if twist else 'id'})")
    return places


def rational_places(F: BivarPoly, base: FieldCtx) -> list[PlanePlace]:
    return twisted_places(F, base, None)


def _mat_inverse(ctx: FieldCtx, M):
    cof = [[0] * 3 for _ in range(3)]
    mul = ctx.mul
    for i in range(3):
        for j in range(3):
            r = [k for k in range(3) if k != i]
            c = [k for k in range(3) if k != j]
            cof[j][i] = mul(M[r[0]][c[0]], M[r[1]][c[1]]) ^ mul(M[r[0]][c[1]], M[r[1]][c[0]])
    det = mul(M[0][0], cof[0][0]) ^ mul(M[0][1], cof[1][0]) ^ mul(M[0][2], cof[2][0])
    inv = ctx.inv(det)
    return [[mul(c, inv) for c in row] for row in cof]


def place_orbits(places: list[PlanePlace], maps: list[PlaneMap]) -> list[int]:
    """Orbit sizes of a group of projective-linear maps (all elements listed) on a set of places."""
    if not places:
        return []
    L = _common_field(*(p.ctx for p in places), *(m.ctx for m in maps))
    index = {p.key(L): i for i, p in enumerate(places)}
    mats = []
    for pm in maps:
        M = pm.embed(_common_field(pm.ctx, L)).matrix()
        if M is None:
            raise ValueError(f"{pm.name} is not projective-linear")
        mats.append((M, _mat_inverse(L, M)))
    seen = [False] * len(places)
    sizes = []
    for start, place in enumerate(places):
        if seen[start]:
            continue
        pt, line = place.key(L)
        orbit = set()
        for M, Minv in mats:
            img = normalize(L, _mat_vec(L, M, pt))
            img_line = normalize(L, _vec_mat(L, line, Minv)) if line else None
            j = index.get((img, img_line))
            if j is None:
                raise GroupClosureError(f"{place} leaves the given set of places")
            orbit.add(j)
        for j in orbit:
            seen[j] = True
        sizes.append(len(orbit))
    return sorted(sizes, reverse=True)


def fixed_affine_points(F: BivarPoly, pmap: PlaneMap, ctx: FieldCtx) -> list[Vec]:
    """Affine points over ctx with map(P) = P (any map degree)."""
    out = []
    for pt in affine_points(F, ctx):
        if pmap.image(pt, ctx) == pt:
            out.append(pt)
    return out


# --- groups of plane maps, identified through their action on sample points ---


class _Undefined(Exception):
    pass


class _SignatureClosure:
    """Group elements as tuples of images of sample points."""

    def __init__(self, gens: list, points: list[Vec], bound: int):
        self.gens = gens
        self.identity = tuple(points)
        self.elements = [self.identity]
        self._words: dict[tuple, tuple[int, ...]] = {self.identity: ()}
        self._products: dict[tuple[tuple, tuple], tuple] = {}
        queue = [self.identity]
        while queue:
            sig = queue.pop(0)
            for gi in range(len(gens)):
                new = self._apply(gi, sig)
                if new not in self._words:
                    self._words[new] = self._words[sig] + (gi,)
                    self.elements.append(new)
                    queue.append(new)
                    if len(self.elements) > bound:
                        raise GroupClosureError(f"closure of plane maps exceeds {bound} elements")
        self.generators = [self._apply(gi, self.identity) for gi in range(len(gens))]

    def _apply(self, gi: int, sig: tuple) -> tuple:
        g = self.gens[gi]
        out = tuple(g(pt) for pt in sig)
        if None in out:
            raise _Undefined()
        return out

    def mul(self, a: tuple, b: tuple) -> tuple:
        """a o b."""
        key = (a, b)
        got = self._products.get(key)
        if got is None:
            got = b
            for gi in self._words[a]:
                got = self._apply(gi, got)
            self._products[key] = got
        return got

    def canonical(self, a: tuple) -> tuple:
        return a

    def order_of(self, a: tuple) -> int:
        k, p = 1, a
        while p != self.identity:
            p = self.mul(p, p)
            k *= 2
            if k > len(self.elements):
                raise GroupClosureError("plane map of order other than a power of 2")
        return k

    def power(self, a: tuple, k: int) -> tuple:
        result = self.identity
        for _ in range(k):
            result = self.mul(result, a)
        return result

    def signature(self, fn) -> tuple | None:
        out = tuple(fn(pt) for pt in self.identity)
        return None if None in out else out


@dataclass
class MapGroup:
    order: int
    group_type: str
    element_orders: dict[int, int]
    involutions: int
    center_order: int
    central_involutions: int
    closure: _SignatureClosure = field(repr=False)
    ctx: FieldCtx = field(repr=False)

    def element_of(self, pmap: PlaneMap) -> tuple | None:
        sig = self.closure.signature(lambda pt: pmap.image(pt, self.ctx))
        return sig if sig in self.closure._words else None

    def contains(self, pmap: PlaneMap) -> bool:
        return self.element_of(pmap) is not None

    def is_central(self, pmap: PlaneMap) -> bool:
        a = self.element_of(pmap)
        if a is None:
            return False
        cl = self.closure
        return all(cl.mul(a, g) == cl.mul(g, a) for g in cl.generators)

    def quotient_is_elementary_abelian(self, pmap: PlaneMap) -> bool:
        """G/<z> elementary abelian for a central involution z."""
        z = self.element_of(pmap)
        if z is None or not self.is_central(pmap):
            return False
        cl = self.closure
        allowed = {cl.identity, z}
        if any(cl.mul(a, a) not in allowed for a in cl.elements):
            return False
        for a in cl.generators:
            for b in cl.generators:
                comm = cl.mul(cl.mul(a, b), cl.mul(cl.power(a, self._order(a) - 1), cl.power(b, self._order(b) - 1)))
                if comm not in allowed:
                    return False
        return True

    def _order(self, a: tuple) -> int:
        return self.closure.order_of(a)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "group_type": self.group_type,
            "element_orders": {str(k): v for k, v in sorted(self.element_orders.items())},
            "involutions": self.involutions,
            "center_order": self.center_order,
            "central_involutions": self.central_involutions,
        }


def sample_points(F: BivarPoly, ctx: FieldCtx, count: int, rng: random.Random) -> list[Vec]:
    FL = F.embed(ctx)
    _, Fu, Fv = _chart_in(F, "Z", ctx)
    pts: list[Vec] = []
    attempts = 0
    while len(pts) < count:
        attempts += 1
        if attempts > 200 * count:
            raise GroupClosureError(f"could not sample {count} points over {ctx.spec}")
        x0 = ctx.random_nonzero(rng)
        roots = FL.at_u(x0).roots()
        if not roots:
            continue
        y0 = rng.choice(roots)
        if Fu.evaluate(x0, y0) or Fv.evaluate(x0, y0):
            pts.append((x0, y0, 1))
    return pts


def map_group(
    F: BivarPoly,
    gens: list[PlaneMap],
    samples: int | None = None,
    seed: int = 0,
    bound: int = 4096,
) -> MapGroup:
    """Closure of plane maps acting on generic sample points of the curve, and its 2-group type."""
    samples = samples or config.SAMPLE_POINTS
    base = _common_field(F.ctx, *(g.ctx for g in gens))
    ctx = base.extension(3)
    rng = random.Random(seed)
    for _ in range(3):
        pts = sample_points(F, ctx, samples, rng)
        try:
            cl = _SignatureClosure([(lambda pt, g=g: g.image(pt, ctx)) for g in gens], pts, bound)
            break
        except _Undefined:
            logger.warning("Точка выборки попала в базисную точку отображения, выбираю заново")
    else:
        raise GroupClosureError("sample points keep hitting base points of the maps")
    orders = {i: cl.order_of(g) for i, g in enumerate(cl.elements)}
    order_by_sig = {cl.elements[i]: o for i, o in orders.items()}
    center = [a for a in cl.elements if all(cl.mul(a, g) == cl.mul(g, a) for g in cl.generators)]
    counts: dict[int, int] = {}
    for o in orders.values():
        counts[o] = counts.get(o, 0) + 1
    group = MapGroup(
        order=len(cl.elements),
        group_type=classify_two_group(cl, orders, cl.generators),
        element_orders=counts,
        involutions=counts.get(2, 0),
        center_order=len(center),
        central_involutions=sum(1 for a in center if order_by_sig[a] == 2),
        closure=cl,
        ctx=ctx,
    )
    logger.info(
        f"Группа плоских отображений {[g.name for g in gens]}: порядок {group.order}, тип {group.group_type}, "
        f"центральных инволюций {group.central_involutions}"
    )
    return group


def compose_linear(first: PlaneMap, then: PlaneMap, name: str) -> PlaneMap:
    """then o first, for projective-linear maps over a common field."""
    ctx = _common_field(first.ctx, then.ctx)
    A, B = then.embed(ctx).matrix(), first.embed(ctx).matrix()
    if A is None or B is None:
        raise ValueError("compose_linear needs projective-linear maps")
    return PlaneMap.linear(name, ctx, _mat_mul(ctx, A, B))
