"""Bivariate polynomials over GF(2^m), Sylvester resultants and plane models of z^2 + z = e."""
import logging

from nakajima_curves.modules.errors import EliminationError, FieldMismatchError, ZeroDivisionAlgebraError
from nakajima_curves.modules.funcfield import curve_rhs_poly
from nakajima_curves.modules.gf2m import FieldCtx
from nakajima_curves.modules.polyrat import Poly, format_term, parse_terms
from nakajima_curves.modules.tower import ELLIPTIC, ASExt

logger = logging.getLogger(__name__)


class BivarPoly:
    """F = sum_j rows[j](U) * V^j with rows[j] in GF(2^m)[U]; names are (U, V) for text I/O."""

    __slots__ = ("ctx", "rows", "names")

    def __init__(self, ctx: FieldCtx, rows=(), names: tuple[str, str] = ("X", "Z")):
        r = list(rows)
        for row in r:
            if row.ctx is not ctx:
                raise FieldMismatchError(f"row over {row.ctx.spec} in a polynomial over {ctx.spec}")
        while r and r[-1].is_zero():
            r.pop()
        self.ctx = ctx
        self.rows = tuple(r)
        self.names = tuple(names)

    @classmethod
    def zero(cls, ctx: FieldCtx, names=("X", "Z")) -> "BivarPoly":
        return cls(ctx, (), names)

    @classmethod
    def const(cls, ctx: FieldCtx, c: int, names=("X", "Z")) -> "BivarPoly":
        return cls(ctx, (Poly.const(ctx, c),), names)

    @classmethod
    def one(cls, ctx: FieldCtx, names=("X", "Z")) -> "BivarPoly":
        return cls.const(ctx, 1, names)

    @classmethod
    def u(cls, ctx: FieldCtx, names=("X", "Z")) -> "BivarPoly":
        return cls(ctx, (Poly.x(ctx),), names)

    @classmethod
    def v(cls, ctx: FieldCtx, names=("X", "Z")) -> "BivarPoly":
        return cls(ctx, (Poly(ctx), Poly.one(ctx)), names)

    @classmethod
    def from_poly_u(cls, p: Poly, names=("X", "Z")) -> "BivarPoly":
        return cls(p.ctx, (p,), names)

    @classmethod
    def from_terms(cls, ctx: FieldCtx, terms: dict[tuple[int, int], int], names=("X", "Z")) -> "BivarPoly":
        height = max((b for (_, b), c in terms.items() if c), default=-1) + 1
        grid: list[list[int]] = [[] for _ in range(height)]
        for (a, b), c in terms.items():
            if not c:
                continue
            row = grid[b]
            if len(row) <= a:
                row.extend([0] * (a + 1 - len(row)))
            row[a] ^= c
        return cls(ctx, [Poly(ctx, row) for row in grid], names)

    @classmethod
    def parse(cls, ctx: FieldCtx, text: str, names=("X", "Z")) -> "BivarPoly":
        terms: dict[tuple[int, int], int] = {}
        for coef, powers in parse_terms(ctx, text):
            key = _exponents(powers, names, text)
            terms[key] = terms.get(key, 0) ^ coef
        return cls.from_terms(ctx, terms, names)

    # --- shape ---

    @property
    def deg_v(self) -> int:
        return len(self.rows) - 1

    @property
    def deg_u(self) -> int:
        return max((row.deg for row in self.rows), default=-1)

    @property
    def total_degree(self) -> int:
        return max((row.deg + j for j, row in enumerate(self.rows) if not row.is_zero()), default=-1)

    def is_zero(self) -> bool:
        return not self.rows

    def is_const(self) -> bool:
        return len(self.rows) <= 1 and all(row.is_const() for row in self.rows)

    def coeff(self, a: int, b: int) -> int:
        return self.rows[b].coeff(a) if 0 <= b < len(self.rows) else 0

    def row(self, b: int) -> Poly:
        return self.rows[b] if 0 <= b < len(self.rows) else Poly(self.ctx)

    def terms(self):
        """(a, b, c) for every nonzero c*U^a*V^b, highest V first."""
        for b in range(len(self.rows) - 1, -1, -1):
            coeffs = self.rows[b].coeffs
            for a in range(len(coeffs) - 1, -1, -1):
                if coeffs[a]:
                    yield a, b, coeffs[a]

    def with_names(self, names) -> "BivarPoly":
        return BivarPoly(self.ctx, self.rows, names)

    # --- ring operations ---

    def _check(self, other: "BivarPoly"):
        if other.ctx is not self.ctx:
            raise FieldMismatchError(f"bivariate polynomials over {self.ctx.spec} and {other.ctx.spec}")

    def __add__(self, other: "BivarPoly") -> "BivarPoly":
        self._check(other)
        a, b = self.rows, other.rows
        if len(a) < len(b):
            a, b = b, a
        rows = list(a)
        for j, row in enumerate(b):
            rows[j] = rows[j] + row
        return BivarPoly(self.ctx, rows, self.names)

    __sub__ = __add__

    def __neg__(self) -> "BivarPoly":
        return self

    def __mul__(self, other: "BivarPoly") -> "BivarPoly":
        self._check(other)
        if self.is_zero() or other.is_zero():
            return BivarPoly.zero(self.ctx, self.names)
        rows = [Poly(self.ctx)] * (len(self.rows) + len(other.rows) - 1)
        for i, r in enumerate(self.rows):
            if r.is_zero():
                continue
            for j, s in enumerate(other.rows):
                if not s.is_zero():
                    rows[i + j] = rows[i + j] + r * s
        return BivarPoly(self.ctx, rows, self.names)

    def scale(self, c: int) -> "BivarPoly":
        return BivarPoly(self.ctx, [row.scale(c) for row in self.rows], self.names)

    def scale_poly(self, p: Poly) -> "BivarPoly":
        return BivarPoly(self.ctx, [row * p for row in self.rows], self.names)

    def shift_v(self, k: int) -> "BivarPoly":
        if self.is_zero():
            return self
        return BivarPoly(self.ctx, [Poly(self.ctx)] * k + list(self.rows), self.names)

    def square(self) -> "BivarPoly":
        rows = []
        for row in self.rows:
            rows.append(row.square())
            rows.append(Poly(self.ctx))
        return BivarPoly(self.ctx, rows, self.names)

    def __pow__(self, e: int) -> "BivarPoly":
        if e < 0:
            raise ValueError("negative exponent for a polynomial")
        result = BivarPoly.one(self.ctx, self.names)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base.square()
        return result

    def exact_div(self, other: "BivarPoly") -> "BivarPoly":
        """Quotient of an exact division, by long division in V over GF(2^m)[U]."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionAlgebraError("bivariate division by zero")
        rem = list(self.rows)
        db = other.deg_v
        lb = other.rows[-1]
        if len(rem) <= db:
            if self.is_zero():
                return self
            raise ValueError("bivariate division is not exact")
        quot = [Poly(self.ctx)] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if c.is_zero():
                continue
            q = c.exact_div(lb)
            quot[k - db] = q
            for j, b in enumerate(other.rows):
                rem[k - db + j] = rem[k - db + j] + q * b
        if any(not r.is_zero() for r in rem):
            raise ValueError("bivariate division is not exact")
        return BivarPoly(self.ctx, quot, self.names)

    def pseudo_remainder(self, other: "BivarPoly") -> "BivarPoly":
        """lc(other)^k * self mod other in V, without fractions."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionAlgebraError("pseudo-division by zero")
        db = other.deg_v
        lb = other.rows[-1]
        rem = self
        while not rem.is_zero() and rem.deg_v >= db:
            top = rem.rows[-1]
            rem = rem.scale_poly(lb) + other.scale_poly(top).shift_v(rem.deg_v - db)
        return rem

    def derivative_u(self) -> "BivarPoly":
        return BivarPoly(self.ctx, [row.derivative() for row in self.rows], self.names)

    def derivative_v(self) -> "BivarPoly":
        rows = [row if j & 1 else Poly(self.ctx) for j, row in enumerate(self.rows)][1:]
        return BivarPoly(self.ctx, rows, self.names)

    def content(self) -> Poly:
        g = Poly(self.ctx)
        for row in self.rows:
            g = row if g.is_zero() else g.gcd(row)
            if g.is_one():
                break
        return g.monic()

    def normalized(self) -> "BivarPoly":
        """Primitive part with the leading coefficient of the top V-row equal to 1."""
        if self.is_zero():
            return self
        c = self.content()
        rows = [row.exact_div(c) for row in self.rows] if not c.is_one() else list(self.rows)
        inv = self.ctx.inv(rows[-1].lc)
        return BivarPoly(self.ctx, [row.scale(inv) for row in rows], self.names)

    # --- evaluation and substitution ---

    def evaluate(self, u0: int, v0: int) -> int:
        mul = self.ctx.mul
        r = 0
        for row in reversed(self.rows):
            r = mul(r, v0) ^ row(u0)
        return r

    def at_u(self, u0: int) -> Poly:
        """F(u0, V) as a polynomial in V."""
        return Poly(self.ctx, [row(u0) for row in self.rows])

    def substitute(self, p: "BivarPoly", q: "BivarPoly") -> "BivarPoly":
        """F(p, q) with p, q bivariate polynomials over the same field."""
        self._check(p)
        self._check(q)
        result = BivarPoly.zero(self.ctx, p.names)
        for row in reversed(self.rows):
            result = result * q + _poly_at(row, p)
        return result

    def translate(self, u0: int, v0: int) -> "BivarPoly":
        """F(U + u0, V + v0)."""
        if not u0 and not v0:
            return self
        ctx = self.ctx
        p = BivarPoly(ctx, (Poly(ctx, (u0, 1)),), self.names)
        q = BivarPoly(ctx, (Poly.const(ctx, v0), Poly.one(ctx)), self.names)
        return self.substitute(p, q)

    def swap(self) -> "BivarPoly":
        terms = {(b, a): c for a, b, c in self.terms()}
        return BivarPoly.from_terms(self.ctx, terms, (self.names[1], self.names[0]))

    def embed(self, target: FieldCtx) -> "BivarPoly":
        if target is self.ctx:
            return self
        return BivarPoly(target, [row.embed(target) for row in self.rows], self.names)

    def map_coeffs(self, func, ctx: FieldCtx) -> "BivarPoly":
        return BivarPoly(ctx, [row.map_coeffs(func, ctx) for row in self.rows], self.names)

    # --- comparison and text ---

    def same_grid(self, other: "BivarPoly") -> bool:
        return other.ctx is self.ctx and other.rows == self.rows

    def __eq__(self, other):
        return isinstance(other, BivarPoly) and self.same_grid(other)

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return self.to_text()

    def to_text(self) -> str:
        if self.is_zero():
            return "0"
        u, v = self.names
        return " + ".join(format_term(self.ctx, c, ((v, b), (u, a))) for a, b, c in self.terms())


def _exponents(powers, names, text) -> tuple[int, int]:
    a = b = 0
    for name, e in powers:
        if name == names[0]:
            a += e
        elif name == names[1]:
            b += e
        else:
            raise ValueError(f"unexpected variable {name!r} in {text!r}")
    return a, b


def _poly_at(p: Poly, s: BivarPoly) -> BivarPoly:
    result = BivarPoly.zero(s.ctx, s.names)
    for c in reversed(p.coeffs):
        result = result * s
        if c:
            result = result + BivarPoly.const(s.ctx, c, s.names)
    return result


# --- resultants ---


def sylvester_matrix(f: list, g: list, zero) -> list[list]:
    """Sylvester matrix of two coefficient lists (lowest degree first)."""
    df, dg = len(f) - 1, len(g) - 1
    size = df + dg
    rows = []
    for i in range(dg):
        row = [zero] * size
        for j, c in enumerate(reversed(f)):
            row[i + j] = c
        rows.append(row)
    for i in range(df):
        row = [zero] * size
        for j, c in enumerate(reversed(g)):
            row[i + j] = c
        rows.append(row)
    return rows


def bareiss_determinant(matrix: list[list], one):
    """Fraction-free elimination; entries need +, * and exact_div."""
    n = len(matrix)
    if n == 0:
        return one
    M = [list(row) for row in matrix]
    prev = one
    for k in range(n - 1):
        if M[k][k].is_zero():
            pivot = next((i for i in range(k + 1, n) if not M[i][k].is_zero()), None)
            if pivot is None:
                return M[k][k]
            # a row swap only flips the sign, which is invisible in characteristic 2
            M[k], M[pivot] = M[pivot], M[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] + M[i][k] * M[k][j]).exact_div(prev)
        prev = M[k][k]
    return M[n - 1][n - 1]


def _strip(coeffs: list) -> list:
    c = list(coeffs)
    while c and c[-1].is_zero():
        c.pop()
    return c


def resultant(f: list, g: list, one):
    """Res(f, g) for coefficient lists over a ring with exact division."""
    f, g = _strip(f), _strip(g)
    zero = one + one
    if not f or not g:
        return zero
    return bareiss_determinant(sylvester_matrix(f, g, zero), one)


def resultant_in_v(F: BivarPoly, G: BivarPoly) -> Poly:
    """Res_V(F, G) as a polynomial in U."""
    F._check(G)
    return resultant(list(F.rows), list(G.rows), Poly.one(F.ctx))


# --- plane model of an Artin-Schreier layer over E ---


def eliminate_to_plane(X: ASExt) -> BivarPoly:
    """Res_y(Q*y + D*(z^2 + z) + P, y^2 + x*y + f(x)) for e = (P + Q*y)/D, content-normalized, in (X, Z)."""
    if X.base != ELLIPTIC:
        raise ValueError("plane elimination needs an elliptic base")
    e = X.e
    curve = e.curve
    ctx = curve.ctx
    names = ("X", "Z")
    P, Q, D = e.common_denominator()
    linear = [BivarPoly(ctx, (P, D, D), names), BivarPoly.from_poly_u(Q, names)]
    quadratic = [
        BivarPoly.from_poly_u(curve_rhs_poly(curve), names),
        BivarPoly.u(ctx, names),
        BivarPoly.one(ctx, names),
    ]
    res = resultant(linear, quadratic, BivarPoly.one(ctx, names))
    if res.is_zero():
        raise EliminationError(f"resultant of z^2 + z + e and the curve vanishes identically for e = {e}")
    F = res.normalized()
    logger.info(f"Плоская модель: степень по X {F.deg_u}, по Z {F.deg_v}, полная степень {F.total_degree}")
    return F
