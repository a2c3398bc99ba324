"""Polynomials and normalized rational functions over GF(2^m)."""
import logging
import random
import re

import galois

from nakajima_curves.modules.errors import FieldMismatchError, ZeroDivisionAlgebraError
from nakajima_curves.modules.gf2m import FieldCtx, embedder

logger = logging.getLogger(__name__)

_galois_fields: dict[FieldCtx, type] = {}


def galois_field(ctx: FieldCtx):
    gf = _galois_fields.get(ctx)
    if gf is None:
        gf = galois.GF(ctx.order, irreducible_poly=ctx.modulus)
        _galois_fields[ctx] = gf
    return gf


def _mul_coeffs(ctx: FieldCtx, a, b) -> list[int]:
    if not a or not b:
        return []
    res = [0] * (len(a) + len(b) - 1)
    log = ctx._log
    if log is not None:
        exp = ctx._exp
        lb = [(j, log[c]) for j, c in enumerate(b) if c]
        for i, c in enumerate(a):
            if not c:
                continue
            lc = log[c]
            for j, l in lb:
                res[i + j] ^= exp[lc + l]
        return res
    mul = ctx.mul
    for i, c in enumerate(a):
        if not c:
            continue
        for j, d in enumerate(b):
            if d:
                res[i + j] ^= mul(c, d)
    return res


class Poly:
    """Dense polynomial, coefficients lowest degree first, no trailing zeros."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs=()):
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        self.ctx = ctx
        self.coeffs = tuple(c)

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "Poly":
        return cls(ctx)

    @classmethod
    def one(cls, ctx: FieldCtx) -> "Poly":
        return cls(ctx, (1,))

    @classmethod
    def const(cls, ctx: FieldCtx, c: int) -> "Poly":
        return cls(ctx, (c,))

    @classmethod
    def x(cls, ctx: FieldCtx) -> "Poly":
        return cls(ctx, (0, 1))

    @classmethod
    def monomial(cls, ctx: FieldCtx, c: int, k: int) -> "Poly":
        return cls(ctx, [0] * k + [c])

    @classmethod
    def from_roots(cls, ctx: FieldCtx, roots) -> "Poly":
        p = cls.one(ctx)
        for r in roots:
            p = p * cls(ctx, (r, 1))
        return p

    @classmethod
    def random_poly(cls, ctx: FieldCtx, degree: int, rng: random.Random, monic: bool = False) -> "Poly":
        coeffs = [ctx.random_element(rng) for _ in range(degree)]
        coeffs.append(1 if monic else ctx.random_nonzero(rng))
        return cls(ctx, coeffs)

    # --- basic properties ---

    @property
    def deg(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def coeff(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def low_degree(self) -> int:
        """Order of vanishing at x = 0 (-1 for the zero polynomial)."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return -1

    def _check(self, other: "Poly"):
        if other.ctx is not self.ctx:
            raise FieldMismatchError(f"polynomials over {self.ctx.spec} and {other.ctx.spec}")

    # --- ring operations ---

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        res = list(a)
        for i, c in enumerate(b):
            res[i] ^= c
        return Poly(self.ctx, res)

    __sub__ = __add__

    def __neg__(self) -> "Poly":
        return self

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        return Poly(self.ctx, _mul_coeffs(self.ctx, self.coeffs, other.coeffs))

    def scale(self, c: int) -> "Poly":
        if not c:
            return Poly(self.ctx)
        if c == 1:
            return self
        mul = self.ctx.mul
        return Poly(self.ctx, [mul(c, a) for a in self.coeffs])

    def shift(self, k: int) -> "Poly":
        if not self.coeffs:
            return self
        return Poly(self.ctx, [0] * k + list(self.coeffs))

    def square(self) -> "Poly":
        res = [0] * (2 * len(self.coeffs) - 1 if self.coeffs else 0)
        sqr = self.ctx.sqr
        for i, c in enumerate(self.coeffs):
            res[2 * i] = sqr(c)
        return Poly(self.ctx, res)

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative exponent for a polynomial")
        result = Poly.one(self.ctx)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base.square()
        return result

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionAlgebraError("polynomial division by zero")
        ctx = self.ctx
        rem = list(self.coeffs)
        db = other.deg
        if len(rem) <= db:
            return Poly(ctx), self
        inv_lc = ctx.inv(other.lc)
        b = other.coeffs
        mul = ctx.mul
        quot = [0] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if not c:
                continue
            f = mul(c, inv_lc)
            quot[k - db] = f
            off = k - db
            for j in range(db + 1):
                if b[j]:
                    rem[off + j] ^= mul(f, b[j])
        return Poly(ctx, quot), Poly(ctx, rem[:db])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("polynomial division is not exact")
        return q

    def divides(self, other: "Poly") -> bool:
        return (other % self).is_zero()

    def monic(self) -> "Poly":
        if not self.coeffs or self.lc == 1:
            return self
        return self.scale(self.ctx.inv(self.lc))

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other: "Poly") -> tuple["Poly", "Poly", "Poly"]:
        """(g, s, t) with s*self + t*other = g, g monic."""
        ctx = self.ctx
        r0, r1 = self, other
        s0, s1 = Poly.one(ctx), Poly(ctx)
        t0, t1 = Poly(ctx), Poly.one(ctx)
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 + q * s1
            t0, t1 = t1, t0 + q * t1
        if r0.is_zero():
            return r0, s0, t0
        inv = ctx.inv(r0.lc)
        return r0.scale(inv), s0.scale(inv), t0.scale(inv)

    def derivative(self) -> "Poly":
        return Poly(self.ctx, [c if k & 1 else 0 for k, c in enumerate(self.coeffs)][1:])

    def sqrt(self) -> "Poly | None":
        if any(self.coeffs[1::2]):
            return None
        sqrt = self.ctx.sqrt
        return Poly(self.ctx, [sqrt(c) for c in self.coeffs[::2]])

    def __call__(self, a: int) -> int:
        r = 0
        mul = self.ctx.mul
        for c in reversed(self.coeffs):
            r = mul(r, a) ^ c
        return r

    def compose(self, other: "Poly") -> "Poly":
        r = Poly(self.ctx)
        for c in reversed(self.coeffs):
            r = r * other + Poly.const(self.ctx, c)
        return r

    def mulmod(self, other: "Poly", modulus: "Poly") -> "Poly":
        return (self * other) % modulus

    def powmod(self, e: int, modulus: "Poly") -> "Poly":
        result = Poly.one(self.ctx) % modulus
        base = self % modulus
        while e:
            if e & 1:
                result = result.mulmod(base, modulus)
            e >>= 1
            if e:
                base = base.square() % modulus
        return result

    def frobenius_mod(self, k: int, modulus: "Poly") -> "Poly":
        """self^(2^k) mod modulus."""
        r = self % modulus
        for _ in range(k):
            r = r.square() % modulus
        return r

    def map_coeffs(self, func, ctx: FieldCtx) -> "Poly":
        return Poly(ctx, [func(c) for c in self.coeffs])

    def embed(self, target: FieldCtx) -> "Poly":
        if target is self.ctx:
            return self
        return self.map_coeffs(embedder(self.ctx, target), target)

    # --- factorization and roots ---

    def factors(self) -> list[tuple["Poly", int]]:
        """Monic irreducible factors with multiplicities (unit dropped)."""
        if self.deg < 1:
            return []
        gf = galois_field(self.ctx)
        gp = galois.Poly(list(reversed(self.monic().coeffs)), field=gf)
        facs, mults = gp.factors()
        out = []
        for f, e in zip(facs, mults):
            coeffs = [int(c) for c in f.coeffs][::-1]
            out.append((Poly(self.ctx, coeffs), int(e)))
        out.sort(key=lambda fe: (fe[0].deg, fe[0].coeffs))
        return out

    def roots(self, rng: random.Random | None = None) -> list[int]:
        """Distinct roots in the coefficient field, by trace splitting."""
        if self.deg < 1:
            return []
        ctx = self.ctx
        xp = Poly.x(ctx)
        split = xp.frobenius_mod(ctx.m, self) + xp
        g = self.gcd(split)
        rng = rng or random.Random(0x5EED)
        found: list[int] = []
        _split_roots(g, rng, found)
        return sorted(found)

    # --- comparison and text ---

    def __eq__(self, other):
        return isinstance(other, Poly) and other.ctx is self.ctx and other.coeffs == self.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return self.to_text()

    def to_text(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c:
                terms.append(format_term(self.ctx, c, ((var, k),)))
        return " + ".join(terms)

    @classmethod
    def parse(cls, ctx: FieldCtx, text: str, var: str = "x") -> "Poly":
        coeffs: dict[int, int] = {}
        for coef, powers in parse_terms(ctx, text):
            k = 0
            for name, e in powers:
                if name != var:
                    raise ValueError(f"unexpected variable {name!r} in {text!r}")
                k += e
            coeffs[k] = coeffs.get(k, 0) ^ coef
        size = max(coeffs, default=-1) + 1
        return cls(ctx, [coeffs.get(k, 0) for k in range(size)])


def _split_roots(p: Poly, rng: random.Random, out: list[int]):
    if p.deg < 1:
        return
    if p.deg == 1:
        out.append(p.ctx.div(p.coeffs[0], p.coeffs[1]))
        return
    ctx = p.ctx
    for _ in range(64 * ctx.m):
        beta = Poly(ctx, (0, ctx.random_nonzero(rng)))
        t = beta
        acc = beta
        for _ in range(ctx.m - 1):
            t = t.square() % p
            acc = acc + t
        h = p.gcd(acc)
        if 0 < h.deg < p.deg:
            _split_roots(h, rng, out)
            _split_roots(p.exact_div(h), rng, out)
            return
    raise ValueError(f"trace splitting did not separate the roots of {p}")


def format_term(ctx: FieldCtx, c: int, powers) -> str:
    mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in powers if e)
    if not mono:
        return ctx.fmt(c)
    if c == 1:
        return mono
    return f"{ctx.fmt(c)}*{mono}"


def parse_terms(ctx: FieldCtx, text: str):
    """Yield (coefficient, ((var, exp), ...)) for each '+'-separated monomial."""
    text = " ".join(text.split())
    if text in ("", "0"):
        return
    for raw in text.split("+"):
        term = raw.strip()
        if not term:
            raise ValueError(f"empty term in {text!r}")
        parts = [p.strip() for p in term.split("*")]
        coef = 1
        powers = []
        for part in parts:
            m = re.match(r"^([a-zA-Z])(?:\^\{?(\d+)\}?)?$", part)
            if m:
                powers.append((m.group(1), int(m.group(2) or 1)))
            else:
                coef = ctx.mul(coef, ctx.parse_elem(part))
        yield coef, tuple(powers)


class RatFun:
    """num/den with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, *, normalized: bool = False):
        if den is None:
            den = Poly.one(num.ctx)
        elif den.ctx is not num.ctx:
            raise FieldMismatchError(f"numerator over {num.ctx.spec}, denominator over {den.ctx.spec}")
        if den.is_zero():
            raise ZeroDivisionAlgebraError("rational function with zero denominator")
        if not normalized:
            if num.is_zero():
                den = Poly.one(num.ctx)
            elif not den.is_one():
                g = num.gcd(den)
                if not g.is_one():
                    num = num.exact_div(g)
                    den = den.exact_div(g)
                if den.lc != 1:
                    inv = num.ctx.inv(den.lc)
                    num = num.scale(inv)
                    den = den.scale(inv)
        self.num = num
        self.den = den

    @property
    def ctx(self) -> FieldCtx:
        return self.num.ctx

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "RatFun":
        return cls(Poly(ctx), normalized=True)

    @classmethod
    def one(cls, ctx: FieldCtx) -> "RatFun":
        return cls(Poly.one(ctx), normalized=True)

    @classmethod
    def const(cls, ctx: FieldCtx, c: int) -> "RatFun":
        return cls(Poly.const(ctx, c), normalized=True)

    @classmethod
    def x(cls, ctx: FieldCtx) -> "RatFun":
        return cls(Poly.x(ctx), normalized=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_poly(self) -> bool:
        return self.den.is_one()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_one()

    def __add__(self, other: "RatFun") -> "RatFun":
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __sub__ = __add__

    def __neg__(self) -> "RatFun":
        return self

    def __mul__(self, other: "RatFun") -> "RatFun":
        if self.num.is_zero() or other.num.is_zero():
            return RatFun.zero(self.ctx)
        # cross cancellation keeps the products small
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        n1, d2 = (self.num.exact_div(g1), other.den.exact_div(g1)) if not g1.is_one() else (self.num, other.den)
        n2, d1 = (other.num.exact_div(g2), self.den.exact_div(g2)) if not g2.is_one() else (other.num, self.den)
        return RatFun(n1 * n2, d1 * d2, normalized=True)._fix_lc()

    def _fix_lc(self) -> "RatFun":
        if self.den.lc != 1:
            inv = self.ctx.inv(self.den.lc)
            return RatFun(self.num.scale(inv), self.den.scale(inv), normalized=True)
        return self

    def scale(self, c: int) -> "RatFun":
        if not c:
            return RatFun.zero(self.ctx)
        return RatFun(self.num.scale(c), self.den, normalized=True)

    def inverse(self) -> "RatFun":
        if self.num.is_zero():
            raise ZeroDivisionAlgebraError("inversion of the zero rational function")
        return RatFun(self.den, self.num, normalized=True)._fix_lc()

    def __truediv__(self, other: "RatFun") -> "RatFun":
        return self * other.inverse()

    def square(self) -> "RatFun":
        return RatFun(self.num.square(), self.den.square(), normalized=True)

    def __pow__(self, e: int) -> "RatFun":
        if e < 0:
            return self.inverse() ** (-e)
        return RatFun(self.num ** e, self.den ** e, normalized=True)

    def sqrt(self) -> "RatFun | None":
        a = self.num.sqrt()
        b = self.den.sqrt()
        if a is None or b is None:
            return None
        return RatFun(a, b, normalized=True)

    def derivative(self) -> "RatFun":
        return RatFun(self.num.derivative() * self.den + self.num * self.den.derivative(), self.den.square())

    def __call__(self, a: int) -> int:
        d = self.den(a)
        if not d:
            raise ZeroDivisionAlgebraError(f"pole at {self.ctx.fmt(a)}")
        return self.ctx.div(self.num(a), d)

    def degree(self) -> int:
        """deg num - deg den, i.e. minus the valuation at infinity."""
        return self.num.deg - self.den.deg

    def valuation_at(self, p: Poly) -> int:
        """Order at the place of K(x) given by an irreducible p."""
        if self.num.is_zero():
            raise ValueError("valuation of zero")
        v = 0
        n = self.num
        while True:
            q, r = n.divmod(p)
            if not r.is_zero():
                break
            n = q
            v += 1
        d = self.den
        while True:
            q, r = d.divmod(p)
            if not r.is_zero():
                break
            d = q
            v -= 1
        return v

    def embed(self, target: FieldCtx) -> "RatFun":
        if target is self.ctx:
            return self
        return RatFun(self.num.embed(target), self.den.embed(target), normalized=True)

    def map_coeffs(self, func, ctx: FieldCtx) -> "RatFun":
        return RatFun(self.num.map_coeffs(func, ctx), self.den.map_coeffs(func, ctx))

    def __eq__(self, other):
        return isinstance(other, RatFun) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num.coeffs, self.den.coeffs))

    def __repr__(self):
        return self.to_text()

    def to_text(self, var: str = "x") -> str:
        if self.den.is_one():
            return self.num.to_text(var)
        return f"({self.num.to_text(var)})/({self.den.to_text(var)})"


def poly_arith(a: Poly, b: Poly, op: str):
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "divrem":
        return a.divmod(b)
    if op == "gcd":
        return a.gcd(b)
    raise ValueError(f"unknown operation {op!r}")


def ratfun_arith(a: RatFun, b: RatFun | None, op: str) -> RatFun:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown operation {op!r}")


def ratfun_sqrt_test(f: RatFun) -> RatFun | None:
    """g with g^2 = f, or None when f is not a square in K(x)."""
    return f.sqrt()
