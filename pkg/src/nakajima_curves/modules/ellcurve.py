"""The ordinary curve y^2 + xy = x^3 + nu*x^2 + mu over GF(2^m)."""
import logging
import random

from nakajima_curves import config
from nakajima_curves.modules.errors import (
    FieldMismatchError,
    FieldTooLargeError,
    TorsionSearchError,
)
from nakajima_curves.modules.gf2m import FieldCtx, embed_int

logger = logging.getLogger(__name__)


class CurveE:
    __slots__ = ("ctx", "nu", "mu", "_over")

    def __init__(self, ctx: FieldCtx, mu: int, nu: int = 0):
        if not mu:
            raise ValueError("mu = 0 gives a singular curve")
        self.ctx = ctx
        self.mu = mu
        self.nu = nu
        self._over: dict[FieldCtx, tuple[int, int, int]] = {}

    def __repr__(self):
        nu = "" if not self.nu else f" + {self.ctx.fmt(self.nu)}*x^2"
        return f"y^2 + x*y = x^3{nu} + {self.ctx.fmt(self.mu)} over {self.ctx.spec}"

    def __eq__(self, other):
        return isinstance(other, CurveE) and (self.ctx, self.mu, self.nu) == (other.ctx, other.mu, other.nu)

    def __hash__(self):
        return hash((self.ctx.spec, self.mu, self.nu))

    def coeffs_in(self, ctx: FieldCtx) -> tuple[int, int, int]:
        """(nu, mu, sqrt(mu)) embedded into ctx."""
        got = self._over.get(ctx)
        if got is None:
            nu = embed_int(self.nu, self.ctx, ctx)
            mu = embed_int(self.mu, self.ctx, ctx)
            got = (nu, mu, ctx.sqrt(mu))
            self._over[ctx] = got
        return got

    def over(self, ctx: FieldCtx) -> "CurveE":
        """The same curve with coefficients read in a larger field."""
        if ctx is self.ctx:
            return self
        nu, mu, _ = self.coeffs_in(ctx)
        return CurveE(ctx, mu, nu)

    def rhs(self, x: int, ctx: FieldCtx | None = None) -> int:
        ctx = ctx or self.ctx
        nu, mu, _ = self.coeffs_in(ctx)
        x2 = ctx.sqr(x)
        return ctx.mul(x2, x) ^ ctx.mul(nu, x2) ^ mu

    def contains(self, x: int, y: int, ctx: FieldCtx | None = None) -> bool:
        ctx = ctx or self.ctx
        return ctx.sqr(y) ^ ctx.mul(x, y) == self.rhs(x, ctx)

    # --- points ---

    def infinity(self, ctx: FieldCtx | None = None) -> "ECPoint":
        return ECPoint(self, ctx or self.ctx, None, None)

    def point(self, x: int, y: int, ctx: FieldCtx | None = None) -> "ECPoint":
        ctx = ctx or self.ctx
        if not self.contains(x, y, ctx):
            raise ValueError(f"({ctx.fmt(x)}, {ctx.fmt(y)}) is not on {self}")
        return ECPoint(self, ctx, x, y)

    def two_torsion(self, ctx: FieldCtx | None = None) -> "ECPoint":
        ctx = ctx or self.ctx
        return ECPoint(self, ctx, 0, self.coeffs_in(ctx)[2])

    def lift_x(self, x: int, ctx: FieldCtx | None = None) -> list["ECPoint"]:
        """Points with abscissa x and ordinate in ctx."""
        ctx = ctx or self.ctx
        if not x:
            return [self.two_torsion(ctx)]
        beta = ctx.div(self.rhs(x, ctx), ctx.sqr(x))
        s = ctx.solve_quadratic(beta)
        if s is None:
            return []
        y = ctx.mul(x, s)
        return [ECPoint(self, ctx, x, y), ECPoint(self, ctx, x, y ^ x)]

    # --- counting ---

    def point_count(self) -> int:
        """#E(GF(2^m)) by trace tests, one per abscissa."""
        ctx = self.ctx
        if ctx.m > config.POINT_COUNT_LIMIT_BITS:
            raise FieldTooLargeError(
                f"brute-force count over {ctx.spec} exceeds 2^{config.POINT_COUNT_LIMIT_BITS}"
            )
        # x != 0 has two points iff Tr(x + nu + sqrt(mu)/x) = 0
        tr_nu = ctx.trace(self.nu)
        smu = ctx.sqrt(self.mu)
        good = 0
        for x in range(1, ctx.order):
            if not (ctx.trace(x) ^ tr_nu ^ ctx.trace(ctx.div(smu, x))):
                good += 1
        return 2 + 2 * good

    def frobenius_trace(self) -> int:
        return self.ctx.order + 1 - self.point_count()

    def count_over_extension(self, s: int) -> int:
        """#E(GF(2^(m*s))) from the base count via t_s = t_1 t_(s-1) - q t_(s-2)."""
        q = self.ctx.order
        t1 = self.frobenius_trace()
        t_prev, t_cur = 2, t1
        for _ in range(s - 1):
            t_prev, t_cur = t_cur, t1 * t_cur - q * t_prev
        return q ** s + 1 - t_cur

    # --- torsion ---

    def find_torsion_generator(self, order: int, seed: int | None = None) -> tuple["ECPoint", FieldCtx]:
        """A point of exact order `order` (a power of two) in the smallest extension holding one."""
        if order < 8 or order & (order - 1):
            raise ValueError(f"torsion order must be a power of two >= 8, got {order}")
        diagnostics = {}
        rng = random.Random(config.TORSION_SEARCH_SEED if seed is None else seed)
        for s in range(1, config.TORSION_MAX_EXTENSION + 1):
            count = self.count_over_extension(s)
            v = (count & -count).bit_length() - 1
            diagnostics[s] = {"points": count, "v2": v}
            if (1 << v) < order:
                logger.debug(f"Степень {s}: #E = {count}, 2-часть {1 << v} < {order}")
                continue
            ext = self.ctx.extension(s) if s > 1 else self.ctx
            odd = count >> v
            P0 = self._search_generator(ext, odd, v, order, rng)
            if P0 is not None:
                logger.info(f"Найдена точка порядка {order} над {ext.spec} (степень {s}): {P0}")
                return P0, ext
            diagnostics[s]["failed"] = True
        raise TorsionSearchError(
            f"no point of order {order} over extensions of degree <= {config.TORSION_MAX_EXTENSION}",
            diagnostics,
        )

    def _search_generator(self, ext: FieldCtx, odd: int, v: int, order: int, rng) -> "ECPoint | None":
        half = 1 << (v - 1)
        tries = 0
        # P lies in 2E(ext) iff Tr(x(P)) = Tr(nu); those never generate the 2-part
        tr_nu = ext.trace(embed_int(self.nu, self.ctx, ext))
        while True:
            x = ext.random_nonzero(rng)
            if ext.trace(x) == tr_nu:
                continue
            for R in self.lift_x(x, ext):
                Q = R * odd
                if (Q * half).is_infinity():
                    continue
                return Q * ((1 << v) // order)
            tries += 1
            if tries > 64 * ext.m:
                break
        return None


class ECPoint:
    """Affine point (x, y) over ctx, or the neutral element when x is None."""

    __slots__ = ("curve", "ctx", "x", "y")

    def __init__(self, curve: CurveE, ctx: FieldCtx, x: int | None, y: int | None):
        self.curve = curve
        self.ctx = ctx
        self.x = x
        self.y = y

    def is_infinity(self) -> bool:
        return self.x is None

    def embed(self, ctx: FieldCtx) -> "ECPoint":
        if ctx is self.ctx or self.x is None:
            return ECPoint(self.curve, ctx, self.x, self.y)
        return ECPoint(self.curve, ctx, embed_int(self.x, self.ctx, ctx), embed_int(self.y, self.ctx, ctx))

    def _common(self, other: "ECPoint") -> tuple["ECPoint", "ECPoint"]:
        if other.curve != self.curve:
            raise FieldMismatchError(f"points on different curves: {self.curve} and {other.curve}")
        if other.ctx is self.ctx:
            return self, other
        if other.ctx.m % self.ctx.m == 0:
            return self.embed(other.ctx), other
        if self.ctx.m % other.ctx.m == 0:
            return self, other.embed(self.ctx)
        raise FieldMismatchError(f"no common field for {self.ctx.spec} and {other.ctx.spec}")

    def __neg__(self) -> "ECPoint":
        if self.x is None:
            return self
        return ECPoint(self.curve, self.ctx, self.x, self.x ^ self.y)

    def __add__(self, other: "ECPoint") -> "ECPoint":
        P, Q = self._common(other)
        if P.x is None:
            return Q
        if Q.x is None:
            return P
        ctx = P.ctx
        nu = P.curve.coeffs_in(ctx)[0]
        if P.x == Q.x:
            if P.y != Q.y or not P.x:
                # Q = -P, or P = Q is the 2-torsion point with a vertical tangent
                return P.curve.infinity(ctx)
            return P._double()
        lam = ctx.div(P.y ^ Q.y, P.x ^ Q.x)
        x3 = ctx.sqr(lam) ^ lam ^ P.x ^ Q.x ^ nu
        y3 = ctx.mul(lam, P.x ^ x3) ^ x3 ^ P.y
        return ECPoint(P.curve, ctx, x3, y3)

    def __sub__(self, other: "ECPoint") -> "ECPoint":
        return self + (-other)

    def _double(self) -> "ECPoint":
        ctx = self.ctx
        nu = self.curve.coeffs_in(ctx)[0]
        lam = self.x ^ ctx.div(self.y, self.x)
        x3 = ctx.sqr(lam) ^ lam ^ nu
        y3 = ctx.sqr(self.x) ^ ctx.mul(lam ^ 1, x3)
        return ECPoint(self.curve, ctx, x3, y3)

    def __mul__(self, k: int) -> "ECPoint":
        if k < 0:
            return (-self) * (-k)
        result = self.curve.infinity(self.ctx)
        addend = self
        while k:
            if k & 1:
                result = result + addend
            k >>= 1
            if k:
                addend = addend + addend
        return result

    __rmul__ = __mul__

    def order_divides(self, k: int) -> bool:
        return (self * k).is_infinity()

    def __eq__(self, other):
        # points over different fields compare unequal; embed first to compare them
        if not isinstance(other, ECPoint) or other.curve != self.curve or other.ctx is not self.ctx:
            return False
        return (self.x, self.y) == (other.x, other.y)

    def __hash__(self):
        return hash((self.x, self.y, self.ctx.m))

    def __repr__(self):
        if self.x is None:
            return "Yinf"
        return f"({self.ctx.fmt(self.x)},{self.ctx.fmt(self.y)})@gf2^{self.ctx.m}"


def ec_add(P: ECPoint, Q: ECPoint) -> ECPoint:
    return P + Q


def ec_scalar_mul(i: int, P: ECPoint) -> ECPoint:
    return P * i


def ec_point_count(E: CurveE) -> int:
    return E.point_count()


def find_torsion_generator(E: CurveE, order: int, seed: int | None = None) -> tuple[ECPoint, FieldCtx]:
    return E.find_torsion_generator(order, seed)
