"""Truncated Laurent series in one local parameter t over GF(2^m)."""
import logging

from nakajima_curves.modules.errors import FieldMismatchError, PrecisionError
from nakajima_curves.modules.gf2m import FieldCtx
from nakajima_curves.modules.polyrat import Poly, RatFun, _mul_coeffs

logger = logging.getLogger(__name__)


class Laurent:
    """sum(coeffs[i] * t^(val+i)) + O(t^(val+len(coeffs))).

    Leading zeros are stripped on construction; a series with no coefficients
    is O(t^val), i.e. indistinguishable from zero at this precision.
    """

    __slots__ = ("ctx", "val", "coeffs")

    def __init__(self, ctx: FieldCtx, val: int, coeffs):
        c = list(coeffs)
        k = 0
        while k < len(c) and not c[k]:
            k += 1
        self.ctx = ctx
        self.val = val + k
        self.coeffs = tuple(c[k:])

    @classmethod
    def from_poly(cls, p: Poly, prec: int) -> "Laurent":
        """A polynomial in t, known up to t^prec."""
        return cls(p.ctx, 0, [p.coeff(i) for i in range(prec)])

    @classmethod
    def const(cls, ctx: FieldCtx, c: int, prec: int) -> "Laurent":
        return cls(ctx, 0, [c] + [0] * (prec - 1))

    @property
    def prec(self) -> int:
        """Absolute precision: the series is known modulo t^prec."""
        return self.val + len(self.coeffs)

    @property
    def rel_prec(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> tuple[int, int]:
        if not self.coeffs:
            raise PrecisionError(f"series vanishes up to t^{self.val}")
        return self.val, self.coeffs[0]

    def coeff(self, k: int) -> int:
        i = k - self.val
        if i < 0:
            return 0
        if i >= len(self.coeffs):
            raise PrecisionError(f"coefficient of t^{k} is beyond precision {self.prec}")
        return self.coeffs[i]

    def _check(self, other: "Laurent"):
        if other.ctx is not self.ctx:
            raise FieldMismatchError(f"series over {self.ctx.spec} and {other.ctx.spec}")

    def __add__(self, other: "Laurent") -> "Laurent":
        self._check(other)
        prec = min(self.prec, other.prec)
        lo = min(self.val, other.val, prec)
        res = [0] * (prec - lo)
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                k = s.val + i - lo
                if k >= len(res):
                    break
                res[k] ^= c
        return Laurent(self.ctx, lo, res)

    __sub__ = __add__

    def add_const(self, c: int) -> "Laurent":
        """Add an exact constant."""
        if not c or self.prec <= 0:
            return self
        lo = min(self.val, 0)
        res = [0] * (self.prec - lo)
        for i, a in enumerate(self.coeffs):
            res[self.val + i - lo] = a
        res[-lo] ^= c
        return Laurent(self.ctx, lo, res)

    def __mul__(self, other: "Laurent") -> "Laurent":
        self._check(other)
        val = self.val + other.val
        if not self.coeffs or not other.coeffs:
            # O(t^a) * (b t^v + ...) = O(t^(a+v))
            return Laurent(self.ctx, val, ())
        n = min(len(self.coeffs), len(other.coeffs))
        res = _mul_coeffs(self.ctx, self.coeffs[:n], other.coeffs[:n])[:n]
        return Laurent(self.ctx, val, res)

    def scale(self, c: int) -> "Laurent":
        if not c:
            return Laurent(self.ctx, self.prec, ())
        mul = self.ctx.mul
        return Laurent(self.ctx, self.val, [mul(c, a) for a in self.coeffs])

    def shift(self, k: int) -> "Laurent":
        """Multiply by t^k."""
        return Laurent(self.ctx, self.val + k, self.coeffs)

    def square(self) -> "Laurent":
        return self * self

    def inverse(self) -> "Laurent":
        if not self.coeffs:
            raise PrecisionError(f"cannot invert a series that vanishes up to t^{self.val}")
        ctx = self.ctx
        a = self.coeffs
        n = len(a)
        inv0 = ctx.inv(a[0])
        b = [inv0] + [0] * (n - 1)
        mul = ctx.mul
        for k in range(1, n):
            s = 0
            for j in range(1, k + 1):
                if a[j] and b[k - j]:
                    s ^= mul(a[j], b[k - j])
            b[k] = mul(s, inv0)
        return Laurent(ctx, -self.val, b)

    def __truediv__(self, other: "Laurent") -> "Laurent":
        return self * other.inverse()

    def truncate(self, prec: int) -> "Laurent":
        if prec >= self.prec:
            return self
        return Laurent(self.ctx, self.val, self.coeffs[: max(prec - self.val, 0)])

    def __repr__(self):
        terms = [f"{self.ctx.fmt(c)}*t^{self.val + i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms + [f"O(t^{self.prec})"])


def eval_poly(p: Poly, s: Laurent, prec: int) -> Laurent:
    """p(s) by Horner; constants are exact."""
    if p.is_zero():
        return Laurent(s.ctx, prec, ())
    r = Laurent.const(s.ctx, p.lc, prec)
    for c in reversed(p.coeffs[:-1]):
        r = (r * s).add_const(c)
    return r


def eval_ratfun(f: RatFun, s: Laurent, prec: int) -> Laurent:
    num = eval_poly(f.num, s, prec)
    if f.den.is_one():
        return num
    return num / eval_poly(f.den, s, prec)


def power_sum_coeff(series: list[int], power: int, k: int, ctx: FieldCtx) -> int:
    """Coefficient of t^k in (sum series[i] t^i)^power, power in {2, 3}, using only series[:k]."""
    mul = ctx.mul
    if power == 2:
        return ctx.sqr(series[k // 2]) if k % 2 == 0 and k // 2 < k else 0
    total = 0
    for i in range(k):
        if not series[i]:
            continue
        for j in range(k - i):
            l = k - i - j
            if l >= k or not series[j] or not series[l]:
                continue
            total ^= mul(mul(series[i], series[j]), series[l])
    return total
