"""Binary finite fields GF(2^m).

Field elements are plain ints (bit-vectors of polynomial-basis coordinates),
the interpretation is carried by a FieldCtx passed around with them. Zero and
one are always 0 and 1, addition is xor. FqElem wraps an int together with its
context for the public, operator-friendly API.
"""
import logging
import math
import random
import re

import galois

from nakajima_curves import config
from nakajima_curves.modules.errors import (
    EmbeddingError,
    FieldMismatchError,
    ZeroDivisionAlgebraError,
)

logger = logging.getLogger(__name__)

_TABLE_LIMIT_BITS = 16
_SPEC_RE = re.compile(r"^\s*gf2\^(\d+)(?::(0x[0-9a-fA-F]+|\d+))?\s*$")

# Calls to get_field with the same (m, modulus) return the same context.
_field_cache: dict[tuple[int, int], "FieldCtx"] = {}
_embedding_cache: dict[tuple["FieldCtx", "FieldCtx"], list[int]] = {}


def _clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _reduce(r: int, modulus: int, m: int) -> int:
    bl = r.bit_length()
    while bl > m:
        r ^= modulus << (bl - m - 1)
        bl = r.bit_length()
    return r


def default_modulus(m: int) -> int:
    if m in config.DEFAULT_DEFINING_POLYS:
        return config.DEFAULT_DEFINING_POLYS[m]
    return int(galois.conway_poly(2, m))


def get_field(m: int, modulus: int | None = None) -> "FieldCtx":
    if modulus is None:
        modulus = default_modulus(m)
    key = (m, modulus)
    ctx = _field_cache.get(key)
    if ctx is None:
        ctx = FieldCtx(m, modulus)
        _field_cache[key] = ctx
    return ctx


def parse_field_spec(spec: str) -> "FieldCtx":
    """Parse "gf2^<m>[:<hex modulus>]" into a (cached) field context."""
    match = _SPEC_RE.match(spec)
    if not match:
        raise ValueError(f"bad field specification: {spec!r}")
    m = int(match.group(1))
    modulus = int(match.group(2), 0) if match.group(2) else None
    return get_field(m, modulus)


class FieldCtx:
    """GF(2^m) given by a primitive defining polynomial; the residue of x is mu."""

    __slots__ = ("m", "modulus", "order", "_exp", "_log", "_trace_mask", "__weakref__")

    def __init__(self, m: int, modulus: int):
        if m < 2:
            raise ValueError("m=1 is not supported, use the prime field directly")
        if modulus.bit_length() - 1 != m:
            raise ValueError(f"defining polynomial {modulus:#x} does not have degree {m}")
        poly = galois.Poly.Int(modulus)
        if not poly.is_irreducible():
            raise ValueError(f"{poly} is not irreducible over GF(2)")
        if not poly.is_primitive():
            raise ValueError(f"{poly} is not primitive, x does not generate the multiplicative group")
        self.m = m
        self.modulus = modulus
        self.order = 1 << m
        self._exp = None
        self._log = None
        self._trace_mask = None
        if m <= _TABLE_LIMIT_BITS:
            self._build_tables()

    def _build_tables(self):
        n = self.order - 1
        exp = [0] * (2 * n)
        log = [0] * self.order
        v = 1
        for k in range(n):
            exp[k] = v
            log[v] = k
            v <<= 1
            if v >> self.m:
                v ^= self.modulus
        for k in range(n, 2 * n):
            exp[k] = exp[k - n]
        self._exp = exp
        self._log = log

    @property
    def spec(self) -> str:
        return f"gf2^{self.m}:{self.modulus:#x}"

    def __repr__(self):
        return f"FieldCtx({self.spec})"

    def __reduce__(self):
        return (get_field, (self.m, self.modulus))

    # --- arithmetic on raw ints ---

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if self._log is not None:
            return self._exp[self._log[a] + self._log[b]]
        return _reduce(_clmul(a, b), self.modulus, self.m)

    def sqr(self, a: int) -> int:
        return self.mul(a, a)

    def inv(self, a: int) -> int:
        if not a:
            raise ZeroDivisionAlgebraError(f"inversion of zero in {self.spec}")
        if self._log is not None:
            return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]
        t1, t2 = 0, 1
        r1, r2 = self.modulus, a
        while r2 > 1:
            q = r1.bit_length() - r2.bit_length()
            if q < 0:
                t1, t2 = t2, t1
                r1, r2 = r2, r1
                continue
            r1 ^= r2 << q
            t1 ^= t2 << q
            if r1.bit_length() < r2.bit_length():
                t1, t2 = t2, t1
                r1, r2 = r2, r1
        return _reduce(t2, self.modulus, self.m)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if not a:
            return 1 if e == 0 else 0
        if self._log is not None:
            return self._exp[(self._log[a] * e) % (self.order - 1)]
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            e >>= 1
            a = self.mul(a, a)
        return r

    def sqrt(self, a: int) -> int:
        """The unique b with b^2 = a, i.e. a^(2^(m-1))."""
        if a <= 1:
            return a
        if self._log is not None:
            return self._exp[(self._log[a] << (self.m - 1)) % (self.order - 1)]
        for _ in range(self.m - 1):
            a = self.mul(a, a)
        return a

    def trace(self, a: int) -> int:
        """Absolute trace GF(2^m) -> GF(2)."""
        if self._trace_mask is None:
            mask = 0
            for i in range(self.m):
                v = 1 << i
                t = v
                for _ in range(self.m - 1):
                    v = self.mul(v, v)
                    t ^= v
                if t & 1:
                    mask |= 1 << i
            self._trace_mask = mask
        return bin(a & self._trace_mask).count("1") & 1

    def log(self, a: int) -> int | None:
        if not a:
            return None
        if self._log is not None:
            return self._log[a]
        return None

    def gen_pow(self, k: int) -> int:
        return self.pow(2, k)

    # --- linear algebra over GF(2) ---

    def additive_solutions(self, func, target: int) -> list[int]:
        """All s with func(s) == target, for an F2-linear func on the field."""
        basis: dict[int, tuple[int, int]] = {}
        kernel = []
        for i in range(self.m):
            vec, combo = func(1 << i), 1 << i
            while vec:
                top = vec.bit_length() - 1
                if top in basis:
                    bvec, bcombo = basis[top]
                    vec ^= bvec
                    combo ^= bcombo
                else:
                    basis[top] = (vec, combo)
                    break
            if not vec:
                kernel.append(combo)
        vec, combo = target, 0
        while vec:
            top = vec.bit_length() - 1
            if top not in basis:
                return []
            bvec, bcombo = basis[top]
            vec ^= bvec
            combo ^= bcombo
        solutions = [combo]
        for k in kernel:
            solutions += [s ^ k for s in solutions]
        return sorted(solutions)

    def solve_quadratic(self, beta: int) -> int | None:
        """One root s of s^2 + s = beta, or None when Tr(beta) = 1."""
        if self.trace(beta):
            return None
        roots = self.additive_solutions(lambda s: self.mul(s, s) ^ s, beta)
        return roots[0] if roots else None

    # --- misc ---

    def elements(self):
        return range(self.order)

    def random_element(self, rng: random.Random) -> int:
        return rng.randrange(self.order)

    def random_nonzero(self, rng: random.Random) -> int:
        return rng.randrange(1, self.order)

    def fmt(self, a: int) -> str:
        if a <= 1:
            return str(a)
        k = self.log(a)
        if k is None:
            return f"{a:#x}"
        return "mu" if k == 1 else f"mu^{k}"

    def parse_elem(self, text: str) -> int:
        text = text.strip()
        if text in ("0", "1"):
            return int(text)
        if text == "mu":
            return 2 if self.m > 1 else 1
        if text.startswith("mu^"):
            return self.gen_pow(int(text[3:].strip("{}")))
        if text.startswith("0x"):
            return int(text, 16)
        raise ValueError(f"cannot parse field element {text!r}")

    def extension(self, s: int) -> "FieldCtx":
        return get_field(self.m * s)

    def evaluate_gf2_poly(self, poly_bits: int, a: int) -> int:
        r = 0
        for i in range(poly_bits.bit_length() - 1, -1, -1):
            r = self.mul(r, a)
            if (poly_bits >> i) & 1:
                r ^= 1
        return r

    def elem(self, value: int) -> "FqElem":
        return FqElem(self, value)


def _embedding_powers(src: FieldCtx, dst: FieldCtx) -> list[int]:
    key = (src, dst)
    powers = _embedding_cache.get(key)
    if powers is not None:
        return powers
    if dst.m % src.m:
        raise EmbeddingError(f"cannot embed {src.spec} into {dst.spec}: {src.m} does not divide {dst.m}")
    if src is dst:
        root = 2
    else:
        step = (dst.order - 1) // (src.order - 1)
        base = dst.gen_pow(step)
        root = None
        # a primitive root of src's modulus lies among the order-(2^a - 1) powers of base
        for k in range(1, src.order - 1):
            if math.gcd(k, src.order - 1) != 1:
                continue
            cand = dst.pow(base, k)
            if dst.evaluate_gf2_poly(src.modulus, cand) == 0:
                root = cand
                break
        if root is None:
            raise EmbeddingError(f"no root of {src.modulus:#x} found in {dst.spec}")
    powers = [1]
    for _ in range(src.m - 1):
        powers.append(dst.mul(powers[-1], root))
    _embedding_cache[key] = powers
    logger.debug(f"Вложение {src.spec} -> {dst.spec}: образ mu = {dst.fmt(powers[1] if src.m > 1 else 1)}")
    return powers


def embed_int(a: int, src: FieldCtx, dst: FieldCtx) -> int:
    if src is dst:
        return a
    powers = _embedding_powers(src, dst)
    r = 0
    i = 0
    while a:
        if a & 1:
            r ^= powers[i]
        a >>= 1
        i += 1
    return r


def embedder(src: FieldCtx, dst: FieldCtx):
    if src is dst:
        return lambda a: a
    powers = _embedding_powers(src, dst)

    def apply(a: int) -> int:
        r = 0
        i = 0
        while a:
            if a & 1:
                r ^= powers[i]
            a >>= 1
            i += 1
        return r

    return apply


class FqElem:
    """An element of GF(2^m) bound to its context."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx: FieldCtx, value: int):
        if not 0 <= value < ctx.order:
            raise ValueError(f"{value} is not an element of {ctx.spec}")
        self.ctx = ctx
        self.value = value

    def _check(self, other: "FqElem"):
        if not isinstance(other, FqElem):
            return NotImplemented
        if other.ctx is not self.ctx:
            raise FieldMismatchError(f"mixed contexts {self.ctx.spec} and {other.ctx.spec}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FqElem(self.ctx, self.value ^ other.value)

    __sub__ = __add__

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FqElem(self.ctx, self.ctx.mul(self.value, other.value))

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FqElem(self.ctx, self.ctx.div(self.value, other.value))

    def __pow__(self, e: int):
        return FqElem(self.ctx, self.ctx.pow(self.value, e))

    def __neg__(self):
        return self

    def inverse(self) -> "FqElem":
        return FqElem(self.ctx, self.ctx.inv(self.value))

    def sqrt(self) -> "FqElem":
        return FqElem(self.ctx, self.ctx.sqrt(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def __eq__(self, other):
        return isinstance(other, FqElem) and other.ctx is self.ctx and other.value == self.value

    def __hash__(self):
        return hash((self.ctx.m, self.ctx.modulus, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return self.ctx.fmt(self.value)


def fq_arith(a: FqElem, b: FqElem, op: str) -> FqElem:
    """add / mul / inv / pow; for pow, b.value is used as the exponent."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** b.value
    raise ValueError(f"unknown operation {op!r}")


def fq_sqrt(a: FqElem) -> FqElem:
    return a.sqrt()


def fq_embed(a: FqElem, target: FieldCtx) -> FqElem:
    return FqElem(target, embed_int(a.value, a.ctx, target))
