"""Golden polynomials printed with the worked examples, and matching up to the choice of primitive element."""
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

from nakajima_curves import config
from nakajima_curves.modules.errors import GoldenFileError
from nakajima_curves.modules.gf2m import FieldCtx, embedder, parse_field_spec
from nakajima_curves.reproduce.bivar import BivarPoly

logger = logging.getLogger(__name__)

GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@dataclass
class GoldenFile:
    name: str
    field_spec: str
    names: tuple[str, str]
    text: str
    comment: str = ""


def read_golden(name: str) -> GoldenFile:
    path = GOLDEN_DIR / f"{name}.txt"
    if not path.is_file():
        raise GoldenFileError(f"golden file {path} not found")
    field_spec = names = None
    comment: list[str] = []
    terms: list[str] = []
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("field:"):
                field_spec = body[len("field:"):].strip()
            elif body.startswith("vars:"):
                names = tuple(body[len("vars:"):].split())
            else:
                comment.append(body)
            continue
        terms.append(line)
    if field_spec is None or names is None or len(names) != 2:
        raise GoldenFileError(f"{path.name}: missing or malformed '# field:' / '# vars:' header")
    return GoldenFile(name, field_spec, names, " + ".join(terms), " ".join(comment))


def load_golden(name: str, exponent: int = 1, ctx: FieldCtx | None = None) -> BivarPoly:
    """The stored polynomial with every coefficient c read as c^exponent."""
    gf = read_golden(name)
    try:
        ctx = ctx or parse_field_spec(gf.field_spec)
        poly = BivarPoly.parse(ctx, gf.text, gf.names)
    except ValueError as e:
        raise GoldenFileError(f"{name}: {e}") from e
    if exponent != 1:
        poly = poly.map_coeffs(lambda c: ctx.pow(c, exponent), ctx)
    return poly


def golden_ctx(name: str) -> FieldCtx:
    return parse_field_spec(read_golden(name).field_spec)


def primitive_exponents(ctx: FieldCtx) -> list[int]:
    """j with mu -> mu^j an admissible relabelling of the primitive element."""
    n = ctx.order - 1
    return [j for j in range(1, n) if math.gcd(j, n) == 1]


def frobenius_orbit(ctx: FieldCtx, j: int) -> list[int]:
    n = ctx.order - 1
    out: list[int] = []
    e = j % n
    while e not in out:
        out.append(e)
        e = (2 * e) % n
    return out


def descend(F: BivarPoly, target: FieldCtx) -> BivarPoly | None:
    """F rewritten over the subfield target, or None if a coefficient lies outside it."""
    if F.ctx is target:
        return F
    emb = embedder(target, F.ctx)
    back = {emb(a): a for a in target.elements()}
    terms = {}
    for a, b, c in F.terms():
        if c not in back:
            return None
        terms[(a, b)] = back[c]
    return BivarPoly.from_terms(target, terms, F.names)


@dataclass
class GoldenMatch:
    name: str
    matched: bool
    exponent: int | None = None
    computed_degrees: tuple[int, int] = (0, 0)
    golden_degrees: tuple[int, int] = (0, 0)
    diff: list[str] = field(default_factory=list)
    note: str = ""

    def to_json(self) -> dict:
        return {
            "golden": self.name,
            "matched": self.matched,
            "exponent": self.exponent,
            "computed_degrees": list(self.computed_degrees),
            "golden_degrees": list(self.golden_degrees),
            "diff": list(self.diff),
            "note": self.note,
        }


def _term_diff(A: BivarPoly, B: BivarPoly) -> list[str]:
    a_terms = {(a, b): c for a, b, c in A.terms()}
    b_terms = {(a, b): c for a, b, c in B.terms()}
    u, v = B.names
    out = []
    for key in sorted(set(a_terms) | set(b_terms), reverse=True):
        ca, cb = a_terms.get(key, 0), b_terms.get(key, 0)
        if ca != cb:
            out.append(f"{u}^{key[0]}*{v}^{key[1]}: computed {A.ctx.fmt(ca)}, printed {B.ctx.fmt(cb)}")
    return out


def match_golden(computed: BivarPoly, name: str, exponents: list[int] | None = None) -> GoldenMatch:
    """Compare normalized polynomials (variable names ignored) for each primitive-element relabelling."""
    ctx = golden_ctx(name)
    shape = (computed.deg_u, computed.deg_v)
    low = descend(computed, ctx)
    if low is None:
        logger.error(f"Многочлен для {name} не определён над {ctx.spec}")
        return GoldenMatch(name, False, computed_degrees=shape, note=f"computed polynomial is not defined over {ctx.spec}")
    low = low.normalized()
    exponents = exponents or primitive_exponents(ctx)
    best: GoldenMatch | None = None
    for j in exponents:
        printed = load_golden(name, j, ctx).normalized()
        g_shape = (printed.deg_u, printed.deg_v)
        if low.rows == printed.rows:
            logger.info(f"Золотой файл {name}: совпадение при mu -> mu^{j}")
            return GoldenMatch(name, True, j, shape, g_shape)
        diff = _term_diff(low, printed)
        if best is None or len(diff) < len(best.diff):
            best = GoldenMatch(name, False, j, shape, g_shape, diff)
    best.note = f"no match for exponents {exponents}; diff shown for the closest one"
    best.diff = best.diff[: config.GOLDEN_DIFF_LIMIT] + (
        [f"... {len(best.diff) - config.GOLDEN_DIFF_LIMIT} more"] if len(best.diff) > config.GOLDEN_DIFF_LIMIT else []
    )
    logger.error(f"Золотой файл {name}: совпадений нет, ближайший mu^{best.exponent}, различий {len(best.diff)}")
    return best
