import pytest

from nakajima_curves.modules.errors import EmbeddingError, FieldMismatchError, ZeroDivisionAlgebraError
from nakajima_curves.modules.gf2m import embed_int, embedder, fq_embed, get_field, parse_field_spec


def test_default_moduli():
    assert get_field(4).modulus == 0x13
    assert get_field(8).modulus == 0x11D
    assert get_field(4) is get_field(4, 0x13)


def test_parse_field_spec():
    assert parse_field_spec("gf2^4") is get_field(4)
    assert parse_field_spec("gf2^4:0x13").spec == "gf2^4:0x13"
    with pytest.raises(ValueError):
        parse_field_spec("gf3^4")
    with pytest.raises(ValueError):
        parse_field_spec("gf2^4:0x1f")  # x^4+x^3+x^2+x+1 is not primitive


def test_rejects_prime_field():
    with pytest.raises(ValueError):
        get_field(1, 0x3)


def test_inverse_sqrt_exhaustive(gf16):
    for a in range(1, 16):
        assert gf16.mul(a, gf16.inv(a)) == 1
    for a in range(16):
        s = gf16.sqrt(a)
        assert gf16.mul(s, s) == a


def test_inverse_of_zero(gf16):
    with pytest.raises(ZeroDivisionAlgebraError):
        gf16.inv(0)
    with pytest.raises(ZeroDivisionError):
        gf16.elem(3) / gf16.elem(0)


def test_trace_is_additive_and_balanced(gf16):
    traces = [gf16.trace(a) for a in range(16)]
    assert traces.count(0) == 8
    for a in range(16):
        for b in range(16):
            assert gf16.trace(a ^ b) == traces[a] ^ traces[b]


def test_solve_quadratic(gf16):
    for beta in range(16):
        s = gf16.solve_quadratic(beta)
        if gf16.trace(beta):
            assert s is None
        else:
            assert gf16.mul(s, s) ^ s == beta


def test_additive_solutions_kernel(gf16):
    # s^2 + s = 0 has exactly the roots 0 and 1
    assert gf16.additive_solutions(lambda s: gf16.mul(s, s) ^ s, 0) == [0, 1]


def test_fmt_parse(gf16):
    for a in range(16):
        assert gf16.parse_elem(gf16.fmt(a)) == a
    assert gf16.fmt(2) == "mu"
    with pytest.raises(ValueError):
        gf16.parse_elem("nu")


def test_field_mismatch(gf16):
    gf4 = get_field(2)
    with pytest.raises(FieldMismatchError):
        gf16.elem(1) + gf4.elem(1)


def test_embedding_is_a_homomorphism(gf16):
    gf4 = get_field(2)
    emb = embedder(gf4, gf16)
    for a in range(4):
        for b in range(4):
            assert emb(gf4.mul(a, b)) == gf16.mul(emb(a), emb(b))
            assert emb(a ^ b) == emb(a) ^ emb(b)


def test_embedding_chain_is_compatible(gf16):
    gf4 = get_field(2)
    gf256 = get_field(8)
    for a in range(4):
        direct = embed_int(a, gf4, gf256)
        assert embed_int(embed_int(a, gf4, gf16), gf16, gf256) == direct


def test_embedding_needs_divisibility(gf16):
    with pytest.raises(EmbeddingError):
        fq_embed(gf16.elem(2), get_field(6))
