import random

import pytest

from corrdyn.errors import ParseError, ZeroModulus, ZeroPolynomial
from corrdyn.ffield import make_field
from corrdyn.polyring import (BiPoly, UniPoly, bi_is_squarefree, field_embedding,
                              format_bipoly, irreducible_modulus, is_squarefree,
                              parse_bipoly, roots, uni_arith)


def P(ctx, *ints):
    return UniPoly.from_ints(ctx, ints)


def test_gcd_examples():
    F = make_field(7, 1)
    # (y-1)(y-2) and (y-1)(y-3) -> y-1
    a = P(F, 2, -3, 1)   # y^2 - 3y + 2
    b = P(F, 3, -4, 1)   # y^2 - 4y + 3
    assert a.gcd(b) == P(F, -1, 1)
    assert uni_arith(a, b, "gcd") == P(F, -1, 1)
    # mul example
    assert P(F, 1, 1) * P(F, -1, 1) == P(F, -1, 0, 1)
    # gcd with zero is monic other
    assert UniPoly.zero(F).gcd(P(F, 0, 0, 3)) == P(F, 0, 0, 1)


def test_divmod_euclidean_identity():
    rng = random.Random(3)
    F = make_field(5, 2)
    for _ in range(200):
        a = UniPoly(F, [F.element_from_key(rng.randrange(F.q)) for _ in range(rng.randrange(1, 8))])
        b = UniPoly(F, [F.element_from_key(rng.randrange(F.q)) for _ in range(rng.randrange(1, 6))])
        if b.is_zero():
            continue
        q, r = a.divmod(b)
        assert q * b + r == a
        assert r.degree < b.degree


def test_mod_zero_raises():
    F = make_field(7, 1)
    with pytest.raises(ZeroModulus):
        P(F, 1, 1) % UniPoly.zero(F)


def test_roots_examples():
    F = make_field(7, 1)
    assert roots(P(F, -1, 0, 1)) == [((1,), 1), ((6,), 1)]     # y^2 - 1
    assert roots(P(F, 1, 0, 1)) == []                          # y^2 + 1, no roots
    assert roots(P(F, 4, -4, 1)) == [((2,), 2)]                # (y-2)^2
    F49 = make_field(7, 2)
    rs = roots(UniPoly.from_ints(F49, [1, 0, 1]))
    assert len(rs) == 2 and all(m == 1 for _, m in rs)
    for r, _ in rs:
        assert F49.add(F49.mul(r, r), F49.one()) == F49.zero()
    with pytest.raises(ZeroPolynomial):
        roots(UniPoly.zero(F))


def test_roots_both_algorithms_agree():
    # exhaustive scan is the oracle for the algebraic path, q <= 2^12
    rng = random.Random(11)
    fields = [make_field(7, 1), make_field(3, 4), make_field(2, 8), make_field(13, 2),
              make_field(61, 1), make_field(5, 3)]
    for F in fields:
        for _ in range(60):
            deg = rng.randrange(1, 7)
            f = UniPoly(F, [F.element_from_key(rng.randrange(F.q)) for _ in range(deg)]
                        + [F.element_from_key(rng.randrange(1, F.q))])
            a = sorted(roots(f, method="exhaustive"))
            b = sorted(roots(f, method="algebraic"))
            assert a == b, (F, f)


def test_roots_products_of_linears():
    # controlled multiplicities
    rng = random.Random(23)
    for F in (make_field(11, 1), make_field(3, 2), make_field(2, 4)):
        for _ in range(40):
            picks = [F.element_from_key(rng.randrange(F.q)) for _ in range(rng.randrange(1, 4))]
            mults = [rng.randrange(1, 4) for _ in picks]
            f = UniPoly.const(F, F.one())
            for r, m in zip(picks, mults):
                lin = UniPoly(F, (F.neg(r), F.one()))
                for _ in range(m):
                    f = f * lin
            expect = {}
            for r, m in zip(picks, mults):
                expect[r] = expect.get(r, 0) + m
            got = dict(roots(f, method="algebraic"))
            assert got == expect


def test_roots_large_field_uses_algebraic():
    # q = 41^2 = 1681 > default exhaustive bound; sanity on a known split cubic
    F = make_field(41, 2)
    f = UniPoly.const(F, F.one())
    for n in (3, 17, 30):
        f = f * UniPoly(F, (F.neg(F.from_int(n)), F.one()))
    assert sorted(roots(f)) == sorted([(F.from_int(3), 1), (F.from_int(17), 1),
                                       (F.from_int(30), 1)])


def test_is_squarefree():
    F = make_field(7, 1)
    assert not is_squarefree(P(F, 1, -2, 1))        # (y-1)^2
    assert is_squarefree(P(F, -1, 0, 1))            # y^2 - 1
    # p-th power: y^7 + 1 = (y+1)^7 over F_7
    assert not is_squarefree(P(F, 1, 0, 0, 0, 0, 0, 0, 1))


def test_irreducible_modulus_examples():
    m = irreducible_modulus(3, 2)
    assert [c[0] for c in m.coeffs] == [1, 0, 1]   # t^2 + 1
    m = irreducible_modulus(2, 1)
    assert [c[0] for c in m.coeffs] == [0, 1]      # t
    m = irreducible_modulus(2, 3)
    assert [c[0] for c in m.coeffs] == [1, 0, 1, 1]  # first cubic in canonical order


def _bi(ctx, int_terms):
    return BiPoly.from_int_terms(ctx, int_terms)


def test_specialize_examples():
    F = make_field(7, 1)
    # F = y - x^2 at x = 3 -> y - 2
    G = _bi(F, {(0, 1): 1, (2, 0): -1})
    sp, drop = G.specialize("x", F.from_int(3))
    assert sp == P(F, -2, 1) and drop == 0
    # x^2 - y^2 at y = 0 -> x^2
    G2 = _bi(F, {(2, 0): 1, (0, 2): -1})
    sp, drop = G2.specialize("y", F.from_int(0))
    assert sp == P(F, 0, 0, 1) and drop == 0
    # xy - 1 at x = 0 -> constant -1, drop 1
    G3 = _bi(F, {(1, 1): 1, (0, 0): -1})
    sp, drop = G3.specialize("x", F.from_int(0))
    assert sp == P(F, -1) and drop == 1


def test_specialize_commutes_with_eval():
    rng = random.Random(77)
    F = make_field(11, 2)
    terms = {}
    for _ in range(12):
        terms[(rng.randrange(4), rng.randrange(4))] = rng.randrange(1, F.q)
    G = BiPoly(F, {ij: F.element_from_key(c) for ij, c in terms.items()})
    for _ in range(10_000 // 3):
        x0 = F.element_from_key(rng.randrange(F.q))
        y0 = F.element_from_key(rng.randrange(F.q))
        sp, _ = G.specialize("x", x0)
        assert sp.eval(y0) == G.eval(x0, y0)
        sp2, _ = G.specialize("y", y0)
        assert sp2.eval(x0) == G.eval(x0, y0)


def test_bi_squarefree():
    F = make_field(7, 1)
    # (y-x)^2 (y+x) expanded: y^3 - y^2 x - x^2 y + x^3
    G = _bi(F, {(0, 3): 1, (1, 2): -1, (2, 1): -1, (3, 0): 1})
    assert not bi_is_squarefree(G)
    assert bi_is_squarefree(_bi(F, {(2, 0): 1, (0, 2): -1}))
    assert bi_is_squarefree(_bi(F, {(0, 1): 1, (2, 0): -1}))
    # square in x only: (x-1)^2 * y + junk free of squares in y
    G3 = _bi(F, {(2, 1): 1, (1, 1): -2, (0, 1): 1})
    assert not bi_is_squarefree(G3)


def test_bi_squarefree_derived_oracle():
    # expand random products of distinct irreducible-ish factors and check
    rng = random.Random(5)
    F = make_field(5, 1)

    def rand_factor():
        return _bi(F, {(1, 0): rng.randrange(1, 5), (0, 1): rng.randrange(1, 5),
                       (0, 0): rng.randrange(5)})

    def bimul(A, B):
        t = {}
        for (i, j), a in A.terms.items():
            for (k, l), b in B.terms.items():
                key = (i + k, j + l)
                t[key] = F.add(t.get(key, F.zero()), F.mul(a, b))
        return BiPoly(F, t)

    for _ in range(60):
        f1, f2 = rand_factor(), rand_factor()
        prod_sq = bimul(bimul(f1, f1), f2)
        assert not bi_is_squarefree(prod_sq)


def test_content():
    F = make_field(7, 1)
    # x*(y-1): content in y is x
    G = _bi(F, {(1, 1): 1, (1, 0): -1})
    c = G.content_in("y")
    assert c.degree == 1


def test_bipoly_file_round_trip():
    F = make_field(11, 2)
    G = BiPoly(F, {(0, 1): F.from_int(3), (2, 2): (1, 5)})
    text = format_bipoly(G)
    G2 = parse_bipoly(text)
    assert G2 == G
    # integer mode
    itext = "0 1 2 2\n2 0 1\n0 2 -1\n"
    F7 = make_field(7, 1)
    H = parse_bipoly(itext, F7)
    assert H.terms[(0, 2)] == (6,)
    with pytest.raises(ParseError):
        parse_bipoly(itext)          # integer mode needs a field
    with pytest.raises(ParseError):
        parse_bipoly("1 2 3\n")      # bad header
    with pytest.raises(ParseError):
        parse_bipoly("7 1 2 2\n1 1 3@7\n1 1 4@7\n")  # duplicate monomial


def test_field_embedding():
    small = make_field(3, 2)
    big = make_field(3, 4)
    e = field_embedding(small, big)
    rng = random.Random(1)
    for _ in range(200):
        a = small.element_from_key(rng.randrange(small.q))
        b = small.element_from_key(rng.randrange(small.q))
        assert e.apply(small.mul(a, b)) == big.mul(e.apply(a), e.apply(b))
        assert e.apply(small.add(a, b)) == big.add(e.apply(a), e.apply(b))
        assert e.down(e.apply(a)) == a
    # image lies in the fixed field of frobenius^2
    for _ in range(50):
        a = small.element_from_key(rng.randrange(small.q))
        im = e.apply(a)
        assert big.frobenius(im, 2) == im


def test_embedding_prime_field():
    e = field_embedding(make_field(7, 1), make_field(7, 3))
    assert e.apply((3,)) == (3, 0, 0)
