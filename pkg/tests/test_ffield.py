import random

import pytest

from corrdyn import ffield
from corrdyn.errors import BoundExceeded, CtxMismatch, DivisionByZero, NotPrime, DegreeZero, ParseError
from corrdyn.ffield import FieldElement, enumerate_field, make_field, parse_element


def test_make_field_validation():
    with pytest.raises(NotPrime):
        make_field(4, 1)
    with pytest.raises(NotPrime):
        make_field(1, 1)
    with pytest.raises(DegreeZero):
        make_field(7, 0)


def test_prime_field_modulus_convention():
    assert make_field(7, 1).modulus == (0, 1)
    assert make_field(2, 1).modulus == (0, 1)


def test_canonical_modulus_f9():
    # scan of monic quadratics over F_3 in canonical order gives t^2 + 1
    assert make_field(3, 2).modulus == (1, 0, 1)


def test_canonical_modulus_f4_f8():
    assert make_field(2, 2).modulus == (1, 1, 1)
    # first irreducible cubic over F_2 low-degree-first: 1 + x^2 + x^3
    F8 = make_field(2, 3)
    assert F8.modulus == (1, 0, 1, 1)
    # independent check: no roots in F_2
    for a in (0, 1):
        assert (1 + a * a + a * a * a) % 2 == 1


def test_f7_arith_examples():
    F = make_field(7, 1)
    three = FieldElement.from_int(F, 3)
    five = FieldElement.from_int(F, 5)
    assert three * five == 1
    assert three.inverse() == five
    assert ffield.arith(three, five, "mul") == FieldElement.from_int(F, 1)


def test_f9_modulus_relation():
    F = make_field(3, 2)
    t = FieldElement(F, (0, 1))
    assert t * t == FieldElement.from_int(F, -1)


def test_frobenius_examples():
    F9 = make_field(3, 2)
    t = FieldElement(F9, (0, 1))
    assert t.frobenius() == -t  # t^3 = -t given t^2 + 1 = 0
    F7 = make_field(7, 1)
    for a in enumerate_field(F7):
        assert a.frobenius() == a
    F16 = make_field(2, 4)
    g = FieldElement(F16, (0, 1))
    assert g.frobenius(4) == g
    # Frobenius has order 4 on a generator: t^(2^2) != t
    assert g.frobenius(2) != g
    assert (g ** 16) == g  # t^(2^4) = t


def test_division_and_errors():
    F = make_field(11, 2)
    a = FieldElement(F, (3, 5))
    with pytest.raises(DivisionByZero):
        a / FieldElement.from_int(F, 0)
    G = make_field(11, 1)
    with pytest.raises(CtxMismatch):
        a + FieldElement.from_int(G, 1)


def test_enumerate_small():
    assert [e.raw for e in enumerate_field(make_field(2, 1))] == [(0,), (1,)]
    F4 = list(enumerate_field(make_field(2, 2)))
    assert len(F4) == 4
    assert F4[0] == FieldElement.from_int(F4[0].ctx, 0)
    assert F4[1] == FieldElement.from_int(F4[1].ctx, 1)


def test_enumerate_f49_no_duplicates():
    # derived oracle: set cardinality
    F = make_field(7, 2)
    seen = set(e.raw for e in enumerate_field(F))
    assert len(seen) == 49


def test_enumeration_bound():
    F = make_field(2, 30, enum_bound=2 ** 24)
    assert not F.exhaustive_ok
    with pytest.raises(BoundExceeded):
        list(F.elements())


def test_field_axioms_randomized():
    # commutativity, associativity, distributivity; >= 10^4 samples across fields
    rng = random.Random(20260810)
    fields = [make_field(7, 1), make_field(3, 2), make_field(2, 4), make_field(101, 1),
              make_field(13, 3)]
    per = 10_000 // len(fields) + 1
    for F in fields:
        q = F.q
        for _ in range(per):
            a = F.element_from_key(rng.randrange(q))
            b = F.element_from_key(rng.randrange(q))
            c = F.element_from_key(rng.randrange(q))
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, b) == F.mul(b, a)
            assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
            assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
            assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


def test_inverse_involution_and_group_order():
    rng = random.Random(7)
    for F in (make_field(5, 2), make_field(17, 1), make_field(2, 5)):
        for _ in range(300):
            a = F.element_from_key(rng.randrange(1, F.q))
            assert F.inv(F.inv(a)) == a
            assert F.pow(a, F.q - 1) == F.one()


def test_frobenius_is_ring_homomorphism():
    rng = random.Random(99)
    for F in (make_field(3, 4), make_field(7, 2), make_field(2, 6)):
        for _ in range(500):
            a = F.element_from_key(rng.randrange(F.q))
            b = F.element_from_key(rng.randrange(F.q))
            assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b))
            assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))


def test_subfield_membership():
    F = make_field(3, 4)
    # elements of F_9 inside F_81 are exactly those fixed by frobenius^2
    count = sum(1 for a in F.elements() if F.in_subfield(a, 2))
    assert count == 9
    count1 = sum(1 for a in F.elements() if F.in_subfield(a, 1))
    assert count1 == 3


def test_text_encoding_round_trip():
    rng = random.Random(5)
    for F in (make_field(7, 1), make_field(11, 3)):
        for _ in range(200):
            a = F.element_from_key(rng.randrange(F.q))
            s = F.format_element(a)
            ctx2, b = parse_element(s)
            assert ctx2 == F and b == a
    assert parse_element("3@7")[1] == (3,)
    assert parse_element("[1,2]@3^2")[1] == (1, 2)
    with pytest.raises(ParseError):
        parse_element("nonsense")
    with pytest.raises(CtxMismatch):
        parse_element("3@7", make_field(5, 1))


def test_contexts_are_interned():
    assert make_field(13, 2) is make_field(13, 2)
