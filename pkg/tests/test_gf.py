import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffembed.errors import DivisionByZero, FieldMismatch, FieldTooLarge, NotOddPrimePower
from ffembed.gf import add, field_new, has_sqrt_minus_one, inv, is_square, mul, neg, sqrt, sub

ODD_PRIME_POWERS = [3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 37, 41, 43, 47, 49, 53, 59, 61, 67, 71, 73, 79,
                    81, 83, 89, 97, 101, 103, 107, 109, 113, 121]


@pytest.mark.parametrize("q,p,n", [(3, 3, 1), (9, 3, 2), (27, 3, 3), (25, 5, 2), (121, 11, 2)])
def test_field_new_factors(q, p, n):
    F = field_new(q)
    assert (F.q, F.p, F.n) == (q, p, n)


@pytest.mark.parametrize("q", [8, 1, 0, 2, 6, 15, 45, -3])
def test_field_new_rejects(q):
    with pytest.raises(NotOddPrimePower):
        field_new(q)


def test_field_too_large():
    with pytest.raises(FieldTooLarge):
        field_new(3**11)


def test_small_examples():
    F = field_new(5)
    assert mul(F(2), F(3)) == F(1)
    assert inv(F(2)) == F(3)
    assert add(F(4), F(4)) == F(3)
    assert is_square(F(4)) and sqrt(F(4)) == F(2)
    assert sqrt(F(-1)) == F(2)
    assert sqrt(field_new(7)(-1)) is None


def test_inverse_of_zero():
    with pytest.raises(DivisionByZero):
        inv(field_new(7)(0))


def test_mismatched_fields():
    with pytest.raises(FieldMismatch):
        add(field_new(5)(1), field_new(7)(1))


@pytest.mark.parametrize("q", ODD_PRIME_POWERS)
def test_inverses_and_square_count(q):
    F = field_new(q)
    elems = F.elements()
    for a in elems[1:]:
        assert mul(a, inv(a)) == F.one
    squares = {mul(a, a) for a in elems if a}
    assert len(squares) == (q - 1) // 2
    assert all(is_square(a) == (a in squares or not a) for a in elems)
    for a in elems:
        r = sqrt(a)
        if r is not None:
            assert mul(r, r) == a
            assert r <= neg(r)


@pytest.mark.parametrize("q", ODD_PRIME_POWERS)
def test_sqrt_minus_one_criterion(q):
    F = field_new(q)
    assert has_sqrt_minus_one(F) == (q % 4 == 1) == (sqrt(neg(F.one)) is not None)


def test_sqrt_minus_one_in_f9():
    F = field_new(9)
    assert any(mul(a, a) == F.from_int(-1) for a in F.elements())
    assert has_sqrt_minus_one(F)


@pytest.mark.parametrize("q", [9, 25, 27])
def test_extension_field_axioms(q):
    """Exhaustive ring axioms on small extensions (independent of the table build)."""
    F = field_new(q)
    E = F.elements()
    for a, b in itertools.product(E, repeat=2):
        assert add(a, b) == add(b, a)
        assert mul(a, b) == mul(b, a)
        assert sub(add(a, b), b) == a
    for a, b, c in itertools.product(E[: min(q, 9)], E, E[: min(q, 9)]):
        assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
        assert mul(mul(a, b), c) == mul(a, mul(b, c))
    # additive order p
    assert F.from_int(F.p) == F.zero
    assert all(sum_p(a, F.p) == F.zero for a in E)


def sum_p(a, p):
    acc = a.params.zero
    for _ in range(p):
        acc = add(acc, a)
    return acc


def test_extension_modulus_is_least_irreducible():
    # x^2 + 1 is irreducible over F_3 and is the least monic quadratic without roots
    F = field_new(9)
    x = F.element((0, 1))
    assert mul(x, x) == F.from_int(-1)


@pytest.mark.parametrize("q", [9, 25, 27])
def test_code_text_round_trip(q):
    F = field_new(q)
    for c in range(q):
        assert F.parse_code(F.format_code(c)) == c
        assert len(F.format_code(c)) == F.n


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(ODD_PRIME_POWERS), st.data())
def test_field_laws_property(q, data):
    F = field_new(q)
    a, b, c = (F(data.draw(st.integers(0, q - 1))) for _ in range(3))
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
    assert add(a, neg(a)) == F.zero
    if b:
        assert mul(a * inv(b), b) == a
    assert (a < b) == (a.code < b.code)
