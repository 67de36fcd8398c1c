from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from defring.fields import (
    MAX_PRIME,
    DivisionByZero,
    FieldMismatch,
    FieldSpec,
    Scalar,
    format_scalar,
    is_prime,
)

F2 = FieldSpec.prime(2)
F3 = FieldSpec.prime(3)
F5 = FieldSpec.prime(5)
Q = FieldSpec.rationals()


def test_is_prime_small_range():
    primes = [n for n in range(30) if is_prime(n)]
    assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_modulus_validation():
    with pytest.raises(ValueError):
        FieldSpec.prime(4)
    with pytest.raises(ValueError):
        FieldSpec.prime(1)
    with pytest.raises(ValueError):
        FieldSpec.prime(MAX_PRIME)
    # largest prime below the cap is fine
    FieldSpec.prime(65521)


@pytest.mark.parametrize("field", [F2, F3], ids=repr)
def test_field_axioms_exhaustive(field):
    elems = list(field.elements())
    zero, one = field.zero(), field.one()
    for a, b, c in product(elems, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
    for a, b in product(elems, repeat=2):
        assert a + b == b + a
        assert a * b == b * a
    for a in elems:
        assert a + zero == a
        assert a * one == a
        assert a + (-a) == zero
        if not a.is_zero():
            assert a * a.inv() == one


def test_prime_canonical_residues():
    assert F5.scalar(7).value == 2
    assert F5.scalar(-1).value == 4
    assert F5.scalar(2) - 4 == F5.scalar(3)
    assert (F5.scalar(3) ** 4).is_one()


def test_rational_arithmetic_uses_fractions():
    half = Q.parse_literal("1/2")
    third = Q.parse_literal("1/3")
    assert (half + third).value == Fraction(5, 6)
    assert (half * third).value == Fraction(1, 6)
    assert (half / third).value == Fraction(3, 2)
    assert format_scalar(half - half) == "0"
    assert format_scalar(Q.scalar(Fraction(-4, 6))) == "-2/3"


def test_parse_literal():
    assert F5.parse_literal("-1") == F5.scalar(4)
    assert F5.parse_literal(" 12 ").value == 2
    assert Q.parse_literal("-3/6").value == Fraction(-1, 2)
    with pytest.raises(ValueError):
        F5.parse_literal("1/2")
    with pytest.raises(ValueError):
        Q.parse_literal("x")


def test_field_mismatch_and_division_errors():
    with pytest.raises(FieldMismatch):
        F2.scalar(1) + F3.scalar(1)
    with pytest.raises(FieldMismatch):
        Q.scalar(F5.scalar(1))
    with pytest.raises(DivisionByZero):
        F5.zero().inv()
    with pytest.raises(ValueError):
        list(Q.elements())


def test_repr_and_equality():
    assert repr(Q) == "Q"
    assert repr(F5) == "F_5"
    assert FieldSpec.prime(5) == F5
    assert F5 != Q
    assert len({F5.scalar(1), F5.scalar(6)}) == 1


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_f5_ring_laws_random(a, b, c):
    x, y, z = F5.scalar(a), F5.scalar(b), F5.scalar(c)
    assert (x + y) * z == x * z + y * z
    assert x - y == -(y - x)
    assert int((x * y).value) == (a * b) % 5


@given(
    st.fractions(min_value=-10, max_value=10, max_denominator=12),
    st.fractions(min_value=-10, max_value=10, max_denominator=12),
)
def test_rational_format_round_trip(a, b):
    s = Q.scalar(a) * Q.scalar(b) + Q.scalar(a)
    assert Q.parse_literal(format_scalar(s)) == s


@given(st.integers(1, 4), st.integers(-6, 6))
def test_f5_pow_matches_repeated_multiply(base, n):
    s = F5.scalar(base)
    expected = F5.one()
    step = s if n >= 0 else s.inv()
    for _ in range(abs(n)):
        expected = expected * step
    assert s ** n == expected
