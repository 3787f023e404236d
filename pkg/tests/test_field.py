import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hermsig.errors import FieldMismatchError
from hermsig.field import (
    QQ,
    NumberField,
    enumerate_orderings,
    four_square_decomposition,
    sign_at,
)

SQRT2 = NumberField([-2, 0, 1])


def test_rationals_have_a_unique_ordering():
    assert len(enumerate_orderings(QQ)) == 1


def test_sqrt2_has_two_orderings_around_the_roots():
    orderings = enumerate_orderings(SQRT2)
    assert len(orderings) == 2
    neg, pos = orderings
    # isolating intervals bracket -sqrt(2) and sqrt(2)
    assert neg.lo < Fraction(-1415, 1000) < neg.hi or neg.lo < Fraction(-1414, 1000) < neg.hi
    assert pos.lo < Fraction(1415, 1000) < pos.hi or pos.lo < Fraction(1414, 1000) < pos.hi
    assert neg.hi <= pos.lo


def test_no_real_roots_gives_empty_ordering_space():
    field = NumberField([1, 0, 1])  # x^2 + 1
    assert enumerate_orderings(field) == []


def test_non_squarefree_poly_rejected():
    with pytest.raises(ValueError):
        NumberField([0, 0, 1])  # x^2


def test_enumeration_is_deterministic():
    f1 = NumberField([-2, 0, 1])
    f2 = NumberField([-2, 0, 1])
    iv1 = [(p.lo, p.hi) for p in enumerate_orderings(f1)]
    iv2 = [(p.lo, p.hi) for p in enumerate_orderings(f2)]
    assert iv1 == iv2


def test_ordering_count_matches_sturm_over_cauchy_bound():
    # number of orderings equals the root count over (-B, B)
    for coeffs in ([-2, 0, 1], [0, 1], [1, 0, 1], [-2, 0, 0, 1], [1, -3, 0, 1]):
        field = NumberField(coeffs)
        from hermsig.field import cauchy_bound, count_roots

        bound = cauchy_bound(field.min_poly)
        assert len(field.orderings) == count_roots(field.sturm, -bound, bound)


def test_sign_of_sqrt2_at_both_orderings():
    theta = SQRT2.gen
    neg, pos = SQRT2.orderings
    assert sign_at(theta, pos) == 1
    assert sign_at(theta, neg) == -1
    assert sign_at(SQRT2.zero, pos) == 0


def test_sign_of_zero_divisor_representative():
    # squarefree reducible modulus: x^2 - 1; x - 1 vanishes at the root 1
    field = NumberField([-1, 0, 1])
    a = field.element([-1, 1])
    right = next(p for p in field.orderings if p.midpoint > 0)
    left = next(p for p in field.orderings if p.midpoint < 0)
    assert sign_at(a, right) == 0
    assert sign_at(a, left) == -1


def test_field_mismatch_raises():
    with pytest.raises(FieldMismatchError):
        sign_at(SQRT2.gen, QQ.orderings[0])


def test_defining_relation_and_inverse():
    theta = SQRT2.gen
    assert theta * theta == 2
    assert theta.inverse() == theta / 2
    assert (theta.inverse() * theta) == 1
    a = SQRT2.element([3, -2])
    assert a + SQRT2.zero == a
    assert a * a.inverse() == 1


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        SQRT2.zero.inverse()


def test_sign_multiplicative_on_samples():
    rng = random.Random(7)
    elems = [SQRT2.element([rng.randint(-4, 4), rng.randint(-4, 4)]) for _ in range(30)]
    for p in SQRT2.orderings:
        for a in elems:
            for b in elems[:10]:
                assert sign_at(a * b, p) == sign_at(a, p) * sign_at(b, p)
                assert sign_at(a * a, p) in (0, 1)


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_field_arithmetic_matches_polynomial_identities(a0, a1, b0, b1):
    a = SQRT2.element([a0, a1])
    b = SQRT2.element([b0, b1])
    assert a + b == b + a
    assert a * b == b * a
    assert a * (a + b) == a * a + a * b


@given(st.fractions(min_value=Fraction(1, 32), max_value=60, max_denominator=32))
def test_four_square_reconstructs_input(r):
    c = four_square_decomposition(r)
    assert sum(v * v for v in c) == r


def test_four_square_frozen_values():
    one = Fraction(1)
    assert four_square_decomposition(1) == (one, 0, 0, 0)
    assert four_square_decomposition(7) == (2, 1, 1, 1)
    assert four_square_decomposition(Fraction(1, 2)) == (Fraction(1, 2), Fraction(1, 2), 0, 0)


def test_four_square_rejects_nonpositive():
    with pytest.raises(ValueError):
        four_square_decomposition(0)
    with pytest.raises(ValueError):
        four_square_decomposition(-3)


def test_cubic_field_single_ordering():
    field = NumberField([-2, 0, 0, 1])  # x^3 - 2
    orderings = enumerate_orderings(field)
    assert len(orderings) == 1
    theta = field.gen
    assert sign_at(theta, orderings[0]) == 1
    assert theta ** 3 == 2


def test_evaluate_poly_at_field_element():
    from hermsig.field import evaluate_poly

    theta = SQRT2.gen
    # p(t) = t^2 - 2 vanishes at the generator
    assert evaluate_poly([-2, 0, 1], theta).is_zero()
    assert evaluate_poly([Fraction(1, 2), 1], theta) == theta + Fraction(1, 2)
    assert evaluate_poly([], theta).is_zero()


def test_sign_at_near_root_refinement():
    # continued-fraction convergents of sqrt(2) alternate sides of the root
    theta = SQRT2.gen
    pos = SQRT2.orderings[1]
    num, den = 1, 1
    expected = 1  # 1/1 < sqrt2 so theta - 1 > 0
    for _ in range(12):
        a = theta - Fraction(num, den)
        assert sign_at(a, pos) == expected
        num, den = num + 2 * den, num + den
        expected = -expected


def test_sign_at_with_large_coefficients():
    # sqrt2 = 1.41421356237309504...
    theta = SQRT2.gen
    neg, pos = SQRT2.orderings
    above = SQRT2.element([-14142135623731, 10 ** 13])  # theta - 1.4142135623731
    assert sign_at(above, pos) == -1
    assert sign_at(above, neg) == -1
    below = SQRT2.element([-14142135623730, 10 ** 13])
    assert sign_at(below, pos) == 1
    assert sign_at(below, neg) == -1


def test_non_monic_min_poly_normalized():
    field = NumberField([-4, 0, 2])  # 2x^2 - 4
    assert field.min_poly == (Fraction(-2), Fraction(0), Fraction(1))
    assert len(field.orderings) == 2
