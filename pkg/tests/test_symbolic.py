from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fanoloc.symbolic import Polynomial, RationalFunction, add, equals, mul, normalize

ONE_MINUS_T = Polynomial((1, -1))


def P(*c):
    return Polynomial(c)


def test_polynomial_strips_trailing_zeros():
    assert P(1, 2, 0, 0).coeffs == (1, 2)
    assert P(0, 0).coeffs == ()
    assert Polynomial().is_zero()


def test_normalize_already_canonical():
    r = normalize(P(0, 0, 1), P(1))
    assert r.numerator == P(0, 0, 1) and r.denominator == P(1)


def test_normalize_cube_over_itself():
    cube = ONE_MINUS_T ** 3
    assert cube == P(1, -3, 3, -1)
    r = normalize(P(1, -3, 3, -1), cube)
    assert r.numerator == P(1) and r.denominator == P(1)


def test_normalize_content():
    r = normalize(P(2, -2), P(2))
    assert r.numerator == P(1, -1) and r.denominator == P(1)


def test_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        normalize(P(1), Polynomial())


def test_denominator_sign_is_canonical():
    r = RationalFunction(P(1), P(-1, -1))
    assert r.denominator.leading > 0
    assert r == RationalFunction(P(-1), P(1, 1))


def test_add_examples():
    a = RationalFunction(P(1), ONE_MINUS_T)
    b = RationalFunction(P(0, -1), ONE_MINUS_T)
    assert add(a, b) == RationalFunction(1)
    lo = RationalFunction(P(0, 0, 0, -1), ONE_MINUS_T ** 3)
    hi = RationalFunction(P(1), ONE_MINUS_T ** 3)
    # 1 - t^3 = (1 - t)(1 + t + t^2)
    assert lo + hi == RationalFunction(P(1, 1, 1), ONE_MINUS_T ** 2)


def test_mul_example():
    r = mul(RationalFunction(P(0, 0, 1), ONE_MINUS_T ** 3), RationalFunction(ONE_MINUS_T))
    assert r == RationalFunction(P(0, 0, 1), ONE_MINUS_T ** 2)


def test_equals_examples():
    assert not equals(RationalFunction(P(1, 0, 0, -1), ONE_MINUS_T ** 3), RationalFunction(1))
    assert equals(RationalFunction(P(1, -3, 3, -1), ONE_MINUS_T ** 3), RationalFunction(1))
    assert equals(RationalFunction(P(0), P(1)), RationalFunction(P(0), P(5)))


def test_gcd_of_shared_factor():
    f = P(1, 1) * P(2, 0, 1)
    g = P(1, 1) * P(-3, 1)
    assert f.gcd(g) == P(1, 1)


def test_render():
    assert str(RationalFunction(P(1, 1, 1), ONE_MINUS_T ** 2)) == "(1 + t + t^2) / (1 - t)^2"
    assert str(RationalFunction(P(3), ONE_MINUS_T)) == "(3) / (1 - t)"
    assert str(RationalFunction(P(1), P(1, 0, 1))) == "(1) / (1 + t^2)"
    assert str(RationalFunction(P(2, 1))) == "2 + t"


coeffs = st.lists(st.integers(-6, 6), min_size=0, max_size=4)
nonzero = coeffs.filter(lambda c: any(c))


@st.composite
def rational(draw):
    return RationalFunction(Polynomial(draw(coeffs)), Polynomial(draw(nonzero)))


def _cross(a, b):
    return a.numerator * b.denominator == b.numerator * a.denominator


@settings(max_examples=150, deadline=None)
@given(rational(), rational(), rational())
def test_field_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a - a == RationalFunction(0)


@settings(max_examples=150, deadline=None)
@given(rational(), rational())
def test_add_matches_cross_sum(a, b):
    num = a.numerator * b.denominator + b.numerator * a.denominator
    assert normalize(num, a.denominator * b.denominator) == add(a, b)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-6, 6), max_size=5), st.lists(st.integers(-6, 6), max_size=5).filter(any))
def test_normalize_idempotent_and_equality_by_cross_multiplication(n, d):
    r = normalize(Polynomial(n), Polynomial(d))
    assert normalize(r.numerator, r.denominator) == r
    raw = (Polynomial(n), Polynomial(d))
    assert raw[0] * r.denominator == r.numerator * raw[1]


@settings(max_examples=30, deadline=None)
@given(rational(), st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=7), min_size=100, max_size=100))
def test_evaluation_at_random_points(r, points):
    for x in points:
        d = r.denominator(x)
        if d == 0:
            continue
        # oracle: plain Horner evaluation with Fractions
        num = sum((Fraction(c) * x ** i for i, c in enumerate(r.numerator.coeffs)), Fraction(0))
        den = sum((Fraction(c) * x ** i for i, c in enumerate(r.denominator.coeffs)), Fraction(0))
        assert r(x) == num / den
