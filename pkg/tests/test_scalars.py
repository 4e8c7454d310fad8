from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from diracdet.scalars import I, ONE, ZERO, GaussianRational, PiCoefficient

fracs = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 1000)
gauss = st.builds(GaussianRational, fracs, fracs)


def test_imaginary_unit():
    assert I * I == -ONE
    assert I.conjugate() == -I
    assert (ONE + I).is_real() is False
    assert I.is_imaginary()


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_float_complex_rejected():
    with pytest.raises(TypeError):
        GaussianRational.coerce(1.5j)


def test_json_roundtrip():
    z = GaussianRational(Fraction(-3, 7), Fraction(5, 2))
    assert GaussianRational.from_json(z.to_json()) == z


def test_pi_coefficient_text():
    assert str(PiCoefficient(Fraction(1, 24), -2)) == "1/(24 pi^2)"
    assert PiCoefficient(Fraction(1, 24), -2) / 4 == PiCoefficient(Fraction(1, 96), -2)
    assert float(PiCoefficient(1, -2)) == pytest.approx(1 / 9.869604401089358)


@given(gauss, gauss, gauss)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if b:
        assert (a / b) * b == a


@given(gauss)
def test_hash_consistent_with_eq(a):
    assert hash(a) == hash(GaussianRational(a.re, a.im))
