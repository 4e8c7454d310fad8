from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diracdet.integrals import (
    IntegralDomainError,
    UnsupportedParityError,
    beta_exact,
    i_exact_value,
    i_numeric,
    i_series,
    log_coeff_f_independence,
    n_integral,
    n_integral_numeric,
    whole_line_integral,
)

# closed form with the +i0 prescription, cross-checked by contour quadrature
N_VALUES = {
    (2, 0): Fraction(-1, 4),
    (2, 2): Fraction(1, 4),
    (4, 0): Fraction(1, 24),
    (4, 2): Fraction(-1, 24),
    (4, 4): Fraction(1, 8),
    (6, 0): Fraction(-1, 120),
    (6, 2): Fraction(1, 120),
    (6, 6): Fraction(1, 12),
}


def test_beta():
    assert beta_exact(1, 1) == 1
    assert beta_exact(2, 3) == Fraction(1, 12)
    with pytest.raises(IntegralDomainError):
        beta_exact(0, 2)


@pytest.mark.parametrize(("nk", "value"), sorted(N_VALUES.items()))
def test_n_closed_form(nk, value):
    assert n_integral(*nk).value == value


@pytest.mark.parametrize("nk", [(2, 0), (2, 2), (4, 0), (4, 2), (4, 4), (6, 2)])
def test_n_numeric_oracle(nk):
    assert n_integral_numeric(*nk) == pytest.approx(float(n_integral(*nk).value), abs=1e-6)


def test_n_errors():
    with pytest.raises(UnsupportedParityError):
        n_integral(2, 1)
    with pytest.raises(IntegralDomainError):
        n_integral(2, 4)
    with pytest.raises(IntegralDomainError):
        n_integral(0, 0)


def test_i_series_n2():
    assert i_series(2, 0, 4).coefficients[:5] == (Fraction(1, 2), 0, Fraction(-3, 2), 0, Fraction(5, 2))
    assert i_series(2, 1, 4).coefficients[:5] == (Fraction(-1, 2), 0, Fraction(1, 2), 0, Fraction(-1, 2))
    assert i_series(2, 2, 4) == i_series(2, 1, 4).__class__(i_series(2, 1, 4).coefficients, 2, 2)
    assert i_series(2, 3, 4).coefficients == i_series(2, 0, 4).coefficients


def test_i_series_n4():
    expected = [
        (Fraction(1, 4), Fraction(-5, 2)),
        (Fraction(-5, 12), Fraction(3, 2)),
        (Fraction(1, 4), Fraction(-1, 2)),
    ]
    expected += expected[::-1]
    for k, (c0, c2) in enumerate(expected):
        s = i_series(4, k, 2)
        assert (s.coefficient(0), s.coefficient(2)) == (c0, c2)


def test_i_series_rejects_odd_n():
    with pytest.raises(ValueError):
        i_series(3, 1)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([2, 4, 6]), st.data())
def test_i_series_even(n, data):
    k = data.draw(st.integers(0, n + 1))
    assert i_series(n, k, 8).is_even()


@pytest.mark.parametrize("n", [2, 4])
def test_i_series_against_quadrature(n):
    for k in range(n + 2):
        s = i_series(n, k, 6)
        for eta in (0.05, 0.1):
            assert s.evaluate(eta) == pytest.approx(i_numeric(n, k, eta), abs=200 * eta**8)
            assert i_exact_value(n, k, eta).real == pytest.approx(i_numeric(n, k, eta), abs=1e-8)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_whole_line_vanishes(n):
    for k in range(n + 2):
        assert abs(whole_line_integral(n, k)) < 1e-9


def test_f_independence():
    r = log_coeff_f_independence()
    for name in ("step", "gaussian", "rescaled"):
        assert r[name]["slope"] == pytest.approx(1.0, abs=1e-4)
    assert r["gaussian"]["intercept"] - r["rescaled"]["intercept"] == pytest.approx(-0.6931471805599453, abs=1e-5)
