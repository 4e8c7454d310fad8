import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diracdet.tensor import (
    DecompositionError,
    MalformedIndexError,
    Rank4Decomposition,
    TensorExpr,
    angular_average,
    angular_average_numeric,
    average_normalization,
    contract,
    decompose_rank2,
    decompose_rank4,
    epsilon,
    eta,
    levi_civita,
    pairings,
    scalar,
    sphere_quadrature,
    xi,
)

NU = ("nu1", "nu2", "nu3", "nu4")


def test_contractions():
    assert contract(eta("m", "n") * eta("m", "n")) == scalar(4)
    assert contract(epsilon("a", "b", "c", "d") * eta("a", "b")).is_zero()
    assert contract(eta("m", "n") * eta("n", "r") * eta("r", "s")) == eta("m", "s")


def test_triple_occurrence_rejected():
    with pytest.raises(MalformedIndexError):
        contract(eta("m", "n") * eta("m", "r") * eta("m", "s"))


def test_levi_civita_convention():
    assert levi_civita(1, 2, 3, 4) == 1
    assert levi_civita(2, 1, 3, 4) == -1
    assert levi_civita(1, 1, 3, 4) == 0


def test_low_order_averages():
    assert angular_average(scalar(1)) == scalar(1)
    assert angular_average(xi("a", "b")) == eta("a", "b").scale(Fraction(1, 4))
    assert angular_average(xi("a", "b", "c")).is_zero()
    four = eta("a", "b") * eta("c", "d") + eta("a", "c") * eta("b", "d") + eta("a", "d") * eta("b", "c")
    assert angular_average(xi("a", "b", "c", "d")) == four.scale(Fraction(1, 24))


def test_normalizations():
    assert [average_normalization(m) for m in range(4)] == [1, Fraction(1, 4), Fraction(1, 24), Fraction(1, 192)]
    assert [len(pairings(2 * m)) for m in range(5)] == [1, 1, 3, 15, 105]


def test_full_contraction_identity():
    for m in range(1, 5):
        labels = [f"x{j}" for j in range(2 * m)]
        expr = xi(*labels)
        for j in range(m):
            expr = expr * eta(labels[2 * j], labels[2 * j + 1]).scale(1)
        # xi.xi = 1 under the average
        avg = angular_average(xi(*labels))
        for j in range(m):
            avg = avg * eta(labels[2 * j], labels[2 * j + 1])
        assert contract(avg) == scalar(1)


def test_quadrature_weights():
    pts, w = sphere_quadrature(6)
    assert w.sum() == pytest.approx(1.0, abs=1e-14)
    assert (abs((pts**2).sum(axis=1) - 1) < 1e-12).all()


def test_six_fold_against_quadrature():
    labels = tuple(f"x{j}" for j in range(6))
    avg = angular_average(xi(*labels))
    for values in itertools.product(range(1, 5), repeat=6):
        a = dict(zip(labels, values))
        assert float(avg.evaluate(a).re) == pytest.approx(angular_average_numeric(labels, a, 6), abs=1e-10)


def test_decompose_examples():
    assert decompose_rank4(epsilon(*NU).scale(4), NU).as_tuple() == (0, 0, 0, 4)
    assert decompose_rank4(eta("nu1", "nu2") * eta("nu3", "nu4"), NU).as_tuple() == (1, 0, 0, 0)
    with pytest.raises(DecompositionError):
        decompose_rank4(eta("nu1", "nu2") * xi("nu3", "nu4"), NU)
    assert decompose_rank2(eta("nu1", "nu2").scale(3)) == 3


def test_decompose_rejects_bad_input():
    with pytest.raises(DecompositionError):
        decompose_rank2(xi("nu1", "nu2"))
    with pytest.raises(DecompositionError):
        decompose_rank4(eta("nu1", "zz") * eta("nu3", "nu4"), NU)
    with pytest.raises(DecompositionError):
        decompose_rank2(scalar(8))
    assert decompose_rank4(TensorExpr(), NU).as_tuple() == (0, 0, 0, 0)


coef = st.integers(-5, 5)


@settings(max_examples=40, deadline=None)
@given(coef, coef, coef, coef)
def test_decompose_roundtrip(a, b, c, d):
    dec = Rank4Decomposition(*(Fraction(x) for x in (a, b, c, d)))
    assert decompose_rank4(dec.reconstruct(NU), NU) == dec


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from(["a", "b", "c", "d", "e", "f"]), min_size=0, max_size=6, unique=True), coef, coef)
def test_average_linear(labels, p, q):
    e1 = xi(*labels)
    e2 = xi(*labels) * eta("g", "h")
    lhs = angular_average(e1.scale(p) + e2.scale(q))
    rhs = angular_average(e1).scale(p) + angular_average(e2).scale(q)
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(st.permutations(["a", "b", "c", "d"]))
def test_average_commutes_with_eta_contraction(perm):
    # contract one xi slot pair externally with a plain eta
    e = xi(*perm) * eta("a", "z")
    assert angular_average(contract(e)) == contract(angular_average(e))
