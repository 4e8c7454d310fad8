import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diracdet.clifford import (
    GAMMA5,
    SLASHED_XI,
    GammaSymbol,
    GammaWord,
    clifford_check,
    enum_trace_oracle,
    explicit_matrices,
    gamma,
    gamma_trace,
)
from diracdet.scalars import GaussianRational
from diracdet.tensor import eta, epsilon


def test_matrices_exact():
    m = explicit_matrices()
    assert set(m) == {1, 2, 3, 4, 5}
    diag = [m[5][i][i] for i in range(4)]
    assert diag == [GaussianRational(x) for x in (1, 1, -1, -1)]


def test_clifford_check_all_true():
    rep = clifford_check()
    assert len(rep) >= 21
    assert all(rep.values())


def test_gamma4_squared_is_identity():
    w = GammaWord((gamma(4), gamma(4)))
    assert enum_trace_oracle(w) == 4


def test_symbol_validation():
    with pytest.raises(ValueError):
        gamma(0)
    with pytest.raises(ValueError):
        GammaSymbol("xi", 1)


def test_basic_traces():
    assert gamma_trace(GammaWord(())).evaluate() == 4
    assert gamma_trace(GammaWord((gamma("m"), gamma("n")))) == eta("m", "n").scale(4)
    assert gamma_trace(GammaWord((gamma("m"),))).is_zero()
    assert gamma_trace(GammaWord((gamma("a"), gamma("b"), gamma("c")))).is_zero()
    w = GammaWord((GAMMA5, gamma(1), gamma(2), gamma(3), gamma(4)))
    assert gamma_trace(w).evaluate() == 4
    assert enum_trace_oracle(w) == 4
    assert gamma_trace(GammaWord((gamma(1), gamma(2), gamma(1), gamma(2)))).evaluate() == -4


def test_epsilon_trace_symbolic():
    w = GammaWord((gamma("a"), gamma("b"), gamma("c"), gamma("d"), GAMMA5))
    assert gamma_trace(w) == epsilon("a", "b", "c", "d").scale(4)


def test_slashed_xi_concrete_vector():
    w = GammaWord((SLASHED_XI, gamma(2), SLASHED_XI, gamma(2)))
    xi = (0, 1, 0, 0)
    assert gamma_trace(w, xi=xi).evaluate() == enum_trace_oracle(w, xi=xi) == 4


def test_length_ten_gamma5_word_refused():
    letters = tuple(gamma(f"a{j}") for j in range(10)) + (GAMMA5,)
    with pytest.raises(NotImplementedError):
        gamma_trace(GammaWord(letters))


letter = st.sampled_from([1, 2, 3, 4, 5])


def _word(idx):
    return GammaWord(tuple(GAMMA5 if i == 5 else gamma(i) for i in idx))


@settings(max_examples=300, deadline=None)
@given(st.lists(letter, max_size=9))
def test_concrete_trace_matches_oracle(idx):
    assert gamma_trace(_word(idx)).evaluate() == enum_trace_oracle(_word(idx))


@settings(max_examples=150, deadline=None)
@given(st.lists(letter, max_size=8), st.integers(0, 8))
def test_cyclicity(idx, k):
    rot = idx[k % len(idx) :] + idx[: k % len(idx)] if idx else idx
    assert gamma_trace(_word(rot)).evaluate() == gamma_trace(_word(idx)).evaluate()


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from([1, 2, 3, 4]), max_size=8))
def test_reversal(idx):
    assert gamma_trace(_word(idx[::-1])).evaluate() == gamma_trace(_word(idx)).evaluate()


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from(["a", "b", "c", "d", "e"]), min_size=1, max_size=7).filter(lambda w: len(w) % 2))
def test_odd_plain_count_vanishes(labels):
    letters = tuple(gamma(l) for l in labels) + (GAMMA5,)
    assert gamma_trace(GammaWord(letters)).is_zero()


def test_symbolic_six_gamma5_word_against_oracle():
    labels = [f"a{j}" for j in range(6)]
    sym = gamma_trace(GammaWord(tuple(gamma(l) for l in labels) + (GAMMA5,)))
    rng = random.Random(3)
    for _ in range(300):
        vals = [rng.randint(1, 4) for _ in labels]
        w = GammaWord(tuple(gamma(v) for v in vals) + (GAMMA5,))
        assert sym.evaluate(dict(zip(labels, vals))) == enum_trace_oracle(w)


def test_gamma5_moves_right_with_sign():
    for a, b in itertools.product(range(1, 5), repeat=2):
        left = GammaWord((GAMMA5, gamma(a), gamma(b)))
        assert gamma_trace(left).evaluate() == enum_trace_oracle(left) == 0
