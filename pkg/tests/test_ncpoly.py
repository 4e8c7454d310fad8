import itertools
import random

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from diracdet import ncpoly as nc
from diracdet.ncpoly import C, D, CovariantPolynomial, UnboundIndexError, build_expression, commutator
from diracdet.scalars import I, GaussianRational


def test_commutator_expansion():
    c = build_expression(("comm", ("D", "m"), ("D", "n")), free=("m", "n"))
    assert c == D("m") * D("n") - D("n") * D("m")
    assert (commutator(D("m"), D("n")) + commutator(D("n"), D("m"))).is_zero()


def test_cyclic_two_letter():
    p = D("m") * C("m") - C("m") * D("m")
    assert not p.is_zero()
    assert nc.canonicalize(p, modulo_cyclic=True).is_zero()


def test_equal_modulo_cyclic_distinguishes():
    assert not nc.equal_modulo_cyclic(D("m"), C("m"))


def test_field_strength_terms():
    f = build_expression(("F+", "m", "n"), free=("m", "n"))
    assert len(f.canonical()) == 8
    assert f == nc.field_strength_chiral(1, "m", "n")


def test_boundary_current_expansion():
    j = build_expression(("J", "m"), free=("m",))
    hand = (
        (C("m") * commutator(D("n"), C("n"))).scale(2 * I)
        - (C("n") * commutator(D("n"), C("m"))).scale(2 * I)
        + commutator(D("m"), C("n") * C("n")).scale(2 * I)
    )
    assert j == hand


def test_unbound_index():
    with pytest.raises(UnboundIndexError):
        build_expression(("prod", ("D", "m"), ("C", "n")), free=("m",))
    with pytest.raises(ValueError):
        build_expression(("eta", "m", "n"))
    p = build_expression(("prod", ("D", "m"), ("C", "n"), ("eta", "m", "n")))
    assert p == D("m") * C("m")


def test_apply_to_one_examples():
    assert nc.apply_to_one(D("m")) == nc.field("V", "m")
    assert nc.apply_to_one(C("m")) == nc.field("C", "m")
    got = nc.apply_to_one(D("a") * C("b"))
    want = nc.field("C", "b", ("a",)).scale(GaussianRational(0, -1)) + nc.field("V", "a") * nc.field("C", "b")
    assert got == want


def test_gauge_variation_examples():
    lam = nc.field("L")
    v = nc.gauge_variation_vector(nc.field("V", "m"))
    assert v == nc.field("L", None, ("m",)) + (nc.field("V", "m") * lam - lam * nc.field("V", "m")).scale(I)
    with pytest.raises(ValueError):
        nc.gauge_variation_vector(lam)


def test_gauge_variation_curvature_and_control():
    for sign in (1, -1):
        f = nc.apply_to_one(nc.field_strength_chiral(sign, "m", "n"))
        assert nc.gauge_variation_vector(f * f).canonical(cyclic=True).is_zero()
    s2 = nc.apply_to_one(C("m") * C("m") - D("m") * D("m"))
    assert not nc.gauge_variation_vector(s2).canonical(cyclic=True).is_zero()


# apply_to_one against explicit matrix-valued fields -------------------------------------------

X = sp.symbols("x1:5")


def _random_field(rng):
    def entry():
        return sum(rng.randint(-2, 2) * m for m in (1, X[0], X[1], X[2], X[3], X[0] * X[1], X[2] ** 2, X[3] * X[1]))

    return sp.Matrix(2, 2, lambda i, j: entry() + sp.I * entry())


@pytest.fixture(scope="module")
def fields():
    rng = random.Random(11)
    return {"V": [_random_field(rng) for _ in range(4)], "C": [_random_field(rng) for _ in range(4)]}


def _act(word, assign, fields, f):
    for kind, lab in reversed(word):
        mu = assign[lab]
        if kind == "C":
            f = fields["C"][mu - 1] * f
        else:
            f = fields["V"][mu - 1] * f - sp.I * f.diff(X[mu - 1])
    return f


def _eval_field_poly(p, assign, fields):
    total = sp.zeros(2, 2)
    for c, e, w in p:
        assert e is None
        m = sp.eye(2)
        for kind, lab, ders in w:
            g = fields[kind][assign[lab] - 1]
            for d in ders:
                g = g.diff(X[assign[d] - 1])
            m = m * g
        total += (
            sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(c.im.numerator, c.im.denominator)
        ) * m
    return total


def test_apply_to_one_matches_explicit_fields(fields):
    point = {x: v for x, v in zip(X, (sp.Rational(1, 3), -1, 2, sp.Rational(1, 2)))}
    labels = "abc"
    rng = random.Random(5)
    for length in (1, 2, 3):
        for kinds in itertools.product("DC", repeat=length):
            word = tuple(zip(kinds, labels))
            poly = nc.scalar(1)
            for k, l in word:
                poly = poly * (D(l) if k == "D" else C(l))
            fp = nc.apply_to_one(poly)
            for _ in range(4):
                assign = {l: rng.randint(1, 4) for l in labels}
                want = _act(word, assign, fields, sp.eye(2)).subs(point)
                got = _eval_field_poly(fp, assign, fields).subs(point)
                assert (want - got).expand() == sp.zeros(2, 2)


# properties ------------------------------------------------------------------------------------

letters = st.tuples(st.sampled_from("DC"), st.sampled_from("abcd"))


def _poly(word, coeff=1):
    p = nc.scalar(coeff)
    for k, l in word:
        p = p * (D(l) if k == "D" else C(l))
    return p


words = st.lists(letters, min_size=1, max_size=4).filter(
    lambda w: all(sum(1 for _, l in w if l == x) <= 2 for x in "abcd")
)


@settings(max_examples=80, deadline=None)
@given(words, words)
def test_canonical_idempotent_and_congruent(w1, w2):
    p, q = _poly(w1), _poly(w2, 3)
    if p.free_indices() != q.free_indices():
        return
    for cyc in (False, True):
        cp = p.canonical(cyclic=cyc)
        assert cp.canonical(cyclic=cyc) == cp
        lhs = (p + q).canonical(cyclic=cyc)
        rhs = (p.canonical(cyclic=cyc) + q.canonical(cyclic=cyc)).canonical(cyclic=cyc)
        assert lhs.to_json() == rhs.to_json()


@settings(max_examples=80, deadline=None)
@given(words, words)
def test_commutators_vanish_cyclically(w1, w2):
    x, y = _poly(w1), _poly(w2)
    assert commutator(x, y).canonical(cyclic=True).is_zero()


@settings(max_examples=80, deadline=None)
@given(words, st.integers(0, 3))
def test_rotation_invariance(w, k):
    k %= len(w)
    assert nc.equal_modulo_cyclic(_poly(w), _poly(w[k:] + w[:k]))


@settings(max_examples=60, deadline=None)
@given(words)
def test_dummy_renaming_invariant(w):
    p = _poly(w)
    mapping = {"a": "z1", "b": "z2", "c": "z3", "d": "z4"}
    renamed = _poly([(k, mapping[l]) for k, l in w])
    if p.free_indices():
        return
    assert p == renamed


@settings(max_examples=40, deadline=None)
@given(words, words)
def test_apply_to_one_linear(w1, w2):
    p, q = _poly(w1), _poly(w2, 2)
    assert nc.apply_to_one(p + q) == nc.apply_to_one(p) + nc.apply_to_one(q)


def test_json_and_latex_stable():
    p = nc.field_strength_chiral(1, "m", "n")
    assert p.to_json() == build_expression(("F+", "m", "n"), free=("m", "n")).to_json()
    assert "C" in p.latex() and "D" in p.latex()


def test_covariant_field_mixing_rejected():
    with pytest.raises(TypeError):
        D("m") * nc.field("V", "m")
    assert isinstance(D("m") * C("m"), CovariantPolynomial)
