"""Non-commutative polynomials in covariant derivatives and fields.

Two rings share one term representation:

* :class:`CovariantPolynomial` -- words in the operators ``D_mu`` (covariant
  derivative) and ``C_mu`` (axial field).
* :class:`FieldPolynomial` -- words in the matrix-valued functions ``V_mu``,
  ``C_mu`` and the gauge parameter ``lambda``, each carrying a sorted tuple of
  partial-derivative labels.

A term is ``coefficient * eps^{abcd} * letter letter ...``.  Index labels are
strings; a label used twice in one term is contracted with the Euclidean
metric, a label used once is free.  Canonical forms rename contracted labels
to ``~0, ~1, ...``.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping

from .scalars import ONE, ZERO, GaussianRational, I

__all__ = [
    "CovariantPolynomial",
    "FieldPolynomial",
    "UnboundIndexError",
    "MalformedTermError",
    "D",
    "C",
    "scalar",
    "eps",
    "commutator",
    "field_strength_chiral",
    "boundary_current",
    "build_expression",
    "canonicalize",
    "equal_modulo_cyclic",
    "apply_to_one",
    "derivative",
    "gauge_variation_vector",
    "field",
    "substitute_fields",
]

DUMMY = "~"


class UnboundIndexError(ValueError):
    """An index occurs once in a term but was not declared free."""


class MalformedTermError(ValueError):
    """An index occurs more than twice in one term."""


def _is_dummy(label) -> bool:
    return isinstance(label, str) and label.startswith(DUMMY)


def _label_key(label):
    if label is None:
        return (0, 0, "")
    if _is_dummy(label):
        return (2, int(label[1:]), "")
    return (1, 0, label)


def _eps_sort(eps):
    """Sort an epsilon tuple; returns (sign, sorted) or (0, None) on repeats."""
    if eps is None:
        return 1, None
    if len(set(eps)) < 4:
        return 0, None
    lst = list(eps)
    sign = 1
    for i in range(4):
        for j in range(3 - i):
            if _label_key(lst[j]) > _label_key(lst[j + 1]):
                lst[j], lst[j + 1] = lst[j + 1], lst[j]
                sign = -sign
    return sign, tuple(lst)


class _Poly:
    """Shared machinery; subclasses define the letter format."""

    __slots__ = ("terms",)
    LETTERS: tuple = ()

    def __init__(self, terms: Mapping | None = None):
        self.terms: dict = {}
        if terms:
            for (e, w), c in terms.items():
                self._add_raw(e, w, c)

    # letter helpers (overridden) ------------------------------------------------
    @staticmethod
    def _letter_labels(letter) -> tuple:
        raise NotImplementedError

    @staticmethod
    def _relabel_letter(letter, m):
        raise NotImplementedError

    @staticmethod
    def _letter_sort_key(letter):
        raise NotImplementedError

    # raw term handling ----------------------------------------------------------------
    def _add_raw(self, e, w, c):
        c = GaussianRational.coerce(c)
        if not c:
            return
        key = (e, tuple(w))
        new = self.terms.get(key, ZERO) + c
        if new:
            self.terms[key] = new
        else:
            self.terms.pop(key, None)

    @classmethod
    def _from_raw(cls, items: Iterable):
        out = cls()
        for e, w, c in items:
            out._add_raw(e, w, c)
        return out

    def _term_labels(self, e, w) -> dict:
        counts: dict = {}
        for l in itertools.chain(e or (), *(self._letter_labels(x) for x in w)):
            counts[l] = counts.get(l, 0) + 1
        for l, n in counts.items():
            if n > 2:
                raise MalformedTermError(f"index {l!r} occurs {n} times in one term")
        return counts

    def _canon_term(self, e, w, cyclic: bool):
        """Canonical (sign, eps, word) for one term, or None if it vanishes."""
        counts = self._term_labels(e, w)
        dummies = sorted((l for l, n in counts.items() if n == 2), key=_label_key)
        rotations = range(len(w)) if cyclic and w else (0,)
        best = None
        signs = set()
        for r in rotations:
            word = w[r:] + w[:r]
            for perm in self._candidate_maps(word, e, dummies):
                sgn, key, payload = self._apply_map(e, word, perm)
                if sgn == 0:
                    return None
                if best is None or key < best[1]:
                    best = (sgn, key, payload)
                    signs = {sgn}
                elif key == best[1]:
                    signs.add(sgn)
        if len(signs) > 1:
            return None
        return best[0], best[2][0], best[2][1]

    def _candidate_maps(self, word, e, dummies):
        names = [f"{DUMMY}{j}" for j in range(len(dummies))]
        if self._first_occurrence_is_canonical():
            order = []
            for x in word:
                for l in self._letter_labels(x):
                    if l in dummies and l not in order:
                        order.append(l)
            for l in e or ():
                if l in dummies and l not in order:
                    order.append(l)
            yield dict(zip(order, names))
            return
        for perm in itertools.permutations(names):
            yield dict(zip(dummies, perm))

    @staticmethod
    def _first_occurrence_is_canonical() -> bool:
        return False

    def _apply_map(self, e, word, m):
        new_w = tuple(self._relabel_letter(x, m) for x in word)
        sgn, new_e = _eps_sort(None if e is None else tuple(m.get(l, l) for l in e))
        key = (
            () if new_e is None else tuple(_label_key(l) for l in new_e),
            tuple(self._letter_sort_key(x) for x in new_w),
        )
        return sgn, key, (new_e, new_w)

    # public algebra ---------------------------------------------------------------------
    def canonical(self, cyclic: bool = False):
        out = type(self)()
        for (e, w), c in self.terms.items():
            res = self._canon_term(e, w, cyclic)
            if res is None:
                continue
            sgn, ne, nw = res
            out._add_raw(ne, nw, c * sgn)
        out.terms = dict(sorted(out.terms.items(), key=lambda kv: out._sort_key(kv[0])))
        return out

    def _sort_key(self, key):
        e, w = key
        return (len(w), tuple(self._letter_sort_key(x) for x in w), () if e is None else tuple(map(_label_key, e)))

    def __add__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        out = type(self)()
        out.terms = dict(self.terms)
        for (e, w), c in other.terms.items():
            out._add_raw(e, w, c)
        return out.canonical()

    def __neg__(self):
        out = type(self)()
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = GaussianRational.coerce(c)
        out = type(self)()
        if c:
            out.terms = {k: v * c for k, v in self.terms.items()}
        return out

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if not isinstance(other, _Poly):
            return self.scale(other)
        if type(other) is not type(self):
            raise TypeError("cannot multiply covariant and field polynomials")
        out = type(self)()
        for (e1, w1), c1 in self.terms.items():
            left = self._term_labels(e1, w1)
            for (e2, w2), c2 in other.terms.items():
                right = self._term_labels(e2, w2)
                # contracted labels of the right factor get fresh names
                used = set(left) | set(right)
                ren = {}
                fresh = (f"{DUMMY}{j}" for j in itertools.count())
                for l, n in right.items():
                    if n == 2 and l in left:
                        name = next(f for f in fresh if f not in used)
                        used.add(name)
                        ren[l] = name
                w2r = tuple(self._relabel_letter(x, ren) for x in w2)
                e2r = None if e2 is None else tuple(ren.get(l, l) for l in e2)
                if e1 is not None and e2r is not None:
                    raise NotImplementedError("products of two epsilon symbols are not supported")
                out._add_raw(e1 if e1 is not None else e2r, w1 + w2r, c1 * c2)
        return out.canonical()

    def __eq__(self, other):
        if isinstance(other, type(self)):
            return (self - other).is_zero()
        if other == 0:
            return self.is_zero()
        return NotImplemented

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.canonical().terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        for (e, w), c in self.terms.items():
            yield c, e, w

    def free_indices(self) -> set:
        out = set()
        for e, w in self.terms:
            out.update(l for l, n in self._term_labels(e, w).items() if n == 1)
        return out

    def rename(self, mapping: Mapping):
        """Rename free labels."""
        out = type(self)()
        for (e, w), c in self.terms.items():
            out._add_raw(
                None if e is None else tuple(mapping.get(l, l) for l in e),
                tuple(self._relabel_letter(x, mapping) for x in w),
                c,
            )
        return out.canonical()

    def filter(self, pred):
        out = type(self)()
        for (e, w), c in self.terms.items():
            if pred(e, w):
                out._add_raw(e, w, c)
        return out

    # display ------------------------------------------------------------------------------
    def __repr__(self):
        return f"{type(self).__name__}({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (e, w), c in self.terms.items():
            fac = []
            if e is not None:
                fac.append("eps(" + ",".join(e) + ")")
            fac.extend(self._letter_str(x) for x in w)
            parts.append(f"({c})" + ("*" + " ".join(fac) if fac else ""))
        return " + ".join(parts)

    def to_json(self) -> list:
        return [
            {
                "coeff": c.to_json(),
                "epsilon": None if e is None else list(e),
                "word": [self._letter_json(x) for x in w],
            }
            for (e, w), c in self.canonical().terms.items()
        ]

    def latex(self) -> str:
        can = self.canonical()
        if not can.terms:
            return "0"
        greek = _GreekNamer()
        out = []
        for (e, w), c in can.terms.items():
            body = ""
            if e is not None:
                body += r"\epsilon^{" + "".join(greek(l) for l in e) + "}"
            body += "".join(self._letter_latex(x, greek) for x in w)
            coeff = c.latex()
            if c == 1 and body:
                coeff = ""
            elif c == -1 and body:
                coeff = "-"
            elif not (c.is_real() or c.is_imaginary()):
                coeff = rf"\left({coeff}\right)"
            term = coeff + body
            if out and not term.startswith("-"):
                term = "+ " + term
            elif out:
                term = "- " + term[1:]
            out.append(term)
        return " ".join(out)


class _GreekNamer:
    _NAMES = ["alpha", "beta", "gamma", "delta", "rho", "sigma", "tau", "kappa"]
    _FREE = {"mu", "nu", "rho", "sigma", "alpha", "beta", "kappa", "lambda", "tau"}

    def __init__(self):
        self.seen: dict = {}

    def __call__(self, label) -> str:
        if _is_dummy(label):
            return "\\" + self._NAMES[int(label[1:]) % len(self._NAMES)]
        if label in self._FREE:
            return "\\" + label
        return f"{{{label}}}"


# covariant polynomials -----------------------------------------------------------------


class CovariantPolynomial(_Poly):
    """Sum of words in ``D_mu`` and ``C_mu``; letters are ``(kind, label)``."""

    __slots__ = ()
    LETTERS = ("D", "C")

    @staticmethod
    def _letter_labels(letter):
        return (letter[1],)

    @staticmethod
    def _relabel_letter(letter, m):
        return (letter[0], m.get(letter[1], letter[1]))

    @staticmethod
    def _letter_sort_key(letter):
        return (letter[0], _label_key(letter[1]))

    @staticmethod
    def _first_occurrence_is_canonical():
        return True

    @staticmethod
    def _letter_str(letter):
        return f"{letter[0]}_{letter[1]}"

    @staticmethod
    def _letter_json(letter):
        return [letter[0], letter[1]]

    @staticmethod
    def _letter_latex(letter, greek):
        return f"{letter[0]}_{{{greek(letter[1])}}}"


def D(label: str) -> CovariantPolynomial:
    return CovariantPolynomial._from_raw([(None, (("D", label),), ONE)])


def C(label: str) -> CovariantPolynomial:
    return CovariantPolynomial._from_raw([(None, (("C", label),), ONE)])


def scalar(c, cls=CovariantPolynomial):
    return cls._from_raw([(None, (), c)])


def eps(a, b, c, d, cls=CovariantPolynomial):
    return cls._from_raw([((a, b, c, d), (), ONE)])


def commutator(x, y):
    """[x, y] = xy - yx."""
    return x * y - y * x


def field_strength_chiral(sign: int, mu: str, nu: str) -> CovariantPolynomial:
    """i [D_mu + sign*i*C_mu, D_nu + sign*i*C_nu]."""
    s = GaussianRational(0, sign)
    a = D(mu) + C(mu).scale(s)
    b = D(nu) + C(nu).scale(s)
    return commutator(a, b).scale(I)


def boundary_current(mu: str, dummy: str = "nu") -> CovariantPolynomial:
    """2 C_mu i[D_nu, C_nu] - 2 C_nu i[D_nu, C_mu] + 2 i[D_mu, C_nu C_nu]."""
    nu = dummy
    t1 = C(mu) * commutator(D(nu), C(nu))
    t2 = C(nu) * commutator(D(nu), C(mu))
    t3 = commutator(D(mu), C(nu) * C(nu))
    return (t1 - t2 + t3).scale(GaussianRational(0, 2))


# expression trees ----------------------------------------------------------------------------


def build_expression(tree, free: Iterable[str] = ()) -> CovariantPolynomial:
    """Expand a nested expression into a covariant polynomial.

    Node forms (tuples or lists):
      ("D", mu) ("C", mu)                       generators
      ("F+", mu, nu) ("F-", mu, nu)             chiral curvatures
      ("J", mu)                                 boundary current
      ("eps", a, b, c, d) ("eta", a, b)         invariant tensors
      ("comm", x, y) ("sum", x, ...) ("prod", x, ...)
      ("scale", c, x)                           c: int, Fraction or GaussianRational
    Every label used once in a term must appear in ``free``.
    """
    poly = _build(tree)
    free = set(free)
    for e, w in poly.terms:
        counts = poly._term_labels(e, w)
        loose = {l for l, n in counts.items() if n == 1} - free
        if loose:
            raise UnboundIndexError(f"unbound index {sorted(loose)} in {tree!r}")
    return poly


def _build(node) -> CovariantPolynomial:
    if isinstance(node, CovariantPolynomial):
        return node
    if not isinstance(node, (tuple, list)) or not node:
        raise ValueError(f"malformed expression node {node!r}")
    head, *args = node
    if head in ("D", "C"):
        return D(args[0]) if head == "D" else C(args[0])
    if head in ("F+", "F-"):
        return field_strength_chiral(1 if head == "F+" else -1, args[0], args[1])
    if head == "J":
        return boundary_current(args[0], *args[1:])
    if head == "eps":
        return eps(*args)
    if head == "eta":
        raise ValueError("('eta', a, b) is only allowed as a factor inside ('prod', ...)")
    if head == "comm":
        return commutator(_build(args[0]), _build(args[1]))
    if head == "sum":
        out = CovariantPolynomial()
        for a in args:
            out = out + _build(a)
        return out
    if head == "prod":
        factors = list(args)
        etas = [f for f in factors if isinstance(f, (tuple, list)) and f and f[0] == "eta"]
        rest = [f for f in factors if f not in etas]
        out = scalar(1)
        for f in rest:
            out = out * _build(f)
        for _, a, b in etas:
            out = out.rename({b: a})
        return out
    if head == "scale":
        c, x = args
        return _build(x).scale(c)
    raise ValueError(f"unknown expression head {head!r}")


# field polynomials --------------------------------------------------------------------------


class FieldPolynomial(_Poly):
    """Sum of words in ``V``, ``C`` and ``L`` (the gauge parameter).

    Letters are ``(kind, label, derivs)``; ``label`` is ``None`` for ``L``.
    """

    __slots__ = ()
    LETTERS = ("V", "C", "L")

    @staticmethod
    def _letter_labels(letter):
        return ((letter[1],) if letter[1] is not None else ()) + letter[2]

    @staticmethod
    def _relabel_letter(letter, m):
        kind, lab, ders = letter
        ders = tuple(sorted((m.get(d, d) for d in ders), key=_label_key))
        return (kind, m.get(lab, lab) if lab is not None else None, ders)

    @staticmethod
    def _letter_sort_key(letter):
        return (letter[0], _label_key(letter[1]), tuple(map(_label_key, letter[2])))

    @staticmethod
    def _letter_str(letter):
        kind, lab, ders = letter
        base = "lambda" if kind == "L" else f"{kind}_{lab}"
        return "".join(f"d_{d}" for d in ders) + (f"({base})" if ders else base)

    @staticmethod
    def _letter_json(letter):
        return [letter[0], letter[1], list(letter[2])]

    @staticmethod
    def _letter_latex(letter, greek):
        kind, lab, ders = letter
        base = r"\lambda" if kind == "L" else f"{kind}_{{{greek(lab)}}}"
        if not ders:
            return base
        return "(" + "".join(rf"\partial_{{{greek(d)}}}" for d in ders) + base + ")"


def field(kind: str, label=None, derivs=()) -> FieldPolynomial:
    if kind not in FieldPolynomial.LETTERS:
        raise ValueError(f"unknown field {kind!r}")
    if (kind == "L") != (label is None):
        raise ValueError("the gauge parameter carries no index; V and C need one")
    ders = tuple(sorted(derivs, key=_label_key))
    return FieldPolynomial._from_raw([(None, ((kind, label, ders),), ONE)])


def derivative(p: FieldPolynomial, label: str) -> FieldPolynomial:
    """Partial derivative d_label applied by the Leibniz rule."""
    out = FieldPolynomial()
    for (e, w), c in p.terms.items():
        for j, (kind, lab, ders) in enumerate(w):
            new = (kind, lab, tuple(sorted(ders + (label,), key=_label_key)))
            out._add_raw(e, w[:j] + (new,) + w[j + 1 :], c)
    return out.canonical()


def apply_to_one(p: CovariantPolynomial) -> FieldPolynomial:
    """Act with each operator word on the constant function 1.

    ``D_mu f = -i d_mu f + V_mu f`` and ``C_mu f = C_mu f``; words act from
    the right.
    """
    minus_i = GaussianRational(0, -1)
    total = FieldPolynomial()
    for (e, w), c in p.terms.items():
        cur = FieldPolynomial._from_raw([(e, (), c)])
        for kind, lab in reversed(w):
            if kind == "C":
                cur = _left_mul(("C", lab, ()), cur)
            else:
                # no canonicalization mid-word: pending letters still use the original labels
                nxt = _left_mul(("V", lab, ()), cur)
                for (e2, w2), c2 in _derivative_raw(cur, lab).terms.items():
                    nxt._add_raw(e2, w2, c2 * minus_i)
                cur = nxt
        for (e2, w2), c2 in cur.terms.items():
            total._add_raw(e2, w2, c2)
    return total.canonical()


def _left_mul(letter, p: FieldPolynomial) -> FieldPolynomial:
    out = FieldPolynomial()
    for (e, w), c in p.terms.items():
        out._add_raw(e, (letter,) + w, c)
    return out


def _derivative_raw(p: FieldPolynomial, label) -> FieldPolynomial:
    out = FieldPolynomial()
    for (e, w), c in p.terms.items():
        for j, (kind, lab, ders) in enumerate(w):
            new = (kind, lab, tuple(sorted(ders + (label,), key=_label_key)))
            out._add_raw(e, w[:j] + (new,) + w[j + 1 :], c)
    return out


def _derivs_of_product(letters: list, ders: tuple):
    """Distribute a multi-derivative over a product: yields letter tuples."""
    n = len(letters)
    for assign in itertools.product(range(n), repeat=len(ders)):
        out = [list(l) for l in letters]
        for d, j in zip(ders, assign):
            out[j][2] = out[j][2] + (d,)
        yield tuple((k, l, tuple(sorted(ds, key=_label_key))) for k, l, ds in out)


def gauge_variation_vector(p: FieldPolynomial) -> FieldPolynomial:
    """First-order change under V -> V + d lambda + i[V, lambda], C -> C + i[C, lambda]."""
    out = FieldPolynomial()
    for (e, w), c in p.terms.items():
        if any(x[0] == "L" for x in w):
            raise ValueError("input already depends on the gauge parameter")
        for j, (kind, lab, ders) in enumerate(w):
            pre, post = w[:j], w[j + 1 :]
            pieces = []
            if kind == "V":
                # d_{ders} d_lab lambda
                pieces.append((ONE, [("L", None, (lab,))]))
            base = (kind, lab, ())
            pieces.append((I, [base, ("L", None, ())]))
            pieces.append((-I, [("L", None, ()), base]))
            for coeff, letters in pieces:
                for prod in _derivs_of_product([list(x) for x in letters], ders):
                    out._add_raw(e, pre + prod + post, c * coeff)
    return out.canonical()


def substitute_fields(p: FieldPolynomial, rules: Mapping) -> FieldPolynomial:
    """Replace field kinds: ``rules[kind] = (new_kind, factor)`` or ``None`` for zero."""
    out = FieldPolynomial()
    for (e, w), c in p.terms.items():
        coeff = c
        new_w = []
        for kind, lab, ders in w:
            if kind in rules:
                rule = rules[kind]
                if rule is None:
                    coeff = ZERO
                    break
                new_kind, factor = rule
                coeff = coeff * factor
                new_w.append((new_kind, lab, ders))
            else:
                new_w.append((kind, lab, ders))
        if coeff:
            out._add_raw(e, tuple(new_w), coeff)
    return out.canonical()


# module-level wrappers ---------------------------------------------------------------------------


def canonicalize(p: _Poly, modulo_cyclic: bool = False) -> _Poly:
    """Unique normal form; with ``modulo_cyclic`` words are identified up to rotation."""
    return p.canonical(cyclic=modulo_cyclic)


def equal_modulo_cyclic(p: _Poly, q: _Poly) -> bool:
    return not (p - q).canonical(cyclic=True).terms
