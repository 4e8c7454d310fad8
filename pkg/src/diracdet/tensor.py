"""Index expressions built from the Euclidean metric, the Levi-Civita symbol and
unit-vector components.

Labels are either symbolic (``str``) or concrete (``int`` in 1..4).  A label that
occurs twice inside one term is summed over; a label that occurs once is free.
Because the metric is the identity, upper and lower positions are not tracked.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping

import numpy as np

from .scalars import ONE, ZERO, GaussianRational

__all__ = [
    "TensorExpr",
    "Rank4Decomposition",
    "MalformedIndexError",
    "DecompositionError",
    "eta",
    "epsilon",
    "xi",
    "scalar",
    "contract",
    "angular_average",
    "average_normalization",
    "pairings",
    "decompose_rank4",
    "decompose_rank2",
    "levi_civita",
    "sphere_quadrature",
    "angular_average_numeric",
]

DIM = 4


class MalformedIndexError(ValueError):
    """An index label occurs more than twice in one term."""


class DecompositionError(ValueError):
    """An expression does not lie in the span of the requested basis."""


def _lk(label):
    # total order on mixed int/str labels
    return (0, label, "") if isinstance(label, int) else (1, 0, label)


def levi_civita(a: int, b: int, c: int, d: int) -> int:
    """Sign of the permutation (a,b,c,d) of (1,2,3,4); zero on repeats."""
    t = [a, b, c, d]
    if len(set(t)) < 4:
        return 0
    sign = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if t[i] > t[j]:
                sign = -sign
    return sign


def _perm_sign(seq) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if _lk(seq[i]) > _lk(seq[j]):
                sign = -sign
    return sign


def _normalize(etas, eps, xis):
    """Return ``(factor, key)`` for a raw monomial, or ``None`` if it vanishes."""
    factor = 1
    new_etas = []
    for a, b in etas:
        if isinstance(a, int) and isinstance(b, int):
            if a != b:
                return None
            continue
        new_etas.append((a, b) if _lk(a) <= _lk(b) else (b, a))
    if eps is not None:
        if len(set(eps)) < 4:
            return None
        if all(isinstance(x, int) for x in eps):
            factor *= levi_civita(*eps)
            eps = None
        else:
            factor *= _perm_sign(eps)
            eps = tuple(sorted(eps, key=_lk))
    new_etas.sort(key=lambda p: (_lk(p[0]), _lk(p[1])))
    xis = tuple(sorted(xis, key=_lk))
    return factor, (tuple(new_etas), eps, xis)


class TensorExpr:
    """Linear combination of monomials ``eta...eta * eps * xi...xi``.

    Each monomial key is ``(etas, eps, xis)``: a sorted tuple of label pairs,
    an optional sorted 4-tuple for the Levi-Civita factor and a sorted tuple of
    unit-vector component labels.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms: dict = {}
        if terms:
            for key, c in terms.items():
                self._accumulate(key[0], key[1], key[2], c)

    def _accumulate(self, etas, eps, xis, coeff):
        norm = _normalize(etas, eps, xis)
        if norm is None:
            return
        f, key = norm
        c = GaussianRational.coerce(coeff) * f
        if not c:
            return
        new = self.terms.get(key, ZERO) + c
        if new:
            self.terms[key] = new
        else:
            self.terms.pop(key, None)

    @classmethod
    def from_monomials(cls, monos: Iterable) -> "TensorExpr":
        out = cls()
        for coeff, etas, eps, xis in monos:
            out._accumulate(tuple(etas), eps, tuple(xis), coeff)
        return out

    # algebra ---------------------------------------------------------------
    def copy(self) -> "TensorExpr":
        out = TensorExpr()
        out.terms = dict(self.terms)
        return out

    def __add__(self, other: "TensorExpr") -> "TensorExpr":
        out = self.copy()
        for (e, p, x), c in other.terms.items():
            out._accumulate(e, p, x, c)
        return out

    def __sub__(self, other: "TensorExpr") -> "TensorExpr":
        return self + (-other)

    def __neg__(self) -> "TensorExpr":
        out = TensorExpr()
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def scale(self, c) -> "TensorExpr":
        c = GaussianRational.coerce(c)
        if not c:
            return TensorExpr()
        out = TensorExpr()
        out.terms = {k: v * c for k, v in self.terms.items()}
        return out

    def __mul__(self, other):
        if not isinstance(other, TensorExpr):
            return self.scale(other)
        out = TensorExpr()
        for (e1, p1, x1), c1 in self.terms.items():
            for (e2, p2, x2), c2 in other.terms.items():
                if p1 is not None and p2 is not None:
                    raise NotImplementedError("products of two Levi-Civita symbols are not supported")
                out._accumulate(e1 + e2, p1 if p1 is not None else p2, x1 + x2, c1 * c2)
        return out

    __rmul__ = scale

    def __eq__(self, other):
        if isinstance(other, TensorExpr):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def labels(self) -> set:
        out = set()
        for e, p, x in self.terms:
            for a, b in e:
                out.update((a, b))
            if p:
                out.update(p)
            out.update(x)
        return out

    def free_indices(self) -> set:
        free = set()
        for e, p, x in self.terms:
            counts = _label_counts(e, p, x)
            free.update(l for l, n in counts.items() if n == 1 and not isinstance(l, int))
        return free

    def has_xi(self) -> bool:
        return any(x for _, _, x in self.terms)

    def substitute(self, mapping: Mapping) -> "TensorExpr":
        """Rename labels; mapping targets may be concrete integers."""
        out = TensorExpr()
        m = lambda l: mapping.get(l, l)  # noqa: E731
        for (e, p, x), c in self.terms.items():
            out._accumulate(
                tuple((m(a), m(b)) for a, b in e),
                None if p is None else tuple(m(a) for a in p),
                tuple(m(a) for a in x),
                c,
            )
        return out

    def evaluate(self, assignment: Mapping | None = None) -> GaussianRational:
        """Value at a concrete assignment of every remaining label."""
        assignment = assignment or {}
        total = ZERO
        for (e, p, x), c in self.terms.items():
            if x:
                raise ValueError("unit-vector factors must be averaged before evaluation")
            v = 1
            for a, b in e:
                va, vb = assignment.get(a, a), assignment.get(b, b)
                if not isinstance(va, int) or not isinstance(vb, int):
                    raise KeyError(f"unassigned label in eta({a}, {b})")
                if va != vb:
                    v = 0
                    break
            if v and p is not None:
                vals = [assignment.get(a, a) for a in p]
                if not all(isinstance(t, int) for t in vals):
                    raise KeyError(f"unassigned label in epsilon{p}")
                v *= levi_civita(*vals)
            if v:
                total = total + c * v
        return total

    # display ---------------------------------------------------------------
    def __repr__(self):
        return f"TensorExpr({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (e, p, x), c in sorted(self.terms.items(), key=lambda kv: repr(kv[0])):
            fac = [f"eta({a},{b})" for a, b in e]
            if p:
                fac.append("eps(" + ",".join(map(str, p)) + ")")
            fac.extend(f"xi({a})" for a in x)
            mono = "*".join(fac)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def to_json(self) -> list:
        out = []
        for (e, p, x), c in sorted(self.terms.items(), key=lambda kv: repr(kv[0])):
            out.append(
                {
                    "coeff": c.to_json(),
                    "eta": [[str(a), str(b)] for a, b in e],
                    "epsilon": None if p is None else [str(a) for a in p],
                    "xi": [str(a) for a in x],
                }
            )
        return out


def _label_counts(etas, eps, xis) -> dict:
    counts: dict = {}
    for a, b in etas:
        counts[a] = counts.get(a, 0) + 1
        counts[b] = counts.get(b, 0) + 1
    for a in eps or ():
        counts[a] = counts.get(a, 0) + 1
    for a in xis:
        counts[a] = counts.get(a, 0) + 1
    return counts


def eta(a, b) -> TensorExpr:
    return TensorExpr.from_monomials([(ONE, [(a, b)], None, ())])


def epsilon(a, b, c, d) -> TensorExpr:
    return TensorExpr.from_monomials([(ONE, (), (a, b, c, d), ())])


def xi(*labels) -> TensorExpr:
    return TensorExpr.from_monomials([(ONE, (), None, labels)])


def scalar(c) -> TensorExpr:
    return TensorExpr.from_monomials([(c, (), None, ())])


# contraction -----------------------------------------------------------------


def _contract_monomial(etas, eps, xis):
    """Resolve summed labels of one monomial; returns (factor, etas, eps, xis)."""
    etas = list(etas)
    eps = list(eps) if eps is not None else None
    xis = list(xis)
    counts = _label_counts(etas, eps, xis)
    for label, n in counts.items():
        if n > 2:
            raise MalformedIndexError(f"label {label!r} occurs {n} times in one term")
    factor = 1
    changed = True
    while changed:
        changed = False
        for i, (a, b) in enumerate(etas):
            if a == b and not isinstance(a, int):
                del etas[i]
                factor *= DIM
                changed = True
                break
            # an eta with one summed leg acts as a renaming
            for dummy, keep in ((b, a), (a, b)):
                if isinstance(dummy, int) or counts.get(dummy, 0) != 2:
                    continue
                rest = etas[:i] + etas[i + 1 :]
                if not _rename_once(rest, eps, xis, dummy, keep):
                    continue
                etas = rest
                counts = _label_counts(etas, eps, xis)
                changed = True
                break
            if changed:
                break
        if changed:
            continue
        # xi_a xi_a = |xi|^2 = 1 on the unit sphere
        seen = {}
        for j, a in enumerate(xis):
            if a in seen and not isinstance(a, int):
                xis = [x for k, x in enumerate(xis) if k not in (seen[a], j)]
                counts = _label_counts(etas, eps, xis)
                changed = True
                break
            seen[a] = j
    return factor, tuple(etas), None if eps is None else tuple(eps), tuple(xis)


def _rename_once(etas, eps, xis, old, new) -> bool:
    for k, (a, b) in enumerate(etas):
        if a == old:
            etas[k] = (new, b)
            return True
        if b == old:
            etas[k] = (a, new)
            return True
    if eps is not None and old in eps:
        eps[eps.index(old)] = new
        return True
    if old in xis:
        xis[xis.index(old)] = new
        return True
    return False


def contract(expr: TensorExpr) -> TensorExpr:
    """Sum over every label that occurs twice in a term.

    Uses eta^{ab} eta_{bc} = delta^a_c, eta^a_a = 4, and xi.xi = 1.  A
    Levi-Civita symbol with a repeated label annihilates its term.
    """
    out = TensorExpr()
    for (e, p, x), c in expr.terms.items():
        f, e2, p2, x2 = _contract_monomial(e, p, x)
        out._accumulate(e2, p2, x2, c * f)
    return out


# angular averages --------------------------------------------------------------


def average_normalization(m: int) -> Fraction:
    """Weight of each pairing in the average of a product of 2m components.

    1, 1/4, 1/24, 1/192, ... = 1 / (2^m (m+1)!) on the unit 3-sphere.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    return Fraction(1, 2**m * factorial(m + 1))


@lru_cache(maxsize=None)
def pairings(n: int) -> tuple:
    """All perfect matchings of ``range(n)`` as tuples of pairs."""
    if n % 2:
        return ()
    if n == 0:
        return ((),)
    out = []
    for j in range(1, n):
        rest = [k for k in range(1, n) if k != j]
        for sub in pairings(n - 2):
            out.append(((0, j),) + tuple((rest[a], rest[b]) for a, b in sub))
    return tuple(out)


def angular_average(expr: TensorExpr) -> TensorExpr:
    """Average every unit-vector factor over the unit sphere in four dimensions."""
    out = TensorExpr()
    for (e, p, x), c in expr.terms.items():
        k = len(x)
        if k % 2:
            continue
        w = average_normalization(k // 2)
        for pairing in pairings(k):
            extra = tuple((x[a], x[b]) for a, b in pairing)
            out._accumulate(e + extra, p, (), c * w)
    return contract(out)


# decompositions ---------------------------------------------------------------

_TUPLES4 = tuple(itertools.product(range(1, DIM + 1), repeat=4))


def _rank4_basis_value(which: int, t) -> int:
    a, b, c, d = t
    if which == 0:
        return int(a == b and c == d)
    if which == 1:
        return int(a == c and b == d)
    if which == 2:
        return int(a == d and b == c)
    return levi_civita(a, b, c, d)


def _solve_exact(matrix, rhs):
    """Gauss-Jordan elimination over GaussianRational for a square system."""
    n = len(matrix)
    aug = [[GaussianRational.coerce(v) for v in row] + [GaussianRational.coerce(r)] for row, r in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise DecompositionError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = ONE / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [row[n] for row in aug]


@dataclass(frozen=True)
class Rank4Decomposition:
    """Coefficients on eta12 eta34, eta13 eta24, eta14 eta23 and eps1234."""

    A: GaussianRational
    B: GaussianRational
    C: GaussianRational
    D: GaussianRational

    def as_tuple(self) -> tuple:
        return (self.A, self.B, self.C, self.D)

    def scale(self, c) -> "Rank4Decomposition":
        return Rank4Decomposition(*(v * c for v in self.as_tuple()))

    def reconstruct(self, indices=("nu1", "nu2", "nu3", "nu4")) -> TensorExpr:
        a, b, c, d = indices
        return (
            eta(a, b) * eta(c, d) * self.A
            + eta(a, c) * eta(b, d) * self.B
            + eta(a, d) * eta(b, c) * self.C
            + epsilon(a, b, c, d) * self.D
        )

    def to_json(self) -> dict:
        return {k: getattr(self, k).to_json() for k in "ABCD"}


def decompose_rank4(expr: TensorExpr, indices=("nu1", "nu2", "nu3", "nu4")) -> Rank4Decomposition:
    """Project a rank-4 expression onto the eta-eta / epsilon basis.

    The expression is evaluated on all 256 index tuples, the normal equations
    are solved exactly and the residual is required to vanish identically.
    """
    if expr.has_xi():
        raise DecompositionError("average the unit-vector factors first")
    free = expr.free_indices()
    if not free <= set(indices):
        raise DecompositionError(f"unexpected free indices {sorted(free - set(indices), key=_lk)}")
    values = [expr.evaluate(dict(zip(indices, t))) for t in _TUPLES4]
    basis = [[_rank4_basis_value(w, t) for w in range(4)] for t in _TUPLES4]
    gram = [[sum(row[i] * row[j] for row in basis) for j in range(4)] for i in range(4)]
    rhs = [sum((v * row[i] for v, row in zip(values, basis)), ZERO) for i in range(4)]
    coeffs = _solve_exact(gram, rhs)
    for v, row in zip(values, basis):
        fit = sum((c * b for c, b in zip(coeffs, row) if b), ZERO)
        if fit != v:
            raise DecompositionError("expression lies outside the eta/epsilon span (nonzero residual)")
    return Rank4Decomposition(*coeffs)


def decompose_rank2(expr: TensorExpr, indices=("nu1", "nu2")) -> GaussianRational:
    """Coefficient ``a`` in ``expr == a * eta(i, j)``; raises on any residual."""
    if expr.has_xi():
        raise DecompositionError("average the unit-vector factors first")
    i, j = indices
    a = expr.evaluate({i: 1, j: 1})
    for s, t in itertools.product(range(1, DIM + 1), repeat=2):
        if expr.evaluate({i: s, j: t}) != (a if s == t else ZERO):
            raise DecompositionError("rank-2 expression is not proportional to the metric")
    return a


# quadrature oracle ------------------------------------------------------------


@lru_cache(maxsize=None)
def sphere_quadrature(order: int = 6):
    """Deterministic product rule on the unit 3-sphere, weights summing to one.

    Hyperspherical angles (psi, theta, phi): Gauss-Chebyshev of the second kind
    in cos(psi), Gauss-Legendre in cos(theta) and a uniform rule in phi.
    Polynomials of total degree below ``2*order`` are integrated exactly.
    """
    if order < 1:
        raise ValueError("order must be positive")
    k = np.arange(1, order + 1)
    x = np.cos(k * np.pi / (order + 1))
    wx = np.pi / (order + 1) * np.sin(k * np.pi / (order + 1)) ** 2
    y, wy = np.polynomial.legendre.leggauss(order)
    nphi = 2 * order
    phi = 2 * np.pi * np.arange(nphi) / nphi
    X, Y, PHI = np.meshgrid(x, y, phi, indexing="ij")
    W = np.einsum("i,j,k->ijk", wx, wy, np.full(nphi, 1.0))
    sx, sy = np.sqrt(1 - X**2), np.sqrt(1 - Y**2)
    pts = np.stack([X, sx * Y, sx * sy * np.cos(PHI), sx * sy * np.sin(PHI)], axis=-1).reshape(-1, 4)
    w = W.reshape(-1)
    return pts, w / w.sum()


def angular_average_numeric(labels, assignment: Mapping, order: int = 6) -> float:
    """Quadrature value of the average of ``prod xi_{assignment[l]}``."""
    pts, w = sphere_quadrature(order)
    vals = np.ones(len(w))
    for l in labels:
        vals = vals * pts[:, assignment[l] - 1]
    return float(vals @ w)
