"""Traces of products of Euclidean Dirac matrices in four dimensions.

Two independent routes are provided: a symbolic reduction to metric and
Levi-Civita monomials (:func:`gamma_trace`) and a brute-force product of the
explicit 4x4 matrices (:func:`enum_trace_oracle`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .scalars import ONE, ZERO, GaussianRational
from .tensor import TensorExpr, levi_civita, pairings

__all__ = [
    "GammaSymbol",
    "GammaWord",
    "gamma",
    "GAMMA5",
    "SLASHED_XI",
    "explicit_matrices",
    "clifford_check",
    "gamma_trace",
    "enum_trace_oracle",
    "TraceReconstructionError",
]


class TraceReconstructionError(RuntimeError):
    """A fitted trace formula failed to reproduce an enumerated value."""


@dataclass(frozen=True)
class GammaSymbol:
    """One letter of a gamma word.

    ``kind`` is ``"gamma"`` (with an index: an int in 1..4 or a symbolic
    label), ``"gamma5"`` or ``"xi"`` for the slashed unit vector.
    """

    kind: str
    index: object = None

    def __post_init__(self):
        if self.kind == "gamma":
            if isinstance(self.index, int) and not 1 <= self.index <= 4:
                raise ValueError(f"gamma index {self.index} out of range 1..4")
            if self.index is None:
                raise ValueError("gamma letter needs an index")
        elif self.kind in ("gamma5", "xi"):
            if self.index is not None:
                raise ValueError(f"{self.kind} carries no index")
        else:
            raise ValueError(f"unknown letter kind {self.kind!r}")

    def __str__(self):
        if self.kind == "gamma":
            return f"g{self.index}"
        return "g5" if self.kind == "gamma5" else "xislash"


def gamma(index) -> GammaSymbol:
    return GammaSymbol("gamma", index)


GAMMA5 = GammaSymbol("gamma5")
SLASHED_XI = GammaSymbol("xi")


@dataclass(frozen=True)
class GammaWord:
    letters: tuple = ()
    prefactor: GaussianRational = field(default=ONE)

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        object.__setattr__(self, "prefactor", GaussianRational.coerce(self.prefactor))

    def __mul__(self, other: "GammaWord") -> "GammaWord":
        return GammaWord(self.letters + other.letters, self.prefactor * other.prefactor)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        body = " ".join(map(str, self.letters)) or "1"
        return f"({self.prefactor}) {body}"


# explicit representation ------------------------------------------------------


@lru_cache(maxsize=None)
def _matrices_complex():
    s1 = np.array([[0, 1], [1, 0]], dtype=complex)
    s2 = np.array([[0, -1j], [1j, 0]])
    s3 = np.array([[1, 0], [0, -1]], dtype=complex)
    z = np.zeros((2, 2), dtype=complex)
    one = np.eye(2, dtype=complex)
    gs = [np.block([[z, s], [s, z]]) for s in (s1, s2, s3)]
    gs.append(np.block([[z, 1j * one], [-1j * one, z]]))
    g5 = gs[0] @ gs[1] @ gs[2] @ gs[3]
    for m in gs + [g5]:
        m.setflags(write=False)
    return tuple(gs), g5


def _to_exact(m: np.ndarray) -> tuple:
    return tuple(tuple(GaussianRational(int(round(v.real)), int(round(v.imag))) for v in row) for row in m)


def explicit_matrices() -> dict:
    """The chiral Euclidean representation as exact nested tuples.

    Keys are 1..4 for the gammas and ``5`` for gamma5 = g1 g2 g3 g4.
    """
    gs, g5 = _matrices_complex()
    out = {mu + 1: _to_exact(g) for mu, g in enumerate(gs)}
    out[5] = _to_exact(g5)
    return out


def _exact_matmul(a, b):
    n = len(a)
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)), ZERO) for j in range(n)) for i in range(n))


def _exact_identity(c=1):
    c = GaussianRational.coerce(c)
    return tuple(tuple(c if i == j else ZERO for j in range(4)) for i in range(4))


def clifford_check() -> dict:
    """Check the anticommutation relations exactly on the explicit matrices."""
    mats = explicit_matrices()
    report = {}
    for mu in range(1, 5):
        for nu in range(1, 5):
            ab = _exact_matmul(mats[mu], mats[nu])
            ba = _exact_matmul(mats[nu], mats[mu])
            anti = tuple(tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(ab, ba))
            report[f"{{g{mu},g{nu}}} = {2 if mu == nu else 0}*1"] = anti == _exact_identity(2 if mu == nu else 0)
    g5 = mats[5]
    prod = mats[1]
    for mu in (2, 3, 4):
        prod = _exact_matmul(prod, mats[mu])
    report["g5 = g1 g2 g3 g4"] = prod == g5
    report["g5 g5 = 1"] = _exact_matmul(g5, g5) == _exact_identity()
    for mu in range(1, 5):
        ab = _exact_matmul(g5, mats[mu])
        ba = _exact_matmul(mats[mu], g5)
        report[f"{{g5,g{mu}}} = 0"] = all(x + y == 0 for r1, r2 in zip(ab, ba) for x, y in zip(r1, r2))
    report["g5 = diag(1,1,-1,-1)"] = g5 == tuple(
        tuple(GaussianRational(d) if i == j else ZERO for j in range(4)) for i, d in enumerate((1, 1, -1, -1))
    )
    return report


def enum_trace_oracle(word: GammaWord, xi: Sequence | None = None) -> GaussianRational:
    """Trace by explicit matrix multiplication.

    Every gamma index must be concrete.  Slashed-xi letters need ``xi``, a
    sequence of four exact rationals.
    """
    gs, g5 = _matrices_complex()
    has_xi = any(l.kind == "xi" for l in word.letters)
    if has_xi and xi is None:
        raise ValueError("word contains a slashed unit vector but no vector was given")
    if has_xi:
        mats = {mu + 1: _to_exact(g) for mu, g in enumerate(gs)}
        mats[5] = _to_exact(g5)
        xs = [GaussianRational.coerce(Fraction(x)) for x in xi]
        slash = tuple(
            tuple(sum((xs[mu - 1] * mats[mu][i][j] for mu in range(1, 5)), ZERO) for j in range(4)) for i in range(4)
        )
        acc = _exact_identity()
        for l in word.letters:
            if l.kind == "gamma":
                acc = _exact_matmul(acc, mats[_concrete(l.index)])
            elif l.kind == "gamma5":
                acc = _exact_matmul(acc, mats[5])
            else:
                acc = _exact_matmul(acc, slash)
        tr = sum((acc[i][i] for i in range(4)), ZERO)
        return tr * word.prefactor
    # Gaussian-integer entries: complex128 products are exact at these sizes
    acc = np.eye(4, dtype=complex)
    for l in word.letters:
        acc = acc @ (gs[_concrete(l.index) - 1] if l.kind == "gamma" else g5)
    tr = np.trace(acc)
    return GaussianRational(int(round(tr.real)), int(round(tr.imag))) * word.prefactor


def _concrete(index) -> int:
    if not isinstance(index, int):
        raise ValueError(f"index {index!r} is not concrete")
    return index


# symbolic route -----------------------------------------------------------------


@lru_cache(maxsize=None)
def _signed_pairings(n: int) -> tuple:
    out = []
    for p in pairings(n):
        crossings = sum(1 for (a, b), (c, d) in itertools.combinations(p, 2) if a < c < b < d or c < a < d < b)
        out.append((p, -1 if crossings % 2 else 1))
    return tuple(out)


def _plain_trace(labels: tuple) -> TensorExpr:
    n = len(labels)
    if n % 2:
        return TensorExpr()
    monos = []
    for p, sign in _signed_pairings(n):
        monos.append((4 * sign, [(labels[a], labels[b]) for a, b in p], None, ()))
    return TensorExpr.from_monomials(monos)


def _clifford_mul_basis(mask: int, a: int) -> tuple:
    """gamma_S * gamma^a in the ordered-subset basis: returns (sign, mask)."""
    bit = 1 << (a - 1)
    higher = bin(mask >> a).count("1")
    return (-1 if higher % 2 else 1), mask ^ bit


@lru_cache(maxsize=None)
def _g5_fit(n: int) -> tuple:
    """Exact expansion of tr(g^{a1}..g^{an} g5) on eta/epsilon monomials.

    Values on all 4^n index tuples come from the ordered-subset product rule;
    the coefficient vector is found on a greedily chosen independent column subset and verified
    exactly on every tuple.
    """
    tuples = np.array(list(itertools.product(range(1, 5), repeat=n)), dtype=np.int64)
    values = np.empty(len(tuples), dtype=np.int64)
    for r, t in enumerate(tuples):
        sign, mask = 1, 0
        for a in t:
            s, mask = _clifford_mul_basis(mask, int(a))
            sign *= s
        # gamma_S * g5 has nonzero trace only for S = {1,2,3,4}; then g1234 g1234 = 1
        values[r] = 4 * sign if mask == 0b1111 else 0
    monomials = []
    for eps_pos in itertools.combinations(range(n), 4):
        rest = [k for k in range(n) if k not in eps_pos]
        for p in pairings(len(rest)):
            monomials.append((eps_pos, tuple((rest[a], rest[b]) for a, b in p)))
    cols = np.empty((len(tuples), len(monomials)), dtype=np.int64)
    lc = np.zeros((5, 5, 5, 5), dtype=np.int64)
    for a, b, c, d in itertools.permutations(range(1, 5)):
        lc[a, b, c, d] = levi_civita(a, b, c, d)
    for j, (ep, prs) in enumerate(monomials):
        col = lc[tuples[:, ep[0]], tuples[:, ep[1]], tuples[:, ep[2]], tuples[:, ep[3]]]
        for a, b in prs:
            col = col * (tuples[:, a] == tuples[:, b])
        cols[:, j] = col
    # greedy independent subset, lexicographic in epsilon position
    fcols = cols.astype(float)
    basis = np.zeros((len(tuples), 0))
    keep = []
    for j in range(fcols.shape[1]):
        v = fcols[:, j] - basis @ (basis.T @ fcols[:, j])
        nv = np.linalg.norm(v)
        if nv > 1e-8 * np.linalg.norm(fcols[:, j]):
            basis = np.column_stack([basis, v / nv])
            keep.append(j)
    sol, *_ = np.linalg.lstsq(fcols[:, keep], values.astype(float), rcond=None)
    coeffs = [Fraction(float(x)).limit_denominator(64) for x in sol]
    den = math.lcm(*(c.denominator for c in coeffs))
    scaled = np.array([int(c * den) for c in coeffs], dtype=np.int64)
    if not np.array_equal(cols[:, keep] @ scaled, values * den):
        raise TraceReconstructionError(f"eta/epsilon fit failed for {n} gammas with gamma5")
    return tuple((monomials[k], c) for k, c in zip(keep, coeffs) if c)


def _g5_trace(labels: tuple) -> TensorExpr:
    n = len(labels)
    if n % 2 or n < 4:
        return TensorExpr()
    if n == 4:
        return TensorExpr.from_monomials([(4, (), tuple(labels), ())])
    if n > 8:
        raise NotImplementedError("gamma5 traces with more than 8 gammas are not supported")
    monos = []
    for (ep, prs), c in _g5_fit(n):
        monos.append((c, [(labels[a], labels[b]) for a, b in prs], tuple(labels[k] for k in ep), ()))
    return TensorExpr.from_monomials(monos)


def _normal_order(letters: Iterable[GammaSymbol]) -> tuple:
    """Move gamma5 letters to the right end; returns (sign, plain labels, has_g5)."""
    sign = 1
    plain = []
    n5 = 0
    for l in letters:
        if l.kind == "gamma5":
            n5 += 1
        else:
            if n5 % 2:
                sign = -sign
            plain.append(l.index)
    return sign, tuple(plain), n5 % 2 == 1


@lru_cache(maxsize=4096)
def _trace_cached(letters: tuple) -> TensorExpr:
    sign, plain, g5 = _normal_order(letters)
    t = _g5_trace(plain) if g5 else _plain_trace(plain)
    return t.scale(sign) if sign != 1 else t


def gamma_trace(word: GammaWord, xi_label: str = "x", xi: Sequence | None = None) -> TensorExpr:
    """Spinor trace of ``word`` as an eta/epsilon expression.

    Slashed-xi letters become ``g^{x_k} xi_{x_k}`` with fresh labels
    ``f"{xi_label}{k}"`` unless a concrete vector ``xi`` is supplied, in which
    case they are expanded over the four components.
    """
    letters = []
    xi_count = 0
    for l in word.letters:
        if l.kind == "xi":
            letters.append(("xi", f"{xi_label}{xi_count}"))
            xi_count += 1
        else:
            letters.append(l)
    if xi_count == 0:
        return _trace_cached(tuple(letters)).scale(word.prefactor)
    if xi is None:
        gl = tuple(gamma(l[1]) if isinstance(l, tuple) else l for l in letters)
        xis = tuple(l[1] for l in letters if isinstance(l, tuple))
        base = _trace_cached(gl)
        out = TensorExpr.from_monomials([(word.prefactor, (), None, xis)])
        return base * out
    comps = [GaussianRational.coerce(Fraction(x)) for x in xi]
    total = TensorExpr()
    slots = [k for k, l in enumerate(letters) if isinstance(l, tuple)]
    for choice in itertools.product(range(1, 5), repeat=len(slots)):
        c = word.prefactor
        for mu in choice:
            c = c * comps[mu - 1]
        if not c:
            continue
        gl = list(letters)
        for k, mu in zip(slots, choice):
            gl[k] = gamma(mu)
        total = total + _trace_cached(tuple(gl)).scale(c)
    return total
