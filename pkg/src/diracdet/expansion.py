"""Gradient-expansion pipeline for the divergent parts of log det of the Dirac operator.

Structure constants are built from traces of the resolvent product

    (1 - u xislash) g_{s1}^{nu1} (1 - u xislash) ... g_{sn}^{nun} (1 - u xislash)

averaged over the unit sphere and integrated over u.  Vertices are
``g_0^nu = g^nu`` and ``g_5^nu = i g^nu g5``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from . import ncpoly as nc
from .clifford import GAMMA5, SLASHED_XI, GammaWord, gamma, gamma_trace
from .integrals import i_series, n_integral, whole_line_integral
from .ncpoly import C, CovariantPolynomial, D, FieldPolynomial, commutator
from .scalars import ONE, GaussianRational, I, PiCoefficient
from .tensor import (
    Rank4Decomposition,
    TensorExpr,
    angular_average,
    decompose_rank2,
    decompose_rank4,
)

__all__ = [
    "ChiralitySignature",
    "EpsilonSignature",
    "CoefficientTable",
    "DivergenceReport",
    "TableMismatchError",
    "RouteMismatchError",
    "TABLE_ORDER",
    "compute_Jn",
    "subset_traces",
    "projector_trace",
    "projector_route",
    "table1",
    "expected_table",
    "build_PR_PI",
    "P_R1",
    "P_R2",
    "P_I_commutator_form",
    "curvature_form",
    "assemble_S4_and_decompose",
    "assemble_S2_leading",
    "compute_M2_exact",
    "parity_checks",
    "route_consistency",
    "compute_S_log_report",
    "drop_single_field_derivatives",
    "clear_caches",
]

NU4 = ("n1", "n2", "n3", "n4")


class TableMismatchError(AssertionError):
    pass


class RouteMismatchError(AssertionError):
    pass


@dataclass(frozen=True)
class ChiralitySignature:
    """Vertex chiralities, each 0 (vector) or 5 (axial)."""

    s: tuple

    def __post_init__(self):
        s = tuple(int(x) for x in self.s)
        if not 1 <= len(s) <= 4:
            raise ValueError("signature length must be 1..4")
        if any(x not in (0, 5) for x in s):
            raise ValueError("entries must be 0 or 5")
        object.__setattr__(self, "s", s)

    @classmethod
    def from_printed(cls, labels) -> "ChiralitySignature":
        """Accept the printed convention where the vector label is 1."""
        return cls(tuple(0 if int(x) == 1 else int(x) for x in labels))

    @property
    def n(self) -> int:
        return len(self.s)

    def fives(self) -> int:
        return sum(1 for x in self.s if x == 5)

    def printed(self) -> tuple:
        return tuple(1 if x == 0 else 5 for x in self.s)

    def __str__(self):
        return "".join(map(str, self.s))


@dataclass(frozen=True)
class EpsilonSignature:
    eps: tuple

    def __post_init__(self):
        e = tuple(int(x) for x in self.eps)
        if any(x not in (1, -1) for x in e):
            raise ValueError("entries must be +1 or -1")
        object.__setattr__(self, "eps", e)

    @property
    def k(self) -> int:
        return (len(self.eps) - sum(self.eps)) // 2

    def flipped(self) -> "EpsilonSignature":
        return EpsilonSignature(tuple(-x for x in self.eps))


def _vertex(s: int, nu) -> tuple:
    if s == 0:
        return (gamma(nu),), ONE
    return (gamma(nu), GAMMA5), I


@lru_cache(maxsize=None)
def subset_traces(s: tuple, labels: tuple | None = None) -> dict:
    """Averaged traces with xislash inserted at a subset of the n+1 gaps.

    Returns ``{subset: <tr(...)>}`` with vertex factors of i included and the
    slashed vectors entering with sign +1.
    """
    n = len(s)
    labels = labels or NU4[:n]
    out = {}
    for size in range(n + 2):
        for subset in itertools.combinations(range(n + 1), size):
            letters = []
            pref = ONE
            for q in range(n + 1):
                if q in subset:
                    letters.append(SLASHED_XI)
                if q < n:
                    ls, c = _vertex(s[q], labels[q])
                    letters.extend(ls)
                    pref = pref * c
            avg = angular_average(gamma_trace(GammaWord(tuple(letters), pref)))
            if avg:
                out[subset] = avg
    return out


def compute_Jn(sig, labels=None) -> TensorExpr:
    """u-integrated, angular-averaged trace for one chirality signature."""
    s = sig.s if isinstance(sig, ChiralitySignature) else tuple(sig)
    ChiralitySignature(s)
    n = len(s)
    labels = tuple(labels) if labels else NU4[:n]
    by_size: dict = {}
    for subset, avg in subset_traces(s, labels).items():
        by_size[len(subset)] = by_size.get(len(subset), TensorExpr()) + avg
    total = TensorExpr()
    for j, expr in sorted(by_size.items()):
        if expr:
            total = total + expr.scale(n_integral(n, j).value * (-1) ** j)
    return total


def projector_trace(sig, eps) -> TensorExpr:
    """<tr P_e1 g_s1 P_e2 ... g_sn P_e(n+1)> with P_e = (1 + e xislash)/2."""
    s = sig.s if isinstance(sig, ChiralitySignature) else tuple(sig)
    e = eps.eps if isinstance(eps, EpsilonSignature) else tuple(eps)
    if len(e) != len(s) + 1:
        raise ValueError("need one projector more than vertices")
    total = TensorExpr()
    for subset, avg in subset_traces(s, NU4[: len(s)]).items():
        sign = 1
        for j in subset:
            sign *= e[j]
        total = total + avg.scale(sign)
    return total.scale(Fraction(1, 2 ** (len(s) + 1)))


def projector_route(sig, values_at_k) -> TensorExpr:
    """Sum over projector signatures weighted by a function of k."""
    s = sig.s if isinstance(sig, ChiralitySignature) else tuple(sig)
    n = len(s)
    total = TensorExpr()
    for e in itertools.product((1, -1), repeat=n + 1):
        es = EpsilonSignature(e)
        w = values_at_k(es.k)
        if w:
            total = total + projector_trace(s, es).scale(w)
    return total


def route_consistency(n: int) -> dict:
    """Compare the main route with the projector route at eta = 0+ for every signature."""
    out = {}
    for s in itertools.product((0, 5), repeat=n):
        lhs = compute_Jn(s)
        rhs = projector_route(s, lambda k: i_series(n, k, 0).coefficient(0))
        out[s] = (lhs - rhs).is_zero()
    return out


# coefficient table -------------------------------------------------------------------------

TABLE_ORDER = tuple(
    ChiralitySignature.from_printed(p)
    for p in [
        (1, 1, 1, 1),
        (1, 1, 5, 5),
        (1, 5, 1, 5),
        (1, 5, 5, 1),
        (5, 1, 1, 5),
        (5, 1, 5, 1),
        (5, 5, 1, 1),
        (5, 5, 5, 5),
        (1, 1, 1, 5),
        (1, 1, 5, 1),
        (1, 5, 1, 1),
        (1, 5, 5, 5),
        (5, 1, 1, 1),
        (5, 1, 5, 5),
        (5, 5, 1, 5),
        (5, 5, 5, 1),
    ]
)


def expected_table() -> dict:
    """Golden values shipped with the package: {signature: (A, B, C, D)}."""
    raw = json.loads(resources.files("diracdet").joinpath("data/coefficient_table.json").read_text())
    out = {}
    for col in raw["columns"]:
        sig = ChiralitySignature.from_printed(col["s_printed"])
        out[sig] = Rank4Decomposition(
            GaussianRational(col["A"]),
            GaussianRational(col["B"]),
            GaussianRational(col["C"]),
            GaussianRational(0, col["D_times_minus_i"]),
        )
    return out


@dataclass
class CoefficientTable:
    entries: dict
    expected: dict
    status: dict

    @property
    def passed(self) -> bool:
        return all(self.status.values())

    def failures(self) -> list:
        return [str(s) for s, ok in self.status.items() if not ok]

    def pattern_ok(self) -> bool:
        """A, B, C real and only with an even number of 5s; D imaginary, odd number."""
        for sig, d in self.entries.items():
            even = sig.fives() % 2 == 0
            if not (d.A.is_real() and d.B.is_real() and d.C.is_real() and d.D.is_imaginary()):
                return False
            if even and d.D:
                return False
            if not even and (d.A or d.B or d.C):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "columns": [
                {
                    "s": list(sig.s),
                    "s_printed": list(sig.printed()),
                    **{k: str(v) for k, v in zip("ABCD", self.entries[sig].as_tuple())},
                    "status": "pass" if self.status[sig] else "fail",
                }
                for sig in TABLE_ORDER
            ],
            "passed": self.passed,
        }

    def latex(self) -> str:
        cols = TABLE_ORDER
        head = "|c|" + "r" * len(cols) + "|"
        lines = [r"\begin{table}", r"\centering", rf"\begin{{tabular}}{{{head}}}", r"\hline"]
        for j in range(4):
            lines.append(f"$s_{j + 1}$ & " + " & ".join(str(c.printed()[j]) for c in cols) + r" \\")
        lines.append(r"\hline")
        for name in "ABCD":
            vals = [getattr(self.entries[c], name) for c in cols]
            lines.append(f"${name}_{{\\underline{{s}}}}$ & " + " & ".join(f"${v.latex()}$" for v in vals) + r" \\")
        lines += [r"\hline", r"\end{tabular}", r"\end{table}"]
        return "\n".join(lines)

    def text(self) -> str:
        rows = [f"{'s':>6} {'A':>4} {'B':>4} {'C':>4} {'D':>4}  status"]
        for sig in TABLE_ORDER:
            d = self.entries[sig]
            p = "".join(map(str, sig.printed()))
            rows.append(f"{p:>6} {d.A!s:>4} {d.B!s:>4} {d.C!s:>4} {d.D!s:>4}  {'pass' if self.status[sig] else 'FAIL'}")
        return "\n".join(rows)


@lru_cache(maxsize=None)
def _table_entries() -> dict:
    return {sig: decompose_rank4(compute_Jn(sig), NU4).scale(3) for sig in TABLE_ORDER}


def table1(strict: bool = False) -> CoefficientTable:
    """Structure constants for all 16 four-vertex signatures (times 3)."""
    entries = _table_entries()
    exp = expected_table()
    status = {sig: entries[sig] == exp[sig] for sig in TABLE_ORDER}
    table = CoefficientTable(entries, exp, status)
    if strict and not table.passed:
        raise TableMismatchError(f"signatures differ from the golden table: {table.failures()}")
    return table


# four-vertex polynomials ---------------------------------------------------------------------------


def _gen(s: int, label: str) -> CovariantPolynomial:
    return D(label) if s == 0 else C(label)


def _word(sig, labels) -> CovariantPolynomial:
    out = nc.scalar(1)
    for s, l in zip(sig.s, labels):
        out = out * _gen(s, l)
    return out


def build_PR_PI(table: CoefficientTable | None = None):
    """Contract the table with the generator words: (P_R, P_I)."""
    entries = (table or table1()).entries
    pr = CovariantPolynomial()
    pi = CovariantPolynomial()
    for sig, d in entries.items():
        pr = pr + _word(sig, "aabb").scale(d.A) + _word(sig, "abab").scale(d.B) + _word(sig, "abba").scale(d.C)
        if d.D:
            pi = pi + (nc.eps("a", "b", "c", "d") * _word(sig, "abcd")).scale(d.D)
    return pr, pi


def P_R1() -> CovariantPolynomial:
    dd = lambda a, b: commutator(D(a), D(b))  # noqa: E731
    cc = lambda a, b: commutator(C(a), C(b))  # noqa: E731
    dc = lambda a, b: commutator(D(a), C(b))  # noqa: E731
    cd = lambda a, b: commutator(C(a), D(b))  # noqa: E731
    return (
        -(dd("m", "n") * dd("m", "n"))
        - cc("m", "n") * cc("m", "n")
        + dd("m", "n") * cc("m", "n")
        + cc("m", "n") * dd("m", "n")
        + (dc("m", "n") * dc("m", "n")).scale(2)
        + (dc("m", "n") * cd("m", "n")).scale(2)
    )


def P_R2() -> CovariantPolynomial:
    boundary = commutator(D("m"), nc.boundary_current("m")).scale(I)
    mixed = commutator(commutator(D("m"), D("n")), commutator(C("m"), C("n")))
    last = commutator(C("m"), commutator(D("m"), D("n")) * C("n")).scale(-2)
    return boundary + mixed + last


def P_I_commutator_form() -> CovariantPolynomial:
    a, b, c, d = "a", "b", "c", "d"
    inner = commutator(D(a), D(b)) + commutator(C(a), C(b))
    body = commutator(inner, commutator(D(c), C(d)))
    return (nc.eps(a, b, c, d) * body).scale(GaussianRational(0, Fraction(1, 2)))


def curvature_form() -> CovariantPolynomial:
    """(1/2) F+ F+ + (1/2) F- F- with F(+-) = i[D +- iC, D +- iC]."""
    fp = nc.field_strength_chiral(1, "m", "n")
    fm = nc.field_strength_chiral(-1, "m", "n")
    return (fp * fp + fm * fm).scale(Fraction(1, 2))


def drop_single_field_derivatives(p: FieldPolynomial) -> FieldPolynomial:
    """Discard one-letter terms carrying a derivative: they integrate to zero."""
    return p.filter(lambda e, w: not (len(w) == 1 and w[0][2]))


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"check": self.name, "status": "pass" if self.passed else "fail", "detail": self.detail}


def _residual(p) -> str:
    s = str(p)
    return s if len(s) < 400 else s[:400] + " ..."


def assemble_S4_and_decompose(table: CoefficientTable | None = None) -> list:
    """Decompose the four-vertex polynomial into curvature, boundary and commutator parts."""
    table = table or table1()
    pr, pi = build_PR_PI(table)
    pr1, pr2 = P_R1(), P_R2()
    ff = curvature_form()
    results = []

    n_terms = len(pr.canonical())
    results.append(CheckResult("P_R term count", n_terms == 19, f"{n_terms} canonical terms"))

    r = (pr1 - ff).canonical(cyclic=True)
    exact = (pr1 - ff).is_zero()
    results.append(
        CheckResult("P_R1 = curvature form (cyclic)", r.is_zero(), f"exact identity: {exact}; residual {_residual(r)}")
    )

    r = (pr - pr1 - pr2).canonical(cyclic=True)
    exact = (pr - pr1 - pr2).is_zero()
    results.append(
        CheckResult("P_R = P_R1 + P_R2 (cyclic)", r.is_zero(), f"exact identity: {exact}; residual {_residual(r)}")
    )

    r = (pr2 - commutator(D("m"), nc.boundary_current("m")).scale(I)).canonical(cyclic=True)
    results.append(CheckResult("P_R2 - i[D, J] is a commutator sum", r.is_zero(), f"residual {_residual(r)}"))

    r = pi.canonical(cyclic=True)
    form = P_I_commutator_form()
    rel = "+1" if (pi - form).is_zero() else "-1" if (pi + form).is_zero() else "none"
    results.append(
        CheckResult(
            "tr P_I = 0 (cyclic)", r.is_zero(), f"exact multiple of the commutator form: {rel}; residual {_residual(r)}"
        )
    )

    # field level: act on 1 and compare under the trace
    f_pr = apply_cached(pr)
    f_ff = apply_cached(ff)
    f_j = nc.apply_to_one(nc.boundary_current("m"))
    div_j = nc.derivative(f_j, "m")
    r = (f_pr - f_ff - div_j).canonical(cyclic=True)
    results.append(CheckResult("tr P_R 1 = tr F-form 1 + d^mu tr J_mu 1", r.is_zero(), f"residual {_residual(r)}"))

    differs = not nc.equal_modulo_cyclic(f_pr, f_ff)
    results.append(
        CheckResult(
            "negative control: tr P_R 1 differs from tr F-form 1",
            differs,
            f"difference has {len((f_pr - f_ff).canonical(cyclic=True))} cyclic terms (the boundary divergence)",
        )
    )
    return results


@lru_cache(maxsize=8)
def _apply_cached_key(key):
    return nc.apply_to_one(_KEYED[key])


_KEYED: dict = {}


def apply_cached(p: CovariantPolynomial) -> FieldPolynomial:
    key = json.dumps(p.to_json(), sort_keys=True)
    _KEYED[key] = p
    return _apply_cached_key(key)


# two-vertex pieces -----------------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _j2_coefficients() -> dict:
    return {s: decompose_rank2(compute_Jn(s), NU4[:2]) for s in itertools.product((0, 5), repeat=2)}


@dataclass
class QuadraticPart:
    prefactor: PiCoefficient
    covariant: CovariantPolynomial
    field: FieldPolynomial
    field_raw: FieldPolynomial
    vanishes_for_V_eq_plus_C: bool
    vanishes_for_V_eq_minus_C: bool

    def to_json(self) -> dict:
        return {
            "prefactor": self.prefactor.to_json(),
            "covariant": self.covariant.to_json(),
            "covariant_latex": self.covariant.latex(),
            "field": self.field.to_json(),
            "field_latex": self.field.latex(),
            "vanishes_for_V_eq_plus_C": self.vanishes_for_V_eq_plus_C,
            "vanishes_for_V_eq_minus_C": self.vanishes_for_V_eq_minus_C,
        }


def assemble_S2_leading() -> QuadraticPart:
    """Lambda^2 coefficient: covariant operator and its action on 1."""
    cov = CovariantPolynomial()
    for (s1, s2), a in _j2_coefficients().items():
        cov = cov + (_gen(s1, "m") * _gen(s2, "m")).scale(a)
    raw = nc.apply_to_one(cov)
    fld = drop_single_field_derivatives(raw)
    plus = nc.substitute_fields(fld, {"V": ("C", 1)})
    minus = nc.substitute_fields(fld, {"V": ("C", -1)})
    # (1/8 pi^2) int_0^Lambda p dp = Lambda^2 / (16 pi^2)
    return QuadraticPart(PiCoefficient(Fraction(1, 16), -2), cov, fld, raw, plus.is_zero(), minus.is_zero())


@dataclass
class M2Result:
    A: dict
    A0: dict
    simplified_A: dict
    consistent: bool

    def to_json(self) -> dict:
        key = lambda s: "".join(map(str, s))  # noqa: E731
        return {
            "prefactor": PiCoefficient(Fraction(1, 16), -2).to_json(),
            "A": {key(s): str(v) for s, v in self.A.items()},
            "A0": {key(s): str(v) for s, v in self.A0.items()},
            "A_simplified_route": {key(s): str(v) for s, v in self.simplified_A.items()},
            "lambda2_consistent": self.consistent,
        }


@lru_cache(maxsize=None)
def compute_M2_exact() -> M2Result:
    """Exact two-vertex coefficients from the projector decomposition.

    d M / d Lambda = Lambda/(8 pi^2) sum_eps T_eps I_{2,k}(m/Lambda); the eta^0
    and eta^2 terms integrate to Lambda^2 A and m^2 log(Lambda) A0 in units
    of 1/(16 pi^2).
    """
    series = {k: i_series(2, k, 2) for k in range(4)}
    A, A0 = {}, {}
    for s in itertools.product((0, 5), repeat=2):
        lead = projector_route(s, lambda k: series[k].coefficient(0))
        sub = projector_route(s, lambda k: 2 * series[k].coefficient(2))
        A[s] = decompose_rank2(lead, NU4[:2])
        A0[s] = decompose_rank2(sub, NU4[:2])
    simplified = _j2_coefficients()
    consistent = all(A[s] == simplified[s] for s in A)
    if not consistent:
        raise RouteMismatchError(f"Lambda^2 coefficients disagree: {A} vs {simplified}")
    return M2Result(A, A0, simplified, consistent)


# parity -------------------------------------------------------------------------------------------------


def parity_checks(numeric_tol: float = 1e-8) -> list:
    out = []
    bad = [s for n in (1, 3) for s in itertools.product((0, 5), repeat=n) if compute_Jn(s)]
    out.append(
        CheckResult(
            "odd n structure constants vanish",
            not bad,
            f"nonzero for {bad}" if bad else "n = 1, 3: all signatures zero",
        )
    )

    bad = []
    for n in (1, 3):
        for s in itertools.product((0, 5), repeat=n):
            for e in itertools.product((1, -1), repeat=n + 1):
                if projector_trace(s, e):
                    bad.append((s, e))
    out.append(CheckResult("odd n projector traces vanish", not bad, f"{len(bad)} nonzero"))

    bad = []
    for n in (2, 4):
        for s in itertools.product((0, 5), repeat=n):
            for e in itertools.product((1, -1), repeat=n + 1):
                es = EpsilonSignature(e)
                if projector_trace(s, es) != projector_trace(s, es.flipped()):
                    bad.append((s, e))
    out.append(CheckResult("projector traces invariant under eps -> -eps", not bad, f"{len(bad)} violations"))

    odd = [(n, k) for n in (2, 4) for k in range(n + 2) if not i_series(n, k, 6).is_even()]
    out.append(CheckResult("eta series are even", not odd, f"odd terms in {odd}" if odd else "n = 2, 4 up to eta^6"))

    worst = 0.0
    for n in (1, 2, 3, 4):
        for k in range(n + 2):
            sym = 0.25 * (whole_line_integral(n, k) + whole_line_integral(n, n + 1 - k))
            worst = max(worst, abs(sym))
    out.append(
        CheckResult("symmetrized whole-line integrals vanish", worst <= numeric_tol, f"max |value| = {worst:.2e}")
    )
    return out


# report -----------------------------------------------------------------------------------------------------


@dataclass
class DivergenceReport:
    lambda2_part: QuadraticPart
    log_prefactor: PiCoefficient
    curvature_form: CovariantPolynomial
    canonical_form: CovariantPolynomial
    boundary_current: CovariantPolynomial
    boundary_prefactor: PiCoefficient
    mass_term_constant: PiCoefficient
    mass_term_readings: dict
    residue: dict
    c_zero_projection: CovariantPolynomial
    c_zero_matches_yang_mills: bool
    checks: list = field(default_factory=list)
    finite_part: str = "not computed"

    def mass_term_matches(self) -> dict:
        return {k: v == self.mass_term_constant for k, v in self.mass_term_readings.items()}

    def to_json(self) -> dict:
        return {
            "lambda2_part": self.lambda2_part.to_json(),
            "log_part": {
                "prefactor": self.log_prefactor.to_json(),
                "curvature_form": self.curvature_form.to_json(),
                "curvature_form_latex": self.curvature_form.latex(),
                "canonical_form": self.canonical_form.to_json(),
                "boundary_term": {
                    "prefactor": self.boundary_prefactor.to_json(),
                    "current": self.boundary_current.to_json(),
                    "current_latex": self.boundary_current.latex(),
                    "statement": "(1/(24 pi^2)) int d^4x d^mu tr J_mu",
                },
                "mass_term": {
                    "operator": "m^2 tr C^mu C_mu",
                    "constant": self.mass_term_constant.to_json(),
                    "readings": {k: v.to_json() for k, v in self.mass_term_readings.items()},
                    "matches": self.mass_term_matches(),
                },
            },
            "residue": self.residue,
            "c_zero_projection": {
                "form": self.c_zero_projection.to_json(),
                "latex": self.c_zero_projection.latex(),
                "equals_tr_F_F": self.c_zero_matches_yang_mills,
                "statement": "(1/(24 pi^2)) int d^4x tr F_{mu nu} F^{mu nu}",
            },
            "finite_part": self.finite_part,
            "checks": [c.to_json() for c in self.checks],
        }

    def text(self) -> str:
        m = self.mass_term_matches()
        lines = [
            f"Lambda^2 part: {self.lambda2_part.prefactor} * int tr[ {self.lambda2_part.field} ]",
            f"log part: {self.log_prefactor} * int tr[ (1/2) F+F+ + (1/2) F-F- ]"
            f" + {self.boundary_prefactor} * int d^mu tr J_mu"
            f" + ({self.mass_term_constant}) * m^2 int tr C^mu C_mu",
            f"  curvature form: {self.curvature_form}",
            f"  J_mu: {self.boundary_current}",
            f"  mass-term constant {self.mass_term_constant}; "
            + "; ".join(f"{k} {v}: {'match' if m[k] else 'no match'}" for k, v in self.mass_term_readings.items()),
            f"residue: {self.residue['statement']}",
            f"C = 0: {self.log_prefactor} * int tr F_mn F^mn  ({'ok' if self.c_zero_matches_yang_mills else 'MISMATCH'})",
            f"finite part: {self.finite_part}",
        ]
        for c in self.checks:
            lines.append(f"  [{'pass' if c.passed else 'FAIL'}] {c.name}")
        return "\n".join(lines)

    def latex(self) -> str:
        return "\n".join(
            [
                r"\begin{align}",
                rf"S^{{(2)}} &= {self.lambda2_part.prefactor.latex()} \int d^4x\, \mathrm{{tr}}\left( {self.lambda2_part.field.latex()} \right) \\",
                rf"S_{{\log}} &= {self.log_prefactor.latex()} \int d^4x\, \mathrm{{tr}}\left( \tfrac12 F^+_{{\mu\nu}}F^{{+\mu\nu}} + \tfrac12 F^-_{{\mu\nu}}F^{{-\mu\nu}} \right)"
                rf" + {self.boundary_prefactor.latex()} \int d^4x\, \partial^\mu \mathrm{{tr}} J_\mu"
                rf" {'' if self.mass_term_constant.value.re < 0 else '+'}{self.mass_term_constant.latex()}\, m^2 \int d^4x\, \mathrm{{tr}}\, C^\mu C_\mu \\",
                rf"J_\mu &= {self.boundary_current.latex()} \\",
                r"\mathrm{Res} &= \tfrac14 c_{\log}, \qquad S_{\log} = 4\,\mathrm{Res}",
                r"\end{align}",
            ]
        )


def compute_S_log_report() -> DivergenceReport:
    table = table1(strict=True)
    checks = assemble_S4_and_decompose(table)
    m2 = compute_M2_exact()
    log_pref = PiCoefficient(Fraction(1, 24), -2)
    # A0 is in units of 1/(16 pi^2); only the axial channel survives
    mass = PiCoefficient(m2.A0[(5, 5)] * Fraction(1, 16), -2)
    readings = {
        "-6/(24 pi^2)": PiCoefficient(Fraction(-6, 24), -2),
        "-1/(8 pi^2)": PiCoefficient(Fraction(-1, 8), -2),
    }
    cf = curvature_form()
    c0 = cf.filter(lambda e, w: all(x[0] != "C" for x in w))
    f = commutator(D("m"), D("n")).scale(I)
    ym = f * f
    pr, pi = build_PR_PI(table)
    res_pref = log_pref / 4
    residue = {
        "c_log": "coefficient of log(Lambda/|m|) in the regularized trace",
        "relation": "Res = c_log / 4",
        "statement": f"S_log = 4 Res; Res of the curvature part carries prefactor {res_pref}",
        "residue_prefactor": res_pref.to_json(),
        "log_prefactor": log_pref.to_json(),
    }
    return DivergenceReport(
        lambda2_part=assemble_S2_leading(),
        log_prefactor=log_pref,
        curvature_form=cf,
        canonical_form=(pr + pi).canonical(),
        boundary_current=nc.boundary_current("m"),
        boundary_prefactor=log_pref,
        mass_term_constant=mass,
        mass_term_readings=readings,
        residue=residue,
        c_zero_projection=c0,
        c_zero_matches_yang_mills=(c0 - ym).is_zero(),
        checks=checks,
    )


def clear_caches() -> None:
    """Drop every memoized trace, fit and table (used for cold timings)."""
    from . import clifford

    for fn in (
        subset_traces,
        _table_entries,
        _j2_coefficients,
        compute_M2_exact,
        _apply_cached_key,
        clifford._g5_fit,
        clifford._trace_cached,
        clifford._signed_pairings,
    ):
        fn.cache_clear()
    _KEYED.clear()
