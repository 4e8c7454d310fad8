"""Self-verification checks run by ``diracdet verify`` and by the test suite.

Each check returns a list of :class:`Check` records; ordering is fixed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from . import expansion as ex
from . import ncpoly as nc
from .clifford import GAMMA5, GammaWord, clifford_check, enum_trace_oracle, gamma, gamma_trace
from .integrals import i_exact_value, i_series, log_coeff_f_independence, n_integral, n_integral_numeric
from .tensor import angular_average, angular_average_numeric, average_normalization, pairings, xi


@dataclass(frozen=True)
class Check:
    check: str
    topic: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "paper_ref": self.topic,
            "status": "pass" if self.passed else "fail",
            "detail": self.detail,
        }


# clifford -------------------------------------------------------------------------------


def check_clifford() -> list:
    rep = clifford_check()
    bad = [k for k, v in rep.items() if not v]
    return [
        Check("clifford relations", "Dirac matrix representation", not bad, f"{len(rep)} identities; failing: {bad}")
    ]


def _pattern_word(mask: tuple) -> tuple:
    """Letters for a gamma5 placement pattern; plain slots get labels a0, a1, ..."""
    letters, labels = [], []
    for is5 in mask:
        if is5:
            letters.append(GAMMA5)
        else:
            lab = f"a{len(labels)}"
            labels.append(lab)
            letters.append(gamma(lab))
    return GammaWord(tuple(letters)), labels


def _concrete(mask, values) -> GammaWord:
    it = iter(values)
    return GammaWord(tuple(GAMMA5 if is5 else gamma(next(it)) for is5 in mask))


def trace_sweep(max_len: int = 6, n_random: int = 500, random_lengths=(7, 9), seed: int = 0) -> dict:
    """Symbolic traces instantiated at concrete indices versus matrix products.

    Exhaustive over every word up to ``max_len`` letters, then ``n_random``
    random words with lengths in ``random_lengths``.
    """
    compared = mismatches = 0
    first_bad = None
    for length in range(max_len + 1):
        for mask in itertools.product((False, True), repeat=length):
            word, labels = _pattern_word(mask)
            sym = gamma_trace(word)
            for values in itertools.product(range(1, 5), repeat=len(labels)):
                got = sym.evaluate(dict(zip(labels, values)))
                want = enum_trace_oracle(_concrete(mask, values))
                compared += 1
                if got != want:
                    mismatches += 1
                    first_bad = first_bad or (mask, values, got, want)
    rng = random.Random(seed)
    lo, hi = random_lengths
    for _ in range(n_random):
        length = rng.randint(lo, hi)
        mask = tuple(rng.random() < 0.3 for _ in range(length))
        word, labels = _pattern_word(mask)
        values = [rng.randint(1, 4) for _ in labels]
        got = gamma_trace(word).evaluate(dict(zip(labels, values)))
        want = enum_trace_oracle(_concrete(mask, values))
        compared += 1
        if got != want:
            mismatches += 1
            first_bad = first_bad or (mask, values, got, want)
    return {"compared": compared, "mismatches": mismatches, "first_mismatch": first_bad}


def check_traces(n_random: int = 500) -> list:
    r = trace_sweep(n_random=n_random)
    return [
        Check(
            "trace engine vs matrix oracle",
            "trace formulas and Dirac matrix representation",
            r["mismatches"] == 0,
            f"{r['compared']} instantiations, {r['mismatches']} mismatches",
        )
    ]


# angular averages -----------------------------------------------------------------------------


def check_angular(order: int = 6, tol: float = 1e-10) -> list:
    out = []
    worst = 0.0
    for m in range(1, 5):
        labels = tuple(f"x{j}" for j in range(2 * m))
        avg = angular_average(xi(*labels))
        for values in itertools.product(range(1, 5), repeat=2 * m):
            a = dict(zip(labels, values))
            worst = max(worst, abs(float(avg.evaluate(a).re) - angular_average_numeric(labels, a, order)))
    out.append(
        Check(
            "angular averages vs sphere quadrature",
            "angular averages",
            worst <= tol,
            f"up to 8 slots, max deviation {worst:.2e}",
        )
    )

    bad = []
    for m in range(0, 5):
        # every pairing of (xi.xi)^m contracts to a power of 4 under the eta rules
        total = Fraction(0)
        for p in pairings(2 * m):
            total += 4 ** _cycles(p, m)
        if total * average_normalization(m) != 1:
            bad.append(m)
    out.append(
        Check("full-contraction identity <(xi.xi)^m> = 1", "angular averages", not bad, f"m = 0..4; failing {bad}")
    )
    return out


def _cycles(pairing, m: int) -> int:
    """Number of index loops when slots (2j, 2j+1) are already tied together."""
    partner = {}
    for a, b in pairing:
        partner[a], partner[b] = b, a
    seen, loops = set(), 0
    for start in range(2 * m):
        if start in seen:
            continue
        loops += 1
        j = start
        while j not in seen:
            seen.add(j)
            k = j ^ 1
            seen.add(k)
            j = partner[k]
    return loops


# integrals -----------------------------------------------------------------------------------------


def check_integrals(tol: float = 1e-6) -> list:
    worst = 0.0
    for n in (2, 4):
        for k in range(0, n + 1, 2):
            worst = max(worst, abs(float(n_integral(n, k).value) - n_integral_numeric(n, k)))
    out = [
        Check(
            "u-integrals: closed form vs contour quadrature",
            "u-integrals with the i0 prescription",
            worst <= tol,
            f"max deviation {worst:.2e}",
        )
    ]

    worst = 0.0
    for n in (2, 4):
        for k in range(n + 2):
            s = i_series(n, k, 4)
            for eta in (0.01, 0.02):
                worst = max(worst, abs(s.evaluate(eta) - i_exact_value(n, k, eta).real) / eta**6)
    out.append(
        Check(
            "eta series vs exact partial fractions",
            "mass-dependent integrals",
            worst < 50,
            f"max |remainder|/eta^6 = {worst:.3g}",
        )
    )
    return out


def check_f_independence(tol: float = 1e-4) -> list:
    r = log_coeff_f_independence()
    worst = max(abs(v["slope"] - 1.0) for v in r.values())
    detail = ", ".join(f"{k}: {v['slope']:.8f}" for k, v in r.items())
    return [
        Check("log coefficient independent of the cutoff profile", "regularization independence", worst <= tol, detail)
    ]


# pipeline -----------------------------------------------------------------------------------------------


def check_parity() -> list:
    return [Check(c.name, "parity of the expansion", c.passed, c.detail) for c in ex.parity_checks()]


def check_table() -> list:
    t = ex.table1()
    return [
        Check("coefficient table", "four-vertex structure constants", t.passed, f"failing signatures: {t.failures()}"),
        Check("coefficient table reality and parity pattern", "four-vertex structure constants", t.pattern_ok(), ""),
    ]


def check_decomposition() -> list:
    return [Check(c.name, "curvature decomposition", c.passed, c.detail) for c in ex.assemble_S4_and_decompose()]


def check_m2() -> list:
    m = ex.compute_M2_exact()
    A = {"".join(map(str, s)): str(v) for s, v in m.A.items()}
    A0 = {"".join(map(str, s)): str(v) for s, v in m.A0.items()}
    out = [
        Check(
            "two-vertex Lambda^2 coefficients: projector route = direct route",
            "two-vertex coefficients",
            m.consistent,
            f"A = {A}; A0 = {A0}",
        )
    ]
    r4 = ex.route_consistency(4)
    out.append(
        Check(
            "four-vertex structure constants: projector route = direct route",
            "two-vertex coefficients",
            all(r4.values()),
            f"{sum(r4.values())}/{len(r4)} signatures",
        )
    )
    return out


def check_gauge() -> list:
    out = []
    for sign in (1, -1):
        f = nc.apply_to_one(nc.field_strength_chiral(sign, "m", "n"))
        var = nc.gauge_variation_vector(f * f).canonical(cyclic=True)
        out.append(
            Check(
                f"gauge variation of tr F{'+' if sign > 0 else '-'}F{'+' if sign > 0 else '-'} vanishes",
                "gauge invariance",
                var.is_zero(),
                f"residual {var}",
            )
        )
    q = nc.field("C", "m") * nc.field("C", "m") - nc.field("V", "m") * nc.field("V", "m")
    var = nc.gauge_variation_vector(q).canonical(cyclic=True)
    out.append(
        Check(
            "negative control: gauge variation of tr(-VV + CC) is nonzero",
            "gauge invariance",
            not var.is_zero(),
            f"variation {var}",
        )
    )
    return out


def check_report() -> list:
    rep = ex.compute_S_log_report()
    m = rep.mass_term_matches()
    return [
        Check("C = 0 projection equals tr F F", "pure vector field limit", rep.c_zero_matches_yang_mills, ""),
        Check(
            "Lambda^2 part vanishes for V = +C and V = -C",
            "quadratic divergence",
            rep.lambda2_part.vanishes_for_V_eq_plus_C and rep.lambda2_part.vanishes_for_V_eq_minus_C,
            str(rep.lambda2_part.field),
        ),
        Check(
            "mass-term constant (informational)",
            "mass term of the log divergence",
            True,
            f"computed {rep.mass_term_constant}; "
            + "; ".join(f"reading {k}: {'match' if v else 'no match'}" for k, v in m.items()),
        ),
    ]


SUITE = (
    check_clifford,
    check_traces,
    check_angular,
    check_integrals,
    check_parity,
    check_table,
    check_decomposition,
    check_m2,
    check_gauge,
    check_f_independence,
    check_report,
)


def run_suite() -> list:
    out = []
    for fn in SUITE:
        out.extend(fn())
    return out
