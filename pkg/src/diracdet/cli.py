"""Command-line front end: ``diracdet {verify,table1,slog,s2,m2,residue}``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from functools import partial
from pathlib import Path

from . import expansion as ex
from . import suite
from .integrals import i_series

COMMANDS = ("verify", "table1", "slog", "s2", "m2", "residue")
FORMATS = ("text", "json", "latex")


@dataclass(frozen=True)
class CliConfig:
    command: str
    format: str = "text"
    out: str | None = None
    numeric_oracle: bool = True
    oracle_order: int = 6
    eta_order: int = 2

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")
        if self.oracle_order < 4:
            raise ValueError("--oracle-order must be at least 4")
        if self.eta_order < 2 or self.eta_order % 2:
            raise ValueError("--eta-order must be an even integer >= 2")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# commands ---------------------------------------------------------------------------------


def _verify(cfg: CliConfig) -> tuple[str, int]:
    steps = list(suite.SUITE)
    if cfg.numeric_oracle:
        idx = steps.index(suite.check_angular)
        steps[idx] = partial(suite.check_angular, order=cfg.oracle_order)
    else:
        steps = [s for s in steps if s not in (suite.check_angular, suite.check_integrals, suite.check_f_independence)]
    checks = [c for step in steps for c in step()]
    failures = [c.check for c in checks if not c.passed]
    code = 1 if failures else 0
    if cfg.format == "json":
        return _dump({"checks": [c.to_json() for c in checks], "passed": not failures, "failures": failures}), code
    if cfg.format == "latex":
        rows = [r"\begin{tabular}{lll}", r"\hline", r"check & topic & status \\", r"\hline"]
        for c in checks:
            rows.append(f"{_tex(c.check)} & {_tex(c.topic)} & {'pass' if c.passed else 'fail'} \\\\")
        rows += [r"\hline", r"\end{tabular}"]
        return "\n".join(rows) + "\n", code
    lines = [f"[{'pass' if c.passed else 'FAIL'}] {c.check}: {c.detail}" for c in checks]
    lines.append(f"{len(checks) - len(failures)}/{len(checks)} checks passed")
    return "\n".join(lines) + "\n", code


def _tex(s: str) -> str:
    for a, b in (("\\", r"\textbackslash{}"), ("_", r"\_"), ("^", r"\^{}"), ("&", r"\&"), ("%", r"\%")):
        s = s.replace(a, b)
    return s


def _table1(cfg: CliConfig) -> tuple[str, int]:
    t = ex.table1()
    code = 0 if t.passed else 1
    if cfg.format == "json":
        return _dump(t.to_json()), code
    if cfg.format == "latex":
        return t.latex() + "\n", code
    return t.text() + "\n", code


def _slog(cfg: CliConfig) -> tuple[str, int]:
    rep = ex.compute_S_log_report()
    code = 0 if all(c.passed for c in rep.checks) and rep.c_zero_matches_yang_mills else 1
    if cfg.format == "json":
        return _dump(rep.to_json()), code
    if cfg.format == "latex":
        return rep.latex() + "\n", code
    return rep.text() + "\n", code


def _s2(cfg: CliConfig) -> tuple[str, int]:
    q = ex.assemble_S2_leading()
    code = 0 if q.vanishes_for_V_eq_plus_C and q.vanishes_for_V_eq_minus_C else 1
    if cfg.format == "json":
        return _dump(q.to_json()), code
    if cfg.format == "latex":
        body = (
            rf"S^{{(2)}} = {q.prefactor.latex()}\,\Lambda^2 \int d^4x\, \mathrm{{tr}}\left( {q.field.latex()} \right)"
        )
        return "\\begin{align}\n" + body + "\n\\end{align}\n", code
    return (
        f"S2 = {q.prefactor} * Lambda^2 * int tr[ {q.field} ]\n"
        f"covariant operator: {q.covariant}\n"
        f"vanishes for V = C: {q.vanishes_for_V_eq_plus_C}; for V = -C: {q.vanishes_for_V_eq_minus_C}\n"
    ), code


def _m2(cfg: CliConfig) -> tuple[str, int]:
    m = ex.compute_M2_exact()
    series = {f"I_2,{k}": i_series(2, k, cfg.eta_order) for k in range(4)}
    if cfg.format == "json":
        data = m.to_json()
        data["eta_series"] = {k: s.to_json() for k, s in series.items()}
        return _dump(data), 0
    if cfg.format == "latex":
        rows = [r"\begin{align}"]
        for s in m.A:
            key = "".join(map(str, s))
            rows.append(rf"A_{{{key}}} &= {m.A[s].latex()}, & A^{{(0)}}_{{{key}}} &= {m.A0[s].latex()} \\")
        rows[-1] = rows[-1].rstrip(" \\")
        rows.append(r"\end{align}")
        return "\n".join(rows) + "\n", 0
    lines = ["M2 = (1/(16 pi^2)) sum_s (A_s Lambda^2 + A0_s m^2 log Lambda) tr D^s D^s"]
    for s in m.A:
        key = "".join(map(str, s))
        lines.append(f"  s = {key}: A = {m.A[s]}, A0 = {m.A0[s]}")
    lines.append(f"Lambda^2 coefficients agree with the direct route: {m.consistent}")
    for k, s in series.items():
        lines.append(f"  {k}(eta) = {s}")
    return "\n".join(lines) + "\n", 0


def _residue(cfg: CliConfig) -> tuple[str, int]:
    rep = ex.compute_S_log_report()
    r = rep.residue
    if cfg.format == "json":
        return _dump(r), 0
    if cfg.format == "latex":
        return (
            "\\begin{align}\n"
            + r"\mathrm{Res} = \tfrac14\, c_{\log}, \qquad S_{\log} = 4\,\mathrm{Res}, \qquad "
            + rf"c_{{\log}} = {rep.log_prefactor.latex()} \int d^4x\, \mathrm{{tr}}\, F F + \dots"
            + "\n\\end{align}\n"
        ), 0
    return f"{r['relation']}\n{r['statement']}\nc_log: {r['c_log']}\n", 0


HANDLERS = {
    "verify": _verify,
    "table1": _table1,
    "slog": _slog,
    "s2": _s2,
    "m2": _m2,
    "residue": _residue,
}


def run(cfg: CliConfig) -> int:
    text, code = HANDLERS[cfg.command](cfg)
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="diracdet", description="Divergent parts of the Dirac determinant, computed exactly."
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--format", choices=FORMATS, default="text")
    p.add_argument("--out", help="write output to this file instead of stdout")
    p.add_argument(
        "--numeric-oracle",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="include the floating-point oracle checks in verify (default: on)",
    )
    p.add_argument("--oracle-order", type=int, default=6, help="sphere quadrature order, at least 4")
    p.add_argument("--eta-order", type=int, default=2, help="highest eta power printed by m2, even and at least 2")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = CliConfig(
            command=args.command,
            format=args.format,
            out=args.out,
            numeric_oracle=args.numeric_oracle,
            oracle_order=args.oracle_order,
            eta_order=args.eta_order,
        )
    except ValueError as e:
        parser.error(str(e))
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
