import json
import subprocess
import sys

import pytest

from diracdet import cli, suite


def _run(*args):
    return subprocess.run([sys.executable, "-m", "diracdet", *args], capture_output=True, text=True)


def test_config_validation():
    with pytest.raises(ValueError):
        cli.CliConfig("verify", eta_order=3)
    with pytest.raises(ValueError):
        cli.CliConfig("verify", oracle_order=3)
    with pytest.raises(ValueError):
        cli.CliConfig("nope")


@pytest.mark.parametrize("args", [["m2", "--eta-order", "3"], ["verify", "--oracle-order", "2"], ["bogus"]])
def test_config_errors_exit_2(args):
    assert _run(*args).returncode == 2


def test_table1_latex(capsys):
    assert cli.main(["table1", "--format", "latex"]) == 0
    out = capsys.readouterr().out
    assert out.startswith(r"\begin{table}")
    assert r"\end{tabular}" in out


def test_slog_json_c_zero(capsys):
    assert cli.main(["slog", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["c_zero_projection"]["equals_tr_F_F"] is True
    assert data["finite_part"] == "not computed"
    assert data["log_part"]["prefactor"]["text"] == "1/(24 pi^2)"


def test_s2_m2_residue(capsys):
    assert cli.main(["s2"]) == 0
    assert "1/(16 pi^2)" in capsys.readouterr().out
    assert cli.main(["m2", "--format", "json", "--eta-order", "4"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["A"]["55"] == "1" and data["A0"]["55"] == "-8"
    assert data["eta_series"]["I_2,0"]["coefficients"]["4"] == "5/2"
    assert cli.main(["residue"]) == 0
    assert "Res = c_log / 4" in capsys.readouterr().out


def test_out_file_and_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["slog", "--format", "json", "--out", str(a)]) == 0
    assert cli.main(["slog", "--format", "json", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_json_schema(capsys):
    code = cli.main(["verify", "--format", "json"])
    data = json.loads(capsys.readouterr().out)
    assert code == 0 and data["passed"] and data["failures"] == []
    for c in data["checks"]:
        assert set(c) == {"check", "paper_ref", "status", "detail"}
        assert c["status"] in ("pass", "fail")


def test_verify_exit_1_on_failure(monkeypatch, capsys):
    bad = lambda: [suite.Check("forced failure", "test", False, "")]  # noqa: E731
    monkeypatch.setattr(suite, "SUITE", suite.SUITE + (bad,))
    assert cli.main(["verify", "--no-numeric-oracle", "--format", "json"]) == 1
    data = json.loads(capsys.readouterr().out)
    assert data["failures"] == ["forced failure"]
