import json

import pytest

from shiftedprimes.cli import RunConfig, UsageError, build_parser, run
from shiftedprimes.zeros import ZETA_ZEROS


def test_delta_exact(capsys, tmp_path):
    assert run(["delta", "--n", "10", "--exact", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "3" and out[1] == "{1,4,9}"
    assert out[-1].startswith("PASS")
    data = json.loads((tmp_path / "delta.json").read_text())
    assert data["size"] == 3 and data["witness"] == [1, 4, 9]
    assert (tmp_path / "delta.csv").read_text().splitlines()[1] == "10,3,1 4 9"


def test_delta_heuristic(capsys):
    assert run(["delta", "--n", "100"]) == 0
    assert capsys.readouterr().out.splitlines()[-1].startswith("PASS delta(100)")


def test_gamma(capsys, tmp_path):
    assert run(["gamma", "--n", "2", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "gamma(2) = 0.5" in out
    assert (tmp_path / "cosine.csv").read_text().splitlines()[0] == "shift,coefficient"
    assert (tmp_path / "gamma_cosine.png").stat().st_size > 0


def test_compare(capsys, tmp_path):
    assert run(["compare", "--n-max", "12", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "comparison.csv").read_text().splitlines()
    assert len(lines) == 12 and lines[0].startswith("N,delta_exact")
    assert (tmp_path / "comparison.png").exists()


def test_postnikov(capsys, tmp_path):
    assert run(["postnikov", "--p", "3", "--n", "4", "--m", "2", "--out", str(tmp_path)]) == 0
    assert capsys.readouterr().out.splitlines()[-1].startswith("PASS postnikov")
    assert (tmp_path / "postnikov.csv").exists()


def test_postnikov_rejects_composite(capsys):
    assert run(["postnikov", "--p", "4", "--n", "2", "--m", "1"]) == 2


def test_explicit_formula(capsys, tmp_path):
    assert run(["explicit-formula", "--x", "1000", "--zeros", str(ZETA_ZEROS), "--Q", "100", "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "explicit_formula.json").read_text())
    # 29 heights below 100, with conjugates
    assert data["zeros_used"] == 58 and data["ratio"] <= 5
    rms = [r for _, r in data["sweep"]]
    assert rms == sorted(rms, reverse=True)


def test_explicit_formula_missing_zeros(capsys, tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text("")
    assert run(["explicit-formula", "--x", "100", "--zeros", str(empty)]) == 1
    assert capsys.readouterr().out.splitlines()[-1].startswith("FAIL explicit formula")


def test_build_psi(capsys, tmp_path):
    rep = tmp_path / "rep"
    assert run(["build-psi", "--n", "4000", "--report", str(rep)]) == 0
    data = json.loads((rep / "psi_report.json").read_text())
    assert data["support_ok"] and data["certificate_ok"]
    assert abs(data["T0"] - 1) <= 1e-12
    assert any("exponents overridden" in d for d in data["deviations"])
    for name in ("cosine.csv", "psi.csv", "psi.png", "cosine.png"):
        assert (rep / name).stat().st_size > 0


def test_build_psi_deterministic(tmp_path):
    for d in ("a", "b"):
        assert run(["build-psi", "--n", "2000", "--threads", "1", "--report", str(tmp_path / d)]) == 0
    for name in ("cosine.csv", "psi.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    a, b = (json.loads((tmp_path / d / "psi_report.json").read_text()) for d in "ab")
    a["run"].pop("out"), b["run"].pop("out")
    a["run"]["options"].pop("report"), b["run"]["options"].pop("report")
    assert a == b


def test_verify_suite(capsys, tmp_path):
    assert run(["verify", "--suite", "periodic", "--out", str(tmp_path)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[-1].startswith("PASS verify periodic")
    assert all(l.startswith(("PASS", "FAIL")) for l in lines)
    assert json.loads((tmp_path / "verify.json").read_text())["criteria"]


@pytest.mark.parametrize(
    "argv",
    [
        ["delta", "--n", "10", "--bogus"],
        ["nosuch"],
        [],
        ["verify", "--suite", "nosuch"],
        ["delta", "--n", "100", "--exact"],
        ["gamma", "--n", "1"],
        ["compare", "--n-max", "65"],
        ["build-psi", "--n", "8", "--report", "x"],
        ["build-psi", "--n", "100", "--gridsize", "100", "--report", "x"],
        ["explicit-formula", "--x", "1", "--zeros", "x"],
        ["delta", "--n", "5", "--threads", "0"],
    ],
)
def test_usage_errors(argv, capsys):
    assert run(argv) == 2


def test_bad_zero_file_is_check_failure(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n "zeros": [\n  {"beta": 2}\n ]\n}')
    assert run(["explicit-formula", "--x", "100", "--zeros", str(bad)]) == 1
    assert "line 3" in capsys.readouterr().out


def test_help_lists_csv_columns(capsys):
    with pytest.raises(SystemExit):
        build_parser().parse_args(["compare", "--help"])
    assert "delta_exact" in capsys.readouterr().out


def test_run_config():
    cfg = RunConfig("delta", options={"n": 0, "exact": True})
    with pytest.raises(UsageError):
        cfg.validate()
    assert RunConfig("gamma", options={"n": 5}).to_dict()["command"] == "gamma"
