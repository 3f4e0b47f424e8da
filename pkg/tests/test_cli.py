import json
import subprocess
import sys

import pytest

from absentminded.cli import main, parse_count, parse_samples


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_count():
    assert parse_count("1e6") == 10**6
    assert parse_count("250") == 250
    assert parse_samples("1e4,1e6, 1e8") == [10**4, 10**6, 10**8]
    with pytest.raises(Exception):
        parse_count("2.5")


def test_dist_plain(capsys):
    code, out, _ = run(capsys, "dist", "--n", "3", "--k", "1")
    assert code == 0
    assert [line.split(" = ")[1] for line in out.splitlines()[1:]] == ["1/3", "0", "1/2", "1/6"]


def test_dist_csv(capsys):
    code, out, _ = run(capsys, "dist", "--n", "2", "--k", "1", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["r,p", "0,1/2", "1,0", "2,1/2"]


def test_dist_usage_error(capsys):
    code, _, err = run(capsys, "dist", "--n", "1", "--k", "1")
    assert code == 2
    assert "n >= 2" in err


def test_bad_flag_is_usage_error(capsys):
    code, _, _ = run(capsys, "dist", "--n", "3")
    assert code == 2


def test_moments(capsys):
    code, out, _ = run(capsys, "moments", "--n", "10", "--k", "2", "--lmax", "3", "--kind", "central")
    assert code == 0
    assert "m_3 = -702653939/1000188000" in out
    assert "stirling path == theta path: pass" in out
    _, out, _ = run(capsys, "moments", "--n", "10", "--k", "2", "--lmax", "1", "--kind", "raw")
    assert "M_1 = 5869/1260" in out
    _, out, _ = run(capsys, "moments", "--n", "2", "--k", "1", "--lmax", "2", "--kind", "central")
    assert "m_2 = 1" in out


def test_moments_guard(capsys):
    code, _, err = run(capsys, "moments", "--n", "1e6", "--k", "3")
    assert code == 3
    assert "limits" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["dist", "--n", "6", "--k", "2"],
        ["moments", "--n", "10", "--k", "2", "--lmax", "4", "--kind", "exp"],
        ["verify", "--suite", "oracle", "--n-max", "5", "--workers", "1"],
        ["limits", "--k", "1", "--l", "4", "--samples", "1e4,1e5"],
        ["simulate", "--n", "8", "--k", "2", "--trials", "5000", "--workers", "1"],
    ],
)
def test_json_roundtrip_byte_identical(capsys, argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    doc = json.loads(out)
    assert list(doc) == ["command", "params", "results", "checks"]
    assert doc["command"] == argv[0]
    assert json.dumps(doc, indent=2, ensure_ascii=False) + "\n" == out


def test_json_rationals_are_strings(capsys):
    _, out, _ = run(capsys, "moments", "--n", "10", "--k", "2", "--lmax", "3", "--kind", "raw", "--format", "json")
    vals = json.loads(out)["results"]["raw"]
    assert vals == ["1", "5869/1260", "50293/2100", "9966821/75600"]


def test_limits_json_has_precision(capsys):
    _, out, _ = run(capsys, "limits", "--k", "2", "--l", "3", "--samples", "1e4,1e6", "--format", "json")
    doc = json.loads(out)
    assert doc["params"]["precision_bits"] == 128
    assert doc["checks"][0]["status"] == "pass"


def test_limits_trivial_ratio(capsys):
    code, out, _ = run(capsys, "limits", "--k", "1", "--l", "2", "--samples", "1e4,1e5,1e6")
    assert code == 0
    ratios = [line.split("ratio = ")[1] for line in out.splitlines() if "ratio = " in line]
    assert ratios == ["1.0"] * 3


def test_verify_oracle(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "oracle", "--n-max", "8", "--workers", "2")
    assert code == 0
    assert out.splitlines()[-1] == "PASS, 35 cells"


def test_verify_oracle_guard(capsys):
    code, _, _ = run(capsys, "verify", "--suite", "oracle", "--n-max", "11")
    assert code == 2


def test_verify_failure_exit_code(capsys, monkeypatch):
    from absentminded import verify

    real = verify.oracle_cell

    def broken(nk, l_max=6):
        nk_, results = real(nk, l_max)
        return nk_, results + [("planted failure", nk != (3, 2))]

    monkeypatch.setattr(verify, "oracle_cell", broken)
    code, out, _ = run(capsys, "verify", "--suite", "oracle", "--n-max", "4", "--workers", "1")
    assert code == 1
    assert "first counterexample: n=3, k=2" in out


def test_simulate(capsys):
    code, out, _ = run(capsys, "simulate", "--n", "20", "--k", "3", "--trials", "2e4", "--seed", "4", "--workers", "1")
    assert code == 0
    assert out.count("PASS") == 3


def test_bench_table(capsys):
    code, out, _ = run(capsys, "bench", "--lmax", "4")
    assert code == 0
    header = out.splitlines()[1]
    for col in ("step 1", "step 2", "step 3", "total", "size"):
        assert col in header
    assert len(out.splitlines()) == 3 + 4


def test_bench_json(capsys):
    _, out, _ = run(capsys, "bench", "--lmax", "3", "--format", "json")
    rows = json.loads(out)["results"]
    assert [r["l"] for r in rows] == [1, 2, 3]
    assert set(rows[0]) == {"l", "step1_s", "step2_s", "step3_s", "total_s", "size_bytes"}


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.toml"
    cfg.write_text('n = 10\nk = 2\nlmax = 1\nkind = "raw"\nformat = "json"\n')
    code, out, _ = run(capsys, "--config", str(cfg), "moments")
    assert code == 0
    assert json.loads(out)["results"]["raw"][1] == "5869/1260"
    _, out, _ = run(capsys, "--config", str(cfg), "moments", "--kind", "central", "--lmax", "3")
    assert json.loads(out)["results"]["central"][3] == "-702653939/1000188000"


def test_config_json(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"n": 3, "k": 1, "format": "csv"}))
    code, out, _ = run(capsys, "dist", "--config", str(cfg))
    assert code == 0
    assert out.splitlines()[1] == "0,1/3"


def test_missing_config_is_usage_error(tmp_path, capsys):
    code, _, err = run(capsys, "--config", str(tmp_path / "nope.toml"), "dist", "--n", "3", "--k", "1")
    assert code == 2
    assert "config" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "absentminded", "dist", "--n", "2", "--k", "1", "--format", "csv"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "2,1/2"
