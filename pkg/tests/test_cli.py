import json
import subprocess
import sys

import pytest

from cuntz_pentagon.cli import ConfigError, SuiteConfig, emit_report, main, read_config_file, run_suite


def run_cli(*args, tmp_path):
    out = tmp_path / "report.json"
    code = main([*args, "--out", str(out)])
    return code, json.loads(out.read_text())


def test_wcs_suite_passes_exactly():
    report = run_suite(SuiteConfig("wcs", samples=5))
    assert report["pass"] and report["max_residual"] == 0
    assert {c["eq"] for c in report["checks"]} == {"mixed coassociativity"}
    assert len(report["checks"]) == sum(1 for a in range(1, 25) for b in range(1, 25) for c in range(1, 25)
                                        if a * b * c <= 24)


def test_pentagon_suite_examples():
    report = run_suite(SuiteConfig("pentagon", n=2, m=2, l=2, L=4))
    assert report["pass"] and report["max_residual"] <= 1e-10
    assert run_suite(SuiteConfig("pentagon", L=0))["pass"]


def test_report_schema(tmp_path):
    code, report = run_cli("check-pentagon", "--n", "2", "--m", "2", "--l", "2", "--L", "2", tmp_path=tmp_path)
    assert code == 0
    assert set(report) == {"suite", "params", "checks", "max_residual", "pass", "wall_time_s"}
    assert set(report["checks"][0]) == {"name", "eq", "residual", "pass"}
    assert report["params"]["L"] == 2 and report["params"]["tol"] == 1e-10
    assert '"pass": true' in (tmp_path / "report.json").read_text()


def test_reruns_are_identical_modulo_wall_time(tmp_path):
    args = ["check-covariance", "--n", "2", "--m", "3", "--L", "3", "--family", "uniform", "--seed", "11"]
    _, a = run_cli(*args, tmp_path=tmp_path)
    _, b = run_cli(*args, tmp_path=tmp_path)
    a.pop("wall_time_s"), b.pop("wall_time_s")
    assert json.dumps(a) == json.dumps(b)
    _, c = run_cli(*args[:-1], "12", tmp_path=tmp_path)
    assert [x["name"] for x in c["checks"]] == [x["name"] for x in a["checks"]]


def test_tiny_tolerance_fails_with_residual_recorded(tmp_path):
    code, report = run_cli("check-covariance", "--n", "2", "--m", "2", "--L", "3", "--family", "uniform",
                           "--tol", "1e-20", tmp_path=tmp_path)
    assert code == 1 and report["pass"] is False
    assert 0 < report["max_residual"] < 1e-12


def test_exact_pentagon_survives_any_tolerance(tmp_path):
    # the product-realised W has 0/1 entries, so the residual is exactly zero
    code, report = run_cli("check-pentagon", "--n", "2", "--m", "2", "--l", "2", "--L", "3", "--tol", "1e-20",
                           tmp_path=tmp_path)
    assert code == 0 and report["max_residual"] == 0


@pytest.mark.parametrize("args", [
    ["check-pentagon", "--n", "4", "--m", "4", "--l", "5"],
    ["check-pentagon", "--n", "2"],
    ["check-gns", "--L", "20"],
    ["check-wcs", "--tol", "0"],
    ["check-wcs", "--tol", "-1"],
    ["check-states", "--family", "gaussian"],
    ["check-covariance", "--n", "0"],
    ["check-kernel", "--n-max", "12", "--L", "4"],
    ["run-all", "--L", "3"],
])
def test_usage_errors_exit_2(args, capsys):
    assert main(args) == 2
    assert "error" in capsys.readouterr().err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["check-everything"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["check-wcs", "--n", "two"])
    assert exc.value.code == 2


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "suite.cfg"
    cfg.write_text("# pentagon run\nn = 2\nm = 3\nl = 2\nL = 2\ntol = 1e-9\nfamily = uniform\n")
    assert read_config_file(str(cfg)) == {"n": 2, "m": 3, "l": 2, "L": 2, "tol": 1e-9, "family": "uniform"}
    code, report = run_cli("check-pentagon", "--config", str(cfg), "--L", "3", tmp_path=tmp_path)
    assert code == 0
    assert report["params"]["L"] == 3 and report["params"]["m"] == 3 and report["params"]["tol"] == 1e-9


def test_bad_config_files(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    with pytest.raises(ConfigError):
        read_config_file(str(bad))
    bad.write_text("L = many\n")
    with pytest.raises(ConfigError):
        read_config_file(str(bad))
    assert main(["check-wcs", "--config", str(tmp_path / "missing.cfg")]) == 2


def test_emit_report_surfaces_io_errors(tmp_path):
    with pytest.raises(OSError, match="nope"):
        emit_report({"pass": True}, str(tmp_path / "nope" / "r.json"))
    assert main(["check-pentagon", "--L", "1", "--out", str(tmp_path / "nope" / "r.json")]) == 2


def test_module_entry_point_writes_stdout():
    proc = subprocess.run([sys.executable, "-m", "cuntz_pentagon.cli", "check-pentagon", "--L", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pass"] is True


def test_single_suites_small(tmp_path):
    for args in (["check-states", "--n-max", "3", "--samples", "10", "--family", "uniform"],
                 ["check-gns", "--n", "3", "--L", "4"],
                 ["check-kernel", "--n-max", "4", "--L", "2", "--samples", "2"]):
        code, report = run_cli(*args, tmp_path=tmp_path)
        assert code == 0 and report["pass"], args
