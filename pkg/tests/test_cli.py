import json
import shutil
import subprocess
import sys

import pytest

from jwckit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_multitype(capsys):
    code, rep = report(capsys, "multitype", "--domain", "EGG:4")
    assert code == 0
    assert rep["multitype"] == [1, 4]


def test_ktype(capsys):
    code, rep = report(capsys, "ktype", "--domain", "EGG:4", "--v", "tangent")
    assert code == 0
    assert abs(rep["estimate"] - 0.25) < 0.01


def test_distance_with_oracle(capsys):
    code, rep = report(capsys, "distance", "--domain", "DISC", "--z", "0", "--w", "0.5")
    assert code == 0
    assert rep["lo"] <= 1.0986122886681098 <= rep["hi"]


def test_distance_refined_without_oracle(capsys):
    code, rep = report(capsys, "distance", "--domain", "BALL:2", "--z", "0.3,0.1i", "--w=-0.2,0.4",
                       "--no-oracle", "--refine")
    assert code == 0
    assert rep["lo"] <= rep["hi"]


def test_metric(capsys):
    code, rep = report(capsys, "metric", "--domain", "DISC", "--z", "0", "--v", "1")
    assert code == 0
    assert rep["lo"] <= 2.0 <= rep["hi"]


def test_poisson_and_horofunction(capsys, tmp_path):
    code, rep = report(capsys, "poisson", "--domain", "EGG:4", "--z", "0.3,0.2")
    assert code == 0
    assert rep["value"] < 0
    trace = tmp_path / "h.csv"
    code, rep = report(capsys, "horofunction", "--domain", "DISC", "--w", "0.5", "--csv", str(trace))
    assert code == 0
    assert trace.read_text().count("\n") > 2


def test_geodesic(capsys):
    code, rep = report(capsys, "geodesic", "--domain", "EGG:4", "--a", "0.5", "--samples", "5")
    assert code == 0
    assert rep["inside"] is True


def test_classify_curve_expectations(capsys, tmp_path):
    code, rep = report(capsys, "classify-curve", "--domain", "TUBE", "--curve", "tube_alpha:0.25")
    assert code == 0
    assert rep["label"] == "not_K"
    assert rep["thresholds"]["slope"] == 0.02
    code, _, _ = run(capsys, "classify-curve", "--domain", "TUBE", "--curve", "tube_alpha:0.25",
                     "--expect", "K_prime")
    assert code == 1


def test_dilation_and_julia(capsys):
    code, rep = report(capsys, "dilation", "--map", "disc_square")
    assert code == 0
    assert abs(rep["lambda"] - 2.0) < 1e-8
    code, rep = report(capsys, "julia-check", "--map", "egg_down", "--n", "200")
    assert code == 0
    assert rep["violations"] == 0


def test_jwc_verify_exit_codes(capsys):
    code, rep = report(capsys, "jwc-verify", "--map", "egg_down")
    assert code == 0
    assert rep["verdicts"] == [["sharp", "consistent"], ["sharp", "sharp"]]
    assert rep["thresholds"]["decay_slope"] == 0.02
    code, _, _ = run(capsys, "jwc-verify", "--map", "rudin")
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["ktype", "--domain", "SQUARE"],
    ["classify-curve", "--domain", "EGG:4", "--curve", "zigzag"],
    ["frobnicate"],
    ["jwc-verify", "--map", "nope"],
])
def test_usage_errors_exit_two(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_bad_config(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"tolerances": {"julia": -1}}))
    code, _, err = run(capsys, "multitype", "--domain", "DISC", "--config", str(cfg))
    assert code == 2
    assert "positive" in err


def test_config_polynomial_domain(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"domains": {"MYBALL": {"dim": 2, "box": 1.0, "monomials": [
        {"coef": 1, "re": [2, 0], "im": [0, 0]}, {"coef": 1, "re": [0, 0], "im": [2, 0]},
        {"coef": 1, "re": [0, 2], "im": [0, 0]}, {"coef": 1, "re": [0, 0], "im": [0, 2]},
        {"coef": -1, "re": [0, 0], "im": [0, 0]}]}}}))
    code, rep = report(capsys, "multitype", "--domain", "MYBALL", "--xi", "1,0", "--config", str(cfg))
    assert code == 0
    assert rep["multitype"] == [1, 2]


def test_reports_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["jwc-verify", "--map", "egg_up", "--report", str(path)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.skipif(shutil.which("jwckit") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["jwckit", "dilation", "--map", "disc_shift"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert abs(json.loads(proc.stdout)["lambda"] - 2 / 3) < 1e-6


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "jwckit", "multitype", "--domain", "BALL:3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["multitype"] == [1, 2, 2]
