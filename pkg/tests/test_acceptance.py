"""The eleven acceptance criteria, each run at its fixed tolerance.

Every test prints a PASS/FAIL line; the lines are also repeated in the pytest
terminal summary.  Run this file directly to get just the lines.
"""

import pytest

from jwckit.suite import CRITERIA, run_criterion

LINES: list[str] = []


def check(number: int):
    r = run_criterion(number)
    LINES.append(r.line())
    print(r.line())
    assert "error" not in r.details, r.details.get("error")
    return r


def test_criterion_01_oracle_certification():
    r = check(1)
    d = r.details
    assert d["violations"] == 0
    assert d["pairs"] == {"DISC": 400, "HALFPLANE": 300, "BALL:2": 300}
    assert d["worst_relative_upper_gap"] == pytest.approx(0.235575, abs=1e-3)
    assert r.passed


def test_criterion_02_egg_geodesic_isometry():
    r = check(2)
    assert r.details["all_contained"]
    assert r.details["worst_relative_upper_error"] == pytest.approx(0.000345, abs=1e-4)
    assert r.passed


def test_criterion_03_kobayashi_type():
    r = check(3)
    expected = {"EGG:2 tangent": 0.5, "EGG:4 tangent": 0.25, "EGG:6 tangent": 1 / 6, "EGG:4 normal": 1.0}
    for key, val in expected.items():
        assert r.details[key] == pytest.approx(val, abs=0.01)
    assert r.passed


def test_criterion_04_classifier_table():
    r = check(4)
    assert r.details == {
        "EGG:4 normal": "K_prime", "EGG:4 gamma_0.5": "K_only", "TUBE tube_0.25": "not_K",
        "TUBE tube_0.75": "K_prime", "EGG:4 cone": "K_prime", "TUBE cone": "K_prime", "BALL:2 cone": "K_prime",
    }
    assert r.passed


def test_criterion_05_dilation_and_chain_rule():
    r = check(5)
    assert r.details["disc_square"] == pytest.approx(2.0, abs=1e-6)
    assert r.details["egg_projection"] == pytest.approx(1.0, abs=1e-6)
    assert all(v < 1e-9 for v in r.details["chain_defects"].values())
    assert r.passed


def test_criterion_06_poisson_kernel_and_horofunction():
    r = check(6)
    assert r.details["points"] == 100
    assert r.details["max_error"] < 1e-8
    assert r.passed


def test_criterion_07_exponent_matrix():
    r = check(7)
    for key in ("egg_up2_4", "egg_down4_2"):
        d = r.details[key]
        assert d["verdicts"] == [["sharp", "consistent"], ["sharp", "sharp"]]
        assert d["kprime"] == pytest.approx(d["alpha"], abs=1e-2)
    assert r.details["egg_down4_2"]["alpha"] == pytest.approx(2 / 3, abs=1e-5)
    assert r.passed


def test_criterion_08_jacobian_determinant():
    r = check(8)
    assert r.details["egg_down_slope"] == pytest.approx(0.25, abs=0.02)
    assert r.details["egg_down_to_zero"]
    assert r.details["identity_slope"] == pytest.approx(0.0, abs=1e-9)
    assert r.passed


def test_criterion_09_scaling_convergence():
    r = check(9)
    assert r.details["EGG:2 a=0.5"]["error_at_2^20"] == pytest.approx(7.813e-4, rel=1e-2)
    assert r.details["EGG:4 a=0.2"]["error_at_2^20"] == pytest.approx(8.832e-3, rel=1e-2)
    assert all(v["monotone"] for v in r.details.values())
    assert r.passed


def test_criterion_10_rudin_example():
    r = check(10)
    assert r.details["restricted_limit"] < 1e-10
    assert r.details["gamma_lambda_error"] < 1e-12
    assert r.passed


def test_criterion_11_julia_inequality():
    r = check(11)
    checked = {k: v for k, v in r.details.items() if "skipped" not in v}
    assert len(checked) == 9
    assert all(v["violations"] == 0 for v in checked.values())
    assert all(abs(v["sup_minus_log_lambda"]) < 1e-2 for v in checked.values())
    assert "skipped" in r.details["rudin"]
    assert r.passed


if __name__ == "__main__":
    for number, _, _ in CRITERIA:
        print(run_criterion(number).line(), flush=True)
