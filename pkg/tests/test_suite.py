import pytest

from jwckit.suite import CRITERIA, PRESETS, CriterionResult, run_criterion


def test_result_line_format():
    assert CriterionResult(3, "Kobayashi type", True).line() == "PASS [ 3] Kobayashi type"
    assert CriterionResult(11, "x", False).line() == "FAIL [11] x"


def test_reports_leave_out_timings():
    assert "seconds" not in CriterionResult(1, "t", True, {}, 2.5).as_dict()


def test_preset_covers_every_criterion():
    assert PRESETS["paper-examples"] == list(range(1, 12))
    assert [c[0] for c in CRITERIA] == list(range(1, 12))


def test_unknown_criterion():
    with pytest.raises(KeyError):
        run_criterion(12)
