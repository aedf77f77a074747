import pytest

from lossyphase.reproduce import TARGETS, Check, Report, load_golden, reproduce


def test_golden_has_every_target():
    golden = load_golden()
    assert set(TARGETS) <= set(golden)


@pytest.mark.parametrize("target", ["constants", "fig2a", "fig2b"])
def test_fast_targets_pass(target):
    rep = reproduce(target)
    assert rep.passed, [c.line() for c in rep.checks]
    assert rep.rows


def test_row_failure_is_recorded_not_raised():
    rep = Report("x")

    def boom():
        raise ValueError("bad row")

    rep.guarded("row", boom)
    rep.guarded("ok", lambda: Check("ok", True))
    assert [c.passed for c in rep.checks] == [False, True]
    assert not rep.passed
    assert rep.checks[0].line().startswith("FAIL row error=ValueError")


def test_unknown_target():
    with pytest.raises(ValueError):
        reproduce("table3")
