import numpy as np
import pytest

from models import AuditReport, Check, RunConfig, RunReport, SuiteResult, to_jsonable


def test_to_jsonable():
    assert to_jsonable({1: np.int64(3), "b": np.bool_(True)}) == {"1": 3, "b": True}
    assert to_jsonable((1, 2)) == [1, 2]
    assert to_jsonable({"b", "a"}) == ["a", "b"]
    assert to_jsonable(np.array([[1, 2]])) == [[1, 2]]
    assert to_jsonable(object).startswith("<class")


def test_check_and_report():
    report = AuditReport("demo", anchor="somewhere")
    assert not report.passed
    report.add("first", True)
    check = report.add("second", False, anchor="elsewhere", witness={"n": 2})
    assert str(check) == "[FAIL] second"
    assert check.anchor == "elsewhere" and report.checks[0].anchor == "somewhere"
    assert not report.passed and report.failures == [check]
    assert str(report) == "Audit demo: 1/2 passed"
    assert list(report.to_frame()["verdict"]) == ["PASS", "FAIL"]
    assert report.to_dict()["checks"][1]["witness"] == {"n": 2}


def test_extend_prefixes_names():
    inner = AuditReport("inner")
    inner.add("x", True)
    outer = AuditReport("outer").extend(inner)
    assert [c.name for c in outer.checks] == ["inner: x"]


def test_empty_name_is_rejected():
    with pytest.raises(ValueError, match="empty"):
        Check("", True)


def test_suite_result_and_run_report():
    ok = AuditReport("ok")
    ok.add("fine", True)
    result = SuiteResult("identities", "F_49", [ok], {"dims": (1, 4)}, elapsed=1.5)
    assert result.passed
    data = result.to_dict()
    assert "elapsed" not in data and data["invariants"] == {"dims": [1, 4]}

    report = RunReport(RunConfig(primes=(7,)))
    assert report.exit_code == 1
    report.results.append(result)
    assert report.exit_code == 0
    bad = AuditReport("agreement")
    bad.add("same verdicts", False)
    report.agreement = bad
    assert report.exit_code == 1
    frame = report.summary_frame()
    assert frame.loc[0, "checks"] == 1 and frame.loc[0, "time_ms"] == 1500.0


def test_run_config_suites_and_defaults():
    assert RunConfig(primes=(7,)).cutoff == 7
    symbolic = RunConfig(mode="symbolic")
    assert symbolic.cutoff == 4
    assert symbolic.suites == ("identities", "modules")
    assert RunConfig(suite="schemes", primes=(7,)).suites == ("schemes",)


@pytest.mark.parametrize("kwargs, message", [
    ({"mode": "specialized"}, "at least one prime"),
    ({"primes": (7, 7)}, "distinct"),
    ({"primes": (9,)}, "odd prime"),
    ({"mode": "symbolic", "suite": "schemes"}, "symbolic mode"),
    ({"mode": "symbolic", "cutoff": 5}, "cutoff"),
    ({"primes": (7,), "suite": "sequences", "cutoff": 3}, "sequences"),
    ({"primes": (7,), "jobs": 0}, "jobs"),
    ({"primes": (7,), "seed": -1}, "seed"),
    ({"primes": (7,), "suite": "everything"}, "suite"),
])
def test_run_config_validation(kwargs, message):
    with pytest.raises(ValueError, match=message):
        RunConfig(**kwargs).validate()
