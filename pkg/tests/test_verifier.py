import json

import pytest

import suites
from models import AuditReport, RunConfig, RunReport, SuiteResult
from suites import VerificationSuite
from utils import DegenerateConfiguration
from verifier import VerificationRun, agreement_audit, report_json, report_markdown, run_suites


def _result(label: str, passed: bool = True, dims=(1, 4, 10)) -> SuiteResult:
    report = AuditReport("hilbert")
    report.add("dims", passed)
    return SuiteResult("identities", label, [report],
                       {"dims_S": list(dims), "dims_A": list(dims), "tau_sign": "+tau"}, elapsed=0.25)


def test_agreement_audit():
    same = agreement_audit([_result("F_49"), _result("F_121")], ("identities",))
    assert same.passed
    verdicts = agreement_audit([_result("F_49"), _result("F_121", passed=False)], ("identities",))
    assert [c.passed for c in verdicts.checks] == [False, True]
    dims = agreement_audit([_result("F_49"), _result("F_121", dims=(1, 4, 9))], ("identities",))
    assert [c.passed for c in dims.checks] == [True, False]


def test_domain_errors_become_failed_results(ctx7, monkeypatch):
    class Broken(VerificationSuite):
        name = "broken"

        def run(self, ctx):
            raise DegenerateConfiguration("p, q and o are collinear")

    monkeypatch.setitem(suites.SUITES, "broken", Broken)
    (result,) = run_suites(ctx7, ("broken",))
    assert not result.passed
    assert result.reports[0].checks[0].name.startswith("DegenerateConfiguration")


def test_run_requires_prepare():
    run = VerificationRun(RunConfig(suite="identities", primes=(7,)))
    with pytest.raises(RuntimeError, match="prepare"):
        run.run()


def test_invalid_config_is_rejected():
    with pytest.raises(ValueError):
        VerificationRun(RunConfig(suite="schemes", mode="symbolic"))


def test_serialization_is_stable():
    report = RunReport(RunConfig(suite="identities", primes=(7,)))
    report.results.append(_result("F_49"))
    text = report_json(report)
    assert text == report_json(report) and text.endswith("\n")
    data = json.loads(text)
    assert data["passed"] and "elapsed" not in text
    assert data["results"][0]["invariants"]["tau_sign"] == "+tau"
    md = report_markdown(report)
    assert md.startswith("# Verification report: identities (specialized)")
    assert "## identities on F_49" in md


def test_default_path(tmp_path):
    run = VerificationRun(RunConfig(suite="modules", mode="symbolic"))
    assert run.default_path().name == "verify_modules_symbolic.json"


@pytest.mark.slow
def test_end_to_end_modules_run(tmp_path, capsys):
    out = tmp_path / "report.json"
    config = RunConfig(suite="modules", primes=(7,), cutoff=4, out=out, verbosity=1)
    run = VerificationRun(config)
    run.prepare()
    report = run.run()
    json_path, md_path = run.save(report)
    assert report.exit_code == 0
    assert json_path == out and md_path.suffix == ".md"
    assert json.loads(out.read_text(encoding="utf-8"))["passed"]
    assert "[OK] Saved" in capsys.readouterr().out


def test_value_errors_inside_a_suite_become_failed_results(ctx7, monkeypatch):
    class Unsolvable(VerificationSuite):
        name = "unsolvable"

        def run(self, ctx):
            raise ValueError("the line does not map to the target")

    monkeypatch.setitem(suites.SUITES, "unsolvable", Unsolvable)
    results = run_suites(ctx7, ("unsolvable", "unsolvable"))
    assert len(results) == 2 and not any(r.passed for r in results)
    assert results[0].reports[0].checks[0].name == "ValueError: the line does not map to the target"
