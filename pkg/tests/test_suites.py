import pytest

import suites
from models import AuditReport
from suites import SUITES, VerificationSuite, create_suite, scheme_data
from utils import CutoffExceeded, hilbert_dim


def test_create_suite():
    assert isinstance(create_suite(" Identities "), suites.IdentitiesSuite)
    assert create_suite("modules", dump_modules=True).dump_modules
    assert set(SUITES) == {"identities", "modules", "schemes", "incidence", "sequences"}
    with pytest.raises(ValueError, match="Unknown suite"):
        create_suite("everything")


def test_enumeration_suites_refuse_the_tower(symbolic_ctx):
    for name in ("schemes", "incidence", "sequences"):
        with pytest.raises(ValueError, match="finite field"):
            create_suite(name).execute(symbolic_ctx)


def test_execute_adds_anchor_and_timing(ctx7):
    class Tiny(VerificationSuite):
        name = "tiny"
        anchor = "a single check"

        def run(self, ctx):
            report = AuditReport("tiny")
            report.add("field is finite", ctx.is_finite)
            return [report], {"q": ctx.F.q}, {}

    result = Tiny().execute(ctx7)
    assert result.passed
    assert result.invariants == {"anchor": "a single check", "q": 49}
    assert result.elapsed >= 0
    assert Tiny().shared_invariants(result.invariants) == {}


def test_identities_suite_over_f49(ctx7):
    result = create_suite("identities").execute(ctx7)
    assert result.passed, [c.name for r in result.reports for c in r.failures]
    inv = result.invariants
    assert inv["dims_S"] == [hilbert_dim(n) for n in range(ctx7.S.cutoff + 1)]
    assert inv["tau_sign"] in ("+tau", "-tau")
    assert set(create_suite("identities").shared_invariants(inv)) == {"dims_S", "dims_A", "tau_sign"}


def test_modules_suite_over_f49(ctx7):
    result = create_suite("modules", dump_modules=True).execute(ctx7)
    assert result.passed, [c.name for r in result.reports for c in r.failures]
    assert result.invariants["cyclic_dims"][0] == [1] * 5
    assert len(result.invariants["modules"]) == 4
    assert "simple modules" in result.tables


@pytest.mark.slow
def test_symbolic_suites(symbolic_ctx):
    for name in ("identities", "modules"):
        result = create_suite(name).execute(symbolic_ctx)
        assert result.passed, (name, [c.name for r in result.reports for c in r.failures])


@pytest.mark.slow
def test_enumeration_suites_over_f49(ctx7):
    scheme_data(ctx7)
    schemes = create_suite("schemes").execute(ctx7)
    assert schemes.passed, [c.name for r in schemes.reports for c in r.failures]
    assert schemes.invariants["points_A"] == 20
    assert set(schemes.tables) == {"point scheme of A", "line scheme counts", "kernel timings"}
    incidence = create_suite("incidence").execute(ctx7)
    assert incidence.passed
    profiles = incidence.invariants["point_profiles"]
    assert profiles["Pinf"] == [(0, 0, 0, 0, 2, 2, 2)]


def test_cutoff_errors_escape_execute(ctx7, monkeypatch):
    def boom(ctx):
        raise CutoffExceeded("degree 9 exceeds the cutoff 7")

    suite = create_suite("identities")
    monkeypatch.setattr(suite, "run", boom)
    with pytest.raises(CutoffExceeded):
        suite.execute(ctx7)
