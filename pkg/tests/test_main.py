import json

import pytest

import suites
from main import EXIT_CONFIG, build_parser, main, resolve_settings
from models import AuditReport
from suites import VerificationSuite
from utils import DEFAULT_PRIMES


def _settings(argv):
    return resolve_settings(build_parser().parse_args(argv))


def test_defaults(monkeypatch):
    for key in ("MODE", "PRIMES", "SEED", "CUTOFF", "JOBS", "OUT", "VERBOSE"):
        monkeypatch.delenv("SKLY_" + key, raising=False)
    settings = _settings(["verify", "identities"])
    assert settings["mode"] == "specialized"
    assert settings["primes"] == ",".join(str(p) for p in DEFAULT_PRIMES)
    assert settings["seed"] == 0 and settings["jobs"] == 1 and settings["verbosity"] == 1
    assert settings["cutoff"] is None


def test_flags_beat_environment(monkeypatch):
    monkeypatch.setenv("SKLY_SEED", "5")
    monkeypatch.setenv("SKLY_PRIMES", "13")
    assert _settings(["verify", "modules"])["seed"] == 5
    assert _settings(["verify", "modules"])["primes"] == "13"
    settings = _settings(["verify", "modules", "--seed", "2", "--prime", "11"])
    assert settings["seed"] == 2 and settings["primes"] == "11"


def test_symbolic_mode_drops_primes():
    assert _settings(["verify", "identities", "--mode", "symbolic", "--primes", "7"])["primes"] == ()


def test_verbosity_flags(monkeypatch):
    monkeypatch.setenv("SKLY_VERBOSE", "0")
    assert _settings(["verify", "all"])["verbosity"] == 0
    assert _settings(["verify", "all", "-vv"])["verbosity"] == 3
    assert _settings(["verify", "all", "-v", "-q"])["verbosity"] == 0


def test_unknown_suite_is_a_usage_error():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["verify", "everything"])


@pytest.mark.parametrize("argv", [
    ["verify", "schemes", "--mode", "symbolic"],
    ["verify", "identities", "--primes", "9"],
    ["verify", "sequences", "--prime", "7", "--cutoff", "3"],
    ["verify", "identities", "--jobs", "0"],
])
def test_configuration_errors_exit_with_two(argv, capsys):
    assert main(argv) == EXIT_CONFIG
    assert "configuration error" in capsys.readouterr().err


@pytest.mark.slow
def test_symbolic_modules_run(tmp_path):
    out = tmp_path / "symbolic.json"
    code = main(["verify", "modules", "--mode", "symbolic", "--cutoff", "3", "--out", str(out), "-q"])
    assert code == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["config"]["mode"] == "symbolic" and data["passed"]
    assert out.with_suffix(".md").exists()


@pytest.mark.slow
def test_replay_is_byte_identical(tmp_path):
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    argv = ["verify", "identities", "--prime", "7", "--seed", "1", "--cutoff", "3", "-q"]
    assert main(argv + ["--out", str(first)]) == main(argv + ["--out", str(second)])
    assert first.read_bytes() == second.read_bytes()


def test_failed_check_exits_with_one_and_still_writes_the_report(tmp_path, monkeypatch):
    class Failing(VerificationSuite):
        name = "identities"

        def run(self, ctx):
            report = AuditReport("hilbert")
            report.add("dims", False, witness=[1, 4, 9])
            return [report], {}, {}

    monkeypatch.setitem(suites.SUITES, "identities", Failing)
    out = tmp_path / "failing.json"
    assert main(["verify", "identities", "--prime", "7", "--cutoff", "3", "--out", str(out), "-q"]) == 1
    data = json.loads(out.read_text(encoding="utf-8"))
    assert not data["passed"]
    assert out.with_suffix(".md").exists()
