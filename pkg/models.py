from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from utils import (
    ENUMERATION_SUITES,
    FINITE_CUTOFF,
    SUITE_ORDER,
    SYMBOLIC_CUTOFF,
    VALID_MODES,
    VALID_SUITES,
    fmt_verdict,
    validate_in,
    validate_positive,
    validate_prime,
    validate_range,
)


def to_jsonable(value: Any) -> Any:
    """Convert witness data into plain JSON types."""
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, float):
        return value
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [to_jsonable(v) for v in value]
        return sorted(items, key=str) if isinstance(value, (set, frozenset)) else items
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    return str(value)


# ---------------------------------------------------------------------------
# Abstract Base Class
# ---------------------------------------------------------------------------

class ReportRecord(ABC):
    def __init__(self, name: str):
        if not name:
            raise ValueError("name cannot be empty")
        self.name = name

    @abstractmethod
    def to_dict(self) -> dict:
        pass

    @abstractmethod
    def __str__(self):
        pass

    def __repr__(self):
        return f"{type(self).__name__}(name='{self.name}')"


# ---------------------------------------------------------------------------
# Checks and audits
# ---------------------------------------------------------------------------

class Check(ReportRecord):
    """One verified claim with its anchor and witness data."""

    def __init__(self, name: str, passed: bool, anchor: str = "", witness: Any = None):
        super().__init__(name)
        self.passed = bool(passed)
        self.anchor = anchor
        self.witness = witness

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "anchor": self.anchor,
            "witness": to_jsonable(self.witness),
        }

    def __str__(self):
        return f"[{'OK' if self.passed else 'FAIL'}] {self.name}"


class AuditReport(ReportRecord):
    def __init__(self, name: str, anchor: str = ""):
        super().__init__(name)
        self.anchor = anchor
        self.checks: list[Check] = []

    def add(self, name: str, passed: bool, anchor: str | None = None, witness: Any = None) -> Check:
        check = Check(name, passed, anchor if anchor is not None else self.anchor, witness)
        self.checks.append(check)
        return check

    def extend(self, other: "AuditReport") -> "AuditReport":
        for check in other.checks:
            self.checks.append(Check(f"{other.name}: {check.name}", check.passed, check.anchor, check.witness))
        return self

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [{"check": c.name, "verdict": fmt_verdict(c.passed), "anchor": c.anchor} for c in self.checks],
            columns=["check", "verdict", "anchor"],
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    def __str__(self):
        return f"Audit {self.name}: {len(self.checks) - len(self.failures)}/{len(self.checks)} passed"


class SuiteResult(ReportRecord):
    """All audits of one suite on one field. Timing stays out of to_dict."""

    def __init__(
        self,
        name: str,
        field_label: str,
        reports: list[AuditReport],
        invariants: dict | None = None,
        tables: dict[str, pd.DataFrame] | None = None,
        elapsed: float = 0.0,
    ):
        super().__init__(name)
        self.field_label = field_label
        self.reports = reports
        self.invariants = invariants or {}
        self.tables = tables or {}
        self.elapsed = elapsed

    @property
    def passed(self) -> bool:
        return bool(self.reports) and all(r.passed for r in self.reports)

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "field": self.field_label,
            "passed": self.passed,
            "invariants": to_jsonable(self.invariants),
            "audits": [r.to_dict() for r in self.reports],
        }

    def __str__(self):
        return f"Suite {self.name} on {self.field_label}: {fmt_verdict(self.passed)}"


# ---------------------------------------------------------------------------
# Run configuration and report
# ---------------------------------------------------------------------------

class RunConfig:
    def __init__(
        self,
        suite: str = "all",
        mode: str = "specialized",
        primes: tuple[int, ...] = (),
        seed: int = 0,
        cutoff: int | None = None,
        jobs: int = 1,
        out: Path | None = None,
        verbosity: int = 1,
        dump_modules: bool = False,
    ):
        self.suite = suite
        self.mode = mode
        self.primes = tuple(primes)
        self.seed = seed
        self.cutoff = cutoff if cutoff is not None else (SYMBOLIC_CUTOFF if mode == "symbolic" else FINITE_CUTOFF)
        self.jobs = jobs
        self.out = Path(out) if out is not None else None
        self.verbosity = verbosity
        self.dump_modules = dump_modules

    @property
    def suites(self) -> tuple[str, ...]:
        if self.suite == "all":
            if self.mode == "symbolic":
                return tuple(s for s in SUITE_ORDER if s not in ENUMERATION_SUITES)
            return SUITE_ORDER
        return (self.suite,)

    def validate(self) -> "RunConfig":
        validate_in(self.suite, VALID_SUITES, "suite")
        validate_in(self.mode, VALID_MODES, "mode")
        validate_positive(self.jobs, "jobs")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        if self.mode == "specialized":
            if not self.primes:
                raise ValueError("specialized mode requires at least one prime")
            for p in self.primes:
                validate_prime(p, "prime")
            if len(set(self.primes)) != len(self.primes):
                raise ValueError(f"primes must be distinct, got {self.primes}")
            validate_range(self.cutoff, 2, FINITE_CUTOFF, "cutoff")
        else:
            if self.suite in ENUMERATION_SUITES:
                raise ValueError(f"symbolic mode cannot run the {self.suite!r} suite")
            validate_range(self.cutoff, 2, SYMBOLIC_CUTOFF, "cutoff")
        if "sequences" in self.suites and self.cutoff < 4:
            raise ValueError(f"the sequences suite needs cutoff >= 4, got {self.cutoff}")
        return self

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "mode": self.mode,
            "primes": list(self.primes),
            "seed": self.seed,
            "cutoff": self.cutoff,
            "dump_modules": self.dump_modules,
        }

    def __repr__(self):
        return f"RunConfig(suite='{self.suite}', mode='{self.mode}', primes={self.primes})"


class RunReport(ReportRecord):
    def __init__(self, config: RunConfig):
        super().__init__(f"verify {config.suite}")
        self.config = config
        self.fields: dict[str, dict] = {}
        self.results: list[SuiteResult] = []
        self.agreement: AuditReport | None = None

    @property
    def passed(self) -> bool:
        ok = bool(self.results) and all(r.passed for r in self.results)
        if self.agreement is not None:
            ok = ok and self.agreement.passed
        return ok

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def summary_frame(self) -> pd.DataFrame:
        rows = []
        for result in self.results:
            checks = [c for r in result.reports for c in r.checks]
            rows.append({
                "suite": result.name,
                "field": result.field_label,
                "checks": len(checks),
                "failed": sum(not c.passed for c in checks),
                "verdict": fmt_verdict(result.passed),
                "time_ms": round(result.elapsed * 1000, 1),
            })
        return pd.DataFrame(rows, columns=["suite", "field", "checks", "failed", "verdict", "time_ms"])

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "fields": to_jsonable(self.fields),
            "results": [r.to_dict() for r in self.results],
            "agreement": self.agreement.to_dict() if self.agreement is not None else None,
            "passed": self.passed,
        }

    def __str__(self):
        return f"Run {self.name}: {fmt_verdict(self.passed)} ({len(self.results)} suite results)"
