"""
Run orchestration: one field context per prime (or the symbolic tower),
the requested suites in dependency order on each, agreement across fields,
and the JSON and Markdown reports.
"""

import json
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import pandas as pd

from factories import FieldContext, create_specialization, create_symbolic_context
from models import AuditReport, RunConfig, RunReport, SuiteResult, to_jsonable
from suites import create_suite
from utils import (
    OUTPUT_DIR,
    ComputationLimit,
    CutoffExceeded,
    DegenerateConfiguration,
    DegenerateSpecialization,
    fmt_ms,
    fmt_verdict,
    frame_to_markdown,
)

DOMAIN_ERRORS = (CutoffExceeded, DegenerateSpecialization, DegenerateConfiguration, ComputationLimit)


def _failed_result(name: str, label: str, exc: Exception) -> SuiteResult:
    report = AuditReport(name, anchor="suite raised before completing")
    report.add(f"{type(exc).__name__}: {exc}", False)
    return SuiteResult(name, label, [report])


def run_suites(ctx: FieldContext, suites: tuple[str, ...], dump_modules: bool = False) -> list[SuiteResult]:
    results = []
    for name in suites:
        suite = create_suite(name, dump_modules)
        try:
            results.append(suite.execute(ctx))
        except (*DOMAIN_ERRORS, ValueError) as exc:
            results.append(_failed_result(name, ctx.label, exc))
    return results


def _run_prime(prime: int, seed: int, cutoff: int, suites: tuple[str, ...],
               dump_modules: bool) -> tuple[str, dict, list[SuiteResult]]:
    """Worker for the process pool: build the context and run every suite."""
    ctx = create_specialization(prime, seed, cutoff)
    return ctx.label, ctx.metadata, run_suites(ctx, suites, dump_modules)


class VerificationRun:
    def __init__(self, config: RunConfig) -> None:
        self.config = config.validate()
        self.contexts: list[FieldContext] | None = None

    def _say(self, text: str, level: int = 1) -> None:
        if self.config.verbosity >= level:
            print(text)

    # ------------------------------------------------------------------
    # Contexts
    # ------------------------------------------------------------------
    def prepare(self) -> None:
        cfg = self.config
        self._say("\n>>> Step 1: building field contexts …")
        if cfg.mode == "symbolic":
            self.contexts = [create_symbolic_context(cfg.cutoff, cfg.seed)]
        elif cfg.jobs > 1:
            # workers build their own contexts
            self.contexts = []
        else:
            self.contexts = [create_specialization(p, cfg.seed, cfg.cutoff) for p in cfg.primes]
        for ctx in self.contexts:
            rejected = ctx.metadata.get("rejected", [])
            if rejected:
                self._say(f"  [WARNING] {ctx.label}: {len(rejected)} specialization(s) rejected before seed {ctx.seed}")
            self._say(f"  [OK] {ctx.label} (seed {ctx.seed})")

    # ------------------------------------------------------------------
    # Running
    # ------------------------------------------------------------------
    def run(self) -> RunReport:
        if self.contexts is None:
            raise RuntimeError("Call prepare() first")
        cfg = self.config
        report = RunReport(cfg)
        self._say(f"\n>>> Step 2: running {', '.join(cfg.suites)} …")

        if cfg.mode == "specialized" and cfg.jobs > 1:
            with ProcessPoolExecutor(max_workers=min(cfg.jobs, len(cfg.primes))) as pool:
                futures = [pool.submit(_run_prime, p, cfg.seed, cfg.cutoff, cfg.suites, cfg.dump_modules)
                           for p in cfg.primes]
                outcomes = [f.result() for f in futures]
        else:
            outcomes = [(ctx.label, ctx.metadata, run_suites(ctx, cfg.suites, cfg.dump_modules))
                        for ctx in self.contexts]

        for label, metadata, results in outcomes:
            report.fields[label] = metadata
            for result in results:
                report.results.append(result)
                self._log_result(result)

        if len(outcomes) > 1:
            self._say("\n>>> Step 3: checking agreement across fields …")
            report.agreement = agreement_audit(report.results, cfg.suites, cfg.dump_modules)
            self._say(f"  [{'OK' if report.agreement.passed else 'FAIL'}] {report.agreement}")
        return report

    def _log_result(self, result: SuiteResult) -> None:
        tag = "OK" if result.passed else "FAIL"
        self._say(f"  [{tag}] {result.name} on {result.field_label} ({fmt_ms(result.elapsed)})")
        for audit in result.reports:
            for check in audit.checks:
                if not check.passed:
                    self._say(f"    [FAIL] {audit.name}: {check.name}")
                else:
                    self._say(f"    [OK] {audit.name}: {check.name}", level=2)

    # ------------------------------------------------------------------
    # Output
    # ------------------------------------------------------------------
    def default_path(self) -> Path:
        return OUTPUT_DIR / f"verify_{self.config.suite}_{self.config.mode}.json"

    def save(self, report: RunReport) -> tuple[Path, Path]:
        path = self.config.out or self.default_path()
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(report_json(report), encoding="utf-8")
        self._say(f"[OK] Saved {path}")
        md_path = path.with_suffix(".md")
        md_path.write_text(report_markdown(report), encoding="utf-8")
        self._say(f"[OK] Saved {md_path}")
        return path, md_path

# ---------------------------------------------------------------------------
# Agreement across fields
# ---------------------------------------------------------------------------

def agreement_audit(results: list[SuiteResult], suites: tuple[str, ...], dump_modules: bool = False) -> AuditReport:
    """Verdicts and field-independent invariants must match on every field."""
    report = AuditReport("agreement across fields", anchor="enumeration criteria agree on every specialization")
    for name in suites:
        suite = create_suite(name, dump_modules)
        per_field = [r for r in results if r.name == name]
        verdicts = {r.field_label: r.passed for r in per_field}
        report.add(f"{name}: same verdict on every field", len(set(verdicts.values())) <= 1, witness=verdicts)
        shared = {r.field_label: to_jsonable(suite.shared_invariants(r.invariants)) for r in per_field}
        distinct = {json.dumps(v, sort_keys=True) for v in shared.values()}
        report.add(f"{name}: field-independent invariants agree", len(distinct) <= 1, witness=shared)
    return report

# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def report_json(report: RunReport) -> str:
    """Stable JSON with no timing data, so a replay is byte-identical."""
    return json.dumps(report.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def report_markdown(report: RunReport) -> str:
    cfg = report.config
    out = [f"# Verification report: {cfg.suite} ({cfg.mode})", ""]
    out.append(f"Overall verdict: **{fmt_verdict(report.passed)}**")
    out.append("")
    out.append(frame_to_markdown(report.summary_frame()))

    for result in report.results:
        out += ["", f"## {result.name} on {result.field_label}", ""]
        if result.invariants.get("anchor"):
            out += [f"Anchor: {result.invariants['anchor']}", ""]
        audits = pd.DataFrame([
            {"audit": a.name, "checks": len(a.checks), "failed": len(a.failures), "verdict": fmt_verdict(a.passed)}
            for a in result.reports
        ], columns=["audit", "checks", "failed", "verdict"])
        out.append(frame_to_markdown(audits))
        failures = [(a.name, c) for a in result.reports for c in a.failures]
        if failures:
            out += ["", "Failed checks:", ""]
            out += [f"- {name}: {check.name} (witness: {to_jsonable(check.witness)})" for name, check in failures]
        for title, table in result.tables.items():
            out += ["", f"### {title}", "", frame_to_markdown(table)]

    if report.agreement is not None:
        out += ["", "## Agreement across fields", "", frame_to_markdown(report.agreement.to_frame())]
    return "\n".join(out) + "\n"
