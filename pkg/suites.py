import time
from abc import ABC, abstractmethod

import pandas as pd

from algorithms import benchmark_groebner, benchmark_rref
from cpoly import parse_poly
from egeom import group_law_audit, pencil_audit, plucker_audit, tau_prime_audit
from factories import FieldContext
from gmod import (
    cyclic_quotient_audit,
    fat_point_audit,
    point_annihilator_audit,
    sequence_audit,
    simple2_audit,
    simple2_table,
)
from incidence import MIN_FAT_SAMPLES, incidence_report
from models import AuditReport, SuiteResult
from qalg import (
    associativity_check,
    automorphism_audit,
    central_pencil_audit,
    gamma_fixed_audit,
    h4_group_audit,
    hilbert_audit,
    twist_center_audit,
)
from scalar import field_axiom_check
from schemes import (
    LineSchemeResult,
    PointSchemeResult,
    commuting_conic_audit,
    component_certificates,
    conic_transport_audit,
    elliptic_component_audit,
    line_scheme_audit,
    line_scheme_enumerate,
    point_family_points,
    point_scheme,
    point_scheme_audit,
    quartic_audit,
    quartics_in_plucker,
    ruled_quadric_audit,
    tau_sign_certificate,
)
from utils import LINE_FAMILIES, PLUCKER_NAMES, SEQUENCE_CUTOFF

# ---------------------------------------------------------------------------
# Strategy interface
# ---------------------------------------------------------------------------

class VerificationSuite(ABC):
    """A named group of audits run on one field context."""
    name = ""
    anchor = ""
    needs_finite = False

    def __init__(self, dump_modules: bool = False):
        self.dump_modules = dump_modules

    @abstractmethod
    def run(self, ctx: FieldContext) -> tuple[list[AuditReport], dict, dict[str, pd.DataFrame]]:
        """Return the audit reports, the invariants and the tables."""
        ...

    def shared_invariants(self, invariants: dict) -> dict:
        """The part of the invariants that must agree across fields."""
        return {}

    def execute(self, ctx: FieldContext) -> SuiteResult:
        if self.needs_finite and not ctx.is_finite:
            raise ValueError(f"the {self.name!r} suite needs a finite field")
        start = time.perf_counter()
        reports, invariants, tables = self.run(ctx)
        elapsed = time.perf_counter() - start
        invariants = {"anchor": self.anchor, **invariants}
        return SuiteResult(self.name, ctx.label, reports, invariants, tables, elapsed)

# ---------------------------------------------------------------------------
# Shared enumeration data
# ---------------------------------------------------------------------------

def scheme_data(ctx: FieldContext) -> tuple[PointSchemeResult, PointSchemeResult, LineSchemeResult]:
    """Point schemes of A and S and the line scheme of A, computed once per context."""
    if "points_A" not in ctx.cache:
        ctx.cache["points_A"] = point_scheme(ctx.A)
    if "points_S" not in ctx.cache:
        ctx.cache["points_S"] = point_scheme(ctx.S)
    if "lines" not in ctx.cache:
        ctx.cache["lines"] = line_scheme_enumerate(ctx.A)
    return ctx.cache["points_A"], ctx.cache["points_S"], ctx.cache["lines"]


def _sign_of(report: AuditReport) -> str | None:
    for check in report.checks:
        if isinstance(check.witness, dict) and "sign" in check.witness:
            return check.witness["sign"]
    return None

# ---------------------------------------------------------------------------
# Concrete suites
# ---------------------------------------------------------------------------

class IdentitiesSuite(VerificationSuite):
    """Presentations, centers, automorphisms and the curve."""
    name = "identities"
    anchor = "relations, central elements, Heisenberg symmetries, E and tau"

    def run(self, ctx: FieldContext):
        F, S, A, curve = ctx.F, ctx.S, ctx.A, ctx.curve
        finite = ctx.is_finite

        sign = tau_sign_certificate(S, curve, ctx.rng("tau sign") if finite else None)
        reports = [
            field_axiom_check(F, ctx.rng("axioms"), trials=1000 if finite else 40),
            hilbert_audit(S),
            hilbert_audit(A),
            associativity_check(S, ctx.rng("assoc S"), samples=60 if finite else 6),
            associativity_check(A, ctx.rng("assoc A"), samples=60 if finite else 6),
            h4_group_audit(F),
            automorphism_audit(S, A),
            central_pencil_audit(S),
            twist_center_audit(A),
            gamma_fixed_audit(S, A, up_to=min(3, S.cutoff)),
            tau_prime_audit(curve),
            pencil_audit(curve, ctx.rng("pencil")),
            commuting_conic_audit(S, A),
            conic_transport_audit(F, ctx.rng("transport")),
            sign,
        ]
        if finite:
            reports.append(group_law_audit(curve, ctx.rng("group law")))
            reports.append(plucker_audit(curve, ctx.rng("plucker")))
        invariants = {"dims_S": S.dims(), "dims_A": A.dims(), "tau_sign": _sign_of(sign)}
        return reports, invariants, {}

    def shared_invariants(self, invariants: dict) -> dict:
        return {k: invariants.get(k) for k in ("dims_S", "dims_A", "tau_sign")}


class ModulesSuite(VerificationSuite):
    """Simple, point, fat point and cyclic modules."""
    name = "modules"
    anchor = "2-dimensional simples, point annihilators, fat points"

    def run(self, ctx: FieldContext):
        F, S, A, curve = ctx.F, ctx.S, ctx.A, ctx.curve
        finite = ctx.is_finite
        cutoff = min(4, A.cutoff)
        cyclic, modules = cyclic_quotient_audit(A, S, curve, cutoff)
        reports = [
            simple2_audit(S, curve if finite else None, ctx.rng("simples"), cutoff=min(3, cutoff)),
            point_annihilator_audit(A, point_family_points(F), cutoff),
            fat_point_audit(S, A, curve, ctx.rng("fat points"), samples=3 if finite else 0, cutoff=cutoff),
            cyclic,
        ]
        invariants = {"cyclic_dims": [M.dims for M in modules]}
        if self.dump_modules:
            invariants["modules"] = [M.summary() for M in modules]
        return reports, invariants, {"simple modules": simple2_table()}

    def shared_invariants(self, invariants: dict) -> dict:
        return {"cyclic_dims": invariants.get("cyclic_dims")}


class SchemesSuite(VerificationSuite):
    """Exhaustive point and line schemes with their certificates."""
    name = "schemes"
    anchor = "the 20 points and the 7 components of the line scheme"
    needs_finite = True

    def run(self, ctx: FieldContext):
        F, S, A, curve = ctx.F, ctx.S, ctx.A, ctx.curve
        points_A, points_S, lines = scheme_data(ctx)
        fit = quartics_in_plucker(A, ctx.rng("quartics"))
        reports = [
            point_scheme_audit(A, points_A),
            point_scheme_audit(S, points_S, curve),
            line_scheme_audit(lines, curve),
            component_certificates(F, ctx.rng("components")),
            elliptic_component_audit(curve, A),
            quartic_audit(fit, lines),
            ruled_quadric_audit(F, lines),
        ]

        bench = AuditReport("kernel cross-checks", anchor="custom kernels against generic and library ones")
        rref = benchmark_rref(F, seed=ctx.seed)
        gens = [parse_poly(t, PLUCKER_NAMES, F)
                for t in ("z01*z23 - z02*z13 + z03*z12", "z23 - z01", "z13 - z02", "z12 + z03")]
        groebner = benchmark_groebner(gens)
        bench.add("table RREF and sparse RREF agree on rank", rref["ranks_agree"])
        bench.add("Buchberger and sympy.groebner give the same basis", groebner["bases_agree"])
        reports.append(bench)

        counts = lines.counts
        invariants = {
            "points_A": len(points_A.points),
            "points_S": len(points_S.points),
            "curve_points": len(curve.curve_points()),
            "line_counts": counts,
            "quartic_kernel": fit.kernel_dim,
        }
        timings = pd.DataFrame([{"kernel": k, "ms": v} for k, v in {**rref, **groebner}.items() if k.endswith("_ms")],
                               columns=["kernel", "ms"])
        tables = {
            "point scheme of A": points_A.to_frame(F),
            "line scheme counts": pd.DataFrame([{"family": t, "lines": counts.get(t, 0)} for t in LINE_FAMILIES],
                                               columns=["family", "lines"]),
            "kernel timings": timings,
        }
        return reports, invariants, tables

    def shared_invariants(self, invariants: dict) -> dict:
        return {"points_A": invariants.get("points_A")}


class IncidenceSuite(VerificationSuite):
    """Points and fat points on the lines of the line scheme."""
    name = "incidence"
    anchor = "each point of P lies on exactly 6 lines"
    needs_finite = True

    def run(self, ctx: FieldContext):
        points_A, _, lines = scheme_data(ctx)
        report = incidence_report(ctx.S, ctx.A, ctx.curve, lines, points_A.families, ctx.rng("incidence"),
                                  fat_samples=MIN_FAT_SAMPLES, metadata=ctx.metadata)
        frame = report.point_counts
        profiles = {
            fam: sorted({tuple(int(x) for x in row) for row in sub[list(LINE_FAMILIES)].itertuples(index=False)})
            for fam, sub in frame.groupby("family")
        }
        invariants = {"point_profiles": profiles, "fat_points": len(report.fat_counts)}
        return report.reports, invariants, report.tables()

    def shared_invariants(self, invariants: dict) -> dict:
        return {"point_profiles": invariants.get("point_profiles")}


class SequencesSuite(VerificationSuite):
    """Kernels of surjections from line modules onto points and fat points."""
    name = "sequences"
    anchor = "0 -> L(-1) -> M -> P -> 0 and 0 -> L(-2) -> M -> F -> 0"
    needs_finite = True

    def run(self, ctx: FieldContext):
        points_A, _, lines = scheme_data(ctx)
        cutoff = min(SEQUENCE_CUTOFF, ctx.A.cutoff)
        report, results = sequence_audit(ctx.A, ctx.S, lines, points_A, ctx.curve, ctx.rng("sequences"), cutoff=cutoff)
        frame = pd.DataFrame([r.to_dict() for r in results],
                             columns=["source", "target", "case", "image_dims", "kernel_dims", "kernel_tag",
                                      "predicted", "base_matched", "matched"])
        kernels = sorted({(r.source or "", r.target, tuple(r.kernel_dims)) for r in results if r.matched})
        # conic kernels: group-law positions are compared, not gated
        halved = [r for r in results if r.case == "conic onto ordinary point" and r.base_predictions]
        invariants = {"pairs": len(results), "kernel_shapes": sorted({(r.target == "fat", tuple(r.kernel_dims))
                                                                      for r in results}),
                      "kernels": kernels,
                      "conic_base_points": {"with_rational_half": len(halved),
                                            "matched": sum(any(r.base_predictions.values()) for r in halved)}}
        return [report], invariants, {"exact sequences": frame}

    def shared_invariants(self, invariants: dict) -> dict:
        return {"kernel_shapes": invariants.get("kernel_shapes")}

# ---------------------------------------------------------------------------
# Factory
# ---------------------------------------------------------------------------

SUITES = {
    "identities": IdentitiesSuite,
    "modules": ModulesSuite,
    "schemes": SchemesSuite,
    "incidence": IncidenceSuite,
    "sequences": SequencesSuite,
}


def create_suite(name: str, dump_modules: bool = False) -> VerificationSuite:
    name = name.lower().strip()
    if name not in SUITES:
        raise ValueError(f"Unknown suite: {name!r}")
    return SUITES[name](dump_modules)
