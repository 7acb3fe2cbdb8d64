"""
Incidence of points and fat points on the lines of the line scheme.

A point lies on a line when the line module maps onto its point module,
which at degree zero is hom0 != 0; every count below is taken both ways
(geometric membership and hom0) and the two are compared. Fat point
counts are taken over the algebraic closure: the lines through a fat
point form a pencil indexed by v in P^1, and the lines of a component in
that pencil are the common roots of the component equations along it.
"""

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

import numerical as la
from algorithms import poly_gcd, poly_roots, poly_trim
from cpoly import Poly
from egeom import ECurve, PluckerLine, ProjPoint, QuadricForm
from gmod import cyclic_quotient, fat_point_module, hom0, point_module
from models import AuditReport
from qalg import QuadraticPresentation, quaternion_units
from scalar import FieldContract
from schemes import (
    COMPONENTS,
    RULED_QUADRICS,
    LineSchemeResult,
    intersection_points,
    plucker_relation,
    secant_line,
)
from utils import LINE_FAMILIES, POINT_FAMILIES

CONIC_FAMILIES = LINE_FAMILIES[:4]
ELLIPTIC_FAMILIES = LINE_FAMILIES[4:]
MIN_FAT_SAMPLES = 10


@dataclass
class IncidenceReport:
    field_label: str
    metadata: dict
    point_counts: pd.DataFrame
    fat_counts: pd.DataFrame
    intersections: list[dict] = field(default_factory=list)
    quadrics: pd.DataFrame | None = None
    sequences: list[dict] = field(default_factory=list)
    reports: list[AuditReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.reports) and all(r.passed for r in self.reports)

    def tables(self) -> dict[str, pd.DataFrame]:
        tables = {"point incidence": self.point_counts, "fat point incidence": self.fat_counts}
        if self.intersections:
            tables["intersections"] = pd.DataFrame(self.intersections, columns=["pair", "computed", "table", "matched"])
        if self.quadrics is not None:
            tables["ruled quadrics"] = self.quadrics
        return tables

    def to_dict(self) -> dict:
        return {
            "field": self.field_label,
            "metadata": self.metadata,
            "point_counts": self.point_counts.to_dict(orient="records"),
            "fat_counts": self.fat_counts.to_dict(orient="records"),
            "intersections": self.intersections,
            "sequences": self.sequences,
            "passed": self.passed,
        }

# ---------------------------------------------------------------------------
# Points of P on lines
# ---------------------------------------------------------------------------

def expected_point_counts(family: str) -> dict[str, int]:
    if family == "Pinf":
        return {**{t: 0 for t in CONIC_FAMILIES}, **{t: 2 for t in ELLIPTIC_FAMILIES}}
    j = family[1]
    return {**{t: int(t[1] != j) for t in CONIC_FAMILIES}, **{t: 1 for t in ELLIPTIC_FAMILIES}}


def _line_modules(A: QuadraticPresentation, lines: LineSchemeResult) -> list:
    return [cyclic_quotient(A, rec.line.forms(), 1) for rec in lines.lines]


def _point_rows(A: QuadraticPresentation, lines: LineSchemeResult, points: dict[str, list[ProjPoint]],
                line_modules: list | None = None) -> tuple[pd.DataFrame, list[dict]]:
    """Per point: lines through it per family, distinct total, and hom0 disagreements."""
    F = A.F
    line_modules = line_modules if line_modules is not None else _line_modules(A, lines)
    rows, disagreements = [], []
    for fam in POINT_FAMILIES:
        for p in points.get(fam, []):
            P = point_module(A, p, 1)
            counts = dict.fromkeys(LINE_FAMILIES, 0)
            total = 0
            for rec, L in zip(lines.lines, line_modules):
                on_line = rec.line.contains(p)
                if on_line != (hom0(L, P)[0] > 0):
                    disagreements.append({"point": p.to_str(F), "line": rec.line.to_str()})
                if not on_line:
                    continue
                total += 1
                for tag in rec.tags:
                    counts[tag] += 1
            rows.append({"point": p.to_str(F), "family": fam, **counts, "distinct": total})
    return pd.DataFrame(rows, columns=["point", "family", *LINE_FAMILIES, "distinct"]), disagreements


def conic_point_incidence(A: QuadraticPresentation, lines: LineSchemeResult, points: dict[str, list[ProjPoint]],
                          frame: pd.DataFrame | None = None) -> tuple[AuditReport, pd.DataFrame]:
    """
    Conic lines through each of the twenty points, with the ruled quadric
    Q_j as the cross-check: p is on Q_j exactly when one C_j line passes
    through it.
    """
    F = A.F
    report = AuditReport("conic incidence", anchor="points of P on the conic families")
    if frame is None:
        frame, disagreements = _point_rows(A, lines, points)
        report.add("hom0 != 0 exactly for lines through the point", not disagreements, witness=disagreements[:5])
    for fam in POINT_FAMILIES:
        sub = frame[frame["family"] == fam]
        expected = expected_point_counts(fam)
        for tag in CONIC_FAMILIES:
            report.add(f"every {fam} point lies on {expected[tag]} {tag} line(s)",
                       bool(len(sub)) and bool((sub[tag] == expected[tag]).all()),
                       witness=sub[tag].tolist())

    quadric_rows = []
    for j in range(4):
        Q = QuadricForm.diagonal(F, [F.value(x) for x in RULED_QUADRICS[j]], f"Q{j}")
        for fam in POINT_FAMILIES:
            for p in points.get(fam, []):
                count = int(frame.loc[frame["point"] == p.to_str(F), f"C{j}"].iloc[0])
                on_quadric = F.is_zero(Q.value(p))
                quadric_rows.append({"quadric": f"Q{j}", "point": p.to_str(F), "family": fam,
                                     "on_quadric": on_quadric, "conic_lines": count})
    quadrics = pd.DataFrame(quadric_rows, columns=["quadric", "point", "family", "on_quadric", "conic_lines"])
    agree = quadrics["on_quadric"] == (quadrics["conic_lines"] == 1)
    report.add("p in Q_j iff p lies on exactly one C_j line", bool(agree.all()),
               anchor="the quadric ruled by the lines in C_j",
               witness=quadrics[~agree].to_dict(orient="records")[:5])
    return report, quadrics


def elliptic_point_incidence(curve: ECurve, lines: LineSchemeResult, points: dict[str, list[ProjPoint]],
                             frame: pd.DataFrame) -> tuple[AuditReport, pd.DataFrame]:
    """
    Elliptic lines through each point. Only half the lines of E_j are
    secants of rational pairs, so the count gate uses the enumerated lines;
    the secant images through each point are recorded next to them.
    """
    F = curve.F
    report = AuditReport("elliptic incidence", anchor="lines of E/<xi> through the points of P")
    secants = {f"E{j}": {secant_line(curve, p, j) for p in curve.curve_points()} for j in (1, 2, 3)}
    for tag, found in secants.items():
        report.add(f"secant images for {tag} are lines of {tag}", found <= set(lines.lines_of(tag)),
                   witness={"secants": len(found)})

    rows = []
    for fam in POINT_FAMILIES:
        for p in points.get(fam, []):
            rows.append({"point": p.to_str(F), "family": fam,
                         **{f"sec_{tag}": sum(L.contains(p) for L in secants[tag]) for tag in ELLIPTIC_FAMILIES}})
    secant_frame = pd.DataFrame(rows, columns=["point", "family", *(f"sec_{t}" for t in ELLIPTIC_FAMILIES)])

    for fam in POINT_FAMILIES:
        sub = frame[frame["family"] == fam]
        expected = expected_point_counts(fam)
        for tag in ELLIPTIC_FAMILIES:
            report.add(f"every {fam} point lies on {expected[tag]} {tag} line(s)",
                       bool(len(sub)) and bool((sub[tag] == expected[tag]).all()),
                       anchor="exactly two lines for special points, one for ordinary points",
                       witness=sub[tag].tolist())
        if fam == "Pinf":
            sec = secant_frame[secant_frame["family"] == fam]
            report.add("special points lie on two rational secants per family",
                       bool((sec[[f"sec_{t}" for t in ELLIPTIC_FAMILIES]] == 2).all().all()))
    per_family = frame[list(LINE_FAMILIES)].sum(axis=1)
    report.add("every point lies on six lines", bool((per_family == 6).all()), anchor="lies on exactly 6 lines",
               witness={"per_family_sums": per_family.tolist(), "distinct": frame["distinct"].tolist()})
    return report, secant_frame

# ---------------------------------------------------------------------------
# Fat points on lines
# ---------------------------------------------------------------------------

def fat_line_pencil(F: FieldContract, p) -> list[Poly]:
    """
    z-coordinates of the line {w : f_p(w) v = 0} as binary quadratic forms
    in v = (s, t). The rows of the matrix with columns p_j q_j v span it.
    """
    q = quaternion_units(F)
    s, t = Poly.variable(F, 2, 0), Poly.variable(F, 2, 1)
    rows = [[Poly(F, 2) for _ in range(4)] for _ in range(2)]
    for j in range(4):
        for r in range(2):
            rows[r][j] = s.scale(F.mul(p[j], q[j][r][0])) + t.scale(F.mul(p[j], q[j][r][1]))
    X = [rows[0][a] * rows[1][b] - rows[0][b] * rows[1][a] for a, b in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))]
    x01, x02, x03, x12, x13, x23 = X
    return [x23, -x13, x12, x03, -x02, x01]


def _dehomogenize(F: FieldContract, form: Poly) -> list:
    """Coefficients in s with t = 1, lowest degree first."""
    degree = form.degree()
    coeffs = [F.zero] * (degree + 1)
    for (a, _), c in form.terms.items():
        coeffs[a] = c
    return coeffs


def _derivative(F: FieldContract, f: list) -> list:
    return poly_trim(F, [F.mul(F.from_int(k), c) for k, c in enumerate(f)][1:])


def binary_root_count(F: FieldContract, forms: list[Poly]) -> int | None:
    """Distinct common zeros in P^1 over the algebraic closure; None if all forms vanish."""
    forms = [g for g in forms if g]
    if not forms:
        return None
    g: list = []
    for form in forms:
        g = poly_gcd(F, g, _dehomogenize(F, form))
    finite = 0
    if len(g) > 1:
        finite = (len(g) - 1) - (len(poly_gcd(F, g, _derivative(F, g))) - 1)
    at_infinity = all(F.is_zero(c) for form in forms for (a, _), c in form.terms.items() if a == form.degree())
    return finite + int(at_infinity)


def fat_family_count(F: FieldContract, p, tag: str) -> int | None:
    z = fat_line_pencil(F, p)
    return binary_root_count(F, [g.compose(z) for g in COMPONENTS[tag].ideal(F)])


def fat_point_sample(curve: ECurve, rng: np.random.Generator, samples: int = MIN_FAT_SAMPLES) -> list[tuple[str, ProjPoint]]:
    """
    The four distinguished points tau' + eps_j, labelled by their conic,
    then generic points of E away from E[4] and from the E[2]-cosets of the
    distinguished points.
    """
    F = curve.F
    tp = curve.tau_prime
    distinguished = [("C0", tp)] + [(f"C{j}", curve.eps_translate(j, tp)) for j in (1, 2, 3)]
    cosets = {curve.gamma_translate(k, p) for _, p in distinguished for k in (1, 2, 3)} | {p for _, p in distinguished}
    pool = [p for p in curve.curve_points() if p not in cosets and not any(F.is_zero(x) for x in p)]
    need = max(samples, MIN_FAT_SAMPLES) - len(distinguished)
    picks = rng.choice(len(pool), size=min(need, len(pool)), replace=False) if pool else []
    return distinguished + [("generic", pool[int(k)]) for k in sorted(picks)]


def fat_incidence(S: QuadraticPresentation, A: QuadraticPresentation, curve: ECurve, lines: LineSchemeResult,
                  rng: np.random.Generator, samples: int = MIN_FAT_SAMPLES,
                  line_modules: list | None = None) -> tuple[AuditReport, pd.DataFrame]:
    F = A.F
    report = AuditReport("fat point incidence", anchor="two lines in each elliptic family")
    line_modules = line_modules if line_modules is not None else _line_modules(A, lines)
    sample = fat_point_sample(curve, rng, samples)
    report.add(f"at least {MIN_FAT_SAMPLES} fat points sampled", len(sample) >= MIN_FAT_SAMPLES, witness=len(sample))

    rows, hits_by_conic = [], {tag: [] for tag in CONIC_FAMILIES}
    for kind, p in sample:
        fat = fat_point_module(S, p, 1).module
        rational = dict.fromkeys(LINE_FAMILIES, 0)
        for rec, L in zip(lines.lines, line_modules):
            if hom0(L, fat)[0] == 0:
                continue
            for tag in rec.tags:
                rational[tag] += 1
        geometric = {tag: fat_family_count(F, p, tag) for tag in LINE_FAMILIES}
        for tag in CONIC_FAMILIES:
            if rational[tag]:
                hits_by_conic[tag].append(kind)
        rows.append({"point": p.to_str(F), "kind": kind,
                     **{tag: "all" if n is None else n for tag, n in geometric.items()},
                     **{f"rational_{tag}": rational[tag] for tag in LINE_FAMILIES}})

        if kind == "generic":
            report.add(f"fat point {p.to_str(F)}: two lines per elliptic family",
                       all(geometric[t] == 2 for t in ELLIPTIC_FAMILIES),
                       witness={t: geometric[t] for t in ELLIPTIC_FAMILIES})
            report.add(f"fat point {p.to_str(F)}: no conic lines",
                       all(geometric[t] == 0 for t in CONIC_FAMILIES))
        else:
            report.add(f"every {kind} line passes through the fat point {p.to_str(F)}",
                       geometric[kind] is None and rational[kind] == len(lines.lines_of(kind)),
                       anchor="tau' + eps_j + E[2] is the unique fat point on C_j",
                       witness={"rational": rational[kind], "lines": len(lines.lines_of(kind))})
        report.add(f"fat point {p.to_str(F)}: rational counts within geometric counts",
                   all(geometric[t] is None or rational[t] <= geometric[t] for t in LINE_FAMILIES))

    for tag in CONIC_FAMILIES:
        report.add(f"{tag} lines meet no other sampled fat point", hits_by_conic[tag] == [tag],
                   witness=hits_by_conic[tag])
    columns = ["point", "kind", *LINE_FAMILIES, *(f"rational_{t}" for t in LINE_FAMILIES)]
    return report, pd.DataFrame(rows, columns=columns)

# ---------------------------------------------------------------------------
# C_i meets E_j
# ---------------------------------------------------------------------------

def _linear_rows(F: FieldContract, polys: list[Poly]) -> list[list]:
    return [[g.terms.get(tuple(int(k == v) for k in range(6)), F.zero) for v in range(6)] for g in polys]


def component_intersection(F: FieldContract, conic: str, elliptic: str) -> list[tuple]:
    """
    Points of C_i cap E_j from the equations: the linear equations leave a
    projective line of z, on which the quadrics cut the intersection.
    """
    lin_c, quad_c = COMPONENTS[conic].polys(F)
    lin_e, quad_e = COMPONENTS[elliptic].polys(F)
    basis = la.nullspace(F, _linear_rows(F, lin_c + lin_e), 6)
    if len(basis) != 2:
        raise ValueError(f"{conic} and {elliptic} span a linear space of dimension {len(basis) - 1}")
    u, v = basis
    s, t = Poly.variable(F, 2, 0), Poly.variable(F, 2, 1)
    z = [s.scale(a) + t.scale(b) for a, b in zip(u, v)]
    forms = [g.compose(z) for g in quad_c + quad_e + [plucker_relation(F)]]
    forms = [g for g in forms if g]
    g: list = []
    for form in forms:
        g = poly_gcd(F, g, _dehomogenize(F, form))
    points = [la.normalize(F, [F.add(F.mul(r, a), b) for a, b in zip(u, v)]) for r in poly_roots(F, g)] if len(g) > 1 else []
    if all(F.is_zero(c) for form in forms for (a, _), c in form.terms.items() if a == form.degree()):
        points.append(la.normalize(F, u))
    return sorted(set(points))


def intersection_table_audit(F: FieldContract, lines: LineSchemeResult | None = None) -> tuple[AuditReport, list[dict]]:
    report = AuditReport("intersection table", anchor="intersection points C_i cap E_j")
    table = intersection_points(F)
    rows, total = [], 0
    for (conic, elliptic), expected in table.items():
        computed = component_intersection(F, conic, elliptic)
        total += len(computed)
        matched = set(computed) == set(expected)
        report.add(f"|{conic} cap {elliptic}| = 2", len(computed) == 2, witness=len(computed))
        report.add(f"{conic} cap {elliptic} matches the table", matched,
                   witness={"computed": [[F.to_str(x) for x in z] for z in computed],
                            "expected": [[F.to_str(x) for x in z] for z in expected]})
        if lines is not None:
            found = {rec.z for rec in lines.lines if rec.tags == (conic, elliptic)}
            report.add(f"{conic} cap {elliptic} agrees with the enumeration", found == set(computed))
        rows.append({"pair": f"{conic} cap {elliptic}",
                     "computed": "; ".join("(" + ", ".join(F.to_str(x) for x in z) + ")" for z in computed),
                     "table": "; ".join("(" + ", ".join(F.to_str(x) for x in z) + ")" for z in expected),
                     "matched": matched})
    report.add("24 intersection points in all", total == 24, witness=total)
    return report, rows

# ---------------------------------------------------------------------------
# Gamma invariance
# ---------------------------------------------------------------------------

def _gamma_point(F: FieldContract, j: int, p) -> ProjPoint:
    return ProjPoint.of(F, [x if k in (0, j) else F.neg(x) for k, x in enumerate(p)])


def gamma_invariance_check(F: FieldContract, lines: LineSchemeResult, points: dict[str, list[ProjPoint]],
                           frame: pd.DataFrame, j: int = 1) -> AuditReport:
    """Recompute the point counts after gamma_j moves every point and every line."""
    report = AuditReport("gamma invariance", anchor=f"the incidence counts are gamma{j}-invariant")
    moved = {}
    for rec in lines.lines:
        a, b = rec.line.span()
        moved[PluckerLine.from_points(F, _gamma_point(F, j, a), _gamma_point(F, j, b))] = rec.tags
    report.add(f"gamma{j} permutes each line family", moved == {rec.line: rec.tags for rec in lines.lines})

    mismatches = []
    for fam, pts in points.items():
        for p in pts:
            image = _gamma_point(F, j, p)
            counts = dict.fromkeys(LINE_FAMILIES, 0)
            for L, tags in moved.items():
                if L.contains(image):
                    for tag in tags:
                        counts[tag] += 1
            original = frame.loc[frame["point"] == p.to_str(F), list(LINE_FAMILIES)].iloc[0].to_dict()
            if {k: int(v) for k, v in original.items()} != counts:
                mismatches.append(p.to_str(F))
    report.add("moved points meet moved lines as before", not mismatches, witness=mismatches)
    report.add(f"gamma{j} permutes each point family",
               all({_gamma_point(F, j, p) for p in pts} == set(pts) for pts in points.values()))
    return report

# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------

def incidence_report(S: QuadraticPresentation, A: QuadraticPresentation, curve: ECurve, lines: LineSchemeResult,
                     points: dict[str, list[ProjPoint]], rng: np.random.Generator, fat_samples: int = MIN_FAT_SAMPLES,
                     metadata: dict | None = None) -> IncidenceReport:
    F = A.F
    line_modules = _line_modules(A, lines)
    frame, disagreements = _point_rows(A, lines, points, line_modules)
    hom_report = AuditReport("hom0 versus membership", anchor="lying on a line is an epimorphism of modules")
    hom_report.add("hom0 != 0 exactly for lines through the point", not disagreements, witness=disagreements[:5])

    conic_report, quadrics = conic_point_incidence(A, lines, points, frame)
    elliptic_report, secant_frame = elliptic_point_incidence(curve, lines, points, frame)
    fat_report, fat_frame = fat_incidence(S, A, curve, lines, rng, fat_samples, line_modules)
    table_report, intersections = intersection_table_audit(F, lines)
    gamma_report = gamma_invariance_check(F, lines, points, frame)

    return IncidenceReport(
        field_label=F.name,
        metadata=metadata or {},
        point_counts=frame.merge(secant_frame, on=["point", "family"]),
        fat_counts=fat_frame,
        intersections=intersections,
        quadrics=quadrics,
        reports=[hom_report, conic_report, elliptic_report, fat_report, table_report, gamma_report],
    )
