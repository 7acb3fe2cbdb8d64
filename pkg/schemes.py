"""
Point and line schemes of a presentation on four generators.

A point p lies in the point scheme when the 6x4 linearization N(p) has rank
at most 3; its kernel is the successor theta(p). A two-dimensional W in
degree one gives a line module when A_1 W spans 7 of the 10 dimensions of
A_2. Lines are handled in Plücker coordinates: z for the 2x2 minors of the
two forms spanning W, X for the minors of two points on the line.
"""

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, combinations_with_replacement

import numpy as np
import pandas as pd

import numerical as la
from algorithms import projective_chunks, projective_points
from cpoly import Poly, minors, parse_poly, proj_dim_degree
from egeom import (
    ECurve,
    PluckerLine,
    ProjPoint,
    QuadricForm,
    coordinate_bridge,
    dual_line,
    secant_transport,
)
from models import AuditReport
from qalg import QuadraticPresentation, gamma_map, psi_map
from scalar import FieldContract
from utils import LINE_FAMILIES, PLUCKER_NAMES, PLUCKER_PAIRS, POINT_FAMILIES

# ---------------------------------------------------------------------------
# Reference data
# ---------------------------------------------------------------------------

# each family lists p, gamma1(p), gamma2(p), gamma3(p)
POINT_FAMILY_TABLE = {
    "Pinf": [("1", "0", "0", "0"), ("0", "1", "0", "0"), ("0", "0", "1", "0"), ("0", "0", "0", "1")],
    "P0": [("1", "1", "1", "1"), ("1", "1", "-1", "-1"), ("1", "-1", "1", "-1"), ("1", "-1", "-1", "1")],
    "P1": [("b*c", "-i", "-i*b", "-c"), ("b*c", "-i", "i*b", "c"),
           ("b*c", "i", "-i*b", "c"), ("b*c", "i", "i*b", "-c")],
    "P2": [("a*c", "-a", "-i", "-i*c"), ("a*c", "-a", "i", "i*c"),
           ("a*c", "a", "-i", "i*c"), ("a*c", "a", "i", "-i*c")],
    "P3": [("a*b", "-i*a", "-b", "-i"), ("a*b", "-i*a", "b", "i"),
           ("a*b", "i*a", "-b", "i"), ("a*b", "i*a", "b", "-i")],
}

PLUCKER_RELATION = "z01*z23 - z02*z13 + z03*z12"

# (linear equations, quadratic equations) in z
COMPONENT_EQUATIONS = {
    "C0": (["z23 + alpha*z01", "z13 - beta*z02", "z12 + gamma*z03"], [PLUCKER_RELATION]),
    "C1": (["z23 - alpha*z01", "z13 + z02", "z12 + z03"], [PLUCKER_RELATION]),
    "C2": (["z23 + z01", "z13 + beta*z02", "z12 - z03"], [PLUCKER_RELATION]),
    "C3": (["z23 - z01", "z13 - z02", "z12 - gamma*z03"], [PLUCKER_RELATION]),
    "E1": (["z23", "z01"], [
        "z13*z02 - z12*z03",
        "(1+gamma)*z13**2 - (1-beta)*z12**2 - gamma*(1-beta)*z03**2 - beta*(1+gamma)*z02**2",
    ]),
    "E2": (["z13", "z02"], [
        "z23*z01 + z12*z03",
        "(1-gamma)*z23**2 - (1+alpha)*z12**2 + gamma*(1+alpha)*z03**2 + alpha*(1-gamma)*z01**2",
    ]),
    "E3": (["z12", "z03"], [
        "z23*z01 - z13*z02",
        "(1+beta)*z23**2 - (1-alpha)*z13**2 - beta*(1-alpha)*z02**2 - alpha*(1+beta)*z01**2",
    ]),
}

# the plane conic each C_i becomes once its linear equations are substituted
CONIC_QUADRICS = {
    "C0": "alpha*z01**2 + beta*z02**2 + gamma*z03**2",
    "C1": "alpha*z01**2 + z02**2 - z03**2",
    "C2": "-z01**2 + beta*z02**2 + z03**2",
    "C3": "z01**2 - z02**2 + gamma*z03**2",
}

# C_i meets E_j in the two points s = +1, -1 (z order z01 .. z23)
INTERSECTION_TABLE = {
    ("C0", "E1"): ("0", "c", "s*i*b", "-s*i*b*gamma", "beta*c", "0"),
    ("C0", "E2"): ("c", "0", "s*i*a", "-s*i*a*gamma", "0", "-alpha*c"),
    ("C0", "E3"): ("b", "s*i*a", "0", "0", "s*i*a*beta", "-alpha*b"),
    ("C1", "E1"): ("0", "1", "s", "-s", "-1", "0"),
    ("C1", "E2"): ("1", "0", "s*a", "-s*a", "0", "alpha"),
    ("C1", "E3"): ("1", "s*i*a", "0", "0", "-s*i*a", "alpha"),
    ("C2", "E1"): ("0", "1", "s*i*b", "s*i*b", "-beta", "0"),
    ("C2", "E2"): ("1", "0", "s", "s", "0", "-1"),
    ("C2", "E3"): ("b", "s", "0", "0", "-s*beta", "-b"),
    ("C3", "E1"): ("0", "c", "s", "s*gamma", "c", "0"),
    ("C3", "E2"): ("c", "0", "s*i", "s*i*gamma", "0", "c"),
    ("C3", "E3"): ("1", "s", "0", "0", "s", "1"),
}

# new z_k = coefficient * old z_source under psi_j acting on forms
PSI_PLUCKER = {
    1: [("i*b*c", 0), ("i*c", 4), ("b", 3), ("b*gamma", 2), ("-i*beta*c", 1), ("-i*b*c", 5)],
    2: [("-c", 5), ("i*a*c", 1), ("i*a", 3), ("-i*a*gamma", 2), ("-i*a*c", 4), ("-alpha*c", 0)],
    3: [("-i*b", 5), ("a", 4), ("i*a*b", 2), ("-i*a*b", 3), ("a*beta", 1), ("i*alpha*b", 0)],
}

# Q_j contains the lines of C_j and every point of P outside Pinf and P_j
RULED_QUADRICS = {
    0: ["1", "beta*gamma", "gamma*alpha", "alpha*beta"],
    1: ["1", "-1", "-alpha", "alpha"],
    2: ["1", "beta", "-1", "-beta"],
    3: ["1", "-gamma", "gamma", "-1"],
}

PSI_PARAMETRIZATION = (
    "i/a*(s**2 + t**2)", "2/b*s*t", "1/c*(s**2 - t**2)",
    "-c*(s**2 - t**2)", "2*b*s*t", "-i*a*(s**2 + t**2)",
)


def _signed(text: str, sign: int) -> str:
    return text.replace("s", "(1)" if sign > 0 else "(-1)")


def point_family_points(F: FieldContract) -> dict[str, list[ProjPoint]]:
    return {fam: [ProjPoint.of(F, [F.value(x) for x in row]) for row in rows] for fam, rows in POINT_FAMILY_TABLE.items()}


def intersection_points(F: FieldContract) -> dict[tuple[str, str], list[tuple]]:
    """Both intersection points of each C_i, E_j pair as normalized z vectors."""
    return {
        pair: [la.normalize(F, [F.value(_signed(x, sign)) for x in row]) for sign in (1, -1)]
        for pair, row in INTERSECTION_TABLE.items()
    }


def line_from_z(F: FieldContract, z) -> PluckerLine:
    """The line whose form-minors are z."""
    return dual_line(PluckerLine(F, z))


def z_coords(L: PluckerLine) -> tuple:
    return dual_line(L).coords


def form_minors(F: FieldContract, u, v) -> list:
    """Unnormalized z_ij = u_i v_j - u_j v_i."""
    return [F.sub(F.mul(u[i], v[j]), F.mul(u[j], v[i])) for i, j in PLUCKER_PAIRS]

# ---------------------------------------------------------------------------
# Component specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComponentSpec:
    tag: str
    linear: tuple[str, ...]
    quadratic: tuple[str, ...]

    def polys(self, F: FieldContract) -> tuple[list[Poly], list[Poly]]:
        return _component_polys(self.tag, F)

    def ideal(self, F: FieldContract) -> list[Poly]:
        lin, quad = self.polys(F)
        return lin + quad

    def contains(self, F: FieldContract, z) -> bool:
        return all(F.is_zero(g.evaluate(z)) for g in self.ideal(F))


COMPONENTS = {
    tag: ComponentSpec(tag, tuple(lin), tuple(quad)) for tag, (lin, quad) in COMPONENT_EQUATIONS.items()
}


@lru_cache(maxsize=None)
def _component_polys(tag: str, F: FieldContract) -> tuple[list[Poly], list[Poly]]:
    lin, quad = COMPONENT_EQUATIONS[tag]
    return ([parse_poly(t, PLUCKER_NAMES, F) for t in lin], [parse_poly(t, PLUCKER_NAMES, F) for t in quad])


def plucker_relation(F: FieldContract) -> Poly:
    return parse_poly(PLUCKER_RELATION, PLUCKER_NAMES, F)


def component_tags(L: PluckerLine) -> tuple[str, ...]:
    z = z_coords(L)
    return tuple(tag for tag in LINE_FAMILIES if COMPONENTS[tag].contains(L.F, z))


def component_membership(L: PluckerLine) -> str | None:
    """
    The component containing L, or None. A line on two components (only
    the C_i/E_j intersection points) is reported as 'Ci&Ej'.
    """
    tags = component_tags(L)
    return "&".join(tags) if tags else None


def _poly_values(F, poly: Poly, Z: np.ndarray) -> np.ndarray:
    """Evaluate a polynomial on every row of an encoded array."""
    acc = np.zeros(Z.shape[0], dtype=np.int64)
    for mono, c in poly.terms.items():
        term = np.full(Z.shape[0], c, dtype=np.int64)
        for k, e in enumerate(mono):
            for _ in range(e):
                term = F.mul_np[term, Z[:, k]]
        acc = F.add_np[acc, term]
    return acc


def _normalize_rows(F, rows: np.ndarray) -> np.ndarray:
    lead = np.argmax(rows != 0, axis=1)
    scale = F.inv_np[rows[np.arange(rows.shape[0]), lead]]
    return F.mul_np[scale[:, np.newaxis], rows]


def _linear_span(F: FieldContract, tag: str) -> list[list]:
    lin, _ = COMPONENTS[tag].polys(F)
    rows = [[g.terms.get(tuple(1 if k == v else 0 for k in range(6)), F.zero) for v in range(6)] for g in lin]
    return la.nullspace(F, rows, 6)


def component_points(F: FieldContract, tag: str) -> list[PluckerLine]:
    """
    F_q points of one component, straight from its equations: parametrize the
    linear span, then keep the points where the quadrics vanish.

    Complexity:
        Time:  O(q^2) points for a conic, O(q^3) for an elliptic component
    """
    if not F.is_finite:
        raise ValueError("component_points needs a finite field")
    _, quad = COMPONENTS[tag].polys(F)
    basis = np.array(_linear_span(F, tag), dtype=np.int64)
    found = []
    for block in projective_chunks(F, basis.shape[0] - 1):
        Z = la.encoded_matmul(F, block, basis)
        keep = np.ones(Z.shape[0], dtype=bool)
        for g in quad:
            keep &= _poly_values(F, g, Z) == 0
        if keep.any():
            found.append(_normalize_rows(F, Z[keep]))
    if not found:
        return []
    return [line_from_z(F, [int(x) for x in row]) for row in np.vstack(found)]

# ---------------------------------------------------------------------------
# Point scheme
# ---------------------------------------------------------------------------

def relation_tensor(pres: QuadraticPresentation) -> np.ndarray:
    """C[k, i, j] = coefficient of g_i g_j in relation k (finite fields)."""
    return np.array(pres.relations, dtype=np.int64).reshape(6, 4, 4)


def linearization(pres: QuadraticPresentation, p) -> list[list]:
    """N(p)[k][i] = sum_j c_k^{ij} p_j, so N(p) q = 0 iff every relation vanishes on (q, p)."""
    F = pres.F
    p = list(p)
    return [
        [F.sum(F.mul(rel[4 * i + j], p[j]) for j in range(4) if not F.is_zero(rel[4 * i + j])) for i in range(4)]
        for rel in pres.relations
    ]


@dataclass
class PointSchemeResult:
    algebra: str
    field: str
    points: list[ProjPoint]
    theta: dict[ProjPoint, ProjPoint]
    degenerate: list[ProjPoint] = field(default_factory=list)
    families: dict[str, list[ProjPoint]] = field(default_factory=dict)
    unmatched: list[ProjPoint] = field(default_factory=list)

    def to_frame(self, F: FieldContract) -> pd.DataFrame:
        family_of = {p: fam for fam, pts in self.families.items() for p in pts}
        return pd.DataFrame([
            {"point": p.to_str(F), "family": family_of.get(p, ""),
             "theta": self.theta[p].to_str(F) if p in self.theta else "degenerate"}
            for p in self.points
        ], columns=["point", "family", "theta"])


def point_scheme(pres: QuadraticPresentation) -> PointSchemeResult:
    """
    Sweep P^3(F_q) for the points where rank N(p) <= 3 and attach theta(p).
    For A the points are sorted into the five tabulated families.

    Complexity:
        Time:  O(q^3) batched 4x4 minors, then one kernel per surviving point
    """
    F = pres.F
    if not F.is_finite:
        raise ValueError("point_scheme needs a finite field")
    flat = relation_tensor(pres).reshape(24, 4)
    found = []
    for block in projective_chunks(F, 3):
        N = la.encoded_matmul(F, block, flat.T).reshape(-1, 6, 4)
        mask = la.batch_rank_below(F, N, 4)
        found.extend(ProjPoint(tuple(int(x) for x in row)) for row in block[mask])

    theta, degenerate = {}, []
    for p in found:
        kernel = la.nullspace(F, linearization(pres, p), 4)
        if len(kernel) == 1:
            theta[p] = ProjPoint.of(F, kernel[0])
        else:
            degenerate.append(p)
    result = PointSchemeResult(pres.label, F.name, sorted(found, key=lambda p: p.coords), theta, degenerate)
    if pres.label == "A":
        reference = point_family_points(F)
        for fam in POINT_FAMILIES:
            result.families[fam] = [p for p in reference[fam] if p in theta or p in degenerate]
        known = {p for pts in reference.values() for p in pts}
        result.unmatched = [p for p in result.points if p not in known]
    return result


def _gamma_image(F: FieldContract, j: int, p) -> ProjPoint:
    return ProjPoint.of(F, la.mat_vec(F, gamma_map(F, j).matrix, list(p)))


def point_scheme_certificate(pres: QuadraticPresentation, engine: str = "auto") -> tuple[int, int]:
    """(dim, degree) of the ideal of 4x4 minors of N(p) with p a vector of variables."""
    F = pres.F
    matrix = [
        [Poly.linear(F, [rel[4 * i + j] for j in range(4)]) for i in range(4)]
        for rel in pres.relations
    ]
    return proj_dim_degree(minors(matrix, 4), engine=engine)


def point_scheme_audit(pres: QuadraticPresentation, result: PointSchemeResult, curve: ECurve | None = None,
                       engine: str = "auto") -> AuditReport:
    F = pres.F
    report = AuditReport(f"point scheme of {pres.label}", anchor="the points in P and the map theta")
    report.add("theta(p) is unique for every point", not result.degenerate,
               witness=[p.to_str(F) for p in result.degenerate])
    if pres.label == "A":
        report.add("exactly 20 points", len(result.points) == 20, witness=len(result.points))
        report.add("five families of four", all(len(result.families[f]) == 4 for f in POINT_FAMILIES),
                   witness={f: len(result.families[f]) for f in POINT_FAMILIES})
        report.add("no point outside the tabulated families", not result.unmatched,
                   witness=[p.to_str(F) for p in result.unmatched])
        fixed = result.families["Pinf"] + result.families["P0"]
        report.add("theta fixes Pinf and P0", all(result.theta.get(p) == p for p in fixed),
                   anchor="theta(p) = p on Pinf and P0")
        for j in (1, 2, 3):
            pts = result.families[f"P{j}"]
            report.add(f"theta = gamma{j} on P{j}",
                       all(result.theta.get(p) == _gamma_image(F, j, p) for p in pts),
                       anchor="theta(p) = gamma_i(p) on P_i")
        dim_deg = point_scheme_certificate(pres, engine)
        report.add("point scheme ideal has (dim, degree) = (0, 20)", dim_deg == (0, 20),
                   anchor="no points over any extension", witness=dim_deg)
        return report

    curve = curve or ECurve(F)
    expected = set(curve.curve_points()) | {ProjPoint.of(F, row) for row in la.identity(F, 4)}
    found = set(result.points)
    report.add("points are E(F_q) and e0..e3", found == expected,
               anchor="p in E or one of the four vertices",
               witness={"found": len(found), "expected": len(expected)})
    on_e = [p for p in result.points if curve.on_curve(p)]
    report.add("theta maps E to E", all(curve.on_curve(result.theta[p]) for p in on_e if p in result.theta))
    vertices = [ProjPoint.of(F, row) for row in la.identity(F, 4)]
    report.add("theta fixes e0..e3", all(result.theta.get(v) == v for v in vertices))
    if curve.origin is not None and on_e:
        offsets = {curve.add(result.theta[p], curve.negate(p)) for p in on_e if p in result.theta}
        tau, minus_tau = curve.tau, curve.negate(curve.tau)
        sign = "+tau" if offsets == {tau} else "-tau" if offsets == {minus_tau} else "neither"
        report.add("theta is translation by tau or -tau", sign != "neither",
                   anchor="theta(p) = p + tau on E", witness={"sign": sign, "offsets": len(offsets)})
    dim_deg = point_scheme_certificate(pres, engine)
    report.add("point scheme ideal has (dim, degree) = (1, 4)", dim_deg == (1, 4), witness=dim_deg)
    return report


def predecessor_matrix(pres: QuadraticPresentation, q) -> list[list]:
    """M(q)[k][j] = sum_i c_k^{ij} q_i, so M(q) p = 0 iff every relation vanishes on (q, p)."""
    F = pres.F
    q = list(q)
    return [
        [F.sum(F.mul(rel[4 * i + j], q[i]) for i in range(4) if not F.is_zero(rel[4 * i + j])) for j in range(4)]
        for rel in pres.relations
    ]


def _single_kernel(F: FieldContract, M: list[list]) -> ProjPoint | None:
    kernel = la.nullspace(F, M, 4)
    return ProjPoint.of(F, kernel[0]) if len(kernel) == 1 else None


def _sign_witness_points(curve: ECurve, rng: np.random.Generator | None, samples: int) -> list[ProjPoint]:
    if curve.F.is_finite and rng is not None:
        return curve.sample_points(samples, rng)
    tp = curve.tau_prime
    orbit = [curve.eps_translate(j, p) for j in (1, 2, 3) for p in (tp, curve.negate(tp))]
    return orbit + [curve.gamma_translate(j, curve.eps_translate(1, tp)) for j in (2, 3)]


def tau_sign_certificate(S: QuadraticPresentation, curve: ECurve, rng: np.random.Generator | None = None,
                         samples: int = 6) -> AuditReport:
    """
    Decide the sign of tau without an origin. Coplanar quadruples on E sum
    to zero and 2 tau' = -tau, so the plane spanned by the tangent at tau'
    and r meets E again at tau - r. That point is theta(-r) when theta is
    translation by +tau and theta^{-1}(-r) when it is translation by -tau.
    """
    F = S.F
    report = AuditReport("sign of tau", anchor="theta(p) = p + tau on E")
    tp = curve.tau_prime
    tangent = curve.tangent_direction(tp)
    votes = {"+tau": 0, "-tau": 0}
    used = 0
    for r in _sign_witness_points(curve, rng, samples):
        if r == tp or la.rank(F, [list(tp), tangent, list(r)]) < 3:
            continue
        minus_r = curve.negate(r)
        candidates = {"+tau": _single_kernel(F, linearization(S, minus_r)),
                      "-tau": _single_kernel(F, predecessor_matrix(S, minus_r))}
        if any(x is None or x == r or x == tp for x in candidates.values()):
            continue
        used += 1
        for sign, x in candidates.items():
            votes[sign] += F.is_zero(la.det(F, [list(tp), tangent, list(r), list(x)]))
    report.add("enough witness points", used >= 3, witness=used)
    consistent = [sign for sign, n in votes.items() if n == used]
    report.add("exactly one sign makes every quadruple coplanar", len(consistent) == 1,
               witness={"votes": votes, "used": used, "sign": consistent[0] if len(consistent) == 1 else None})
    return report

# ---------------------------------------------------------------------------
# Line scheme
# ---------------------------------------------------------------------------

def multiplication_matrix(pres: QuadraticPresentation, u, v) -> list[list]:
    """Rows g*u and g*v for the four generators g, in A_2 coordinates."""
    return ([pres.left_multiply_word(list(u), 1, (g,)) for g in range(4)]
            + [pres.left_multiply_word(list(v), 1, (g,)) for g in range(4)])


def is_line_of_scheme(pres: QuadraticPresentation, u, v) -> tuple[bool, int]:
    """
    W = span(u, v) gives a line module iff A_1 W has dimension 7 in A_2.
    Returns the verdict and the rank; ranks <= 6 are for the caller to flag.
    """
    F = pres.F
    if la.rank(F, [list(u), list(v)]) != 2:
        raise ValueError("u and v must be linearly independent")
    r = la.rank(F, multiplication_matrix(pres, u, v))
    return r == 7, r


@dataclass
class LineRecord:
    line: PluckerLine
    rank: int
    tags: tuple[str, ...]

    @property
    def z(self) -> tuple:
        return z_coords(self.line)


@dataclass
class LineSchemeResult:
    field: str
    lines: list[LineRecord]
    flagged: list = field(default_factory=list)
    unmatched: list[PluckerLine] = field(default_factory=list)
    missing: list[PluckerLine] = field(default_factory=list)
    oracle_counts: dict[str, int] = field(default_factory=dict)
    quartics: list[Poly] | None = None

    @property
    def counts(self) -> dict[str, int]:
        counter = Counter(t for rec in self.lines for t in rec.tags)
        return {tag: counter.get(tag, 0) for tag in LINE_FAMILIES}

    @property
    def overlaps(self) -> list[LineRecord]:
        return [rec for rec in self.lines if len(rec.tags) > 1]

    def lines_of(self, tag: str) -> list[PluckerLine]:
        return [rec.line for rec in self.lines if tag in rec.tags]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [{"component": tag, "lines": self.counts[tag], "oracle": self.oracle_counts.get(tag, 0)}
             for tag in LINE_FAMILIES],
            columns=["component", "lines", "oracle"],
        )


def expected_line_count(q: int, curve_points: int) -> int:
    """Three elliptic families of |E(F_q)| lines, four conics, minus the 24 shared lines."""
    return 3 * curve_points + 4 * (q + 1) - 24


def _relation_candidates(pres: QuadraticPresentation) -> np.ndarray:
    """
    Every relation r whose matrix C_r kills some x of the plane x3 = 0: for
    each such x the relations with C_r x = 0 form a subspace T_x, and all of
    P(T_x) is listed. Each line of P^3 meets the plane, so every line in the
    scheme is the kernel of one of these C_r.
    """
    F = pres.F
    C = relation_tensor(pres)
    xs = np.array(list(projective_points(F, 2)), dtype=np.int64)
    X = np.column_stack([xs, np.zeros(len(xs), dtype=np.int64)])
    images = la.encoded_matmul(F, C.reshape(24, 4), X.T)
    chunks = []
    for n in range(len(xs)):
        Mx = images[:, n].reshape(6, 4).T
        basis = la.nullspace(F, Mx.tolist(), 6)
        if not basis:
            continue
        B = np.array(basis, dtype=np.int64)
        for block in projective_chunks(F, len(basis) - 1):
            chunks.append(la.encoded_matmul(F, block, B))
    return np.vstack(chunks) if chunks else np.zeros((0, 6), dtype=np.int64)


def line_scheme_enumerate(pres: QuadraticPresentation) -> LineSchemeResult:
    """
    All F_q lines of the line scheme. A line module A/AW needs a relation r
    in A_1 (x) W; for rank(C_r) = 2 the rows of C_r span W. Candidates come
    from _relation_candidates, survivors are confirmed by the rank-7 test
    and tagged by their component equations, then compared with the
    per-component point counts.

    Complexity:
        Time:  O(q^3) batched 3x3 minors plus one rank test per line
    """
    F = pres.F
    if not F.is_finite:
        raise ValueError("line_scheme_enumerate needs a finite field")
    R = _relation_candidates(pres)
    mats = la.encoded_matmul(F, R, relation_tensor(pres).reshape(6, 16)).reshape(-1, 4, 4)
    mask = la.batch_rank_below(F, mats, 3)

    seen_relations = set()
    lines: dict[PluckerLine, LineRecord] = {}
    flagged = []
    for r, M in zip(R[mask], mats[mask]):
        key = la.normalize(F, [int(x) for x in r])
        if key in seen_relations:
            continue
        seen_relations.add(key)
        W = la.rowspace(F, M.tolist())
        if len(W) < 2:
            flagged.append({"relation": [F.to_str(x) for x in key], "rank": len(W)})
            continue
        L = PluckerLine.from_forms(F, W[0], W[1])
        if L in lines:
            continue
        ok, rank = is_line_of_scheme(pres, W[0], W[1])
        if not ok:
            flagged.append({"line": L.to_str(), "rank": rank})
        lines[L] = LineRecord(L, rank, component_tags(L))

    oracle = {tag: set(component_points(F, tag)) for tag in LINE_FAMILIES}
    union = set().union(*oracle.values())
    hits = set(lines)
    return LineSchemeResult(
        field=F.name,
        lines=sorted(lines.values(), key=lambda rec: rec.line.coords),
        flagged=flagged,
        unmatched=sorted((L for L in hits if not lines[L].tags), key=lambda L: L.coords),
        missing=sorted(union - hits, key=lambda L: L.coords),
        oracle_counts={tag: len(pts) for tag, pts in oracle.items()},
    )


def line_scheme_audit(result: LineSchemeResult, curve: ECurve) -> AuditReport:
    F = curve.F
    report = AuditReport("line scheme", anchor="four plane conics and three quartic elliptic curves")
    report.add("every candidate passes the rank-7 test", not result.flagged, witness=result.flagged[:5])
    report.add("every line lies on a component", not result.unmatched,
               witness=[L.to_str() for L in result.unmatched[:5]])
    report.add("every component point is a line of the scheme", not result.missing,
               witness=[L.to_str() for L in result.missing[:5]])
    report.add("line counts match the component equations",
               result.counts == {tag: result.oracle_counts.get(tag, 0) for tag in LINE_FAMILIES},
               witness={"lines": result.counts, "oracle": result.oracle_counts})
    report.add("conics are pairwise disjoint",
               all(sum(t.startswith("C") for t in rec.tags) <= 1 for rec in result.lines),
               anchor="these conics are pairwise disjoint")
    report.add("elliptic components are pairwise disjoint",
               all(sum(t.startswith("E") for t in rec.tags) <= 1 for rec in result.lines),
               anchor="three disjoint quartic elliptic curves")
    pairs = Counter(rec.tags for rec in result.overlaps)
    expected_pairs = {(c, e): 2 for c in LINE_FAMILIES[:4] for e in LINE_FAMILIES[4:]}
    report.add("each C_i meets each E_j in two lines", dict(pairs) == expected_pairs,
               anchor="E_j meets C_i at 2 points", witness={"&".join(k): v for k, v in pairs.items()})
    n_points = len(curve.curve_points())
    expected = expected_line_count(F.q, n_points)
    report.add("|L(F_q)| = 3|E(F_q)| + 4(q+1) - 24", len(result.lines) == expected,
               witness={"lines": len(result.lines), "expected": expected, "curve_points": n_points})
    for tag in LINE_FAMILIES[4:]:
        report.add(f"{tag} has |E(F_q)| points", result.counts[tag] == n_points, witness=result.counts[tag])
    for tag in LINE_FAMILIES[:4]:
        report.add(f"{tag} has q + 1 points", result.counts[tag] == F.q + 1, witness=result.counts[tag])
    if result.quartics is not None:
        report.add("the quartics vanish on every line",
                   all(F.is_zero(g.evaluate(rec.z)) for rec in result.lines for g in result.quartics))
    return report


def component_certificates(F: FieldContract, rng: np.random.Generator, engine: str = "auto") -> AuditReport:
    """Projective (dim, degree) of each component ideal, and the plane conic of each C_i."""
    report = AuditReport("component degrees", anchor="conics of degree 2, quartic curves of degree 4")
    for tag in LINE_FAMILIES:
        dim_deg = proj_dim_degree(COMPONENTS[tag].ideal(F), engine=engine)
        expected = (1, 2) if tag.startswith("C") else (1, 4)
        report.add(f"{tag} has (dim, degree) = {expected}", dim_deg == expected, witness=dim_deg)
        if tag in CONIC_QUADRICS:
            report.add(f"{tag} is the conic {CONIC_QUADRICS[tag]}", _restricts_to_conic(F, tag, rng))
    return report


def _restricts_to_conic(F: FieldContract, tag: str, rng: np.random.Generator, samples: int = 6) -> bool:
    """On the plane of C_i the Plücker relation is a multiple of the tabulated conic."""
    basis = _linear_span(F, tag)
    conic = parse_poly(CONIC_QUADRICS[tag], PLUCKER_NAMES, F)
    relation = plucker_relation(F)
    values = [[], []]
    for _ in range(samples):
        w = [F.random(rng) for _ in basis]
        z = [F.sum(F.mul(c, b[k]) for c, b in zip(w, basis)) for k in range(6)]
        values[0].append(relation.evaluate(z))
        values[1].append(conic.evaluate(z))
    return la.rank(F, values) == 1

# ---------------------------------------------------------------------------
# Elliptic components from secant lines
# ---------------------------------------------------------------------------

def secant_line(curve: ECurve, p, j: int) -> PluckerLine:
    """The secant through p and p + xi_j, moved to the coordinates of A."""
    F = curve.F
    q = curve.gamma_translate(j, p)
    return PluckerLine.from_points(F, secant_transport(F, p, j), secant_transport(F, q, j))


def bridged_secant(curve: ECurve, p, j: int) -> PluckerLine:
    """The same secant moved by coordinate_bridge alone."""
    F = curve.F
    q = curve.gamma_translate(j, p)
    return PluckerLine.from_points(F, coordinate_bridge(F, p), coordinate_bridge(F, q))


def elliptic_component_audit(curve: ECurve, A: QuadraticPresentation, engine: str = "auto") -> AuditReport:
    F = curve.F
    report = AuditReport("elliptic components", anchor="secant lines p, p + xi_j")
    points = curve.curve_points()
    for j in (1, 2, 3):
        tag = f"E{j}"
        lines, not_lines, wrong_tag, fibres = set(), 0, 0, 0
        for p in points:
            L = secant_line(curve, p, j)
            f, g = L.forms()
            ok, _ = is_line_of_scheme(A, f, g)
            not_lines += not ok
            wrong_tag += tag not in component_tags(L)
            fibres += L == secant_line(curve, curve.gamma_translate(j, p), j)
            lines.add(L)
        n = len(points)
        report.add(f"secants for xi{j} are lines of the scheme", not_lines == 0, witness=not_lines)
        report.add(f"secants for xi{j} lie on {tag}", wrong_tag == 0, witness=wrong_tag)
        report.add(f"p and p + xi{j} give the same secant", fibres == n)
        report.add(f"|E(F_q)|/2 distinct secants for xi{j}", 2 * len(lines) == n,
                   witness={"lines": len(lines), "curve_points": n})
        if curve.origin is not None:
            xi = curve.xi(j)
            report.add(f"gamma{j} is translation by xi{j}",
                       all(curve.add(p, xi) == curve.gamma_translate(j, p) for p in points[:10]))
        dim_deg = proj_dim_degree(COMPONENTS[tag].ideal(F), engine=engine)
        report.add(f"{tag} ideal has (dim, degree) = (1, 4)", dim_deg == (1, 4), witness=dim_deg)
    missed = sum(not is_line_of_scheme(A, *bridged_secant(curve, p, 3).forms())[0] for p in points)
    report.add("coordinate_bridge alone misses xi3 secants", missed > 0,
               anchor="(0,3 | 1,2) pairing", witness={"missed": missed, "curve_points": len(points)})
    return report

# ---------------------------------------------------------------------------
# Plücker quartics
# ---------------------------------------------------------------------------

QUARTIC_MONOMIALS = [
    tuple(combo.count(k) for k in range(6)) for combo in combinations_with_replacement(range(6), 4)
]


@dataclass
class QuarticFit:
    polys: list[Poly]
    samples: int
    held_out: int
    solution_rank: int

    @property
    def kernel_dim(self) -> int:
        return len(QUARTIC_MONOMIALS) - self.solution_rank


def _minor_samples(pres: QuadraticPresentation, rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    """45 maximal minors of the 8x10 matrix and the 126 z-monomials, for n random pairs of forms."""
    F = pres.F
    left = np.array([pres.component(2).left_in[g] for g in range(4)], dtype=np.int64).reshape(40, 4)
    U = np.array([[F.random(rng) for _ in range(4)] for _ in range(n)], dtype=np.int64)
    V = np.array([[F.random(rng) for _ in range(4)] for _ in range(n)], dtype=np.int64)
    rows_u = la.encoded_matmul(F, left, U.T).T.reshape(n, 4, 10)
    rows_v = la.encoded_matmul(F, left, V.T).T.reshape(n, 4, 10)
    stack = np.concatenate([rows_u, rows_v], axis=1)
    minors = np.column_stack([
        la.batch_det(F, stack[:, :, [c for c in range(10) if c not in drop]])
        for drop in combinations(range(10), 2)
    ])
    Z = np.column_stack([F.sub_np[F.mul_np[U[:, i], V[:, j]], F.mul_np[U[:, j], V[:, i]]] for i, j in PLUCKER_PAIRS])
    monos = np.ones((n, len(QUARTIC_MONOMIALS)), dtype=np.int64)
    for col, mono in enumerate(QUARTIC_MONOMIALS):
        for k, e in enumerate(mono):
            for _ in range(e):
                monos[:, col] = F.mul_np[monos[:, col], Z[:, k]]
    return monos, minors


def quartics_in_plucker(pres: QuadraticPresentation, rng: np.random.Generator,
                        samples: int = 200, held_out: int = 50) -> QuarticFit:
    """
    Rewrite each 8x8 minor of the multiplication matrix as a quartic in z by
    interpolation over random pairs of forms, then confirm on held-out pairs.
    Solutions are unique modulo the Plücker ideal; the RREF particular
    solution (free coefficients zero) is returned.
    """
    F = pres.F
    if not F.is_finite:
        raise ValueError("quartics_in_plucker needs a finite field")
    if samples < len(QUARTIC_MONOMIALS):
        raise ValueError(f"samples must be at least {len(QUARTIC_MONOMIALS)}, got {samples}")
    monos, minors = _minor_samples(pres, rng, samples)
    width = len(QUARTIC_MONOMIALS)
    R, pivots = la.rref_table(F, np.hstack([monos, minors]))
    if any(c >= width for c in pivots):
        raise ValueError("a minor is not a polynomial in the Plücker coordinates")
    coeffs = np.zeros((width, minors.shape[1]), dtype=np.int64)
    for row, c in enumerate(pivots):
        coeffs[c] = R[row, width:]

    test_monos, test_minors = _minor_samples(pres, rng, held_out)
    if not np.array_equal(la.encoded_matmul(F, test_monos, coeffs), test_minors):
        raise ValueError("interpolated quartics disagree with the minors on held-out samples")
    polys = [
        Poly(F, 6, {mono: int(coeffs[m, k]) for m, mono in enumerate(QUARTIC_MONOMIALS)})
        for k in range(minors.shape[1])
    ]
    return QuarticFit(polys, samples, held_out, len(pivots))


def psi_parametrization(F: FieldContract) -> list[Poly]:
    """psi(s, t) as six binary quadratics."""
    return [parse_poly(text, ("s", "t"), F) for text in PSI_PARAMETRIZATION]


def quartic_audit(fit: QuarticFit, result: LineSchemeResult | None = None, engine: str = "auto") -> AuditReport:
    F = fit.polys[0].F
    report = AuditReport("Plücker quartics", anchor="line scheme cut out by 45 quartics")
    report.add("45 quartics", len(fit.polys) == 45)
    report.add("solutions are unique modulo the Plücker quadrics", fit.kernel_dim == 21,
               witness={"kernel_dim": fit.kernel_dim, "samples": fit.samples, "held_out": fit.held_out})
    images = psi_parametrization(F)
    report.add("the quartics vanish on psi(s, t)", all(not g.compose(images) for g in fit.polys),
               anchor="psi: P^1 -> C0")
    if result is not None:
        report.add("the quartics vanish on every enumerated line",
                   all(F.is_zero(g.evaluate(rec.z)) for rec in result.lines for g in fit.polys))
    independent = _independent_polys(fit.polys)
    dim_deg = proj_dim_degree(independent + [plucker_relation(F)], engine=engine)
    report.add("quartics and the Plücker relation give (dim, degree) = (1, 20)", dim_deg == (1, 20),
               anchor="curve of degree 20", witness={"dim_degree": dim_deg, "independent": len(independent)})
    return report


def _independent_polys(polys: list[Poly]) -> list[Poly]:
    """Echelon basis of the span of homogeneous polynomials of one degree."""
    F = polys[0].F
    monos = sorted({m for g in polys for m in g.terms}, reverse=True)
    rows = [[g.terms.get(m, F.zero) for m in monos] for g in polys]
    return [Poly(F, polys[0].nvars, dict(zip(monos, row))) for row in la.rowspace(F, rows)]

# ---------------------------------------------------------------------------
# Commuting conic and its transports
# ---------------------------------------------------------------------------

def commuting_forms(F: FieldContract, t) -> tuple[list, list]:
    """(y0 + ibc y1) - ta(ic y2 - b y3) and t(y0 - ibc y1) - a(ic y2 + b y3)."""
    ibc = F.value("i*b*c")
    iac, ab = F.value("i*a*c"), F.value("a*b")
    u = [F.one, ibc, F.neg(F.mul(iac, t)), F.mul(ab, t)]
    v = [t, F.neg(F.mul(ibc, t)), F.neg(iac), F.neg(ab)]
    return u, v


def _commutator_matrix(pres: QuadraticPresentation) -> list[list]:
    """Row (i, j) holds [g_i, g_j] in degree 2, in PLUCKER_PAIRS order."""
    gens = [pres.generator(g) for g in range(4)]
    return [pres.commutator(gens[i], gens[j]).coords for i, j in PLUCKER_PAIRS]


def _sample_parameters(F: FieldContract) -> list:
    return [F.from_int(t) for t in (0, 1, 2, -1, 3)]


def commuting_conic_audit(S: QuadraticPresentation, A: QuadraticPresentation) -> AuditReport:
    F = A.F
    report = AuditReport("commuting conic", anchor="commuting subspaces of A_1")
    cond = [
        [F.param("alpha"), F.zero, F.zero, F.zero, F.zero, F.one],
        [F.zero, F.param("beta"), F.zero, F.zero, F.neg(F.one), F.zero],
        [F.zero, F.zero, F.param("gamma"), F.one, F.zero, F.zero],
    ]
    kernel = la.nullspace(F, la.transpose(_commutator_matrix(A)), 6)
    report.add("[u, v] = 0 iff a z01 + z23 = b z02 - z13 = g z03 + z12 = 0",
               len(kernel) == 3 and all(all(F.is_zero(x) for x in la.mat_vec(F, cond, k)) for k in kernel),
               anchor="a M01 + M23 = b M02 + M31 = g M03 + M12 = 0", witness={"kernel_dim": len(kernel)})

    u = [F.param("i"), F.value("b*c"), F.zero, F.zero]
    v = [F.zero, F.zero, F.param("c"), F.value("i*b")]
    report.add("[i y0 + bc y1, c y2 + ib y3] = 0", A.commutator(A.linear(u), A.linear(v)).is_zero())

    quadric = QuadricForm.diagonal(F, [F.value(x) for x in RULED_QUADRICS[0]])
    dual = [F.value("alpha*beta*gamma"), F.param("alpha"), F.param("beta"), F.param("gamma")]
    on_quadric = in_c0 = commute = on_dual = subspace = True
    abc, ia, ib, c = F.value("a*b*c"), F.value("i*a"), F.value("i*b"), F.param("c")
    for t in _sample_parameters(F):
        f, g = commuting_forms(F, t)
        L = PluckerLine.from_forms(F, f, g)
        p, q = L.span()
        on_quadric &= quadric.contains_line(p, q)
        in_c0 &= COMPONENTS["C0"].contains(F, z_coords(L))
        commute &= A.commutator(A.linear(f), A.linear(g)).is_zero()
        on_dual &= all(F.is_zero(F.sum(F.mul(d, F.mul(w[k], w[k])) for k, d in enumerate(dual))) for w in (f, g))
        on_dual &= F.is_zero(F.sum(F.mul(d, F.mul(f[k], g[k])) for k, d in enumerate(dual)))
        eq1 = [abc, ia, F.neg(F.mul(t, ib)), F.mul(t, c)]
        eq2 = [F.mul(t, abc), F.neg(F.mul(t, ia)), F.neg(ib), F.neg(c)]
        subspace &= all(F.is_zero(la.dot(F, e, w)) for e in (eq1, eq2) for w in (f, g))
    report.add("commuting lines lie on y0^2 + bg y1^2 + ga y2^2 + ab y3^2", on_quadric,
               anchor="ruled quadric of commuting lines")
    report.add("commuting lines lie on C0", in_c0)
    report.add("the two forms commute in A", commute)
    report.add("commuting subspaces lie on abg w0^2 + a w1^2 + b w2^2 + g w3^2", on_dual,
               anchor="dual quadric of commuting subspaces")
    report.add("commuting subspaces solve (abc w0 + ia w1) - t(ib w2 - c w3) = 0", subspace)

    images = psi_parametrization(F)
    rt, roundtrip = True, True
    for s, t in ((1, 2), (2, 1), (3, -1), (1, 1)):
        point = [F.from_int(s), F.from_int(t)]
        z = [g.evaluate(point) for g in images]
        rt &= COMPONENTS["C0"].contains(F, z)
        back = [F.sub(F.mul(c, z[2]), F.mul(ia, z[0])), F.mul(F.param("b"), z[1])]
        roundtrip &= la.rank(F, [back, point]) == 1
    report.add("psi(s, t) lies on C0", rt, anchor="psi: P^1 -> C0")
    report.add("psi^-1(z) = (c z03 - ia z01, b z02) inverts psi", roundtrip)

    rank = la.rank(F, _commutator_matrix(S))
    report.add("in S the commutators [x_i, x_j] are independent", rank == 6,
               anchor="S_1 has no commuting subspace", witness=rank)
    return report


def psi_plucker(F: FieldContract, j: int, z) -> list:
    """The tabulated action of psi_j on z coordinates."""
    return [F.mul(F.value(c), z[src]) for c, src in PSI_PLUCKER[j]]


def transport_forms(F: FieldContract, j: int, f) -> list:
    return la.mat_vec(F, psi_map(F, j).matrix, list(f))


def conic_transport_audit(F: FieldContract, rng: np.random.Generator, samples: int = 5) -> AuditReport:
    report = AuditReport("conic transport", anchor="psi_j carries C0 to C_j")
    for j in (1, 2, 3):
        table_ok = True
        for _ in range(samples):
            f = [F.random(rng) for _ in range(4)]
            g = [F.random(rng) for _ in range(4)]
            moved = form_minors(F, transport_forms(F, j, f), transport_forms(F, j, g))
            table_ok &= all(F.eq(x, y) for x, y in zip(moved, psi_plucker(F, j, form_minors(F, f, g))))
        report.add(f"psi{j} Plücker table", table_ok)
        lands = True
        for t in _sample_parameters(F):
            f, g = commuting_forms(F, t)
            z = form_minors(F, transport_forms(F, j, f), transport_forms(F, j, g))
            lands &= COMPONENTS[f"C{j}"].contains(F, z)
        report.add(f"psi{j}(C0) lies on C{j}", lands)

    f = [F.random(rng) for _ in range(4)]
    g = [F.random(rng) for _ in range(4)]
    z = form_minors(F, f, g)
    moved = form_minors(F, transport_forms(F, 3, f), transport_forms(F, 3, g))
    lhs = F.sub(moved[5], moved[0])
    rhs = F.mul(F.value("i*b"), F.add(F.mul(F.param("alpha"), z[0]), z[5]))
    report.add("(z23 - z01)(psi3 L) = ib(a z01 + z23)(L)", F.eq(lhs, rhs))
    moved = form_minors(F, transport_forms(F, 1, f), transport_forms(F, 1, g))
    report.add("psi1 sends z02 to ic z13", F.eq(moved[1], F.mul(F.value("i*c"), z[4])))
    report.add("the identity fixes the C0 equations",
               all(COMPONENTS["C0"].contains(F, form_minors(F, *commuting_forms(F, t))) for t in _sample_parameters(F)))
    return report


def ruled_quadric_audit(F: FieldContract, result: LineSchemeResult | None = None) -> AuditReport:
    report = AuditReport("ruled quadrics", anchor="the quadrics Q_j")
    points = point_family_points(F)
    for j in range(4):
        Q = QuadricForm.diagonal(F, [F.value(x) for x in RULED_QUADRICS[j]], f"Q{j}")
        others = [p for fam, pts in points.items() if fam not in ("Pinf", f"P{j}") for p in pts]
        report.add(f"P outside Pinf and P{j} lies on Q{j}", all(F.is_zero(Q.value(p)) for p in others))
        lines = []
        for t in _sample_parameters(F):
            f, g = commuting_forms(F, t)
            if j:
                f, g = transport_forms(F, j, f), transport_forms(F, j, g)
            lines.append(PluckerLine.from_forms(F, f, g))
        if result is not None:
            lines.extend(result.lines_of(f"C{j}"))
        report.add(f"lines of C{j} lie on Q{j}", all(Q.contains_line(*L.span()) for L in lines),
                   witness=len(lines))
    return report
