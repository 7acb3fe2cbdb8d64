"""
Graded left modules over a presentation, stored degree by degree.

A module keeps its dimension in each degree up to a cutoff and, for every
degree n < cutoff, the four matrices by which the generators act from
degree n to degree n + 1. Point, line, fat point and homogenized
2-dimensional simple modules are all built in this one shape, so Hom in
degree zero and the kernels of maps out of cyclic modules reduce to row
reduction.
"""

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

import numerical as la
from egeom import ECurve, PluckerLine, ProjPoint
from models import AuditReport
from qalg import (
    PHI_IMAGES,
    NCElement,
    QuadraticPresentation,
    phi_map,
    quaternion_units,
    theta,
)
from scalar import FieldContract
from schemes import (
    LineSchemeResult,
    PointSchemeResult,
    commuting_forms,
    component_membership,
    linearization,
    secant_line,
)
from cpoly import Poly, parse_poly
from utils import (
    SEQUENCE_CUTOFF,
    DegenerateConfiguration,
    DegenerateSpecialization,
    xor_label,
)

# ---------------------------------------------------------------------------
# Graded modules
# ---------------------------------------------------------------------------

@dataclass
class GradedModule:
    F: FieldContract
    dims: list[int]
    actions: list[list[list[list]]] = field(repr=False)
    provenance: str
    label: str = ""
    generators: list[list] | None = field(default=None, repr=False)
    words: list[list[tuple]] | None = field(default=None, repr=False)

    @property
    def cutoff(self) -> int:
        return len(self.dims) - 1

    def act(self, g: int, n: int, v: list) -> list:
        return la.mat_vec(self.F, self.actions[n][g], v)

    def act_linear(self, coeffs, n: int) -> list[list]:
        """Matrix of sum_g coeffs[g] g from degree n to n + 1."""
        F = self.F
        acc = la.zeros(F, self.dims[n + 1], self.dims[n])
        for g, c in enumerate(coeffs):
            if not F.is_zero(c):
                acc = la.mat_add(F, acc, la.mat_scale(F, c, self.actions[n][g]))
        return acc

    def act_word(self, word: tuple, n: int, v: list) -> list:
        """The rightmost letter acts first."""
        for step, g in enumerate(reversed(word)):
            v = self.act(g, n + step, v)
        return v

    def act_element(self, element: NCElement, n: int, v: list) -> list:
        F = self.F
        words = element.algebra.component(element.degree).words
        acc = [F.zero] * self.dims[n + element.degree]
        for c, word in zip(element.coords, words):
            if F.is_zero(c):
                continue
            image = self.act_word(word, n, v)
            acc = [F.add(x, F.mul(c, y)) for x, y in zip(acc, image)]
        return acc

    def relation_defects(self, pres: QuadraticPresentation) -> list[int]:
        """Degrees n where some relation fails to act as zero from M_n to M_{n+2}."""
        F = self.F
        bad = []
        for n in range(self.cutoff - 1):
            for rel in pres.relations:
                acc = la.zeros(F, self.dims[n + 2], self.dims[n])
                for idx, c in enumerate(rel):
                    if F.is_zero(c):
                        continue
                    i, j = divmod(idx, 4)
                    prod = la.mat_mul(F, self.actions[n + 1][i], self.actions[n][j])
                    acc = la.mat_add(F, acc, la.mat_scale(F, c, prod))
                if not all(F.is_zero(x) for row in acc for x in row):
                    bad.append(n)
                    break
        return bad

    def annihilates(self, element: NCElement) -> bool:
        """element . M_n = 0 for every degree the cutoff reaches."""
        F = self.F
        for n in range(self.cutoff - element.degree + 1):
            for e in la.identity(F, self.dims[n]):
                if not all(F.is_zero(x) for x in self.act_element(element, n, e)):
                    return False
        return True

    def summary(self) -> dict:
        return {"provenance": self.provenance, "label": self.label, "dims": list(self.dims)}


def successor(pres: QuadraticPresentation, p) -> ProjPoint:
    """theta(p), the kernel of N(p)."""
    F = pres.F
    N = linearization(pres, p)
    kernel = la.nullspace(F, N, 4)
    if not kernel:
        raise ValueError(f"{ProjPoint.of(F, p).to_str(F)} is not in the point scheme of {pres.label}")
    if len(kernel) > 1:
        raise DegenerateSpecialization(f"theta is not unique at {ProjPoint.of(F, p).to_str(F)}")
    return ProjPoint.of(F, kernel[0])


def _orbit(pres: QuadraticPresentation, p, length: int) -> list[ProjPoint]:
    orbit = [ProjPoint.of(pres.F, p)]
    for _ in range(length - 1):
        orbit.append(successor(pres, orbit[-1]))
    return orbit


def point_module(pres: QuadraticPresentation, p, cutoff: int | None = None) -> GradedModule:
    """g e_n = (theta^n(p))_g e_{n+1}."""
    F = pres.F
    cutoff = pres.cutoff if cutoff is None else cutoff
    orbit = _orbit(pres, p, cutoff + 1)
    actions = [[[[orbit[n][g]]] for g in range(4)] for n in range(cutoff)]
    return GradedModule(F, [1] * (cutoff + 1), actions, "point", label=orbit[0].to_str(F),
                        generators=la.nullspace(F, [list(orbit[0])], 4))


def _projection(F: FieldContract, R: list[list], pivots: list[int], ncols: int) -> tuple[list[list], list[int]]:
    pivot_row = {c: r for r, c in enumerate(pivots)}
    free = [c for c in range(ncols) if c not in pivot_row]
    P = [[F.zero] * ncols for _ in free]
    for k, c in enumerate(free):
        P[k][c] = F.one
    for c, r in pivot_row.items():
        for k, f in enumerate(free):
            P[k][c] = F.neg(R[r][f])
    return P, free


def cyclic_quotient(pres: QuadraticPresentation, W: list[list], cutoff: int | None = None) -> GradedModule:
    """
    A / A W degree by degree: A_n modulo the span of a w for a in A_{n-1},
    w in W. The quotient basis is a set of basis words of A_n and the
    generators act by left multiplication followed by projection.

    Complexity:
        Time:  one row reduction of a (2 dim A_{n-1}) x dim A_n matrix per degree
    """
    F = pres.F
    W = [list(w) for w in W]
    if len(W) >= 4 or (W and la.rank(F, W) != len(W)):
        raise ValueError("W must be a proper subspace of degree one given by independent vectors")
    cutoff = pres.cutoff if cutoff is None else cutoff

    projections, frees, words = [], [], []
    for n in range(cutoff + 1):
        comp = pres.component(n)
        rows = []
        if n > 0:
            for w in W:
                right = la.zeros(F, comp.dim, pres.component(n - 1).dim)
                for g, c in enumerate(w):
                    if not F.is_zero(c):
                        right = la.mat_add(F, right, la.mat_scale(F, c, comp.right_in[g]))
                rows.extend(la.transpose(right))
        R, pivots = la.rref(F, rows) if rows else ([], [])
        P, free = _projection(F, R, pivots, comp.dim)
        projections.append(P)
        frees.append(free)
        words.append([comp.words[c] for c in free])

    actions = []
    for n in range(cutoff):
        nxt = pres.component(n + 1)
        per = []
        for g in range(4):
            lifted = [[row[c] for c in frees[n]] for row in nxt.left_in[g]]
            per.append(la.mat_mul(F, projections[n + 1], lifted) if projections[n + 1] else [])
        actions.append(per)
    provenance = {0: "free", 1: "cyclic", 2: "line", 3: "point"}[len(W)]
    return GradedModule(F, [len(f) for f in frees], actions, provenance, label=f"{pres.label}/{pres.label}W",
                        generators=W, words=words)


def hom0(L: GradedModule, M: GradedModule) -> tuple[int, list[list]]:
    """
    Degree-zero homomorphisms from a cyclic module A/AW: the vectors of M_0
    killed by every w in W, with a basis.
    """
    if L.generators is None:
        raise ValueError("hom0 needs a cyclic source with its defining subspace")
    F = M.F
    rows = []
    for w in L.generators:
        rows.extend(M.act_linear(w, 0))
    basis = la.nullspace(F, rows, M.dims[0])
    return len(basis), basis


def _image_matrices(L: GradedModule, T: GradedModule, m: list) -> list[list[list]]:
    """Degree-n matrix of the map A/AW -> T sending the generator to m."""
    top = min(L.cutoff, T.cutoff)
    return [la.transpose([T.act_word(w, 0, m) for w in L.words[n]]) for n in range(top + 1)]


def _generated_dims(M: GradedModule, start: int, vectors: list[list]) -> list[int]:
    F = M.F
    span = la.rowspace(F, vectors)
    dims = [len(span)]
    for n in range(start, M.cutoff):
        span = la.rowspace(F, [M.act(g, n, v) for v in span for g in range(4)])
        dims.append(len(span))
    return dims

# ---------------------------------------------------------------------------
# Fat points
# ---------------------------------------------------------------------------

def f_map(F: FieldContract, p, coeffs) -> list[list]:
    """f_p(sum l_j y_j) = sum l_j p_j q_j."""
    q = quaternion_units(F)
    acc = la.zeros(F, 2, 2)
    for j, c in enumerate(coeffs):
        acc = la.mat_add(F, acc, la.mat_scale(F, F.mul(c, p[j]), q[j]))
    return acc


@dataclass
class FatPointModule:
    base: ProjPoint
    orbit: list[ProjPoint]
    module: GradedModule

    @property
    def cutoff(self) -> int:
        return self.module.cutoff

    def degree_zero_map(self, coeffs) -> list[list]:
        return f_map(self.module.F, self.base, coeffs)


def fat_point_module(S: QuadraticPresentation, p, cutoff: int | None = None) -> FatPointModule:
    """
    The point module of S at p tensored with k^2, as a module over the
    twist: y_j (e_n (x) v) = (theta^n(p))_j e_{n+1} (x) q_j v.
    """
    F = S.F
    cutoff = S.cutoff if cutoff is None else cutoff
    orbit = _orbit(S, p, cutoff + 1)
    q = quaternion_units(F)
    actions = [[la.mat_scale(F, orbit[n][g], q[g]) for g in range(4)] for n in range(cutoff)]
    module = GradedModule(F, [2] * (cutoff + 1), actions, "fat", label=orbit[0].to_str(F))
    return FatPointModule(orbit[0], orbit, module)

# ---------------------------------------------------------------------------
# Two-dimensional simple modules of S
# ---------------------------------------------------------------------------

# rho_j = rho_0 o phi_j, with rho_0(x_k) = q_k
SIMPLE_IMAGES = {0: [("1", 0), ("1", 1), ("1", 2), ("1", 3)], **PHI_IMAGES}
# squares of x0..x3 and the constant of the degree-two annihilator of V(tau + xi_j)
SIMPLE_ANNIHILATORS = {
    0: (["-1", "1", "1", "1"], "4"),
    1: (["1", "beta*gamma", "-gamma", "beta"], "4*beta*gamma"),
    2: (["1", "gamma", "alpha*gamma", "-alpha"], "4*alpha*gamma"),
    3: (["1", "-beta", "alpha", "alpha*beta"], "4*alpha*beta"),
}


@dataclass
class Simple2Module:
    index: int
    matrices: list[list[list]] = field(repr=False)
    cutoff: int = 3

    def rho(self, F: FieldContract, coeffs) -> list[list]:
        acc = la.zeros(F, 2, 2)
        for c, M in zip(coeffs, self.matrices):
            acc = la.mat_add(F, acc, la.mat_scale(F, c, M))
        return acc

    def homogenized(self, F: FieldContract) -> GradedModule:
        """V (x) k[t] with v (x) t^m in degree m."""
        actions = [list(self.matrices) for _ in range(self.cutoff)]
        return GradedModule(F, [2] * (self.cutoff + 1), actions, "simple-homogenized", label=f"V{self.index}")


def simple2_module(F: FieldContract, j: int, cutoff: int = 3) -> Simple2Module:
    if j not in SIMPLE_IMAGES:
        raise ValueError(f"j must be 0, 1, 2 or 3, got {j!r}")
    q = quaternion_units(F)
    return Simple2Module(j, [la.mat_scale(F, F.value(c), q[k]) for c, k in SIMPLE_IMAGES[j]], cutoff)


def _square_sum(F: FieldContract, V: Simple2Module, coeffs: list[str], constant: str) -> list[list]:
    acc = la.mat_scale(F, F.value(constant), la.identity(F, 2))
    for c, M in zip(coeffs, V.matrices):
        acc = la.mat_add(F, acc, la.mat_scale(F, F.value(c), la.mat_mul(F, M, M)))
    return acc


def _is_zero_matrix(F: FieldContract, M: list[list]) -> bool:
    return all(F.is_zero(x) for row in M for x in row)


def _base_pair(F: FieldContract) -> tuple[ProjPoint, ProjPoint]:
    """The two points of E on the line x0 + i x1 = x2 - i x3 = 0."""
    i, a = F.param("i"), F.param("a")
    ia = F.mul(i, a)
    return (ProjPoint.of(F, [a, ia, i, F.one]), ProjPoint.of(F, [a, ia, F.neg(i), F.neg(F.one)]))


def simple_pairs(curve: ECurve, j: int, rng: np.random.Generator, samples: int = 4) -> list[tuple[ProjPoint, ProjPoint]]:
    """
    Pairs (p, q) whose secant annihilates a vector of V(tau + xi_j): the
    pairs with the sum of the base pair, moved by the transpose of phi_j.
    """
    F = curve.F
    p0, q0 = _base_pair(F)
    z0 = curve.add(p0, q0)
    move = la.identity(F, 4) if j == 0 else la.transpose(phi_map(F, j).matrix)
    pairs = []
    for p in curve.sample_points(samples, rng):
        try:
            q = curve.add(z0, curve.negate(p))
        except DegenerateConfiguration:
            continue
        if q == p:
            continue
        pairs.append((ProjPoint.of(F, la.mat_vec(F, move, list(p))), ProjPoint.of(F, la.mat_vec(F, move, list(q)))))
    return pairs


def simple2_audit(S: QuadraticPresentation, curve: ECurve | None = None, rng: np.random.Generator | None = None,
                  samples: int = 4, cutoff: int = 3) -> AuditReport:
    F = S.F
    report = AuditReport("2-dimensional simple modules", anchor="the four simple modules V(tau + xi)")
    simples = {j: simple2_module(F, j, cutoff) for j in range(4)}
    i = F.param("i")
    for j, V in simples.items():
        defects = V.homogenized(F).relation_defects(S)
        report.add(f"rho{j} satisfies the six relations of S", not defects, witness=defects)
        coeffs, constant = SIMPLE_ANNIHILATORS[j]
        report.add(f"V{j} is annihilated by its degree-two central element",
                   _is_zero_matrix(F, _square_sum(F, V, coeffs, constant)),
                   witness={"squares": coeffs, "constant": constant})

    for j in (1, 2, 3):
        kills = [m for m, V in simples.items() if _is_zero_matrix(F, la.mat_add(F, V.matrices[j], la.mat_scale(F, i, la.identity(F, 2))))]
        report.add(f"x{j} + i annihilates V{j} only", kills == [j], anchor="pairwise non-isomorphic", witness=kills)
    kills = [m for m, V in simples.items() if _is_zero_matrix(F, la.mat_sub(F, V.matrices[0], la.identity(F, 2)))]
    report.add("x0 - 1 annihilates V0 only", kills == [0], witness=kills)

    rho0 = simples[0]
    e = [F.one, F.zero]
    killed = [la.mat_vec(F, rho0.rho(F, w), e) for w in ([F.one, i, F.zero, F.zero], [F.zero, F.zero, F.one, F.neg(i)])]
    report.add("x0 + i x1 and x2 - i x3 kill (1, 0) in V0", all(F.is_zero(x) for v in killed for x in v))

    if curve is None or not F.is_finite or curve.origin is None:
        return report
    rng = rng if rng is not None else np.random.default_rng(0)
    p0, q0 = _base_pair(F)
    report.add("the base pair lies on E", curve.on_curve(p0) and curve.on_curve(q0))
    z0 = curve.add(p0, q0)
    sign = "+tau" if z0 == curve.tau else "-tau" if z0 == curve.negate(curve.tau) else "neither"
    report.add("the base pair sums to tau or -tau", sign != "neither", witness={"sign": sign})

    for j, V in simples.items():
        Vt = V.homogenized(F)
        dims, onto = [], True
        for p, q in simple_pairs(curve, j, rng, samples):
            L = cyclic_quotient(S, la.nullspace(F, [list(p), list(q)], 4), cutoff)
            dim, basis = hom0(L, Vt)
            dims.append(dim)
            if dim == 1:
                ranks = [la.rank(F, M) for M in _image_matrices(L, Vt, basis[0])[1:]]
                onto &= all(r == 2 for r in ranks)
        report.add(f"Hom(M_pq, V{j}) is one-dimensional for p + q = tau + xi{j}", bool(dims) and set(dims) == {1},
                   anchor="Hom into the homogenized simple", witness=dims)
        report.add(f"maps M_pq -> V{j} are onto in degrees 1..{cutoff}", bool(dims) and onto)
    return report


def simple2_table() -> pd.DataFrame:
    """rho_j(x_k) as multiples of the quaternion units, one row per simple module."""
    rows = []
    for j, images in SIMPLE_IMAGES.items():
        coeffs, constant = SIMPLE_ANNIHILATORS[j]
        row = {"module": f"V{j}"}
        row.update({f"x{k}": f"{c} q{m}" if c != "1" else f"q{m}" for k, (c, m) in enumerate(images)})
        row["annihilator"] = " + ".join(f"({c}) x{k}^2" for k, c in enumerate(coeffs)) + f" + {constant}"
        rows.append(row)
    return pd.DataFrame(rows, columns=["module", "x0", "x1", "x2", "x3", "annihilator"])

# ---------------------------------------------------------------------------
# Point annihilators in the twist
# ---------------------------------------------------------------------------

# (theta index, coefficient of Theta_j, coefficient of Omega) per ordinary family
POINT_ANNIHILATORS = {
    "P0": (1, "4", "(1-beta)*(1+gamma)"),
    "P1": (1, "-(1-beta)*(1+gamma)", "4*beta*gamma"),
    "P2": (2, "-(1-gamma)*(1+alpha)", "4*alpha*gamma"),
    "P3": (3, "-(1-alpha)*(1+beta)", "4*alpha*beta"),
}
# the same combinations with a plus sign on the Theta_j term; these do not annihilate
PLUS_SIGN_ANNIHILATORS = {
    "P1": (1, "(1-beta)*(1+gamma)", "4*beta*gamma"),
    "P2": (2, "(1-gamma)*(1+alpha)", "4*alpha*gamma"),
    "P3": (3, "(1-alpha)*(1+beta)", "4*alpha*beta"),
}


def annihilator_element(A: QuadraticPresentation, spec: tuple[int, str, str]) -> NCElement:
    j, theta_coef, omega_coef = spec
    F = A.F
    return theta(A, j).scale(F.value(theta_coef)) + theta(A).scale(F.value(omega_coef))


def point_annihilator_audit(A: QuadraticPresentation, points: dict[str, list[ProjPoint]],
                            cutoff: int = 4) -> AuditReport:
    """
    Central annihilators of the ordinary point modules; special points are
    killed by three of the four generators.
    """
    F = A.F
    report = AuditReport("point module annihilators", anchor="central annihilators of ordinary points")
    for fam, spec in POINT_ANNIHILATORS.items():
        z = annihilator_element(A, spec)
        modules = [point_module(A, p, cutoff) for p in points[fam]]
        report.add(f"{fam}: Omega/Theta{spec[0]} combination annihilates M_p", all(M.annihilates(z) for M in modules),
                   witness={"theta": spec[1], "omega": spec[2]})
        for M in modules:
            report.add(f"{fam}: M_p has Hilbert function 1,1,...", M.dims == [1] * (cutoff + 1) and not M.relation_defects(A))
        if fam in PLUS_SIGN_ANNIHILATORS:
            variant = annihilator_element(A, PLUS_SIGN_ANNIHILATORS[fam])
            plus_kills = all(M.annihilates(variant) for M in modules)
            report.add(f"{fam}: plus-sign variant does not annihilate", not plus_kills,
                       anchor="sign of the Theta_j term", witness={"plus_sign_annihilates": plus_kills})
    for p in points["Pinf"]:
        M = point_module(A, p, cutoff)
        killed = [g for g in range(4) if F.is_zero(M.actions[0][g][0][0])]
        report.add(f"special point {p.to_str(F)} is killed by three generators", len(killed) == 3, witness=killed)
    return report

# ---------------------------------------------------------------------------
# Worked cyclic quotients
# ---------------------------------------------------------------------------

def quotient_dims_by_products(pres: QuadraticPresentation, W: list[list], cutoff: int) -> list[int]:
    """dim A_n - dim A_{n-1} W computed from products of basis elements, for cross-checking."""
    F = pres.F
    forms = [pres.linear(w) for w in W]
    dims = [1]
    for n in range(1, cutoff + 1):
        prev = pres.component(n - 1).dim
        products = [(NCElement(pres, n - 1, e) * w).coords for e in la.identity(F, prev) for w in forms]
        dims.append(pres.component(n).dim - la.rank(F, products))
    return dims


def cyclic_quotient_audit(A: QuadraticPresentation, S: QuadraticPresentation, curve: ECurve,
                          cutoff: int = 4) -> tuple[AuditReport, list[GradedModule]]:
    F = A.F
    report = AuditReport("cyclic quotients", anchor="A/AW for W of dimension 2 and 3")
    built = []

    ones = [F.one] * 4
    P = cyclic_quotient(A, la.nullspace(F, [ones], 4), cutoff)
    built.append(P)
    report.add("A/AW for W killing (1,1,1,1) has dims 1,1,...", P.dims == [1] * (cutoff + 1), witness=P.dims)

    u, v = commuting_forms(F, F.one)
    L = cyclic_quotient(A, [u, v], cutoff)
    built.append(L)
    report.add("the commuting plane at t = 1 gives dims 1,2,3,...",
               L.dims == [n + 1 for n in range(cutoff + 1)] and not L.relation_defects(A), witness=L.dims)

    W = [[F.one, F.zero, F.zero, F.zero], [F.zero, F.one, F.zero, F.zero]]
    M = cyclic_quotient(A, W, cutoff)
    built.append(M)
    oracle = quotient_dims_by_products(A, W, cutoff)
    report.add("A/A(y0, y1) agrees with products of basis elements", M.dims == oracle,
               witness={"dims": M.dims, "products": oracle})

    fat = fat_point_module(S, curve.tau_prime, cutoff)
    built.append(fat.module)
    dim, _ = hom0(L, fat.module)
    report.add("Hom(commuting line, fat point at tau') is one-dimensional", dim == 1, witness=dim)
    return report, built

# ---------------------------------------------------------------------------
# Fat point audit
# ---------------------------------------------------------------------------

def fat_point_audit(S: QuadraticPresentation, A: QuadraticPresentation, curve: ECurve,
                    rng: np.random.Generator | None = None, samples: int = 3, cutoff: int = 4) -> AuditReport:
    F = curve.F
    report = AuditReport("fat point modules", anchor="M_p (x) k^2 and the map f_p")
    tp = curve.tau_prime
    lam = [Poly.variable(F, 4, k) for k in range(4)]
    q = quaternion_units(F)
    entries = [[Poly(F, 4) for _ in range(2)] for _ in range(2)]
    for j in range(4):
        for r in range(2):
            for c in range(2):
                if not F.is_zero(q[j][r][c]):
                    entries[r][c] = entries[r][c] + lam[j].scale(F.mul(tp[j], q[j][r][c]))
    det = entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0]
    expected = parse_poly("alpha*beta*gamma*l0**2 + alpha*l1**2 + beta*l2**2 + gamma*l3**2", ("l0", "l1", "l2", "l3"), F)
    # tau' is normalized to a leading 1, so compare up to the scale (abc)^-2
    scale = F.inv(F.mul(F.value("a*b*c"), F.value("a*b*c")))
    report.add("det f_tau'(y) is the dual commuting quadric", det == expected.scale(scale),
               anchor="det f(y) = abg l0^2 + a l1^2 + b l2^2 + g l3^2")

    i, b, c = F.param("i"), F.param("b"), F.param("c")
    u = [i, F.mul(b, c), F.zero, F.zero]
    v = [F.zero, F.zero, c, F.mul(i, b)]
    raw_tp = [F.value("a*b*c"), F.param("a"), b, c]
    fu, fv = f_map(F, raw_tp, u), f_map(F, raw_tp, v)
    two_i = F.mul(F.from_int(2), i)
    report.add("f(i y0 + bc y1) has sole entry 2iabc at (1, 1)",
               la.mat_eq(F, fu, [[F.mul(two_i, F.value("a*b*c")), F.zero], [F.zero, F.zero]]))
    report.add("f(c y2 + ib y3) has sole entry 2ibc at (2, 1)",
               la.mat_eq(F, fv, [[F.zero, F.zero], [F.mul(two_i, F.mul(b, c)), F.zero]]))

    if not F.is_finite:
        return report
    flips = []
    for p in curve.curve_points():
        flat = [[x for row in f_map(F, p, e) for x in row] for e in la.identity(F, 4)]
        singular = la.rank(F, flat) < 4
        if singular != any(F.is_zero(x) for x in p):
            flips.append(p.to_str(F))
    report.add("f_p is singular exactly on E cap {x0 x1 x2 x3 = 0}", not flips, anchor="f_p invertible iff p not in E[4]",
               witness=flips)

    rng = rng if rng is not None else np.random.default_rng(0)
    central = [theta(A)] + [theta(A, j) for j in (1, 2, 3)]
    for p in [tp] + curve.sample_points(samples, rng):
        fat = fat_point_module(S, p, cutoff)
        report.add(f"fat point at {p.to_str(F)} is a module with dims 2,2,...",
                   not fat.module.relation_defects(A) and fat.module.dims == [2] * (cutoff + 1))
        report.add(f"fat point at {p.to_str(F)} is killed by the center in degree two",
                   all(fat.module.annihilates(z) for z in central))
    return report

# ---------------------------------------------------------------------------
# Kernels of maps from line modules
# ---------------------------------------------------------------------------

def predicted_kernel_family(source_tag: str | None, target_family: str | None) -> str | None:
    """
    Family of the kernel line of a map from a line in source_tag onto a point
    of target_family: E/<xi> onto P_j gives C_k with xi_k = xi + xi_j, C_i
    onto P_j gives E/<xi_i + xi_j>, elliptic onto special stays elliptic.
    """
    if source_tag is None or target_family is None or "&" in source_tag:
        return None
    kind, i = source_tag[0], int(source_tag[1])
    if target_family == "Pinf":
        return source_tag if kind == "E" else None
    k = xor_label(i, int(target_family[1]))
    if kind == "E":
        return f"C{k}"
    return f"E{k}" if k else None


@dataclass
class KernelLineResult:
    source: str | None
    target: str
    image_dims: list[int]
    kernel_dims: list[int]
    expected_kernel: list[int]
    kernel_tag: str | None = None
    predicted: str | None = None
    annihilator_dim: int | None = None
    generated_dims: list[int] | None = None
    central_ok: bool | None = None
    kernel_line: PluckerLine | None = None
    case: str | None = None
    base_predictions: dict[str, bool] | None = None
    base_rule: str | None = None

    @property
    def family_matched(self) -> bool:
        if self.predicted is None:
            return True
        return self.kernel_tag is not None and self.predicted in self.kernel_tag.split("&")

    @property
    def base_matched(self) -> bool | None:
        """None when no base point is gated for this case."""
        if self.base_rule is None or self.base_predictions is None:
            return None
        return any(hit for name, hit in self.base_predictions.items() if name.startswith(self.base_rule + " "))

    @property
    def matched(self) -> bool:
        if self.kernel_dims != self.expected_kernel:
            return False
        if self.target == "fat":
            return self.central_ok is not False
        return (self.annihilator_dim == 2 and self.generated_dims == self.kernel_dims[1:]
                and self.family_matched and self.base_matched is not False)

    def to_dict(self) -> dict:
        return {
            "source": self.source, "target": self.target, "case": self.case, "image_dims": self.image_dims,
            "kernel_dims": self.kernel_dims, "kernel_tag": self.kernel_tag, "predicted": self.predicted,
            "kernel_line": self.kernel_line.to_str() if self.kernel_line is not None else None,
            "base_predictions": self.base_predictions, "base_matched": self.base_matched,
            "matched": self.matched,
        }


def central_action_ranks(L: GradedModule, z: NCElement) -> list[int]:
    F = L.F
    return [
        la.rank(F, [L.act_element(z, n, e) for e in la.identity(F, L.dims[n])])
        for n in range(L.cutoff - z.degree + 1)
    ]


def kernel_line_audit(L: GradedModule, T: GradedModule, source_tag: str | None = None,
                      target_family: str | None = None, central: list[NCElement] | None = None) -> KernelLineResult:
    """
    Kernel of the map from a line module onto a point or fat point module.

    For a point target the kernel starts in degree one with a single vector
    k; its degree-one annihilator W' defines the kernel line, tagged by the
    component it lies on. For a fat target the kernel is compared with a
    central element times L.
    """
    F = L.F
    dim, basis = hom0(L, T)
    if dim == 0:
        raise ValueError("the line does not map to the target")
    images = _image_matrices(L, T, basis[0])
    image_dims = [la.rank(F, M) if M else 0 for M in images]
    kernel_dims = [L.dims[n] - r for n, r in enumerate(image_dims)]
    top = len(images)

    if T.provenance == "fat":
        result = KernelLineResult(source_tag, "fat", image_dims, kernel_dims,
                                  [max(n - 1, 0) for n in range(top)])
        if central:
            result.central_ok = _kernel_is_central_multiple(L, images, central)
        return result

    result = KernelLineResult(source_tag, target_family or "point", image_dims, kernel_dims, list(range(top)))
    k_basis = la.nullspace(F, images[1], L.dims[1])
    if len(k_basis) != 1:
        raise DegenerateSpecialization(f"kernel in degree one has dimension {len(k_basis)}")
    k = k_basis[0]
    cols = [L.act(g, 1, k) for g in range(4)]
    W_prime = la.nullspace(F, la.transpose(cols), 4)
    result.annihilator_dim = len(W_prime)
    result.generated_dims = _generated_dims(L, 1, [k])[: top - 1]
    if len(W_prime) == 2:
        result.kernel_line = PluckerLine.from_forms(F, W_prime[0], W_prime[1])
        result.kernel_tag = component_membership(result.kernel_line)
    result.predicted = predicted_kernel_family(source_tag, target_family)
    return result


def _kernel_is_central_multiple(L: GradedModule, images: list[list[list]], central: list[NCElement]) -> bool:
    """Some central element acts injectively on L and z L_{n-2} is the kernel in degree n."""
    F = L.F
    for z in central:
        if central_action_ranks(L, z) != L.dims[: L.cutoff - 1]:
            continue
        for n in range(2, len(images)):
            kernel = la.nullspace(F, images[n], L.dims[n])
            zL = la.rowspace(F, [L.act_element(z, n - 2, e) for e in la.identity(F, L.dims[n - 2])])
            if len(zL) != len(kernel) or la.rank(F, kernel + zL) != len(kernel):
                return False
        return True
    return False

# ---------------------------------------------------------------------------
# Base points of kernel lines
# ---------------------------------------------------------------------------

TAU_SIGNS = ("+tau", "-tau")
SPECIAL_ON_AXIS = "elliptic onto special point, j in {0, i}"
SPECIAL_OFF_AXIS = "elliptic onto special point, j not in {0, i}"


def _signed_tau(curve: ECurve, sign: str) -> ProjPoint:
    return curve.tau if sign == "+tau" else curve.negate(curve.tau)


def _other_xi(i: int) -> int:
    return next(k for k in (1, 2, 3) if k != i)


def special_index(F: FieldContract, p) -> int:
    """The coordinate that is nonzero at a special point e_j."""
    support = [n for n in range(4) if not F.is_zero(p[n])]
    if len(support) != 1:
        raise ValueError(f"{p} is not a special point")
    return support[0]


def special_kernel_rule(i: int, j: int) -> str:
    """Which shift of the source secant a line of E_i through e_j has as kernel."""
    return "x+xi'-tau" if j in (0, i) else "x-tau"


def special_kernel_candidates(curve: ECurve, x, i: int) -> dict[str, PluckerLine]:
    """
    Secants of E_i at x - tau and x + xi' - tau, for the secant of E_i at x
    and either sign of tau. Both xi' not in {0, xi_i} give the same line.
    """
    k = _other_xi(i)
    out = {}
    for sign in TAU_SIGNS:
        base = curve.add(x, curve.negate(_signed_tau(curve, sign)))
        out[f"x-tau ({sign})"] = secant_line(curve, base, i)
        out[f"x+xi'-tau ({sign})"] = secant_line(curve, curve.gamma_translate(k, base), i)
    return out


def conic_kernel_candidates(curve: ECurve, i: int, m: int) -> dict[str, PluckerLine]:
    """
    Secants of E_m at h - 2tau and h + xi' - 2tau with 2h = tau + xi_i. A
    sign of tau without a rational half contributes nothing.
    """
    k = _other_xi(m)
    out = {}
    for sign in TAU_SIGNS:
        t = _signed_tau(curve, sign)
        halves = curve.halves(curve.gamma_translate(i, t) if i else t)
        if not halves:
            continue
        base = curve.add(halves[0], curve.negate(curve.add(t, t)))
        out[f"h-2tau ({sign})"] = secant_line(curve, base, m)
        out[f"h+xi'-2tau ({sign})"] = secant_line(curve, curve.gamma_translate(k, base), m)
    return out


def attach_base_predictions(result: KernelLineResult, curve: ECurve, source_line: PluckerLine, target_point,
                            secant_of: dict[tuple[int, PluckerLine], ProjPoint],
                            conic_memo: dict | None = None) -> None:
    """
    Compare the kernel line with the group-law positions for its case. Lines
    onto special points are gated on the shift rule; conic lines only record
    the comparison.
    """
    if result.kernel_line is None or result.source is None or result.predicted is None:
        return
    kind, i = result.source[0], int(result.source[1])
    if result.target == "Pinf" and kind == "E":
        result.base_rule = special_kernel_rule(i, special_index(curve.F, target_point))
        x = secant_of.get((i, source_line))
        candidates = special_kernel_candidates(curve, x, i) if x is not None else {}
    elif kind == "C":
        key = (i, int(result.predicted[1]))
        memo = conic_memo if conic_memo is not None else {}
        if key not in memo:
            memo[key] = conic_kernel_candidates(curve, *key)
        candidates = memo[key]
    else:
        return
    result.base_predictions = {name: L == result.kernel_line for name, L in candidates.items()}


def _case_of(source_tag: str, target: str, target_point, F: FieldContract) -> str:
    if target == "fat":
        return "line onto fat point"
    if target == "Pinf":
        if not source_tag.startswith("E"):
            return "conic onto special point"
        i, j = int(source_tag[1]), special_index(F, target_point)
        return SPECIAL_ON_AXIS if j in (0, i) else SPECIAL_OFF_AXIS
    return "elliptic onto ordinary point" if source_tag.startswith("E") else "conic onto ordinary point"


def sequence_audit(A: QuadraticPresentation, S: QuadraticPresentation, lines: LineSchemeResult,
                   points: PointSchemeResult, curve: ECurve, rng: np.random.Generator,
                   cutoff: int = SEQUENCE_CUTOFF, fat_samples: int = 3, fat_lines: int = 3,
                   min_pairs: int = 12) -> tuple[AuditReport, list[KernelLineResult]]:
    """
    Kernels of line -> point and line -> fat point surjections. Every
    ordinary and special point is paired with each line through it; the
    four distinguished fat points and a few generic ones are paired with
    the first lines they lie on. Kernel lines are compared with the
    group-law positions of their base points under both signs of tau.
    """
    F = A.F
    report = AuditReport("exact sequences", anchor="kernels of surjections from line modules")
    results: list[KernelLineResult] = []
    cases: dict[str, int] = {}
    central = [theta(A)] + [theta(A, j) for j in (1, 2, 3)]
    cache: dict[PluckerLine, GradedModule] = {}
    secant_of = {(j, secant_line(curve, x, j)): x for j in (1, 2, 3) for x in curve.curve_points()}
    conic_memo: dict[tuple[int, int], dict[str, PluckerLine]] = {}

    def line_module(record) -> GradedModule:
        if record.line not in cache:
            cache[record.line] = cyclic_quotient(A, record.line.forms(), cutoff)
        return cache[record.line]

    for fam, pts in points.families.items():
        for p in pts:
            T = point_module(A, p, cutoff)
            for record in lines.lines:
                if len(record.tags) != 1 or not record.line.contains(p):
                    continue
                tag = record.tags[0]
                result = kernel_line_audit(line_module(record), T, tag, fam)
                result.case = _case_of(tag, fam, p, F)
                attach_base_predictions(result, curve, record.line, p, secant_of, conic_memo)
                results.append(result)
                cases[result.case] = cases.get(result.case, 0) + 1
                report.add(f"{tag} line onto the {fam} point {p.to_str(F)}: kernel is a shifted line", result.matched,
                           anchor="0 -> L(-1) -> M -> P -> 0", witness=result.to_dict())

    fat_points = [curve.tau_prime] + [curve.eps_translate(j, curve.tau_prime) for j in (1, 2, 3)]
    fat_points += [p for p in curve.sample_points(fat_samples, rng) if not any(F.is_zero(x) for x in p)]
    for p in fat_points:
        fat = fat_point_module(S, p, cutoff)
        hits = 0
        for record in lines.lines:
            if hits >= fat_lines:
                break
            if hom0(cyclic_quotient(A, record.line.forms(), 1), fat.module)[0] == 0:
                continue
            hits += 1
            tag = "&".join(record.tags) or None
            result = kernel_line_audit(line_module(record), fat.module, tag, central=central)
            result.case = "line onto fat point"
            results.append(result)
            cases[result.case] = cases.get(result.case, 0) + 1
            report.add(f"{tag} line onto the fat point {p.to_str(F)}: kernel is L(-2)", result.matched,
                       anchor="kernel isomorphic to L(-2)", witness=result.to_dict())

    for case in ("elliptic onto ordinary point", "conic onto ordinary point", SPECIAL_OFF_AXIS, SPECIAL_ON_AXIS,
                 "line onto fat point"):
        report.add(f"at least {min_pairs} pairs: {case}", cases.get(case, 0) >= min_pairs, witness=cases.get(case, 0))
    return report, results
