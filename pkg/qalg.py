"""
Graded quadratic algebras on four generators.

A presentation stores six relations as length-16 coefficient vectors (index
4*i + j for the word g_i g_j). Degree-n components are built recursively as
A_n = (A_{n-1} (x) V) / (A_{n-2} . R), row reduced; the free columns give a
basis of words and the pivot rows give the projection. Each component keeps
the matrices of right and left multiplication by the generators.
"""

import threading
from dataclasses import dataclass, field
from itertools import product

import numpy as np

import numerical as la
from models import AuditReport
from scalar import FieldContract
from utils import (
    FINITE_CUTOFF,
    GENERATORS_A,
    GENERATORS_S,
    SYMBOLIC_CUTOFF,
    CutoffExceeded,
    hilbert_dim,
)

# ---------------------------------------------------------------------------
# Relation templates
# ---------------------------------------------------------------------------

# (sign, parameter index or None, word); parameter k means alpha_k
_S_TEMPLATE = (
    [(1, None, (0, 1)), (-1, None, (1, 0)), (-1, 1, (2, 3)), (-1, 1, (3, 2))],
    [(1, None, (0, 1)), (1, None, (1, 0)), (-1, None, (2, 3)), (1, None, (3, 2))],
)
_A_TEMPLATE = (
    [(1, None, (0, 1)), (-1, None, (1, 0)), (-1, 1, (2, 3)), (1, 1, (3, 2))],
    [(1, None, (0, 1)), (1, None, (1, 0)), (-1, None, (2, 3)), (-1, None, (3, 2))],
)
_PARAM_NAMES = {1: "alpha", 2: "beta", 3: "gamma"}


def _shift(k: int, times: int) -> int:
    """The index shift 1 -> 2 -> 3 -> 1 fixing 0."""
    return k if k == 0 else (k - 1 + times) % 3 + 1


def _relations_from_template(F: FieldContract, template) -> list[list]:
    rows = []
    for times in range(3):
        for terms in template:
            row = [F.zero] * 16
            for sign, param, (i, j) in terms:
                coef = F.from_int(sign)
                if param is not None:
                    coef = F.mul(coef, F.param(_PARAM_NAMES[_shift(param, times)]))
                idx = 4 * _shift(i, times) + _shift(j, times)
                row[idx] = F.add(row[idx], coef)
            rows.append(row)
    return rows

# ---------------------------------------------------------------------------
# Components and elements
# ---------------------------------------------------------------------------

@dataclass
class GradedComponent:
    degree: int
    words: list[tuple]
    right_in: list[list[list]] = field(repr=False)
    left_in: list[list[list]] = field(repr=False)
    parents: list[tuple[int, int]] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.words)


@dataclass
class NCElement:
    algebra: "QuadraticPresentation"
    degree: int
    coords: list

    def __add__(self, other: "NCElement") -> "NCElement":
        self._same_degree(other)
        F = self.algebra.F
        return NCElement(self.algebra, self.degree, [F.add(a, b) for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "NCElement") -> "NCElement":
        self._same_degree(other)
        F = self.algebra.F
        return NCElement(self.algebra, self.degree, [F.sub(a, b) for a, b in zip(self.coords, other.coords)])

    def __mul__(self, other: "NCElement") -> "NCElement":
        return self.algebra.mul(self, other)

    def scale(self, c) -> "NCElement":
        F = self.algebra.F
        return NCElement(self.algebra, self.degree, [F.mul(c, a) for a in self.coords])

    def is_zero(self) -> bool:
        return all(self.algebra.F.is_zero(a) for a in self.coords)

    def __eq__(self, other):
        return isinstance(other, NCElement) and self.degree == other.degree and (self - other).is_zero()

    def _same_degree(self, other: "NCElement"):
        if self.degree != other.degree:
            raise ValueError(f"degrees differ: {self.degree} and {other.degree}")


class QuadraticPresentation:
    """Four generators, six quadratic relations, components on demand."""

    def __init__(self, F: FieldContract, names: tuple[str, ...], relations: list[list], label: str,
                 cutoff: int | None = None):
        if len(names) != 4 or len(relations) != 6 or any(len(r) != 16 for r in relations):
            raise ValueError("a presentation needs 4 generators and 6 relations of length 16")
        self.F = F
        self.names = tuple(names)
        self.relations = relations
        self.label = label
        self.cutoff = cutoff if cutoff is not None else (FINITE_CUTOFF if F.is_finite else SYMBOLIC_CUTOFF)
        self._components: dict[int, GradedComponent] = {}
        self._lock = threading.RLock()

    # -- components -----------------------------------------------------------

    def relation_rank(self) -> int:
        return la.rank(self.F, self.relations)

    def component(self, n: int) -> GradedComponent:
        if n < 0:
            raise ValueError(f"degree must be non-negative, got {n}")
        if n > self.cutoff:
            raise CutoffExceeded(f"degree {n} exceeds the cutoff {self.cutoff}")
        with self._lock:
            if n not in self._components:
                self._components[n] = self._build(n)
            return self._components[n]

    def _build(self, n: int) -> GradedComponent:
        F = self.F
        if n == 0:
            return GradedComponent(0, [()], [], [], [])
        prev = self.component(n - 1)
        width = prev.dim * 4

        rows = []
        if n >= 2:
            before = self.component(n - 2)
            for b in range(before.dim):
                for rel in self.relations:
                    row = [F.zero] * width
                    for i, h in product(range(4), range(4)):
                        c = rel[4 * i + h]
                        if F.is_zero(c):
                            continue
                        column = prev.right_in[i]
                        for k in range(prev.dim):
                            entry = column[k][b]
                            if not F.is_zero(entry):
                                row[4 * k + h] = F.add(row[4 * k + h], F.mul(c, entry))
                    rows.append(row)
        R, pivots = la.rref(F, rows) if rows else ([], [])
        pivot_row = {c: r for r, c in enumerate(pivots)}
        free = [c for c in range(width) if c not in pivot_row]
        index = {c: k for k, c in enumerate(free)}
        dim = len(free)

        # projection of each tensor coordinate (b, h) to A_n coordinates
        proj = []
        for col in range(width):
            if col in index:
                v = [F.zero] * dim
                v[index[col]] = F.one
            else:
                row = R[pivot_row[col]]
                v = [F.neg(row[f]) for f in free]
            proj.append(v)

        right_in = []
        for g in range(4):
            cols = [proj[4 * b + g] for b in range(prev.dim)]
            right_in.append(la.transpose(cols) if cols else [[] for _ in range(dim)])
        parents = [divmod(c, 4) for c in free]
        words = [prev.words[b] + (h,) for b, h in parents]

        if n == 1:
            left_in = [[row[:] for row in right_in[g]] for g in range(4)]
        else:
            left_in = []
            for g in range(4):
                cols = []
                for b, h in prev.parents:
                    before_col = [row[b] for row in prev.left_in[g]]
                    cols.append(la.mat_vec(F, right_in[h], before_col))
                left_in.append(la.transpose(cols))
        return GradedComponent(n, words, right_in, left_in, parents)

    def dims(self, up_to: int | None = None) -> list[int]:
        top = self.cutoff if up_to is None else up_to
        return [self.component(n).dim for n in range(top + 1)]

    # -- elements -------------------------------------------------------------

    def zero(self, n: int) -> NCElement:
        return NCElement(self, n, [self.F.zero] * self.component(n).dim)

    def one(self) -> NCElement:
        return NCElement(self, 0, [self.F.one])

    def generator(self, g: int) -> NCElement:
        return self.element({(g,): self.F.one})

    def linear(self, coeffs: list) -> NCElement:
        return NCElement(self, 1, list(coeffs))

    def right_multiply_word(self, coords: list, degree: int, word: tuple) -> list:
        F = self.F
        v = coords
        for step, g in enumerate(word):
            v = la.mat_vec(F, self.component(degree + step + 1).right_in[g], v)
        return v

    def left_multiply_word(self, coords: list, degree: int, word: tuple) -> list:
        F = self.F
        v = coords
        for step, g in enumerate(reversed(word)):
            v = la.mat_vec(F, self.component(degree + step + 1).left_in[g], v)
        return v

    def element(self, words: dict[tuple, object]) -> NCElement:
        """Project a combination of words (all of one degree) into its component."""
        if not words:
            raise ValueError("need at least one word")
        degrees = {len(w) for w in words}
        if len(degrees) != 1:
            raise ValueError(f"words must share one degree, got {sorted(degrees)}")
        n = degrees.pop()
        F = self.F
        acc = [F.zero] * self.component(n).dim
        for word, c in words.items():
            if F.is_zero(c):
                continue
            v = self.right_multiply_word([F.one], 0, word)
            acc = [F.add(x, F.mul(c, y)) for x, y in zip(acc, v)]
        return NCElement(self, n, acc)

    def mul(self, u: NCElement, v: NCElement) -> NCElement:
        F = self.F
        n = u.degree + v.degree
        acc = [F.zero] * self.component(n).dim
        basis = self.component(v.degree).words
        for coeff, word in zip(v.coords, basis):
            if F.is_zero(coeff):
                continue
            w = self.right_multiply_word(u.coords, u.degree, word)
            acc = [F.add(x, F.mul(coeff, y)) for x, y in zip(acc, w)]
        return NCElement(self, n, acc)

    def commutator(self, u: NCElement, v: NCElement) -> NCElement:
        return self.mul(u, v) - self.mul(v, u)

    def random_element(self, n: int, rng: np.random.Generator) -> NCElement:
        return NCElement(self, n, [self.F.random(rng) for _ in range(self.component(n).dim)])

    def __repr__(self):
        return f"QuadraticPresentation('{self.label}', field={self.F.name}, cutoff={self.cutoff})"


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------

def presentation_S(F: FieldContract, cutoff: int | None = None) -> QuadraticPresentation:
    """x0xi - xix0 = alpha_i(xjxk + xkxj), x0xi + xix0 = xjxk - xkxj."""
    return QuadraticPresentation(F, GENERATORS_S, _relations_from_template(F, _S_TEMPLATE), "S", cutoff)


def presentation_A(F: FieldContract, cutoff: int | None = None) -> QuadraticPresentation:
    """y0yi - yiy0 = alpha_i(yjyk - ykyj), y0yi + yiy0 = yjyk + ykyj."""
    return QuadraticPresentation(F, GENERATORS_A, _relations_from_template(F, _A_TEMPLATE), "A", cutoff)


def presentation_text(pres: QuadraticPresentation) -> str:
    """One relation per line as a signed sum of words."""
    F = pres.F
    minus_one = F.neg(F.one)
    lines = []
    for rel in pres.relations:
        parts = []
        for idx, c in enumerate(rel):
            if F.is_zero(c):
                continue
            word = f"{pres.names[idx // 4]}*{pres.names[idx % 4]}"
            if F.eq(c, F.one):
                parts.append(f"+ {word}")
            elif F.eq(c, minus_one):
                parts.append(f"- {word}")
            else:
                parts.append(f"+ ({F.to_str(c)})*{word}")
        text = " ".join(parts)
        lines.append(text[2:] if text.startswith("+ ") else text)
    return "\n".join(lines)

# ---------------------------------------------------------------------------
# Generator maps
# ---------------------------------------------------------------------------

class GeneratorMap:
    """A linear map on degree one; column j holds the image of generator j."""

    def __init__(self, name: str, matrix: list[list]):
        if len(matrix) != 4 or any(len(r) != 4 for r in matrix):
            raise ValueError("a generator map is a 4x4 matrix")
        self.name = name
        self.matrix = matrix

    @classmethod
    def from_images(cls, F: FieldContract, name: str, images: list[tuple[str, int]]) -> "GeneratorMap":
        """images[j] = (coefficient expression, target generator) for generator j."""
        M = la.zeros(F, 4, 4)
        for j, (coef, target) in enumerate(images):
            M[target][j] = F.value(coef)
        return cls(name, M)

    def compose(self, F: FieldContract, other: "GeneratorMap") -> "GeneratorMap":
        return GeneratorMap(f"{self.name}{other.name}", la.mat_mul(F, self.matrix, other.matrix))

    def image_words(self, F: FieldContract, words: dict[tuple, object]) -> dict[tuple, object]:
        out: dict[tuple, object] = {}
        for word, c in words.items():
            for targets in product(range(4), repeat=len(word)):
                coef = c
                for src, dst in zip(word, targets):
                    coef = F.mul(coef, self.matrix[dst][src])
                    if F.is_zero(coef):
                        break
                if not F.is_zero(coef):
                    out[targets] = F.add(out[targets], coef) if targets in out else coef
        return out

    def __repr__(self):
        return f"GeneratorMap('{self.name}')"


PHI_IMAGES = {
    1: [("b*c", 1), ("-i", 0), ("-i*b", 3), ("-c", 2)],
    2: [("a*c", 2), ("-a", 3), ("-i", 0), ("-i*c", 1)],
    3: [("a*b", 3), ("-i*a", 2), ("-b", 1), ("-i", 0)],
}
PSI_IMAGES = {
    1: [("i*b*c", 1), ("-1", 0), ("-b", 3), ("-i*c", 2)],
    2: [("i*a*c", 2), ("i*a", 3), ("-1", 0), ("c", 1)],
    3: [("a*b", 3), ("-i*a", 2), ("-b", 1), ("-i", 0)],
}
# phi_j^2 = NU_SQUARED[j] * gamma_j
NU_SQUARED = {1: "-i*b*c", 2: "-i*a*c", 3: "-i*a*b"}


def gamma_map(F: FieldContract, j: int) -> GeneratorMap:
    """gamma_j fixes x0 and xj and negates the other two generators."""
    signs = [F.one if k in (0, j) else F.neg(F.one) for k in range(4)]
    return GeneratorMap(f"gamma{j}", la.diag(F, signs))


def phi_map(F: FieldContract, j: int) -> GeneratorMap:
    return GeneratorMap.from_images(F, f"phi{j}", PHI_IMAGES[j])


def psi_map(F: FieldContract, j: int) -> GeneratorMap:
    return GeneratorMap.from_images(F, f"psi{j}", PSI_IMAGES[j])


def identification_matrix(F: FieldContract) -> list[list]:
    """iota(y_g) in x-coordinates: x0 = y0, x1 = i*y1, x2 = i*y2, x3 = y3."""
    i = F.param("i")
    return la.diag(F, [F.one, F.neg(i), F.neg(i), F.one])

# ---------------------------------------------------------------------------
# Algebra-level checks
# ---------------------------------------------------------------------------

def is_central_deg2(pres: QuadraticPresentation, z: NCElement) -> bool:
    """[z, g] projects to zero in degree 3 for every generator g."""
    if z.degree != 2:
        raise ValueError(f"z must have degree 2, got {z.degree}")
    F = pres.F
    comp = pres.component(3)
    for g in range(4):
        right = la.mat_vec(F, comp.right_in[g], z.coords)
        left = la.mat_vec(F, comp.left_in[g], z.coords)
        if not all(F.eq(a, b) for a, b in zip(right, left)):
            return False
    return True


def transformed_relations(pres: QuadraticPresentation, m: GeneratorMap) -> list[list]:
    F = pres.F
    M = m.matrix
    out = []
    for rel in pres.relations:
        row = [F.zero] * 16
        for i, j in product(range(4), range(4)):
            c = rel[4 * i + j]
            if F.is_zero(c):
                continue
            for k, l in product(range(4), range(4)):
                coef = F.mul(c, F.mul(M[k][i], M[l][j]))
                if not F.is_zero(coef):
                    row[4 * k + l] = F.add(row[4 * k + l], coef)
        out.append(row)
    return out


def is_graded_automorphism(pres: QuadraticPresentation, m: GeneratorMap) -> bool:
    """True iff (m (x) m)(R) spans the same space as R."""
    F = pres.F
    if F.is_zero(la.det(F, m.matrix)):
        raise ValueError(f"{m.name} is not invertible")
    return la.rank(F, pres.relations + transformed_relations(pres, m)) == 6


def square_words(F: FieldContract, coeffs: list[str]) -> dict[tuple, object]:
    return {(k, k): F.value(c) for k, c in enumerate(coeffs) if not F.is_zero(F.value(c))}


OMEGA_S = {
    None: ["-1", "1", "1", "1"],
    0: ["0", "1+gamma", "1+alpha*gamma", "1-alpha"],
    1: ["1+beta*gamma", "0", "-(gamma+beta*gamma)", "beta-beta*gamma"],
    2: ["1+alpha*gamma", "gamma-alpha*gamma", "0", "-(alpha+alpha*gamma)"],
    3: ["1+alpha*beta", "-(beta+alpha*beta)", "alpha-alpha*beta", "0"],
}
THETA_A = {
    None: ["-1", "-1", "-1", "-1"],
    1: ["1", "-beta*gamma", "gamma", "-beta"],
    2: ["1", "-gamma", "-alpha*gamma", "alpha"],
    3: ["1", "beta", "-alpha", "-alpha*beta"],
}


def omega(S: QuadraticPresentation, j: int | None = None) -> NCElement:
    """Omega for j None, otherwise Omega_j."""
    return S.element(square_words(S.F, OMEGA_S[j]))


def theta(A: QuadraticPresentation, j: int | None = None) -> NCElement:
    """Sum of -y_k^2 for j None, otherwise Theta_j."""
    return A.element(square_words(A.F, THETA_A[j]))


def map_element(pres: QuadraticPresentation, m: GeneratorMap, words: dict[tuple, object]) -> NCElement:
    return pres.element(m.image_words(pres.F, words))

# ---------------------------------------------------------------------------
# Audits
# ---------------------------------------------------------------------------

def _projective_key(F: FieldContract, M: list[list]) -> tuple:
    flat = [x for row in M for x in row]
    return tuple(F.to_str(x) for x in la.normalize(F, flat))


def _matrix_diff(F: FieldContract, A: list[list], B: list[list]) -> list[tuple[int, int]]:
    """Positions where two matrices disagree."""
    return [(r, c) for r in range(len(A)) for c in range(len(A[r])) if not F.eq(A[r][c], B[r][c])]


def h4_group_audit(F: FieldContract) -> AuditReport:
    """Heisenberg relations among phi_1..phi_3 as exact 4x4 matrix identities."""
    report = AuditReport("Heisenberg automorphisms", anchor="Heisenberg group of automorphisms")
    phi = {j: phi_map(F, j) for j in (1, 2, 3)}
    gam = {j: gamma_map(F, j) for j in (1, 2, 3)}
    i = F.param("i")

    for j in (1, 2, 3):
        square = la.mat_mul(F, phi[j].matrix, phi[j].matrix)
        expected = la.mat_scale(F, F.value(NU_SQUARED[j]), gam[j].matrix)
        report.add(f"phi{j}^2 = ({NU_SQUARED[j]}) gamma{j}", la.mat_eq(F, square, expected),
                   witness=_matrix_diff(F, square, expected))
        eps_sq = la.mat_scale(F, F.inv(F.value(NU_SQUARED[j])), square)
        report.add(f"eps{j}^2 = gamma{j}", la.mat_eq(F, eps_sq, gam[j].matrix),
                   anchor="eps_j = nu_j^-1 phi_j")

    for j, k in ((1, 2), (2, 3), (3, 1)):
        left = la.mat_mul(F, phi[j].matrix, phi[k].matrix)
        right = la.mat_scale(F, i, la.mat_mul(F, phi[k].matrix, phi[j].matrix))
        report.add(f"phi{j} phi{k} = i phi{k} phi{j}", la.mat_eq(F, left, right),
                   witness=_matrix_diff(F, left, right))

    if F.is_finite:
        nus = {j: F.sqrt(F.value(NU_SQUARED[j])) for j in (1, 2, 3)}
        if all(v is not None for v in nus.values()):
            eps = {j: la.mat_scale(F, F.inv(nus[j]), phi[j].matrix) for j in (1, 2, 3)}
            delta = la.mat_scale(F, i, la.identity(F, 4))
            lhs = la.mat_mul(F, eps[1], eps[2])
            rhs = la.mat_mul(F, delta, la.mat_mul(F, eps[2], eps[1]))
            report.add("eps1 eps2 = delta eps2 eps1 with delta = i", la.mat_eq(F, lhs, rhs),
                       witness={"nu": [F.to_str(nus[j]) for j in (1, 2, 3)]})

    # the phi_j generate a copy of E[4] inside PGL_4
    seen = {_projective_key(F, la.identity(F, 4)): la.identity(F, 4)}
    frontier = list(seen.values())
    while frontier:
        nxt = []
        for M in frontier:
            for j in (1, 2, 3):
                P = la.mat_mul(F, phi[j].matrix, M)
                key = _projective_key(F, P)
                if key not in seen:
                    seen[key] = P
                    nxt.append(P)
        frontier = nxt
    report.add("phi_j generate 16 projective classes", len(seen) == 16,
               anchor="E[4] acting by translation", witness=len(seen))
    return report


def automorphism_audit(S: QuadraticPresentation, A: QuadraticPresentation) -> AuditReport:
    F = S.F
    report = AuditReport("graded automorphisms", anchor="action of Gamma and E[2]; automorphisms of S")
    for j in (1, 2, 3):
        report.add(f"gamma{j} preserves the relations of S", is_graded_automorphism(S, gamma_map(F, j)))
        report.add(f"gamma{j} preserves the relations of A", is_graded_automorphism(A, gamma_map(F, j)))
        report.add(f"phi{j} preserves the relations of S", is_graded_automorphism(S, phi_map(F, j)))
        report.add(f"psi{j} does not preserve the relations of A",
                   not is_graded_automorphism(A, psi_map(F, j)), anchor="automorphisms of S but not of A")
    iota = identification_matrix(F)
    iota_inv = la.inverse(F, iota)
    for j in (1, 2, 3):
        conj = la.mat_mul(F, iota_inv, la.mat_mul(F, phi_map(F, j).matrix, iota))
        report.add(f"psi{j} = iota^-1 phi{j} iota", la.mat_eq(F, conj, psi_map(F, j).matrix),
                   anchor="x0 = y0, x1 = iy1, x2 = iy2, x3 = y3")
    return report


def central_pencil_audit(S: QuadraticPresentation) -> AuditReport:
    F = S.F
    report = AuditReport("central pencil of S", anchor="central elements of S")
    al, be, ga = F.param("alpha"), F.param("beta"), F.param("gamma")
    om = omega(S)
    oms = {j: omega(S, j) for j in range(4)}

    report.add("Omega is central", is_central_deg2(S, om))
    for j in range(4):
        report.add(f"Omega{j} is central", is_central_deg2(S, oms[j]))
    rank = la.rank(F, [om.coords] + [oms[j].coords for j in range(4)])
    report.add("Omega, Omega0..Omega3 span a pencil", rank == 2, witness=rank)

    two_abg = F.prod([F.from_int(2), al, be, ga])
    combo = om.scale(two_abg) + oms[1].scale(al) + oms[2].scale(be) + oms[3].scale(ga)
    variant = oms[0].scale(two_abg) + oms[1].scale(al) + oms[2].scale(be) + oms[3].scale(ga)
    report.add("2abg Omega + a Omega1 + b Omega2 + g Omega3 = 0", combo.is_zero(),
               anchor="linear relation in the central pencil",
               witness={"omega0_in_place_of_omega_vanishes": variant.is_zero()})
    report.add("the same relation with Omega0 in place of Omega fails", not variant.is_zero())

    alphas = {1: al, 2: be, 3: ga}
    for i_, j_, k_ in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        ai, aj = alphas[i_], alphas[j_]
        lhs = om.scale(F.prod([aj, F.add(F.one, ai), F.add(F.one, aj)]))
        rhs = oms[i_].scale(F.add(F.one, F.mul(ai, aj))) - oms[k_].scale(F.add(F.one, aj))
        report.add(f"cyclic pencil relation ({i_},{j_},{k_})", lhs == rhs)

    omega_words = square_words(F, OMEGA_S[None])
    shifts = {1: F.mul(be, ga), 2: F.mul(al, ga), 3: F.mul(al, be)}
    for j in (1, 2, 3):
        image = map_element(S, phi_map(F, j), omega_words)
        expected = oms[j] + om.scale(shifts[j])
        report.add(f"-phi{j}(Omega) = Omega{j} + shift*Omega", (image.scale(F.neg(F.one))) == expected,
                   anchor="Heisenberg action on the center")
    explicit = S.element(square_words(F, ["1", "gamma", "alpha*gamma", "-alpha"]))
    image2 = map_element(S, phi_map(F, 2), omega_words).scale(F.neg(F.one))
    report.add("-phi2(Omega) = x0^2 + g x1^2 + ag x2^2 - a x3^2", image2 == explicit)
    return report


def twist_center_audit(A: QuadraticPresentation) -> AuditReport:
    report = AuditReport("center of A", anchor="central elements of A")
    report.add("sum of squares is central in A", is_central_deg2(A, theta(A)))
    for j in (1, 2, 3):
        report.add(f"Theta{j} is central in A", is_central_deg2(A, theta(A, j)))
    y0_sq = A.element({(0, 0): A.F.one})
    report.add("y0^2 is not central in A", not is_central_deg2(A, y0_sq))
    return report


def hilbert_audit(pres: QuadraticPresentation, up_to: int | None = None) -> AuditReport:
    report = AuditReport(f"Hilbert function of {pres.label}", anchor="Hilbert series (1-t)^-4")
    report.add(f"relation rank of {pres.label} is 6", pres.relation_rank() == 6)
    dims = pres.dims(up_to)
    expected = [hilbert_dim(n) for n in range(len(dims))]
    report.add(f"dim {pres.label}_n = C(n+3,3) for n <= {len(dims) - 1}", dims == expected,
               witness={"dims": dims, "expected": expected})
    return report


def associativity_check(pres: QuadraticPresentation, rng: np.random.Generator, samples: int = 100) -> AuditReport:
    report = AuditReport(f"associativity of {pres.label}", anchor="associative multiplication")
    top = pres.cutoff
    failures = 0
    for _ in range(samples):
        degs = [int(d) for d in rng.integers(0, 2, size=3) + 1]
        while sum(degs) > top:
            degs[int(np.argmax(degs))] -= 1
        u, v, w = (pres.random_element(d, rng) for d in degs)
        if not ((u * v) * w) == (u * (v * w)):
            failures += 1
    report.add(f"(uv)w = u(vw) on {samples} triples", failures == 0, witness={"failures": failures})
    return report

# ---------------------------------------------------------------------------
# Gamma-fixed part of S (x) M_2
# ---------------------------------------------------------------------------

def quaternion_units(F: FieldContract) -> list[list[list]]:
    i = F.param("i")
    z, o, m = F.zero, F.one, F.neg(F.one)
    return [
        [[o, z], [z, o]],
        [[i, z], [z, F.neg(i)]],
        [[z, i], [i, z]],
        [[z, m], [o, z]],
    ]


def quaternion_coords(F: FieldContract, X: list[list]) -> list:
    """Coordinates of a 2x2 matrix in the basis q0..q3."""
    two = F.from_int(2)
    two_i = F.mul(two, F.param("i"))
    (x11, x12), (x21, x22) = X
    return [
        F.div(F.add(x11, x22), two),
        F.div(F.sub(x11, x22), two_i),
        F.div(F.add(x12, x21), two_i),
        F.div(F.sub(x21, x12), two),
    ]


def gamma_fixed_audit(S: QuadraticPresentation, A: QuadraticPresentation, up_to: int = 3) -> AuditReport:
    """
    y_j -> x_j (x) q_j lands in the Gamma-fixed part of S (x) M_2 and is an
    isomorphism onto it in degrees <= up_to.

    In the basis q0..q3, Ad(q_k) is diagonal with character k; a basis word of
    S has character the XOR of its letters, so a coordinate (word, k) is fixed
    iff the XOR equals k.
    """
    F = S.F
    report = AuditReport("Gamma-fixed subalgebra", anchor="A as the Gamma-invariants of S (x) M_2")
    q = quaternion_units(F)

    def q_word(word: tuple) -> list:
        M = la.identity(F, 2)
        for g in word:
            M = la.mat_mul(F, M, q[g])
        return quaternion_coords(F, M)

    def image(words: dict[tuple, object], n: int) -> list:
        dim = S.component(n).dim
        out = [F.zero] * (dim * 4)
        for word, c in words.items():
            s = S.element({word: F.one}).coords
            qc = q_word(word)
            for a, x in enumerate(s):
                if F.is_zero(x):
                    continue
                for k in range(4):
                    if not F.is_zero(qc[k]):
                        out[4 * a + k] = F.add(out[4 * a + k], F.prod([c, x, qc[k]]))
        return out

    rel_images = []
    for rel in A.relations:
        words = {(idx // 4, idx % 4): c for idx, c in enumerate(rel) if not F.is_zero(c)}
        rel_images.append(image(words, 2))
    report.add("relations of A map to zero", all(F.is_zero(x) for v in rel_images for x in v))

    for n in range(1, up_to + 1):
        comp_s = S.component(n)
        chars = [_xor(w) for w in comp_s.words]
        images = [image({w: F.one}, n) for w in A.component(n).words]
        fixed = all(
            F.is_zero(v[4 * a + k]) or chars[a] == k
            for v in images for a in range(comp_s.dim) for k in range(4)
        )
        fixed_dim = sum(1 for a in range(comp_s.dim) for k in range(4) if chars[a] == k)
        rank = la.rank(F, images)
        report.add(f"degree {n}: images are Gamma-fixed", fixed)
        report.add(f"degree {n}: isomorphism onto the fixed part", rank == A.component(n).dim == fixed_dim,
                   witness={"rank": rank, "fixed_dim": fixed_dim})
    return report


def _xor(word: tuple) -> int:
    acc = 0
    for g in word:
        acc ^= g
    return acc
