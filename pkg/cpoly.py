"""
Commutative multivariate polynomials over a FieldContract.

Sparse ``Poly`` objects (exponent tuple -> scalar), Buchberger Groebner
bases with the coprime and chain criteria, determinantal minors, and
projective (dimension, degree) certificates read off the Hilbert series of
the leading-monomial ideal.
"""

from collections.abc import Callable, Sequence
from itertools import combinations

import numpy as np
import sympy

from scalar import FieldContract, evaluate_expr
from utils import ComputationLimit

TOWER_GENERATOR_LIMIT = 12
TOWER_DEGREE_LIMIT = 4
TOWER_BASIS_LIMIT = 40

# ---------------------------------------------------------------------------
# Monomial orders
# ---------------------------------------------------------------------------

Monomial = tuple[int, ...]


def _grevlex(m: Monomial) -> tuple:
    return (sum(m), tuple(-e for e in reversed(m)))


def order_key(order: str) -> Callable[[Monomial], tuple]:
    """Sort key for 'grevlex', 'lex' or 'block:k' (eliminates the first k variables)."""
    if order == "grevlex":
        return _grevlex
    if order == "lex":
        return lambda m: m
    if order.startswith("block:"):
        k = int(order.split(":", 1)[1])
        return lambda m: (_grevlex(m[:k]), _grevlex(m[k:]))
    raise ValueError(f"Unknown monomial order: {order!r}")


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))

# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

class Poly:
    __slots__ = ("F", "nvars", "terms", "order", "_lm")

    def __init__(self, F: FieldContract, nvars: int, terms: dict | None = None, order: str = "grevlex"):
        self.F = F
        self.nvars = nvars
        self.order = order
        self.terms = {m: c for m, c in (terms or {}).items() if not F.is_zero(c)}
        self._lm = None

    @classmethod
    def constant(cls, F, nvars: int, c, order: str = "grevlex") -> "Poly":
        return cls(F, nvars, {(0,) * nvars: c}, order)

    @classmethod
    def variable(cls, F, nvars: int, k: int, order: str = "grevlex") -> "Poly":
        m = tuple(1 if i == k else 0 for i in range(nvars))
        return cls(F, nvars, {m: F.one}, order)

    @classmethod
    def linear(cls, F, coeffs: Sequence, order: str = "grevlex") -> "Poly":
        n = len(coeffs)
        return cls(F, n, {tuple(1 if i == k else 0 for i in range(n)): c for k, c in enumerate(coeffs)}, order)

    def _new(self, terms: dict) -> "Poly":
        return Poly(self.F, self.nvars, terms, self.order)

    def with_order(self, order: str) -> "Poly":
        return self if order == self.order else Poly(self.F, self.nvars, self.terms, order)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "Poly") -> "Poly":
        F = self.F
        res = dict(self.terms)
        for m, c in other.terms.items():
            res[m] = F.add(res[m], c) if m in res else c
        return self._new(res)

    def __sub__(self, other: "Poly") -> "Poly":
        F = self.F
        res = dict(self.terms)
        for m, c in other.terms.items():
            res[m] = F.sub(res[m], c) if m in res else F.neg(c)
        return self._new(res)

    def __neg__(self) -> "Poly":
        return self._new({m: self.F.neg(c) for m, c in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        F = self.F
        res: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                term = F.mul(c1, c2)
                res[m] = F.add(res[m], term) if m in res else term
        return self._new(res)

    def __pow__(self, n: int) -> "Poly":
        result = Poly.constant(self.F, self.nvars, self.F.one, self.order)
        for _ in range(n):
            result = result * self
        return result

    def scale(self, c) -> "Poly":
        return self._new({m: self.F.mul(c, v) for m, v in self.terms.items()})

    def mul_term(self, c, mono: Monomial) -> "Poly":
        return self._new({mono_mul(m, mono): self.F.mul(c, v) for m, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Poly) or set(self.terms) != set(other.terms):
            return False
        return all(self.F.eq(c, other.terms[m]) for m, c in self.terms.items())

    def __hash__(self):
        return hash(frozenset(self.terms))

    def lm(self) -> Monomial:
        if self._lm is None:
            if not self.terms:
                raise ValueError("polynomial is zero")
            self._lm = max(self.terms, key=order_key(self.order))
        return self._lm

    def lc(self):
        return self.terms[self.lm()]

    def monic(self) -> "Poly":
        return self.scale(self.F.inv(self.lc())) if self.terms else self

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def is_constant(self) -> bool:
        return bool(self.terms) and self.degree() == 0

    def evaluate(self, point: Sequence):
        F = self.F
        acc = F.zero
        for m, c in self.terms.items():
            term = c
            for x, e in zip(point, m):
                if e:
                    term = F.mul(term, F.pow(x, e))
            acc = F.add(acc, term)
        return acc

    def compose(self, images: Sequence["Poly"]) -> "Poly":
        """Substitute variable k by images[k]."""
        target = images[0]
        result = Poly(self.F, target.nvars, {}, target.order)
        for m, c in self.terms.items():
            term = Poly.constant(self.F, target.nvars, c, target.order)
            for k, e in enumerate(m):
                if e:
                    term = term * images[k] ** e
            result = result + term
        return result

    def divide_variable_power(self, k: int) -> "Poly":
        """Divide by the largest power of variable k dividing every term."""
        if not self.terms:
            return self
        e = min(m[k] for m in self.terms)
        if e == 0:
            return self
        return self._new({m[:k] + (m[k] - e,) + m[k + 1:]: c for m, c in self.terms.items()})

    def coefficients_in_prime_field(self) -> bool:
        F = self.F
        return F.is_finite and all(F.in_prime_field(c) for c in self.terms.values())

    def to_sympy(self, gens: Sequence[sympy.Symbol]) -> sympy.Expr:
        if not self.F.is_finite:
            raise ValueError("only finite-field polynomials convert to sympy")
        return sympy.Add(*[
            int(c) * sympy.Mul(*[g**e for g, e in zip(gens, m)]) for m, c in self.terms.items()
        ])

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"x{k}" for k in range(self.nvars)]
        parts = []
        for m in sorted(self.terms, key=order_key(self.order), reverse=True):
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e)
            coeff = self.F.to_str(self.terms[m])
            parts.append(f"({coeff})*{mono}" if mono else f"({coeff})")
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({self.to_str()})"


def parse_poly(text: str, names: Sequence[str], F: FieldContract, order: str = "grevlex") -> Poly:
    """Parse text such as 'z23 + alpha*z01' with named variables; coefficients may use parameters."""
    gens = sympy.symbols(list(names))
    local = {n: g for n, g in zip(names, gens)}
    local.update({n: sympy.Symbol(n) for n in ("i", "a", "b", "c", "alpha", "beta", "gamma")})
    expr = sympy.sympify(text, locals=local)
    poly = sympy.Poly(sympy.expand(expr), *gens)
    terms: dict = {}
    for mono, coeff in poly.terms():
        value = evaluate_expr(F, coeff)
        terms[tuple(mono)] = F.add(terms[tuple(mono)], value) if tuple(mono) in terms else value
    return Poly(F, len(names), terms, order)

# ---------------------------------------------------------------------------
# Groebner bases
# ---------------------------------------------------------------------------

class GroebnerBasis:
    def __init__(self, polys: list[Poly], order: str, engine: str = "buchberger"):
        self.polys = polys
        self.order = order
        self.engine = engine

    @property
    def is_unit(self) -> bool:
        return any(p.is_constant() for p in self.polys)

    def leading_monomials(self) -> list[Monomial]:
        return [p.lm() for p in self.polys]

    def reduce(self, f: Poly) -> Poly:
        return normal_form(f.with_order(self.order), self.polys)

    def contains(self, f: Poly) -> bool:
        return not self.reduce(f)

    def __len__(self):
        return len(self.polys)

    def __repr__(self):
        return f"GroebnerBasis(size={len(self.polys)}, order='{self.order}', engine='{self.engine}')"


def normal_form(f: Poly, basis: Sequence[Poly]) -> Poly:
    """Fully reduce f modulo the basis (remainder of multivariate division)."""
    F = f.F
    p = f
    remainder: dict = {}
    while p:
        m = p.lm()
        for g in basis:
            gm = g.lm()
            if mono_divides(gm, m):
                p = p - g.mul_term(F.div(p.lc(), g.lc()), mono_div(m, gm))
                break
        else:
            remainder[m] = p.lc()
            p = p._new({k: v for k, v in p.terms.items() if k != m})
    return f._new(remainder)


def s_polynomial(f: Poly, g: Poly) -> Poly:
    lcm = mono_lcm(f.lm(), g.lm())
    F = f.F
    return (f.mul_term(F.inv(f.lc()), mono_div(lcm, f.lm()))
            - g.mul_term(F.inv(g.lc()), mono_div(lcm, g.lm())))


def _interreduce(G: list[Poly], order: str) -> list[Poly]:
    key = order_key(order)
    minimal: list[Poly] = []
    for g in sorted(G, key=lambda g: key(g.lm())):
        if not any(mono_divides(h.lm(), g.lm()) for h in minimal):
            minimal.append(g)
    reduced = [normal_form(g, minimal[:k] + minimal[k + 1:]).monic() for k, g in enumerate(minimal)]
    return sorted(reduced, key=lambda g: key(g.lm()), reverse=True)


def buchberger(gens: Sequence[Poly], order: str = "grevlex", limit: int | None = None) -> GroebnerBasis:
    """
    Reduced Groebner basis by Buchberger's algorithm.

    Pairs are taken in normal-strategy order; the product criterion and the
    chain criterion drop useless pairs. The symbolic tower is guarded by
    size limits and raises ComputationLimit instead of running away.
    """
    G = [g.with_order(order).monic() for g in gens if g]
    if not G:
        return GroebnerBasis([], order)
    F = G[0].F
    if not F.is_finite:
        if len(G) > TOWER_GENERATOR_LIMIT or max(g.degree() for g in G) > TOWER_DEGREE_LIMIT:
            raise ComputationLimit(f"symbolic Groebner input too large ({len(G)} generators)")
        limit = min(limit or TOWER_BASIS_LIMIT, TOWER_BASIS_LIMIT)

    key = order_key(order)
    pending = set(combinations(range(len(G)), 2))

    def pair_key(ij):
        lcm = mono_lcm(G[ij[0]].lm(), G[ij[1]].lm())
        return (sum(lcm), key(lcm))

    while pending:
        i, j = min(pending, key=pair_key)
        pending.discard((i, j))
        lm_i, lm_j = G[i].lm(), G[j].lm()
        if mono_coprime(lm_i, lm_j):
            continue
        lcm = mono_lcm(lm_i, lm_j)
        if any(
            k not in (i, j)
            and mono_divides(G[k].lm(), lcm)
            and (min(i, k), max(i, k)) not in pending
            and (min(j, k), max(j, k)) not in pending
            for k in range(len(G))
        ):
            continue
        h = normal_form(s_polynomial(G[i], G[j]), G)
        if h:
            G.append(h.monic())
            k = len(G) - 1
            pending.update((m, k) for m in range(k))
            if limit is not None and len(G) > limit:
                raise ComputationLimit(f"Groebner basis exceeded {limit} elements")
    return GroebnerBasis(_interreduce(G, order), order)


def groebner_sympy(gens: Sequence[Poly], order: str = "grevlex", method: str = "f5b") -> GroebnerBasis:
    """Reference basis from sympy.groebner over the prime field."""
    gens = [g for g in gens if g]
    if not gens:
        return GroebnerBasis([], order, engine="sympy")
    F, n = gens[0].F, gens[0].nvars
    if not all(g.coefficients_in_prime_field() for g in gens):
        raise ValueError("sympy engine needs coefficients in the prime field")
    symbols = sympy.symbols(f"v0:{n}")
    G = sympy.groebner([g.to_sympy(symbols) for g in gens], *symbols,
                       modulus=F.p, order=order, method=method)
    polys = []
    for expr in G.exprs:
        terms = {tuple(m): F.from_int(int(c)) for m, c in sympy.Poly(expr, *symbols, modulus=F.p).terms()}
        polys.append(Poly(F, n, terms, order).monic())
    return GroebnerBasis(polys, order, engine="sympy")


def groebner(gens: Sequence[Poly], order: str = "grevlex", engine: str = "buchberger") -> GroebnerBasis:
    engine = engine.lower().strip()
    if engine == "buchberger":
        return buchberger(gens, order)
    elif engine == "sympy":
        return groebner_sympy(gens, order)
    elif engine == "auto":
        if all(g.coefficients_in_prime_field() for g in gens if g):
            return groebner_sympy(gens, order)
        return buchberger(gens, order)
    else:
        raise ValueError(f"Unknown engine: {engine!r}")

# ---------------------------------------------------------------------------
# Minors
# ---------------------------------------------------------------------------

def minors(matrix: list[list[Poly]], k: int) -> list[Poly]:
    """All k x k minors, rows-then-columns in lexicographic subset order."""
    nrows, ncols = len(matrix), len(matrix[0])
    if k > min(nrows, ncols):
        raise ValueError(f"k must be at most {min(nrows, ncols)}, got {k}")
    memo: dict = {}

    def minor(rows: tuple, cols: tuple) -> Poly:
        if (rows, cols) in memo:
            return memo[rows, cols]
        if len(rows) == 1:
            value = matrix[rows[0]][cols[0]]
        else:
            value = None
            for idx, c in enumerate(cols):
                entry = matrix[rows[0]][c]
                if not entry:
                    continue
                term = entry * minor(rows[1:], cols[:idx] + cols[idx + 1:])
                if idx % 2:
                    term = -term
                value = term if value is None else value + term
            if value is None:
                first = matrix[rows[0]][cols[0]]
                value = Poly(first.F, first.nvars, {}, first.order)
        memo[rows, cols] = value
        return value

    return [minor(rows, cols) for rows in combinations(range(nrows), k) for cols in combinations(range(ncols), k)]

# ---------------------------------------------------------------------------
# Hilbert series of monomial ideals
# ---------------------------------------------------------------------------

def _minimalize(gens: list[Monomial]) -> list[Monomial]:
    out: list[Monomial] = []
    for m in sorted(set(gens), key=sum):
        if not any(mono_divides(g, m) for g in out):
            out.append(m)
    return out


def hilbert_numerator(gens: list[Monomial]) -> np.ndarray:
    """
    Numerator N(t) of the Hilbert series N(t)/(1-t)^n of k[x]/M.

    Pivot recursion N(M) = N(M + x) + t * N(M : x) on a variable shared by
    two generators; pairwise coprime generators give prod(1 - t^deg).
    """
    gens = _minimalize(gens)
    if not gens:
        return np.array([1], dtype=np.int64)
    n = len(gens[0])
    counts = [sum(1 for g in gens if g[v]) for v in range(n)]
    v = int(np.argmax(counts))
    if counts[v] <= 1 or all(mono_coprime(a, b) for a, b in combinations(gens, 2)):
        result = np.array([1], dtype=np.int64)
        for g in gens:
            factor = np.zeros(sum(g) + 1, dtype=np.int64)
            factor[0], factor[-1] = 1, -1
            result = np.convolve(result, factor)
        return result
    x = tuple(1 if k == v else 0 for k in range(n))
    plus = [g for g in gens if not g[v]] + [x]
    colon = [g[:v] + (max(g[v] - 1, 0),) + g[v + 1:] for g in gens]
    left = hilbert_numerator(plus)
    right = np.concatenate([[0], hilbert_numerator(colon)])
    size = max(len(left), len(right))
    return np.pad(left, (0, size - len(left))) + np.pad(right, (0, size - len(right)))


def proj_dim_degree(gens: Sequence[Poly], engine: str = "buchberger") -> tuple[int, int]:
    """
    (dimension, degree) of the projective scheme cut out by homogeneous gens.

    The Hilbert polynomial does not change under saturation, so it is read
    directly from the leading monomials. The unit ideal returns (-1, 0).
    """
    gens = [g for g in gens if g]
    if not gens:
        raise ValueError("need at least one nonzero generator")
    if not all(g.is_homogeneous() for g in gens):
        raise ValueError("proj_dim_degree needs homogeneous generators")
    basis = groebner(gens, "grevlex", engine)
    if basis.is_unit:
        return (-1, 0)
    return dim_degree_from_monomials(basis.leading_monomials())


def dim_degree_from_monomials(monomials: list[Monomial]) -> tuple[int, int]:
    if any(sum(m) == 0 for m in monomials):
        return (-1, 0)
    n = len(monomials[0])
    numerator = hilbert_numerator(monomials)
    k = 0
    while len(numerator) > 1 and int(numerator.sum()) == 0:
        numerator = np.cumsum(numerator)[:-1]
        k += 1
    if int(numerator.sum()) == 0 or k >= n:
        return (-1, 0)
    return (n - k - 1, int(numerator.sum()))


def saturate(gens: Sequence[Poly], rng: np.random.Generator, engine: str = "buchberger") -> list[Poly]:
    """
    Saturation by the irrelevant ideal.

    A random linear form l is made the last variable; in grevlex, dividing
    each basis element by its largest power of that variable gives I : l^inf.
    """
    gens = [g for g in gens if g]
    F, n = gens[0].F, gens[0].nvars
    shift = [F.random(rng) for _ in range(n - 1)]
    variables = [Poly.variable(F, n, k) for k in range(n)]

    def last_var_image(sign: int) -> Poly:
        expr = variables[n - 1]
        for k, s in enumerate(shift):
            term = variables[k].scale(s)
            expr = expr - term if sign > 0 else expr + term
        return expr

    forward = variables[:-1] + [last_var_image(+1)]
    backward = variables[:-1] + [last_var_image(-1)]
    moved = [g.compose(forward) for g in gens]
    basis = groebner(moved, "grevlex", engine)
    saturated = [p.divide_variable_power(n - 1) for p in basis.polys]
    return [p.compose(backward) for p in saturated]
