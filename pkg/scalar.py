"""
Exact scalar domains behind one field contract.

Two interchangeable domains are provided:

* ``TowerField``: the generic parameters, Q(i)(a, b)(c) with
  c^2 = -(a^2 + b^2) / (1 + a^2 b^2). Rational functions in a, b come from
  ``sympy.polys.fields`` and are kept in lowest terms by sympy itself.
* ``PrimeSquareField``: F_{p^2} = F_p[w] / (w^2 - nr), elements encoded as
  ints ``u + v * p`` with numpy lookup tables for every operation.

``specialize_params`` picks admissible (a, b, c, i) for a prime.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import lru_cache
from typing import Any

import numpy as np
import sympy
from sympy import QQ
from sympy.polys.fields import FracElement, field

from models import AuditReport
from numerical import prime_square_tables, smallest_nonresidue
from utils import ExhaustedSearch, validate_positive, validate_prime

PARAM_NAMES = ("i", "a", "b", "c", "alpha", "beta", "gamma")

# ---------------------------------------------------------------------------
# Contract
# ---------------------------------------------------------------------------

class FieldContract(ABC):
    """Arithmetic interface shared by the tower and the finite fields."""

    name: str = "field"
    is_finite: bool = False

    def __init__(self):
        self.params: dict[str, Any] = {}

    @abstractmethod
    def add(self, x, y): ...

    @abstractmethod
    def sub(self, x, y): ...

    @abstractmethod
    def mul(self, x, y): ...

    @abstractmethod
    def neg(self, x): ...

    @abstractmethod
    def inv(self, x): ...

    @abstractmethod
    def is_zero(self, x) -> bool: ...

    @abstractmethod
    def from_int(self, n: int): ...

    @abstractmethod
    def to_str(self, x) -> str: ...

    @abstractmethod
    def random(self, rng: np.random.Generator): ...

    def div(self, x, y):
        if self.is_zero(y):
            raise ZeroDivisionError("division by zero in " + self.name)
        return self.mul(x, self.inv(y))

    def eq(self, x, y) -> bool:
        return self.is_zero(self.sub(x, y))

    def pow(self, x, n: int):
        if n < 0:
            return self.pow(self.inv(x), -n)
        result, base = self.one, x
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def sum(self, values):
        acc = self.zero
        for v in values:
            acc = self.add(acc, v)
        return acc

    def prod(self, values):
        acc = self.one
        for v in values:
            acc = self.mul(acc, v)
        return acc

    def param(self, name: str):
        if name not in self.params:
            raise KeyError(f"{self.name} has no parameter {name!r}")
        return self.params[name]

    def value(self, text: str):
        """Evaluate a parameter expression such as '-i*b*c', cached per field."""
        cache = self.__dict__.setdefault("_value_cache", {})
        if text not in cache:
            cache[text] = evaluate_expr(self, text)
        return cache[text]

    def describe(self) -> dict:
        return {"field": self.name, **{k: self.to_str(v) for k, v in self.params.items()}}

    def __repr__(self):
        return f"{type(self).__name__}({self.name})"

# ---------------------------------------------------------------------------
# Finite fields F_{p^2}
# ---------------------------------------------------------------------------

class PrimeSquareField(FieldContract):
    is_finite = True

    def __init__(self, p: int, nonresidue: int | None = None):
        super().__init__()
        self.p = validate_prime(p)
        self.q = p * p
        self.nr = nonresidue if nonresidue is not None else smallest_nonresidue(p)
        self.name = f"F_{self.q}"

        tables = prime_square_tables(p, self.nr)
        self.add_np, self.sub_np, self.mul_np = tables["add"], tables["sub"], tables["mul"]
        self.neg_np, self.inv_np = tables["neg"], tables["inv"]
        self._add = self.add_np.tolist()
        self._sub = self.sub_np.tolist()
        self._mul = self.mul_np.tolist()
        self._neg = self.neg_np.tolist()
        self._inv = self.inv_np.tolist()

        self._sqrt: dict[int, int] = {}
        for x in range(self.q):
            self._sqrt.setdefault(self._mul[x][x], x)

        self.zero, self.one = 0, 1
        self.seed: int | None = None

    def add(self, x, y):
        return self._add[x][y]

    def sub(self, x, y):
        return self._sub[x][y]

    def mul(self, x, y):
        return self._mul[x][y]

    def neg(self, x):
        return self._neg[x]

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self.name}")
        return self._inv[x]

    def is_zero(self, x) -> bool:
        return x == 0

    def eq(self, x, y) -> bool:
        return x == y

    def from_int(self, n: int):
        return int(n) % self.p

    def element(self, u: int, v: int = 0) -> int:
        """u + v*w with w^2 = nr."""
        return (u % self.p) + (v % self.p) * self.p

    def to_str(self, x) -> str:
        u, v = x % self.p, x // self.p
        if v == 0:
            return str(u)
        return f"{u}+{v}w" if u else f"{v}w"

    def random(self, rng: np.random.Generator):
        return int(rng.integers(0, self.q))

    def sqrt(self, x) -> int | None:
        """Smallest square root in the encoding order, or None."""
        return self._sqrt.get(x)

    def is_square(self, x) -> bool:
        return x in self._sqrt

    def sqrt_np(self) -> np.ndarray:
        """sqrt_np()[x] is a square root of x, or -1 for non-squares."""
        table = np.full(self.q, -1, dtype=np.int64)
        for square, root in self._sqrt.items():
            table[square] = root
        return table

    def frobenius(self, x) -> int:
        return self.element(x % self.p, -(x // self.p))

    def in_prime_field(self, x) -> bool:
        return x < self.p

    def elements(self) -> range:
        return range(self.q)

    def describe(self) -> dict:
        return {"p": self.p, "nonresidue": self.nr, **super().describe()}

# ---------------------------------------------------------------------------
# Generic parameter tower
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianRational:
    """re + i*im with re, im in Q(a, b)."""
    re: FracElement
    im: FracElement

    def __add__(self, other):
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def inverse(self):
        norm = self.re * self.re + self.im * self.im
        if not norm:
            raise ZeroDivisionError("division by the zero rational function")
        return GaussianRational(self.re / norm, -self.im / norm)

    def is_zero(self) -> bool:
        return not self.re and not self.im


@dataclass(frozen=True)
class TowerScalar:
    """re_c + im_c * c, with re_c, im_c free of c."""
    re_c: GaussianRational
    im_c: GaussianRational


class TowerField(FieldContract):
    name = "Q(i)(a,b)(c)"

    def __init__(self):
        super().__init__()
        self.K, a, b = field("a,b", QQ)
        self._a, self._b = a, b
        self._gamma = -(a**2 + b**2) / (1 + a**2 * b**2)
        self._g = GaussianRational(self._gamma, self.K.zero)

        self.zero = self._lift(self.K.zero)
        self.one = self._lift(self.K.one)
        zero_g = GaussianRational(self.K.zero, self.K.zero)
        self.params = {
            "i": TowerScalar(GaussianRational(self.K.zero, self.K.one), zero_g),
            "a": self._lift(a),
            "b": self._lift(b),
            "c": TowerScalar(zero_g, GaussianRational(self.K.one, self.K.zero)),
            "alpha": self._lift(a**2),
            "beta": self._lift(b**2),
            "gamma": self._lift(self._gamma),
        }

    def _lift(self, r: FracElement) -> TowerScalar:
        zero = self.K.zero
        return TowerScalar(GaussianRational(self.K(r), zero), GaussianRational(zero, zero))

    def add(self, x, y):
        return TowerScalar(x.re_c + y.re_c, x.im_c + y.im_c)

    def sub(self, x, y):
        return TowerScalar(x.re_c - y.re_c, x.im_c - y.im_c)

    def neg(self, x):
        return TowerScalar(-x.re_c, -x.im_c)

    def mul(self, x, y):
        # c^2 is rewritten through the constraint immediately
        return TowerScalar(
            x.re_c * y.re_c + self._g * (x.im_c * y.im_c),
            x.re_c * y.im_c + x.im_c * y.re_c,
        )

    def inv(self, x):
        norm = x.re_c * x.re_c - self._g * (x.im_c * x.im_c)
        if norm.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        s = norm.inverse()
        return TowerScalar(x.re_c * s, -(x.im_c * s))

    def is_zero(self, x) -> bool:
        return x.re_c.is_zero() and x.im_c.is_zero()

    def from_int(self, n: int):
        return self._lift(self.K(int(n)))

    def from_rational(self, num: int, den: int = 1):
        return self._lift(self.K(num) / self.K(den))

    def random(self, rng: np.random.Generator):
        a, b = self._a, self._b

        def part():
            n = [int(v) for v in rng.integers(-3, 4, size=5)]
            num = n[0] + n[1] * a + n[2] * b + n[3] * a * b
            return num / (1 + (abs(n[4]) % 3) * a**2)

        return TowerScalar(GaussianRational(part(), part()), GaussianRational(part(), part()))

    def to_expr(self, x) -> sympy.Expr:
        def gaussian(g: GaussianRational) -> sympy.Expr:
            return g.re.as_expr() + sympy.I * g.im.as_expr()

        return gaussian(x.re_c) + gaussian(x.im_c) * sympy.Symbol("c")

    def to_str(self, x) -> str:
        def part(g: GaussianRational) -> str:
            num, den = sympy.fraction(sympy.together(g.re.as_expr() + sympy.I * g.im.as_expr()))
            num_s = str(sympy.expand(num)).replace("I", "i")
            den_s = str(sympy.expand(den)).replace("I", "i")
            return f"({num_s})/({den_s})"

        if x.im_c.is_zero():
            return part(x.re_c)
        return f"{part(x.re_c)} + ({part(x.im_c)})*c"


@lru_cache(maxsize=1)
def tower_field() -> TowerField:
    return TowerField()

# ---------------------------------------------------------------------------
# Expression evaluation
# ---------------------------------------------------------------------------

_ALIASES = {"α": "alpha", "β": "beta", "γ": "gamma"}


def evaluate_expr(F: FieldContract, expr) -> Any:
    """Evaluate a sympy expression in the symbols a, b, c, i, alpha, beta, gamma."""
    if isinstance(expr, str):
        expr = sympy.sympify(expr, locals={n: sympy.Symbol(n) for n in PARAM_NAMES})
    expr = sympy.sympify(expr)
    if expr is sympy.I:
        return F.param("i")
    if expr.is_Integer:
        return F.from_int(int(expr))
    if expr.is_Rational:
        return F.div(F.from_int(int(expr.p)), F.from_int(int(expr.q)))
    if expr.is_Symbol:
        return F.param(_ALIASES.get(expr.name, expr.name))
    if expr.is_Add:
        return F.sum(evaluate_expr(F, arg) for arg in expr.args)
    if expr.is_Mul:
        return F.prod(evaluate_expr(F, arg) for arg in expr.args)
    if expr.is_Pow and expr.exp.is_Integer:
        return F.pow(evaluate_expr(F, expr.base), int(expr.exp))
    raise ValueError(f"Unsupported expression node: {expr!r}")


def tower_reduce(e, F: TowerField | None = None) -> TowerScalar:
    """Canonical TowerScalar for an expression; reduced values pass through."""
    if isinstance(e, TowerScalar):
        return e
    return evaluate_expr(F or tower_field(), e)

# ---------------------------------------------------------------------------
# Specialization
# ---------------------------------------------------------------------------

def constraint_residual(F: FieldContract):
    """alpha + beta + gamma + alpha*beta*gamma, zero on admissible parameters."""
    al, be, ga = F.param("alpha"), F.param("beta"), F.param("gamma")
    return F.sum([al, be, ga, F.prod([al, be, ga])])


def _admissible_gamma(F: PrimeSquareField, alpha: int, beta: int) -> int | None:
    excluded = {F.zero, F.one, F.neg(F.one)}
    if alpha in excluded or beta in excluded:
        return None
    denom = F.add(F.one, F.mul(alpha, beta))
    if denom == 0:
        return None
    gamma = F.neg(F.div(F.add(alpha, beta), denom))
    if gamma in excluded:
        return None
    return gamma


def specialize_params(p: int, seed: int = 0) -> PrimeSquareField:
    """
    Pick admissible parameters in F_{p^2}, deterministically in seed.

    alpha, beta are taken from F_p first; only when F_p has no admissible pair
    (p = 5) do we fall back to squares of F_{p^2} whose gamma is also a square.
    """
    F = PrimeSquareField(p)
    rng = np.random.default_rng(seed)
    minus_one = F.neg(F.one)

    def candidate_pairs():
        yield [(x, y) for x in range(2, p - 1) for y in range(2, p - 1)]
        squares = [x for x in F.elements() if F.is_square(x)]
        yield [(x, y) for x in squares for y in squares]

    for pairs in candidate_pairs():
        for k in rng.permutation(len(pairs)):
            alpha, beta = pairs[int(k)]
            gamma = _admissible_gamma(F, alpha, beta)
            if gamma is None or not F.is_square(gamma):
                continue
            F.params = {
                "i": F.sqrt(minus_one),
                "a": F.sqrt(alpha),
                "b": F.sqrt(beta),
                "c": F.sqrt(gamma),
                "alpha": alpha,
                "beta": beta,
                "gamma": gamma,
            }
            F.seed = int(seed)
            return F
    raise ExhaustedSearch(f"no admissible parameters exist over F_{p * p}")

# ---------------------------------------------------------------------------
# Axiom sampling
# ---------------------------------------------------------------------------

def field_axiom_check(F: FieldContract, rng: np.random.Generator, trials: int = 1000) -> AuditReport:
    """Sample triples and check the field axioms exactly."""
    validate_positive(trials, "trials")
    report = AuditReport(f"field axioms on {F.name}", anchor="field axioms")
    counts = {"associativity": 0, "commutativity": 0, "distributivity": 0, "inverses": 0}
    for _ in range(trials):
        x, y, z = F.random(rng), F.random(rng), F.random(rng)
        if not (F.eq(F.add(F.add(x, y), z), F.add(x, F.add(y, z)))
                and F.eq(F.mul(F.mul(x, y), z), F.mul(x, F.mul(y, z)))):
            counts["associativity"] += 1
        if not (F.eq(F.add(x, y), F.add(y, x)) and F.eq(F.mul(x, y), F.mul(y, x))):
            counts["commutativity"] += 1
        if not F.eq(F.mul(x, F.add(y, z)), F.add(F.mul(x, y), F.mul(x, z))):
            counts["distributivity"] += 1
        if not F.is_zero(x) and not F.eq(F.mul(x, F.inv(x)), F.one):
            counts["inverses"] += 1
    for axiom, failures in counts.items():
        report.add(axiom, failures == 0, witness={"trials": trials, "failures": failures})

    if F.params:
        residual = constraint_residual(F)
        report.add("alpha+beta+gamma+alpha*beta*gamma = 0", F.is_zero(residual),
                   anchor="parameter constraint", witness=F.to_str(residual))
        squares = {"i": F.neg(F.one), "a": F.param("alpha"), "b": F.param("beta"), "c": F.param("gamma")}
        for root, square in squares.items():
            report.add(f"{root}^2", F.eq(F.mul(F.param(root), F.param(root)), square), anchor="parameter roots")
        excluded = [F.zero, F.one, F.neg(F.one)]
        report.add(
            "alpha, beta, gamma avoid {0, 1, -1}",
            all(not F.eq(F.param(n), e) for n in ("alpha", "beta", "gamma") for e in excluded),
            anchor="parameter exclusions",
        )
    return report
