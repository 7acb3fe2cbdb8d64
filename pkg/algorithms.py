import timeit
from collections.abc import Iterator

import numpy as np

import numerical
from cpoly import buchberger, groebner_sympy

# ---------------------------------------------------------------------------
# Univariate polynomials (coefficient lists, lowest degree first)
# ---------------------------------------------------------------------------

def poly_trim(F, f: list) -> list:
    f = list(f)
    while f and F.is_zero(f[-1]):
        f.pop()
    return f


def poly_add(F, f: list, g: list) -> list:
    n = max(len(f), len(g))
    f = list(f) + [F.zero] * (n - len(f))
    g = list(g) + [F.zero] * (n - len(g))
    return poly_trim(F, [F.add(a, b) for a, b in zip(f, g)])


def poly_scale(F, c, f: list) -> list:
    return poly_trim(F, [F.mul(c, a) for a in f])


def poly_mul(F, f: list, g: list) -> list:
    if not f or not g:
        return []
    out = [F.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if F.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return poly_trim(F, out)


def poly_divmod(F, f: list, g: list) -> tuple[list, list]:
    """Long division f = q*g + r with deg r < deg g."""
    g = poly_trim(F, g)
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    r = poly_trim(F, f)
    q = [F.zero] * max(len(r) - len(g) + 1, 1)
    lead_inv = F.inv(g[-1])
    while len(r) >= len(g):
        shift = len(r) - len(g)
        c = F.mul(r[-1], lead_inv)
        q[shift] = c
        for k, b in enumerate(g):
            r[shift + k] = F.sub(r[shift + k], F.mul(c, b))
        r = poly_trim(F, r)
    return poly_trim(F, q), r


def poly_gcd(F, f: list, g: list) -> list:
    """
    Monic gcd by the Euclidean algorithm.

    Complexity:
        Time:  O(deg f * deg g) field operations
    """
    a, b = poly_trim(F, f), poly_trim(F, g)
    while b:
        a, b = b, poly_divmod(F, a, b)[1]
    return poly_scale(F, F.inv(a[-1]), a) if a else []


def poly_eval(F, f: list, x):
    acc = F.zero
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def poly_roots(F, f: list) -> list:
    """Roots of f in a finite field by exhaustive search."""
    f = poly_trim(F, f)
    if not f:
        raise ValueError("the zero polynomial has every element as a root")
    return [x for x in F.elements() if F.is_zero(poly_eval(F, f, x))]


def interpolate(F, xs: list, ys: list) -> list:
    """Lagrange interpolation through distinct nodes."""
    result: list = []
    for k, (xk, yk) in enumerate(zip(xs, ys)):
        basis, denom = [F.one], F.one
        for j, xj in enumerate(xs):
            if j == k:
                continue
            basis = poly_mul(F, basis, [F.neg(xj), F.one])
            denom = F.mul(denom, F.sub(xk, xj))
        result = poly_add(F, result, poly_scale(F, F.div(yk, denom), basis))
    return result

# ---------------------------------------------------------------------------
# Projective enumeration
# ---------------------------------------------------------------------------

def projective_points(F, n: int) -> Iterator[tuple]:
    """
    Normalized points of P^n over a finite field (first nonzero coordinate 1).

    Complexity:
        Time:  O(q^n) points
        Space: O(n) per point
    """
    q = F.q
    for lead in range(n + 1):
        tail = n - lead
        for code in range(q ** tail):
            rest = []
            for _ in range(tail):
                code, digit = divmod(code, q)
                rest.append(digit)
            yield (0,) * lead + (1,) + tuple(rest)


def projective_chunks(F, n: int, chunk: int = 65536) -> Iterator[np.ndarray]:
    """The same points as projective_points, as (m, n+1) int arrays."""
    q = F.q
    for lead in range(n + 1):
        tail = n - lead
        total = q ** tail
        for start in range(0, total, chunk):
            codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
            block = np.zeros((codes.size, n + 1), dtype=np.int64)
            block[:, lead] = 1
            for k in range(tail):
                codes, digits = np.divmod(codes, q)
                block[:, lead + 1 + k] = digits
            yield block


def projective_count(q: int, n: int) -> int:
    return sum(q**k for k in range(n + 1))

# ---------------------------------------------------------------------------
# Benchmarking helpers
# ---------------------------------------------------------------------------

def benchmark_rref(F, rows: int = 60, cols: int = 80, repeats: int = 3, seed: int = 0) -> dict:
    """Compare the table-driven RREF with the generic sparse elimination."""
    rng = np.random.default_rng(seed)
    M = [[F.random(rng) for _ in range(cols)] for _ in range(rows)]
    table_time = timeit.timeit(lambda: numerical.rref(F, M), number=repeats)
    generic_time = timeit.timeit(lambda: numerical._rref_sparse(F, M), number=repeats)
    return {
        "table_rref_ms": round(table_time / repeats * 1000, 4),
        "generic_rref_ms": round(generic_time / repeats * 1000, 4),
        "ranks_agree": numerical.rank(F, M) == len(numerical._rref_sparse(F, M)[1]),
    }


def benchmark_groebner(gens: list, repeats: int = 1) -> dict:
    """Compare the custom Buchberger with sympy.groebner on a prime-field system."""
    custom = buchberger(gens)
    reference = groebner_sympy(gens)
    custom_time = timeit.timeit(lambda: buchberger(gens), number=repeats)
    sympy_time = timeit.timeit(lambda: groebner_sympy(gens), number=repeats)
    return {
        "buchberger_ms": round(custom_time / repeats * 1000, 4),
        "sympy_groebner_ms": round(sympy_time / repeats * 1000, 4),
        "bases_agree": sorted(custom.leading_monomials()) == sorted(reference.leading_monomials())
        and all(reference.contains(g) for g in custom.polys)
        and all(custom.contains(g) for g in reference.polys),
    }
