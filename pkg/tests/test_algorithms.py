import numpy as np
import pytest

from algorithms import (
    benchmark_groebner,
    benchmark_rref,
    interpolate,
    poly_divmod,
    poly_eval,
    poly_gcd,
    poly_mul,
    poly_roots,
    projective_chunks,
    projective_count,
    projective_points,
)
from cpoly import parse_poly
from scalar import PrimeSquareField


@pytest.fixture(scope="module")
def F():
    return PrimeSquareField(5)


def test_divmod_reconstructs(F):
    f = [1, 2, 3, 4]
    g = [2, 1]
    q, r = poly_divmod(F, f, g)
    lhs = poly_mul(F, q, g)
    lhs = [F.add(a, b) for a, b in zip(lhs + [0] * 4, r + [0] * 4)][:4]
    assert lhs == f
    with pytest.raises(ZeroDivisionError):
        poly_divmod(F, f, [0])


def test_gcd_is_monic(F):
    # (x - 1)(x - 2) and (x - 1)(x + 1)
    f = poly_mul(F, [F.neg(1), 1], [F.neg(2), 1])
    g = poly_mul(F, [F.neg(1), 1], [1, 1])
    assert poly_gcd(F, f, g) == [F.neg(1), 1]
    assert poly_gcd(F, [], [2, 2]) == [1, 1]


def test_roots_are_exhaustive(F):
    f = poly_mul(F, [F.neg(1), 1], [F.neg(3), 1])
    assert poly_roots(F, f) == [1, 3]
    with pytest.raises(ValueError):
        poly_roots(F, [0, 0])


def test_interpolate_through_nodes(F):
    xs, ys = [0, 1, 2], [4, 0, 3]
    f = interpolate(F, xs, ys)
    assert [poly_eval(F, f, x) for x in xs] == ys


def test_projective_points_count_and_normalization(F):
    pts = list(projective_points(F, 2))
    assert len(pts) == projective_count(25, 2) == 651
    assert len(set(pts)) == len(pts)
    assert all(next(x for x in p if x) == 1 for p in pts)
    chunks = np.vstack(list(projective_chunks(F, 2, chunk=100)))
    assert [tuple(r) for r in chunks.tolist()] == pts


def test_benchmarks_agree():
    F = PrimeSquareField(7)
    assert benchmark_rref(F, rows=8, cols=10, repeats=1)["ranks_agree"]
    gens = [parse_poly(t, ("x", "y", "z"), F) for t in ("x**2 - y*z", "x*y - z**2", "y**2 - x*z")]
    result = benchmark_groebner(gens)
    assert result["bases_agree"]
    assert result["buchberger_ms"] >= 0
