import numpy as np
import pytest

from cpoly import (
    Poly,
    buchberger,
    dim_degree_from_monomials,
    groebner,
    hilbert_numerator,
    minors,
    normal_form,
    order_key,
    parse_poly,
    proj_dim_degree,
    saturate,
)
from scalar import PrimeSquareField, specialize_params


@pytest.fixture(scope="module")
def F():
    return PrimeSquareField(7)


def variables(F, n):
    return [Poly.variable(F, n, k) for k in range(n)]


def twisted_cubic(F):
    x0, x1, x2, x3 = variables(F, 4)
    return minors([[x0, x1, x2], [x1, x2, x3]], 2)


def test_arithmetic_and_evaluation(F):
    x, y = variables(F, 2)
    f = (x + y) ** 2
    assert f == x * x + (x * y).scale(2) + y * y
    assert f.evaluate([1, 2]) == 2  # 9 mod 7
    assert f.is_homogeneous() and f.degree() == 2
    assert not (f - f)


def test_orders():
    assert order_key("grevlex")((1, 0, 1)) < order_key("grevlex")((0, 2, 0))
    assert order_key("lex")((1, 0, 0)) > order_key("lex")((0, 5, 0))
    with pytest.raises(ValueError, match="Unknown monomial order"):
        order_key("weird")


def test_parse_poly_with_parameters():
    F = specialize_params(7, seed=0)
    f = parse_poly("alpha*x - y", ("x", "y"), F)
    assert f.terms[(1, 0)] == F.param("alpha")
    assert f.terms[(0, 1)] == F.neg(F.one)


def test_minors_of_generic_two_by_three(F):
    gens = twisted_cubic(F)
    assert len(gens) == 3
    assert all(g.is_homogeneous() and g.degree() == 2 for g in gens)
    with pytest.raises(ValueError):
        minors([[gens[0]]], 2)


def test_buchberger_basis_is_reduced(F):
    basis = buchberger(twisted_cubic(F))
    assert len(basis) == 3
    assert all(p.lc() == F.one for p in basis.polys)
    assert all(not normal_form(g, basis.polys) for g in twisted_cubic(F))


def test_engines_agree(F):
    a = groebner(twisted_cubic(F), engine="buchberger")
    b = groebner(twisted_cubic(F), engine="sympy")
    assert sorted(a.leading_monomials()) == sorted(b.leading_monomials())
    assert all(b.contains(p) for p in a.polys)
    with pytest.raises(ValueError, match="Unknown engine"):
        groebner(twisted_cubic(F), engine="magma")


def test_dimension_and_degree(F):
    x0, x1, x2, x3 = variables(F, 4)
    assert proj_dim_degree(twisted_cubic(F)) == (1, 3)
    assert proj_dim_degree([x0, x1]) == (1, 1)
    assert proj_dim_degree([x0 * x1 - x2 * x3]) == (2, 2)
    assert proj_dim_degree([x0, x1, x2, x3]) == (-1, 0)
    assert proj_dim_degree([Poly.constant(F, 4, F.one)]) == (-1, 0)
    with pytest.raises(ValueError, match="homogeneous"):
        proj_dim_degree([x0 + Poly.constant(F, 4, F.one)])


def test_hilbert_numerator_of_monomial_ideals():
    assert hilbert_numerator([(1, 0, 0)]).tolist() == [1, -1]
    assert hilbert_numerator([(2, 0), (0, 2)]).tolist() == [1, 0, -2, 0, 1]
    assert dim_degree_from_monomials([(1, 0, 0)]) == (1, 1)
    assert dim_degree_from_monomials([(2, 0, 0), (0, 2, 0)]) == (0, 4)


def test_saturation_removes_irrelevant_component(F):
    x0, x1, x2 = variables(F, 3)
    embedded = [x0 * x0, x0 * x1, x0 * x2]
    saturated = saturate(embedded, np.random.default_rng(3))
    basis = buchberger(saturated)
    assert basis.contains(x0)
    assert all(not normal_form(p, [x0]) for p in saturated)
