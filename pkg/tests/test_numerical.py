import numpy as np
import pytest

import numerical as la
from scalar import PrimeSquareField


@pytest.fixture(scope="module")
def F():
    return PrimeSquareField(7)


def test_prime_square_tables_agree_with_field(F):
    tables = la.prime_square_tables(7, F.nr)
    assert tables["mul"][F.element(2, 3), F.element(4, 1)] == F.mul(F.element(2, 3), F.element(4, 1))
    assert (tables["add"][np.arange(49), tables["neg"]] == 0).all()


def test_smallest_nonresidue():
    assert la.smallest_nonresidue(7) == 3
    assert la.smallest_nonresidue(11) == 2


def test_rref_rank_and_nullspace(F):
    M = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    R, pivots = la.rref(F, M)
    assert pivots == [0, 1]
    assert la.rank(F, M) == 2
    (v,) = la.nullspace(F, M)
    assert all(x == 0 for x in la.mat_vec(F, M, v))


def test_tower_path_matches_table_path(F, tower):
    M = [[tower.from_int(x) for x in row] for row in ([1, 2, 3], [2, 4, 6], [0, 1, 1])]
    assert la.rank(tower, M) == 2
    (v,) = la.nullspace(tower, M)
    assert all(tower.is_zero(x) for x in la.mat_vec(tower, M, v))


def test_det_and_inverse(F):
    M = [[2, 1], [1, 1]]
    assert la.det(F, M) == 1
    assert la.mat_eq(F, la.mat_mul(F, M, la.inverse(F, M)), la.identity(F, 2))
    with pytest.raises(ValueError, match="singular"):
        la.inverse(F, [[1, 2], [2, 4]])


def test_batch_det_matches_generic(F):
    rng = np.random.default_rng(0)
    mats = rng.integers(0, 49, size=(20, 4, 4))
    expected = [la.det(F, m.tolist()) for m in mats]
    assert la.batch_det(F, mats).tolist() == expected
    big = rng.integers(0, 49, size=(5, 5, 5))
    assert la.batch_det(F, big).tolist() == [la.det(F, m.tolist()) for m in big]


def test_batch_rank_below(F):
    full = la.identity(F, 4)
    low = [[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0]]
    mask = la.batch_rank_below(F, np.array([full, low]), 4)
    assert mask.tolist() == [False, True]


def test_in_span_and_normalize(F):
    basis = [[1, 0, 0], [0, 1, 0]]
    assert la.in_span(F, basis, [3, 5, 0])
    assert not la.in_span(F, basis, [0, 0, 1])
    assert la.normalize(F, [0, 3, 6]) == (0, 1, 2)
    with pytest.raises(ValueError):
        la.normalize(F, [0, 0])


def test_bilinear(F):
    Q = la.diag(F, [1, 2, 3])
    assert la.bilinear(F, Q, [1, 1, 1], [1, 1, 1]) == 6
