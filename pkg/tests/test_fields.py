import random

import numpy as np
import pytest

from mcmbetti.fields import (
    PrimeField,
    RationalField,
    column_reduce,
    field_from_token,
    kernel_basis,
    rank,
    solve_in_image,
)

F = PrimeField(32003)
Q = RationalField()


def test_empty_matrix():
    r, ker, piv = column_reduce(F.zeros(0, 0), F)
    assert r == 0 and ker.shape == (0, 0) and piv == []


def test_identity():
    r, ker, piv = column_reduce(F.identity(2), F)
    assert r == 2 and ker.shape[1] == 0 and piv == [0, 1]


def test_proportional_rows():
    m = np.array([[1, 2], [2, 4]], dtype=np.int64)
    r, ker, piv = column_reduce(m, F)
    assert r == 1 and ker.shape[1] == 1
    # kernel spanned by (2, -1)^T up to scale
    v = ker[:, 0]
    assert (2 * v[1] + v[0]) % F.p == 0 or (v[0] * 1 + 2 * v[1]) % F.p == 0
    assert np.all((m @ ker) % F.p == 0)


def test_solve_identity():
    x = solve_in_image(F.identity(2), np.array([5, 7]), F)
    assert list(x) == [5, 7]


def test_solve_not_in_image():
    assert solve_in_image(F.zeros(2, 2), np.array([1, 0]), F) is None


def test_solve_underdetermined():
    m = np.array([[1, 1], [0, 0]], dtype=np.int64)
    b = np.array([3, 0])
    x = solve_in_image(m, b, F)
    assert np.all((m @ x) % F.p == b % F.p)


@pytest.mark.parametrize("seed", range(8))
def test_random_rank_properties(seed):
    rng = random.Random(seed)
    rows, cols = rng.randint(1, 12), rng.randint(1, 12)
    m = np.array([[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)],
                 dtype=np.int64)
    assert rank(m, F) == rank(m.T, F)
    ker = kernel_basis(m, F)
    assert np.all((m @ ker) % F.p == 0)
    assert rank(m, F) + ker.shape[1] == cols
    # rank subadditivity on products
    k = rng.randint(1, 10)
    b = np.array([[rng.randint(-6, 6) for _ in range(k)] for _ in range(cols)],
                 dtype=np.int64)
    assert rank((m @ b) % F.p, F) <= min(rank(m, F), rank(b, F))


@pytest.mark.parametrize("seed", range(4))
def test_rank_agrees_with_rationals(seed):
    rng = random.Random(100 + seed)
    m = [[rng.randint(-9, 9) for _ in range(6)] for _ in range(5)]
    mp = np.array(m, dtype=np.int64)
    mq = Q.zeros(5, 6)
    for i in range(5):
        for j in range(6):
            mq[i, j] = Q.scalar(m[i][j])
    assert rank(mp, F) == rank(mq, Q)


def test_field_from_token():
    assert field_from_token("rational").is_rational
    assert field_from_token(31013).p == 31013
    with pytest.raises(ValueError):
        field_from_token(32004)
