import numpy as np
import pytest
from hypothesis import given, strategies as st

from persheaf import Field, identity, matrix, zeros

from oracles import rref_rank

PRIMES = [2, 5]


def small_matrix(p):
    return st.integers(0, 4).flatmap(
        lambda rows: st.integers(0, 4).flatmap(
            lambda cols: st.lists(
                st.lists(st.integers(0, p - 1), min_size=cols, max_size=cols),
                min_size=rows,
                max_size=rows,
            ).map(lambda body: np.array(body, dtype=np.int64).reshape(rows, cols))
        )
    )


def test_matrix_normalizes_mod_p():
    m = matrix([[7, -1], [5, 2]], 5)
    assert m.tolist() == [[2, 4], [0, 2]]
    assert m.dtype == np.int64


def test_field_rejects_composites():
    with pytest.raises(ValueError):
        Field(6)
    with pytest.raises(ValueError):
        Field(1)


def test_scalar_inverse():
    for p in PRIMES + [7, 11]:
        f = Field(p)
        for a in range(1, p):
            assert (f.inv(a) * a) % p == 1


def test_empty_shapes():
    f = Field(2)
    assert f.rank(zeros(0, 3)) == 0
    assert f.rank(zeros(3, 0)) == 0
    assert f.kernel_basis(zeros(0, 2)).shape == (2, 2)
    assert f.matmul(zeros(2, 0), zeros(0, 3)).shape == (2, 3)


@pytest.mark.parametrize("p", PRIMES)
@given(data=st.data())
def test_rank_matches_row_reduction(p, data):
    m = data.draw(small_matrix(p))
    f = Field(p)
    assert f.rank(m) == rref_rank(m, p)
    assert f.rank(m) == f.rank(m.T)


@pytest.mark.parametrize("p", PRIMES)
@given(data=st.data())
def test_kernel_and_image(p, data):
    m = data.draw(small_matrix(p))
    f = Field(p)
    ker = f.kernel_basis(m)
    img = f.image_basis(m)
    assert ker.shape[1] == m.shape[1] - f.rank(m)
    assert img.shape[1] == f.rank(m)
    assert not f.matmul(m, ker).any()
    assert f.rank(ker) == ker.shape[1]
    # image columns really are combinations of columns of m
    assert f.rank(np.hstack([m, img])) == f.rank(m)


@pytest.mark.parametrize("p", PRIMES)
@given(data=st.data())
def test_solve_recovers_consistent_systems(p, data):
    a = data.draw(small_matrix(p))
    f = Field(p)
    x = data.draw(
        st.lists(st.integers(0, p - 1), min_size=a.shape[1], max_size=a.shape[1])
    )
    x = np.array(x, dtype=np.int64)
    b = f.matmul(a, x.reshape(-1, 1))
    got = f.solve(a, b)
    assert got is not None
    assert np.array_equal(f.matmul(a, got), b)


def test_solve_reports_inconsistency():
    f = Field(2)
    assert f.solve(matrix([[1], [1]], 2), matrix([[1], [0]], 2)) is None


@pytest.mark.parametrize("p", PRIMES)
@given(data=st.data())
def test_invertibility(p, data):
    m = data.draw(small_matrix(p))
    f = Field(p)
    square = m.shape[0] == m.shape[1]
    assert f.is_invertible(m) == (square and f.rank(m) == m.shape[0])
    if f.is_invertible(m):
        inv = f.solve(m, identity(m.shape[0]))
        assert np.array_equal(f.matmul(m, inv), identity(m.shape[0]))


def test_express_splits_off_modulo_part():
    f = Field(5)
    span = matrix([[1, 0], [0, 1], [0, 0]], 5)
    modulo = matrix([[0], [0], [1]], 5)
    b = matrix([[2], [3], [4]], 5)
    c, d = f.express(b, span, modulo)
    assert c.ravel().tolist() == [2, 3]
    assert d.ravel().tolist() == [4]
    assert f.express(b, span) is None


def test_large_prime_matmul():
    p = 10007
    f = Field(p)
    a = matrix([[p - 1, p - 2], [3, 4]], p)
    b = matrix([[p - 1], [p - 3]], p)
    want = np.array([[(p - 1) * (p - 1) + (p - 2) * (p - 3)], [3 * (p - 1) + 4 * (p - 3)]]) % p
    assert np.array_equal(f.matmul(a, b), want)
