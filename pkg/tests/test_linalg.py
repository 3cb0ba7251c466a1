import numpy as np
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

from univext import linalg as la

P = 101

st_shape = st.tuples(st.integers(1, 6), st.integers(1, 6))
st_mat = st_shape.flatmap(lambda s: hnp.arrays(np.int64, s, elements=st.integers(0, P - 1)))


@given(a=st_mat)
def test_rank_nullity(a):
    null = la.nullspace(a, P)
    assert la.rank(a, P) + null.shape[1] == a.shape[1]
    assert not la.matmul(a, null, P).any()


@given(a=st_mat)
def test_rref_is_idempotent(a):
    r, piv = la.rref(a, P)
    r2, piv2 = la.rref(r, P)
    assert piv == piv2
    assert np.array_equal(r, r2)
    for row, c in enumerate(piv):
        assert r[row, c] == 1


@given(a=st_mat, x=st.data())
def test_solve_recovers_consistent_rhs(a, x):
    v = x.draw(hnp.arrays(np.int64, (a.shape[1], 1), elements=st.integers(0, P - 1)))
    b = la.matmul(a, v, P)
    sol = la.solve(a, b, P)
    assert sol is not None
    assert np.array_equal(la.matmul(a, sol, P), b)


@given(n=st.integers(1, 5), seed=st.integers(0, 10_000))
def test_inverse(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, P, (n, n))
    if la.rank(a, P) < n:
        return
    assert np.array_equal(la.matmul(la.inverse(a, P), a, P), np.eye(n, dtype=np.int64))


@given(a=st_mat)
def test_complement_spans(a):
    basis = la.column_basis(a, P)
    comp = la.complement(basis, a.shape[0], P)
    full = np.concatenate([basis, comp], axis=1)
    assert la.rank(full, P) == a.shape[0]


def test_complement_of_nothing():
    assert la.complement(np.zeros((3, 0), dtype=np.int64), 3, P).shape == (3, 3)


def test_inv_scalar():
    for x in range(1, P):
        assert x * la.inv_scalar(x, P) % P == 1
