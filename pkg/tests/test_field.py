from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from extriloc.field import Subspace, field
from oracles import kernel_size, span_dim

PRIMES = [2, 3, 5]


@st.composite
def small_matrix(draw, max_rows=3, max_cols=4):
    p = draw(st.sampled_from(PRIMES))
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return p, np.array(entries, dtype=np.int64).reshape(r, c)


def test_rejects_non_prime():
    with pytest.raises(ValueError):
        field(4)


def test_kernel_of_all_ones_f2():
    K = field(2).kernel([[1, 1], [1, 1]])
    assert K.shape == (1, 2)
    assert (K % 2).tolist() == [[1, 1]]


def test_solve_any_valid_solution():
    x = field(2).solve([[1, 1]], [1])
    assert x is not None and int(x.sum()) % 2 == 1


def test_solve_inconsistent():
    assert field(2).solve([[1, 1], [1, 1]], [1, 0]) is None


def test_intersection_e1e2_e2e3():
    U = Subspace.span(2, [[1, 0, 0], [0, 1, 0]], 3)
    V = Subspace.span(2, [[0, 1, 0], [0, 0, 1]], 3)
    W = U.intersect(V)
    assert W.dim == 1 and W.contains([0, 1, 0]) and not W.contains([1, 0, 0])


@settings(max_examples=60, deadline=None)
@given(small_matrix())
def test_rank_matches_enumerated_span(pm):
    p, a = pm
    assert field(p).rank(a) == span_dim(a, p)


@settings(max_examples=60, deadline=None)
@given(small_matrix())
def test_kernel_matches_enumeration(pm):
    p, a = pm
    F = field(p)
    K = F.kernel(a)
    assert not (F.matmul(a, K.T)).any()
    assert p ** K.shape[0] == kernel_size(a, p)


@settings(max_examples=60, deadline=None)
@given(small_matrix(max_rows=3, max_cols=3), st.data())
def test_solve_is_exact(pm, data):
    p, a = pm
    x0 = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=a.shape[1],
                                     max_size=a.shape[1])))
    b = (a @ x0) % p
    x = field(p).solve(a, b)
    assert x is not None and np.array_equal((a @ x) % p, b)


@settings(max_examples=40, deadline=None)
@given(small_matrix(max_rows=3, max_cols=3))
def test_inverse_round_trip(pm):
    p, a = pm
    F = field(p)
    if a.shape[0] != a.shape[1] or not F.is_invertible(a):
        return
    assert np.array_equal(F.matmul(a, F.inverse(a)), np.eye(a.shape[0], dtype=np.int64))


@settings(max_examples=40, deadline=None)
@given(small_matrix(max_rows=2, max_cols=3), small_matrix(max_rows=2, max_cols=3))
def test_intersection_dimension_formula(m1, m2):
    p, a = m1
    if m2[0] != p or m2[1].shape[1] != a.shape[1]:
        return
    U = Subspace.span(p, a, a.shape[1])
    V = Subspace.span(p, m2[1], a.shape[1])
    assert U.intersect(V).dim == U.dim + V.dim - (U + V).dim
    for row in U.intersect(V).basis:
        assert U.contains(row) and V.contains(row)
