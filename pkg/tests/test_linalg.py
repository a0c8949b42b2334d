import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stab23 import linalg


def brute_span(rows, m):
    """Every Z/3^m-combination of the rows, as a set of tuples."""
    M = 3**m
    rows = [np.asarray(r, dtype=np.int64) % M for r in rows]
    out = set()
    for coeffs in itertools.product(range(M), repeat=len(rows)):
        v = np.zeros(len(rows[0]), dtype=np.int64)
        for c, r in zip(coeffs, rows):
            v = (v + c * r) % M
        out.add(tuple(int(x) for x in v))
    return out


small_entries = st.integers(min_value=0, max_value=26)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.lists(small_entries, min_size=3, max_size=3), min_size=1, max_size=3),
    st.integers(min_value=1, max_value=3),
)
def test_howell_preserves_span(rows, m):
    H = linalg.howell(rows, m)
    assert brute_span(rows, m) == brute_span(list(H.rows) or [[0, 0, 0]], m)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.lists(small_entries, min_size=3, max_size=3), min_size=1, max_size=3),
    st.lists(small_entries, min_size=3, max_size=3),
    st.integers(min_value=1, max_value=3),
)
def test_membership_matches_brute_force(rows, vec, m):
    H = linalg.howell(rows, m)
    expected = tuple(int(x) % 3**m for x in vec) in brute_span(rows, m)
    assert linalg.in_span(H, vec, m) == expected


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.lists(small_entries, min_size=3, max_size=3), min_size=2, max_size=3),
    st.integers(min_value=1, max_value=2),
)
def test_kernel_matches_brute_force(rows, m):
    M = 3**m
    A = np.array(rows, dtype=np.int64) % M
    ker = linalg.kernel(A, m)
    brute = {
        x
        for x in itertools.product(range(M), repeat=A.shape[1])
        if not (A @ np.array(x, dtype=np.int64) % M).any()
    }
    got = brute_span(list(ker) or [[0] * A.shape[1]], m)
    assert got == brute


def test_howell_is_idempotent_and_deterministic():
    rows = [[3, 6, 1, 0], [0, 3, 3, 3], [1, 1, 1, 1]]
    H1 = linalg.howell(rows, 2)
    H2 = linalg.howell(H1.rows, 2)
    assert np.array_equal(H1.rows, H2.rows)
    H3 = linalg.howell(rows, 2)
    assert np.array_equal(H1.rows, H3.rows)


def test_solve_round_trips():
    rng = np.random.default_rng(7)
    for m in (1, 2, 3):
        M = 3**m
        for _ in range(20):
            A = rng.integers(0, M, size=(4, 3)).astype(np.int64)
            x = rng.integers(0, M, size=3).astype(np.int64)
            b = (A @ x) % M
            got = linalg.solve(A, b, m)
            assert got is not None
            assert not ((A @ got - b) % M).any()


def test_solve_detects_inconsistency():
    A = np.array([[3, 0], [0, 3]], dtype=np.int64)
    assert linalg.solve(A, np.array([1, 0]), 2) is None


def test_quotient_invariants_simple():
    # R^2 / span{(3,0)} over Z/9 is Z/3 + Z/9
    K = np.eye(2, dtype=np.int64)
    I = np.array([[3, 0]], dtype=np.int64)
    assert linalg.quotient_invariants(K, I, 2) == [1, 2]
    # full quotient by itself is trivial
    assert linalg.quotient_invariants(K, K, 2) == []
    # K/0
    assert linalg.quotient_invariants(K, np.zeros((0, 2), dtype=np.int64), 2) == [2, 2]


def test_quotient_invariants_rejects_non_submodule():
    K = np.array([[3, 0]], dtype=np.int64)
    I = np.array([[1, 0]], dtype=np.int64)
    with pytest.raises(ValueError):
        linalg.quotient_invariants(K, I, 2)


def test_smith_kernel_saturates():
    # multiplication by 3 on Z/3^m has honest (Z_3) kernel zero
    A = np.array([[3]], dtype=np.int64)
    ker, divs = linalg.smith_kernel(A, 4)
    assert ker.shape[0] == 0
    assert divs == [1]
    # plain kernel would have seen 3^{m-1}
    plain = linalg.kernel(A, 4)
    assert plain.shape[0] == 1


def test_smith_kernel_cyclic_norm():
    # norm of C3 acting on Z3[C3]: kernel is the rank-2 augmentation-zero lattice
    J = np.ones((3, 3), dtype=np.int64)
    ker, _ = linalg.smith_kernel(J, 4)
    H = linalg.howell(ker, 4)
    assert H.log3_size(4) == 2 * 4  # free of rank 2
    S = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=np.int64)
    im = linalg.image(S - np.eye(3, dtype=np.int64), 4)
    # H^1(C3, Z3[C3]) = 0: saturated kernel equals the image of s-1
    assert linalg.span_contains(H, im.rows, 4)
    assert linalg.span_contains(im, ker, 4)


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.lists(small_entries, min_size=3, max_size=3), min_size=3, max_size=3),
    st.integers(min_value=1, max_value=2),
)
def test_smith_kernel_contains_plain_integer_kernel(rows, m):
    # every saturated-kernel row really kills the matrix
    M = 3**m
    A = np.array(rows, dtype=np.int64) % M
    ker, _ = linalg.smith_kernel(A, m)
    for r in ker:
        assert not ((A @ r) % M).any()


def test_free_rank():
    rows = np.array([[1, 0, 0], [0, 3, 0]], dtype=np.int64)
    assert linalg.free_rank(rows, 2) == 1
    assert linalg.free_rank(np.eye(3, dtype=np.int64), 2) == 3
