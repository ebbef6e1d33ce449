import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclicmub.exceptions import ShapeError, SingularMatrixError
from cyclicmub.gf2 import (
    BitMatrix,
    block2x2,
    extract_blocks,
    hstack,
    inverse,
    invertible,
    mat_pow,
    rank,
    transpose,
    vstack,
)


def matrices(n_rows, n_cols):
    return st.lists(
        st.lists(st.integers(0, 1), min_size=n_cols, max_size=n_cols), min_size=n_rows, max_size=n_rows
    ).map(BitMatrix.from_array)


def det_brute(a: np.ndarray) -> int:
    """Leibniz expansion mod 2 (the permanent, which equals the determinant in F2)."""
    n = a.shape[0]
    total = 0
    for perm in itertools.permutations(range(n)):
        total ^= int(all(a[i, perm[i]] for i in range(n)))
    return total


def test_construction_roundtrip():
    rows = ["101", "011", "110"]
    a = BitMatrix.from_strings(rows)
    assert a.to_strings() == rows
    assert BitMatrix.from_json(a.to_json()) == a
    assert BitMatrix.from_array(a.to_array()) == a
    assert a[0, 2] == 1 and a[0, 1] == 0


def test_wide_matrices_cross_word_boundary():
    n = 130
    a = BitMatrix.identity(n)
    assert a.is_identity()
    assert rank(a) == n
    p = BitMatrix.permutation(list(range(1, n)) + [0])
    assert mat_pow(p, n).is_identity()
    assert not mat_pow(p, n - 1).is_identity()


def test_shape_errors():
    a = BitMatrix.zeros(2, 3)
    with pytest.raises(ShapeError):
        a @ a
    with pytest.raises(ShapeError):
        a + BitMatrix.zeros(3, 2)


def test_gl2_has_six_elements():
    count = sum(invertible(BitMatrix.from_array(np.array(bits).reshape(2, 2))) for bits in itertools.product((0, 1), repeat=4))
    assert count == 6


def test_invertibility_exhaustive_3x3():
    # |GL(3, 2)| = 168; every matrix checked against a brute-force determinant
    count = 0
    for bits in itertools.product((0, 1), repeat=9):
        arr = np.array(bits).reshape(3, 3)
        a = BitMatrix.from_array(arr)
        inv = invertible(a)
        assert inv == bool(det_brute(arr))
        if inv:
            count += 1
            assert (a @ inverse(a)).is_identity()
    assert count == 168


def test_inverse_of_singular_raises():
    with pytest.raises(SingularMatrixError):
        inverse(BitMatrix.from_strings(["11", "11"]))


def test_permutation_convention():
    p = BitMatrix.permutation([2, 0, 1])
    assert p[0, 2] == 1 and p[1, 0] == 1 and p[2, 1] == 1


def test_blocks_roundtrip():
    a, b, c, d = (BitMatrix.from_strings(r) for r in (["10", "01"], ["11", "00"], ["01", "01"], ["00", "10"]))
    big = block2x2(a, b, c, d)
    assert extract_blocks(big) == (a, b, c, d)
    assert big == vstack(hstack(a, b), hstack(c, d))


@settings(max_examples=60, deadline=None)
@given(matrices(5, 5), matrices(5, 5), matrices(5, 5))
def test_ring_axioms(a, b, c):
    assert (a @ b) @ c == a @ (b @ c)
    assert a @ (b + c) == a @ b + a @ c
    assert transpose(a @ b) == transpose(b) @ transpose(a)
    assert a + a == BitMatrix.zeros(5)


@settings(max_examples=60, deadline=None)
@given(matrices(7, 70))
def test_product_matches_integer_matmul(a):
    b = transpose(a)
    expect = (a.to_array().astype(np.int64) @ b.to_array().astype(np.int64)) % 2
    assert np.array_equal((a @ b).to_array(), expect)


@settings(max_examples=60, deadline=None)
@given(matrices(6, 6), st.integers(0, 40))
def test_pow_matches_repeated_product(a, k):
    expect = BitMatrix.identity(6)
    for _ in range(k):
        expect = expect @ a
    assert mat_pow(a, k) == expect


@settings(max_examples=60, deadline=None)
@given(matrices(4, 6))
def test_rank_bounds_and_transpose(a):
    r = rank(a)
    assert 0 <= r <= 4
    assert r == rank(transpose(a))
