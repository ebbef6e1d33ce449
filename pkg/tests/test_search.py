import itertools

import pytest

from cyclicmub.exceptions import BudgetError, ValidationError
from cyclicmub.gf2 import BitMatrix, mat_pow
from cyclicmub.poly import Poly2, min_poly, poly_eval_matrix
from cyclicmub.search import (
    KNOWN_CORNERS,
    ansatz_b,
    enumerate_all,
    known_corner,
    permutation_orbit,
    permute_b,
    search_ansatz,
    staircase,
    symmetric_matrices,
)
from cyclicmub.symplectic import check_conditions

B4 = BitMatrix.from_strings(["1111", "1110", "1100", "1001"])
B3 = BitMatrix.from_strings(["111", "110", "100"])


def test_staircase_shape():
    assert staircase(5).to_strings() == ["11111", "11110", "11100", "11000", "10000"]


def test_ansatz_examples():
    assert ansatz_b(5, BitMatrix.zeros(2)) == staircase(5)
    assert ansatz_b(4, known_corner(4)) == B4
    # toggling the staircase's own corner block clears it
    s = staircase(5)
    block = BitMatrix.from_array([[s[3, 3], s[3, 4]], [s[4, 3], s[4, 4]]])
    b = ansatz_b(5, block)
    assert b[3, 3] == b[3, 4] == b[4, 3] == b[4, 4] == 0
    with pytest.raises(ValueError):
        ansatz_b(2, BitMatrix.zeros(3))
    with pytest.raises(ValidationError):
        ansatz_b(4, BitMatrix.from_strings(["01", "00"]))


def test_symmetric_matrix_order():
    mats = list(symmetric_matrices(2))
    assert len(mats) == 8
    assert mats[0].is_zero()
    assert mats[1] == BitMatrix.from_strings(["00", "01"])
    assert mats[-1] == BitMatrix.from_strings(["11", "11"])
    assert len(set(symmetric_matrices(3))) == 64


@pytest.mark.parametrize("m", range(4, 17))
def test_table_corner_in_search(m):
    res = search_ansatz(m)
    assert res.solutions
    assert res.has_corner(known_corner(m))
    assert all(s.report.all_ok for s in res.solutions)


def test_m12_needs_a_3x3_corner():
    res = search_ansatz(12, max_corner=2)
    assert not res.solutions and res.corner_sizes == [2]
    res = search_ansatz(12)
    assert res.corner_sizes == [2, 3]
    assert res.has_corner(known_corner(12))


def test_m8_corner():
    assert check_conditions(ansatz_b(8, BitMatrix.from_strings(["01", "11"]))).all_ok


def test_search_deterministic_across_workers():
    a = search_ansatz(9, workers=1).to_json()
    b = search_ansatz(9, workers=3).to_json()
    assert a == b


def test_budget_zero_times_out():
    res = search_ansatz(10, budget=0.0)
    assert res.timed_out and res.candidates_tested == 0


def test_known_corners_all_symmetric():
    assert sorted(KNOWN_CORNERS) == list(range(4, 25))
    for m in KNOWN_CORNERS:
        assert known_corner(m).is_symmetric()


@pytest.mark.parametrize("m,count", [(1, 1), (2, 2), (3, 6), (4, 96)])
def test_exhaustive_counts(m, count):
    assert len(enumerate_all(m).solutions) == count


def test_m1_single_solution():
    (sol,) = enumerate_all(1).solutions
    assert sol.b == BitMatrix.from_strings(["1"])


def test_exhaustive_refuses_large():
    with pytest.raises(BudgetError):
        enumerate_all(5)


def _order(b):
    eye = BitMatrix.identity(b.n_rows)
    p = b
    for k in range(1, 64):
        if p == eye:
            return k
        p = p @ b
    return None


def test_m4_split_by_annihilator():
    sols = [s.b for s in enumerate_all(4).solutions]
    quartic_a = Poly2.from_exponents([4, 1, 0])
    quartic_b = Poly2.from_exponents([4, 3, 2, 1, 0])
    first = [b for b in sols if poly_eval_matrix(quartic_a, b).is_zero()]
    second = [b for b in sols if poly_eval_matrix(quartic_b, b).is_zero()]
    assert len(first) == len(second) == 48
    assert set(first).isdisjoint(second)
    assert {_order(b) for b in first} == {15}
    assert {_order(b) for b in second} == {5}
    assert {min_poly(b) for b in first} == {quartic_a}
    assert {min_poly(b) for b in second} == {quartic_b}


def test_m4_orbit_representatives():
    reps_first = [
        BitMatrix.from_strings(["1111", "1110", "1101", "1010"]),
        BitMatrix.from_strings(["1110", "1000", "1001", "0011"]),
    ]
    reps_second = [B4, BitMatrix.from_strings(["1110", "1001", "1000", "0100"])]
    sols = {s.b for s in enumerate_all(4).solutions}
    covered = set()
    for r in reps_first + reps_second:
        orbit = permutation_orbit(r)
        assert len(orbit) == 24
        assert set(orbit) <= sols
        covered |= set(orbit)
    assert covered == sols
    assert all(mat_pow(r, 15).is_identity() for r in reps_first)
    assert all(mat_pow(r, 5).is_identity() for r in reps_second)


def test_permute_identity_and_errors():
    assert permute_b(B4, [0, 1, 2, 3]) == B4
    with pytest.raises(ValueError):
        permute_b(B4, [0, 1, 2])


def test_m3_orbit_equals_solution_set():
    orbit = permutation_orbit(B3)
    assert len(orbit) == 6
    assert set(orbit) == {s.b for s in enumerate_all(3).solutions}


@pytest.mark.parametrize("m", [2, 3, 4])
def test_solution_sets_closed_under_permutation(m):
    sols = {s.b for s in enumerate_all(m).solutions}
    for b in sols:
        for perm in itertools.permutations(range(m)):
            assert permute_b(b, perm) in sols


def test_result_json_has_no_timing_by_default():
    res = search_ansatz(5)
    assert "elapsed" not in res.to_json()
    assert "elapsed" in res.to_json(include_timing=True)
