import random

import pytest

from cyclicmub.exceptions import ShapeError, ValidationError
from cyclicmub.gf2 import BitMatrix, block2x2, hstack, invertible, mat_pow, transpose
from cyclicmub.poly import fib_poly, poly_eval_matrix
from cyclicmub.search import ansatz_b, known_corner, symmetric_matrices
from cyclicmub.symplectic import (
    ConditionReport,
    c_power_blocks,
    check_conditions,
    embed_c,
    generator,
    generators,
    is_symplectic,
    order_check,
    spans_disjoint,
)

B2 = BitMatrix.from_strings(["11", "10"])
B3 = BitMatrix.from_strings(["111", "110", "100"])


def random_symmetric(rng, m):
    rows = [0] * m
    for i in range(m):
        for j in range(i, m):
            if rng.getrandbits(1):
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    return BitMatrix.from_row_ints(rows, m)


def test_embed_c_small():
    c = embed_c(BitMatrix.from_strings(["1"]))
    assert c.mat == BitMatrix.from_strings(["11", "10"])
    assert is_symplectic(embed_c(B2))
    with pytest.raises(ValidationError):
        embed_c(BitMatrix.from_strings(["10", "11"]))


def test_is_symplectic_cases():
    assert is_symplectic(BitMatrix.identity(6))
    eye, zero = BitMatrix.identity(2), BitMatrix.zeros(2)
    forced = block2x2(BitMatrix.from_strings(["10", "11"]), eye, eye, zero)
    assert not is_symplectic(forced)
    c = embed_c(B3).mat
    assert is_symplectic(c @ c)
    assert is_symplectic(c @ embed_c(BitMatrix.from_strings(["011", "101", "110"])).mat)


def test_degenerate_zero_b():
    rep = check_conditions(BitMatrix.zeros(2))
    assert rep.symplectic_ok
    assert not rep.cond_ii_ok and rep.first_failing_j == 1


def test_generator_small_indices():
    m = 2
    eye, zero = BitMatrix.identity(m), BitMatrix.zeros(m)
    assert generator(1, B2).mat == hstack(zero, eye)
    assert generator(2, B2).mat == hstack(eye, zero)
    assert generator(3, B2).mat == hstack(B2, eye)
    with pytest.raises(ValueError):
        generator(0, B2)


def test_generators_match_closed_form():
    for b in (B2, B3, ansatz_b(5, known_corner(5))):
        for j, cj in enumerate(generators(b), start=1):
            assert cj.mat == generator(j, b).mat


def test_spans_disjoint_basics():
    c1, c2 = generators(B2, 2)
    assert spans_disjoint(c1, c2)
    assert not spans_disjoint(c1, c1)
    with pytest.raises(ShapeError):
        spans_disjoint(c1, generators(B3, 1)[0])


def test_m3_all_pairs_disjoint():
    gens = generators(B3)
    for j in range(len(gens)):
        for k in range(j + 1, len(gens)):
            assert spans_disjoint(gens[j], gens[k])
            assert invertible(poly_eval_matrix(fib_poly(k - j - 1), B3))


@pytest.mark.parametrize("m", range(1, 7))
def test_rank_criterion_matches_polynomial_criterion(m):
    rng = random.Random(m)
    cands = [random_symmetric(rng, m) for _ in range(6)]
    if m >= 4:
        cands.append(ansatz_b(m, known_corner(m)))
    for b in cands:
        gens = generators(b)
        for j in range(len(gens)):
            for k in range(j + 1, len(gens)):
                poly_side = invertible(poly_eval_matrix(fib_poly(k - j - 1), b))
                assert spans_disjoint(gens[j], gens[k]) == poly_side


def test_paper_small_cases_pass():
    for b in (BitMatrix.from_strings(["1"]), B2, B3):
        rep = check_conditions(b)
        assert rep.all_ok
        assert rep.first_failing_j is None


def test_identity_fails_at_two():
    rep = check_conditions(BitMatrix.identity(3))
    assert not rep.cond_ii_ok
    assert rep.first_failing_j == 2


def test_order_examples():
    assert order_check(BitMatrix.from_strings(["1"]))
    c = embed_c(B2).mat
    assert mat_pow(c, 5).is_identity() and order_check(B2)
    with pytest.raises(ValidationError):
        order_check(BitMatrix.from_strings(["10", "11"]))


@pytest.mark.parametrize("m", range(1, 7))
def test_power_block_form(m):
    rng = random.Random(100 + m)
    b = random_symmetric(rng, m)
    c = embed_c(b).mat
    p = BitMatrix.identity(2 * m)
    for n in range(1, (1 << m) + 1):
        p = p @ c
        assert p == c_power_blocks(b, n)


def test_conditions_imply_order_exhaustive_small():
    for m in range(1, 5):
        for b in symmetric_matrices(m):
            rep = check_conditions(b)
            assert rep.order_ok == order_check(b)
            if rep.cond_ii_ok and rep.cond_iii_ok:
                assert rep.order_ok


def test_conditions_imply_order_random_up_to_10():
    rng = random.Random(42)
    for m in range(5, 11):
        cands = [random_symmetric(rng, m) for _ in range(30)]
        cands.append(ansatz_b(m, known_corner(m)))
        for b in cands:
            rep = check_conditions(b)
            if rep.cond_ii_ok and rep.cond_iii_ok:
                assert rep.order_ok and order_check(b)


def test_order_does_not_imply_condition_ii():
    # C has order 3 for B = I, and 3 divides 9, yet f_2(I) = 0
    b = BitMatrix.identity(3)
    rep = check_conditions(b)
    assert rep.order_ok and rep.cond_iii_ok and rep.symmetric_ok
    assert not rep.cond_ii_ok


def test_non_symmetric_report():
    rep = check_conditions(BitMatrix.from_strings(["10", "11"]))
    assert not rep.symmetric_ok and not rep.symplectic_ok and not rep.all_ok


@pytest.mark.parametrize("m", range(4, 13))
def test_halved_and_matrix_routes_agree(m):
    b = ansatz_b(m, known_corner(m))
    assert check_conditions(b, halved=True) == check_conditions(b, cross_check=m <= 8)


def test_report_json_roundtrip():
    rep = check_conditions(BitMatrix.identity(3))
    assert ConditionReport.from_json(rep.to_json()) == rep
    ok = check_conditions(B2).to_json()
    assert "first_failing_j" not in ok


def test_generators_partition_small():
    for b in (B2, B3, ansatz_b(4, known_corner(4))):
        m = b.n_rows
        d = 1 << m
        seen = set()
        for cj in generators(b):
            rows = cj.mat.row_ints()
            span = {0}
            for r in rows:
                span |= {v ^ r for v in span}
            seen |= span - {0}
        assert len(seen) == d * d - 1
        assert all(transpose(g.mat).n_rows == 2 * m for g in generators(b, 2))
