"""Candidate enumeration for B.

For m >= 4 the candidates follow a staircase ansatz: beta_ij = 1 iff
i + j <= m + 1 (1-based), XOR a small symmetric corner A in the lower right.
Small m is searched exhaustively over all symmetric matrices.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from cyclicmub.exceptions import BudgetError, ShapeError, ValidationError
from cyclicmub.gf2 import BitMatrix, transpose
from cyclicmub.symplectic import ConditionReport, check_conditions

EXHAUSTIVE_MAX_M = 4

#: Corners reported for m = 4..24 as row-major rows.
KNOWN_CORNERS: dict[int, tuple[tuple[int, ...], ...]] = {
    4: ((0, 0), (0, 1)),
    5: ((0, 0), (0, 0)),
    6: ((0, 0), (0, 0)),
    7: ((0, 0), (0, 1)),
    8: ((0, 1), (1, 1)),
    9: ((0, 0), (0, 0)),
    10: ((1, 0), (0, 0)),
    11: ((0, 0), (0, 0)),
    12: ((0, 0, 1), (0, 0, 0), (1, 0, 0)),
    13: ((0, 0), (0, 1)),
    14: ((0, 0), (0, 0)),
    15: ((0, 1), (1, 1)),
    16: ((0, 0), (0, 1)),
    17: ((0, 0), (0, 1)),
    18: ((0, 0), (0, 0)),
    19: ((0, 0), (0, 1)),
    20: ((1, 0, 0), (0, 0, 0), (0, 0, 1)),
    21: ((0, 0, 1), (0, 0, 0), (1, 0, 0)),
    22: ((1, 0), (0, 0)),
    23: ((0, 0), (0, 0)),
    24: ((1, 0), (0, 1)),
}


def known_corner(m: int) -> BitMatrix:
    return BitMatrix.from_array(KNOWN_CORNERS[m])


def staircase(m: int) -> BitMatrix:
    return BitMatrix.from_row_ints([(1 << (m - i)) - 1 for i in range(m)], m)


def ansatz_b(m: int, corner: BitMatrix) -> BitMatrix:
    """Staircase XOR corner placed in the lower-right block."""
    s = corner.n_rows
    if not corner.is_square:
        raise ShapeError("corner must be square")
    if s > m:
        raise ValueError(f"corner of size {s} does not fit m = {m}")
    if not corner.is_symmetric():
        raise ValidationError("corner must be symmetric")
    rows = staircase(m).row_ints()
    for i, r in enumerate(corner.row_ints()):
        rows[m - s + i] ^= r << (m - s)
    return BitMatrix.from_row_ints(rows, m)


def symmetric_matrices(n: int) -> Iterator[BitMatrix]:
    """All symmetric n x n matrices; upper-triangle bits (row-major) count upwards."""
    slots = [(i, j) for i in range(n) for j in range(i, n)]
    for bits in itertools.product((0, 1), repeat=len(slots)):
        rows = [0] * n
        for (i, j), v in zip(slots, bits):
            if v:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
        yield BitMatrix.from_row_ints(rows, n)


def permute_b(b: BitMatrix, perm: Sequence[int]) -> BitMatrix:
    """P B P^T for the 0-based permutation ``perm``."""
    if len(perm) != b.n_rows or not b.is_square:
        raise ValueError("permutation size does not match B")
    p = BitMatrix.permutation(perm)
    return p @ b @ transpose(p)


def permutation_orbit(b: BitMatrix) -> list[BitMatrix]:
    """Distinct P B P^T over all permutations, in first-seen order."""
    seen: dict[BitMatrix, None] = {}
    for perm in itertools.permutations(range(b.n_rows)):
        seen.setdefault(permute_b(b, perm), None)
    return list(seen)


@dataclass(frozen=True)
class Solution:
    b: BitMatrix
    report: ConditionReport
    corner: BitMatrix | None = None

    def to_json(self) -> dict:
        return {
            "corner": self.corner.to_json() if self.corner is not None else None,
            "B": self.b.to_json(),
            "report": self.report.to_json(),
        }


@dataclass
class SearchResult:
    m: int
    strategy: str
    solutions: list[Solution] = field(default_factory=list)
    elapsed: float = 0.0
    timed_out: bool = False
    candidates_tested: int = 0
    corner_sizes: list[int] = field(default_factory=list)

    @property
    def canonical(self) -> Solution | None:
        return self.solutions[0] if self.solutions else None

    def has_corner(self, corner: BitMatrix) -> bool:
        return any(s.corner == corner for s in self.solutions)

    def to_json(self, include_timing: bool = False) -> dict:
        out = {
            "m": self.m,
            "strategy": self.strategy,
            "corner_sizes": self.corner_sizes,
            "candidates_tested": self.candidates_tested,
            "timed_out": self.timed_out,
            "solutions": [s.to_json() for s in self.solutions],
        }
        if include_timing:
            out["elapsed"] = round(self.elapsed, 6)
        return out


def _evaluate(candidates, deadline, workers, halved):
    """Reports in candidate order; None for candidates skipped after the deadline."""

    def run(b):
        if deadline is not None and time.perf_counter() > deadline:
            return None
        return check_conditions(b, halved=halved)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(run, candidates))
    return [run(b) for b in candidates]


def search_ansatz(
    m: int,
    max_corner: int = 3,
    budget: float | None = None,
    workers: int = 1,
    halved: bool = False,
    stop_at_first_size: bool = True,
) -> SearchResult:
    """Try every symmetric 2x2 corner, then 3x3, ... up to ``max_corner``."""
    if not 2 <= max_corner <= 4:
        raise ValueError("max_corner must be 2, 3 or 4")
    if m < 2:
        raise ValueError("the ansatz needs m >= 2")
    start = time.perf_counter()
    deadline = None if budget is None else start + budget
    res = SearchResult(m=m, strategy="ansatz")
    for size in range(2, min(max_corner, m) + 1):
        corners = list(symmetric_matrices(size))
        cands = [ansatz_b(m, a) for a in corners]
        reports = _evaluate(cands, deadline, workers, halved)
        res.corner_sizes.append(size)
        for a, b, rep in zip(corners, cands, reports):
            if rep is None:
                res.timed_out = True
                continue
            res.candidates_tested += 1
            if rep.all_ok:
                res.solutions.append(Solution(b, rep, a))
        if res.timed_out or (res.solutions and stop_at_first_size):
            break
    res.elapsed = time.perf_counter() - start
    return res


def enumerate_all(m: int, force: bool = False, workers: int = 1) -> SearchResult:
    """Every symmetric B in M_m(F2)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m > EXHAUSTIVE_MAX_M and not force:
        raise BudgetError(
            f"exhaustive search over 2^{m * (m + 1) // 2} matrices refused for m > {EXHAUSTIVE_MAX_M}"
        )
    start = time.perf_counter()
    cands = list(symmetric_matrices(m))
    reports = _evaluate(cands, None, workers, False)
    res = SearchResult(m=m, strategy="exhaustive", candidates_tested=len(cands))
    res.solutions = [Solution(b, r) for b, r in zip(cands, reports) if r.all_ok]
    res.elapsed = time.perf_counter() - start
    return res
