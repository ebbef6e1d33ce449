"""Phase-free symplectic model of m-qubit Pauli operators.

A Pauli operator XZ(a) is identified with a = (a^x | a^z) in F2^{2m}, stored
as an int in the same layout as a BitMatrix row: bit k is a^x_{k+1} and
bit m + k is a^z_{k+1}. Products of operators correspond to XOR of vectors;
signs are not tracked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cyclicmub.exceptions import BudgetError, ShapeError
from cyclicmub.gf2 import BitMatrix, rank, transpose, vstack
from cyclicmub.symplectic import (
    GeneratorMatrix,
    check_conditions,
    generators,
    symplectic_form,
)

ENUMERATION_MAX_M = 12

_LETTERS = {(0, 0): "1", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS = {v: k for k, v in _LETTERS.items()}


@dataclass(frozen=True)
class PauliVec:
    m: int
    bits: int

    @classmethod
    def from_parts(cls, x: list[int], z: list[int]) -> PauliVec:
        if len(x) != len(z):
            raise ShapeError("x and z parts differ in length")
        m = len(x)
        v = 0
        for k in range(m):
            v |= (x[k] & 1) << k
            v |= (z[k] & 1) << (m + k)
        return cls(m, v)

    @classmethod
    def from_word(cls, word: str) -> PauliVec:
        """Parse a tensor word such as ``"XZ"`` or ``"Y1"``; qubit 1 is leftmost."""
        x, z = [], []
        for ch in word:
            bx, bz = _BITS[ch.upper()]
            x.append(bx)
            z.append(bz)
        return cls.from_parts(x, z)

    @property
    def x_part(self) -> list[int]:
        return [(self.bits >> k) & 1 for k in range(self.m)]

    @property
    def z_part(self) -> list[int]:
        return [(self.bits >> (self.m + k)) & 1 for k in range(self.m)]

    def is_identity(self) -> bool:
        return self.bits == 0

    def __add__(self, other: PauliVec) -> PauliVec:
        _same_m(self, other)
        return PauliVec(self.m, self.bits ^ other.bits)

    def word(self) -> str:
        return "".join(_LETTERS[(x, z)] for x, z in zip(self.x_part, self.z_part))

    def __str__(self) -> str:
        return self.word()


def _same_m(a: PauliVec, b: PauliVec) -> None:
    if a.m != b.m:
        raise ShapeError(f"Pauli vectors on {a.m} and {b.m} qubits")


def sympl_inner(a: PauliVec, b: PauliVec) -> int:
    """sum_i a^z_i b^x_i + a^x_i b^z_i (mod 2)."""
    _same_m(a, b)
    m = a.m
    low = (1 << m) - 1
    ax, az = a.bits & low, a.bits >> m
    bx, bz = b.bits & low, b.bits >> m
    return (bin(az & bx).count("1") + bin(ax & bz).count("1")) & 1


def commute(a: PauliVec, b: PauliVec) -> bool:
    return sympl_inner(a, b) == 0


def _span(rows: list[int]) -> np.ndarray:
    out = np.zeros(1, dtype=np.int64)
    for r in rows:
        out = np.concatenate([out, out ^ r])
    return out


def class_members(cj: GeneratorMatrix, force: bool = False) -> list[PauliVec]:
    """All 2^m vectors c . C_j, zero included, in binary-counter order of c."""
    if cj.m > ENUMERATION_MAX_M and not force:
        raise BudgetError(f"enumerating 2^{cj.m} class members refused for m > {ENUMERATION_MAX_M}")
    return [PauliVec(cj.m, int(v)) for v in _span(cj.mat.row_ints())]


def is_isotropic(cj: GeneratorMatrix) -> bool:
    """C_j J C_j^T = 0, i.e. every pair in the span commutes."""
    j = symplectic_form(cj.m)
    return (cj.mat @ j @ transpose(cj.mat)).is_zero()


def in_class(a: PauliVec, cj: GeneratorMatrix) -> bool:
    """Membership by rank: a lies in the row span iff appending it keeps the rank."""
    if a.m != cj.m:
        raise ShapeError("vector and generator matrix disagree on m")
    row = BitMatrix.from_row_ints([a.bits], 2 * a.m)
    return rank(vstack(cj.mat, row)) == rank(cj.mat)


def partition_verify(b: BitMatrix, enumerate_max_m: int = ENUMERATION_MAX_M) -> bool:
    """Do the spans of C_1 .. C_{d+1} partition F2^{2m} \\ {0} into isotropic classes?

    Up to ``enumerate_max_m`` every vector is counted. Beyond that the answer
    comes from the polynomial conditions: C symplectic keeps every class
    isotropic, condition ii makes the spans pairwise disjoint, and d + 1
    disjoint classes of d - 1 vectors exhaust the d^2 - 1 non-zero vectors.
    """
    m = b.n_rows
    if not b.is_square or not b.is_symmetric():
        return False
    if m > enumerate_max_m:
        rep = check_conditions(b)
        return rep.all_ok and is_isotropic(generators(b, 1)[0])
    d = 1 << m
    seen = np.zeros(d * d, dtype=np.uint8)
    for cj in generators(b):
        if not is_isotropic(cj):
            return False
        span = _span(cj.mat.row_ints())
        if len(np.unique(span)) != d:
            return False
        seen[span[1:]] += 1
    return bool(seen[0] == 0 and np.all(seen[1:] == 1))
