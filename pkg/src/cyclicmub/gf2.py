"""Dense bit-packed matrices over GF(2).

Rows are packed little-endian into ``uint64`` words: bit ``j % 64`` of word
``j // 64`` holds column ``j``. Padding bits past ``n_cols`` are always zero,
so equality and hashing can work word-wise.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from cyclicmub import kernels
from cyclicmub.exceptions import ShapeError, SingularMatrixError

WORD = 64


def _n_words(n_cols: int) -> int:
    return (n_cols + WORD - 1) // WORD


class BitMatrix:
    """Immutable matrix over GF(2)."""

    __slots__ = ("n_rows", "n_cols", "words", "_hash")

    def __init__(self, n_rows: int, n_cols: int, words: np.ndarray):
        if n_rows < 1 or n_cols < 1:
            raise ShapeError(f"dimensions must be positive, got {n_rows}x{n_cols}")
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.shape != (n_rows, _n_words(n_cols)):
            raise ShapeError(f"word array shape {words.shape} does not fit {n_rows}x{n_cols}")
        tail = n_cols % WORD
        if tail:
            mask = np.uint64((1 << tail) - 1)
            if np.any(words[:, -1] & ~mask):
                words = words.copy()
                words[:, -1] &= mask
        words.setflags(write=False)
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.words = words
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_row_ints(cls, rows: Sequence[int], n_cols: int) -> BitMatrix:
        """Rows given as Python ints, bit j = column j."""
        nw = _n_words(n_cols)
        words = np.zeros((len(rows), nw), dtype=np.uint64)
        for i, r in enumerate(rows):
            if r < 0 or r >> n_cols:
                raise ShapeError(f"row {i} has bits beyond column {n_cols - 1}")
            for w in range(nw):
                words[i, w] = (r >> (WORD * w)) & 0xFFFFFFFFFFFFFFFF
        return cls(len(rows), n_cols, words)

    @classmethod
    def from_array(cls, arr: Iterable[Iterable[int]]) -> BitMatrix:
        a = np.asarray(arr, dtype=np.int64)
        if a.ndim != 2:
            raise ShapeError("expected a 2-d array")
        a = a & 1
        rows = [sum(1 << int(j) for j in np.flatnonzero(r)) for r in a]
        return cls.from_row_ints(rows, a.shape[1])

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> BitMatrix:
        """Row bitstrings, leftmost character = column 0."""
        if not rows:
            raise ShapeError("no rows")
        n_cols = len(rows[0])
        ints = []
        for s in rows:
            if len(s) != n_cols or set(s) - {"0", "1"}:
                raise ValueError(f"bad row bitstring {s!r}")
            ints.append(sum(1 << j for j, ch in enumerate(s) if ch == "1"))
        return cls.from_row_ints(ints, n_cols)

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int | None = None) -> BitMatrix:
        n_cols = n_rows if n_cols is None else n_cols
        return cls(n_rows, n_cols, np.zeros((n_rows, _n_words(n_cols)), dtype=np.uint64))

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_row_ints([1 << i for i in range(n)], n)

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> BitMatrix:
        """P with P[i, perm[i]] = 1 (perm is 0-based)."""
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"not a permutation: {perm}")
        return cls.from_row_ints([1 << p for p in perm], len(perm))

    # -- views --------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def row_ints(self) -> list[int]:
        out = []
        for r in self.words:
            v = 0
            for w in range(len(r) - 1, -1, -1):
                v = (v << WORD) | int(r[w])
            out.append(v)
        return out

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for i, r in enumerate(self.row_ints()):
            for j in range(self.n_cols):
                out[i, j] = (r >> j) & 1
        return out

    def to_strings(self) -> list[str]:
        return ["".join("1" if (r >> j) & 1 else "0" for j in range(self.n_cols)) for r in self.row_ints()]

    def to_json(self) -> dict:
        return {"rows": self.to_strings()}

    @classmethod
    def from_json(cls, obj: dict) -> BitMatrix:
        return cls.from_strings(obj["rows"])

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.n_rows and 0 <= j < self.n_cols):
            raise IndexError(ij)
        return int((self.words[i, j // WORD] >> np.uint64(j % WORD)) & np.uint64(1))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.words, other.words)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n_rows, self.n_cols, self.words.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        return f"BitMatrix({self.to_strings()})"

    def is_zero(self) -> bool:
        return not self.words.any()

    def is_identity(self) -> bool:
        return self.is_square and self == BitMatrix.identity(self.n_rows)

    def is_symmetric(self) -> bool:
        return self.is_square and self == transpose(self)

    # -- operators ----------------------------------------------------------

    def __add__(self, other: BitMatrix) -> BitMatrix:
        return mat_add(self, other)

    __sub__ = __add__

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        return mat_mul(self, other)

    @property
    def T(self) -> BitMatrix:
        return transpose(self)

    def __pow__(self, k: int) -> BitMatrix:
        return mat_pow(self, k)


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.n_cols != b.n_rows:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return BitMatrix(a.n_rows, b.n_cols, kernels.bitmat_mul(a.words, b.words, a.n_cols))


def mat_add(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.shape != b.shape:
        raise ShapeError(f"cannot add {a.shape} and {b.shape}")
    return BitMatrix(a.n_rows, a.n_cols, a.words ^ b.words)


def mat_pow(a: BitMatrix, k: int) -> BitMatrix:
    """Square-and-multiply power; ``k >= 0``."""
    if not a.is_square:
        raise ShapeError("power of a non-square matrix")
    if k < 0:
        raise ValueError("negative exponent; use inverse() first")
    result = BitMatrix.identity(a.n_rows)
    base = a
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def transpose(a: BitMatrix) -> BitMatrix:
    rows = a.row_ints()
    cols = []
    for j in range(a.n_cols):
        v = 0
        for i, r in enumerate(rows):
            if (r >> j) & 1:
                v |= 1 << i
        cols.append(v)
    return BitMatrix.from_row_ints(cols, a.n_rows)


def rank(a: BitMatrix) -> int:
    """Rank by elimination on a copy of the packed rows."""
    rows = a.row_ints()
    r = 0
    for col in range(a.n_cols):
        bit = 1 << col
        piv = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i] & bit:
                rows[i] ^= p
        r += 1
        if r == len(rows):
            break
    return r


def invertible(a: BitMatrix) -> bool:
    if not a.is_square:
        raise ShapeError(f"invertibility of non-square {a.shape}")
    return rank(a) == a.n_rows


def inverse(a: BitMatrix) -> BitMatrix:
    """Gauss-Jordan on [A | I]."""
    if not a.is_square:
        raise ShapeError(f"inverse of non-square {a.shape}")
    n = a.n_rows
    rows = [r | (1 << (n + i)) for i, r in enumerate(a.row_ints())]
    for col in range(n):
        bit = 1 << col
        piv = next((i for i in range(col, n) if rows[i] & bit), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular over GF(2)")
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col]
        for i in range(n):
            if i != col and rows[i] & bit:
                rows[i] ^= p
    return BitMatrix.from_row_ints([r >> n for r in rows], n)


def block2x2(a: BitMatrix, b: BitMatrix, c: BitMatrix, d: BitMatrix) -> BitMatrix:
    """Assemble [[a, b], [c, d]] from four m x m blocks."""
    m = a.n_rows
    for blk in (a, b, c, d):
        if blk.shape != (m, m):
            raise ShapeError("block2x2 expects four equal square blocks")
    top = [x | (y << m) for x, y in zip(a.row_ints(), b.row_ints())]
    bot = [x | (y << m) for x, y in zip(c.row_ints(), d.row_ints())]
    return BitMatrix.from_row_ints(top + bot, 2 * m)


def hstack(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.n_rows != b.n_rows:
        raise ShapeError("hstack needs equal row counts")
    return BitMatrix.from_row_ints(
        [x | (y << a.n_cols) for x, y in zip(a.row_ints(), b.row_ints())], a.n_cols + b.n_cols
    )


def vstack(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.n_cols != b.n_cols:
        raise ShapeError("vstack needs equal column counts")
    return BitMatrix.from_row_ints(a.row_ints() + b.row_ints(), a.n_cols)


def submatrix(a: BitMatrix, r0: int, r1: int, c0: int, c1: int) -> BitMatrix:
    mask = (1 << (c1 - c0)) - 1
    return BitMatrix.from_row_ints([(r >> c0) & mask for r in a.row_ints()[r0:r1]], c1 - c0)


def extract_blocks(a: BitMatrix) -> tuple[BitMatrix, BitMatrix, BitMatrix, BitMatrix]:
    """Inverse of :func:`block2x2`."""
    if not a.is_square or a.n_rows % 2:
        raise ShapeError("extract_blocks needs an even square matrix")
    m = a.n_rows // 2
    return (
        submatrix(a, 0, m, 0, m),
        submatrix(a, 0, m, m, 2 * m),
        submatrix(a, m, 2 * m, 0, m),
        submatrix(a, m, 2 * m, m, 2 * m),
    )
