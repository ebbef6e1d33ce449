"""Exact unitaries over Z[zeta_8], zeta = exp(i pi / 4).

Values carry a power-of-sqrt(2) denominator: a scaled entry is N / sqrt(2)^s
with N in Z[zeta_8], and sqrt(2) = zeta - zeta^3 lives in the ring. Matrices
share one scale exponent, which is kept minimal after every product so that
representations are canonical and integers stay small.

The generator of the cyclic set is U = H^{(x)m} diag(p) e^{i psi}, where
p_j = i^{b.j} (-1)^{sum_k j_k (B_k . j_{->k})} and e^{i psi} is zeta^3 for
odd m and i for even m.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cyclicmub import kernels
from cyclicmub.exceptions import BudgetError, ConjectureError, ShapeError, ValidationError
from cyclicmub.gf2 import BitMatrix

DENSE_MAX_M = 10
PHASE_MAX_M = 14
VERIFY_MAX_M = 6

_INT64_SAFE = 1 << 62


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cyc8:
    """c0 + c1 zeta + c2 zeta^2 + c3 zeta^3."""

    c0: int = 0
    c1: int = 0
    c2: int = 0
    c3: int = 0

    @classmethod
    def zeta_pow(cls, k: int) -> Cyc8:
        k %= 8
        coeffs = [0, 0, 0, 0]
        coeffs[k % 4] = 1 if k < 4 else -1
        return cls(*coeffs)

    @classmethod
    def gaussian(cls, re: int, im: int) -> Cyc8:
        return cls(re, 0, im, 0)

    @property
    def coeffs(self) -> tuple[int, int, int, int]:
        return (self.c0, self.c1, self.c2, self.c3)

    def __add__(self, o: Cyc8) -> Cyc8:
        return Cyc8(*(a + b for a, b in zip(self.coeffs, o.coeffs)))

    def __sub__(self, o: Cyc8) -> Cyc8:
        return Cyc8(*(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __neg__(self) -> Cyc8:
        return Cyc8(-self.c0, -self.c1, -self.c2, -self.c3)

    def __mul__(self, o: Cyc8) -> Cyc8:
        return cyc8_mul(self, o)

    def conj(self) -> Cyc8:
        return Cyc8(self.c0, -self.c3, -self.c2, -self.c1)

    def norm2(self) -> Cyc8:
        return self * self.conj()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def in_gaussian(self) -> bool:
        return self.c1 == 0 and self.c3 == 0

    def to_complex(self) -> complex:
        z = np.exp(1j * np.pi / 4)
        return complex(self.c0 + self.c1 * z + self.c2 * z**2 + self.c3 * z**3)

    def to_json(self) -> list[int]:
        return list(self.coeffs)


def cyc8_mul(a: Cyc8, b: Cyc8) -> Cyc8:
    a0, a1, a2, a3 = a.coeffs
    b0, b1, b2, b3 = b.coeffs
    return Cyc8(
        a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1,
        a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2,
        a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3,
        a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
    )


SQRT2 = Cyc8(0, 1, 0, -1)
ONE = Cyc8(1)


def _times_sqrt2(c: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
    a0, a1, a2, a3 = c
    return (a1 - a3, a0 + a2, a1 + a3, a2 - a0)


@dataclass(frozen=True)
class ScaledCyc8:
    """value / sqrt(2)^scale_exp, kept with minimal scale_exp >= 0."""

    value: Cyc8
    scale_exp: int = 0

    def normalized(self) -> ScaledCyc8:
        c, s = self.value.coeffs, self.scale_exp
        while s > 0:
            t = _times_sqrt2(c)
            if any(x % 2 for x in t):
                break
            c, s = tuple(x // 2 for x in t), s - 1
        if not any(c):
            s = 0
        return ScaledCyc8(Cyc8(*c), s)

    def __mul__(self, o: ScaledCyc8) -> ScaledCyc8:
        return ScaledCyc8(self.value * o.value, self.scale_exp + o.scale_exp).normalized()

    def __eq__(self, o: object) -> bool:
        if not isinstance(o, ScaledCyc8):
            return NotImplemented
        a, b = self.normalized(), o.normalized()
        return a.value == b.value and a.scale_exp == b.scale_exp

    def __hash__(self) -> int:
        n = self.normalized()
        return hash((n.value, n.scale_exp))

    def conj(self) -> ScaledCyc8:
        return ScaledCyc8(self.value.conj(), self.scale_exp)

    def is_unimodular(self) -> bool:
        # |N|^2 = 2^s
        return self.value.norm2() == Cyc8(1 << self.scale_exp)

    def to_complex(self) -> complex:
        return self.value.to_complex() / np.sqrt(2.0) ** self.scale_exp

    def to_json(self) -> dict:
        n = self.normalized()
        return {"value": n.value.to_json(), "scale_exp": n.scale_exp}

    @classmethod
    def from_json(cls, obj: dict) -> ScaledCyc8:
        return cls(Cyc8(*obj["value"]), int(obj["scale_exp"]))

    def render(self) -> str:
        return render_entry(self.value.coeffs, self.scale_exp)


def render_entry(c, s: int) -> str:
    """``(a+bi)/2^k`` for Gaussian-rational entries, else zeta coefficients."""
    c = tuple(int(x) for x in c)
    if s % 2:
        c, s = _times_sqrt2(c), s + 1
    if c[1] == 0 and c[3] == 0:
        re, im = c[0], c[2]
        num = f"({re}{'+' if im >= 0 else '-'}{abs(im)}i)"
        return num if s == 0 else f"{num}/2^{s // 2}"
    return f"[{c[0]},{c[1]},{c[2]},{c[3]}]/sqrt2^{s}"


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


def _conj_array(e: np.ndarray) -> np.ndarray:
    return np.stack([e[0], -e[3], -e[2], -e[1]])


def _emul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Entrywise product of (4, ...) coefficient arrays."""
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return np.stack(
        [
            a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1,
            a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2,
            a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3,
            a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
        ]
    )


class Cyc8Matrix:
    """d x d matrix entries / sqrt(2)^scale_exp, entries stored as (4, d, d) int64."""

    __slots__ = ("entries", "scale_exp")

    def __init__(self, entries: np.ndarray, scale_exp: int = 0, normalize: bool = True):
        entries = np.asarray(entries, dtype=np.int64)
        if entries.ndim != 3 or entries.shape[0] != 4 or entries.shape[1] != entries.shape[2]:
            raise ShapeError(f"expected (4, d, d) coefficients, got {entries.shape}")
        if scale_exp < 0:
            raise ValueError("scale exponent must be non-negative")
        self.entries = entries
        self.scale_exp = int(scale_exp)
        if normalize:
            self._normalize()

    @property
    def dim(self) -> int:
        return self.entries.shape[1]

    @classmethod
    def identity(cls, d: int) -> Cyc8Matrix:
        e = np.zeros((4, d, d), dtype=np.int64)
        e[0] = np.eye(d, dtype=np.int64)
        return cls(e, 0)

    @classmethod
    def from_gaussian(cls, re, im, scale_exp: int = 0) -> Cyc8Matrix:
        re = np.asarray(re, dtype=np.int64)
        im = np.asarray(im, dtype=np.int64)
        z = np.zeros_like(re)
        return cls(np.stack([re, z, im, z]), scale_exp)

    def _normalize(self) -> None:
        e, s = self.entries, self.scale_exp
        while s > 0:
            t = np.stack([e[1] - e[3], e[0] + e[2], e[1] + e[3], e[2] - e[0]])
            if np.any(t & 1):
                break
            e, s = t >> 1, s - 1
        if not e.any():
            s = 0
        self.entries, self.scale_exp = e, s

    def __matmul__(self, other: Cyc8Matrix) -> Cyc8Matrix:
        if self.dim != other.dim:
            raise ShapeError("dimension mismatch")
        bound = int(np.abs(self.entries).max(initial=0)) * int(np.abs(other.entries).max(initial=0))
        if bound * self.dim * 4 >= _INT64_SAFE:
            raise OverflowError("Z[zeta_8] matrix product would overflow int64")
        prod = kernels.cyc8_matmul(self.entries, other.entries)
        return Cyc8Matrix(prod, self.scale_exp + other.scale_exp)

    def scalar_mul(self, z: ScaledCyc8) -> Cyc8Matrix:
        c = np.array(z.value.coeffs, dtype=np.int64).reshape(4, 1, 1)
        return Cyc8Matrix(_emul(self.entries, np.broadcast_to(c, self.entries.shape)), self.scale_exp + z.scale_exp)

    def __neg__(self) -> Cyc8Matrix:
        return Cyc8Matrix(-self.entries, self.scale_exp, normalize=False)

    def dagger(self) -> Cyc8Matrix:
        return Cyc8Matrix(_conj_array(self.entries).transpose(0, 2, 1).copy(), self.scale_exp, normalize=False)

    def trace(self) -> ScaledCyc8:
        t = np.trace(self.entries, axis1=1, axis2=2)
        return ScaledCyc8(Cyc8(*(int(x) for x in t)), self.scale_exp).normalized()

    def entry(self, i: int, j: int) -> ScaledCyc8:
        return ScaledCyc8(Cyc8(*(int(x) for x in self.entries[:, i, j])), self.scale_exp).normalized()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cyc8Matrix):
            return NotImplemented
        return self.scale_exp == other.scale_exp and np.array_equal(self.entries, other.entries)

    __hash__ = None

    def is_identity(self) -> bool:
        return self == Cyc8Matrix.identity(self.dim)

    def abs2_numerators(self) -> np.ndarray:
        """N * conj(N) entrywise, shape (4, d, d)."""
        return _emul(self.entries, _conj_array(self.entries))

    def is_unitary(self) -> bool:
        return (self @ self.dagger()).is_identity()

    def to_complex(self) -> np.ndarray:
        z = np.exp(1j * np.pi / 4) ** np.arange(4)
        return np.tensordot(z, self.entries, axes=1) / np.sqrt(2.0) ** self.scale_exp

    def render(self) -> list[list[str]]:
        return [
            [render_entry(self.entries[:, i, j], self.scale_exp) for j in range(self.dim)]
            for i in range(self.dim)
        ]

    def to_json(self) -> dict:
        return {"dim": self.dim, "scale_exp": self.scale_exp, "entries": self.entries.transpose(1, 2, 0).tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> Cyc8Matrix:
        e = np.asarray(obj["entries"], dtype=np.int64).transpose(2, 0, 1)
        return cls(e, int(obj["scale_exp"]))


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhaseVector:
    """p_j = i^exps[j]; index j is big-endian in the qubits (qubit 1 = MSB)."""

    exps: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.exps)

    def labels(self) -> list[str]:
        return [("1", "i", "-1", "-i")[e] for e in self.exps]


def _reverse_bits(j: np.ndarray, m: int) -> np.ndarray:
    out = np.zeros_like(j)
    for k in range(m):
        out |= ((j >> k) & 1) << (m - 1 - k)
    return out


def _popcount(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.uint64)
    c = np.zeros(a.shape, dtype=np.int64)
    while np.any(a):
        c += (a & np.uint64(1)).astype(np.int64)
        a = a >> np.uint64(1)
    return c


def phase_vector(b: BitMatrix) -> PhaseVector:
    """Diagonal phases of U from B (exponents of i)."""
    if not b.is_square:
        raise ShapeError("B must be square")
    if not b.is_symmetric():
        raise ValidationError("B has to be symmetric")
    m = b.n_rows
    if m > PHASE_MAX_M:
        raise BudgetError(f"phase vector of length 2^{m} refused for m > {PHASE_MAX_M}")
    idx = np.arange(1 << m, dtype=np.int64)
    # vec bit c holds j_{c+1}, matching BitMatrix column c
    vec = _reverse_bits(idx, m)
    rows = b.row_ints()
    diag = sum(((rows[k] >> k) & 1) << k for k in range(m))
    exps = _popcount(vec & diag)
    sign = np.zeros_like(idx)
    for k in range(m):
        jk = (vec >> k) & 1
        prefix = vec & ((1 << (k + 1)) - 1)
        sign += jk * _popcount(prefix & rows[k])
    return PhaseVector(tuple(int(e) for e in (exps + 2 * sign) % 4))


def global_phase(m: int) -> ScaledCyc8:
    """Closed-form phase: (-1+i)/sqrt(2) = zeta^3 for odd m, i for even m."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return ScaledCyc8(Cyc8.zeta_pow(3 if m % 2 else 2), 0)


def global_phase_trace(p: PhaseVector, m: int) -> ScaledCyc8:
    """-tr(H^{(x)m} diag(conj p)), which makes tr U = -1.

    Raises ConjectureError when the result is not unimodular.
    """
    if p.dim != 1 << m:
        raise ShapeError("phase vector length is not 2^m")
    # diagonal of H^{(x)m} is (-1)^{popcount(j)} / sqrt(2)^m; conj(i^e) = i^{-e}
    re = im = 0
    for j, e in enumerate(p.exps):
        s = -1 if bin(j).count("1") % 2 else 1
        e = (-e) % 4
        if e == 0:
            re += s
        elif e == 1:
            im += s
        elif e == 2:
            re -= s
        else:
            im -= s
    val = ScaledCyc8(Cyc8.gaussian(-re, -im), m).normalized()
    if not val.is_unimodular():
        raise ConjectureError(f"trace-derived global phase {val.to_complex():.6g} is not unimodular")
    return val


def build_u(b: BitMatrix, phase: ScaledCyc8 | None = None) -> Cyc8Matrix:
    """U = H^{(x)m} diag(p) e^{i psi}, exactly.

    ``phase`` defaults to the closed form :func:`global_phase`.
    """
    m = b.n_rows
    if m > DENSE_MAX_M:
        raise BudgetError(f"dense U of size 2^{m} refused for m > {DENSE_MAX_M}")
    p = phase_vector(b)
    u = _hadamard_diag(np.array(p.exps, dtype=np.int64), m)
    g = global_phase(m) if phase is None else phase
    return u.scalar_mul(g)


def _hadamard_diag(exps: np.ndarray, m: int) -> Cyc8Matrix:
    d = 1 << m
    idx = np.arange(d, dtype=np.int64)
    hsign = _popcount(idx[:, None] & idx[None, :]) % 2
    # zeta power of each entry: (-1)^{<r,c>} i^{e_c} = zeta^{4<r,c> + 2 e_c}
    k = (4 * hsign + 2 * exps[None, :]) % 8
    e = np.zeros((4, d, d), dtype=np.int64)
    for t in range(8):
        mask = k == t
        e[t % 4][mask] = 1 if t < 4 else -1
    return Cyc8Matrix(e, m)


def unitary_pow(u: Cyc8Matrix, k: int) -> Cyc8Matrix:
    if k < 0:
        raise ValueError("negative power")
    result = Cyc8Matrix.identity(u.dim)
    base = u
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CyclicReport:
    cyclic_ok: bool
    unbiased_ok: bool
    first_biased_power: int | None
    dim: int

    @property
    def ok(self) -> bool:
        return self.cyclic_ok and self.unbiased_ok


@dataclass(frozen=True)
class SpectrumReport:
    ok: bool
    traces: tuple[ScaledCyc8, ...]
    first_bad_power: int | None


def _log2_dim(u: Cyc8Matrix) -> int:
    d = u.dim
    if d & (d - 1):
        raise ShapeError("dimension is not a power of two")
    return d.bit_length() - 1


def _is_flat(p: Cyc8Matrix, m: int) -> bool:
    """Every entry has |z|^2 = 1/2^m exactly."""
    if p.scale_exp < m:
        return False
    n2 = p.abs2_numerators()
    return bool(np.all(n2[0] == 1 << (p.scale_exp - m)) and not n2[1:].any())


def _check_size(u: Cyc8Matrix, force: bool) -> int:
    m = _log2_dim(u)
    if m > VERIFY_MAX_M and not force:
        raise BudgetError(f"exact power sweep refused for m > {VERIFY_MAX_M}")
    return m


def verify_cyclic_mub(u: Cyc8Matrix, force: bool = False) -> CyclicReport:
    """U^{d+1} = I and every U^t (1 <= t <= d) is flat.

    Entry (i, j) of U^{l-k} is the overlap of vector i of basis k with vector j
    of basis l, so flatness of the d powers covers every pair of bases.
    """
    return sweep(u, force)[0]


def spectrum_check(u: Cyc8Matrix, force: bool = False) -> SpectrumReport:
    """tr U^t = -1 for t = 1..d, forcing eigenvalues = all (d+1)-th roots of unity but 1."""
    return sweep(u, force)[1]


def sweep(u: Cyc8Matrix, force: bool = False) -> tuple[CyclicReport, SpectrumReport]:
    """One pass over U, U^2, ..., U^{d+1} feeding both reports."""
    m = _check_size(u, force)
    d = u.dim
    minus_one = ScaledCyc8(Cyc8(-1), 0)
    traces = []
    first_biased = None
    first_bad_trace = None
    p = u
    for t in range(1, d + 1):
        if first_biased is None and not _is_flat(p, m):
            first_biased = t
        tr = p.trace()
        traces.append(tr)
        if first_bad_trace is None and tr != minus_one:
            first_bad_trace = t
        p = p @ u
    cyclic = p.is_identity()
    return (
        CyclicReport(cyclic, first_biased is None, first_biased, d),
        SpectrumReport(first_bad_trace is None, tuple(traces), first_bad_trace),
    )


def entries_root_order(u: Cyc8Matrix) -> int | None:
    """Smallest n in {4, 8} with sqrt(d) * u_ij an n-th root of unity for every entry, else None."""
    m = _log2_dim(u)
    if u.scale_exp > m:
        return None
    e = u.entries
    for _ in range(m - u.scale_exp):
        e = np.stack([e[1] - e[3], e[0] + e[2], e[1] + e[3], e[2] - e[0]])
    # a power of zeta has exactly one non-zero coefficient, equal to +-1
    nz = (e != 0).sum(axis=0)
    if not (np.all(nz == 1) and np.all(np.abs(e).sum(axis=0) == 1)):
        return None
    return 4 if not (e[1].any() or e[3].any()) else 8


def pauli_operator(word_x: list[int], word_z: list[int]) -> Cyc8Matrix:
    """XZ(a) = (x) i^{x_k z_k} X^{x_k} Z^{z_k}; qubit 1 is the most significant factor."""
    re = np.ones((1, 1), dtype=np.int64)
    im = np.zeros((1, 1), dtype=np.int64)
    for x, z in zip(word_x, word_z):
        if (x, z) == (0, 0):
            fr, fi = np.eye(2, dtype=np.int64), np.zeros((2, 2), dtype=np.int64)
        elif (x, z) == (1, 0):
            fr, fi = np.array([[0, 1], [1, 0]]), np.zeros((2, 2), dtype=np.int64)
        elif (x, z) == (0, 1):
            fr, fi = np.array([[1, 0], [0, -1]]), np.zeros((2, 2), dtype=np.int64)
        else:
            fr, fi = np.zeros((2, 2), dtype=np.int64), np.array([[0, -1], [1, 0]])
        re, im = np.kron(re, fr) - np.kron(im, fi), np.kron(re, fi) + np.kron(im, fr)
    return Cyc8Matrix.from_gaussian(re, im)
