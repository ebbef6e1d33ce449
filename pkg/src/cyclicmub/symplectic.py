"""The Clifford image C = [[B, I], [I, 0]] and the orbit of the Z-class.

The Z-type class is generated by C_1 = (0 | I); its images are
C_j = C_1 (C^{j-1})^T = (f_{j-2}(B) | f_{j-3}(B)). A symmetric B yields a
complete cyclic set iff

  i.   B = B^T,
  ii.  f_j(B) is invertible for 1 <= j <= 2^{m-1},
  iii. f_{2^{m-1}}(B) = f_{2^{m-1}-1}(B).

Conditions ii and iii are decided in F2[x]/(mu_B); for small m the report
also recomputes both at matrix level and raises on disagreement.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from cyclicmub.exceptions import ConsistencyError, ShapeError, ValidationError
from cyclicmub.gf2 import (
    BitMatrix,
    block2x2,
    hstack,
    invertible,
    mat_pow,
    rank,
    transpose,
    vstack,
)
from cyclicmub.poly import (
    factor_squarefree_irreducible,
    fib_pair_at,
    fib_poly,
    fib_scan_invertibility,
    min_poly,
    poly_eval_matrix,
)

#: Largest m for which check_conditions repeats ii/iii with explicit matrices.
MATRIX_CROSS_CHECK_MAX_M = 8


@dataclass(frozen=True)
class SymplecticMatrix:
    mat: BitMatrix
    m: int


@dataclass(frozen=True)
class GeneratorMatrix:
    mat: BitMatrix
    m: int


@dataclass(frozen=True)
class ConditionReport:
    symmetric_ok: bool
    symplectic_ok: bool
    cond_ii_ok: bool
    cond_iii_ok: bool
    order_ok: bool
    first_failing_j: int | None = None

    @property
    def all_ok(self) -> bool:
        return (
            self.symmetric_ok
            and self.symplectic_ok
            and self.cond_ii_ok
            and self.cond_iii_ok
            and self.order_ok
        )

    def to_json(self) -> dict:
        out = asdict(self)
        if out["first_failing_j"] is None:
            del out["first_failing_j"]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> ConditionReport:
        return cls(
            symmetric_ok=bool(obj["symmetric_ok"]),
            symplectic_ok=bool(obj["symplectic_ok"]),
            cond_ii_ok=bool(obj["cond_ii_ok"]),
            cond_iii_ok=bool(obj["cond_iii_ok"]),
            order_ok=bool(obj["order_ok"]),
            first_failing_j=obj.get("first_failing_j"),
        )


def _require_square(b: BitMatrix) -> int:
    if not b.is_square:
        raise ShapeError(f"B must be square, got {b.shape}")
    return b.n_rows


def _require_symmetric(b: BitMatrix) -> int:
    m = _require_square(b)
    if not b.is_symmetric():
        raise ValidationError("B has to be symmetric")
    return m


def _raw_c(b: BitMatrix) -> BitMatrix:
    m = b.n_rows
    eye = BitMatrix.identity(m)
    return block2x2(b, eye, eye, BitMatrix.zeros(m))


def symplectic_form(m: int) -> BitMatrix:
    """J = [[0, I], [I, 0]]; the sign of [[0, -I], [I, 0]] vanishes over GF(2)."""
    eye = BitMatrix.identity(m)
    zero = BitMatrix.zeros(m)
    return block2x2(zero, eye, eye, zero)


def embed_c(b: BitMatrix) -> SymplecticMatrix:
    m = _require_symmetric(b)
    c = SymplecticMatrix(_raw_c(b), m)
    if not is_symplectic(c):
        raise ConsistencyError("[[B, I], [I, 0]] with symmetric B failed the symplectic identity")
    return c


def is_symplectic(c: SymplecticMatrix | BitMatrix) -> bool:
    mat = c.mat if isinstance(c, SymplecticMatrix) else c
    if not mat.is_square or mat.n_rows % 2:
        return False
    j = symplectic_form(mat.n_rows // 2)
    return transpose(mat) @ j @ mat == j


def generator(j: int, b: BitMatrix) -> GeneratorMatrix:
    """C_j = (f_{j-2}(B) | f_{j-3}(B))."""
    if j < 1:
        raise ValueError("generator index starts at 1")
    m = _require_symmetric(b)
    left = poly_eval_matrix(fib_poly(j - 2), b)
    right = poly_eval_matrix(fib_poly(j - 3), b)
    return GeneratorMatrix(hstack(left, right), m)


def generators(b: BitMatrix, count: int | None = None) -> list[GeneratorMatrix]:
    """C_1 .. C_count by repeated right-multiplication with C^T (default count d + 1)."""
    m = _require_symmetric(b)
    count = (1 << m) + 1 if count is None else count
    ct = transpose(_raw_c(b))
    cur = hstack(BitMatrix.zeros(m), BitMatrix.identity(m))
    out = []
    for _ in range(count):
        out.append(GeneratorMatrix(cur, m))
        cur = cur @ ct
    return out


def spans_disjoint(cj: GeneratorMatrix, ck: GeneratorMatrix) -> bool:
    if cj.m != ck.m:
        raise ShapeError("generator matrices for different m")
    return rank(vstack(cj.mat, ck.mat)) == 2 * cj.m


def _matrix_level_scan(b: BitMatrix, k_max: int) -> int | None:
    """First j <= k_max with f_j(B) singular, using explicit matrices."""
    m = b.n_rows
    lo, hi = BitMatrix.zeros(m), BitMatrix.identity(m)  # f_{-1}(B), f_0(B)
    for j in range(1, k_max + 1):
        lo, hi = hi, hi @ b + lo
        if not invertible(hi):
            return j
    return None


def check_conditions(
    b: BitMatrix,
    cross_check: bool | None = None,
    halved: bool = False,
) -> ConditionReport:
    m = _require_square(b)
    k_max = 1 << (m - 1)
    c_raw = _raw_c(b)

    symmetric = b.is_symmetric()
    symplectic = is_symplectic(c_raw)

    mu = min_poly(b)
    scan = fib_scan_invertibility(factor_squarefree_irreducible(mu), k_max, halved=halved)
    pair = fib_pair_at(k_max, mu)
    cond_iii = pair.hi == pair.lo

    order = mat_pow(c_raw, (1 << m) + 1).is_identity()

    if cross_check is None:
        cross_check = m <= MATRIX_CROSS_CHECK_MAX_M
    if cross_check:
        first = _matrix_level_scan(b, k_max)
        if first != scan.first_failing_j:
            raise ConsistencyError(
                f"condition ii: residue scan says {scan.first_failing_j}, matrices say {first}"
            )
        fm = poly_eval_matrix(fib_poly(k_max), b)
        fm1 = poly_eval_matrix(fib_poly(k_max - 1), b)
        if (fm == fm1) != cond_iii:
            raise ConsistencyError("condition iii: quotient ring and matrix level disagree")

    # f_n = f_{n-1} gives f_{2n} = 0 and f_{2n-1} = x f_{n-1}^2 = 1, hence C^{d+1} = I
    if cond_iii and not order:
        raise ConsistencyError("condition iii holds but C^(d+1) != I")

    return ConditionReport(
        symmetric_ok=symmetric,
        symplectic_ok=symplectic,
        cond_ii_ok=scan.ok,
        cond_iii_ok=cond_iii,
        order_ok=order,
        first_failing_j=scan.first_failing_j,
    )


def order_check(b: BitMatrix) -> bool:
    """C^{2^m + 1} = I by square-and-multiply."""
    m = _require_symmetric(b)
    return mat_pow(_raw_c(b), (1 << m) + 1).is_identity()


def c_power_blocks(b: BitMatrix, n: int) -> BitMatrix:
    """[[f_n(B), f_{n-1}(B)], [f_{n-1}(B), f_{n-2}(B)]], the closed form of C^n."""
    _require_square(b)
    fn, fn1, fn2 = (poly_eval_matrix(fib_poly(k), b) for k in (n, n - 1, n - 2))
    return block2x2(fn, fn1, fn1, fn2)
