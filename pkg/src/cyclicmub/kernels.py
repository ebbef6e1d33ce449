"""Hot inner loops, each in a numba flavour and a numpy/pure-Python flavour.

The public names at the bottom of the module are bound to one flavour at
import time according to :data:`cyclicmub._accel.USE_NUMBA`. Both flavours
stay importable under explicit names so the benchmark and the tests can
compare them directly.
"""

import numpy as np

from cyclicmub._accel import USE_NUMBA

# ---------------------------------------------------------------------------
# GF(2) matrix product on packed rows
# ---------------------------------------------------------------------------


def bitmat_mul_numpy(a, b, n_inner):
    """Packed GF(2) product. ``a`` is (n, wa) uint64, ``b`` is (n_inner, wb)."""
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.uint64)
    for k in range(n_inner):
        sel = ((a[:, k >> 6] >> np.uint64(k & 63)) & np.uint64(1)).astype(bool)
        if sel.any():
            out[sel] ^= b[k]
    return out


def _bitmat_mul_loop(a, b, n_inner):
    n = a.shape[0]
    wb = b.shape[1]
    out = np.zeros((n, wb), dtype=np.uint64)
    one = np.uint64(1)
    for i in range(n):
        for k in range(n_inner):
            if (a[i, k >> 6] >> np.uint64(k & 63)) & one:
                for w in range(wb):
                    out[i, w] ^= b[k, w]
    return out


# ---------------------------------------------------------------------------
# Residue scan of f_j modulo one polynomial
# ---------------------------------------------------------------------------
# Residues are stored as integers whose bit i is the coefficient of x^i;
# the modulus has degree <= 63 so every residue fits one machine word.


def fib_scan_python(modulus, deg, k_max):
    """First j in 1..k_max with f_j = 0 mod ``modulus``, or 0 if none."""
    top = 1 << deg
    lo, hi = 0, 1
    for j in range(1, k_max + 1):
        nxt = (hi << 1) ^ lo
        if nxt & top:
            nxt ^= modulus
        lo, hi = hi, nxt
        if hi == 0:
            return j
    return 0


def fib_scan_halved_python(modulus, deg, k_max):
    """Same answer as :func:`fib_scan_python` for irreducible moduli.

    Uses f_{2k} = (f_k + f_{k-1})^2 and f_{2k+1} = x f_k^2: over a field the
    first zero is j = 1 (modulus x) or an even j = 2k with f_k = f_{k-1}.
    """
    if modulus == 2:
        return 1 if k_max >= 1 else 0
    top = 1 << deg
    lo, hi = 0, 1
    for k in range(1, k_max // 2 + 1):
        nxt = (hi << 1) ^ lo
        if nxt & top:
            nxt ^= modulus
        lo, hi = hi, nxt
        if hi == lo:
            return 2 * k
    return 0


def _fib_scan_loop(modulus, deg, k_max):
    top = np.uint64(1) << np.uint64(deg)
    mod = np.uint64(modulus)
    one = np.uint64(1)
    lo = np.uint64(0)
    hi = np.uint64(1)
    for j in range(1, k_max + 1):
        nxt = (hi << one) ^ lo
        if nxt & top:
            nxt ^= mod
        lo = hi
        hi = nxt
        if hi == 0:
            return j
    return 0


def _fib_scan_halved_loop(modulus, deg, k_max):
    if modulus == 2:
        return 1 if k_max >= 1 else 0
    top = np.uint64(1) << np.uint64(deg)
    mod = np.uint64(modulus)
    one = np.uint64(1)
    lo = np.uint64(0)
    hi = np.uint64(1)
    for k in range(1, k_max // 2 + 1):
        nxt = (hi << one) ^ lo
        if nxt & top:
            nxt ^= mod
        lo = hi
        hi = nxt
        if hi == lo:
            return 2 * k
    return 0


# ---------------------------------------------------------------------------
# Matrix product over Z[zeta_8]; entries stored as (4, rows, cols) int64
# ---------------------------------------------------------------------------


def cyc8_matmul_numpy(a, b):
    out = np.zeros((4, a.shape[1], b.shape[2]), dtype=np.int64)
    for i in range(4):
        for j in range(4):
            prod = a[i] @ b[j]
            if i + j < 4:
                out[i + j] += prod
            else:
                out[i + j - 4] -= prod
    return out


def _cyc8_matmul_loop(a, b):
    n = a.shape[1]
    inner = a.shape[2]
    p = b.shape[2]
    out = np.zeros((4, n, p), dtype=np.int64)
    for r in range(n):
        for k in range(inner):
            a0 = a[0, r, k]
            a1 = a[1, r, k]
            a2 = a[2, r, k]
            a3 = a[3, r, k]
            if a0 == 0 and a1 == 0 and a2 == 0 and a3 == 0:
                continue
            for c in range(p):
                b0 = b[0, k, c]
                b1 = b[1, k, c]
                b2 = b[2, k, c]
                b3 = b[3, k, c]
                out[0, r, c] += a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1
                out[1, r, c] += a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2
                out[2, r, c] += a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3
                out[3, r, c] += a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0
    return out


if USE_NUMBA:
    from numba import njit

    bitmat_mul_numba = njit(cache=True, nogil=True)(_bitmat_mul_loop)
    fib_scan_numba = njit(cache=True, nogil=True)(_fib_scan_loop)
    fib_scan_halved_numba = njit(cache=True, nogil=True)(_fib_scan_halved_loop)
    cyc8_matmul_numba = njit(cache=True, nogil=True)(_cyc8_matmul_loop)

    bitmat_mul = bitmat_mul_numba
    fib_scan = fib_scan_numba
    fib_scan_halved = fib_scan_halved_numba
    cyc8_matmul = cyc8_matmul_numba
else:
    bitmat_mul = bitmat_mul_numpy
    fib_scan = fib_scan_python
    fib_scan_halved = fib_scan_halved_python
    cyc8_matmul = cyc8_matmul_numpy
