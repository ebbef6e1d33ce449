"""Polynomials over GF(2) and the family f_k.

A :class:`Poly2` wraps a non-negative int whose bit i is the coefficient of
x^i. The family f_k is defined by f_{-2} = 1, f_{-1} = 0 and
f_k = x f_{k-1} + f_{k-2}; it describes the blocks of C^n for
C = [[B, I], [I, 0]].

Invertibility of f_j(B) is decided in quotient rings: f_j(B) is invertible
iff gcd(f_j, mu_B) = 1, i.e. iff f_j is non-zero modulo every irreducible
factor of the minimal polynomial mu_B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from cyclicmub import kernels
from cyclicmub.exceptions import ConsistencyError, ShapeError
from cyclicmub.gf2 import BitMatrix

#: Degree of the zero polynomial.
ZERO_DEGREE = -math.inf


# ---------------------------------------------------------------------------
# raw int helpers
# ---------------------------------------------------------------------------


def _clmul(a: int, b: int) -> int:
    if a.bit_length() < b.bit_length():
        a, b = b, a
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def _divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    db = b.bit_length()
    q = 0
    while a.bit_length() >= db:
        s = a.bit_length() - db
        q |= 1 << s
        a ^= b << s
    return q, a


def _mod(a: int, b: int) -> int:
    if b == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def _mulmod(a: int, b: int, m: int) -> int:
    return _mod(_clmul(a, b), m)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _mod(a, b)
    return a


def _powmod(a: int, e: int, m: int) -> int:
    result = _mod(1, m)
    a = _mod(a, m)
    while e:
        if e & 1:
            result = _mulmod(result, a, m)
        e >>= 1
        if e:
            a = _mulmod(a, a, m)
    return result


def _even_mask(nbits: int) -> int:
    return int("01" * ((nbits + 1) // 2 + 1), 2)


def _derivative(a: int) -> int:
    # only odd exponents survive in characteristic 2
    return (a >> 1) & _even_mask(a.bit_length())


def _sqrt(a: int) -> int:
    """Square root of a polynomial with only even exponents."""
    out = 0
    i = 0
    while a >> (2 * i):
        if (a >> (2 * i)) & 1:
            out |= 1 << i
        i += 1
    return out


# ---------------------------------------------------------------------------
# Poly2
# ---------------------------------------------------------------------------


class Poly2:
    """Polynomial over GF(2) stored as a coefficient bitset."""

    __slots__ = ("value",)

    def __init__(self, value: int = 0):
        if value < 0:
            raise ValueError("coefficient bitset must be non-negative")
        self.value = int(value)

    @classmethod
    def from_exponents(cls, exps: Sequence[int]) -> Poly2:
        v = 0
        for e in exps:
            v ^= 1 << e
        return cls(v)

    @classmethod
    def x(cls) -> Poly2:
        return cls(2)

    @classmethod
    def one(cls) -> Poly2:
        return cls(1)

    @property
    def degree(self) -> float | int:
        return self.value.bit_length() - 1 if self.value else ZERO_DEGREE

    def is_zero(self) -> bool:
        return self.value == 0

    def coeff(self, i: int) -> int:
        return (self.value >> i) & 1 if i >= 0 else 0

    def exponents(self) -> list[int]:
        return [i for i in range(self.value.bit_length()) if (self.value >> i) & 1]

    def __add__(self, other: Poly2) -> Poly2:
        return Poly2(self.value ^ other.value)

    __sub__ = __add__

    def __mul__(self, other: Poly2) -> Poly2:
        return Poly2(_clmul(self.value, other.value))

    def __mod__(self, other: Poly2) -> Poly2:
        return poly_mod(self, other)

    def __floordiv__(self, other: Poly2) -> Poly2:
        return Poly2(_divmod(self.value, other.value)[0])

    def __divmod__(self, other: Poly2) -> tuple[Poly2, Poly2]:
        q, r = _divmod(self.value, other.value)
        return Poly2(q), Poly2(r)

    def __pow__(self, e: int) -> Poly2:
        out = 1
        base = self.value
        while e:
            if e & 1:
                out = _clmul(out, base)
            e >>= 1
            if e:
                base = _clmul(base, base)
        return Poly2(out)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly2):
            return self.value == other.value
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("Poly2", self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def compose_square(self) -> Poly2:
        """p(x^2)."""
        out = 0
        for e in self.exponents():
            out |= 1 << (2 * e)
        return Poly2(out)

    def to_hex(self) -> str:
        return format(self.value, "x")

    @classmethod
    def from_hex(cls, s: str) -> Poly2:
        return cls(int(s, 16))

    def __str__(self) -> str:
        if not self.value:
            return "0"
        terms = []
        for e in reversed(self.exponents()):
            terms.append("1" if e == 0 else "x" if e == 1 else f"x^{e}")
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"Poly2({self})"


def poly_mul(p: Poly2, q: Poly2) -> Poly2:
    return p * q


def poly_mod(p: Poly2, m: Poly2) -> Poly2:
    if m.is_zero():
        raise ValueError("zero modulus")
    return Poly2(_mod(p.value, m.value))


def poly_gcd(p: Poly2, q: Poly2) -> Poly2:
    """Monic gcd (every non-zero polynomial over GF(2) is monic)."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    return Poly2(_gcd(p.value, q.value))


# ---------------------------------------------------------------------------
# the f_k family
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _fib_value(k: int) -> int:
    if k == -2:
        return 1
    if k == -1:
        return 0
    lo, hi = 1, 0  # f_{-2}, f_{-1}
    for _ in range(k + 1):
        lo, hi = hi, (hi << 1) ^ lo
    return hi


def fib_poly(k: int) -> Poly2:
    """f_k by the three-term recursion, k >= -2."""
    if k < -2:
        raise ValueError("f_k is defined for k >= -2")
    return Poly2(_fib_value(k))


def binom_parity(n: int, k: int) -> int:
    """C(n, k) mod 2: odd exactly when adding k and n - k in base 2 has no carry."""
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"binom_parity needs 0 <= k <= n, got n={n}, k={k}")
    return int((k & (n - k)) == 0)


def fib_coeff(k: int, i: int) -> int:
    """Coefficient of x^i in f_k from the binomial-parity closed form."""
    if i < 0 or i > k or (k - i) % 2:
        return 0
    return binom_parity((k + i) // 2, (k - i) // 2)


def g_poly(k: int) -> Poly2:
    """g_k with coefficients C(k+i, k-i) mod 2, so that f_{2k}(x) = g_k(x^2)."""
    v = 0
    for i in range(k + 1):
        if binom_parity(k + i, k - i):
            v |= 1 << i
    return Poly2(v)


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


def poly_eval_matrix(p: Poly2, b: BitMatrix) -> BitMatrix:
    """p(B) by Horner's rule."""
    if not b.is_square:
        raise ShapeError("polynomial of a non-square matrix")
    n = b.n_rows
    eye = BitMatrix.identity(n)
    acc = BitMatrix.zeros(n)
    for e in range(p.value.bit_length() - 1, -1, -1):
        acc = acc @ b
        if (p.value >> e) & 1:
            acc = acc + eye
    return acc


def _flatten(b: BitMatrix) -> int:
    v = 0
    for i, r in enumerate(b.row_ints()):
        v |= r << (i * b.n_cols)
    return v


def min_poly(b: BitMatrix) -> Poly2:
    """Minimal polynomial: first linear dependency among I, B, B^2, ..."""
    if not b.is_square:
        raise ShapeError("minimal polynomial of a non-square matrix")
    basis: dict[int, tuple[int, int]] = {}
    power = BitMatrix.identity(b.n_rows)
    for k in range(b.n_rows + 1):
        vec, combo = _flatten(power), 1 << k
        while vec:
            top = vec.bit_length() - 1
            if top not in basis:
                break
            bv, bc = basis[top]
            vec ^= bv
            combo ^= bc
        if vec == 0:
            return Poly2(combo)
        basis[vec.bit_length() - 1] = (vec, combo)
        power = power @ b
    raise ConsistencyError("no annihilating polynomial of degree <= n (Cayley-Hamilton violated)")


# ---------------------------------------------------------------------------
# quotient rings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientPair:
    """(f_{k-1} mod modulus, f_k mod modulus)."""

    modulus: Poly2
    k: int
    lo: Poly2
    hi: Poly2

    def step(self) -> QuotientPair:
        m = self.modulus.value
        nxt = _mod((self.hi.value << 1) ^ self.lo.value, m)
        return QuotientPair(self.modulus, self.k + 1, self.hi, Poly2(nxt))


def fib_pair_at(k: int, modulus: Poly2) -> QuotientPair:
    """(f_{k-1}, f_k) mod ``modulus`` in O(log k) products.

    Doubling uses f_{2n} = (f_n + f_{n-1})^2, f_{2n-1} = x f_{n-1}^2 and
    f_{2n+1} = x f_n^2, all instances of f_{a+b} = f_a f_b + f_{a-1} f_{b-1}.
    """
    if k < 0:
        raise ValueError("fib_pair_at needs k >= 0")
    if modulus.is_zero() or modulus.degree < 1:
        raise ValueError("modulus must have degree >= 1")
    m = modulus.value
    lo, hi = 0, 1
    for bit in bin(k)[2:]:
        s = _mulmod(lo ^ hi, lo ^ hi, m)
        if bit == "0":
            lo, hi = _mulmod(2, _mulmod(lo, lo, m), m), s
        else:
            lo, hi = s, _mulmod(2, _mulmod(hi, hi, m), m)
    return QuotientPair(modulus, k, Poly2(lo), Poly2(_mod(hi, m)))


def is_irreducible(p: Poly2) -> bool:
    """Rabin's test."""
    n = p.degree
    if n < 1:
        return False
    v = p.value
    if _powmod(2, 1 << n, v) != _mod(2, v):
        return False
    for q in _prime_factors(int(n)):
        h = _powmod(2, 1 << (n // q), v) ^ 2
        if _gcd(_mod(h, v), v) != 1:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class ScanReport:
    ok: bool
    first_failing_j: int | None
    k_max: int
    halved: bool


def fib_scan_invertibility(
    modulus_factors: Sequence[Poly2], k_max: int, halved: bool = False
) -> ScanReport:
    """Is f_j non-zero modulo every factor for all 1 <= j <= k_max?

    ``halved`` walks only to k_max // 2 using f_{2k} = (f_k + f_{k-1})^2; it
    returns the same first failing index when every factor is irreducible.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    first = 0
    for p in modulus_factors:
        if not is_irreducible(p):
            raise ConsistencyError(f"scan factor {p} is reducible")
        limit = k_max if first == 0 else first - 1
        if limit < 1:
            break
        if p.degree <= 63:
            scan = kernels.fib_scan_halved if halved else kernels.fib_scan
            j = int(scan(p.value, int(p.degree), limit))
        else:
            scan = kernels.fib_scan_halved_python if halved else kernels.fib_scan_python
            j = scan(p.value, int(p.degree), limit)
        if j:
            first = j
    return ScanReport(first == 0, first or None, k_max, halved)


# ---------------------------------------------------------------------------
# factorization
# ---------------------------------------------------------------------------


def _trace_map(a: int, i: int, g: int) -> int:
    t = 0
    a = _mod(a, g)
    for _ in range(i):
        t ^= a
        a = _mulmod(a, a, g)
    return t


def _equal_degree_split(g: int, i: int) -> list[int]:
    if g.bit_length() - 1 == i:
        return [g]
    # deterministic sweep over a = x, x+1, x^2, ...; some a separates two factors
    deg_g = g.bit_length() - 1
    a = 2
    while True:
        h = _gcd(_trace_map(a, i, g), g)
        if 0 < h.bit_length() - 1 < deg_g:
            q = _divmod(g, h)[0]
            return _equal_degree_split(h, i) + _equal_degree_split(q, i)
        a += 1


def _squarefree_factors(w: int) -> list[int]:
    """Irreducible factors of a square-free polynomial (distinct-degree + equal-degree split)."""
    out = []
    i = 1
    h = 2  # x
    while w.bit_length() - 1 >= 2 * i:
        h = _mulmod(h, h, w)
        g = _gcd(h ^ 2, w)
        if g != 1:
            out.extend(_equal_degree_split(g, i))
            w = _divmod(w, g)[0]
            h = _mod(h, w)
        i += 1
    if w != 1:
        out.append(w)
    return out


def _distinct_factors(p: int) -> set[int]:
    if p.bit_length() <= 1:
        return set()
    dp = _derivative(p)
    if dp == 0:
        return _distinct_factors(_sqrt(p))
    g = _gcd(p, dp)
    w = _divmod(p, g)[0]
    return set(_squarefree_factors(w)) | _distinct_factors(g)


def factor_squarefree_irreducible(p: Poly2) -> list[Poly2]:
    """Distinct irreducible factors of p, sorted by (degree, bitset)."""
    if p.is_zero() or p.degree < 1:
        raise ValueError("factorization needs a non-constant polynomial")
    return [Poly2(v) for v in sorted(_distinct_factors(p.value), key=lambda v: (v.bit_length(), v))]
