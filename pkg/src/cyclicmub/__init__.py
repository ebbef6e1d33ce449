"""Complete sets of cyclic mutually unbiased bases in dimension 2^m.

The construction reduces to finding a symmetric B over GF(2) such that the
Clifford image C = [[B, I], [I, 0]] cycles the Z-type Pauli class through
d + 1 disjoint commuting classes. Everything here is exact: GF(2) bit
matrices, F2[x] polynomials, and d x d unitaries over Z[zeta_8].
"""

from cyclicmub._accel import USE_NUMBA
from cyclicmub.gf2 import BitMatrix
from cyclicmub.poly import Poly2

__version__ = "0.1.0"

__all__ = ["BitMatrix", "Poly2", "USE_NUMBA", "__version__"]
