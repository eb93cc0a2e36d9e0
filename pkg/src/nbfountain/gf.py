"""Arithmetic over GF(2^m) in the binary polynomial-basis representation.

A field element is a plain Python int in ``[0, 2^m)`` whose bit ``t``
(0-based) is the coefficient of ``alpha^t``, where ``alpha`` is the root of
the primitive polynomial.  With the default polynomial for m=3
(``x^3 + x + 1``) the nonzero elements are::

    1       = 1   (1,0,0)        alpha^3 = 3   (1,1,0)
    alpha   = 2   (0,1,0)        alpha^4 = 6   (0,1,1)
    alpha^2 = 4   (0,0,1)        alpha^5 = 7   (1,1,1)
                                 alpha^6 = 5   (1,0,1)

Multiplication and inversion go through log/antilog tables, so constructing
a field costs O(2^m) and each operation is O(1).  Extension degrees up to
m=16 are supported.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# Default primitive polynomial per extension degree, as an (m+1)-bit mask
# with the x^0 coefficient in bit 0.  E.g. 0x11d = x^8+x^4+x^3+x^2+1.
# Published interface: the CLI --field-poly flag overrides these.
DEFAULT_PRIMITIVE_POLYS: dict[int, int] = {
    1: 0x3,      # x + 1
    2: 0x7,      # x^2 + x + 1
    3: 0xB,      # x^3 + x + 1
    4: 0x13,     # x^4 + x + 1
    5: 0x25,     # x^5 + x^2 + 1
    6: 0x43,     # x^6 + x + 1
    7: 0x89,     # x^7 + x^3 + 1
    8: 0x11D,    # x^8 + x^4 + x^3 + x^2 + 1
    9: 0x211,    # x^9 + x^4 + 1
    10: 0x409,   # x^10 + x^3 + 1
    11: 0x805,   # x^11 + x^2 + 1
    12: 0x1053,  # x^12 + x^6 + x^4 + x + 1
    13: 0x201B,  # x^13 + x^4 + x^3 + x + 1
    14: 0x4443,  # x^14 + x^10 + x^6 + x + 1
    15: 0x8003,  # x^15 + x + 1
    16: 0x1100B, # x^16 + x^12 + x^3 + x + 1
}

MAX_DEGREE = 16


def default_primitive_poly(m: int) -> int:
    """Return the documented default primitive polynomial mask for degree m."""
    if m not in DEFAULT_PRIMITIVE_POLYS:
        raise ValueError(f"unsupported extension degree m={m}; need 1 <= m <= {MAX_DEGREE}")
    return DEFAULT_PRIMITIVE_POLYS[m]


class GF2m:
    """GF(2^m) with log/antilog tables over a primitive polynomial.

    Instances are immutable after construction and safe for concurrent
    reads.  ``primitive_poly`` must be primitive, not merely irreducible:
    construction walks the cycle of alpha and rejects the polynomial if the
    multiplicative order of alpha is not exactly 2^m - 1.
    """

    def __init__(self, m: int, primitive_poly: int | None = None):
        if not 1 <= m <= MAX_DEGREE:
            raise ValueError(f"unsupported extension degree m={m}; need 1 <= m <= {MAX_DEGREE}")
        if primitive_poly is None:
            primitive_poly = DEFAULT_PRIMITIVE_POLYS[m]
        if primitive_poly >> m != 1:
            raise ValueError(
                f"polynomial 0x{primitive_poly:x} does not have degree {m}"
            )
        self.m = m
        self.q = 1 << m
        self.primitive_poly = primitive_poly

        antilog = np.zeros(self.q - 1, dtype=np.int64)
        log = np.full(self.q, -1, dtype=np.int64)
        x = 1
        for i in range(self.q - 1):
            if log[x] >= 0:
                # Cycle shorter than 2^m - 1: alpha is not a generator.
                raise ValueError(
                    f"0x{primitive_poly:x} is not primitive for m={m} "
                    f"(alpha cycles after {i} steps)"
                )
            antilog[i] = x
            log[x] = i
            x <<= 1
            if x & self.q:
                x ^= primitive_poly
        if x != 1:
            raise ValueError(f"0x{primitive_poly:x} is not primitive for m={m}")
        self.antilog_table = antilog
        self.log_table = log
        self._perm_cache: dict[int, np.ndarray] = {}

    def __repr__(self) -> str:
        return f"GF2m(m={self.m}, primitive_poly=0x{self.primitive_poly:x})"

    # scalar ops ---------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        """Field addition (characteristic 2, so just XOR)."""
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        """Field multiplication via the log/antilog tables."""
        if a == 0 or b == 0:
            return 0
        return int(self.antilog_table[(self.log_table[a] + self.log_table[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        """Multiplicative inverse; raises ValueError for zero."""
        if a == 0:
            raise ValueError("zero has no multiplicative inverse")
        return int(self.antilog_table[(-self.log_table[a]) % (self.q - 1)])

    def bit(self, a: int, w: int) -> int:
        """The w-th bit of a symbol, i.e. the coefficient of alpha^(w-1).

        Bit positions are 1-based: w ranges over [1, m].
        """
        if not 1 <= w <= self.m:
            raise ValueError(f"bit index w={w} out of range [1, {self.m}]")
        return (a >> (w - 1)) & 1

    def elements(self) -> range:
        return range(self.q)

    # vectorized helpers -------------------------------------------------

    def mul_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise field product of two integer arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        nz = (a != 0) & (b != 0)
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
        la = self.log_table[np.where(nz, a, 1)]
        lb = self.log_table[np.where(nz, b, 1)]
        prod = self.antilog_table[(la + lb) % (self.q - 1)]
        out[nz] = prod[nz]
        return out

    def perm(self, h: int) -> np.ndarray:
        """Index array p with p[x] = h*x for every field element x.

        Cached per coefficient; used to permute length-2^m probability
        vectors by a multiplicative coefficient.
        """
        cached = self._perm_cache.get(h)
        if cached is not None:
            return cached
        if h == 0:
            raise ValueError("permutation by zero is not invertible")
        x = np.arange(self.q, dtype=np.int64)
        p = self.mul_vec(np.full(self.q, h, dtype=np.int64), x)
        p.setflags(write=False)
        self._perm_cache[h] = p
        return p

    def mul_matrix(self, h: int) -> np.ndarray:
        """m x m GF(2) matrix of the linear map x -> h*x on bit vectors.

        Column t is the binary representation of h * alpha^t.
        """
        mat = np.zeros((self.m, self.m), dtype=np.uint8)
        for t in range(self.m):
            col = self.mul(h, 1 << t)
            for r in range(self.m):
                mat[r, t] = (col >> r) & 1
        return mat


@lru_cache(maxsize=None)
def get_field(m: int, primitive_poly: int | None = None) -> GF2m:
    """Shared, memoized field instances (construction is O(2^m))."""
    return GF2m(m, primitive_poly)
