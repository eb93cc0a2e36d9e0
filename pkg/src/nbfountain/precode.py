"""The (2,d_c)-regular non-binary LDPC pre-code over GF(2^m).

The M x N parity-check matrix has K = k_bits/m information columns of
weight 2 followed by M parity columns forming a zig-zag chain: check row c
touches parity columns c and c-1, so the parity submatrix is lower
bidiagonal with nonzero diagonal.  That makes the code full rank by
construction and encodable in O(N * d_c) field operations by forward
substitution.  The chain boundary leaves the last parity column with
weight 1 and the first check row with weight d_c - 1 (all other rows have
weight d_c; with column weights 2 the edge counts only balance this way).

Information columns are placed by a random permutation of the d_c - 2 info
slots per row, locally resampled so that no column hits the same row twice
and no two columns (parity chain included) share the same row pair, which
rules out multi-edges and 4-cycles between column pairs.  All coefficients
are drawn uniformly from the nonzero field elements.  Construction is
deterministic given (params, seed).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .gf import GF2m, get_field

_RESHUFFLE_CAP = 64
_SWAP_CAP = 256


class ConstructionError(RuntimeError):
    """Constraint resampling exceeded the retry cap (parameters too tiny)."""


@dataclass(frozen=True)
class CodeParams:
    """Dimensions of a pre-code instance.

    k_bits information bits over GF(2^m) give K = k_bits/m info symbols,
    N = K*d_c/(d_c-2) code symbols and M = N - K = 2N/d_c checks; the rate
    is (d_c-2)/d_c.
    """

    m: int
    d_c: int
    k_bits: int
    seed: int
    primitive_poly: int | None = None

    def __post_init__(self):
        if self.d_c < 3:
            raise ValueError(f"need d_c >= 3, got {self.d_c}")
        if self.k_bits <= 0:
            raise ValueError(f"need k_bits > 0, got {self.k_bits}")
        if self.k_bits % self.m != 0:
            raise ValueError(
                f"k_bits={self.k_bits} is not a multiple of m={self.m}; "
                "pick k as a whole number of symbols"
            )
        if (2 * self.K) % (self.d_c - 2) != 0:
            raise ValueError(
                f"(d_c-2)={self.d_c - 2} must divide 2K={2 * self.K} "
                "for an integral code length"
            )

    @property
    def K(self) -> int:
        return self.k_bits // self.m

    @property
    def N(self) -> int:
        return self.K + self.M

    @property
    def M(self) -> int:
        return 2 * self.K // (self.d_c - 2)


class ParityCheckCode:
    """Sparse parity-check matrix over GF(2^m) with zig-zag parity part.

    ``rows[c]`` lists (column, coefficient) pairs in increasing column
    order; columns < K are information symbols, column K + j is the j-th
    parity symbol.  Treat instances as immutable.
    """

    def __init__(self, params: CodeParams, rows: list[list[tuple[int, int]]]):
        self.params = params
        self.rows = rows
        self.m = params.m
        self.d_c = params.d_c
        self.K = params.K
        self.N = params.N
        self.M = params.M

    def field(self) -> GF2m:
        return get_field(self.params.m, self.params.primitive_poly)

    def row_coeff(self, c: int, col: int) -> int:
        for v, h in self.rows[c]:
            if v == col:
                return h
        raise KeyError(f"row {c} has no entry in column {col}")

    # --- plain-text serialization (CLI --dump-code / --load-code) --------

    def serialize(self) -> str:
        lines = [f"{self.m} {self.d_c} {self.N} {self.M} {self.params.seed}"]
        for c, row in enumerate(self.rows):
            entries = " ".join(f"({v},{h:x})" for v, h in row)
            lines.append(f"{c}: {entries}")
        return "\n".join(lines) + "\n"

    @classmethod
    def deserialize(cls, text: str) -> "ParityCheckCode":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        header = lines[0].split()
        if len(header) != 5:
            raise ValueError("bad code header; expected 'm d_c N M seed'")
        m, d_c, n, mm, seed = (int(x) for x in header)
        k_bits = (n - mm) * m
        params = CodeParams(m=m, d_c=d_c, k_bits=k_bits, seed=seed)
        if params.N != n or params.M != mm:
            raise ValueError(f"inconsistent dimensions in header: {header}")
        rows: list[list[tuple[int, int]]] = []
        for ln in lines[1:]:
            head, _, rest = ln.partition(":")
            c = int(head)
            if c != len(rows):
                raise ValueError(f"row {c} out of order")
            row = []
            for tok in rest.split():
                if not (tok.startswith("(") and tok.endswith(")")):
                    raise ValueError(f"bad entry {tok!r} in row {c}")
                v_s, h_s = tok[1:-1].split(",")
                row.append((int(v_s), int(h_s, 16)))
            rows.append(row)
        if len(rows) != mm:
            raise ValueError(f"expected {mm} rows, got {len(rows)}")
        return cls(params, rows)


def construct(params: CodeParams) -> ParityCheckCode:
    """Build a pre-code instance, deterministic in (params, seed)."""
    rng = random.Random(params.seed)
    K, M, d_c = params.K, params.M, params.d_c
    q = 1 << params.m

    # pairs of rows already joined by a weight-2 column; the zig-zag chain
    # pre-populates consecutive pairs
    for attempt in range(_RESHUFFLE_CAP):
        slots = [c for c in range(M) for _ in range(d_c - 2)]
        rng.shuffle(slots)
        used_pairs = {(c, c + 1) for c in range(M - 1)}
        placements: list[tuple[int, int]] = []
        ok = True
        for v in range(K):
            lo = 2 * v
            swaps = 0
            while True:
                r1, r2 = slots[lo], slots[lo + 1]
                pair = (r1, r2) if r1 < r2 else (r2, r1)
                if r1 != r2 and pair not in used_pairs:
                    used_pairs.add(pair)
                    placements.append(pair)
                    break
                swaps += 1
                if swaps > _SWAP_CAP or lo + 2 >= len(slots):
                    ok = False
                    break
                j = rng.randrange(lo + 2, len(slots))
                # resample locally: swap the offending slot with a later one
                k = lo + (swaps % 2)
                slots[k], slots[j] = slots[j], slots[k]
            if not ok:
                break
        if ok:
            break
    else:
        raise ConstructionError(
            f"could not place {K} information columns after {_RESHUFFLE_CAP} "
            "reshuffles; parameters are too small for the constraints"
        )

    row_cols: list[list[int]] = [[] for _ in range(M)]
    for v, (r1, r2) in enumerate(placements):
        row_cols[r1].append(v)
        row_cols[r2].append(v)
    for c in range(M):
        if c > 0:
            row_cols[c].append(K + c - 1)
        row_cols[c].append(K + c)

    rows: list[list[tuple[int, int]]] = []
    for c in range(M):
        cols = sorted(row_cols[c])
        rows.append([(v, rng.randrange(1, q)) for v in cols])
    return ParityCheckCode(params, rows)


def encode(code: ParityCheckCode, info: list[int]) -> list[int]:
    """Zig-zag encoding: forward substitution along the parity chain."""
    if len(info) != code.K:
        raise ValueError(f"expected {code.K} information symbols, got {len(info)}")
    field = code.field()
    K, M = code.K, code.M
    x = list(info) + [0] * M
    prev = 0
    for c in range(M):
        acc = 0
        diag = 1
        for v, h in code.rows[c]:
            if v == K + c:
                diag = h
            elif v < K:
                acc ^= field.mul(h, x[v])
            else:  # parity column c-1
                acc ^= field.mul(h, prev)
        prev = field.mul(field.inv(diag), acc)
        x[K + c] = prev
    return x


def syndrome(code: ParityCheckCode, x: list[int]) -> list[int]:
    """Per-check sums H x^T; all zero exactly for codewords."""
    if len(x) != code.N:
        raise ValueError(f"expected {code.N} symbols, got {len(x)}")
    field = code.field()
    out = []
    for row in code.rows:
        acc = 0
        for v, h in row:
            acc ^= field.mul(h, x[v])
        out.append(acc)
    return out
