"""The endless fountain output stream.

For stream index i >= 1 the sender draws a triple (v_i, w_i, h_i) -- a
symbol index in [1, N], a bit index in [1, m] and a nonzero coefficient in
GF(2^m) -- and transmits the w_i-th bit of h_i * x_{v_i}.  The receiver
reconstructs the same triples from (seed, i) alone, so any collected subset
of indices is decodable without replaying the stream.

Triples are derived from a stateless 64-bit mix: with sm64 denoting the
SplitMix64 step (add 0x9E3779B97F4A7C15, then xor-shift-multiply with
0xBF58476D1E4B7B47 and 0x94D049BB133111EB, final shift 31), the r-th
candidate word for component c of index i is

    word(seed, i, c, r) = sm64(sm64(sm64(seed ^ c) ^ i) ^ r)

and each component is sampled from its range by rejection, so the
distribution is exactly uniform with no modulo bias.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1E4B7B47
MIX2 = 0x94D049BB133111EB

_SALT_V = 1
_SALT_W = 2
_SALT_H = 3

# rejection practically never recurses (worst acceptance ~ 1 - n/2^64)
_MAX_REJECTION_ROUNDS = 128


def sm64(z: int) -> int:
    """SplitMix64 step: increment by the golden gamma, then finalize."""
    z = (z + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def _word(seed: int, i: int, salt: int, attempt: int) -> int:
    return sm64(sm64(sm64((seed & MASK64) ^ salt) ^ i) ^ attempt)


def _uniform_draw(word_fn, n: int, width: int = 64) -> int:
    """Exactly uniform draw from [0, n) by rejection from width-bit words.

    ``word_fn(attempt)`` supplies the attempt-th candidate word.  Words in
    the truncated top band [limit, 2^width) are rejected, which removes the
    modulo bias entirely.
    """
    span = 1 << width
    limit = span - span % n
    for attempt in range(_MAX_REJECTION_ROUNDS):
        w = word_fn(attempt)
        if w < limit:
            return w % n
    raise RuntimeError("rejection sampling failed to terminate")


@dataclass(frozen=True)
class OutputTriple:
    """Metadata of the i-th fountain output."""

    i: int
    v: int  # symbol index, 1-based in [1, N]
    w: int  # bit index, 1-based in [1, m]
    h: int  # nonzero coefficient in GF(2^m)


@dataclass(frozen=True)
class StreamSpec:
    """Everything the receiver needs to reconstruct triples: the shared
    seed plus the pre-code dimensions."""

    seed: int
    n_symbols: int
    m: int


def triple_at(spec: StreamSpec, i: int) -> OutputTriple:
    """The i-th output triple; a pure, seekable function of (seed, i)."""
    if i < 1:
        raise ValueError(f"stream index must be >= 1, got {i}")
    v = 1 + _uniform_draw(lambda r: _word(spec.seed, i, _SALT_V, r), spec.n_symbols)
    w = 1 + _uniform_draw(lambda r: _word(spec.seed, i, _SALT_W, r), spec.m)
    h = 1 + _uniform_draw(lambda r: _word(spec.seed, i, _SALT_H, r), (1 << spec.m) - 1)
    return OutputTriple(i=i, v=v, w=w, h=h)


def _sm64_np(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = (z + np.uint64(GOLDEN))
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
        return z ^ (z >> np.uint64(31))


def _draw_batch(seed: int, indices: np.ndarray, salt: int, n: int) -> np.ndarray:
    """Vectorized counterpart of the scalar rejection draw (same words)."""
    rem = (1 << 64) % n
    base = _sm64_np(_sm64_np(np.uint64(seed & MASK64) ^ np.uint64(salt)) ^ indices)
    first = _sm64_np(base ^ np.uint64(0))
    if rem == 0:
        # range divides 2^64: every word is accepted
        return (first % np.uint64(n)).astype(np.int64)
    limit = np.uint64((1 << 64) - rem)
    out = first % np.uint64(n)
    pending = first >= limit
    for attempt in range(1, _MAX_REJECTION_ROUNDS):
        if not pending.any():
            return out.astype(np.int64)
        w = _sm64_np(base[pending] ^ np.uint64(attempt))
        ok = w < limit
        take = np.flatnonzero(pending)[ok]
        out[take] = w[ok] % np.uint64(n)
        pending[take] = False
    raise RuntimeError("rejection sampling failed to terminate")


def triples_at(spec: StreamSpec, indices: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized triples for an array of stream indices.

    Returns (v, w, h) int64 arrays, identical to per-index ``triple_at``.
    """
    indices = np.asarray(indices, dtype=np.uint64)
    if indices.size and indices.min() < 1:
        raise ValueError("stream indices must be >= 1")
    v = 1 + _draw_batch(spec.seed, indices, _SALT_V, spec.n_symbols)
    w = 1 + _draw_batch(spec.seed, indices, _SALT_W, spec.m)
    h = 1 + _draw_batch(spec.seed, indices, _SALT_H, (1 << spec.m) - 1)
    return v, w, h


def emit_bit(field, codeword, triple: OutputTriple) -> int:
    """The transmitted bit for one triple: bit w of h * x_v."""
    return field.bit(field.mul(triple.h, codeword[triple.v - 1]), triple.w)


def emit_bits(field, codeword: np.ndarray, v: np.ndarray, w: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Vectorized emit: bits of h_i * x_{v_i} at positions w_i."""
    prod = field.mul_vec(h, np.asarray(codeword, dtype=np.int64)[v - 1])
    return (prod >> (w - 1)) & 1
