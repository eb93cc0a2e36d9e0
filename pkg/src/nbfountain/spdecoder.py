"""Sum-product decoding on the pre-code Tanner graph.

Messages are length-2^m probability vectors over the field elements.  The
degree-1 repetition nodes of the full fountain graph never change, so all
collected outputs are folded into the per-symbol priors once (``initialize``)
and iteration runs on the pre-code graph alone; per-iteration work is a
function of (N, M, d_c, m) only, no matter how many outputs were
collected.

Check-node combining is XOR-group convolution, computed with the fast
Walsh-Hadamard transform.  Edge coefficients act as GF(2)-linear index
permutations, in the transform domain as well (multiplying the argument by
h permutes transform bins by the transpose of the bit-matrix of h), so a
full check-to-variable pass is one batched forward transform, two index
gathers around a leave-one-out product, and one batched inverse transform.

``check_to_variable`` / ``variable_to_check`` / ``tentative_decision`` are
straightforward per-node reference implementations of the same update
rules; the decoder's batched pass is tested against them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _erasure
from .gf import GF2m
from .precode import ParityCheckCode

NORMALIZATION_TOL = 1e-9


# --------------------------------------------------------------------------
# XOR-group convolution via the Walsh-Hadamard transform
# --------------------------------------------------------------------------

def _fwht_inplace(a: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis, in place."""
    q = a.shape[-1]
    rows = a.reshape(-1, q)
    h = 1
    while h < q:
        r = rows.reshape(rows.shape[0], q // (2 * h), 2, h)
        x = r[:, :, 0, :]
        y = r[:, :, 1, :]
        t = x - y
        x += y
        y[:] = t
        h *= 2
    return a


def fwht(p: np.ndarray) -> np.ndarray:
    """Walsh-Hadamard transform of a copy of ``p`` (last axis, length 2^m)."""
    return _fwht_inplace(np.array(p, dtype=float))


def convolve(p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
    """XOR-group convolution: out(x) = sum over y ^ z = x of p1(y) p2(z)."""
    q = len(p1)
    out = _fwht_inplace(fwht(p1) * fwht(p2)) / q
    np.clip(out, 0.0, None, out=out)
    return out


# --------------------------------------------------------------------------
# Collected outputs and initialization
# --------------------------------------------------------------------------

@dataclass
class CollectedOutputs:
    """Per-output metadata and posteriors, as parallel arrays.

    ``v_idx`` is the 0-based symbol index (stream triples are 1-based),
    ``w`` the 1-based bit index, ``h`` the nonzero coefficient, and
    (q0, q1) the channel posteriors of the transmitted bit.
    """

    v_idx: np.ndarray
    w: np.ndarray
    h: np.ndarray
    q0: np.ndarray
    q1: np.ndarray

    def __post_init__(self):
        self.v_idx = np.asarray(self.v_idx, dtype=np.int64)
        self.w = np.asarray(self.w, dtype=np.int64)
        self.h = np.asarray(self.h, dtype=np.int64)
        self.q0 = np.asarray(self.q0, dtype=float)
        self.q1 = np.asarray(self.q1, dtype=float)
        if np.any(self.h == 0):
            raise ValueError("multiplicative coefficients must be nonzero")

    @property
    def n(self) -> int:
        return len(self.v_idx)

    def head(self, n: int) -> "CollectedOutputs":
        return CollectedOutputs(self.v_idx[:n], self.w[:n], self.h[:n], self.q0[:n], self.q1[:n])


def initialize(code: ParityCheckCode, outputs: CollectedOutputs) -> tuple[np.ndarray, np.ndarray]:
    """Fold all collected outputs into per-symbol priors.

    Returns (priors, contradiction): priors is (N, 2^m) with each row the
    normalized product over the symbol's outputs of q(bit(h x, w)), uniform
    for symbols with no outputs; contradiction marks rows whose product is
    identically zero (mutually exclusive certain observations), which is a
    decode-failure signal rather than an exception.
    """
    field = code.field()
    q = field.q
    n_out = outputs.n
    logp = np.zeros((code.N, q))
    if n_out:
        order = np.argsort(outputs.v_idx, kind="stable")
        v_s = outputs.v_idx[order]
        hs = outputs.h[order]
        ws = outputs.w[order]
        if np.any((v_s < 0) | (v_s >= code.N)):
            raise ValueError("symbol index out of range")
        if np.any((ws < 1) | (ws > field.m)):
            raise ValueError("bit index out of range")
        perm_rows = np.stack([field.perm(h) for h in np.unique(hs)])
        _, inv = np.unique(hs, return_inverse=True)
        bits = (perm_rows[inv] >> (ws - 1)[:, None]) & 1
        pt = np.where(bits == 0, outputs.q0[order, None], outputs.q1[order, None])
        with np.errstate(divide="ignore"):
            logs = np.log(pt)
        starts = np.flatnonzero(np.r_[True, v_s[1:] != v_s[:-1]])
        sums = np.add.reduceat(logs, starts, axis=0)
        logp[v_s[starts]] = sums
    mx = logp.max(axis=1)
    contradiction = ~np.isfinite(mx)
    with np.errstate(invalid="ignore"):
        priors = np.exp(logp - mx[:, None])
    priors[contradiction] = 0.0
    totals = priors.sum(axis=1)
    totals[contradiction] = 1.0
    priors /= totals[:, None]
    return priors, contradiction


# --------------------------------------------------------------------------
# Per-node reference updates
# --------------------------------------------------------------------------

def check_to_variable(field: GF2m, coeffs: list[int], incoming: list[np.ndarray]) -> list[np.ndarray]:
    """Messages out of one check node.

    ``incoming[j]`` is the message arriving on the edge with coefficient
    ``coeffs[j]``; the outgoing message on edge j permutes every other
    input by its coefficient, convolves them, and permutes back.
    """
    d = len(coeffs)
    permuted = [incoming[j][field.perm(field.inv(coeffs[j]))] for j in range(d)]
    out = []
    for j in range(d):
        conv = None
        for l in range(d):
            if l == j:
                continue
            conv = permuted[l] if conv is None else convolve(conv, permuted[l])
        if conv is None:
            conv = np.full(field.q, 1.0 / field.q)
        msg = conv[field.perm(coeffs[j])]
        out.append(msg / msg.sum())
    return out


def variable_to_check(prior: np.ndarray, incoming: list[np.ndarray]) -> tuple[list[np.ndarray], bool]:
    """Messages out of one variable node (degree 1 or 2 in the pre-code).

    Outgoing on edge j is the normalized product of the prior with every
    other incoming message.  A zero normalizer marks a contradiction and
    the message is replaced by the uniform vector.
    """
    q = len(prior)
    out = []
    contradiction = False
    for j in range(len(incoming)):
        msg = prior.copy()
        for l in range(len(incoming)):
            if l != j:
                msg *= incoming[l]
        s = msg.sum()
        if s <= 0.0:
            contradiction = True
            out.append(np.full(q, 1.0 / q))
        else:
            out.append(msg / s)
    return out, contradiction


def tentative_decision(
    code: ParityCheckCode,
    priors: np.ndarray,
    check_msgs: list[list[np.ndarray]],
) -> tuple[np.ndarray, bool]:
    """Symbol-wise argmax of prior times all incoming check messages.

    Ties break toward the smallest symbol value (argmax returns the first
    maximum).  The verdict is the syndrome check of the candidate.
    """
    n = code.N
    xhat = np.zeros(n, dtype=np.int64)
    for v in range(n):
        belief = priors[v].copy()
        for msg in check_msgs[v]:
            belief = belief * msg
        xhat[v] = int(np.argmax(belief))
    from .precode import syndrome

    ok = all(s == 0 for s in syndrome(code, xhat.tolist()))
    return xhat, ok


# --------------------------------------------------------------------------
# Batched decoder
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DecodeResult:
    success: bool
    codeword: np.ndarray | None
    iterations: int
    updates_per_iteration: int
    contradiction: bool = False


class SumProductDecoder:
    """Vectorized sum-product decoder bound to one pre-code instance.

    Builds flat edge-slot arrays once: check c owns slots [c*d_c, (c+1)*d_c)
    (one slot of the first check is padding, since that row has weight
    d_c - 1), and each slot carries transform-domain gather indices for its
    edge coefficient.  A decode run keeps two (slots, 2^m) message arrays
    and a handful of gathers per iteration.
    """

    def __init__(self, code: ParityCheckCode, field: GF2m | None = None):
        self.code = code
        self.field = field if field is not None else code.field()
        if self.field.m != code.m:
            raise ValueError("field degree does not match the code")
        f = self.field
        q = f.q
        M, N, d_c = code.M, code.N, code.d_c
        S = M * d_c

        slot_var = np.zeros(S, dtype=np.int64)
        is_pad = np.ones(S, dtype=bool)
        a_idx = np.zeros((S, q), dtype=np.int32)
        b_idx = np.zeros((S, q), dtype=np.int32)
        ident = np.arange(q, dtype=np.int32)
        a_idx[:] = ident
        b_idx[:] = ident

        tmaps: dict[int, np.ndarray] = {}

        def tmap(h: int) -> np.ndarray:
            # transform-bin permutation xi -> M_h^T xi for argument scaling by h
            m_ = tmaps.get(h)
            if m_ is None:
                cols = np.array([f.mul(h, 1 << t) for t in range(f.m)], dtype=np.int64)
                xi = np.arange(q, dtype=np.int64)
                bits = np.bitwise_count(xi[:, None] & cols[None, :]).astype(np.int32) & 1
                m_ = (bits << np.arange(f.m, dtype=np.int32)).sum(axis=1).astype(np.int32)
                tmaps[h] = m_
            return m_

        var_slots = np.full((N, 2), S, dtype=np.int64)  # index S = neutral row
        var_degree = np.zeros(N, dtype=np.int64)
        for c, row in enumerate(code.rows):
            for j, (v, h) in enumerate(row):
                s = c * d_c + j
                slot_var[s] = v
                is_pad[s] = False
                a_idx[s] = tmap(h)
                b_idx[s] = tmap(f.inv(h))
                var_slots[v, var_degree[v]] = s
                var_degree[v] += 1

        slot_other = np.full(S, S, dtype=np.int64)
        for v in range(N):
            s0, s1 = var_slots[v]
            if s1 < S:
                slot_other[s0] = s1
                slot_other[s1] = s0

        row_cols = np.zeros((M, d_c), dtype=np.int64)
        row_coeffs = np.zeros((M, d_c), dtype=np.int64)
        for c, row in enumerate(code.rows):
            for j, (v, h) in enumerate(row):
                row_cols[c, j] = v
                row_coeffs[c, j] = h

        self.q = q
        self.n_slots = S
        self.slot_var = slot_var
        self.is_pad = is_pad
        self.pad_slots = np.flatnonzero(is_pad)
        self.a_idx = a_idx
        self.b_idx = b_idx
        self.var_slots = var_slots
        self.slot_other = slot_other
        self.row_cols = row_cols
        self.row_coeffs = row_coeffs
        self.n_edges = int((~is_pad).sum())
        self._delta0 = np.zeros(q)
        self._delta0[0] = 1.0

        # signed variants for the erasure fast path (-1 = none/pad)
        self._es_slot_var = np.where(is_pad, -1, slot_var)
        self._es_slot_other = np.where(slot_other == S, -1, slot_other)
        self._es_var_slots = np.where(var_slots == S, -1, var_slots)
        slot_h = np.ones(S, dtype=np.int64)
        for c, row in enumerate(code.rows):
            for j, (_, h) in enumerate(row):
                slot_h[c * d_c + j] = h
        self._es_slot_h = slot_h

    # -- pieces ----------------------------------------------------------

    def initialize(self, outputs: CollectedOutputs) -> tuple[np.ndarray, np.ndarray]:
        return initialize(self.code, outputs)

    def _initial_messages(self, priors: np.ndarray) -> np.ndarray:
        msgs = priors[self.slot_var].copy()
        msgs[self.pad_slots] = self._delta0
        return msgs

    def _check_pass(self, v2c: np.ndarray) -> np.ndarray:
        """All check-to-variable messages from all variable-to-check ones."""
        d_c = self.code.d_c
        w = _fwht_inplace(v2c.copy())
        t = np.take_along_axis(w, self.a_idx, axis=1)
        t3 = t.reshape(self.code.M, d_c, self.q)
        # leave-one-out products along the degree axis
        out = np.empty_like(t3)
        suffix = np.ones((self.code.M, self.q))
        for j in range(d_c - 1, -1, -1):
            out[:, j, :] = suffix
            if j:
                suffix = suffix * t3[:, j, :]
        prefix = np.ones((self.code.M, self.q))
        for j in range(d_c):
            out[:, j, :] *= prefix
            if j < d_c - 1:
                prefix = prefix * t3[:, j, :]
        g = np.take_along_axis(out.reshape(self.n_slots, self.q), self.b_idx, axis=1)
        c2v = _fwht_inplace(g)
        c2v /= self.q
        np.clip(c2v, 0.0, None, out=c2v)
        c2v /= c2v.sum(axis=1, keepdims=True)
        return c2v

    def _variable_pass(self, priors: np.ndarray, c2v_ext: np.ndarray) -> tuple[np.ndarray, bool]:
        v2c = priors[self.slot_var] * c2v_ext[self.slot_other]
        totals = v2c.sum(axis=1, keepdims=True)
        dead = totals[:, 0] <= 0.0
        contradiction = bool(dead.any())
        if contradiction:
            v2c[dead] = 1.0
            totals[dead] = self.q
        v2c /= totals
        v2c[self.pad_slots] = self._delta0
        return v2c, contradiction

    def _tentative(self, priors: np.ndarray, c2v_ext: np.ndarray) -> tuple[np.ndarray, bool]:
        belief = priors * c2v_ext[self.var_slots[:, 0]] * c2v_ext[self.var_slots[:, 1]]
        xhat = belief.argmax(axis=1)
        return xhat, self._syndrome_ok(xhat)

    def _syndrome_ok(self, xhat: np.ndarray) -> bool:
        terms = self.field.mul_vec(self.row_coeffs, xhat[self.row_cols])
        return not np.bitwise_xor.reduce(terms, axis=1).any()

    def _extend(self, msgs: np.ndarray) -> np.ndarray:
        """Append the neutral all-ones row addressed by index n_slots."""
        return np.vstack([msgs, np.ones((1, self.q))])

    # -- decoding --------------------------------------------------------

    def decode(self, outputs: CollectedOutputs, max_iter: int = 200,
               validate: bool = False, force_float: bool = False) -> DecodeResult:
        """Run sum-product decoding until the tentative decision verifies
        or ``max_iter`` iterations pass.

        Stops early on an exact message fixed point (later iterations would
        be bit-identical, so the outcome is already determined).  Success
        implies a zero syndrome; with no collected outputs at all the
        decoder fails immediately.

        Erasure-style outputs (every posterior certain or uniform) route to
        an exact coset implementation of the same updates; float arithmetic
        on such messages is exact, so the result is bit-identical to the
        float path (``force_float`` runs the latter anyway).
        """
        updates = 2 * self.n_edges
        if outputs.n == 0:
            return DecodeResult(False, None, 0, updates)
        if (
            not force_float
            and not validate
            and _erasure.HAVE_FAST_PATH
            and self._erasure_applicable(outputs)
        ):
            return self._decode_erasure(outputs, max_iter)
        priors, contra = self.initialize(outputs)
        if contra.any():
            return DecodeResult(False, None, 0, updates, contradiction=True)
        if validate:
            self._check_rows(priors, "priors")

        # iteration 0: decide on priors alone
        xhat = priors.argmax(axis=1)
        if self._syndrome_ok(xhat):
            return DecodeResult(True, xhat, 0, updates)

        v2c = self._initial_messages(priors)
        contradiction = False
        for it in range(1, max_iter + 1):
            c2v = self._check_pass(v2c)
            c2v_ext = self._extend(c2v)
            v2c_next, contra_now = self._variable_pass(priors, c2v_ext)
            contradiction = contradiction or contra_now
            if validate:
                self._check_rows(c2v[~self.is_pad], "check messages")
                self._check_rows(v2c_next[~self.is_pad], "variable messages")
            xhat, ok = self._tentative(priors, c2v_ext)
            if ok:
                return DecodeResult(True, xhat, it, updates, contradiction=contradiction)
            if np.array_equal(v2c_next, v2c):
                return DecodeResult(False, None, it, updates, contradiction=contradiction)
            v2c = v2c_next
        return DecodeResult(False, None, max_iter, updates, contradiction=contradiction)

    @staticmethod
    def _check_rows(arr: np.ndarray, what: str) -> None:
        sums = arr.sum(axis=1)
        if not np.allclose(sums, 1.0, atol=NORMALIZATION_TOL, rtol=0.0):
            worst = float(np.abs(sums - 1.0).max())
            raise AssertionError(f"{what} not normalized: max deviation {worst:.3e}")

    # -- erasure fast path -------------------------------------------------

    @staticmethod
    def _erasure_applicable(outputs: CollectedOutputs) -> bool:
        q0 = outputs.q0
        exact = (q0 == 0.0) | (q0 == 0.5) | (q0 == 1.0)
        return bool(exact.all() and (outputs.q1 == 1.0 - q0).all())

    def _decode_erasure(self, outputs: CollectedOutputs, max_iter: int) -> DecodeResult:
        f = self.field
        updates = 2 * self.n_edges
        known = outputs.q0 != 0.5  # erased outputs carry no constraint
        v_idx = outputs.v_idx[known]
        w = outputs.w[known]
        h = outputs.h[known]
        bit = (outputs.q1[known] == 1.0).astype(np.int64)
        if np.any((v_idx < 0) | (v_idx >= self.code.N)):
            raise ValueError("symbol index out of range")
        if np.any((w < 1) | (w > f.m)):
            raise ValueError("bit index out of range")

        p_off = np.zeros(self.code.N, dtype=np.int64)
        p_bas = np.zeros((self.code.N, f.m), dtype=np.int64)
        p_dim = np.zeros(self.code.N, dtype=np.int64)
        contra = _erasure._erasure_init(
            self.code.N, f.m, v_idx, w, h, bit,
            f.log_table, f.antilog_table, p_off, p_bas, p_dim,
        )
        if contra:
            return DecodeResult(False, None, 0, updates, contradiction=True)
        success, iters, xhat = _erasure._erasure_decode(
            max_iter, f.m, self.code.d_c, self.code.M, self.code.N, self.n_slots,
            self._es_slot_var, self._es_slot_other, self._es_slot_h,
            self.row_cols, self.row_coeffs, self._es_var_slots,
            f.log_table, f.antilog_table,
            p_off, p_bas, p_dim,
        )
        return DecodeResult(bool(success), xhat if success else None, int(iters), updates)
