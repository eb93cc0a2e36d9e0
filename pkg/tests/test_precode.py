import random
from collections import Counter

import pytest

from nbfountain.precode import (CodeParams, ConstructionError, ParityCheckCode,
                                construct, encode, syndrome)


def gf_rank(field, rows, n_cols):
    """Dense Gaussian elimination over GF(2^m) (oracle)."""
    mat = [[0] * n_cols for _ in rows]
    for r, row in enumerate(rows):
        for v, h in row:
            mat[r][v] = h
    rank = 0
    for col in range(n_cols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = field.inv(mat[rank][col])
        mat[rank] = [field.mul(inv, x) for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                coef = mat[r][col]
                mat[r] = [field.add(x, field.mul(coef, y)) for x, y in zip(mat[r], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


def small_params(rng):
    while True:
        m = rng.choice([1, 2, 3])
        d_c = rng.choice([3, 4, 5])
        K = rng.randrange(4, 17)
        if (2 * K) % (d_c - 2):
            continue
        M = 2 * K // (d_c - 2)
        # leave headroom: K info pairs plus the zig-zag chain must fit into
        # the distinct row pairs
        if M * (M - 1) // 2 - (M - 1) < 2 * K:
            continue
        p = CodeParams(m=m, d_c=d_c, k_bits=K * m, seed=rng.randrange(2**32))
        if p.N <= 60:
            return p


def test_dimension_arithmetic():
    p = CodeParams(m=2, d_c=3, k_bits=4, seed=0)
    assert (p.K, p.N, p.M) == (2, 6, 4)
    p = CodeParams(m=8, d_c=3, k_bits=8192, seed=0)
    assert (p.K, p.N, p.M) == (1024, 3072, 2048)
    assert p.N == 3 * p.k_bits // p.m  # rate 1/3 at d_c = 3
    p = CodeParams(m=4, d_c=4, k_bits=64, seed=0)
    assert (p.K, p.N, p.M) == (16, 32, 16)


def test_param_validation():
    with pytest.raises(ValueError):
        CodeParams(m=3, d_c=3, k_bits=10, seed=0)  # m does not divide k
    with pytest.raises(ValueError):
        CodeParams(m=2, d_c=5, k_bits=10, seed=0)  # (d_c-2) does not divide 2K
    with pytest.raises(ValueError):
        CodeParams(m=2, d_c=2, k_bits=4, seed=0)
    with pytest.raises(ValueError):
        CodeParams(m=2, d_c=3, k_bits=0, seed=0)


def test_degree_profile():
    p = CodeParams(m=2, d_c=3, k_bits=4, seed=7)
    code = construct(p)
    col_w = Counter()
    for row in code.rows:
        for v, h in row:
            assert h != 0
            col_w[v] += 1
    # info columns weight 2; parity chain weight 2 except the boundary
    assert [col_w[v] for v in range(p.N - 1)] == [2] * (p.N - 1)
    assert col_w[p.N - 1] == 1
    # every check has weight d_c except the first (single parity entry)
    assert len(code.rows[0]) == p.d_c - 1
    assert all(len(r) == p.d_c for r in code.rows[1:])


def test_fig1_shape():
    # d_c=3 with 18 symbols: 12 checks; the zig-zag boundary costs one of
    # the 2N edges of the ideal (2,3)-regular graph
    p = CodeParams(m=4, d_c=3, k_bits=24, seed=1)
    code = construct(p)
    assert (p.N, p.M) == (18, 12)
    assert sum(len(r) for r in code.rows) == 2 * p.N - 1


def test_no_shared_row_pairs():
    rng = random.Random(5)
    for _ in range(20):
        p = small_params(rng)
        code = construct(p)
        pairs = set()
        cols = {}
        for c, row in enumerate(code.rows):
            for v, _h in row:
                cols.setdefault(v, []).append(c)
        for v, rs in cols.items():
            assert len(rs) in (1, 2)
            if len(rs) == 2:
                assert rs[0] != rs[1], "multi-edge"
                pair = tuple(sorted(rs))
                assert pair not in pairs, "4-cycle through a column pair"
                pairs.add(pair)


def test_determinism():
    p = CodeParams(m=3, d_c=3, k_bits=30, seed=99)
    a, b = construct(p), construct(p)
    assert a.rows == b.rows
    c = construct(CodeParams(m=3, d_c=3, k_bits=30, seed=100))
    assert c.rows != a.rows


def test_pathological_parameters_raise():
    # K=12 info pairs + 5 chain pairs cannot fit in C(6,2)=15 distinct pairs
    with pytest.raises(ConstructionError):
        construct(CodeParams(m=8, d_c=6, k_bits=96, seed=0))


def test_full_rank_oracle():
    rng = random.Random(11)
    for _ in range(100):
        p = small_params(rng)
        code = construct(p)
        assert gf_rank(code.field(), code.rows, p.N) == p.M


def test_encode_zero_info():
    p = CodeParams(m=4, d_c=3, k_bits=32, seed=3)
    code = construct(p)
    assert encode(code, [0] * p.K) == [0] * p.N


def test_encode_syndrome_roundtrip():
    rng = random.Random(21)
    for _ in range(50):
        p = small_params(rng)
        code = construct(p)
        info = [rng.randrange(1 << p.m) for _ in range(p.K)]
        x = encode(code, info)
        assert x[: p.K] == info
        assert syndrome(code, x) == [0] * p.M


def test_encode_matches_dense_solver():
    # parity part solved by dense elimination must equal zig-zag encoding
    rng = random.Random(31)
    p = CodeParams(m=2, d_c=3, k_bits=4, seed=17)
    code = construct(p)
    field = code.field()
    info = [rng.randrange(4) for _ in range(p.K)]
    x = encode(code, info)
    # brute force: search all parity completions (q^M small here)
    found = None
    import itertools

    for parity in itertools.product(range(4), repeat=p.M):
        cand = info + list(parity)
        if all(s == 0 for s in syndrome(code, cand)):
            assert found is None, "parity part is not unique: rank < M"
            found = cand
    assert found == x


def test_syndrome_single_flip():
    p = CodeParams(m=3, d_c=3, k_bits=30, seed=8)
    code = construct(p)
    x = encode(code, [1] * p.K)
    for v in (0, p.K, p.N - 1):
        y = list(x)
        y[v] ^= 5
        nz = sum(1 for s in syndrome(code, y) if s)
        assert nz == (1 if v == p.N - 1 else 2)


def test_syndrome_length_check():
    p = CodeParams(m=2, d_c=3, k_bits=4, seed=0)
    code = construct(p)
    with pytest.raises(ValueError):
        syndrome(code, [0] * (p.N - 1))
    with pytest.raises(ValueError):
        encode(code, [0] * (p.K + 1))


def test_serialization_roundtrip():
    p = CodeParams(m=4, d_c=4, k_bits=64, seed=12)
    code = construct(p)
    text = code.serialize()
    header = text.splitlines()[0].split()
    assert [int(x) for x in header] == [4, 4, p.N, p.M, 12]
    assert text.splitlines()[1].startswith("0: (")
    back = ParityCheckCode.deserialize(text)
    assert back.rows == code.rows
    assert back.params == p


def test_deserialize_rejects_garbage():
    with pytest.raises(ValueError):
        ParityCheckCode.deserialize("1 2 3\n")
    good = construct(CodeParams(m=2, d_c=3, k_bits=4, seed=0)).serialize()
    with pytest.raises(ValueError):
        ParityCheckCode.deserialize(good.replace("0:", "9:", 1))
