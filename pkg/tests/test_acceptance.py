"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s``.  The Monte-Carlo
concentration criterion takes a few minutes on one core; everything else is
fast.
"""

import math
import time

import numpy as np
import pytest

from conftest import build_instance
from nbfountain import cli
from nbfountain.channel import BEC, BIAWGN, solve_sigma_for_capacity
from nbfountain.deanalysis import boxdot, boxtimes, tensors_for
from nbfountain.gf import get_field
from nbfountain.harness import RetrySchedule, TrialConfig, bler_sweep, run_trials
from nbfountain.precode import CodeParams, construct, encode, syndrome
from nbfountain.spdecoder import CollectedOutputs, SumProductDecoder, convolve

# Frozen reference thresholds: rows m = 1..19, columns d_c = 3,4,5,6.
REFERENCE_TABLE = {
    1: (1.0799, 3.3945, 5.9311, 8.6557),
    2: (0.5748, 2.3274, 4.2477, 6.3098),
    3: (0.3295, 1.8033, 3.4128, 5.1370),
    4: (0.2075, 1.5341, 2.9732, 4.5078),
    5: (0.1422, 1.3816, 2.7151, 4.1293),
    6: (0.1069, 1.2910, 2.5536, 3.8855),
    7: (0.0888, 1.2359, 2.4487, 3.7210),
    8: (0.0809, 1.2025, 2.3786, 3.6068),
    9: (0.0792, 1.1826, 2.3312, 3.5256),
    10: (0.0813, 1.1716, 2.2987, 3.4665),
    11: (0.0856, 1.1661, 2.2765, 3.4228),
    12: (0.0913, 1.1645, 2.2613, 3.3904),
    13: (0.0977, 1.1653, 2.2511, 3.3659),
    14: (0.1044, 1.1677, 2.2445, 3.3472),
    15: (0.1111, 1.1713, 2.2405, 3.3331),
    16: (0.1179, 1.1754, 2.2383, 3.3222),
    17: (0.1245, 1.1801, 2.2378, 3.3142),
    18: (0.1309, 1.1851, 2.2380, 3.3081),
    19: (0.1371, 1.1901, 2.2392, 3.3036),
}
SPOT_ANCHORS = [(1, 3, 1.0799), (8, 3, 0.0809), (9, 3, 0.0792),
                (12, 4, 1.1645), (17, 5, 2.2378), (1, 6, 8.6557)]
TOL = 5e-4


def report(name, ok, detail=""):
    print(f"\nACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}{' (' + detail + ')' if detail else ''}")
    assert ok, f"{name}: {detail}"


def test_threshold_table_regression(tmp_path):
    t0 = time.time()
    out = tmp_path / "table.csv"
    rc = cli.main(["de-table", "-o", str(out)])
    assert rc == 0
    got = {}
    for ln in out.read_text().splitlines()[1:]:
        m_s, dc_s, eps_s = ln.split(",")
        got[(int(m_s), int(dc_s))] = float(eps_s)
    assert len(got) == 76
    bad = []
    for m, row in REFERENCE_TABLE.items():
        for dc, want in zip((3, 4, 5, 6), row):
            diff = got[(m, dc)] - want
            if abs(diff) > TOL:
                bad.append(f"(m={m},dc={dc}): got {got[(m, dc)]:.4f} want {want} diff {diff:+.4f}")
    for m, dc, want in SPOT_ANCHORS:
        assert (m, dc) in got
    # table shape: thresholds increase with check degree, and the d_c=3
    # column attains its minimum at m=9
    for m in range(1, 20):
        col = [got[(m, dc)] for dc in (3, 4, 5, 6)]
        assert col == sorted(col), f"eps* not increasing in d_c at m={m}"
    d3 = {m: got[(m, 3)] for m in range(1, 20)}
    assert min(d3, key=d3.get) == 9
    elapsed = time.time() - t0
    detail = f"76 entries, {len(bad)} outside ±5e-4, {elapsed:.0f}s"
    if bad:
        detail += "; " + "; ".join(bad)
    report("threshold-table regression", not bad and elapsed < 300, detail)


def test_operator_oracle_equivalence():
    # row sums for every m up to 19
    worst = 0.0
    for m in range(1, 20):
        t = tensors_for(m)
        for coef in (t.boxdot_coef, t.boxtimes_coef):
            sums = coef.sum(axis=0)
            worst = max(worst, float(np.abs(sums - 1.0).max()))
    rowsum_ok = worst <= 1e-10

    # Monte-Carlo subspace oracle at m = 3 with 1e6 samples
    m = 3
    t = tensors_for(m)
    masks = {0: [1], 1: [], 2: [], 3: [255]}
    for x in range(1, 8):
        masks[1].append(1 | (1 << x))
    for c in range(1, 8):
        masks[2].append(sum(1 << x for x in range(8) if bin(c & x).count("1") % 2 == 0))
    rng = np.random.default_rng(2024)
    p = np.array([0.15, 0.35, 0.3, 0.2])
    q = np.array([0.3, 0.2, 0.25, 0.25])
    n = 1_000_000
    du = rng.choice(4, size=n, p=p)
    dv = rng.choice(4, size=n, p=q)
    mu = np.empty(n, dtype=np.uint16)
    mv = np.empty(n, dtype=np.uint16)
    for d in range(4):
        sel = du == d
        arr = np.array(masks[d], dtype=np.uint16)
        mu[sel] = arr[rng.integers(len(arr), size=int(sel.sum()))]
        sel = dv == d
        mv[sel] = arr[rng.integers(len(arr), size=int(sel.sum()))]
    d_int = np.log2(np.bitwise_count(mu & mv)).astype(int)
    d_sum = du + dv - d_int
    want_dot = boxdot(p, q, t)
    want_tim = boxtimes(p, q, t)
    mc_ok = True
    for k in range(4):
        for want, sample in ((want_dot, d_int), (want_tim, d_sum)):
            freq = (sample == k).mean()
            sd = math.sqrt(max(want[k] * (1 - want[k]), 1e-12) / n)
            if abs(freq - want[k]) > 3 * sd + 1e-9:
                mc_ok = False
    report("operator oracle equivalence", rowsum_ok and mc_ok,
           f"max row-sum deviation {worst:.1e}; MC 1e6 samples within 3 sigma: {mc_ok}")


def test_convolution_oracle():
    worst = 0.0
    for m in range(1, 7):
        q = 1 << m
        rng = np.random.default_rng(m)
        for _ in range(100):
            p1 = rng.random(q); p1 /= p1.sum()
            p2 = rng.random(q); p2 /= p2.sum()
            direct = np.zeros(q)
            for y in range(q):
                for z in range(q):
                    direct[y ^ z] += p1[y] * p2[z]
            worst = max(worst, float(np.abs(convolve(p1, p2) - direct).max()))
    report("convolution oracle", worst < 1e-12, f"max |fast - direct| = {worst:.2e}")


@pytest.mark.slow
def test_finite_length_concentration():
    t0 = time.time()
    trials = 300
    medians = {}
    for k in (192, 1024, 8192):
        cfg = TrialConfig(k_bits=k, m=8, d_c=3, channel=BEC(0.0), seed=20260809,
                          schedule=RetrySchedule(eps0=0.0, d_eps=0.01, eps_max=2.0))
        outcomes = run_trials(cfg, trials)
        achieved = [o.eps_hat for o in outcomes if not o.censored]
        assert len(achieved) == trials, f"censored trials at k={k}"
        medians[k] = float(np.median(achieved))
    decreasing = medians[192] > medians[1024] > medians[8192]
    in_band = 0.081 <= medians[8192] <= 0.15
    report(
        "finite-length concentration", decreasing and in_band,
        f"medians k192={medians[192]:.3f} k1024={medians[1024]:.3f} "
        f"k8192={medians[8192]:.3f}, {time.time()-t0:.0f}s",
    )


def test_complexity_independence():
    # identical per-iteration message-update counts across a 10x change in n
    # and across channel capacities 1.0 / 0.5
    code, field, x, out_n = build_instance(8, 3, 512, 5, eps=0.1)
    _, _, _, out_10n = build_instance(8, 3, 512, 5, eps=10.0)
    _, _, _, out_half = build_instance(8, 3, 512, 5, eps=0.1, p_erase=0.5)
    dec = SumProductDecoder(code, field)
    counts = set()
    for outputs in (out_n, out_10n, out_half):
        counts.add(dec.decode(outputs, max_iter=5).updates_per_iteration)
        counts.add(dec.decode(outputs, max_iter=5, force_float=True).updates_per_iteration)
    assert out_10n.n >= 10 * out_n.n
    report("complexity independence", counts == {2 * (2 * code.N - 1)},
           f"updates/iteration {counts} for n={out_n.n}, {out_10n.n}, C=1.0/0.5")


def test_codec_round_trip():
    rng = np.random.default_rng(7)
    t0 = time.time()
    checked = 0
    while checked < 1000:
        m = int(rng.integers(1, 5))
        d_c = int(rng.integers(3, 7))
        K = int(rng.integers(4, 17))
        if (2 * K) % (d_c - 2):
            continue
        M = 2 * K // (d_c - 2)
        if M * (M - 1) // 2 - (M - 1) < 2 * K:
            continue
        field = get_field(m)
        params = CodeParams(m=m, d_c=d_c, k_bits=K * m, seed=int(rng.integers(2**32)))
        code = construct(params)
        info = rng.integers(0, field.q, K).tolist()
        x = encode(code, info)
        assert syndrome(code, x) == [0] * params.M
        # certainty priors on every symbol pin the codeword at iteration 0
        v_idx, w, h, q0 = [], [], [], []
        for v in range(params.N):
            for bit_pos in range(1, m + 1):
                v_idx.append(v)
                w.append(bit_pos)
                h.append(1)
                q0.append(1.0 - field.bit(x[v], bit_pos))
        outputs = CollectedOutputs(np.array(v_idx), np.array(w), np.array(h),
                                   np.array(q0, float), 1.0 - np.array(q0, float))
        res = SumProductDecoder(code, field).decode(outputs)
        assert res.success and np.array_equal(res.codeword, np.array(x))
        checked += 1
    report("codec round-trip", True, f"1000 instances, {time.time()-t0:.0f}s")


@pytest.mark.slow
def test_channel_self_consistency():
    t0 = time.time()
    roundtrip_ok = True
    for target in (0.1, 0.5, 0.9):
        sigma = solve_sigma_for_capacity(target)
        if abs(BIAWGN(sigma).capacity() - target) > 1e-4:
            roundtrip_ok = False

    # BLER sanity: monotone non-increasing in overhead (within binomial
    # noise) and clearly nonzero success beyond the DE threshold (0.081)
    grid = [0.05, 0.3, 0.8]
    trials = 30
    cfg = TrialConfig(k_bits=256, m=8, d_c=3, seed=11)
    lines = bler_sweep(grid, [1.0, 0.5], 256, trials, cfg, workers=1)
    rows = [ln.split(",") for ln in lines if not ln.startswith("#")][1:]
    bler = {}
    for c_s, eps_s, tr_s, err_s, und_s in rows:
        bler[(float(c_s), float(eps_s))] = int(err_s) / int(tr_s)
    slack = 3 * math.sqrt(0.25 / trials)
    monotone = all(
        bler[(c, grid[i])] >= bler[(c, grid[i + 1])] - slack
        for c in (1.0, 0.5) for i in range(len(grid) - 1)
    )
    beyond = all(bler[(c, 0.8)] < 1.0 for c in (1.0, 0.5))
    report(
        "channel self-consistency", roundtrip_ok and monotone and beyond,
        f"roundtrip<=1e-4: {roundtrip_ok}; bler {bler}; {time.time()-t0:.0f}s",
    )
