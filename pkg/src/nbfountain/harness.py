"""Monte-Carlo experiment engine.

A trial builds a fresh pre-code instance, encodes random information
symbols, and collects channel outputs incrementally: decode at overhead
eps_0, and on failure raise the overhead by d_eps, collect the additional
stream outputs (indices continue where they left off), reinitialize and
decode again, until success or eps_max.  The first successful grid
overhead is the achieved overhead of the trial.

All randomness derives from (root seed, trial index) via the stream mixer,
so runs replay exactly regardless of worker scheduling.  The worker count
is capped by the NBF_THREADS environment variable.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import BEC, BIAWGN
from .fountain import StreamSpec, sm64, triples_at, emit_bits
from .gf import get_field
from .precode import CodeParams, construct, encode
from .spdecoder import CollectedOutputs, SumProductDecoder

ChannelModel = BEC | BIAWGN


def derive_seed(root: int, *path: int) -> int:
    """Stable 63-bit sub-seed for a derivation path."""
    z = root & ((1 << 64) - 1)
    for p in path:
        z = sm64(z ^ p)
    return z >> 1


@dataclass(frozen=True)
class RetrySchedule:
    """Overhead grid eps_0, eps_0 + d_eps, ... up to eps_max."""

    eps0: float = 0.0
    d_eps: float = 0.01
    eps_max: float = 2.0

    def __post_init__(self):
        if self.eps0 < 0 or self.d_eps <= 0:
            raise ValueError("need eps0 >= 0 and d_eps > 0")

    def grid(self):
        t = 0
        while True:
            eps = self.eps0 + t * self.d_eps
            if eps > self.eps_max + 1e-12:
                return
            yield round(eps, 12)
            t += 1


@dataclass(frozen=True)
class TrialConfig:
    k_bits: int
    m: int = 8
    d_c: int = 3
    channel: ChannelModel = field(default_factory=lambda: BEC(0.0))
    seed: int = 0
    schedule: RetrySchedule = field(default_factory=RetrySchedule)
    max_iter: int = 200
    field_poly: int | None = None


@dataclass(frozen=True)
class TrialOutcome:
    trial: int
    eps_hat: float | None  # None when censored at eps_max
    attempts: int
    iterations: int  # summed over attempts
    undetected: bool
    censored: bool
    seconds: float

    @property
    def ok(self) -> bool:
        return not self.censored


def _collect(cfg: TrialConfig, codeword: np.ndarray, n_total: int,
             state: dict, rng: np.random.Generator, fld) -> CollectedOutputs:
    """Extend the collected-output arrays up to stream index n_total."""
    have = state["n"]
    if n_total > have:
        idx = np.arange(have + 1, n_total + 1, dtype=np.uint64)
        v, w, h = triples_at(state["spec"], idx)
        bits = emit_bits(fld, codeword, v, w, h)
        obs = cfg.channel.transmit_many(bits, rng)
        q0, q1 = cfg.channel.posteriors_many(obs)
        state["v"].append(v - 1)
        state["w"].append(w)
        state["h"].append(h)
        state["q0"].append(q0)
        state["q1"].append(q1)
        state["n"] = n_total
    if not state["v"]:
        empty = np.empty(0, dtype=np.int64)
        return CollectedOutputs(empty, empty, empty, empty.astype(float), empty.astype(float))
    for key in ("v", "w", "h", "q0", "q1"):
        if len(state[key]) > 1:
            state[key] = [np.concatenate(state[key])]
    return CollectedOutputs(
        state["v"][0][:n_total], state["w"][0][:n_total], state["h"][0][:n_total],
        state["q0"][0][:n_total], state["q1"][0][:n_total],
    )


def run_trial(cfg: TrialConfig, trial: int) -> TrialOutcome:
    """One incremental collect-retry trial; deterministic in (cfg, trial)."""
    t0 = time.perf_counter()
    fld = get_field(cfg.m, cfg.field_poly)
    params = CodeParams(
        m=cfg.m, d_c=cfg.d_c, k_bits=cfg.k_bits,
        seed=derive_seed(cfg.seed, trial, 0),
        primitive_poly=cfg.field_poly,
    )
    code = construct(params)
    info_rng = np.random.default_rng(derive_seed(cfg.seed, trial, 1))
    info = info_rng.integers(0, fld.q, params.K).tolist()
    codeword = np.array(encode(code, info))
    decoder = SumProductDecoder(code, fld)
    noise_rng = np.random.default_rng(derive_seed(cfg.seed, trial, 2))
    spec = StreamSpec(seed=derive_seed(cfg.seed, trial, 3), n_symbols=params.N, m=cfg.m)
    state = {"spec": spec, "n": 0, "v": [], "w": [], "h": [], "q0": [], "q1": []}

    capacity = cfg.channel.capacity()
    attempts = 0
    iterations = 0
    for eps in cfg.schedule.grid():
        n = round((1.0 + eps) * cfg.k_bits / capacity)
        outputs = _collect(cfg, codeword, n, state, noise_rng, fld)
        attempts += 1
        result = decoder.decode(outputs, max_iter=cfg.max_iter)
        iterations += result.iterations
        if result.success:
            undetected = not np.array_equal(result.codeword, codeword)
            return TrialOutcome(
                trial, eps, attempts, iterations, undetected, False,
                time.perf_counter() - t0,
            )
    return TrialOutcome(
        trial, None, attempts, iterations, False, True, time.perf_counter() - t0
    )


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get("NBF_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _trial_star(args):
    return run_trial(*args)


def run_trials(cfg: TrialConfig, n_trials: int, workers: int | None = None) -> list[TrialOutcome]:
    """Independent trials, merged by trial index."""
    nw = _worker_count(workers)
    if nw <= 1 or n_trials <= 1:
        return [run_trial(cfg, t) for t in range(n_trials)]
    with ProcessPoolExecutor(max_workers=nw) as pool:
        out = list(pool.map(_trial_star, ((cfg, t) for t in range(n_trials)), chunksize=4))
    return sorted(out, key=lambda o: o.trial)


# --------------------------------------------------------------------------
# experiments
# --------------------------------------------------------------------------

HISTOGRAM_HEADER = "k,trial,eps_hat,attempts,undetected,censored"
BLER_HEADER = "C,epsilon,trials,block_errors,undetected"
DE_TABLE_HEADER = "m,dc,epsilon_star"


def _channel_desc(ch: ChannelModel) -> str:
    if isinstance(ch, BEC):
        return f"bec erasure_prob={ch.erasure_prob}"
    return f"biawgn sigma={ch.sigma}"


def overhead_histogram(
    k_values: list[int],
    trials: int,
    base: TrialConfig,
    workers: int | None = None,
) -> list[str]:
    """Per-trial achieved-overhead rows plus quantile summaries.

    Lines starting with '#' are metadata; data rows follow the documented
    header.  Censored trials carry an empty eps_hat.
    """
    lines = [
        f"# nbfountain histogram m={base.m} dc={base.d_c} "
        f"channel=({_channel_desc(base.channel)}) seed={base.seed} "
        f"eps0={base.schedule.eps0} d_eps={base.schedule.d_eps} "
        f"eps_max={base.schedule.eps_max} trials={trials}",
        HISTOGRAM_HEADER,
    ]
    for k in k_values:
        cfg = replace(base, k_bits=k)
        outcomes = run_trials(cfg, trials, workers)
        for o in outcomes:
            eps = "" if o.censored else f"{o.eps_hat:.6g}"
            lines.append(
                f"{k},{o.trial},{eps},{o.attempts},{int(o.undetected)},{int(o.censored)}"
            )
        achieved = [o.eps_hat for o in outcomes if not o.censored]
        if achieved:
            q10, q50, q90 = np.quantile(achieved, [0.1, 0.5, 0.9])
            lines.append(
                f"# summary k={k} n_ok={len(achieved)} censored={trials - len(achieved)} "
                f"q10={q10:.6g} q50={q50:.6g} q90={q90:.6g}"
            )
        else:
            lines.append(f"# summary k={k} n_ok=0 censored={trials}")
    return lines


def _fixed_eps_trial(cfg: TrialConfig, trial: int, eps: float) -> tuple[bool, bool]:
    """Decode once at fixed overhead; returns (block_error, undetected)."""
    one_shot = replace(cfg, schedule=RetrySchedule(eps0=eps, d_eps=1.0, eps_max=eps))
    outcome = run_trial(one_shot, trial)
    if outcome.censored:
        return True, False
    return False, outcome.undetected


def bler_sweep(
    eps_grid: list[float],
    capacities: list[float],
    k_bits: int,
    trials: int,
    base: TrialConfig,
    workers: int | None = None,
) -> list[str]:
    """Block-error rates on a fixed-overhead grid, one decode per trial.

    Success is syndrome-verified; syndrome-passing wrong codewords are
    tallied separately as undetected.
    """
    from .channel import solve_sigma_for_capacity

    lines = [
        f"# nbfountain bler m={base.m} dc={base.d_c} k={k_bits} seed={base.seed} trials={trials}",
        BLER_HEADER,
    ]
    for cap in capacities:
        channel = BIAWGN(solve_sigma_for_capacity(cap))
        cfg = replace(base, k_bits=k_bits, channel=channel)
        for eps in eps_grid:
            errors = 0
            undetected = 0
            jobs = [(replace(cfg, schedule=RetrySchedule(eps0=eps, d_eps=1.0, eps_max=eps)), t)
                    for t in range(trials)]
            nw = _worker_count(workers)
            if nw <= 1 or trials <= 1:
                outcomes = [run_trial(c, t) for c, t in jobs]
            else:
                with ProcessPoolExecutor(max_workers=nw) as pool:
                    outcomes = list(pool.map(_trial_star, jobs, chunksize=4))
            for o in outcomes:
                if o.censored:
                    errors += 1
                elif o.undetected:
                    undetected += 1
            lines.append(f"{cap:.6g},{eps:.6g},{trials},{errors},{undetected}")
    return lines


def de_table(ms=range(1, 20), dcs=(3, 4, 5, 6)) -> list[str]:
    """Asymptotic-overhead table rows for the CLI."""
    from .deanalysis import DensityEvolution

    lines = [DE_TABLE_HEADER]
    for m in ms:
        for d_c in dcs:
            eps_star = DensityEvolution(m, d_c).threshold()
            lines.append(f"{m},{d_c},{eps_star:.4f}")
    return lines
