"""Memoryless binary-input channels: erasure and BPSK-mapped AWGN.

Observations are floats: the BEC reports the bit itself or NaN for an
erasure, the AWGN channel reports y = (1 - 2b) + sigma * z.  Posteriors
Q(x|y) assume uniform input bits.  ``capacity`` is exact for the BEC and
Gauss-Hermite quadrature for the AWGN channel; ``solve_sigma_for_capacity``
inverts it by bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ERASED = float("nan")

# near-noiseless stand-in for "capacity 1.0" AWGN; results are
# indistinguishable from a perfect channel
SIGMA_FLOOR = 1e-3

_GH_NODES = 101
_gh_cache: tuple[np.ndarray, np.ndarray] | None = None


@dataclass(frozen=True)
class Posterior:
    """Bit posteriors (Q(0|y), Q(1|y)); they sum to one."""

    q0: float
    q1: float


def _gh() -> tuple[np.ndarray, np.ndarray]:
    global _gh_cache
    if _gh_cache is None:
        _gh_cache = np.polynomial.hermite.hermgauss(_GH_NODES)
    return _gh_cache


@dataclass(frozen=True)
class BEC:
    """Binary erasure channel with erasure probability p."""

    erasure_prob: float

    def __post_init__(self):
        if not 0.0 <= self.erasure_prob <= 1.0:
            raise ValueError(f"erasure probability must be in [0,1], got {self.erasure_prob}")

    def transmit(self, bit: int, rng: np.random.Generator) -> float:
        return ERASED if rng.random() < self.erasure_prob else float(bit)

    def transmit_many(self, bits: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        bits = np.asarray(bits, dtype=float)
        erased = rng.random(bits.shape) < self.erasure_prob
        return np.where(erased, ERASED, bits)

    def posterior(self, obs: float) -> Posterior:
        if math.isnan(obs):
            return Posterior(0.5, 0.5)
        return Posterior(1.0 - obs, obs)

    def posteriors_many(self, obs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        obs = np.asarray(obs, dtype=float)
        erased = np.isnan(obs)
        q1 = np.where(erased, 0.5, obs)
        return 1.0 - q1, q1

    def capacity(self) -> float:
        return 1.0 - self.erasure_prob


@dataclass(frozen=True)
class BIAWGN:
    """Binary-input AWGN channel: BPSK map 0 -> +1, 1 -> -1, noise N(0, sigma^2)."""

    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    def transmit(self, bit: int, rng: np.random.Generator) -> float:
        return (1.0 - 2.0 * bit) + self.sigma * rng.standard_normal()

    def transmit_many(self, bits: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        bits = np.asarray(bits, dtype=float)
        return (1.0 - 2.0 * bits) + self.sigma * rng.standard_normal(bits.shape)

    def posterior(self, obs: float) -> Posterior:
        q0, q1 = self.posteriors_many(np.array([obs]))
        return Posterior(float(q0[0]), float(q1[0]))

    def posteriors_many(self, obs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        # Q(0|y) = 1 / (1 + exp(-2y/sigma^2)), computed overflow-safe
        t = 2.0 * np.asarray(obs, dtype=float) / (self.sigma**2)
        q0 = np.empty_like(t)
        pos = t >= 0
        q0[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
        e = np.exp(t[~pos])
        q0[~pos] = e / (1.0 + e)
        return q0, 1.0 - q0

    def capacity(self) -> float:
        """1 - E[log2(1 + exp(-2Y/sigma^2))] for Y = 1 + sigma Z, by
        Gauss-Hermite quadrature."""
        nodes, weights = _gh()
        y = 1.0 + self.sigma * math.sqrt(2.0) * nodes
        u = -2.0 * y / (self.sigma**2)
        integrand = np.logaddexp(0.0, u) / math.log(2.0)
        return 1.0 - float(weights @ integrand) / math.sqrt(math.pi)


def solve_sigma_for_capacity(c_target: float, tol: float = 1e-6) -> float:
    """Noise level whose BI-AWGN capacity equals ``c_target`` (bisection).

    A target of 1.0 maps to the documented SIGMA_FLOOR.
    """
    if not 0.0 < c_target <= 1.0:
        raise ValueError(f"capacity target must be in (0, 1], got {c_target}")
    lo = SIGMA_FLOOR
    if BIAWGN(lo).capacity() <= c_target:
        return lo
    hi = 1.0
    while BIAWGN(hi).capacity() > c_target:
        hi *= 2.0
        if hi > 1e6:
            raise RuntimeError("failed to bracket the capacity target")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        c = BIAWGN(mid).capacity()
        if abs(c - c_target) < tol:
            return mid
        if c > c_target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
