"""BEC density evolution for the (2,d_c) non-binary ensemble.

On the erasure channel every sum-product message is (up to scaling) the
indicator of a linear subspace of GF(2)^m, so the message distribution is
summarized by a *density*: a probability vector P = (P_0, ..., P_m) over
subspace dimensions.  Two operators act on densities:

* ``boxdot``   -- dimension distribution of the intersection of two
                  independent uniformly-random subspaces of given dimensions
                  (variable-node combining),
* ``boxtimes`` -- dimension distribution of their sum (check-node combining).

Their transition coefficients are ratios of 2-Gaussian binomials and are
precomputed in log2 space per m (they grow to ~2^90 by m=19).

A collected stream output pins one uniformly random hyperplane (dimension
m-1); a symbol with d collected outputs therefore starts from the d-fold
boxdot power of the hyperplane density, and in the infinite-length limit d
is Poisson with mean beta(eps) = (1 + eps) * m / d_c.  The decoding
threshold eps_star is the smallest overhead at which iterating

    Q = P boxtimes ... boxtimes P   (d_c - 1 factors)
    P = P0 boxdot Q

drives the dimension-0 mass to one; collecting more outputs only helps, so
evolution succeeds on the ray above eps_star.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

DE_MAX_DEGREE = 19

# Iteration-cap scaling: a cap of L iterations leaves a threshold bias of
# about ln(1/delta) * d_c / (m * L), because convergence slows as
# 1/|eps - eps_star| near the threshold.  The auto cap keeps that bias
# comfortably below the bisection resolution.
_AUTO_ITER_SCALE = 200_000


class BracketError(RuntimeError):
    """Threshold bisection endpoints gave the same verdict."""


@dataclass(frozen=True)
class DEParams:
    """Numerical knobs for density evolution.

    ``delta`` is the convergence criterion on 1 - P_0, ``max_iters`` the
    iteration cap (None picks a cap scaled like d_c/m, which keeps the
    finite-cap threshold bias below the bisection resolution; a fixed cap
    of a few thousand is fine away from the threshold but inflates small-m
    thresholds by several 1e-4), ``stall_tol`` the fixed-point detection
    tolerance, ``bisect_tol`` the threshold resolution in eps, and
    ``poisson_tail`` the truncation mass of the initial-density mixture.
    """

    delta: float = 1e-9
    max_iters: int | None = None
    stall_tol: float = 1e-14
    bisect_tol: float = 1e-4
    poisson_tail: float = 1e-12

    def iteration_cap(self, m: int, d_c: int) -> int:
        if self.max_iters is not None:
            return self.max_iters
        return max(5000, int(_AUTO_ITER_SCALE * d_c / m))


DEFAULT_PARAMS = DEParams()


def gaussian_binomial_log2(m: int, k: int) -> float:
    """log2 of the 2-Gaussian binomial [m k]: the number of k-dimensional
    subspaces of GF(2)^m, prod_{l<k} (2^m - 2^l) / (2^k - 2^l)."""
    if not (0 <= k <= m):
        raise ValueError(f"need 0 <= k <= m, got k={k}, m={m}")
    total = 0.0
    for l in range(k):
        total += math.log2((1 << (m - l)) - 1) - math.log2((1 << (k - l)) - 1)
    return total


class CoefficientTensors:
    """Precomputed boxdot/boxtimes transition tensors for one m.

    ``boxdot_coef[k, i, j]`` is the probability that two independent uniform
    subspaces of dimensions i and j intersect in dimension k;
    ``boxtimes_coef`` is the analogue for the subspace sum.  Entries outside
    the geometrically feasible index ranges are zero, and for every feasible
    (i, j) the coefficients sum to one over k.
    """

    def __init__(self, m: int):
        if not 1 <= m <= DE_MAX_DEGREE:
            raise ValueError(f"need 1 <= m <= {DE_MAX_DEGREE}, got m={m}")
        self.m = m
        n = m + 1
        gb = np.full((n, n), -np.inf)
        for a in range(n):
            for b in range(a + 1):
                gb[a, b] = gaussian_binomial_log2(a, b)

        boxdot = np.zeros((n, n, n))
        boxtimes = np.zeros((n, n, n))
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    # intersection: k <= i, k <= j, i + j - k <= m
                    if k <= i and k <= j <= k + m - i:
                        lg = (
                            (i - k) * (j - k)
                            + gb[i, k]
                            + gb[m - i, j - k]
                            - gb[m, j]
                        )
                        boxdot[k, i, j] = 2.0 ** lg
                    # sum: i <= k, j <= k, i + j >= k
                    if i <= k and k - i <= j <= k:
                        lg = (
                            (k - i) * (k - j)
                            + gb[m - i, m - k]
                            + gb[i, k - j]
                            - gb[m, m - j]
                        )
                        boxtimes[k, i, j] = 2.0 ** lg
        self.boxdot_coef = boxdot
        self.boxtimes_coef = boxtimes
        # matmul-friendly views used by the numpy operator path
        self._boxdot_flat = np.ascontiguousarray(boxdot.reshape(n, n * n))
        self._boxtimes_flat = np.ascontiguousarray(boxtimes.reshape(n, n * n))
        # sparse COO views used by the jitted evolve kernel
        self._boxdot_coo = _to_coo(boxdot)
        self._boxtimes_coo = _to_coo(boxtimes)


def _to_coo(tensor: np.ndarray):
    k, i, j = np.nonzero(tensor)
    return (
        k.astype(np.int64),
        i.astype(np.int64),
        j.astype(np.int64),
        tensor[k, i, j].copy(),
    )


@lru_cache(maxsize=None)
def tensors_for(m: int) -> CoefficientTensors:
    return CoefficientTensors(m)


def boxdot(p: np.ndarray, q: np.ndarray, tensors: CoefficientTensors) -> np.ndarray:
    """Density of the intersection of independent subspaces with dims ~ p, q."""
    return tensors._boxdot_flat @ np.outer(p, q).ravel()


def boxtimes(p: np.ndarray, q: np.ndarray, tensors: CoefficientTensors) -> np.ndarray:
    """Density of the sum of independent subspaces with dims ~ p, q."""
    return tensors._boxtimes_flat @ np.outer(p, q).ravel()


def delta_density(m: int, dim: int) -> np.ndarray:
    """Point mass on one subspace dimension."""
    p = np.zeros(m + 1)
    p[dim] = 1.0
    return p


@dataclass(frozen=True)
class EvolveResult:
    success: bool
    iterations: int
    p0_final: float


def _evolve_core(p_init, d_c, delta, stall_tol, cap,
                 td_k, td_i, td_j, td_c, tt_k, tt_i, tt_j, tt_c,
                 trace_out):
    """One density-evolution run over COO tensors.

    Returns (success, computed_iterations, final_p0).  The recursion squares
    any float mass deficit per round, so the density is renormalized once
    per iteration.  ``trace_out`` receives P_0 per iteration when it has
    room (pass a length-0 array to disable tracing).  Written to be
    numba-compilable; the same body is the pure-python fallback.
    """
    n = p_init.shape[0]
    p0 = p_init
    p = p0.copy()
    q = np.empty(n)
    p_next = np.empty(n)
    for it in range(cap):
        if 1.0 - p[0] < delta:
            return True, it, p[0]
        # q = boxtimes fold of (d_c - 1) copies of p
        for x in range(n):
            q[x] = p[x]
        for _ in range(d_c - 2):
            for x in range(n):
                p_next[x] = 0.0
            for e in range(tt_k.shape[0]):
                p_next[tt_k[e]] += tt_c[e] * q[tt_i[e]] * p[tt_j[e]]
            for x in range(n):
                q[x] = p_next[x]
        # p_next = p0 boxdot q
        for x in range(n):
            p_next[x] = 0.0
        for e in range(td_k.shape[0]):
            p_next[td_k[e]] += td_c[e] * p0[td_i[e]] * q[td_j[e]]
        total = 0.0
        for x in range(n):
            total += p_next[x]
        diff = 0.0
        for x in range(n):
            p_next[x] /= total
            d = abs(p_next[x] - p[x])
            if d > diff:
                diff = d
        if it + 1 < trace_out.shape[0]:
            trace_out[it + 1] = p_next[0]
        tmp = p
        p = p_next
        p_next = tmp
        if diff < stall_tol:
            return (1.0 - p[0] < delta), it + 1, p[0]
    return (1.0 - p[0] < delta), cap, p[0]


_evolve_compiled = njit(cache=True)(_evolve_core) if _HAVE_NUMBA else _evolve_core
_NO_TRACE = np.empty(0)


class DensityEvolution:
    """Density evolution for one (m, d_c) ensemble.

    Caches the boxdot powers of the hyperplane density across overhead
    values, which makes threshold bisection cheap.
    """

    def __init__(self, m: int, d_c: int, params: DEParams = DEFAULT_PARAMS):
        if d_c < 3:
            raise ValueError(f"need d_c >= 3, got {d_c}")
        self.m = m
        self.d_c = d_c
        self.params = params
        self.tensors = tensors_for(m)
        # hyperplane_powers[d] = d-fold boxdot of the dimension-(m-1) density,
        # with the empty intersection being the full space.
        self._hyperplane_powers = [delta_density(m, m)]

    def _hyperplane_power(self, d: int) -> np.ndarray:
        powers = self._hyperplane_powers
        if d >= len(powers):
            e = delta_density(self.m, self.m - 1)
            while len(powers) <= d:
                powers.append(boxdot(powers[-1], e, self.tensors))
        return powers[d]

    def beta(self, epsilon: float) -> float:
        """Mean collected outputs per pre-code symbol at overhead epsilon."""
        return (1.0 + epsilon) * self.m / self.d_c

    def initial_density(self, epsilon: float) -> np.ndarray:
        """Poisson mixture over boxdot powers of the hyperplane density."""
        if epsilon < 0:
            raise ValueError(f"overhead must be nonnegative, got {epsilon}")
        return self._poisson_mixture(self.beta(epsilon))

    def _poisson_mixture(self, beta: float) -> np.ndarray:
        out = np.zeros(self.m + 1)
        weight = math.exp(-beta)
        cum = 0.0
        d = 0
        while True:
            out += weight * self._hyperplane_power(d)
            cum += weight
            if 1.0 - cum < self.params.poisson_tail:
                return out
            d += 1
            weight *= beta / d

    def evolve(
        self, p_init: np.ndarray, track: bool = False
    ) -> EvolveResult | tuple[EvolveResult, list[float]]:
        """Iterate the (2, d_c) recursion from an initial density.

        Succeeds when 1 - P_0 drops below ``delta``; fails on a fixed point
        (max-abs change below ``stall_tol``) or at the iteration cap.
        """
        p_init = np.ascontiguousarray(p_init, dtype=np.float64)
        cap = self.params.iteration_cap(self.m, self.d_c)
        td = self.tensors._boxdot_coo
        tt = self.tensors._boxtimes_coo
        trace_out = np.empty(cap + 1) if track else _NO_TRACE
        if track:
            trace_out[0] = p_init[0]
        success, iters, p0_final = _evolve_compiled(
            p_init, self.d_c, self.params.delta, self.params.stall_tol, cap,
            td[0], td[1], td[2], td[3], tt[0], tt[1], tt[2], tt[3],
            trace_out,
        )
        result = EvolveResult(bool(success), int(iters), float(p0_final))
        if track:
            return result, trace_out[: iters + 1].tolist()
        return result

    def succeeds(self, epsilon: float) -> bool:
        return self.evolve(self.initial_density(epsilon)).success

    def threshold(self, eps_lo: float = 0.0, eps_hi: float = 10.0) -> float:
        """Bisect for the smallest overhead at which evolution succeeds.

        Collecting more outputs only helps, so the success region is the
        ray above the threshold: evolution fails at ``eps_lo`` and succeeds
        at ``eps_hi``, and the boundary is the asymptotic overhead.
        """
        lo_ok = self.succeeds(eps_lo)
        hi_ok = self.succeeds(eps_hi)
        if lo_ok == hi_ok:
            raise BracketError(
                f"bisection bracket [{eps_lo}, {eps_hi}] has verdicts "
                f"({lo_ok}, {hi_ok}) for m={self.m}, d_c={self.d_c}"
            )
        if lo_ok:
            raise BracketError(
                f"lower endpoint eps={eps_lo} already succeeds for m={self.m}, d_c={self.d_c}"
            )
        lo, hi = eps_lo, eps_hi
        while hi - lo > self.params.bisect_tol:
            mid = 0.5 * (lo + hi)
            if self.succeeds(mid):
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)


def threshold(m: int, d_c: int, params: DEParams = DEFAULT_PARAMS) -> float:
    """Asymptotic overhead threshold for the (2, d_c) ensemble over GF(2^m)."""
    return DensityEvolution(m, d_c, params).threshold()


def threshold_table(
    ms: range | list[int],
    dcs: range | list[int],
    params: DEParams = DEFAULT_PARAMS,
):
    """Yield (m, d_c, eps_star) for the grid, row-major in m."""
    for m in ms:
        for d_c in dcs:
            yield m, d_c, DensityEvolution(m, d_c, params).threshold()
