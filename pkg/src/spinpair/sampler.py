"""Seeded Monte Carlo draws of four-outcome pair measurements.

Outcomes are drawn by inverse CDF over the fixed order
``(e e', e ebar', ebar e', ebar ebar')`` using PCG32 (PCG-XSH-RR, 64-bit state,
32-bit output). Streams are reproducible within this package for a fixed
``(seed, n, probabilities)``; no cross-implementation bit identity is implied.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from spinpair.correlations import JointProbs

RNG_ID = "pcg32-xsh-rr-64/32"

_MULT = 6364136223846793005
_MASK64 = (1 << 64) - 1
DEFAULT_STREAM = 54


class InsufficientExpected(ValueError):
    pass


def _output(old: np.ndarray) -> np.ndarray:
    xorshifted = (((old >> np.uint64(18)) ^ old) >> np.uint64(27)) & np.uint64(0xFFFFFFFF)
    rot = old >> np.uint64(59)
    left = (np.uint64(32) - rot) & np.uint64(31)
    out = (xorshifted >> rot) | (xorshifted << left)
    return (out & np.uint64(0xFFFFFFFF)).astype(np.uint32)


@functools.lru_cache(maxsize=4)
def _jump_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    # state_k = MULT^k * state_0 + inc * sum_{j<k} MULT^j  (mod 2^64)
    powers = np.full(n + 1, _MULT, dtype=np.uint64)
    powers[0] = 1
    np.multiply.accumulate(powers, out=powers)
    sums = np.zeros(n + 1, dtype=np.uint64)
    np.cumsum(powers[:-1], out=sums[1:])
    powers.flags.writeable = False
    sums.flags.writeable = False
    return powers, sums


class Pcg32:
    """Minimal PCG32 generator (O'Neill's ``pcg32_random_r``) with bulk draws."""

    def __init__(self, seed: int, stream: int = DEFAULT_STREAM):
        self.inc = ((stream << 1) | 1) & _MASK64
        self.state = 0
        self.next_uint32()
        self.state = (self.state + seed) & _MASK64
        self.next_uint32()

    def next_uint32(self) -> int:
        old = self.state
        self.state = (old * _MULT + self.inc) & _MASK64
        xorshifted = (((old >> 18) ^ old) >> 27) & 0xFFFFFFFF
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << ((-rot) & 31))) & 0xFFFFFFFF

    def uint32_array(self, n: int) -> np.ndarray:
        """Next ``n`` outputs; same values as ``n`` calls to :meth:`next_uint32`."""
        powers, sums = _jump_tables(n)
        s0, inc = np.uint64(self.state), np.uint64(self.inc)
        states = powers * s0 + sums * inc
        self.state = int(states[n])
        return _output(states[:n])

    def random(self, n: int) -> np.ndarray:
        """``n`` uniforms on [0, 1) with 32-bit resolution."""
        return self.uint32_array(n) * (1.0 / 4294967296.0)


@dataclass(frozen=True)
class OutcomeCounts:
    counts: tuple[int, int, int, int]
    n: int
    seed: int
    rng_id: str = RNG_ID

    @property
    def frequencies(self) -> tuple[float, float, float, float]:
        return tuple(c / self.n for c in self.counts)


def _probs(j: JointProbs | tuple | list | np.ndarray) -> np.ndarray:
    p = np.asarray(j.as_tuple() if isinstance(j, JointProbs) else j, dtype=float)
    if p.shape != (4,):
        raise ValueError("need four outcome probabilities")
    # closed forms can leave -1e-17 style dust
    p = np.where(np.abs(p) < 1e-15, 0.0, p)
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"not a probability vector: {p.tolist()}")
    return p


def sample(j: JointProbs, n: int, seed: int, stream: int = DEFAULT_STREAM) -> OutcomeCounts:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    p = _probs(j)
    x = Pcg32(seed, stream).uint32_array(n)
    # u = x / 2^32 falls below cdf_k exactly when x < ceil(cdf_k * 2^32)
    thresholds = np.ceil(np.cumsum(p)[:3] * 4294967296.0)
    below = [int(np.count_nonzero(x < t)) if t <= 0xFFFFFFFF else n for t in thresholds]
    cum = below + [n]
    counts = (cum[0], cum[1] - cum[0], cum[2] - cum[1], cum[3] - cum[2])
    return OutcomeCounts(counts, n, seed)


def chi_square(counts: OutcomeCounts, j: JointProbs, min_expected: float = 5.0) -> tuple[float, int]:
    """Pearson statistic over outcomes with nonzero probability.

    Categories whose expected count falls below ``min_expected`` are pooled
    together (and, if still too small, into the smallest remaining category).
    Returns ``(statistic, dof)``.
    """
    p = _probs(j)
    obs = np.asarray(counts.counts, dtype=float)
    keep = p > 0
    if np.any(obs[~keep] > 0):
        # an impossible outcome was observed; no finite statistic fits that
        return float("inf"), max(int(keep.sum()) - 1, 1)
    obs, exp = list(obs[keep]), list(p[keep] * counts.n)
    small = [i for i, e in enumerate(exp) if e < min_expected]
    if small:
        pooled_o = sum(obs[i] for i in small)
        pooled_e = sum(exp[i] for i in small)
        obs = [o for i, o in enumerate(obs) if i not in small]
        exp = [e for i, e in enumerate(exp) if i not in small]
        if pooled_e >= min_expected or not exp:
            obs.append(pooled_o)
            exp.append(pooled_e)
        else:
            k = int(np.argmin(exp))
            obs[k] += pooled_o
            exp[k] += pooled_e
    if len(exp) < 2:
        raise InsufficientExpected("fewer than two categories left after pooling")
    o, e = np.asarray(obs), np.asarray(exp)
    return float(np.sum((o - e) ** 2 / e)), len(exp) - 1
