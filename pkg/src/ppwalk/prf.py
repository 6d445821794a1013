"""Counter-based randomness underlying every stochastic object in the package.

Site occupancy, renewal gaps and walk steps are all pure functions of a 64-bit
seed and integer counters, built on the splitmix64 finalizer.  Consequences:

* environments are replayable: any query order returns identical answers;
* the compiled and pure-python walkers produce bit-identical trajectories
  (this module is the reference implementation both are tested against);
* replica r of a walk draws from the stream seeded ``rng_seed XOR r``, and an
  annealed replica samples the environment with seed ``env_seed XOR r``.

Scalar helpers operate on python ints masked to 64 bits; the ``*_np`` variants
operate on uint64 arrays and rely on numpy's modular wraparound, which matches
the masked arithmetic exactly (asserted in tests).
"""

from __future__ import annotations

import numpy as np

M64 = (1 << 64) - 1
GOLD = 0x9E3779B97F4A7C15

# Domain separators keep the occupancy oracle, the renewal gap draws and the
# walk streams decorrelated even when a user reuses one seed everywhere.
OCC_DOMAIN = 0x6A09E667F3BCC909
RENEWAL_DOMAIN = 0xBB67AE8584CAA73B

_U = np.uint64


def mix64(z: int) -> int:
    """splitmix64 finalizer on a 64-bit integer."""
    z &= M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
    return (z ^ (z >> 31)) & M64


def mix64_np(z: np.ndarray) -> np.ndarray:
    """Vectorized mix64 on a uint64 array (returns a new array)."""
    z = z.astype(np.uint64, copy=True)
    z ^= z >> _U(30)
    z *= _U(0xBF58476D1CE4E5B9)
    z ^= z >> _U(27)
    z *= _U(0x94D049BB133111EB)
    z ^= z >> _U(31)
    return z


def occupancy_state(seed: int) -> int:
    """Base hash state for site-occupancy queries under ``seed``."""
    return mix64((seed ^ OCC_DOMAIN) & M64)


def renewal_state(seed: int) -> int:
    """Base hash state for renewal gap draws under ``seed``."""
    return mix64((seed ^ RENEWAL_DOMAIN) & M64)


def site_hash(state: int, coords) -> int:
    """Fold integer coordinates into a base state; order-sensitive."""
    h = state
    for c in coords:
        h = mix64(h ^ (int(c) & M64))
    return h


def site_hash_np(state, pts: np.ndarray) -> np.ndarray:
    """Vectorized site_hash for an (N, d) int64 coordinate array.

    ``state`` may be a scalar or an (N,) uint64 array (per-row states, used by
    annealed batches where every replica has its own environment seed).
    """
    pts = np.ascontiguousarray(pts, dtype=np.int64)
    n = pts.shape[0]
    if np.isscalar(state):
        h = np.full(n, _U(state), dtype=np.uint64)
    else:
        h = np.asarray(state, dtype=np.uint64).copy()
    for j in range(pts.shape[1]):
        h = mix64_np(h ^ pts[:, j].view(np.uint64))
    return h


def bernoulli_threshold(density: float) -> int:
    """Map an occupancy probability in (0, 1) to a uint64 comparison threshold."""
    t = int(density * 2.0**64)
    return min(max(t, 1), M64)


class SplitMix64:
    """Sequential splitmix64 stream; one instance per walk replica."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & M64

    def next_u64(self) -> int:
        self._state = (self._state + GOLD) & M64
        return mix64(self._state)

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n); modulo bias < 2^-60 for n <= 8."""
        return self.next_u64() % n

    def next_float(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53


def replica_rng_seed(rng_seed: int, replica: int) -> int:
    return (rng_seed ^ replica) & M64


def replica_env_seed(env_seed: int, replica: int) -> int:
    return (env_seed ^ replica) & M64


def renewal_cdf_u64(gap_pmf) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative uint64 thresholds for inverse-CDF gap draws.

    ``gap_pmf`` is a sequence of (value, probability) pairs with probabilities
    summing to 1.  Returns (cdf, values); a uniform u lands on values[j] where
    j is the first index with u < cdf[j].
    """
    vals = np.array([int(v) for v, _ in gap_pmf], dtype=np.int64)
    acc = 0.0
    thresholds = []
    for _, p in gap_pmf:
        acc += float(p)
        thresholds.append(min(int(acc * 2.0**64), M64))
    thresholds[-1] = M64
    cdf = np.array(thresholds, dtype=np.uint64)
    return cdf, vals


def renewal_gap(state: int, index: int, cdf: np.ndarray, vals: np.ndarray) -> int:
    """Gap value for the signed renewal interval ``index`` (never 0)."""
    u = mix64(state ^ (index & M64))
    j = int(np.searchsorted(cdf, _U(u), side="right"))
    j = min(j, len(vals) - 1)
    return int(vals[j])
