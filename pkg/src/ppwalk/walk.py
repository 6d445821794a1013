"""Quenched and annealed walk simulation on point-process environments.

A walker at an occupied site x picks one of its 2d coordinate nearest
neighbors.  With ``alpha`` = 0 the choice is uniform; otherwise neighbor u is
weighted by ``|u - x|^alpha`` and renormalized, which interpolates toward
gap-seeking (alpha > 0) or gap-avoiding (alpha < 0) behavior.  The alpha = 0
walk is the reversible one all the limit theorems are about; alpha != 0 is
exposed for experimentation only.

Trajectories are stored as (direction, gap) delta pairs, so a million-step
path costs five bytes per step.  Replica r of a run derives its generator
stream from ``rng_seed ^ r`` and, for annealed runs, its environment from
``env_seed ^ r``; runs are therefore reproducible and shard across threads
without coordination.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import backend, prf
from .env import Direction, Environment, EnvironmentConfig, directions
from .errors import ConfigError

_FAST_KINDS = ("full", "bernoulli", "renewal")


@dataclass(frozen=True)
class WalkConfig:
    steps: int
    replicas: int = 1
    alpha: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.steps < 0:
            raise ConfigError(f"steps must be >= 0, got {self.steps}")
        if self.replicas < 1:
            raise ConfigError(f"replicas must be >= 1, got {self.replicas}")
        if not math.isfinite(self.alpha):
            raise ConfigError("alpha must be finite")
        if not 0 <= self.rng_seed <= prf.M64:
            raise ConfigError("rng_seed must fit in 64 bits")


class Trajectory:
    """One walk path, held as per-step (direction column, gap) deltas."""

    def __init__(self, dimension, dirs, gaps, env_seed, rng_seed, replica):
        self.dimension = int(dimension)
        self.dirs = np.asarray(dirs, dtype=np.uint8)
        self.gaps = np.asarray(gaps, dtype=np.int32)
        if self.dirs.shape != self.gaps.shape or self.dirs.ndim != 1:
            raise ValueError("dirs and gaps must be equal-length 1d arrays")
        self.env_seed = int(env_seed)
        self.rng_seed = int(rng_seed)
        self.replica = int(replica)

    def __len__(self):
        return len(self.dirs)

    def positions(self) -> np.ndarray:
        """The full path X_0..X_n as an (n+1, d) integer array."""
        n = len(self.dirs)
        disp = np.zeros((n + 1, self.dimension), dtype=np.int64)
        axes = (self.dirs >> 1).astype(np.intp)
        signed = np.where(self.dirs & 1, -self.gaps, self.gaps).astype(np.int64)
        disp[np.arange(1, n + 1), axes] = signed
        return np.cumsum(disp, axis=0)

    def endpoint(self) -> tuple[int, ...]:
        n = len(self.dirs)
        out = np.zeros(self.dimension, dtype=np.int64)
        signed = np.where(self.dirs & 1, -self.gaps, self.gaps).astype(np.int64)
        np.add.at(out, (self.dirs >> 1).astype(np.intp), signed)
        return tuple(int(c) for c in out)


def step(env: Environment, x, rng: prf.SplitMix64, alpha: float = 0.0):
    """One transition from occupied x; returns the new point.

    alpha = 0 draws the direction column directly from the stream (matching
    the compiled cores bit for bit); alpha != 0 weights neighbor u by
    |u - x|^alpha and inverts the cumulative weights with one uniform draw.
    """
    x = tuple(int(c) for c in x)
    dirs = directions(env.d)
    if alpha == 0.0:
        col = rng.next_u64() % (2 * env.d)
        return env.induced_shift(x, dirs[col])
    gaps = [env.gap(x, dirn) for dirn in dirs]
    weights = [g**alpha for g in gaps]
    total = sum(weights)
    u = rng.next_float() * total
    acc = 0.0
    col = 2 * env.d - 1
    for j, w in enumerate(weights):
        acc += w
        if u < acc:
            col = j
            break
    dirn = dirs[col]
    y = list(x)
    y[dirn.axis - 1] += dirn.sign * gaps[col]
    return tuple(y)


def _python_deltas(env, steps, rng_seed, replica, alpha):
    """Reference delta recorder used for alpha != 0 and periodic environments."""
    rng = prf.SplitMix64(prf.replica_rng_seed(rng_seed, replica))
    dirs = np.zeros(steps, dtype=np.uint8)
    gaps = np.zeros(steps, dtype=np.int32)
    x = (0,) * env.d
    for k in range(steps):
        y = step(env, x, rng, alpha)
        (axis,) = [j for j in range(env.d) if y[j] != x[j]] or [0]
        delta = y[axis] - x[axis]
        dirs[k] = 2 * axis + (0 if delta > 0 else 1)
        gaps[k] = abs(delta)
        x = y
    return dirs, gaps


def _backend_deltas(env_cfg, steps, rng_seed, r0, m, annealed):
    core = backend.get()
    if env_cfg.kind == "renewal":
        cdf, vals = prf.renewal_cdf_u64(env_cfg.gap_pmf)
        return core.walk_renewal_deltas(
            steps, env_cfg.seed, rng_seed, r0, m, annealed, cdf, vals
        )
    full = env_cfg.kind == "full"
    threshold = 0 if full else prf.bernoulli_threshold(env_cfg.density)
    return core.walk_lattice_deltas(
        env_cfg.dimension, steps, env_cfg.seed, rng_seed, r0, m,
        threshold, full, annealed, env_cfg.max_scan,
    )


def run_quenched(env: Environment, cfg: WalkConfig) -> list[Trajectory]:
    """m replica trajectories in the single environment ``env``."""
    env_cfg = env.config
    if cfg.alpha == 0.0 and env_cfg.kind in _FAST_KINDS:
        dirs, gaps = _backend_deltas(
            env_cfg, cfg.steps, cfg.rng_seed, 0, cfg.replicas, False
        )
        return [
            Trajectory(env_cfg.dimension, dirs[r], gaps[r],
                       env_cfg.seed, cfg.rng_seed, r)
            for r in range(cfg.replicas)
        ]
    out = []
    for r in range(cfg.replicas):
        dirs, gaps = _python_deltas(env, cfg.steps, cfg.rng_seed, r, cfg.alpha)
        out.append(
            Trajectory(env_cfg.dimension, dirs, gaps, env_cfg.seed,
                       cfg.rng_seed, r)
        )
    return out


def run_annealed(cfg: WalkConfig, env_cfg: EnvironmentConfig) -> list[Trajectory]:
    """m trajectories, each in a freshly seeded environment."""
    if cfg.alpha == 0.0 and env_cfg.kind in _FAST_KINDS:
        dirs, gaps = _backend_deltas(
            env_cfg, cfg.steps, cfg.rng_seed, 0, cfg.replicas, True
        )
        return [
            Trajectory(env_cfg.dimension, dirs[r], gaps[r],
                       prf.replica_env_seed(env_cfg.seed, r), cfg.rng_seed, r)
            for r in range(cfg.replicas)
        ]
    out = []
    for r in range(cfg.replicas):
        seed_r = prf.replica_env_seed(env_cfg.seed, r)
        env_r = Environment(
            EnvironmentConfig(
                dimension=env_cfg.dimension, kind=env_cfg.kind, seed=seed_r,
                density=env_cfg.density, gap_pmf=env_cfg.gap_pmf,
                pattern=env_cfg.pattern, max_scan=env_cfg.max_scan,
            )
        )
        dirs, gaps = _python_deltas(env_r, cfg.steps, cfg.rng_seed, r, cfg.alpha)
        out.append(
            Trajectory(env_cfg.dimension, dirs, gaps, seed_r, cfg.rng_seed, r)
        )
    return out


def _chunk_ranges(m: int, threads: int):
    size = (m + threads - 1) // threads
    return [(r0, min(size, m - r0)) for r0 in range(0, m, size)]


def _sample_endpoints(env_cfg, steps, replicas, rng_seed, annealed, threads):
    core = backend.get()
    if env_cfg.kind == "renewal":
        cdf, vals = prf.renewal_cdf_u64(env_cfg.gap_pmf)

        def job(r0, m):
            return core.walk_renewal_batch(
                steps, env_cfg.seed, rng_seed, r0, m, annealed, cdf, vals
            )
    elif env_cfg.kind in ("full", "bernoulli"):
        full = env_cfg.kind == "full"
        threshold = 0 if full else prf.bernoulli_threshold(env_cfg.density)

        def job(r0, m):
            return core.walk_lattice_batch(
                env_cfg.dimension, steps, env_cfg.seed, rng_seed, r0, m,
                threshold, full, annealed, env_cfg.max_scan,
            )
    else:
        env = Environment(env_cfg)

        def job(r0, m):
            rows = np.zeros((m, env_cfg.dimension), dtype=np.int64)
            for i in range(m):
                r = r0 + i
                if annealed:
                    seed_r = prf.replica_env_seed(env_cfg.seed, r)
                    env_r = Environment(
                        EnvironmentConfig(
                            dimension=env_cfg.dimension, kind=env_cfg.kind,
                            seed=seed_r, pattern=env_cfg.pattern,
                            max_scan=env_cfg.max_scan,
                        )
                    )
                else:
                    env_r = env
                rng = prf.SplitMix64(prf.replica_rng_seed(rng_seed, r))
                x = (0,) * env_cfg.dimension
                for _ in range(steps):
                    x = step(env_r, x, rng, 0.0)
                rows[i] = x
            return rows

    chunks = _chunk_ranges(replicas, max(1, threads))
    if len(chunks) == 1:
        return job(*chunks[0])
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        parts = list(pool.map(lambda c: job(*c), chunks))
    return np.vstack(parts)


def sample_endpoints_quenched(env_cfg: EnvironmentConfig, steps: int,
                              replicas: int, rng_seed: int,
                              threads: int = 1) -> np.ndarray:
    """Endpoints X_n of m replicas in one shared environment, shape (m, d)."""
    return _sample_endpoints(env_cfg, steps, replicas, rng_seed, False, threads)


def sample_endpoints_annealed(env_cfg: EnvironmentConfig, steps: int,
                              replicas: int, rng_seed: int,
                              threads: int = 1) -> np.ndarray:
    """Endpoints X_n of m replicas, each in its own environment, shape (m, d)."""
    return _sample_endpoints(env_cfg, steps, replicas, rng_seed, True, threads)


def endpoint_matrix(trajectories) -> np.ndarray:
    return np.array([t.endpoint() for t in trajectories], dtype=np.int64)


def write_trajectory_csv(path, trajectory: Trajectory, meta: dict | None = None):
    """Dump a path as CSV: one header comment with seeds, then step,x_1..x_d."""
    pos = trajectory.positions()
    header = {
        "env_seed": trajectory.env_seed,
        "rng_seed": trajectory.rng_seed,
        "replica": trajectory.replica,
    }
    if meta:
        header.update(meta)
    with open(path, "w", newline="") as fh:
        fh.write("# " + json.dumps(header, sort_keys=True) + "\n")
        writer = csv.writer(fh)
        writer.writerow(
            ["step"] + [f"x_{j}" for j in range(1, trajectory.dimension + 1)]
        )
        for k, row in enumerate(pos):
            writer.writerow([k] + [int(c) for c in row])
