"""Pure-python walker core: numpy-vectorized batches of walk replicas.

Fallback twin of the compiled ``ppwalk._walkers`` extension.  Every function
here produces bit-identical output to the compiled version (parity-tested);
vectorization is across replicas, so the per-replica splitmix64 streams and
hash probes match a scalar replay exactly.
"""

from __future__ import annotations

import numpy as np

from .errors import ScanExceeded
from .prf import GOLD, M64, OCC_DOMAIN, RENEWAL_DOMAIN, mix64_np

_U = np.uint64

BACKEND_NAME = "python"


def _streams(rng_seed, r0, m):
    replicas = np.arange(r0, r0 + m, dtype=np.uint64)
    return _U(rng_seed & M64) ^ replicas


def _occ_bases(env_seed, r0, m, annealed):
    if annealed:
        replicas = np.arange(r0, r0 + m, dtype=np.uint64)
        return mix64_np((_U(env_seed & M64) ^ replicas) ^ _U(OCC_DOMAIN))
    base = mix64_np(np.array([(env_seed & M64) ^ OCC_DOMAIN], dtype=np.uint64))[0]
    return np.full(m, base, dtype=np.uint64)


def _renewal_bases(env_seed, r0, m, annealed):
    if annealed:
        replicas = np.arange(r0, r0 + m, dtype=np.uint64)
        return mix64_np((_U(env_seed & M64) ^ replicas) ^ _U(RENEWAL_DOMAIN))
    base = mix64_np(np.array([(env_seed & M64) ^ RENEWAL_DOMAIN], dtype=np.uint64))[0]
    return np.full(m, base, dtype=np.uint64)


def _scan_gaps(pos, axis, sign, occ_bases, threshold, max_scan):
    """Per-replica distance to the next occupied site along (axis, sign)."""
    m, d = pos.shape
    gap = np.zeros(m, dtype=np.int64)
    active = np.arange(m)
    k = 0
    thr = _U(threshold)
    while active.size:
        k += 1
        if k > max_scan:
            r = int(active[0])
            raise ScanExceeded(pos[r], (int(axis[r]), int(sign[r])), max_scan)
        h = occ_bases[active].copy()
        is_origin = np.ones(active.size, dtype=bool)
        for j in range(d):
            c = pos[active, j]
            on_axis = axis[active] == j
            c = np.where(on_axis, c + sign[active] * k, c)
            is_origin &= c == 0
            h = mix64_np(h ^ c.view(np.uint64))
        occ = (h < thr) | is_origin
        gap[active[occ]] = k
        active = active[~occ]
    return gap


def _lattice_core(d, n_steps, env_seed, rng_seed, r0, m, threshold, full,
                  annealed, max_scan, record):
    states = _streams(rng_seed, r0, m)
    occ_bases = None if full else _occ_bases(env_seed, r0, m, annealed)
    pos = np.zeros((m, d), dtype=np.int64)
    rows = np.arange(m)
    twod = _U(2 * d)
    if record:
        out_dirs = np.zeros((m, n_steps), dtype=np.uint8)
        out_gaps = np.zeros((m, n_steps), dtype=np.int32)
    for step in range(n_steps):
        states += _U(GOLD)
        u = mix64_np(states)
        dirs = (u % twod).astype(np.int64)
        axis = dirs >> 1
        sign = 1 - 2 * (dirs & 1)
        if full:
            gap = np.ones(m, dtype=np.int64)
        else:
            gap = _scan_gaps(pos, axis, sign, occ_bases, threshold, max_scan)
        pos[rows, axis] += sign * gap
        if record:
            out_dirs[:, step] = dirs
            out_gaps[:, step] = gap
    if record:
        return out_dirs, out_gaps
    return pos


def walk_lattice_batch(d, n_steps, env_seed, rng_seed, r0, m, threshold, full,
                       annealed, max_scan):
    """Endpoints (m, d) of m replicas on a full/Bernoulli lattice environment."""
    return _lattice_core(d, n_steps, env_seed, rng_seed, r0, m, threshold,
                         full, annealed, max_scan, record=False)


def walk_lattice_deltas(d, n_steps, env_seed, rng_seed, r0, m, threshold, full,
                        annealed, max_scan):
    """Per-step (direction, gap) arrays, shapes (m, n_steps)."""
    return _lattice_core(d, n_steps, env_seed, rng_seed, r0, m, threshold,
                         full, annealed, max_scan, record=True)


def _renewal_core(n_steps, env_seed, rng_seed, r0, m, annealed, cdf, vals,
                  record):
    states = _streams(rng_seed, r0, m)
    ren_bases = _renewal_bases(env_seed, r0, m, annealed)
    cdf = np.ascontiguousarray(cdf, dtype=np.uint64)
    vals = np.ascontiguousarray(vals, dtype=np.int64)
    x = np.zeros(m, dtype=np.int64)
    kidx = np.zeros(m, dtype=np.int64)
    last = len(vals) - 1
    if record:
        out_dirs = np.zeros((m, n_steps), dtype=np.uint8)
        out_gaps = np.zeros((m, n_steps), dtype=np.int32)
    for step in range(n_steps):
        states += _U(GOLD)
        u = mix64_np(states)
        dirs = (u % _U(2)).astype(np.int64)
        right = dirs == 0
        j = np.where(right, kidx, kidx - 1)
        draw = np.where(j >= 0, j + 1, j)
        uu = mix64_np(ren_bases ^ draw.view(np.uint64))
        gap = vals[np.minimum(np.searchsorted(cdf, uu, side="right"), last)]
        x += np.where(right, gap, -gap)
        kidx += np.where(right, 1, -1)
        if record:
            out_dirs[:, step] = dirs
            out_gaps[:, step] = gap
    if record:
        return out_dirs, out_gaps
    return x.reshape(m, 1)


def walk_renewal_batch(n_steps, env_seed, rng_seed, r0, m, annealed, cdf, vals):
    """Endpoints (m, 1) of m replicas on a 1d renewal environment."""
    return _renewal_core(n_steps, env_seed, rng_seed, r0, m, annealed, cdf,
                         vals, record=False)


def walk_renewal_deltas(n_steps, env_seed, rng_seed, r0, m, annealed, cdf, vals):
    return _renewal_core(n_steps, env_seed, rng_seed, r0, m, annealed, cdf,
                         vals, record=True)


def _table_core(nbr, disp, d, n_steps, rng_seed, r0, m, start, record):
    nbr = np.ascontiguousarray(nbr, dtype=np.int32)
    disp = np.ascontiguousarray(disp, dtype=np.int32)
    states = _streams(rng_seed, r0, m)
    site = np.full(m, start, dtype=np.int64)
    pos = np.zeros((m, d), dtype=np.int64)
    rows = np.arange(m)
    twod = _U(nbr.shape[1])
    if record:
        out_dirs = np.zeros((m, n_steps), dtype=np.uint8)
        out_disp = np.zeros((m, n_steps), dtype=np.int32)
    for step in range(n_steps):
        states += _U(GOLD)
        u = mix64_np(states)
        dirs = (u % twod).astype(np.int64)
        dsp = disp[site, dirs]
        pos[rows, dirs >> 1] += dsp
        site = nbr[site, dirs].astype(np.int64)
        if record:
            out_dirs[:, step] = dirs
            out_disp[:, step] = dsp
    if record:
        return out_dirs, out_disp
    return site.astype(np.int32), pos


def walk_table_batch(nbr, disp, d, n_steps, rng_seed, r0, m, start):
    """Walk on a precomputed neighbor table (torus); returns (sites, positions).

    ``positions`` are unwrapped displacements in Z^d accumulated from the
    signed per-edge offsets in ``disp``.
    """
    return _table_core(nbr, disp, d, n_steps, rng_seed, r0, m, start,
                       record=False)


def walk_table_deltas(nbr, disp, d, n_steps, rng_seed, r0, m, start):
    return _table_core(nbr, disp, d, n_steps, rng_seed, r0, m, start,
                       record=True)
