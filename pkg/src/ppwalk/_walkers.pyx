# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled walker core: scalar per-replica loops over splitmix64 streams.

Twin of ppwalk._walkers_py; outputs are bit-identical (parity-tested).
The replica loops release the GIL so the caller can shard replicas across
threads via the r0/m arguments.
"""

import numpy as np

from .errors import ScanExceeded

from libc.stdint cimport int32_t, int64_t, uint8_t, uint64_t

cdef uint64_t GOLD = 0x9E3779B97F4A7C15ULL
cdef uint64_t OCC_DOMAIN = 0x6A09E667F3BCC909ULL
cdef uint64_t RENEWAL_DOMAIN = 0xBB67AE8584CAA73BULL
cdef uint64_t M64 = 0xFFFFFFFFFFFFFFFFULL

BACKEND_NAME = "compiled"


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def py_mix64(z):
    """Scalar mix64 exposed for parity tests."""
    return int(mix64(<uint64_t> (int(z) & 0xFFFFFFFFFFFFFFFF)))


cdef inline uint64_t occ_base_for(uint64_t env_seed, uint64_t replica,
                                  bint annealed) nogil:
    if annealed:
        return mix64((env_seed ^ replica) ^ OCC_DOMAIN)
    return mix64(env_seed ^ OCC_DOMAIN)


cdef inline int site_occupied(uint64_t occ_base, int64_t *pbuf, int d,
                              int axis, int64_t shifted, uint64_t thr) nogil:
    """Occupancy of the point equal to pbuf with coordinate `axis` replaced."""
    cdef uint64_t h = occ_base
    cdef int j
    cdef int64_t c
    cdef int is_origin = 1
    for j in range(d):
        c = shifted if j == axis else pbuf[j]
        if c != 0:
            is_origin = 0
        h = mix64(h ^ (<uint64_t> c))
    if is_origin:
        return 1
    return h < thr


def _lattice_core(int d, long long n_steps, object env_seed, object rng_seed,
                  long long r0, long long m, object threshold, bint full,
                  bint annealed, long long max_scan, bint record):
    cdef uint64_t es = <uint64_t> (int(env_seed) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t rs = <uint64_t> (int(rng_seed) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t thr = <uint64_t> (int(threshold) & 0xFFFFFFFFFFFFFFFF)
    cdef int twod = 2 * d

    out_pos = np.zeros((m, d), dtype=np.int64)
    cdef int64_t[:, ::1] pos = out_pos
    cdef uint8_t[:, ::1] dirs_mv
    cdef int32_t[:, ::1] gaps_mv
    if record:
        out_dirs = np.zeros((m, n_steps), dtype=np.uint8)
        out_gaps = np.zeros((m, n_steps), dtype=np.int32)
        dirs_mv = out_dirs
        gaps_mv = out_gaps

    cdef int64_t pbuf[16]
    cdef uint64_t state, occ_base, u
    cdef long long r, stp
    cdef int64_t k, sign, shifted
    cdef int j, axis, direction
    cdef int err = 0
    cdef long long err_r = 0
    cdef int err_axis = 0
    cdef int64_t err_sign = 0

    with nogil:
        for r in range(m):
            state = rs ^ (<uint64_t> (r0 + r))
            occ_base = occ_base_for(es, <uint64_t> (r0 + r), annealed)
            for j in range(d):
                pbuf[j] = 0
            for stp in range(n_steps):
                state += GOLD
                u = mix64(state)
                direction = <int> (u % (<uint64_t> twod))
                axis = direction >> 1
                sign = 1 if (direction & 1) == 0 else -1
                if full:
                    k = 1
                else:
                    k = 0
                    while True:
                        k += 1
                        if k > max_scan:
                            err = 1
                            err_r = r
                            err_axis = axis
                            err_sign = sign
                            break
                        shifted = pbuf[axis] + sign * k
                        if site_occupied(occ_base, pbuf, d, axis, shifted, thr):
                            break
                    if err:
                        break
                pbuf[axis] += sign * k
                if record:
                    dirs_mv[r, stp] = <uint8_t> direction
                    gaps_mv[r, stp] = <int32_t> k
            if err:
                break
            for j in range(d):
                pos[r, j] = pbuf[j]

    if err:
        raise ScanExceeded(tuple(out_pos[err_r]), (err_axis, int(err_sign)),
                           max_scan)
    if record:
        return out_dirs, out_gaps
    return out_pos


def walk_lattice_batch(d, n_steps, env_seed, rng_seed, r0, m, threshold, full,
                       annealed, max_scan):
    return _lattice_core(d, n_steps, env_seed, rng_seed, r0, m, threshold,
                         full, annealed, max_scan, False)


def walk_lattice_deltas(d, n_steps, env_seed, rng_seed, r0, m, threshold, full,
                        annealed, max_scan):
    return _lattice_core(d, n_steps, env_seed, rng_seed, r0, m, threshold,
                         full, annealed, max_scan, True)


cdef inline int64_t renewal_draw(uint64_t ren_base, int64_t index,
                                 uint64_t[::1] cdf, int64_t[::1] vals) nogil:
    cdef uint64_t u = mix64(ren_base ^ (<uint64_t> index))
    cdef Py_ssize_t j
    cdef Py_ssize_t last = vals.shape[0] - 1
    for j in range(last):
        if u < cdf[j]:
            return vals[j]
    return vals[last]


def _renewal_core(long long n_steps, object env_seed, object rng_seed,
                  long long r0, long long m, bint annealed, cdf_arr, vals_arr,
                  bint record):
    cdef uint64_t es = <uint64_t> (int(env_seed) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t rs = <uint64_t> (int(rng_seed) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t[::1] cdf = np.ascontiguousarray(cdf_arr, dtype=np.uint64)
    cdef int64_t[::1] vals = np.ascontiguousarray(vals_arr, dtype=np.int64)

    out_x = np.zeros((m, 1), dtype=np.int64)
    cdef int64_t[:, ::1] xv = out_x
    cdef uint8_t[:, ::1] dirs_mv
    cdef int32_t[:, ::1] gaps_mv
    if record:
        out_dirs = np.zeros((m, n_steps), dtype=np.uint8)
        out_gaps = np.zeros((m, n_steps), dtype=np.int32)
        dirs_mv = out_dirs
        gaps_mv = out_gaps

    cdef uint64_t state, ren_base, u
    cdef long long r, stp
    cdef int64_t x, kidx, j, draw, gap
    cdef int direction

    with nogil:
        for r in range(m):
            state = rs ^ (<uint64_t> (r0 + r))
            if annealed:
                ren_base = mix64((es ^ (<uint64_t> (r0 + r))) ^ RENEWAL_DOMAIN)
            else:
                ren_base = mix64(es ^ RENEWAL_DOMAIN)
            x = 0
            kidx = 0
            for stp in range(n_steps):
                state += GOLD
                u = mix64(state)
                direction = <int> (u % 2)
                if direction == 0:
                    j = kidx
                else:
                    j = kidx - 1
                draw = j + 1 if j >= 0 else j
                gap = renewal_draw(ren_base, draw, cdf, vals)
                if direction == 0:
                    x += gap
                    kidx += 1
                else:
                    x -= gap
                    kidx -= 1
                if record:
                    dirs_mv[r, stp] = <uint8_t> direction
                    gaps_mv[r, stp] = <int32_t> gap
            xv[r, 0] = x

    if record:
        return out_dirs, out_gaps
    return out_x


def walk_renewal_batch(n_steps, env_seed, rng_seed, r0, m, annealed, cdf, vals):
    return _renewal_core(n_steps, env_seed, rng_seed, r0, m, annealed, cdf,
                         vals, False)


def walk_renewal_deltas(n_steps, env_seed, rng_seed, r0, m, annealed, cdf, vals):
    return _renewal_core(n_steps, env_seed, rng_seed, r0, m, annealed, cdf,
                         vals, True)


def _table_core(nbr_arr, disp_arr, int d, long long n_steps, object rng_seed,
                long long r0, long long m, long long start, bint record):
    cdef uint64_t rs = <uint64_t> (int(rng_seed) & 0xFFFFFFFFFFFFFFFF)
    cdef int32_t[:, ::1] nbr = np.ascontiguousarray(nbr_arr, dtype=np.int32)
    cdef int32_t[:, ::1] disp = np.ascontiguousarray(disp_arr, dtype=np.int32)
    cdef int twod = nbr.shape[1]

    out_site = np.zeros(m, dtype=np.int32)
    out_pos = np.zeros((m, d), dtype=np.int64)
    cdef int32_t[::1] sv = out_site
    cdef int64_t[:, ::1] pv = out_pos
    cdef uint8_t[:, ::1] dirs_mv
    cdef int32_t[:, ::1] disp_mv
    if record:
        out_dirs = np.zeros((m, n_steps), dtype=np.uint8)
        out_disp = np.zeros((m, n_steps), dtype=np.int32)
        dirs_mv = out_dirs
        disp_mv = out_disp

    cdef uint64_t state, u
    cdef long long r, stp
    cdef int64_t pbuf[16]
    cdef int32_t site, dsp
    cdef int j, direction

    with nogil:
        for r in range(m):
            state = rs ^ (<uint64_t> (r0 + r))
            site = <int32_t> start
            for j in range(d):
                pbuf[j] = 0
            for stp in range(n_steps):
                state += GOLD
                u = mix64(state)
                direction = <int> (u % (<uint64_t> twod))
                dsp = disp[site, direction]
                pbuf[direction >> 1] += dsp
                site = nbr[site, direction]
                if record:
                    dirs_mv[r, stp] = <uint8_t> direction
                    disp_mv[r, stp] = dsp
            sv[r] = site
            for j in range(d):
                pv[r, j] = pbuf[j]

    if record:
        return out_dirs, out_disp
    return out_site, out_pos


def walk_table_batch(nbr, disp, d, n_steps, rng_seed, r0, m, start):
    return _table_core(nbr, disp, d, n_steps, rng_seed, r0, m, start, False)


def walk_table_deltas(nbr, disp, d, n_steps, rng_seed, r0, m, start):
    return _table_core(nbr, disp, d, n_steps, rng_seed, r0, m, start, True)
