"""Exact sparse evolution of the quenched one-point distribution.

Starting from unit mass at the origin, each step splits every site's mass
among its 2d coordinate nearest neighbors.  Support grows, so sites are
registered on demand in a flat table keyed by packed coordinates; evolution
itself is a bincount scatter over precomputed neighbor index rows.  Nothing
is ever truncated: if the support outgrows the site budget the run dies with
MemoryBudgetExceeded instead of silently dropping mass.

On top of the raw kernel sit the displacement and entropy summaries

    M(n) = sum_x g_n(x) |x|          (Euclidean norm)
    Q(n) = -sum_x g_n(x) log g_n(x)
    S(n) = sum over ordered neighbor pairs (x, y) of (g_n(x)+g_n(y)) |x-y|^2

with g_n = (p^n + p^{n-1})/2, and the inequality report tying their
increments together; the bound checked is (M(n)-M(n-1))^2 <= S(n-1)/(4d) *
(Q(n)-Q(n-1)), whose right-hand side is the Cauchy-Schwarz majorant built
from the pre-step profile.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .env import Environment
from .errors import MassLeak, MemoryBudgetExceeded, ReportFailure

DEFAULT_MAX_SITES = 8_000_000
MASS_TOL = 1e-12
INEQ_SLACK = 1e-10


@dataclass
class SparseDistribution:
    """Finite distribution p^n(0, .) as parallel (points, probs) arrays."""

    points: np.ndarray
    probs: np.ndarray
    n: int

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=np.int64)
        self.probs = np.asarray(self.probs, dtype=np.float64)
        if self.points.ndim != 2 or len(self.points) != len(self.probs):
            raise ValueError("points must be (N, d) aligned with probs")
        if np.any(self.probs < 0):
            raise ValueError("negative probability entry")
        if abs(self.probs.sum() - 1.0) > MASS_TOL:
            raise ValueError(f"mass {self.probs.sum()} not 1 within {MASS_TOL}")

    @classmethod
    def delta_origin(cls, dimension: int) -> "SparseDistribution":
        return cls(np.zeros((1, dimension), dtype=np.int64),
                   np.ones(1), 0)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def support_size(self) -> int:
        return int(np.count_nonzero(self.probs))

    def prob_at(self, point) -> float:
        target = np.asarray(point, dtype=np.int64)
        hit = np.all(self.points == target, axis=1)
        return float(self.probs[hit].sum())

    def as_dict(self) -> dict:
        return {
            tuple(int(c) for c in pt): float(p)
            for pt, p in zip(self.points, self.probs)
            if p > 0
        }


def _pack_spec(dimension: int):
    bits = 63 // dimension
    return bits, 1 << (bits - 1)


class KernelEvolution:
    """Stateful exact evolver; step() advances p^n by one application."""

    def __init__(self, env: Environment, alpha: float = 0.0,
                 max_sites: int | None = None,
                 start: SparseDistribution | None = None):
        self.env = env
        self.d = env.d
        self.alpha = float(alpha)
        self.max_sites = int(max_sites or DEFAULT_MAX_SITES)
        self._bits, self._off = _pack_spec(self.d)
        cap = 1024
        self._pts = np.zeros((cap, self.d), dtype=np.int64)
        self._nbr = np.zeros((cap, 2 * self.d), dtype=np.int32)
        self._gaps = np.zeros((cap, 2 * self.d), dtype=np.int32)
        self._filled = np.zeros(cap, dtype=bool)
        self._size = 0
        self._keys = np.zeros(0, dtype=np.int64)      # sorted registry keys
        self._key_idx = np.zeros(0, dtype=np.int64)   # registry index per key
        self.n = 0
        if start is None:
            start = SparseDistribution.delta_origin(self.d)
        occ = env.occupied_bulk(start.points)
        if not occ.all():
            raise ValueError("distribution supported on unoccupied sites")
        idx = self._register(start.points)
        self.probs = np.zeros(self._size, dtype=np.float64)
        self.probs[idx] = start.probs
        self.prev = None  # p^{n-1} over the registry
        self.n = start.n

    # -- registry plumbing --

    def _pack(self, pts: np.ndarray) -> np.ndarray:
        key = np.zeros(len(pts), dtype=np.int64)
        for j in range(self.d):
            col = pts[:, j] + self._off
            if np.any(col < 0) or np.any(col >= (1 << self._bits)):
                raise MemoryBudgetExceeded(self._size, self.max_sites)
            key = (key << self._bits) | col
        return key

    def _grow(self, need: int):
        cap = len(self._pts)
        while cap < need:
            cap *= 2
        if cap == len(self._pts):
            return
        for name in ("_pts", "_nbr", "_gaps"):
            old = getattr(self, name)
            new = np.zeros((cap,) + old.shape[1:], dtype=old.dtype)
            new[: self._size] = old[: self._size]
            setattr(self, name, new)
        filled = np.zeros(cap, dtype=bool)
        filled[: self._size] = self._filled[: self._size]
        self._filled = filled

    def _register(self, pts: np.ndarray) -> np.ndarray:
        """Indices for pts, appending any previously unseen sites."""
        keys = self._pack(pts)
        pos = np.searchsorted(self._keys, keys)
        pos_c = np.minimum(pos, len(self._keys) - 1) if len(self._keys) else pos
        known = (
            (pos < len(self._keys)) & (self._keys[pos_c] == keys)
            if len(self._keys)
            else np.zeros(len(pts), dtype=bool)
        )
        if not known.all():
            new_keys, first = np.unique(keys[~known], return_index=True)
            new_pts = pts[~known][first]
            need = self._size + len(new_keys)
            if need > self.max_sites:
                raise MemoryBudgetExceeded(need, self.max_sites)
            self._grow(need)
            self._pts[self._size: need] = new_pts
            all_keys = np.concatenate([self._keys, new_keys])
            all_idx = np.concatenate(
                [self._key_idx, np.arange(self._size, need, dtype=np.int64)]
            )
            order = np.argsort(all_keys, kind="stable")
            self._keys = all_keys[order]
            self._key_idx = all_idx[order]
            self._size = need
            pos = np.searchsorted(self._keys, keys)
        return self._key_idx[pos]

    def _fill_rows(self, idx: np.ndarray):
        todo = idx[~self._filled[idx]]
        if not len(todo):
            return
        nbrs, gaps = self.env.neighbors_bulk(self._pts[todo])
        flat_idx = self._register(nbrs.reshape(-1, self.d))
        self._nbr[todo] = flat_idx.reshape(len(todo), 2 * self.d)
        self._gaps[todo] = gaps
        self._filled[todo] = True

    # -- evolution --

    def step(self):
        """One application of the transition operator, in place."""
        support = np.nonzero(self.probs)[0]
        self._fill_rows(support)
        if self.alpha == 0.0:
            weights = np.repeat(self.probs[support] / (2 * self.d), 2 * self.d)
        else:
            w = self._gaps[support].astype(np.float64) ** self.alpha
            w /= w.sum(axis=1, keepdims=True)
            weights = (self.probs[support, None] * w).ravel()
        flat = self._nbr[support].ravel()
        new = np.bincount(flat, weights=weights, minlength=self._size)
        total = new.sum()
        if abs(total - 1.0) > MASS_TOL:
            raise MassLeak(self.n + 1, float(total))
        self.prev = self.probs
        # pin the total back to 1 so rounding never accumulates across steps
        self.probs = new / total
        if len(self.prev) < self._size:
            self.prev = np.concatenate(
                [self.prev, np.zeros(self._size - len(self.prev))]
            )
        self.n += 1

    def origin_prob(self) -> float:
        idx = self._register(np.zeros((1, self.d), dtype=np.int64))
        return float(self.probs[idx[0]]) if idx[0] < len(self.probs) else 0.0

    def distribution(self) -> SparseDistribution:
        live = np.nonzero(self.probs)[0]
        return SparseDistribution(
            self._pts[live].copy(), self.probs[live].copy(), self.n
        )

    # -- summaries of the current g_n = (p^n + p^{n-1}) / 2 --

    def _g(self):
        if self.n == 0:
            # time-zero convention: g_0 is the delta mass itself
            return self.probs
        prev = self.prev
        if len(prev) < len(self.probs):
            prev = np.concatenate([prev, np.zeros(len(self.probs) - len(prev))])
        return 0.5 * (self.probs + prev)

    def summaries(self) -> tuple[float, float, float, int]:
        """(M, Q, S, support size) of the current g_n."""
        g = self._g()
        live = np.nonzero(g)[0]
        self._fill_rows(live)
        gv = g[live]
        norms = np.sqrt((self._pts[live].astype(np.float64) ** 2).sum(axis=1))
        m_val = float(np.dot(gv, norms))
        q_val = float(-np.dot(gv, np.log(gv)))
        gap2 = (self._gaps[live].astype(np.float64) ** 2).sum(axis=1)
        s_val = float(2.0 * np.dot(gv, gap2))
        return m_val, q_val, s_val, int(len(live))


def evolve(env: Environment, dist: SparseDistribution,
           alpha: float = 0.0) -> SparseDistribution:
    """One transition step applied to an explicit distribution."""
    ev = KernelEvolution(env, alpha=alpha, start=dist)
    ev.step()
    return ev.distribution()


def heat_kernel_diagonal(env: Environment, N: int,
                         max_sites: int | None = None) -> np.ndarray:
    """Exact p^n(0,0) for n = 0..N."""
    ev = KernelEvolution(env, max_sites=max_sites)
    out = np.zeros(N + 1)
    out[0] = 1.0
    for n in range(1, N + 1):
        ev.step()
        out[n] = ev.origin_prob()
    return out


@dataclass
class DisplacementEntropySeries:
    """Arrays indexed by n = 0..N; index 0 holds the time-zero conventions."""

    dimension: int
    M: np.ndarray
    Q: np.ndarray
    S: np.ndarray
    support: np.ndarray
    diagonal: np.ndarray = field(default=None)

    def __len__(self):
        return len(self.M)

    @property
    def N(self) -> int:
        return len(self.M) - 1


def series_from_arrays(dimension, M, Q, S,
                       support=None, diagonal=None) -> DisplacementEntropySeries:
    """Wrap preexisting arrays (used for fabricated negative controls)."""
    M = np.asarray(M, dtype=np.float64)
    Q = np.asarray(Q, dtype=np.float64)
    S = np.asarray(S, dtype=np.float64)
    if not (len(M) == len(Q) == len(S)):
        raise ValueError("M, Q, S must be equally long")
    if support is None:
        support = np.zeros(len(M), dtype=np.int64)
    if diagonal is None:
        diagonal = np.full(len(M), np.nan)
    return DisplacementEntropySeries(dimension, M, Q, S,
                                     np.asarray(support), np.asarray(diagonal))


def displacement_entropy_series(env: Environment, N: int,
                                max_sites: int | None = None
                                ) -> DisplacementEntropySeries:
    """Evolve to time N recording M, Q, S, support size, and p^n(0,0).

    Index 0 carries M(0) = Q(0) = 0 by convention and S(0) computed from the
    delta mass at the origin, which is what the first Cauchy-Schwarz step of
    the increment bound needs.
    """
    ev = KernelEvolution(env, max_sites=max_sites)
    M = np.zeros(N + 1)
    Q = np.zeros(N + 1)
    S = np.zeros(N + 1)
    support = np.zeros(N + 1, dtype=np.int64)
    diagonal = np.zeros(N + 1)
    _, _, S[0], support[0] = ev.summaries()
    M[0] = 0.0
    Q[0] = 0.0
    diagonal[0] = 1.0
    for n in range(1, N + 1):
        ev.step()
        M[n], Q[n], S[n], support[n] = ev.summaries()
        diagonal[n] = ev.origin_prob()
    return DisplacementEntropySeries(env.d, M, Q, S, support, diagonal)


@dataclass
class InequalityReport:
    """Outcome of the five increment/growth checks on one series."""

    dimension: int
    N: int
    q_monotone: bool
    q_slope: float
    q_slope_ok: bool
    ratio_floor: float
    ratio_floor_ok: bool
    increment_ok: bool
    diffusive_spread: float
    diffusive_ok: bool
    failures: list = field(default_factory=list)

    def all_ok(self) -> bool:
        return not self.failures


def check_inequalities(series: DisplacementEntropySeries,
                       raise_on_failure: bool = True) -> InequalityReport:
    """Run the five checks; list of (check name, first violated index).

    (a) Q nondecreasing; (b) second-half slope of Q vs log n at least d/2 -
    0.1; (c) M / exp(Q/d) bounded below by a positive constant; (d)
    squared M-increments dominated by S/(4d) times Q-increments; (e)
    max/min of M/sqrt(n) over the last three quarters at most 3.
    """
    N = series.N
    if N < 50:
        raise ValueError(f"series too short for the checks: N={N} < 50")
    d = series.dimension
    M, Q, S = series.M, series.Q, series.S
    failures = []

    viol = np.nonzero(np.diff(Q) < -MASS_TOL)[0]
    q_monotone = len(viol) == 0
    if not q_monotone:
        failures.append(("q_monotone", int(viol[0] + 1)))

    half = np.arange(max(1, N // 2), N + 1)
    q_slope = float(np.polyfit(np.log(half), Q[half], 1)[0])
    q_slope_ok = q_slope >= d / 2 - 0.1
    if not q_slope_ok:
        failures.append(("q_slope", -1))

    ns = np.arange(1, N + 1)
    ratio = M[ns] / np.exp(Q[ns] / d)
    ratio_floor = float(ratio.min())
    ratio_floor_ok = ratio_floor > 0
    if not ratio_floor_ok:
        failures.append(("ratio_floor", int(ns[np.argmin(ratio)])))

    lhs = np.diff(M) ** 2
    rhs = (S[:-1] / (4 * d)) * np.diff(Q) + INEQ_SLACK
    bad = np.nonzero(lhs > rhs)[0]
    increment_ok = len(bad) == 0
    if not increment_ok:
        failures.append(("increment", int(bad[0] + 1)))

    lo = max(1, N // 4)
    win = np.arange(lo, N + 1)
    spread_vals = M[win] / np.sqrt(win)
    diffusive_spread = float(spread_vals.max() / spread_vals.min())
    diffusive_ok = diffusive_spread <= 3.0
    if not diffusive_ok:
        failures.append(("diffusive", -1))

    report = InequalityReport(
        dimension=d, N=N, q_monotone=q_monotone, q_slope=q_slope,
        q_slope_ok=q_slope_ok, ratio_floor=ratio_floor,
        ratio_floor_ok=ratio_floor_ok, increment_ok=increment_ok,
        diffusive_spread=diffusive_spread, diffusive_ok=diffusive_ok,
        failures=failures,
    )
    if failures and raise_on_failure:
        raise ReportFailure(failures)
    return report
