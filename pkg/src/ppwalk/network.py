"""Cut-edge electrical network and Nash-Williams recurrence diagnostics (d=2).

Every neighbor edge of the occupied graph runs along a row or a column and
spans the gap between two consecutive occupied sites there.  The network
subdivides an edge of length k into k unit edges of conductance k, which
preserves effective resistance while making cutsets easy to enumerate:
the unit edges leaving the box [-n, n]^2 (exactly one endpoint inside) sit at
the four sides, one horizontal straddle pair per row |y| <= n and one
vertical pair per column |x| <= n.

A straddle's conductance is the distance between the occupied sites
bracketing the crossing, so everything reduces to per-line sorted arrays of
occupied coordinates plus searchsorted.  The empirical law of a unit edge's
conductance is the size-biased gap law k P(f=k)/E(f): long parent edges own
proportionally many unit slots.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .env import Direction, Environment, EnvironmentConfig
from .errors import WindowTooSmall

_BUILD_PAD = 64


@dataclass
class CutNetwork:
    """Per-row and per-column sorted occupied coordinates over a window.

    Arrays bracket the window: each nonempty line extends to a site <= -R
    and a site >= R, so every straddle query for n < R stays in range.
    Lines with no occupied site in the padded window are stored empty.
    """

    R: int
    rows: dict
    cols: dict
    env_config: EnvironmentConfig

    def line(self, level: str, index: int) -> np.ndarray:
        return (self.rows if level == "h" else self.cols)[index]


@dataclass
class CutsetReport:
    """C_{Pi_n} and running sums of 1/C for n = 1..N."""

    n: np.ndarray
    conductance: np.ndarray
    partial_sum: np.ndarray


def _line_arrays(env, axis, R, pad):
    """Sorted occupied coordinates per line orthogonal to ``axis``."""
    W = R + pad
    span = np.arange(-W, W + 1)
    lines = {}
    fwd = Direction(axis, 1)
    bwd = Direction(axis, -1)
    for idx in range(-R, R + 1):
        pts = np.zeros((len(span), 2), dtype=np.int64)
        pts[:, axis - 1] = span
        pts[:, 2 - axis] = idx
        occ = env.occupied_bulk(pts)
        coords = list(span[occ])
        if coords:
            while coords[0] > -R:
                x = [0, 0]
                x[axis - 1] = coords[0]
                x[2 - axis] = idx
                coords.insert(0, coords[0] - env.gap(x, bwd))
            while coords[-1] < R:
                x = [0, 0]
                x[axis - 1] = coords[-1]
                x[2 - axis] = idx
                coords.append(coords[-1] + env.gap(x, fwd))
        lines[idx] = np.array(coords, dtype=np.int64)
    return lines


def build_cut_network(env: Environment, R: int, pad: int = _BUILD_PAD) -> CutNetwork:
    """Materialize the network's line structure over the window [-R, R]^2."""
    if env.d != 2:
        raise ValueError("cut network is a d=2 construction")
    if R < 1:
        raise ValueError("window radius must be >= 1")
    rows = _line_arrays(env, 1, R, pad)
    cols = _line_arrays(env, 2, R, pad)
    return CutNetwork(R=R, rows=rows, cols=cols, env_config=env.config)


def unit_conductances(net: CutNetwork, level: str = "h") -> np.ndarray:
    """Multiset of conductances of unit edges inside the window, one level.

    A parent edge between consecutive occupied sites contributes one entry
    of value k = its length for every unit interval it covers inside
    [-R, R]; partially overlapping parents at the window edge contribute
    only their covered slots.
    """
    lines = net.rows if level == "h" else net.cols
    out = []
    for arr in lines.values():
        if len(arr) < 2:
            continue
        gaps = np.diff(arr)
        overlap = np.minimum(arr[1:], net.R) - np.maximum(arr[:-1], -net.R)
        keep = overlap > 0
        out.append(np.repeat(gaps[keep], overlap[keep]))
    if not out:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(out)


def _straddle(arr: np.ndarray, position: int) -> int:
    """Gap between the occupied sites bracketing (position, position+1)."""
    i = int(np.searchsorted(arr, position, side="right"))
    return int(arr[i] - arr[i - 1])


def cutset_edges(net: CutNetwork, n: int) -> list:
    """Explicit Pi_n as (level, line index, left endpoint, conductance)."""
    if n < 1 or n >= net.R:
        raise WindowTooSmall(n, net.R)
    edges = []
    for level, lines in (("h", net.rows), ("v", net.cols)):
        for idx in range(-n, n + 1):
            arr = lines[idx]
            if len(arr) == 0:
                continue
            for pos in (n, -n - 1):
                edges.append((level, idx, pos, _straddle(arr, pos)))
    return edges


def cutset_conductances(net: CutNetwork, N: int) -> CutsetReport:
    """C_{Pi_n} for n = 1..N by sweeping each line's straddles once."""
    if N >= net.R:
        raise WindowTooSmall(N, net.R)
    if N < 1:
        raise ValueError("need N >= 1")
    cond = np.zeros(N + 1)
    for lines in (net.rows, net.cols):
        for idx, arr in lines.items():
            if abs(idx) > N or len(arr) == 0:
                continue
            ns = np.arange(max(1, abs(idx)), N + 1)
            right = np.searchsorted(arr, ns, side="right")
            left = np.searchsorted(arr, -ns - 1, side="right")
            contrib = (arr[right] - arr[right - 1]) + (arr[left] - arr[left - 1])
            cond[ns] += contrib
    conductance = cond[1:]
    if np.any(conductance <= 0):
        raise ValueError("cutset with nonpositive conductance; window corrupt")
    return CutsetReport(
        n=np.arange(1, N + 1),
        conductance=conductance,
        partial_sum=np.cumsum(1.0 / conductance),
    )


def nash_williams_sum(report: CutsetReport, N: int | None = None) -> float:
    """Sum of 1/C_{Pi_n} for n <= N (all computed cutsets by default)."""
    if N is None:
        return float(report.partial_sum[-1])
    if N < 1 or N > len(report.partial_sum):
        raise ValueError(f"N={N} outside computed range")
    return float(report.partial_sum[N - 1])


def size_biased_pmf(env_cfg: EnvironmentConfig, kmax: int = 128):
    """(values, probabilities) of the unit-edge conductance law k P(f=k)/E f."""
    if env_cfg.kind == "full":
        return np.array([1]), np.array([1.0])
    if env_cfg.kind == "renewal" or env_cfg.gap_pmf is not None:
        vals = np.array([v for v, _ in env_cfg.gap_pmf])
        base = np.array([p for _, p in env_cfg.gap_pmf])
    elif env_cfg.kind == "bernoulli":
        p = env_cfg.density
        vals = np.arange(1, kmax + 1)
        base = p * (1 - p) ** (vals - 1)
    else:
        pat = env_cfg.pattern[0]
        occ = [i for i, b in enumerate(pat) if b]
        spacings = [
            (occ[(j + 1) % len(occ)] - occ[j]) % len(pat) or len(pat)
            for j in range(len(occ))
        ]
        vals, counts = np.unique(spacings, return_counts=True)
        base = counts / counts.sum()
    weighted = vals * base
    return vals, weighted / weighted.sum()


def conductance_ks_distance(samples: np.ndarray, vals: np.ndarray,
                            probs: np.ndarray) -> float:
    """Sup distance between the empirical CDF and a discrete model CDF."""
    samples = np.asarray(samples)
    if len(samples) == 0:
        raise ValueError("no conductance samples")
    grid = np.union1d(np.unique(samples), vals)
    emp = np.searchsorted(np.sort(samples), grid, side="right") / len(samples)
    cum = np.cumsum(probs)
    model_cdf = cum[np.searchsorted(vals, grid, side="right") - 1]
    model_cdf[grid < vals[0]] = 0.0
    return float(np.max(np.abs(emp - model_cdf)))
