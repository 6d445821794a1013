"""Point-process environments on the integer lattice Z^d.

An environment is a random subset of Z^d seen from an occupied origin.  The
walkers only ever ask two questions about it: "is x occupied?" and "how far to
the next occupied site from x along a signed axis?" (the gap).  Both are pure
functions of (config, seed), so environments are replayable and shareable
across processes without serialized state.

Generators:

* ``full``       every site occupied (the classical lattice).
* ``bernoulli``  i.i.d. occupancy with density p, origin forced occupied;
                 along any axis the gap from an occupied site is exactly
                 Geometric(p).
* ``renewal``    d=1 only: i.i.d. gaps drawn from a finite pmf nu, laid
                 outward from the origin in both directions.  This is the
                 origin-conditioned (point-stationary) picture, which is the
                 stationary law of the environment seen from the walker; a
                 size-biased interval law shows up instead when unit edges of
                 the cut network are sampled (see ppwalk.network).
* ``periodic``   deterministic product of per-axis 0/1 patterns; used as
                 exactly solvable fixtures.  pattern[0] must be 1 on every
                 axis so the origin is occupied by construction.
"""

from __future__ import annotations

import bisect
import configparser
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ScanExceeded
from . import prf

KINDS = ("full", "bernoulli", "renewal", "periodic")

DEFAULT_MAX_SCAN = 1_000_000


@dataclass(frozen=True)
class Direction:
    """Signed coordinate direction; axis is 1-based, sign is +1 or -1."""

    axis: int
    sign: int

    def __post_init__(self):
        if self.axis < 1:
            raise ValueError(f"axis must be >= 1, got {self.axis}")
        if self.sign not in (-1, 1):
            raise ValueError(f"sign must be +-1, got {self.sign}")

    @property
    def column(self) -> int:
        """Index in [0, 2d): +e1, -e1, +e2, -e2, ..."""
        return 2 * (self.axis - 1) + (0 if self.sign > 0 else 1)

    def vector(self, dimension: int) -> np.ndarray:
        v = np.zeros(dimension, dtype=np.int64)
        v[self.axis - 1] = self.sign
        return v

    def opposite(self) -> "Direction":
        return Direction(self.axis, -self.sign)


def directions(dimension: int) -> tuple[Direction, ...]:
    """The 2d signed directions in column order."""
    out = []
    for axis in range(1, dimension + 1):
        out.append(Direction(axis, 1))
        out.append(Direction(axis, -1))
    return tuple(out)


@dataclass(frozen=True)
class EnvironmentConfig:
    dimension: int
    kind: str
    seed: int
    density: float | None = None
    gap_pmf: tuple[tuple[int, float], ...] | None = None
    pattern: tuple[tuple[int, ...], ...] | None = None
    max_scan: int = DEFAULT_MAX_SCAN

    def __post_init__(self):
        if self.dimension < 1:
            raise ConfigError(f"dimension must be >= 1, got {self.dimension}")
        if self.kind not in KINDS:
            raise ConfigError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not 0 <= self.seed <= prf.M64:
            raise ConfigError("seed must fit in 64 bits")
        if self.max_scan < 1:
            raise ConfigError("max_scan must be positive")
        if self.kind == "bernoulli":
            if self.density is None or not 0.0 < self.density <= 1.0:
                raise ConfigError("bernoulli needs density in (0, 1]")
        if self.kind == "renewal":
            if self.dimension != 1:
                raise ConfigError("renewal environments are 1-dimensional")
            if not self.gap_pmf:
                raise ConfigError("renewal needs a gap pmf")
            pmf = tuple(sorted((int(v), float(p)) for v, p in self.gap_pmf))
            if any(v < 1 for v, _ in pmf) or any(p < 0 for _, p in pmf):
                raise ConfigError("gap pmf needs values >= 1 and probs >= 0")
            if abs(sum(p for _, p in pmf) - 1.0) > 1e-9:
                raise ConfigError("gap pmf must sum to 1")
            object.__setattr__(self, "gap_pmf", pmf)
        if self.kind == "periodic":
            if not self.pattern or len(self.pattern) != self.dimension:
                raise ConfigError("periodic needs one pattern per axis")
            pats = []
            for pat in self.pattern:
                pat = tuple(int(b) for b in pat)
                if not pat or any(b not in (0, 1) for b in pat):
                    raise ConfigError("patterns are non-empty 0/1 tuples")
                if pat[0] != 1:
                    raise ConfigError(
                        "pattern[0] must be 1 on every axis (occupied origin)"
                    )
                pats.append(pat)
            object.__setattr__(self, "pattern", tuple(pats))

    # -- analytic gap moments (law of the gap seen from an occupied site) --

    def gap_moment(self, order: int, axis: int = 1) -> float:
        """E[f^order] along ``axis``; exact, per generator."""
        if self.kind == "full":
            return 1.0
        if self.kind == "bernoulli":
            p = self.density
            if order == 1:
                return 1.0 / p
            if order == 2:
                return (2.0 - p) / p**2
            # generic: sum the geometric series numerically
            k = np.arange(1, max(200, int(60 / p)))
            w = p * (1 - p) ** (k - 1)
            return float(np.sum(w * k**order))
        if self.kind == "renewal":
            return float(sum(p * v**order for v, p in self.gap_pmf))
        pat = self.pattern[axis - 1]
        occ = [i for i, b in enumerate(pat) if b]
        period = len(pat)
        spacings = [
            (occ[(j + 1) % len(occ)] - occ[j]) % period or period
            for j in range(len(occ))
        ]
        return float(np.mean([s**order for s in spacings]))

    def mean_gap(self, axis: int = 1) -> float:
        return self.gap_moment(1, axis)

    def describe(self) -> dict:
        out = {"dimension": self.dimension, "kind": self.kind, "seed": self.seed}
        if self.density is not None:
            out["density"] = self.density
        if self.gap_pmf is not None:
            out["gap_pmf"] = {str(v): p for v, p in self.gap_pmf}
        if self.pattern is not None:
            out["pattern"] = [list(p) for p in self.pattern]
        return out


class _RenewalLine:
    """Lazily grown renewal point set on Z (origin always a point)."""

    def __init__(self, seed: int, gap_pmf):
        self._state = prf.renewal_state(seed)
        self._cdf, self._vals = prf.renewal_cdf_u64(gap_pmf)
        self._right = [0]   # t_0, t_1, ... increasing
        self._left = [0]    # |t_0|, |t_-1|, ... increasing magnitudes

    def _draw(self, index: int) -> int:
        return prf.renewal_gap(self._state, index, self._cdf, self._vals)

    def grow_right(self, limit: int):
        while self._right[-1] < limit:
            self._right.append(self._right[-1] + self._draw(len(self._right)))

    def grow_left(self, limit: int):
        while self._left[-1] < limit:
            self._left.append(self._left[-1] + self._draw(-len(self._left)))

    def contains(self, x: int) -> bool:
        if x >= 0:
            self.grow_right(x)
            i = bisect.bisect_left(self._right, x)
            return i < len(self._right) and self._right[i] == x
        self.grow_left(-x)
        i = bisect.bisect_left(self._left, -x)
        return i < len(self._left) and self._left[i] == -x

    def _index_right(self, x: int) -> int:
        i = bisect.bisect_left(self._right, x)
        if i >= len(self._right) or self._right[i] != x:
            raise ValueError(f"{x} is not a renewal point")
        return i

    def _index_left(self, mag: int) -> int:
        i = bisect.bisect_left(self._left, mag)
        if i >= len(self._left) or self._left[i] != mag:
            raise ValueError(f"{-mag} is not a renewal point")
        return i

    def gap(self, x: int, sign: int) -> int:
        """Distance from point x to the adjacent point in direction sign."""
        if x >= 0:
            self.grow_right(x)
            i = self._index_right(x)
            if sign > 0:
                self.grow_right(x + 1)
                return self._right[i + 1] - x
            if i > 0:
                return x - self._right[i - 1]
            # stepping left from the origin
            self.grow_left(1)
            return self._left[1]
        mag = -x
        self.grow_left(mag)
        j = self._index_left(mag)
        if sign > 0:
            return mag - self._left[j - 1]
        self.grow_left(mag + 1)
        return self._left[j + 1] - mag

    def points_array(self, lo: int, hi: int) -> np.ndarray:
        """Sorted array of every point in [lo, hi]."""
        self.grow_right(max(hi, 0) + 1)
        self.grow_left(max(-lo, 0) + 1)
        left = [-v for v in self._left[1:]]
        pts = np.array(left[::-1] + self._right, dtype=np.int64)
        return pts[(pts >= lo) & (pts <= hi)]


class Environment:
    """Occupancy oracle plus memoized gap queries for one sampled environment."""

    def __init__(self, config: EnvironmentConfig):
        self.config = config
        self.d = config.dimension
        self._gap_cache: dict[tuple, int] = {}
        self._threshold = None
        self._occ_state = prf.occupancy_state(config.seed)
        if config.kind == "bernoulli":
            self._threshold = prf.bernoulli_threshold(config.density)
        self._renewal = (
            _RenewalLine(config.seed, config.gap_pmf)
            if config.kind == "renewal"
            else None
        )
        if config.kind == "periodic":
            self._gap_tables = [
                _periodic_gap_tables(pat) for pat in config.pattern
            ]

    # ---- scalar queries ----

    def is_occupied(self, x) -> bool:
        x = tuple(int(c) for c in x)
        if len(x) != self.d:
            raise ValueError(f"point has {len(x)} coords, environment is {self.d}d")
        kind = self.config.kind
        if kind == "full":
            return True
        if all(c == 0 for c in x):
            return True
        if kind == "bernoulli":
            return prf.site_hash(self._occ_state, x) < self._threshold
        if kind == "periodic":
            return all(
                pat[c % len(pat)] == 1
                for pat, c in zip(self.config.pattern, x)
            )
        return self._renewal.contains(x[0])

    def gap(self, x, direction: Direction) -> int:
        """Distance from occupied x to the next occupied site along direction."""
        x = tuple(int(c) for c in x)
        key = (x, direction.column)
        hit = self._gap_cache.get(key)
        if hit is not None:
            return hit
        if not self.is_occupied(x):
            raise ValueError(f"gap queried from unoccupied point {x}")
        kind = self.config.kind
        if kind == "full":
            g = 1
        elif kind == "periodic":
            fwd, bwd = self._gap_tables[direction.axis - 1]
            r = x[direction.axis - 1] % len(self.config.pattern[direction.axis - 1])
            g = fwd[r] if direction.sign > 0 else bwd[r]
        elif kind == "renewal":
            g = self._renewal.gap(x[0], direction.sign)
        else:
            g = self._scan(x, direction)
        self._gap_cache[key] = g
        return g

    def _scan(self, x, direction: Direction) -> int:
        ax = direction.axis - 1
        probe = list(x)
        for k in range(1, self.config.max_scan + 1):
            probe[ax] = x[ax] + direction.sign * k
            if all(c == 0 for c in probe):
                return k
            if prf.site_hash(self._occ_state, probe) < self._threshold:
                return k
        raise ScanExceeded(x, (direction.axis, direction.sign), self.config.max_scan)

    def neighbors(self, x) -> tuple[tuple[int, ...], ...]:
        """The 2d coordinate nearest neighbors of occupied x, in column order."""
        x = tuple(int(c) for c in x)
        out = []
        for dirn in directions(self.d):
            g = self.gap(x, dirn)
            y = list(x)
            y[dirn.axis - 1] += dirn.sign * g
            out.append(tuple(y))
        return tuple(out)

    def induced_shift(self, x, direction: Direction) -> tuple[int, ...]:
        """The next occupied site from x along direction (re-centering point)."""
        x = tuple(int(c) for c in x)
        g = self.gap(x, direction)
        y = list(x)
        y[direction.axis - 1] += direction.sign * g
        return tuple(y)

    # ---- bulk queries (vectorized; used by kernel evolution and networks) ----

    def occupied_bulk(self, pts: np.ndarray) -> np.ndarray:
        pts = np.ascontiguousarray(pts, dtype=np.int64)
        kind = self.config.kind
        if kind == "full":
            return np.ones(len(pts), dtype=bool)
        origin = np.all(pts == 0, axis=1)
        if kind == "bernoulli":
            h = prf.site_hash_np(self._occ_state, pts)
            return (h < np.uint64(self._threshold)) | origin
        if kind == "periodic":
            occ = np.ones(len(pts), dtype=bool)
            for j, pat in enumerate(self.config.pattern):
                lut = np.array(pat, dtype=bool)
                occ &= lut[pts[:, j] % len(pat)]
            return occ | origin
        lo = int(pts[:, 0].min(initial=0))
        hi = int(pts[:, 0].max(initial=0))
        points = self._renewal.points_array(lo, hi)
        idx = np.searchsorted(points, pts[:, 0])
        idx = np.minimum(idx, len(points) - 1)
        return points[idx] == pts[:, 0]

    def gaps_bulk(self, pts: np.ndarray, direction: Direction) -> np.ndarray:
        """Gaps for an array of occupied points along one direction."""
        pts = np.ascontiguousarray(pts, dtype=np.int64)
        n = len(pts)
        kind = self.config.kind
        ax = direction.axis - 1
        if kind == "full":
            return np.ones(n, dtype=np.int64)
        if kind == "periodic":
            fwd, bwd = self._gap_tables[ax]
            table = np.array(fwd if direction.sign > 0 else bwd, dtype=np.int64)
            return table[pts[:, ax] % len(self.config.pattern[ax])]
        if kind == "renewal":
            lo = int(pts[:, 0].min()) - 1
            hi = int(pts[:, 0].max()) + 1
            points = self._renewal.points_array(lo, hi)
            # margins so every point has both neighbors materialized
            points = self._renewal.points_array(
                lo - int(points[1] - points[0]) - 1,
                hi + int(points[-1] - points[-2]) + 1,
            )
            idx = np.searchsorted(points, pts[:, 0])
            if direction.sign > 0:
                return points[idx + 1] - pts[:, 0]
            return pts[:, 0] - points[idx - 1]
        gaps = np.zeros(n, dtype=np.int64)
        active = np.arange(n)
        k = 0
        thr = np.uint64(self._threshold)
        while active.size:
            k += 1
            if k > self.config.max_scan:
                raise ScanExceeded(
                    pts[active[0]], (direction.axis, direction.sign),
                    self.config.max_scan,
                )
            probe = pts[active].copy()
            probe[:, ax] += direction.sign * k
            h = prf.site_hash_np(self._occ_state, probe)
            occ = (h < thr) | np.all(probe == 0, axis=1)
            gaps[active[occ]] = k
            active = active[~occ]
        return gaps

    def neighbors_bulk(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """All 2d neighbors of occupied pts.

        Returns (points, gaps): points has shape (N, 2d, d), gaps (N, 2d),
        columns ordered as in directions(d).
        """
        pts = np.ascontiguousarray(pts, dtype=np.int64)
        n = len(pts)
        nbrs = np.repeat(pts[:, None, :], 2 * self.d, axis=1)
        gaps = np.zeros((n, 2 * self.d), dtype=np.int64)
        for dirn in directions(self.d):
            g = self.gaps_bulk(pts, dirn)
            col = dirn.column
            gaps[:, col] = g
            nbrs[:, col, dirn.axis - 1] += dirn.sign * g
        return nbrs, gaps


def _periodic_gap_tables(pattern):
    """(forward, backward) gap-to-next-occupied tables indexed by residue."""
    period = len(pattern)
    occ = [i for i, b in enumerate(pattern) if b]
    fwd = [0] * period
    bwd = [0] * period
    for r in occ:
        fwd[r] = next(
            k for k in range(1, period + 1) if pattern[(r + k) % period]
        )
        bwd[r] = next(
            k for k in range(1, period + 1) if pattern[(r - k) % period]
        )
    return fwd, bwd


# ---- plain-text config files ----

def _parse_gap_pmf(text: str):
    pairs = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            v, p = part.split(":")
            pairs.append((int(v), float(p)))
        except ValueError as exc:
            raise ConfigError(f"bad gap pmf entry {part!r}") from exc
    return tuple(pairs)


def _parse_pattern(text: str):
    axes = []
    for axis_part in text.split(";"):
        axis_part = axis_part.strip()
        if not axis_part:
            continue
        try:
            axes.append(tuple(int(b) for b in axis_part.split(",")))
        except ValueError as exc:
            raise ConfigError(f"bad pattern {axis_part!r}") from exc
    return tuple(axes)


def read_config_file(path) -> configparser.ConfigParser:
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    return parser


_ENV_KEYS = {"dimension", "kind", "seed", "density", "gaps", "pattern", "max_scan"}


def environment_from_section(section) -> EnvironmentConfig:
    unknown = set(section) - _ENV_KEYS
    if unknown:
        raise ConfigError(f"unknown environment keys: {sorted(unknown)}")
    try:
        kwargs = {
            "dimension": section.getint("dimension", 1),
            "kind": section.get("kind", "full").strip().lower(),
            "seed": int(section.get("seed", "0"), 0),
            "max_scan": section.getint("max_scan", DEFAULT_MAX_SCAN),
        }
    except ValueError as exc:
        raise ConfigError(f"bad environment value: {exc}") from exc
    if "density" in section:
        kwargs["density"] = section.getfloat("density")
    if "gaps" in section:
        kwargs["gap_pmf"] = _parse_gap_pmf(section["gaps"])
    if "pattern" in section:
        kwargs["pattern"] = _parse_pattern(section["pattern"])
    return EnvironmentConfig(**kwargs)


def load_environment_config(path) -> EnvironmentConfig:
    """Read an EnvironmentConfig from the [environment] section of a file."""
    parser = read_config_file(path)
    if not parser.has_section("environment"):
        raise ConfigError(f"{path} has no [environment] section")
    return environment_from_section(parser["environment"])
