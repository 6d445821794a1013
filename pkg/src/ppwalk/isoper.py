"""Isoperimetry of finite lattice sets: compression, profiles, mixing bounds.

The compression operator rewrites each 1-dimensional fiber of a finite set as
the segment {1..m} hugging the coordinate wall.  One round runs over the axes
in order; iterating rounds reaches a fixed point because the total coordinate
sum (the set's energy) is a nonnegative integer that never increases and
strictly decreases while the set keeps changing.  Compressed sets make the
projection lower bound max_j |proj_j(A)| >= |A|^{(d-1)/d} easy to certify.

The isoperimetric profile is probed from above with box-shaped candidate
sets, boundary measured as sum of exit transition probabilities (weight
1/(2d) per boundary edge of the occupied-neighbor graph).  The step-count
bound converts a profile floor c0 * u^{-1/d} into the number of walk steps
after which the return probability drops below a target, by a closed-form
evaluation of the governing integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .env import Environment, directions
from .errors import DomainError


class FiniteSet:
    """Finite set of d-dimensional integer points, normalized to coords >= 1."""

    def __init__(self, points):
        pts = np.asarray(list(points) if not isinstance(points, np.ndarray)
                         else points, dtype=np.int64)
        if pts.ndim != 2 or len(pts) == 0:
            raise ValueError("need a nonempty (N, d) point collection")
        pts = pts - pts.min(axis=0) + 1
        order = np.lexsort(pts.T[::-1])
        pts = pts[order]
        if len(pts) > 1 and np.any(np.all(pts[1:] == pts[:-1], axis=1)):
            raise ValueError("duplicate points")
        self.points = pts
        self.d = pts.shape[1]

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return (isinstance(other, FiniteSet)
                and self.points.shape == other.points.shape
                and bool(np.all(self.points == other.points)))

    def __repr__(self):
        return f"FiniteSet({len(self)} pts in d={self.d})"


def energy(A: FiniteSet) -> int:
    """Total coordinate sum of the normalized set."""
    return int(A.points.sum())


def random_finite_set(rng, box: int, d: int,
                      max_size: int | None = None) -> FiniteSet:
    """Random test set: distinct points drawn uniformly from [1, box]^d."""
    if max_size is None:
        max_size = 3 * box
    size = int(rng.integers(1, max_size + 1))
    pts = rng.integers(1, box + 1, size=(size, d))
    return FiniteSet(np.unique(pts, axis=0))


def projection_sizes(A: FiniteSet) -> tuple[int, ...]:
    """Number of nonempty axis-j fibers, for each j."""
    out = []
    for j in range(A.d):
        rest = np.delete(A.points, j, axis=1)
        out.append(len(np.unique(rest, axis=0)))
    return tuple(out)


def _compress_axis(pts: np.ndarray, j: int) -> np.ndarray:
    """Rewrite every axis-j fiber as {1..m}."""
    rest = np.delete(pts, j, axis=1)
    order = np.lexsort(np.vstack([pts[:, j], rest.T[::-1]]))
    s = pts[order]
    s_rest = np.delete(s, j, axis=1)
    new_fiber = np.ones(len(s), dtype=bool)
    new_fiber[1:] = np.any(s_rest[1:] != s_rest[:-1], axis=1)
    group = np.cumsum(new_fiber) - 1
    start = np.zeros(len(s), dtype=np.int64)
    start[new_fiber] = np.arange(len(s))[new_fiber]
    start = np.maximum.accumulate(start)
    s[:, j] = np.arange(len(s)) - start + 1
    return s


def compress(A: FiniteSet, max_rounds: int | None = None) -> FiniteSet:
    """Iterate axis-1..axis-d compression rounds to the fixed point."""
    current = A
    limit = max_rounds if max_rounds is not None else energy(A) + 1
    for _ in range(limit):
        pts = current.points
        for j in range(current.d):
            pts = _compress_axis(pts, j)
        nxt = FiniteSet(pts)
        if nxt == current:
            return current
        current = nxt
    return current


@dataclass
class ProjectionReport:
    size: int
    max_projection: int
    ratio: float
    c_check: float
    ok: bool


def _min_box_max_projection(v: int) -> int:
    """Smallest achievable max projection of a v-point set in d=2."""
    best = v
    for a in range(1, int(math.isqrt(v)) + 2):
        best = min(best, max(a, -(-v // a)))
    return best


def projection_bound_check(A: FiniteSet) -> ProjectionReport:
    """Compare max_j |proj_j(A)| against the sharp volume floor.

    In d=2 the floor is the exact integer optimum over all sets of the same
    size (achieved by a filled box with one partial row); in higher
    dimensions it is |A|^{(d-1)/d}, which every set satisfies.
    """
    v = len(A)
    mp = max(projection_sizes(A))
    denom = v ** ((A.d - 1) / A.d)
    ratio = mp / denom
    if A.d == 2:
        c_check = _min_box_max_projection(v) / denom
    else:
        c_check = 1.0
    return ProjectionReport(
        size=v, max_projection=mp, ratio=ratio, c_check=c_check,
        ok=ratio >= c_check - 1e-12,
    )


@dataclass
class ProfilePoint:
    u: int
    phi: float


def _box_phi(env: Environment, side: int) -> tuple[int, float]:
    """(volume, Phi_S) for S = occupied sites in the box [0, side)^d."""
    axes = [np.arange(side)] * env.d
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, env.d)
    occ = env.occupied_bulk(grid)
    sites = grid[occ]
    if len(sites) == 0:
        return 0, 1.0
    nbrs, _ = env.neighbors_bulk(sites)
    # neighbors are occupied by construction, so membership in S is just
    # being inside the box
    inside = np.all((nbrs >= 0) & (nbrs < side), axis=2)
    exits = np.count_nonzero(~inside)
    phi = exits / (2 * env.d) / len(sites)
    return len(sites), float(phi)


def profile_upper_envelope(env: Environment, R: int, volumes) -> list[ProfilePoint]:
    """Upper bounds on the isoperimetric profile at the requested volumes.

    For each target u the candidates are occupied-site sets of boxes
    [0, m)^d whose volume does not exceed u; the reported phi is the best
    (smallest) candidate value, always in (0, 1].
    """
    if env.d < 2:
        raise ValueError("profile probe needs d >= 2")
    boxes = []
    for side in range(1, R + 1):
        vol, phi = _box_phi(env, side)
        if vol > 0:
            boxes.append((vol, phi))
    out = []
    for u in volumes:
        cands = [phi for vol, phi in boxes if 0 < vol <= u]
        if not cands:
            raise ValueError(f"no nonempty candidate box fits volume {u}")
        out.append(ProfilePoint(u=int(u), phi=float(min(cands))))
    return out


def mp_step_bound(gamma: float, c0: float, d: int, epsilon: float) -> int:
    """Steps n after which return probabilities fall below the target.

    Evaluates n = ceil(1 + ((1-gamma)^2/gamma^2) * integral), where the
    integral of 4 du / (u Phi(u)^2) from 4 to 4/epsilon with the profile
    floor Phi(u) = c0 u^{-1/d} has the closed form
    (2d/c0^2) * 4^{2/d} * (epsilon^{-2/d} - 1).
    """
    if not 0 < gamma <= 0.5:
        raise DomainError(f"gamma must be in (0, 1/2], got {gamma}")
    if c0 <= 0:
        raise DomainError(f"c0 must be positive, got {c0}")
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    if not 0 < epsilon <= 1:
        raise DomainError(f"epsilon must be in (0, 1], got {epsilon}")
    integral = (2 * d / c0**2) * 4 ** (2 / d) * (epsilon ** (-2 / d) - 1)
    return math.ceil(1 + ((1 - gamma) ** 2 / gamma**2) * integral)
