"""Corrector construction on finite torus environments.

The infinite-volume theory deforms the coordinate map x -> x + chi(x, omega)
into a harmonic function of the walk.  Here the environment is realized on a
torus [0, L)^d with wrapped gaps, where the averaging operator over the 2d
neighbor re-centerings is an exactly symmetric stochastic matrix and the
uniform law on occupied sites is exactly stationary.  The corrector comes
out of the resolvent equation

    (1 + eps - Lambda) psi_eps = V,     chi_eps(x) = psi_eps(x) - psi_eps(0)

solved by conjugate gradients for a ladder of eps values and extrapolated to
eps = 0.  Because V sums to zero over the torus, the right-hand side is
orthogonal to the constant mode and the system stays well posed down to tiny
eps.

Extending chi periodically makes x + chi(x mod L) a function on all of Z^d
whose harmonicity defect is exactly the resolvent residual, so walks driven
by the torus neighbor table yield martingales M_n = X_n + chi(X_n) up to
that defect; the one-step covariance of M averaged over sites estimates the
diffusion matrix of the rescaled walk.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np
import scipy.sparse as sp

from . import backend, prf
from .env import Environment, EnvironmentConfig
from .errors import ConfigError, LeftWindow, NoConvergence

DEFAULT_EPS_LADDER = (1e-2, 1e-3, 1e-4, 1e-6)
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000


class TorusEnvironment:
    """Occupied sites of [0, L)^d with wrap-around nearest-neighbor tables."""

    def __init__(self, sites: np.ndarray, L: int, config: EnvironmentConfig):
        self.L = int(L)
        self.config = config
        self.d = sites.shape[1]
        order = np.lexsort(sites.T[::-1])
        self.sites = np.ascontiguousarray(sites[order], dtype=np.int64)
        self.n_sites = len(self.sites)
        self.grid = np.full((self.L,) * self.d, -1, dtype=np.int32)
        self.grid[tuple(self.sites.T)] = np.arange(self.n_sites, dtype=np.int32)
        self.origin = int(self.grid[(0,) * self.d])
        if self.origin < 0:
            raise ConfigError("origin must be occupied on the torus")
        self.nbr, self.disp = self._build_tables()
        self.gaps = np.abs(self.disp)

    @classmethod
    def from_config(cls, env_cfg: EnvironmentConfig, L: int) -> "TorusEnvironment":
        if L < 2:
            raise ConfigError(f"torus side must be >= 2, got {L}")
        if env_cfg.kind == "renewal":
            raise ConfigError(
                "renewal gaps have no canonical torus wrap; use periodic"
            )
        if env_cfg.kind == "periodic":
            for pat in env_cfg.pattern:
                if L % len(pat):
                    raise ConfigError(
                        f"torus side {L} must be a multiple of period {len(pat)}"
                    )
        env = Environment(env_cfg)
        axes = [np.arange(L)] * env_cfg.dimension
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        pts = grid.reshape(-1, env_cfg.dimension)
        occ = env.occupied_bulk(pts)
        return cls(pts[occ], L, env_cfg)

    def _build_tables(self):
        S, d, L = self.n_sites, self.d, self.L
        nbr = np.zeros((S, 2 * d), dtype=np.int32)
        disp = np.zeros((S, 2 * d), dtype=np.int32)
        idx = np.arange(S)
        for axis in range(d):
            other = np.delete(self.sites, axis, axis=1)
            coord = self.sites[:, axis]
            order = np.lexsort(np.vstack([coord, other.T[::-1]]))
            so, oo, io = coord[order], other[order], idx[order]
            new_line = np.ones(S, dtype=bool)
            new_line[1:] = np.any(oo[1:] != oo[:-1], axis=1)
            line_id = np.cumsum(new_line) - 1
            starts = np.nonzero(new_line)[0]
            counts = np.diff(np.append(starts, S))
            first = starts[line_id]
            last = first + counts[line_id] - 1
            pos = np.arange(S)
            nxt = np.where(pos == last, first, pos + 1)
            prv = np.where(pos == first, last, pos - 1)
            gap_fwd = np.where(
                counts[line_id] == 1, L, (so[nxt] - so) % L
            )
            gap_fwd = np.where(gap_fwd == 0, L, gap_fwd)
            gap_bwd = np.where(
                counts[line_id] == 1, L, (so - so[prv]) % L
            )
            gap_bwd = np.where(gap_bwd == 0, L, gap_bwd)
            col_f, col_b = 2 * axis, 2 * axis + 1
            nbr[io, col_f] = io[nxt]
            nbr[io, col_b] = io[prv]
            disp[io, col_f] = gap_fwd
            disp[io, col_b] = -gap_bwd
        return nbr, disp

    def lambda_matrix(self) -> sp.csr_matrix:
        """The neighbor-averaging operator as a sparse symmetric matrix."""
        S, twod = self.n_sites, 2 * self.d
        rows = np.repeat(np.arange(S), twod)
        cols = self.nbr.ravel()
        vals = np.full(S * twod, 1.0 / twod)
        return sp.coo_matrix((vals, (rows, cols)), shape=(S, S)).tocsr()

    def drift_numerators(self) -> np.ndarray:
        """Integer numerators of 2d * V: per-site summed signed displacements."""
        out = np.zeros((self.n_sites, self.d), dtype=np.int64)
        for axis in range(self.d):
            out[:, axis] = (
                self.disp[:, 2 * axis].astype(np.int64)
                + self.disp[:, 2 * axis + 1]
            )
        return out

    def local_drift_all(self) -> np.ndarray:
        return self.drift_numerators() / (2 * self.d)

    def index_of(self, point) -> int:
        wrapped = tuple(int(c) % self.L for c in point)
        i = int(self.grid[wrapped])
        if i < 0:
            raise ValueError(f"{tuple(point)} wraps to an unoccupied site")
        return i


def local_drift(torus: TorusEnvironment, x) -> np.ndarray:
    """Mean one-step displacement (1/2d) sum of signed gaps at x."""
    return torus.local_drift_all()[torus.index_of(x)]


@dataclass
class ResolventSolution:
    epsilon: float
    psi: np.ndarray
    residual: float
    iterations: int


def _cg(A, b, tol, max_iter):
    """Plain conjugate gradients for SPD A; relative residual stopping."""
    x = np.zeros_like(b)
    r = b.copy()
    p = r.copy()
    rs = float(r @ r)
    bnorm = float(np.sqrt(b @ b))
    if bnorm == 0.0:
        return x, 0.0, 0
    for it in range(1, max_iter + 1):
        Ap = A @ p
        alpha = rs / float(p @ Ap)
        x += alpha * p
        r -= alpha * Ap
        rs_new = float(r @ r)
        if np.sqrt(rs_new) <= tol * bnorm:
            return x, float(np.sqrt(rs_new) / bnorm), it
        p = r + (rs_new / rs) * p
        rs = rs_new
    raise NoConvergence(max_iter, float(np.sqrt(rs) / bnorm), tol)


def solve_resolvent(torus: TorusEnvironment, epsilon: float,
                    tol: float = DEFAULT_TOL,
                    max_iter: int = DEFAULT_MAX_ITER) -> ResolventSolution:
    """Solve (1 + eps - Lambda) psi = V componentwise by conjugate gradients."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if tol <= 0:
        raise ValueError("tol must be positive")
    lam = torus.lambda_matrix()
    A = sp.eye(torus.n_sites, format="csr") * (1.0 + epsilon) - lam
    V = torus.local_drift_all()
    psi = np.zeros_like(V)
    worst = 0.0
    iters = 0
    for j in range(torus.d):
        psi[:, j], res, it = _cg(A, V[:, j].copy(), tol, max_iter)
        worst = max(worst, res)
        iters = max(iters, it)
    return ResolventSolution(epsilon=epsilon, psi=psi,
                             residual=worst, iterations=iters)


@dataclass
class CorrectorField:
    """chi rows aligned with torus.sites; chi at the origin is zero."""

    torus: TorusEnvironment
    chi: np.ndarray
    epsilon: float
    meta: dict = dc_field(default_factory=dict)


def corrector_field(solution: ResolventSolution,
                    torus: TorusEnvironment) -> CorrectorField:
    chi = solution.psi - solution.psi[torus.origin]
    return CorrectorField(
        torus=torus, chi=chi, epsilon=solution.epsilon,
        meta={"residual": solution.residual,
              "iterations": solution.iterations},
    )


def _neville_zero(xs, tables):
    """Polynomial extrapolation of array-valued samples to x = 0."""
    vals = [t.astype(np.float64).copy() for t in tables]
    n = len(xs)
    for level in range(1, n):
        for i in range(n - level):
            x0, x1 = xs[i], xs[i + level]
            vals[i] = (x1 * vals[i] - x0 * vals[i + 1]) / (x1 - x0)
    return vals[0]


def corrector_field_extrapolated(torus: TorusEnvironment,
                                 epsilons=DEFAULT_EPS_LADDER,
                                 tol: float = DEFAULT_TOL,
                                 max_iter: int = DEFAULT_MAX_ITER
                                 ) -> CorrectorField:
    """Solve the eps ladder and extrapolate chi to eps = 0."""
    eps = sorted(epsilons, reverse=True)
    if len(eps) < 2:
        raise ValueError("need at least two ladder points to extrapolate")
    ladder = []
    chis = []
    for e in eps:
        sol = solve_resolvent(torus, e, tol=tol, max_iter=max_iter)
        chis.append(sol.psi - sol.psi[torus.origin])
        norm2 = float((sol.psi**2).sum())
        rung = CorrectorField(torus=torus, chi=chis[-1], epsilon=e)
        ladder.append(
            {"epsilon": e, "iterations": sol.iterations,
             "residual": sol.residual, "eps_psi_sq": e * norm2,
             "psi_inf": float(np.abs(sol.psi).max()),
             "harm_residual": harmonicity_residual(rung)}
        )
    chi0 = _neville_zero(eps, chis)
    return CorrectorField(
        torus=torus, chi=chi0, epsilon=0.0,
        meta={"ladder": ladder, "extrapolated": True},
    )


def harmonicity_residual(field: CorrectorField,
                         torus: TorusEnvironment | None = None) -> float:
    """Max norm over sites of the mean deformed one-step displacement."""
    torus = torus or field.torus
    chi = field.chi
    increments = _one_step_increments(torus, chi)
    mean = increments.mean(axis=1)
    return float(np.sqrt((mean**2).sum(axis=1)).max())


def _one_step_increments(torus: TorusEnvironment, chi: np.ndarray) -> np.ndarray:
    """(S, 2d, d) array of M-increments per site and direction."""
    S, d = torus.n_sites, torus.d
    inc = chi[torus.nbr] - chi[:, None, :]
    for axis in range(d):
        inc[:, 2 * axis, axis] += torus.disp[:, 2 * axis]
        inc[:, 2 * axis + 1, axis] += torus.disp[:, 2 * axis + 1]
    return inc


@dataclass
class SublinearityReport:
    axis_ratios: list
    axis_max: list
    density: float
    box_radius: int
    threshold: float


def sublinearity_scan(field: CorrectorField, torus: TorusEnvironment,
                      epsilon_frac: float) -> SublinearityReport:
    """Axis-wise decay of chi/k plus the density of large-chi sites.

    Part one follows each coordinate axis from the origin through the
    occupied sites of that line (wrapping once around the torus) and records
    |chi at the k-th site| / k; the per-axis summary is the max over the
    outer half.  Part two reports the fraction of occupied sites within the
    wrapped box of radius L/4 whose |chi| is at least epsilon_frac * (L/4).
    """
    chi = field.chi
    norms = np.sqrt((chi**2).sum(axis=1))
    axis_ratios = []
    axis_max = []
    for axis in range(torus.d):
        col = 2 * axis
        ratios = []
        i = torus.origin
        k = 0
        while True:
            i = int(torus.nbr[i, col])
            k += 1
            ratios.append(norms[i] / k)
            if i == torus.origin:
                break
        ratios = np.array(ratios)
        axis_ratios.append(ratios)
        outer = ratios[len(ratios) // 2:]
        axis_max.append(float(outer.max()))
    n = torus.L // 4
    wrapped = np.minimum(torus.sites, torus.L - torus.sites)
    in_box = np.all(wrapped <= n, axis=1)
    box_norms = norms[in_box]
    density = float(np.mean(box_norms >= epsilon_frac * n))
    return SublinearityReport(
        axis_ratios=axis_ratios, axis_max=axis_max, density=density,
        box_radius=n, threshold=epsilon_frac,
    )


def martingale_decompose(field: CorrectorField, trajectory,
                         periodic: bool = False) -> np.ndarray:
    """M_k = X_k + chi(X_k mod L) along a trajectory started at the origin.

    With periodic=False the trajectory must stay inside the fundamental
    window (sup-norm at most L // 2), where the torus tables agree with the
    environment the trajectory was sampled in; leaving it raises LeftWindow.
    periodic=True treats the torus pattern as tiling all of Z^d, for walks
    that were themselves driven by the torus tables.
    """
    torus = field.torus
    pos = trajectory.positions() if hasattr(trajectory, "positions") else trajectory
    pos = np.asarray(pos, dtype=np.int64)
    if not periodic:
        radius = int(np.abs(pos).max(initial=0))
        if radius > torus.L // 2:
            raise LeftWindow(
                f"trajectory reaches sup-norm {radius} > L/2 = {torus.L // 2}"
            )
    wrapped = tuple((pos[:, j] % torus.L) for j in range(torus.d))
    idx = torus.grid[wrapped]
    if np.any(idx < 0):
        bad = int(np.nonzero(idx < 0)[0][0])
        raise ValueError(f"position {tuple(pos[bad])} is unoccupied")
    return pos.astype(np.float64) + field.chi[idx]


def estimate_one_step_covariance(field: CorrectorField,
                                 torus: TorusEnvironment | None = None
                                 ) -> np.ndarray:
    """Site-averaged covariance of one M-increment (the diffusion matrix)."""
    torus = torus or field.torus
    inc = _one_step_increments(torus, field.chi)
    mean = inc.mean(axis=1, keepdims=True)
    centered = inc - mean
    per_site = np.einsum("scd,sce->sde", centered, centered) / (2 * torus.d)
    return per_site.mean(axis=0)


def lindeberg_check(field: CorrectorField, torus: TorusEnvironment | None = None,
                    K_ladder=(0.0, 1.0, 2.0, 5.0, 10.0)) -> list:
    """[(K, truncated second-moment matrix)] for thresholds K in the ladder.

    Each matrix averages increment outer products over sites and directions,
    keeping only increments with norm strictly above K; K = 0 therefore
    reproduces the (uncentered) full second moment.
    """
    torus = torus or field.torus
    inc = _one_step_increments(torus, field.chi)
    norms = np.sqrt((inc**2).sum(axis=2))
    out = []
    for K in K_ladder:
        mask = norms > K
        weighted = inc * mask[:, :, None]
        mat = np.einsum("scd,sce->de", weighted, weighted)
        mat /= inc.shape[0] * inc.shape[1]
        out.append((float(K), mat))
    return out


def martingale_endpoints(field: CorrectorField, steps: int, replicas: int,
                         rng_seed: int, threads: int = 1) -> np.ndarray:
    """Endpoints M_n of replica walks driven by the torus neighbor table."""
    torus = field.torus
    core = backend.get()

    def job(r0, m):
        sites, pos = core.walk_table_batch(
            torus.nbr, torus.disp, torus.d, steps, rng_seed, r0, m,
            torus.origin,
        )
        return pos.astype(np.float64) + field.chi[sites.astype(np.int64)]

    if threads <= 1:
        return job(0, replicas)
    from concurrent.futures import ThreadPoolExecutor
    size = (replicas + threads - 1) // threads
    chunks = [(r0, min(size, replicas - r0)) for r0 in range(0, replicas, size)]
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        parts = list(pool.map(lambda c: job(*c), chunks))
    return np.vstack(parts)
