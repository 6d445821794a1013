"""Estimators and hypothesis tests tying the simulations to limit laws.

Covers the one-dimensional normal check for endpoint samples, the zero-
velocity estimate, an isotropy test for the high-dimensional covariance,
and the dyadic exponential sum used by the heat-kernel bound.  P-values are
asymptotic: the Kolmogorov distribution is evaluated by its alternating
series, and the isotropy test reduces to normal scores with a Bonferroni
correction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import DegenerateSample

KOLMOGOROV_TERMS = 100
TERM_FLOOR = 1e-18


@dataclass
class TestResult:
    statistic: float
    p_value: float
    reject_at_1pct: bool


@dataclass
class SampleSummary:
    count: int
    mean: np.ndarray
    covariance: np.ndarray
    minimum: np.ndarray
    maximum: np.ndarray


def kolmogorov_sf(t: float) -> float:
    """P(sup |Brownian bridge| > t) by the alternating theta series.

    Below t = 0.05 the survival probability is 1 to within exp(-493) but the
    truncated series has not yet converged, so the exact limit is returned.
    """
    if t < 0.05:
        return 1.0
    k = np.arange(1, KOLMOGOROV_TERMS + 1, dtype=np.float64)
    s = 2.0 * np.sum((-1.0) ** (k - 1) * np.exp(-2.0 * (k * t) ** 2))
    return float(min(1.0, max(0.0, s)))


def summarize(samples) -> SampleSummary:
    a = np.asarray(samples, dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None]
    if len(a) < 2:
        cov = np.zeros((a.shape[1], a.shape[1]))
    else:
        cov = np.atleast_2d(np.cov(a.T, ddof=1))
    return SampleSummary(
        count=len(a), mean=a.mean(axis=0), covariance=cov,
        minimum=a.min(axis=0), maximum=a.max(axis=0),
    )


def ks_normal_test(samples, sigma: float) -> TestResult:
    """One-sample Kolmogorov-Smirnov test against N(0, sigma^2).

    Constant samples are handled like any other input: against a continuous
    null their distance is at least 1/2, which rejects decisively.
    """
    x = np.sort(np.asarray(samples, dtype=np.float64).ravel())
    n = len(x)
    if n < 100:
        raise ValueError(f"need at least 100 samples, got {n}")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    f = norm.cdf(x / sigma)
    grid = np.arange(n + 1) / n
    d_stat = float(max((grid[1:] - f).max(), (f - grid[:-1]).max()))
    p = kolmogorov_sf(math.sqrt(n) * d_stat)
    return TestResult(statistic=d_stat, p_value=p, reject_at_1pct=p < 0.01)


def velocity_estimate(trajectories) -> SampleSummary:
    """Summary of X_n / n over a batch of trajectories."""
    rows = []
    for t in trajectories:
        n = len(t.dirs)
        if n < 1:
            raise ValueError("trajectories must have at least one step")
        rows.append(np.asarray(t.endpoint(), dtype=np.float64) / n)
    return summarize(np.array(rows))


def velocity_from_endpoints(endpoints, n: int) -> SampleSummary:
    """Same summary computed from an (m, d) endpoint matrix."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return summarize(np.asarray(endpoints, dtype=np.float64) / n)


def covariance_isotropy_test(endpoints, n: int) -> TestResult:
    """Test that Cov(X_n/sqrt(n)) is a multiple of the identity.

    Combines Fisher-z scores for each off-diagonal correlation with
    kurtosis-adjusted scores for each pairwise log variance ratio; the
    statistic is the largest absolute score and the p-value is Bonferroni
    corrected over all d(d-1) comparisons.
    """
    X = np.asarray(endpoints, dtype=np.float64) / math.sqrt(n)
    if X.ndim != 2 or X.shape[1] < 2:
        raise ValueError("need (m, d) samples with d >= 2")
    m, d = X.shape
    if m < 100:
        raise ValueError(f"need at least 100 samples, got {m}")
    var = X.var(axis=0, ddof=1)
    if np.any(var == 0.0):
        raise DegenerateSample("an axis has zero sample variance")
    c = X - X.mean(axis=0)
    kurt = (c**4).mean(axis=0) / var**2
    log_var_se = np.sqrt(np.maximum(kurt - 1.0, 1e-12) / m)
    corr = np.corrcoef(X.T)
    scores = []
    for i in range(d):
        for j in range(i + 1, d):
            scores.append(math.atanh(float(np.clip(corr[i, j], -0.999999, 0.999999)))
                          * math.sqrt(m - 3))
            denom = math.sqrt(log_var_se[i] ** 2 + log_var_se[j] ** 2)
            scores.append(math.log(var[i] / var[j]) / denom)
    scores = np.array(scores)
    stat = float(np.abs(scores).max())
    n_tests = d * (d - 1)
    p = min(1.0, n_tests * 2.0 * float(norm.sf(stat)))
    return TestResult(statistic=stat, p_value=p, reject_at_1pct=p < 0.01)


def dyadic_exp_sum(a: float, d: int) -> float:
    """Direct evaluation of sum over n >= 0 of exp(-a 2^n) 2^(n d)."""
    if a <= 0:
        raise ValueError("a must be positive")
    total = 0.0
    log2 = math.log(2.0)
    for n in range(500):
        log_term = n * d * log2 - a * (2.0**n)
        term = math.exp(log_term) if log_term > -800 else 0.0
        if term >= TERM_FLOOR:
            total += term
        elif a * 2.0**n > d * log2:
            break
    return total


@dataclass
class ExpSumReport:
    dimension: int
    a_grid: np.ndarray
    sums: np.ndarray
    products: np.ndarray
    sup_product: float
    ratio_last_first: float
    monotone: bool
    stable: bool


def exp_sum_bound_check(a_grid, d: int) -> ExpSumReport:
    """Evaluate the dyadic sum over the grid and report scaled stability.

    ``products`` is sum * a^d; ``stable`` asks the last/first product ratio
    to stay at or below 2 across the grid, and ``monotone`` that the raw
    sums decrease as a increases.
    """
    a = np.asarray(a_grid, dtype=np.float64)
    if a.ndim != 1 or len(a) == 0:
        raise ValueError("a_grid must be a nonempty 1-d sequence")
    if np.any(a <= 0) or np.any(a > 2):
        raise ValueError("a_grid must lie in (0, 2]")
    sums = np.array([dyadic_exp_sum(float(x), d) for x in a])
    products = sums * a**d
    order = np.argsort(a)
    monotone = bool(np.all(np.diff(sums[order]) <= 0))
    ratio = float(products[-1] / products[0])
    return ExpSumReport(
        dimension=d, a_grid=a, sums=sums, products=products,
        sup_product=float(products.max()), ratio_last_first=ratio,
        monotone=monotone, stable=ratio <= 2.0,
    )
