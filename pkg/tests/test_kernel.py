import math

import numpy as np
import pytest

from ppwalk.env import Environment, EnvironmentConfig
from ppwalk.errors import ReportFailure
from ppwalk.kernel import (KernelEvolution, SparseDistribution,
                           check_inequalities, displacement_entropy_series,
                           evolve, heat_kernel_diagonal, series_from_arrays)

FULL1 = EnvironmentConfig(dimension=1, kind="full", seed=0)
FULL3 = EnvironmentConfig(dimension=3, kind="full", seed=0)
BERN2 = EnvironmentConfig(dimension=2, kind="bernoulli", density=0.5, seed=4)
SPACING2 = EnvironmentConfig(dimension=1, kind="periodic", seed=0,
                             pattern=((1, 0),))


def test_one_step_from_delta():
    env = Environment(FULL1)
    dist = evolve(env, SparseDistribution.delta_origin(1))
    assert dist.as_dict() == {(-1,): 0.5, (1,): 0.5}
    again = evolve(env, dist)
    assert again.prob_at((0,)) == pytest.approx(0.5, abs=1e-15)


def test_diagonal_binomial_oracle():
    """Full-lattice return probabilities are central binomials."""
    diag = heat_kernel_diagonal(Environment(FULL1), 20)
    for n in range(11):
        expect = math.comb(2 * n, n) / 4.0**n
        assert diag[2 * n] == pytest.approx(expect, abs=1e-13)
    assert diag[10] == pytest.approx(63 / 256)
    # odd times never return
    assert np.all(diag[1::2] == 0.0)


def test_first_step_never_returns():
    for cfg in (FULL1, BERN2, SPACING2):
        diag = heat_kernel_diagonal(Environment(cfg), 1)
        assert diag[1] == 0.0


def test_spacing2_two_step_enumeration():
    env = Environment(SPACING2)
    dist = evolve(env, evolve(env, SparseDistribution.delta_origin(1)))
    got = dist.as_dict()
    assert got[(0,)] == pytest.approx(0.5)
    assert got[(4,)] == pytest.approx(0.25)
    assert got[(-4,)] == pytest.approx(0.25)


def test_full_d3_diagonal_slope():
    """log p^{2n}(0,0) vs log n over n in [20, 60] fits slope -d/2."""
    diag = heat_kernel_diagonal(Environment(FULL3), 120)
    ns = np.arange(20, 61)
    slope = np.polyfit(np.log(ns), np.log(diag[2 * ns]), 1)[0]
    assert abs(slope + 1.5) <= 0.15


def test_mass_conservation():
    env = Environment(BERN2)
    ev = KernelEvolution(env)
    for _ in range(40):
        ev.step()
        assert abs(ev.probs.sum() - 1.0) <= 1e-12


def test_detailed_balance_one_step():
    """p(x, y) = p(y, x) = 1/(2d) for every neighbor pair."""
    env = Environment(BERN2)
    x = (0, 0)
    for y in env.neighbors(x):
        dx = SparseDistribution(np.array([x]), np.ones(1), 0)
        dy = SparseDistribution(np.array([y]), np.ones(1), 0)
        assert evolve(env, dx).prob_at(y) == pytest.approx(0.25)
        assert evolve(env, dy).prob_at(x) == pytest.approx(0.25)


def test_series_hand_values_full_d1():
    series = displacement_entropy_series(Environment(FULL1), 3)
    assert series.M[0] == 0.0 and series.Q[0] == 0.0
    # g_1 = {0: 1/2, -1: 1/4, +1: 1/4}
    assert series.M[1] == pytest.approx(0.5)
    assert series.Q[1] == pytest.approx(1.5 * math.log(2))
    # unit gaps: S(n) = 2 * 2d * sum g_n = 4d
    assert np.allclose(series.S, 4.0)
    assert series.diagonal[0] == 1.0
    assert series.N == 3


def test_diagonal_decay_bounded():
    # n^{d/2} p^{2n}(0,0) stays within a fixed band over the computed range
    series = displacement_entropy_series(Environment(BERN2), 60)
    ns = np.arange(5, 31)
    scaled = ns * series.diagonal[2 * ns]
    assert scaled.max() / scaled.min() < 3.0


def test_inequalities_full_d1():
    series = displacement_entropy_series(Environment(FULL1), 200)
    rep = check_inequalities(series)
    assert rep.all_ok()
    assert rep.q_slope >= 0.5 - 0.1


def test_inequalities_bernoulli_d2():
    series = displacement_entropy_series(Environment(BERN2), 60)
    rep = check_inequalities(series)
    assert rep.all_ok()
    assert rep.diffusive_spread <= 3.0


def test_increment_negative_control():
    """Constant entropy with growing displacement must fail check (d) at 1."""
    n = 60
    fake = series_from_arrays(1, np.arange(n + 1, dtype=float),
                              np.zeros(n + 1), np.full(n + 1, 4.0))
    rep = check_inequalities(fake, raise_on_failure=False)
    assert not rep.increment_ok
    assert ("increment", 1) in rep.failures
    with pytest.raises(ReportFailure):
        check_inequalities(fake)


def test_short_series_rejected():
    series = displacement_entropy_series(Environment(FULL1), 10)
    with pytest.raises(ValueError):
        check_inequalities(series)


def test_distribution_validation():
    with pytest.raises(ValueError):
        SparseDistribution(np.zeros((1, 2), dtype=np.int64),
                           np.array([0.5]), 0)
    with pytest.raises(ValueError):
        SparseDistribution(np.zeros((2, 1), dtype=np.int64),
                           np.array([1.5, -0.5]), 0)
