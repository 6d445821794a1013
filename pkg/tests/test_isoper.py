import itertools
import math

import numpy as np
import pytest
from scipy import integrate

from ppwalk.env import Environment, EnvironmentConfig
from ppwalk.errors import DomainError
from ppwalk.isoper import (FiniteSet, compress, energy, mp_step_bound,
                           profile_upper_envelope, projection_bound_check,
                           projection_sizes, random_finite_set)


def test_energy_hand_values():
    assert energy(FiniteSet([(1, 1)])) == 2
    assert energy(FiniteSet([(1, 1), (2, 1)])) == 5


def test_energy_brute_force_oracle():
    rng = np.random.default_rng(0)
    for _ in range(30):
        pts = rng.integers(1, 11, size=(20, 2))
        A = FiniteSet(np.unique(pts, axis=0))
        brute = sum(int(x) + int(y) for x, y in A.points)
        assert energy(A) == brute


def test_singleton_normalizes_to_corner():
    for d in (1, 2, 3):
        A = FiniteSet([tuple(range(5, 5 + d))])
        assert compress(A) == FiniteSet([(1,) * d])


def test_box_is_fixed_point():
    box = FiniteSet([(i, j) for i in range(1, 4) for j in range(1, 5)])
    assert compress(box) == box


def test_three_point_example():
    """The staircase example lands on the energy-9 column, a fixed point.

    Exhaustive search over 3-point subsets of the positive quadrant shows
    the global minimum energy is 8, so the per-fiber procedure (which
    preserves fiber structure, not just cardinality) is allowed to stop
    at 9 here.
    """
    A = FiniteSet([(1, 2), (1, 3), (2, 1)])
    B = compress(A)
    assert B == FiniteSet([(1, 1), (1, 2), (1, 3)])
    assert energy(B) == 9
    assert compress(B) == B
    best = min(
        sum(x + y for x, y in combo)
        for combo in itertools.combinations(
            [(x, y) for x in range(1, 4) for y in range(1, 4)], 3)
    )
    assert best == 8


def test_compression_contract_random_sets():
    """Cardinality kept; projections and energy never grow; fixed point."""
    rng = np.random.default_rng(7)
    for d in (2, 3):
        for _ in range(300):
            A = random_finite_set(rng, 12, d)
            B = compress(A)
            assert len(B) == len(A)
            for pa, pb in zip(projection_sizes(A), projection_sizes(B)):
                assert pb <= pa
            assert energy(B) <= energy(A)
            assert compress(B) == B


def test_projection_bound_d2_exact():
    # square: ratio exactly 1
    sq = FiniteSet([(i, j) for i in range(1, 6) for j in range(1, 6)])
    rep = projection_bound_check(sq)
    assert rep.ratio == pytest.approx(1.0)
    assert rep.ok
    # line of n points: ratio sqrt(n)
    line = FiniteSet([(i, 1) for i in range(1, 10)])
    rep = projection_bound_check(line)
    assert rep.ratio == pytest.approx(3.0)
    assert rep.ok


def test_projection_bound_random_sweep():
    """max(|A_1|, |A_2|) >= sqrt(|A|) holds on every random d=2 sample."""
    rng = np.random.default_rng(1)
    for _ in range(500):
        A = random_finite_set(rng, 12, 2, max_size=144)
        assert max(projection_sizes(A)) ** 2 >= len(A)
        assert projection_bound_check(A).ok


def test_profile_full_lattice_boxes():
    env = Environment(EnvironmentConfig(dimension=2, kind="full", seed=0))
    pts = profile_upper_envelope(env, 12, [m * m for m in range(1, 13)])
    for m, p in zip(range(1, 13), pts):
        assert p.u == m * m
        assert p.phi == pytest.approx(1.0 / m)
    assert pts[0].phi == 1.0  # singleton: all mass exits


def test_profile_scaled_floor_bernoulli():
    """Regression fixture: u^{1/2} Phi stays above 0.2 on Bernoulli(0.7)."""
    worst = np.inf
    for seed in (0, 1, 2):
        env = Environment(EnvironmentConfig(dimension=2, kind="bernoulli",
                                            density=0.7, seed=seed))
        pts = profile_upper_envelope(env, 40, [m * m for m in range(4, 41)])
        worst = min(worst, min(np.sqrt(p.u) * p.phi for p in pts))
    assert worst >= 0.2


def test_profile_rejects_d1():
    env = Environment(EnvironmentConfig(dimension=1, kind="full", seed=0))
    with pytest.raises(ValueError):
        profile_upper_envelope(env, 5, [1, 4])


def test_mp_bound_closed_form_vs_quadrature():
    for d in (2, 3):
        for eps in (0.5, 0.1, 0.01):
            c0 = 0.7
            exact = (2 * d / c0**2) * 4 ** (2 / d) * (eps ** (-2 / d) - 1)
            num, err = integrate.quad(
                lambda u: 4 / (u * (c0 * u ** (-1 / d)) ** 2), 4, 4 / eps)
            assert abs(exact - num) <= max(1e-9, 10 * err)


def test_mp_bound_values():
    assert mp_step_bound(0.25, 1.0, 2, 1.0) == 1
    assert mp_step_bound(0.25, 1.0, 2, 0.01) == 14257
    # d=2, gamma=1/4, c0=1: prefactor ((1-g)/g)^2 * (2d/c0^2) * 4^(2/d) = 144,
    # so the bound is ceil(1 + 144 * (1/eps - 1)).
    for eps in (0.5, 0.1, 0.01):
        expect = math.ceil(1.0 + 144.0 * (1.0 / eps - 1.0))
        assert mp_step_bound(0.25, 1.0, 2, eps) == expect


def test_mp_bound_monotone():
    vals = [mp_step_bound(0.25, 1.0, 2, e) for e in (0.5, 0.1, 0.02, 0.004)]
    assert vals == sorted(vals)
    assert mp_step_bound(0.25, 2.0, 2, 0.01) < mp_step_bound(0.25, 1.0, 2, 0.01)


def test_mp_bound_domain_errors():
    with pytest.raises(DomainError):
        mp_step_bound(0.7, 1.0, 2, 0.1)
    with pytest.raises(DomainError):
        mp_step_bound(0.25, 0.0, 2, 0.1)
    with pytest.raises(DomainError):
        mp_step_bound(0.25, 1.0, 2, 0.0)


def test_finite_set_validation():
    with pytest.raises(ValueError):
        FiniteSet(np.zeros((0, 2), dtype=np.int64))
    with pytest.raises(ValueError):
        FiniteSet([(1, 1), (1, 1)])
