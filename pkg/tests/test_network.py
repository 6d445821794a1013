import numpy as np
import pytest

from ppwalk.env import Environment, EnvironmentConfig
from ppwalk.errors import WindowTooSmall
from ppwalk.network import (build_cut_network, conductance_ks_distance,
                            cutset_conductances, cutset_edges,
                            nash_williams_sum, size_biased_pmf,
                            unit_conductances)

FULL = EnvironmentConfig(dimension=2, kind="full", seed=0)
GAP2 = EnvironmentConfig(dimension=2, kind="periodic", seed=0,
                         pattern=((1, 0), (1, 0)))
BERN = EnvironmentConfig(dimension=2, kind="bernoulli", density=0.5, seed=8)


def brute_cutset_conductance(env, n):
    """Independent route: enumerate every unit straddle of the box boundary.

    For each line crossing the box, the subdivided unit edge over
    (n, n+1) (and (-n-1, -n)) inherits conductance = parent gap length.
    """
    total = 0
    for axis in (1, 2):
        from ppwalk.env import Direction
        fwd = Direction(axis, 1)
        for idx in range(-n, n + 1):
            for pos in (n, -n - 1):
                # find the occupied site at coordinate <= pos on this line
                c = pos
                probe = [0, 0]
                while True:
                    probe[axis - 1] = c
                    probe[2 - axis] = idx
                    if env.is_occupied(tuple(probe)):
                        break
                    c -= 1
                total += env.gap(tuple(probe), fwd)
    return total


def test_full_lattice_counts():
    """On the full lattice the cut network is the lattice itself: C = 8n+4."""
    net = build_cut_network(Environment(FULL), 12)
    rep = cutset_conductances(net, 10)
    assert np.array_equal(rep.conductance, 8 * rep.n + 4)
    assert np.all(unit_conductances(net, "h") == 1)
    assert np.all(unit_conductances(net, "v") == 1)


def test_gap2_periodic_counts():
    # only even rows and columns carry sites; each straddle has conductance 2
    net = build_cut_network(Environment(GAP2), 10)
    rep = cutset_conductances(net, 6)
    expect = [8 * (2 * (n // 2) + 1) for n in range(1, 7)]
    assert rep.conductance.tolist() == expect
    assert np.all(unit_conductances(net, "h") == 2)


def test_cutsets_match_brute_force():
    env = Environment(BERN)
    net = build_cut_network(env, 16)
    rep = cutset_conductances(net, 8)
    for n in (1, 3, 5, 8):
        assert rep.conductance[n - 1] == brute_cutset_conductance(env, n)


def test_cutset_edges_disjoint_and_consistent():
    env = Environment(BERN)
    net = build_cut_network(env, 12)
    rep = cutset_conductances(net, 9)
    seen = set()
    for n in range(1, 10):
        edges = cutset_edges(net, n)
        keys = {(lvl, idx, pos) for lvl, idx, pos, _ in edges}
        assert not keys & seen
        seen |= keys
        assert sum(c for _, _, _, c in edges) == rep.conductance[n - 1]


def test_conductance_mass_is_k_squared():
    """A parent edge of length k yields k unit edges of conductance k."""
    env = Environment(BERN)
    R = 20
    net = build_cut_network(env, R)
    for idx in (-5, 0, 3):
        arr = net.rows[idx]
        # oracle: straddle value of every unit interval (c, c+1) in window
        oracle = []
        for c in range(-R, R):
            i = int(np.searchsorted(arr, c, side="right"))
            oracle.append(int(arr[i] - arr[i - 1]))
        oracle = np.sort(np.array(oracle))
        # the same multiset restricted to this row, from the fast path
        gaps = np.diff(arr)
        overlap = np.minimum(arr[1:], R) - np.maximum(arr[:-1], -R)
        keep = overlap > 0
        fast = np.sort(np.repeat(gaps[keep], overlap[keep]))
        assert np.array_equal(oracle, fast)
        # parents fully inside the window account for k^2 conductance each
        inside = (arr[:-1] >= -R) & (arr[1:] <= R)
        for k in gaps[inside]:
            assert int(k) >= 1
        assert (gaps[inside] ** 2).sum() == sum(
            g * o for g, o in zip(gaps[inside], overlap[inside]))


def test_partial_sums_monotone():
    net = build_cut_network(Environment(BERN), 40)
    rep = cutset_conductances(net, 30)
    assert np.all(np.diff(rep.partial_sum) > 0)
    assert nash_williams_sum(rep, 1) == pytest.approx(1 / rep.conductance[0])
    assert nash_williams_sum(rep) == pytest.approx(rep.partial_sum[-1])


def test_full_lattice_harmonic_bracket():
    """Sum of 1/(8n+4) over n <= 1000 sits in the log-growth bracket."""
    net = build_cut_network(Environment(FULL), 1001, pad=4)
    rep = cutset_conductances(net, 1000)
    total = nash_williams_sum(rep)
    lo = np.log(1000) / 8 - 1
    hi = np.log(1000) / 4 + 1
    assert lo <= total <= hi
    assert total == pytest.approx(np.sum(1.0 / (8 * np.arange(1, 1001) + 4)))


def test_size_biased_law_geometric():
    vals, probs = size_biased_pmf(BERN, kmax=64)
    # k * 2^-k / 2 for p = 1/2
    expect = vals * 0.5**vals / 2.0
    assert np.allclose(probs, expect / expect.sum())
    assert probs.sum() == pytest.approx(1.0)


def test_empirical_conductances_follow_size_biased_law():
    env = Environment(BERN)
    net = build_cut_network(env, 50)
    samples = unit_conductances(net, "h")
    vals, probs = size_biased_pmf(BERN)
    assert conductance_ks_distance(samples, vals, probs) < 0.02


def test_window_guards():
    net = build_cut_network(Environment(FULL), 5)
    with pytest.raises(WindowTooSmall):
        cutset_conductances(net, 5)
    with pytest.raises(WindowTooSmall):
        cutset_edges(net, 7)
    with pytest.raises(ValueError):
        build_cut_network(Environment(EnvironmentConfig(
            dimension=3, kind="full", seed=0)), 4)
