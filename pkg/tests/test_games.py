"""Ring-game construction: bit conventions, event bookkeeping, symmetries."""

import numpy as np
import pytest

from ringgames import (
    SpatialParams,
    aug_index,
    build_augmented,
    build_game,
    build_game_a,
    build_game_a_prime,
    build_game_b,
    ergodicity_check,
    mean_mu,
    mix,
    moments,
    neighborhood_index,
    orbits,
    pattern_mean,
    pattern_variance,
    profit_alphabet,
    reflect,
    rotate,
    stationary_distribution,
)
from ringgames.reduction import check_g_invariance

from conftest import TABLE_P, as_dense, draw_params

# the neighbor-exchange game at n=4, rows/columns permuted so orbit members
# sit together: {0}, {8,4,2,1}, {12,6,3,9}, {10,5}, {14,7,11,13}, {15}
ORDER_N4 = [0, 8, 4, 2, 1, 12, 6, 3, 9, 10, 5, 14, 7, 11, 13, 15]
A_PRIME_N4 = (
    np.array(
        [
            [0, 2, 2, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            [0, 2, 1, 0, 1, 1, 0, 0, 1, 2, 0, 0, 0, 0, 0, 0],
            [0, 1, 2, 1, 0, 1, 1, 0, 0, 0, 2, 0, 0, 0, 0, 0],
            [0, 0, 1, 2, 1, 0, 1, 1, 0, 2, 0, 0, 0, 0, 0, 0],
            [0, 1, 0, 1, 2, 0, 0, 1, 1, 0, 2, 0, 0, 0, 0, 0],
            [0, 1, 1, 0, 0, 2, 0, 0, 0, 1, 1, 1, 0, 0, 1, 0],
            [0, 0, 1, 1, 0, 0, 2, 0, 0, 1, 1, 1, 1, 0, 0, 0],
            [0, 0, 0, 1, 1, 0, 0, 2, 0, 1, 1, 0, 1, 1, 0, 0],
            [0, 1, 0, 0, 1, 0, 0, 0, 2, 1, 1, 0, 0, 1, 1, 0],
            [0, 0, 0, 0, 0, 1, 1, 1, 1, 4, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 1, 1, 1, 1, 0, 4, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 1, 1, 0, 0, 2, 0, 2, 1, 0, 1, 0],
            [0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 2, 1, 2, 1, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 1, 1, 2, 0, 0, 1, 2, 1, 0],
            [0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 2, 1, 0, 1, 2, 0],
            [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 2, 2, 2, 0],
        ]
    )
    / 8
)


def _bit(state: int, x: int, n: int) -> int:
    return (state >> (n - x)) & 1


def brute_force_game_b(pars: SpatialParams):
    """Scalar re-derivation of the neighbor-dependent game, as an oracle."""
    n, dim = pars.n, 1 << pars.n
    p_mat = np.zeros((dim, dim))
    pdot = np.zeros((dim, dim))
    pddot = np.zeros((dim, dim))
    for eta in range(dim):
        for x in range(1, n + 1):
            left = ((x - 2) % n) + 1
            right = (x % n) + 1
            m = 2 * _bit(eta, left, n) + _bit(eta, right, n)
            win = eta | (1 << (n - x))
            lose = eta & ~(1 << (n - x))
            pm = pars.p[m]
            p_mat[eta, win] += pm / n
            pdot[eta, win] += pm / n
            pddot[eta, win] += pm / n
            p_mat[eta, lose] += (1 - pm) / n
            pdot[eta, lose] -= (1 - pm) / n
            pddot[eta, lose] += (1 - pm) / n
    return p_mat, pdot, pddot


def test_params_validation():
    with pytest.raises(ValueError):
        SpatialParams(2, (0.5, 0.5, 0.5, 0.5))
    with pytest.raises(ValueError):
        SpatialParams(25, (0.5, 0.5, 0.5, 0.5))
    with pytest.raises(ValueError):
        SpatialParams(4, (0.5, 0.5, 1.2, 0.5))
    with pytest.raises(ValueError):
        SpatialParams(4, (0.5, 0.5, 0.5))
    pars = SpatialParams(4, TABLE_P)
    assert pars.q == tuple(1 - v for v in TABLE_P)
    assert pars.symmetric
    assert not SpatialParams(4, (0.3, 0.2, 0.4, 0.6)).symmetric


def test_neighborhood_index_wraps_around_the_ring():
    # state 1010: players 1..4 have statuses 1,0,1,0
    assert neighborhood_index(0b1010, 1, 4) == 0  # neighbors are players 4 and 2
    assert neighborhood_index(0b1010, 2, 4) == 3  # neighbors are players 1 and 3
    assert neighborhood_index(0b1010, 3, 4) == 0
    assert neighborhood_index(0b1010, 4, 4) == 3
    assert neighborhood_index(0b100, 3, 3) == 1  # left is player 2 (0), player 1 wins
    for bad_x in (0, 5):
        with pytest.raises(ValueError):
            neighborhood_index(0b1010, bad_x, 4)


def test_rotate_and_reflect_conventions():
    assert rotate(0b1000, 4) == 0b0100
    assert rotate(0b0001, 4) == 0b1000
    assert reflect(0b1100, 4) == 0b0011
    assert reflect(0b1010, 4) == 0b0101
    v, orbit = 0b1000, set()
    for _ in range(4):
        orbit.add(v)
        v = rotate(v, 4)
    assert orbit == {8, 4, 2, 1}


def test_game_b_matches_brute_force_enumeration(rng):
    for n in (3, 4):
        for _ in range(3):
            pars = draw_params(rng, n)
            c = build_game_b(pars)
            p_ref, pdot_ref, pddot_ref = brute_force_game_b(pars)
            assert np.abs(as_dense(c.P) - p_ref).max() < 1e-15
            assert np.abs(as_dense(c.Pdot) - pdot_ref).max() < 1e-15
            assert np.abs(as_dense(c.Pddot) - pddot_ref).max() < 1e-15


def test_game_b_printed_entries_n4():
    p0, p1, p2, p3 = TABLE_P
    c = as_dense(build_game_b(SpatialParams(4, TABLE_P)).P)
    # from state 1000: player 2 winning (neighbors 1,0) uses the "2" coin,
    # player 4 winning (neighbors 0,1) uses the "1" coin
    assert abs(c[8, 12] - p2 / 4) < 1e-15
    assert abs(c[8, 9] - p1 / 4) < 1e-15
    assert abs(c[0, 0] - (1 - p0)) < 1e-15
    for one_win in (8, 4, 2, 1):
        assert abs(c[0, one_win] - p0 / 4) < 1e-15
    assert abs(c[15, 15] - p3) < 1e-15


def test_game_a_is_fair_and_unit_variance(rng):
    for n in (3, 5):
        pars = draw_params(rng, n)
        res = moments(build_game_a(pars))
        assert abs(res.mu) < 1e-12
        assert abs(res.sigma2 - 1.0) < 1e-10
        # doubly stochastic: the uniform law is stationary
        sd = stationary_distribution(build_game_a(pars))
        assert np.abs(sd.pi - 1.0 / (1 << n)).max() < 1e-12


def test_neighbor_exchange_game_matches_printed_matrix():
    c = build_game_a_prime(SpatialParams(4, (0.3, 0.7, 0.2, 0.9)))
    p = as_dense(c.P)[np.ix_(ORDER_N4, ORDER_N4)]
    assert np.abs(p - A_PRIME_N4).max() < 1e-15
    # wealth transfer only: no collective profit in either channel
    assert np.abs(as_dense(c.Pdot)).max() == 0.0
    assert np.abs(as_dense(c.Pddot)).max() == 0.0


def test_build_game_dispatch():
    pars = SpatialParams(3, TABLE_P)
    for name, builder in [
        ("A", build_game_a),
        ("A_prime", build_game_a_prime),
        ("B", build_game_b),
    ]:
        assert np.abs(as_dense(build_game(name, pars).P) - as_dense(builder(pars).P)).max() == 0.0
    with pytest.raises(ValueError):
        build_game("Z", pars)


def test_mixture_endpoints_and_convexity(rng):
    pars = draw_params(rng, 4)
    a = build_game_a_prime(pars)
    b = build_game_b(pars)
    assert np.abs(as_dense(mix(0.0, a, b).P) - as_dense(b.P)).max() == 0.0
    assert np.abs(as_dense(mix(1.0, a, b).P) - as_dense(a.P)).max() == 0.0
    m = mix(0.3, a, b)
    assert np.abs(as_dense(m.P) - (0.3 * as_dense(a.P) + 0.7 * as_dense(b.P))).max() < 1e-15
    assert np.abs(as_dense(m.Pdot) - 0.7 * as_dense(b.Pdot)).max() < 1e-15
    with pytest.raises(ValueError):
        mix(1.5, a, b)


def test_all_fair_coins_give_zero_mean():
    for n in (3, 6, 10):
        pars = SpatialParams(n, (0.5, 0.5, 0.5, 0.5))
        res = moments(build_game_b(pars), with_variance=False)
        assert abs(res.mu) < 1e-12


def test_rotation_invariance_always_reflection_iff_symmetric(rng):
    for n in (3, 6):
        sym = draw_params(rng, n)
        sym = SpatialParams(n, (sym.p[0], sym.p[1], sym.p[1], sym.p[3]))
        asym = SpatialParams(n, (sym.p[0], 0.1, 0.9, sym.p[3]))
        rot = orbits(n, "cyclic")
        dih = orbits(n, "dihedral")
        assert check_g_invariance(build_game_b(sym), rot)
        assert check_g_invariance(build_game_b(sym), dih)
        assert check_g_invariance(build_game_b(asym), rot)
        assert not check_g_invariance(build_game_b(asym), dih)
        assert check_g_invariance(build_game_a_prime(asym), dih)
        assert check_g_invariance(build_game_a(asym), dih)


def test_profit_alphabet_and_augmented_layout():
    assert profit_alphabet(None) == (-1, 1)
    assert profit_alphabet(0.5) == (-1, 0, 1)
    n, dim = 3, 8
    assert aug_index(5, -1, n) == 5
    assert aug_index(5, 1, n) == dim + 5
    assert aug_index(5, 0, n, gamma=0.5) == dim + 5
    assert aug_index(5, 1, n, gamma=0.5) == 2 * dim + 5
    with pytest.raises(ValueError):
        aug_index(5, 0, n)  # profit 0 impossible in the two-letter alphabet


def test_augmented_dimensions_and_inaccessible_corners(rng):
    pars = draw_params(rng, 3)
    pure = build_augmented(pars)
    assert pure.dim == 2 * 8
    mixed = build_augmented(pars, gamma=0.5)
    assert mixed.dim == 3 * 8
    # (all losers, +1) and (all winners, -1) cannot be reached in one turn
    rep = ergodicity_check(pure)
    expected = {aug_index(0, 1, 3), aug_index((1 << 3) - 1, -1, 3)}
    assert set(rep.transient_states.tolist()) == expected


def test_augmented_moments_equal_payoff_channel_moments(rng):
    # mean/variance computed on the profit-augmented space must match the
    # payoff-channel computation on the plain configuration space
    for n in (3, 4):
        for _ in range(4):
            pars = draw_params(rng, n)
            base_b = build_game_b(pars)
            base_a = build_game_a_prime(pars)
            for gamma in (None, 0.0, 0.25, 0.5, 1.0):
                aug = moments(build_augmented(pars, gamma=gamma))
                if gamma is None:
                    base = moments(base_b)
                else:
                    base = moments(mix(gamma, base_a, base_b))
                assert abs(aug.mu - base.mu) < 1e-10
                assert abs(aug.sigma2 - base.sigma2) < 1e-10
            aug_a = build_augmented(pars, gamma=1.0)
            aug_b = build_augmented(pars, gamma=0.0)
            for r, s in [(1, 1), (2, 2)]:
                mu_aug = pattern_mean(aug_a, aug_b, r, s)
                mu_base = pattern_mean(base_a, base_b, r, s)
                assert abs(mu_aug - mu_base) < 1e-10
                v_aug = pattern_variance(aug_a, aug_b, r, s)
                v_base = pattern_variance(base_a, base_b, r, s)
                assert abs(v_aug - v_base) < 1e-10


def test_mixture_mean_factorizes(rng):
    # with a zero-profit first game, the mixture mean is (1-gamma) times the
    # second game's payoff rates under the mixture's own stationary law
    pars = draw_params(rng, 4)
    a, b = build_game_a_prime(pars), build_game_b(pars)
    m = mix(0.25, a, b)
    sd = stationary_distribution(m)
    rate = float(sd.pi @ as_dense(b.Pdot).sum(axis=1))
    assert abs(mean_mu(m, sd) - 0.75 * rate) < 1e-12
