"""Exact-moment engine: golden values, solver paths, error taxonomy."""

import numpy as np
import pytest

from ringgames import (
    ChainTriple,
    SolverError,
    SpatialParams,
    StructuralError,
    build_game_a_prime,
    build_game_b,
    capital_dependent_fixture,
    ergodicity_check,
    fundamental_matrix,
    mean_mu,
    moments,
    pattern_mean,
    pattern_variance,
    stationary_distribution,
    variance_sigma2,
)

from conftest import TABLE_P, as_dense, random_chain

TOL = 1e-12

# fundamental matrices of the three capital-dependent chains, exact rationals
Z_A = np.array([[7, 1, 1], [1, 7, 1], [1, 1, 7]]) / 9
Z_B = np.array([[1725, -38, 510], [-95, 1938, 354], [425, 118, 1654]]) / 2197
Z_C = (
    np.array(
        [[392265, 22884, 87532], [23585, 408580, 70516], [80305, 39900, 382476]]
    )
    / 502681
)

# period product of two fair-game turns followed by two capital-dependent
# turns, its stationary vector, and its fundamental matrix
PROD_22 = np.array([[162, 59, 99], [151, 58, 111], [111, 47, 162]]) / 320
PI_22 = np.array([2783, 1075, 2499]) / 6357
Z_22 = (
    np.array(
        [
            [569627023, 10027235, -54305421],
            [22416463, 532826915, -29894541],
            [-58953137, -14383645, 598685619],
        ]
    )
    / 525348837
)


def test_fixture_stationary_vectors():
    pi_b = stationary_distribution(capital_dependent_fixture("B")).pi
    assert np.abs(pi_b - np.array([5, 2, 6]) / 13).max() < TOL
    pi_c = stationary_distribution(capital_dependent_fixture("C_half")).pi
    assert np.abs(pi_c - np.array([245, 180, 284]) / 709).max() < TOL


def test_fixture_means():
    for kind, mu in [("A", 0.0), ("B", 0.0), ("C_half", 18 / 709)]:
        c = capital_dependent_fixture(kind)
        assert abs(mean_mu(c, stationary_distribution(c)) - mu) < TOL


def test_fixture_variances():
    targets = {"A": 1.0, "B": 81 / 169, "C_half": 311313105 / 356400829}
    for kind, s2 in targets.items():
        res = moments(capital_dependent_fixture(kind))
        assert abs(res.sigma2 - s2) < TOL
        assert res.sigma2 >= -1e-9


def test_fixture_fundamental_matrices():
    for kind, z in [("A", Z_A), ("B", Z_B), ("C_half", Z_C)]:
        c = capital_dependent_fixture(kind)
        zc = fundamental_matrix(c, stationary_distribution(c))
        assert np.abs(zc - z).max() < TOL


def test_fixture_kind_alias():
    a = moments(capital_dependent_fixture("C"))
    b = moments(capital_dependent_fixture("C_half"))
    assert a.mu == b.mu and a.sigma2 == b.sigma2
    with pytest.raises(ValueError):
        capital_dependent_fixture("D")


def test_two_by_two_pattern_golden_values():
    a = capital_dependent_fixture("A")
    b = capital_dependent_fixture("B")
    assert abs(pattern_mean(a, b, 2, 2) - 4 / 163) < TOL
    assert abs(pattern_variance(a, b, 2, 2) - 1923037543 / 2195688729) < TOL


def test_two_by_two_period_product_matrices():
    a = as_dense(capital_dependent_fixture("A").P)
    b = as_dense(capital_dependent_fixture("B").P)
    prod = a @ a @ b @ b
    assert np.abs(prod - PROD_22).max() < TOL
    pc = ChainTriple(3, prod, np.zeros((3, 3)), np.zeros((3, 3)))
    pi = stationary_distribution(pc)
    assert np.abs(pi.pi - PI_22).max() < TOL
    assert np.abs(fundamental_matrix(pc, pi) - Z_22).max() < TOL


def test_fundamental_matrix_inverts_its_defining_system(rng):
    for c in (capital_dependent_fixture("C_half"), random_chain(rng, 17)):
        pi = stationary_distribution(c)
        z = fundamental_matrix(c, pi)
        sys = np.eye(c.dim) - as_dense(c.P) + np.outer(np.ones(c.dim), pi.pi)
        assert np.abs(z @ sys - np.eye(c.dim)).max() < 1e-10


def test_variance_solver_paths_agree(rng):
    # dim 130 exceeds the dense-storage threshold, exercising sparse input
    chains = [
        capital_dependent_fixture("C_half"),
        random_chain(rng, 40),
        random_chain(rng, 130),
    ]
    for c in chains:
        pi = stationary_distribution(c)
        v_dense = variance_sigma2(c, pi, method="dense-inverse")
        v_solve = variance_sigma2(c, pi, method="linear-solve")
        assert abs(v_dense - v_solve) < 1e-9


def test_iterative_stationary_matches_dense(rng):
    c = random_chain(rng, 48)
    direct = stationary_distribution(c)
    iterated = stationary_distribution(c, 1e-12, dense_cap=8)
    assert direct.method == "dense-lu" and iterated.method == "power"
    assert np.abs(direct.pi - iterated.pi).max() < 1e-9


def test_stationary_invariants():
    sd = stationary_distribution(capital_dependent_fixture("C_half"))
    assert sd.pi.min() >= 0
    assert abs(sd.pi.sum() - 1.0) < TOL
    assert sd.residual < TOL


def test_pattern_with_identical_games_degenerates():
    c = capital_dependent_fixture("C_half")
    res = moments(c)
    for r, s in [(1, 1), (2, 3)]:
        assert abs(pattern_mean(c, c, r, s) - res.mu) < TOL
        assert abs(pattern_variance(c, c, r, s) - res.sigma2) < 1e-10


def test_pattern_zero_channel_shortcut_matches_general():
    pars = SpatialParams(3, TABLE_P)
    a = build_game_a_prime(pars)
    b = build_game_b(pars)
    for r, s in [(1, 2), (2, 2)]:
        general = pattern_variance(a, b, r, s, formula="general")
        shortcut = pattern_variance(a, b, r, s, formula="zero-a")
        assert abs(general - shortcut) < TOL
        assert abs(pattern_variance(a, b, r, s) - general) < TOL


def test_ergodicity_report_on_fixture():
    rep = ergodicity_check(capital_dependent_fixture("B"))
    assert rep.ergodic and rep.irreducible and rep.aperiodic
    assert rep.closed_classes == 1 and rep.transient_states.size == 0


def test_reducible_chain_detected_and_refused():
    p = np.eye(2)
    c = ChainTriple(2, p, np.zeros((2, 2)), np.zeros((2, 2)))
    rep = ergodicity_check(c)
    assert not rep.ergodic and rep.closed_classes == 2
    with pytest.raises(StructuralError):
        stationary_distribution(c)


def test_periodic_chain_flagged_but_solvable():
    p = np.array([[0.0, 1.0], [1.0, 0.0]])
    c = ChainTriple(2, p, np.zeros((2, 2)), np.zeros((2, 2)))
    rep = ergodicity_check(c)
    assert rep.irreducible and not rep.aperiodic and rep.periods == (2,)
    assert not rep.ergodic
    # the stationary law is still unique; only CLT-style uses need aperiodicity
    assert np.abs(stationary_distribution(c).pi - 0.5).max() < TOL


def test_pattern_refuses_non_ergodic_product():
    ident = ChainTriple(2, np.eye(2), np.zeros((2, 2)), np.zeros((2, 2)))
    with pytest.raises(StructuralError):
        pattern_mean(ident, ident, 1, 1)


def test_event_assembly_accumulates_duplicates():
    c = ChainTriple.from_events(
        2,
        rows=[0, 0, 0, 1],
        cols=[1, 1, 0, 0],
        prob=[0.25, 0.5, 0.25, 1.0],
        payoff=[1, -1, 1, 0],
    )
    assert np.allclose(as_dense(c.P), [[0.25, 0.75], [1.0, 0.0]])
    assert np.allclose(as_dense(c.Pdot), [[0.25, -0.25], [0.0, 0.0]])
    assert np.allclose(as_dense(c.Pddot), [[0.25, 0.75], [0.0, 0.0]])


def test_rejects_malformed_transition_matrices():
    with pytest.raises(ValueError):
        ChainTriple(
            2, np.array([[0.5, 0.4], [0.0, 1.0]]), np.zeros((2, 2)), np.zeros((2, 2))
        )
    with pytest.raises(ValueError):
        ChainTriple(
            2, np.array([[-0.1, 1.1], [0.5, 0.5]]), np.zeros((2, 2)), np.zeros((2, 2))
        )


def test_mean_rejects_mismatched_stationary_vector():
    b = capital_dependent_fixture("B")
    sd_wrong = stationary_distribution(
        ChainTriple(2, np.full((2, 2), 0.5), np.zeros((2, 2)), np.zeros((2, 2)))
    )
    with pytest.raises(ValueError):
        mean_mu(b, sd_wrong)


def test_solver_error_carries_residual(rng):
    c = random_chain(rng, 64)
    with pytest.raises(SolverError) as excinfo:
        stationary_distribution(c, 1e-15, dense_cap=8, maxiter=3)
    assert np.isfinite(excinfo.value.residual)


def test_moments_wrapper_matches_components():
    c = capital_dependent_fixture("C_half")
    res = moments(c)
    sd = stationary_distribution(c)
    assert abs(res.mu - mean_mu(c, sd)) < TOL
    assert abs(res.sigma2 - variance_sigma2(c, sd)) < TOL
    assert res.reduced_dim == 3 and np.isfinite(res.residual)
