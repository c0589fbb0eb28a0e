import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lqg_infodesign.core import (
    GameSpec,
    InfoStructure,
    ObjectiveKind,
    agreement_objective,
    custom_objective,
    f_h_matrix,
    frob,
    full_info_structure,
    mean_actions,
    no_info_structure,
    benchmark_h,
    benchmark_sigma,
    welfare_objective,
)
from lqg_infodesign.errors import NegativeShift, NonSymmetric, NotPsd, SingularH

from conftest import random_invertible, random_spd


def test_agreement_single_player_is_zero():
    assert np.array_equal(agreement_objective(1).F, np.zeros((2, 2)))


def test_agreement_two_players():
    F11 = agreement_objective(2).blocks()[0]
    np.testing.assert_allclose(F11, [[-0.5, 0.5], [0.5, -0.5]])


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_agreement_zero_row_sums_and_zero_blocks(n):
    obj = agreement_objective(n)
    F11, F12, F21, F22 = obj.blocks()
    np.testing.assert_allclose(F11 @ np.ones(n), 0, atol=1e-14)
    assert not F12.any() and not F21.any() and not F22.any()
    assert obj.kind is ObjectiveKind.AGREEMENT


def test_agreement_matches_deviation_from_mean(rng):
    n = 4
    a = rng.standard_normal((20000, n))
    dev = a - a.mean(axis=1, keepdims=True)
    direct = -np.mean(np.sum(dev**2, axis=1))
    F11 = agreement_objective(n).blocks()[0]
    np.testing.assert_allclose(direct, np.mean(np.einsum("ij,jk,ik->i", a, F11, a)), rtol=1e-12)


def test_welfare_blocks():
    game = GameSpec(np.eye(2), np.eye(2))
    F = welfare_objective(game).F
    expected = np.block([[-np.eye(2), np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
    np.testing.assert_array_equal(F, expected)


def test_welfare_scalar():
    game = GameSpec([[2.0]], [[4.0]])
    np.testing.assert_array_equal(welfare_objective(game).F, [[-2, 1], [1, 0]])


def test_welfare_symmetrizes_h():
    game = GameSpec([[1, 0.5], [0.1, 1]], np.eye(2))
    obj = welfare_objective(game)
    np.testing.assert_allclose(obj.blocks()[0], -np.array([[1, 0.3], [0.3, 1]]))
    assert obj.symmetrized


def test_no_info_structure():
    game = GameSpec(np.eye(2), np.eye(2))
    np.testing.assert_array_equal(no_info_structure(game).X, np.diag([0, 0, 1, 1]))
    assert frob(agreement_objective(2).F, no_info_structure(game).X) == 0
    assert frob(welfare_objective(game).F, no_info_structure(game).X) == 0


def test_full_info_identity_h():
    S = np.array([[2.0, 0.5], [0.5, 1.0]])
    X = full_info_structure(GameSpec(np.eye(2), S)).X
    for blk in (X[:2, :2], X[:2, 2:], X[2:, :2], X[2:, 2:]):
        np.testing.assert_allclose(blk, S)


def test_full_info_scalar():
    X = full_info_structure(GameSpec([[2.0]], [[4.0]])).X
    np.testing.assert_allclose(X, [[1, 2], [2, 4]])


def test_full_info_singular_h():
    with pytest.raises(SingularH):
        full_info_structure(GameSpec(np.ones((2, 2)), np.eye(2)))


def test_f_h_welfare_scalar():
    game = GameSpec([[2.0]], [[4.0]])
    obj = welfare_objective(game)
    FH = f_h_matrix(obj, game.H)
    np.testing.assert_allclose(FH, [[0.5]])
    assert frob(obj.F, full_info_structure(game).X) == pytest.approx(2.0)
    assert frob(FH, game.Sigma) == pytest.approx(2.0)


def test_f_h_identity_h_reduces_to_f11():
    F11 = np.array([[-1.0, 0.2], [0.2, -2.0]])
    F = np.zeros((4, 4))
    F[:2, :2] = F11
    np.testing.assert_allclose(f_h_matrix(custom_objective(F), np.eye(2)), F11)


def test_mean_actions():
    np.testing.assert_allclose(mean_actions(GameSpec(np.eye(2), np.eye(2), mu=[3, 5])), [3, 5])
    np.testing.assert_allclose(mean_actions(GameSpec([[2.0]], [[1.0]], mu=[6])), [3])


def test_mean_actions_defining_equation(rng):
    for _ in range(20):
        n = rng.integers(1, 6)
        mu = rng.standard_normal(n)
        game = GameSpec(random_invertible(rng, n), random_spd(rng, n), mu=mu)
        assert np.linalg.norm(game.H @ mean_actions(game) - mu) <= 1e-10 * max(np.linalg.norm(mu), 1)


def test_gamespec_validation():
    with pytest.raises(NonSymmetric):
        GameSpec(np.eye(2), [[1, 0.5], [0.4, 1]])
    with pytest.raises(NotPsd, match="Sigma not PSD"):
        GameSpec(np.eye(2), [[1, 2], [2, 1]])
    with pytest.raises(NegativeShift):
        GameSpec(np.eye(2), np.eye(2), eps=-np.ones((2, 2)))


def test_gamespec_is_immutable():
    game = GameSpec(np.eye(2), np.eye(2))
    with pytest.raises(ValueError):
        game.H[0, 0] = 5.0


def test_info_structure_rejects_odd_dim():
    with pytest.raises(ValueError):
        InfoStructure(np.eye(3))


def test_benchmark_instance():
    H, S = benchmark_h(), benchmark_sigma()
    assert H[0, 0] == 1 and H[0, 1] == 0.25
    assert S[0, 0] == 4 and S[0, 1] == 1


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_full_info_psd_and_schur(n, seed):
    rng = np.random.default_rng(seed)
    game = GameSpec(random_invertible(rng, n), random_spd(rng, n))
    X = full_info_structure(game).X
    assert np.linalg.eigvalsh(X)[0] >= -1e-9 * np.trace(X)
    A, B, C = X[:n, :n], X[:n, n:], X[n:, n:]
    schur = A - B @ np.linalg.solve(C, B.T)
    assert np.max(np.abs(schur)) <= 1e-9 * max(1.0, np.max(np.abs(A)))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_full_info_objective_identity(n, seed):
    rng = np.random.default_rng(seed)
    game = GameSpec(random_invertible(rng, n), random_spd(rng, n))
    X = full_info_structure(game).X
    for obj in (welfare_objective(game), agreement_objective(n)):
        lhs = frob(obj.F, X)
        rhs = frob(f_h_matrix(obj, game.H), game.Sigma)
        assert abs(lhs - rhs) <= 1e-8 * (1 + abs(rhs))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_agreement_nonpositive_on_psd(n, seed):
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((2 * n, 2 * n))
    assert frob(agreement_objective(n).F, G @ G.T) <= 1e-10


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_no_info_value_is_f22_sigma(n, seed):
    rng = np.random.default_rng(seed)
    game = GameSpec(random_invertible(rng, n), random_spd(rng, n))
    G = rng.standard_normal((2 * n, 2 * n))
    F = custom_objective(G + G.T)
    assert frob(F.F, no_info_structure(game).X) == pytest.approx(frob(F.blocks()[3], game.Sigma), rel=1e-12)
