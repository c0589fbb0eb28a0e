import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lqg_infodesign.core import ObjectiveKind
from lqg_infodesign.experiments.config import (
    DEFAULT_EPS_DIAG_GRID,
    DEFAULT_RHO_GRID,
    ConfigError,
    ExperimentConfig,
    load_config,
    parse_config,
)


def test_defaults_are_the_four_player_instance():
    cfg = ExperimentConfig()
    assert cfg.n == 4 and cfg.objective == "agreement"
    np.testing.assert_array_equal(np.diag(cfg.H_matrix()), 1.0)
    assert cfg.H_matrix()[0, 1] == 0.25
    assert cfg.Sigma_matrix()[0, 0] == 4.0 and cfg.Sigma_matrix()[0, 1] == 1.0
    assert cfg.rho_grid == DEFAULT_RHO_GRID and cfg.rho_grid[-1] == 2.5 and len(cfg.rho_grid) == 11
    assert cfg.eps_grid == DEFAULT_EPS_DIAG_GRID and cfg.eps_grid[0] == 0.03 and cfg.eps_grid[-1] == 0.12


def test_eps_axis_selects_entries():
    cfg = parse_config("eps_axis: offdiag\neps_grid: [0.005, 0.01]\n")
    E = cfg.eps_matrix(0.01)
    assert E[0, 0] == 0.03 and E[0, 1] == 0.01
    E = ExperimentConfig().eps_matrix(0.1)
    assert E[0, 0] == 0.1 and E[0, 1] == 0.001


def test_grid_order_is_rho_major():
    cfg = parse_config("rho_grid: [0, 1]\neps_grid: [0.1, 0.2, 0.3]\n")
    assert cfg.grid() == [(0, 0.1), (0, 0.2), (0, 0.3), (1, 0.1), (1, 0.2), (1, 0.3)]


def test_unknown_field_is_error():
    with pytest.raises(ConfigError, match=r"line 2, field 'epsdiag'"):
        parse_config("n: 4\nepsdiag: 0.1\n")


def test_sigma_not_psd_diagnostic():
    with pytest.raises(ConfigError, match="line 2, field 'Sigma': Sigma not PSD"):
        parse_config("n: 2\nSigma: [[1, 2], [2, 1]]\n")


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("rho_grid: [1, 0]\n", "sorted ascending"),
        ("rho_grid: []\n", "nonempty"),
        ("eps_grid: [-1]\n", "nonnegative"),
        ("n: 2\nH: [[1, 0]]\n", "must be 2x2"),
        ("n: [1\n", "invalid YAML"),
        ("- 1\n- 2\n", "mapping"),
        ("solver: {backend: mosek}\n", "solver.backend"),
    ],
)
def test_config_errors(text, fragment):
    with pytest.raises(ConfigError, match=fragment.replace("[", r"\[")):
        parse_config(text)


def test_load_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(str(tmp_path / "nope.yaml"))


def test_custom_objective_path_is_relative_to_config(tmp_path):
    F = np.zeros((4, 4))
    F[0, 0] = F[1, 1] = -1.0
    np.savetxt(tmp_path / "F.txt", F)
    (tmp_path / "c.yaml").write_text("n: 2\nobjective: {F: F.txt}\n")
    cfg, base = load_config(str(tmp_path / "c.yaml"))
    obj = cfg.build_objective(cfg.game_at(), base)
    assert obj.kind is ObjectiveKind.CUSTOM
    np.testing.assert_array_equal(obj.F, F)


def test_roundtrip_defaults():
    cfg = ExperimentConfig()
    assert parse_config(cfg.dump()) == cfg


grids = st.lists(st.floats(0, 5, allow_nan=False), min_size=1, max_size=5).map(sorted)


@settings(max_examples=50, deadline=None)
@given(
    rho=grids,
    eps=grids,
    seed=st.integers(0, 2**64 - 1),
    objective=st.sampled_from(["agreement", "welfare"]),
    axis=st.sampled_from(["diag", "offdiag"]),
    mc=st.integers(1, 10**6),
    hd=st.floats(1.0, 3.0),
)
def test_roundtrip_property(rho, eps, seed, objective, axis, mc, hd):
    H = (np.eye(3) * hd + 0.1).tolist()
    cfg = ExperimentConfig(
        n=3, H=H, rho_grid=rho, eps_grid=eps, seed=seed, objective=objective, eps_axis=axis, mc_count=mc
    )
    back = parse_config(cfg.dump())
    for name in ExperimentConfig.model_fields:
        assert getattr(back, name) == getattr(cfg, name), name
