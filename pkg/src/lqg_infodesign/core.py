"""Game and objective data model for LQG information design.

Player i's payoff is

    u_i(a, g) = -H_ii a_i^2 - 2 sum_{j != i} H_ij a_i a_j + 2 g_i a_i + d_i(a_-i, g)

where d_i is an arbitrary function of the opponents' actions and the state.
It never enters the design problem, so it is not represented as data.

A designer objective that is quadratic in (a, g) is summarised by a symmetric
2n x 2n matrix F; its expected value over centred (a, g) is F . X with
X = cov(a, g) laid out as [[var(a), cov(a, g)], [cov(g, a), var(g)]].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, NegativeShift, NonSymmetric, NotPsd, SingularH

SYM_TOL = 1e-12
PSD_REL_TOL = 1e-10
RCOND_MIN = 1e-12


def frob(A: np.ndarray, B: np.ndarray) -> float:
    """Frobenius (trace) inner product sum_ij A_ij B_ij."""
    return float(np.sum(np.asarray(A) * np.asarray(B)))


def _frozen(a, shape=None, name="array") -> np.ndarray:
    arr = np.array(a, dtype=float)
    if shape is not None and arr.shape != shape:
        raise DimensionMismatch(f"{name} has shape {arr.shape}, expected {shape}")
    arr.setflags(write=False)
    return arr


def check_invertible(H: np.ndarray, rcond_min: float = RCOND_MIN) -> None:
    """Raise SingularH when H is numerically singular (reciprocal condition < rcond_min)."""
    cond = np.linalg.cond(H)
    if not np.isfinite(cond) or 1.0 / cond < rcond_min:
        raise SingularH(f"H is numerically singular (condition number {cond:.3e})")


@dataclass(frozen=True)
class GameSpec:
    """An n-player LQG game as seen by the designer.

    ``H`` is the known (possibly perturbed) payoff matrix, ``eps`` the
    entry-wise shift magnitudes that scale the unknown perturbation, and
    ``mu``/``Sigma`` the Gaussian prior on the payoff state.
    """

    H: np.ndarray
    Sigma: np.ndarray
    mu: Optional[np.ndarray] = None
    eps: Optional[np.ndarray] = None
    n: int = field(init=False)

    def __post_init__(self):
        H = np.asarray(self.H, dtype=float)
        if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] < 1:
            raise DimensionMismatch(f"H must be a nonempty square matrix, got shape {H.shape}")
        n = H.shape[0]
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "H", _frozen(H))
        Sigma = _frozen(self.Sigma, (n, n), "Sigma")
        if np.max(np.abs(Sigma - Sigma.T)) > SYM_TOL:
            raise NonSymmetric("Sigma not symmetric")
        scale = max(np.linalg.norm(Sigma, 2), 1.0)
        if np.linalg.eigvalsh(Sigma).min() < -PSD_REL_TOL * scale:
            raise NotPsd("Sigma not PSD")
        object.__setattr__(self, "Sigma", Sigma)
        mu = np.zeros(n) if self.mu is None else self.mu
        object.__setattr__(self, "mu", _frozen(mu, (n,), "mu"))
        eps = np.zeros((n, n)) if self.eps is None else self.eps
        eps = _frozen(eps, (n, n), "eps")
        if np.any(eps < 0):
            raise NegativeShift("eps must be entrywise nonnegative")
        object.__setattr__(self, "eps", eps)


class ObjectiveKind(str, Enum):
    AGREEMENT = "agreement"
    WELFARE = "welfare"
    CUSTOM = "custom"


@dataclass(frozen=True)
class ObjectiveSpec:
    kind: ObjectiveKind
    F: np.ndarray
    eta: Optional[np.ndarray] = None
    symmetrized: bool = False

    def __post_init__(self):
        F = np.asarray(self.F, dtype=float)
        if F.ndim != 2 or F.shape[0] != F.shape[1] or F.shape[0] % 2:
            raise DimensionMismatch(f"F must be 2n x 2n, got shape {F.shape}")
        if np.max(np.abs(F - F.T)) > SYM_TOL:
            raise NonSymmetric("F not symmetric")
        object.__setattr__(self, "F", _frozen(F))
        object.__setattr__(self, "kind", ObjectiveKind(self.kind))
        if self.eta is not None:
            n = F.shape[0] // 2
            object.__setattr__(self, "eta", _frozen(self.eta, (n, n), "eta"))

    @property
    def n(self) -> int:
        return self.F.shape[0] // 2

    def blocks(self):
        """Return (F11, F12, F21, F22)."""
        n = self.n
        F = self.F
        return F[:n, :n], F[:n, n:], F[n:, :n], F[n:, n:]


@dataclass(frozen=True)
class InfoStructure:
    """Joint covariance X = cov(a, g) of equilibrium actions and payoff state."""

    X: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        if X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape[0] % 2:
            raise DimensionMismatch(f"X must be 2n x 2n, got shape {X.shape}")
        object.__setattr__(self, "X", _frozen(0.5 * (X + X.T)))

    @property
    def n(self) -> int:
        return self.X.shape[0] // 2

    @property
    def action_block(self) -> np.ndarray:
        return self.X[: self.n, : self.n]

    @property
    def state_block(self) -> np.ndarray:
        return self.X[self.n :, self.n :]


def custom_objective(F, eta=None) -> ObjectiveSpec:
    return ObjectiveSpec(ObjectiveKind.CUSTOM, F, eta=eta)


def agreement_objective(n: int) -> ObjectiveSpec:
    """-sum_i (a_i - mean(a))^2 as a 2n x 2n coefficient matrix."""
    if n < 1:
        raise DimensionMismatch("n must be at least 1")
    F = np.zeros((2 * n, 2 * n))
    F[:n, :n] = -(np.eye(n) - np.ones((n, n)) / n)
    return ObjectiveSpec(ObjectiveKind.AGREEMENT, F)


def welfare_objective(game: GameSpec) -> ObjectiveSpec:
    """Sum of player utilities: F = [[-H, I], [I, 0]].

    An asymmetric H is replaced by its symmetric part in the top-left block,
    which leaves F . X unchanged for symmetric X.
    """
    n = game.n
    H = game.H
    Hs = 0.5 * (H + H.T)
    F = np.zeros((2 * n, 2 * n))
    F[:n, :n] = -Hs
    F[:n, n:] = np.eye(n)
    F[n:, :n] = np.eye(n)
    return ObjectiveSpec(
        ObjectiveKind.WELFARE,
        F,
        eta=-np.ones((n, n)),
        symmetrized=bool(np.any(H != H.T)),
    )


def no_info_structure(game: GameSpec) -> InfoStructure:
    n = game.n
    X = np.zeros((2 * n, 2 * n))
    X[n:, n:] = game.Sigma
    return InfoStructure(X)


def full_info_structure(game: GameSpec, rcond_min: float = RCOND_MIN) -> InfoStructure:
    """Actions a = H^-1 g: X = [[H^-1 S H^-T, H^-1 S], [S H^-T, S]]."""
    check_invertible(game.H, rcond_min)
    n = game.n
    S = game.Sigma
    Hinv_S = np.linalg.solve(game.H, S)
    X = np.empty((2 * n, 2 * n))
    X[:n, :n] = np.linalg.solve(game.H, Hinv_S.T).T
    X[:n, n:] = Hinv_S
    X[n:, :n] = Hinv_S.T
    X[n:, n:] = S
    return InfoStructure(X)


def f_h_matrix(objective: ObjectiveSpec, H: np.ndarray) -> np.ndarray:
    """Congruence-reduced objective (H^-1)^T (F11 + F12 H + H^T F21) H^-1.

    Its inner product with Sigma is the full-information objective value.
    """
    H = np.asarray(H, dtype=float)
    if H.shape != (objective.n, objective.n):
        raise DimensionMismatch(f"H has shape {H.shape}, objective expects n={objective.n}")
    check_invertible(H)
    F11, F12, F21, _ = objective.blocks()
    core = F11 + F12 @ H + H.T @ F21
    Hinv = np.linalg.inv(H)
    FH = Hinv.T @ core @ Hinv
    return 0.5 * (FH + FH.T)


def mean_actions(game: GameSpec) -> np.ndarray:
    """Equilibrium mean action H^-1 mu (the no-information action)."""
    check_invertible(game.H)
    return np.linalg.solve(game.H, game.mu)


def objective_value(objective: ObjectiveSpec, X) -> float:
    if isinstance(X, InfoStructure):
        X = X.X
    return frob(objective.F, X)


def benchmark_h(n: int = 4, diag: float = 1.0, offdiag: float = 0.25) -> np.ndarray:
    """Symmetric payoff matrix with constant diagonal and constant off-diagonal."""
    return offdiag * np.ones((n, n)) + (diag - offdiag) * np.eye(n)


def benchmark_sigma(n: int = 4, diag: float = 4.0, offdiag: float = 1.0) -> np.ndarray:
    return offdiag * np.ones((n, n)) + (diag - offdiag) * np.eye(n)


def homogeneous_eps(n: int, eps_diag: float, eps_offdiag: float) -> np.ndarray:
    return eps_offdiag * np.ones((n, n)) + (eps_diag - eps_offdiag) * np.eye(n)
