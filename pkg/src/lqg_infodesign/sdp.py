"""Nominal information-design SDP.

    maximize    F . X
    subject to  R_k . X = 0                 k = 0..n-1   (equilibrium / obedience)
                M_kl . X = Sigma_kl         k <= l       (state covariance)
                X PSD

Player indices are 0-based here; player k of the usual 1-based notation is
index k-1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import GameSpec, ObjectiveSpec, frob
from .errors import DimensionMismatch, IndexOutOfRange, KGreaterThanL


def build_r(H: np.ndarray, k: int) -> np.ndarray:
    """Equilibrium constraint matrix for player k.

    R_k . X = sum_j H_kj X_kj - X_{k, n+k} for every symmetric X.
    """
    H = np.asarray(H, dtype=float)
    n = H.shape[0]
    if not 0 <= k < n:
        raise IndexOutOfRange(f"player index {k} outside 0..{n - 1}")
    R = np.zeros((2 * n, 2 * n))
    R[k, k] = H[k, k]
    for j in range(n):
        if j != k:
            R[k, j] = H[k, j] / 2
            R[j, k] = H[k, j] / 2
    R[k, n + k] = -0.5
    R[n + k, k] = -0.5
    return R


def build_m(k: int, l: int, n: int) -> np.ndarray:
    """Selector with M_kl . X = X_{n+k, n+l} for symmetric X."""
    if not (0 <= k < n and 0 <= l < n):
        raise IndexOutOfRange(f"indices ({k}, {l}) outside 0..{n - 1}")
    if k > l:
        raise KGreaterThanL(f"k={k} > l={l}")
    M = np.zeros((2 * n, 2 * n))
    if k == l:
        M[n + k, n + k] = 1.0
    else:
        M[n + k, n + l] = 0.5
        M[n + l, n + k] = 0.5
    return M


def state_pairs(n: int):
    return [(k, l) for k in range(n) for l in range(k, n)]


@dataclass(frozen=True)
class NominalSdpModel:
    n: int
    F: np.ndarray
    R: tuple
    M: tuple
    M_rhs: tuple
    Sigma: np.ndarray

    @property
    def num_equalities(self) -> int:
        return len(self.R) + len(self.M)

    def residuals(self, X: np.ndarray) -> dict:
        """Constraint residuals of a candidate X (no solver involved)."""
        bce = np.array([frob(R, X) for R in self.R])
        assign = np.array([frob(M, X) - b for M, b in zip(self.M, self.M_rhs)])
        return {
            "bce": bce,
            "assignment": assign,
            "min_eig": float(np.linalg.eigvalsh(0.5 * (X + X.T)).min()),
        }


def assemble_nominal(game: GameSpec, objective: ObjectiveSpec) -> NominalSdpModel:
    n = game.n
    if objective.n != n:
        raise DimensionMismatch(f"objective is for n={objective.n}, game has n={n}")
    R = tuple(build_r(game.H, k) for k in range(n))
    pairs = state_pairs(n)
    M = tuple(build_m(k, l, n) for k, l in pairs)
    rhs = tuple(float(game.Sigma[k, l]) for k, l in pairs)
    return NominalSdpModel(n=n, F=objective.F, R=R, M=M, M_rhs=rhs, Sigma=game.Sigma)
