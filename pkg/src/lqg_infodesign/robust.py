"""Robust counterpart of the information-design SDP under norm-bounded perturbations.

An uncertain LMI  A(y) + L^T theta D + D^T theta^T L >= 0  for all
||theta||_2 <= rho  (L, D constant) holds iff there is a scalar lam with

    [[lam I_p,     rho L           ],
     [rho L^T,     A(y) - lam D^T D]]  >= 0.

The equilibrium constraints are robustified through this identity with
A(X) = diag(R_1.X, ..., R_n.X, -R_1.X, ..., -R_n.X), D = I and
L = diag(eps*, -eps*).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .core import GameSpec, ObjectiveKind, ObjectiveSpec
from .errors import DimensionMismatch, MalformedModel, NegativeShift, ZeroD
from .sdp import NominalSdpModel, assemble_nominal


@dataclass(frozen=True)
class PerturbationSet:
    """Spectral-norm ball {theta : ||theta||_2 <= rho} of dim x dim matrices."""

    rho: float
    dim: int

    def __post_init__(self):
        if not self.rho >= 0:
            raise ValueError(f"rho must be nonnegative, got {self.rho}")


@dataclass(frozen=True)
class AffineLmi:
    """p x p symmetric matrix affine in X (d x d) and named scalar variables.

    value = constant + sum_{i,j} (x_coef[i, j] . X) E_ij + sum_s v_s scalar_coef[s]
    """

    constant: np.ndarray
    x_coef: Optional[np.ndarray] = None
    scalar_coef: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.constant.shape[0]

    def evaluate(self, X: Optional[np.ndarray] = None, **scalars: float) -> np.ndarray:
        out = np.array(self.constant, dtype=float)
        if self.x_coef is not None:
            if X is None:
                raise MalformedModel("LMI depends on X but no X was given")
            out = out + np.einsum("ijab,ab->ij", self.x_coef, X)
        for name, coef in self.scalar_coef.items():
            out = out + scalars.get(name, 0.0) * coef
        return 0.5 * (out + out.T)


def epsilon_star(eps: np.ndarray) -> np.ndarray:
    """Per-player shift: own diagonal plus the rest of row k and column k."""
    eps = np.asarray(eps, dtype=float)
    if np.any(eps < 0):
        raise NegativeShift("eps must be entrywise nonnegative")
    diag = np.diag(eps)
    return diag + (eps.sum(axis=1) - diag) + (eps.sum(axis=0) - diag)


def build_l(eps: np.ndarray) -> np.ndarray:
    e = epsilon_star(eps)
    return np.diag(np.concatenate([e, -e]))


def reformulate_norm_bounded(A: AffineLmi, L, D, rho: float, var: str = "lam") -> AffineLmi:
    """Exact LMI form of the robust constraint, adding scalar variable ``var``.

    ``L`` is p x m and ``D`` is q x m, where m is the size of ``A``.
    """
    m = A.dim
    L = np.atleast_2d(np.asarray(L, dtype=float))
    D = np.atleast_2d(np.asarray(D, dtype=float))
    if L.shape[1] != m or D.shape[1] != m:
        raise DimensionMismatch(f"L {L.shape} and D {D.shape} must have {m} columns")
    if not np.any(D):
        raise ZeroD("D must be nonzero")
    if var in A.scalar_coef:
        raise MalformedModel(f"variable {var!r} already used by the LMI")
    p = L.shape[0]
    size = p + m
    const = np.zeros((size, size))
    const[:p, p:] = rho * L
    const[p:, :p] = rho * L.T
    const[p:, p:] = A.constant
    x_coef = None
    if A.x_coef is not None:
        d = A.x_coef.shape[2]
        x_coef = np.zeros((size, size, d, d))
        x_coef[p:, p:] = A.x_coef
    scal = {}
    for name, coef in A.scalar_coef.items():
        big = np.zeros((size, size))
        big[p:, p:] = coef
        scal[name] = big
    lam = np.zeros((size, size))
    lam[:p, :p] = np.eye(p)
    lam[p:, p:] = -D.T @ D
    scal[var] = lam
    return AffineLmi(const, x_coef, scal)


def bce_lmi_body(base: NominalSdpModel) -> AffineLmi:
    """A(X) = diag(R_k . X, -R_k . X) as an affine map of X."""
    n = base.n
    d = 2 * n
    x_coef = np.zeros((d, d, d, d))
    for k, R in enumerate(base.R):
        x_coef[k, k] = R
        x_coef[n + k, n + k] = -R
    return AffineLmi(np.zeros((d, d)), x_coef)


@dataclass(frozen=True)
class RobustSdpModel:
    base: NominalSdpModel
    rho: float
    L: np.ndarray
    epsilon_star: np.ndarray
    lmi_blocks: Tuple[AffineLmi, ...]
    scalar_vars: Tuple[str, ...]
    welfare: bool = False
    L_w: Optional[float] = None

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def F(self) -> np.ndarray:
        return self.base.F

    def bce_matrix(self, X: np.ndarray) -> np.ndarray:
        """Unperturbed A(X) of the equilibrium LMI."""
        return self.lmi_body.evaluate(X)

    @property
    def lmi_body(self) -> AffineLmi:
        return bce_lmi_body(self.base)


def assemble_robust(game: GameSpec, objective: ObjectiveSpec, pert: PerturbationSet) -> RobustSdpModel:
    """Tractable robust SDP: maximize t over (X, t, lam[, beta]).

    For the welfare objective the objective constraint is itself robustified
    with the scalar radius L_w = sum_ij eps_ij; any other objective keeps the
    plain constraint F . X >= t.
    """
    n = game.n
    if pert.dim != 2 * n:
        raise DimensionMismatch(f"perturbation dim {pert.dim} != 2n = {2 * n}")
    base = assemble_nominal(game, objective)
    eps_s = epsilon_star(game.eps)
    L = np.diag(np.concatenate([eps_s, -eps_s]))
    bce = reformulate_norm_bounded(bce_lmi_body(base), L, np.eye(2 * n), pert.rho, "lam")

    obj_body = AffineLmi(
        np.zeros((1, 1)),
        objective.F.reshape(1, 1, 2 * n, 2 * n).copy(),
        {"t": -np.ones((1, 1))},
    )
    welfare = objective.kind == ObjectiveKind.WELFARE
    if welfare:
        L_w = float(np.sum(game.eps))
        obj = reformulate_norm_bounded(obj_body, [[L_w]], [[1.0]], pert.rho, "beta")
        scalars = ("t", "lam", "beta")
    else:
        L_w = None
        obj = obj_body
        scalars = ("t", "lam")
    return RobustSdpModel(
        base=base,
        rho=float(pert.rho),
        L=L,
        epsilon_star=eps_s,
        lmi_blocks=(bce, obj),
        scalar_vars=scalars,
        welfare=welfare,
        L_w=L_w,
    )
