"""Sufficient-condition certificates for no- and full-information optimality.

All certificates are one-sided: ``fired`` means the condition holds, not
firing says nothing about optimality.

The eigenvalue conditions are applied in magnitude form: the definite matrix
must keep its sign under any perturbation of Frobenius norm up to the
threshold, i.e. min_j |eig_j| >= threshold. The literal reading
(min_j eig_j >= threshold) is reported in ``details`` for comparison.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .core import ObjectiveSpec, check_invertible, f_h_matrix
from .errors import DimensionMismatch, NonSymmetric, NuOutOfRange, OffDiagonalNotScalarIdentity

SYM_TOL = 1e-10
NU_TOL = 1e-9


class Theorem(str, Enum):
    GENERAL_NO_INFO = "GeneralNoInfo"
    PUBLIC_NO_INFO = "PublicNoInfo"
    PUBLIC_FULL_INFO = "PublicFullInfo"
    UI_PUBLIC_NO_INFO = "UiPublicNoInfo"
    UI_PUBLIC_FULL_INFO = "UiPublicFullInfo"


@dataclass(frozen=True)
class Certificate:
    theorem: Theorem
    fired: bool
    margin: float
    threshold: float
    details: dict = field(default_factory=dict)


def _check_sym(G: np.ndarray, name: str) -> np.ndarray:
    G = np.asarray(G, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {G.shape}")
    if np.max(np.abs(G - G.T), initial=0.0) > SYM_TOL:
        raise NonSymmetric(f"{name} not symmetric")
    return 0.5 * (G + G.T)


def eigenvalue_gap_bound(G: np.ndarray, G_hat: np.ndarray):
    """(max_j |beta_j - beta_hat_j|, ||G - G_hat||_F) over sorted eigenvalues.

    For symmetric matrices the first never exceeds the second.
    """
    G = _check_sym(G, "G")
    G_hat = _check_sym(G_hat, "G_hat")
    if G.shape != G_hat.shape:
        raise DimensionMismatch(f"shapes differ: {G.shape} vs {G_hat.shape}")
    gap = float(np.max(np.abs(np.linalg.eigvalsh(G) - np.linalg.eigvalsh(G_hat)), initial=0.0))
    return gap, float(np.linalg.norm(G - G_hat, "fro"))


def _diag_offdiag_max(M: np.ndarray):
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    d = float(np.max(np.diag(M))) if n else 0.0
    off = M[~np.eye(n, dtype=bool)]
    return d, float(np.max(off)) if off.size else 0.0


def thresholds(eta: np.ndarray, eps: np.ndarray, rho: float, nu: Optional[float] = None) -> float:
    """Eigenvalue threshold max(eta1 eps1, eta2 eps2) * rho, or its public form.

    eta1/eta2 are the largest diagonal/off-diagonal |eta|, eps1/eps2 the
    largest diagonal/off-diagonal shift. With ``nu`` each eta gains +2 nu.
    """
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    eta1, eta2 = _diag_offdiag_max(np.abs(eta))
    eps1, eps2 = _diag_offdiag_max(eps)
    if nu is not None:
        if not 0.0 <= nu <= 1.0:
            raise NuOutOfRange(f"nu={nu} outside [0, 1]")
        eta1 += 2 * nu
        eta2 += 2 * nu
    return max(eta1 * eps1, eta2 * eps2) * rho


def certify_general_no_info(F_eps, eta, eps, rho: float) -> Certificate:
    F = _check_sym(F_eps, "F_eps")
    eigs = np.linalg.eigvalsh(F)
    thr = thresholds(eta, eps, rho)
    margin = float(-eigs[-1] - thr)
    definite = bool(eigs[-1] < 0)
    return Certificate(
        Theorem.GENERAL_NO_INFO,
        fired=definite and margin >= 0,
        margin=margin,
        threshold=thr,
        details={
            "eigenvalues": eigs.tolist(),
            "negative_definite": definite,
            "literal_condition_holds": bool(eigs[0] >= thr),
        },
    )


def extract_nu(F_eps: np.ndarray) -> float:
    """Scalar nu with [F]_12 = [F]_21 = nu I, nu in [0, 1]."""
    F = np.asarray(F_eps, dtype=float)
    n = F.shape[0] // 2
    F12, F21 = F[:n, n:], F[n:, :n]
    nu = float(np.mean(np.diag(F12)))
    if max(np.max(np.abs(F12 - nu * np.eye(n))), np.max(np.abs(F21 - nu * np.eye(n)))) > NU_TOL:
        raise OffDiagonalNotScalarIdentity("off-diagonal blocks are not a common multiple of I")
    if not -NU_TOL <= nu <= 1 + NU_TOL:
        raise NuOutOfRange(f"nu={nu} outside [0, 1]")
    return min(max(nu, 0.0), 1.0)


def _public_side(theorem: Theorem, K_eigs, thr, nu, literal_K_eigs) -> Certificate:
    if theorem is Theorem.PUBLIC_NO_INFO:
        definite = bool(K_eigs[-1] < 0)
        floor = -K_eigs[-1]
    else:
        definite = bool(K_eigs[0] > 0)
        floor = K_eigs[0]
    margin = float(floor - thr)
    return Certificate(
        theorem,
        fired=definite and margin >= 0,
        margin=margin,
        threshold=thr,
        details={
            "nu": nu,
            "eigenvalues": K_eigs.tolist(),
            "definite": definite,
            "literal_condition_holds": bool(literal_K_eigs[0] >= thr),
        },
    )


def public_certificates(F_eps, H_eps, eta, eps, rho: float):
    """Both public-structure certificates (no-info side, full-info side)."""
    F = _check_sym(F_eps, "F_eps")
    n = F.shape[0] // 2
    H = np.asarray(H_eps, dtype=float)
    if H.shape != (n, n):
        raise DimensionMismatch(f"H_eps has shape {H.shape}, expected {(n, n)}")
    nu = extract_nu(F)
    K = F[:n, :n] + 2 * nu * H
    K = 0.5 * (K + K.T)
    eigs = np.linalg.eigvalsh(K)
    thr = thresholds(eta, eps, rho, nu)
    return (
        _public_side(Theorem.PUBLIC_NO_INFO, eigs, thr, nu, eigs),
        _public_side(Theorem.PUBLIC_FULL_INFO, eigs, thr, nu, eigs),
    )


def certify_public(F_eps, H_eps, eta, eps, rho: float) -> Certificate:
    """Public-structure certificate on K = [F]_11 + 2 nu H.

    Returns the side that fired, otherwise the side with the larger margin.
    """
    no, full = public_certificates(F_eps, H_eps, eta, eps, rho)
    if no.fired:
        return no
    if full.fired:
        return full
    return no if no.margin >= full.margin else full


def certify_ui_public(objective: ObjectiveSpec, H: np.ndarray, Sigma: np.ndarray):
    """Sign test of S = D^T F_H D with Sigma = D D^T, D of full column rank.

    Returns the UiPublicNoInfo certificate when S is negative semidefinite,
    UiPublicFullInfo when positive semidefinite, and an unfired one otherwise
    (including S = 0).
    """
    check_invertible(np.asarray(H, dtype=float))
    S, D = reduced_public_matrix(objective, H, Sigma)
    eigs = np.linalg.eigvalsh(S) if S.size else np.zeros(0)
    norm = float(np.linalg.norm(S, 2)) if S.size else 0.0
    scale = max(float(np.linalg.norm(f_h_matrix(objective, H), 2)) * float(np.linalg.norm(Sigma, 2)), 1.0)
    nonzero = norm > 1e-12 * scale
    details = {"rank": D.shape[1], "eigenvalues": eigs.tolist(), "S_norm": norm}
    if nonzero and eigs[-1] <= 1e-9 * norm:
        return Certificate(Theorem.UI_PUBLIC_NO_INFO, True, float(-eigs[-1]), 0.0, details)
    if nonzero and eigs[0] >= -1e-9 * norm:
        return Certificate(Theorem.UI_PUBLIC_FULL_INFO, True, float(eigs[0]), 0.0, details)
    # indefinite or zero
    margin = float(min(-eigs[-1], eigs[0])) if eigs.size else 0.0
    theorem = Theorem.UI_PUBLIC_NO_INFO if (eigs.size and abs(eigs[0]) >= abs(eigs[-1])) else Theorem.UI_PUBLIC_FULL_INFO
    return Certificate(theorem, False, margin, 0.0, details)


def reduced_public_matrix(objective: ObjectiveSpec, H, Sigma):
    """(S, D) with Sigma = D D^T via eigendecomposition and S = D^T F_H D."""
    Sigma = np.asarray(Sigma, dtype=float)
    w, V = np.linalg.eigh(0.5 * (Sigma + Sigma.T))
    top = w.max() if w.size else 0.0
    keep = w > 1e-10 * top if top > 0 else np.zeros_like(w, dtype=bool)
    D = V[:, keep] * np.sqrt(w[keep])
    FH = f_h_matrix(objective, H)
    S = D.T @ FH @ D
    return 0.5 * (S + S.T), D


def public_optimum(objective: ObjectiveSpec, H, Sigma):
    """Best objective over public Gaussian structures, in closed form.

    A public signal yields actions H^-1 E[g | s], so X is determined by
    V = var(E[g | s]), which ranges over 0 <= V <= Sigma; the objective is
    F_H . V. Writing V = D W D^T with 0 <= W <= I, the optimum is the sum of
    the positive eigenvalues of S = D^T F_H D. Returns (value, V).
    """
    S, D = reduced_public_matrix(objective, H, Sigma)
    if not S.size:
        return 0.0, np.zeros_like(np.asarray(Sigma, dtype=float))
    w, U = np.linalg.eigh(S)
    pos = w > 0
    W = U[:, pos] @ U[:, pos].T
    return float(np.sum(w[pos])), D @ W @ D.T


def infer_eta(objective: ObjectiveSpec, H: np.ndarray) -> Optional[np.ndarray]:
    """eta with [F]_11 = eta * H entrywise, or None if no such eta exists."""
    if objective.eta is not None:
        return objective.eta
    F11 = objective.blocks()[0]
    H = np.asarray(H, dtype=float)
    eta = np.zeros_like(F11)
    nz = H != 0
    if np.any(F11[~nz] != 0):
        return None
    eta[nz] = F11[nz] / H[nz]
    return eta
