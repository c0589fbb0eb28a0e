"""Independent numerical checks of information structures and solved models.

Randomness comes from numpy's PCG64 generator. A grid point's stream is
``SeedSequence(seed, spawn_key=(index,))``, so results depend only on the
(seed, index) pair and not on execution order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .core import GameSpec, InfoStructure, ObjectiveSpec, frob, full_info_structure, mean_actions, no_info_structure
from .errors import DegenerateNormalizer, NotPsd
from .robust import RobustSdpModel

PSD_CLIP = 1e-10
# solver feasibility allowance per dimension for the smallest eigenvalue of X
SOLUTION_PSD_TOL = 1e-7


def point_seed(seed: int, index: int) -> int:
    """Deterministic 64-bit seed for grid point ``index``."""
    ss = np.random.SeedSequence(seed, spawn_key=(index,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _as_matrix(X) -> np.ndarray:
    return X.X if isinstance(X, InfoStructure) else np.asarray(X, dtype=float)


def psd_factor(X: np.ndarray) -> np.ndarray:
    """F with F F^T = X after clipping negative eigenvalues within the tolerance."""
    X = 0.5 * (X + X.T)
    w, V = np.linalg.eigh(X)
    scale = max(1.0, float(np.abs(w).max(initial=0.0)))
    if w.min(initial=0.0) < -PSD_CLIP * scale:
        raise NotPsd(f"X has eigenvalue {w.min():.3e} below clipping tolerance")
    return V * np.sqrt(np.clip(w, 0.0, None))


def project_psd(X):
    """(nearest PSD matrix in Frobenius norm, smallest eigenvalue of X)."""
    X = 0.5 * (_as_matrix(X) + _as_matrix(X).T)
    w, V = np.linalg.eigh(X)
    return (V * np.clip(w, 0.0, None)) @ V.T, float(w[0])


def sample_recommendations(X, game: GameSpec, count: int, seed: int) -> np.ndarray:
    """count x 2n draws of (a, g) from N((H^-1 mu, mu), X)."""
    if count < 1:
        raise ValueError("count must be positive")
    X = _as_matrix(X)
    mean = np.concatenate([mean_actions(game), game.mu])
    fac = psd_factor(X)
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((count, X.shape[0]))
    return mean + z @ fac.T


def mc_objective(X, game: GameSpec, objective: ObjectiveSpec, count: int, seed: int):
    """Monte-Carlo estimate of E[f] on mean-centred samples: (estimate, stderr)."""
    samples = sample_recommendations(X, game, count, seed)
    mean = np.concatenate([mean_actions(game), game.mu])
    z = samples - mean
    f = np.einsum("ij,jk,ik->i", z, objective.F, z)
    return float(f.mean()), float(f.std(ddof=1) / np.sqrt(count))


def sample_spectral_ball(dim: int, rho: float, count: int, seed: int, boundary_fraction: float = 0.5) -> List[np.ndarray]:
    """Matrices with spectral norm <= rho; the first share sit on the sphere."""
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    rng = np.random.default_rng(seed)
    n_boundary = int(round(boundary_fraction * count))
    out = []
    for k in range(count):
        G = rng.standard_normal((dim, dim))
        smax = np.linalg.norm(G, 2)
        theta = G * (rho / smax) if smax > 0 else np.zeros((dim, dim))
        if k >= n_boundary:
            theta = theta * rng.uniform()
        out.append(theta)
    return out


def robust_min_eig(model: RobustSdpModel, X: np.ndarray, thetas) -> float:
    """min over theta of lambda_min(A(X) + L^T theta + theta^T L) (D = I)."""
    A = model.bce_matrix(X)
    L = model.L
    worst = np.inf
    for th in thetas:
        M = A + L.T @ th + th.T @ L
        worst = min(worst, float(np.linalg.eigvalsh(0.5 * (M + M.T))[0]))
    return worst


def check_robust_feasibility(solution, model: RobustSdpModel, count: int = 500, seed: int = 0, rho: Optional[float] = None) -> dict:
    """Sampled worst-case eigenvalue of the perturbed equilibrium LMI.

    ``rho`` defaults to the model's radius; pass a larger value to probe
    robustness beyond the solved radius.
    """
    rho = model.rho if rho is None else rho
    thetas = sample_spectral_ball(2 * model.n, rho, count, seed)
    return {
        "min_eig": robust_min_eig(model, solution.X, thetas),
        "rho": rho,
        "samples": count,
        "seed": seed,
        "nominal_min_eig": float(np.linalg.eigvalsh(model.bce_matrix(solution.X))[0]),
    }


def distances(X, game: GameSpec):
    """(||X - X_no||_F, ||X - X_full||_F, ||X - X_no||_F / ||X_full - X_no||_F)."""
    X = _as_matrix(X)
    X_no = no_info_structure(game).X
    X_full = full_info_structure(game).X
    d_no = float(np.linalg.norm(X - X_no))
    d_full = float(np.linalg.norm(X - X_full))
    norm = float(np.linalg.norm(X_full - X_no))
    if norm < 1e-12:
        raise DegenerateNormalizer("full and no information structures coincide")
    return d_no, d_full, d_no / norm


def bce_residuals(X, game: GameSpec) -> np.ndarray:
    """sum_j H_kj X_kj - X_{k, n+k} for each player k."""
    X = _as_matrix(X)
    n = game.n
    return np.einsum("kj,kj->k", game.H, X[:n, :n]) - np.diag(X[:n, n:])


@dataclass
class VerificationReport:
    mc_objective: float
    mc_stderr: float
    analytic_objective: float
    bce_residuals: np.ndarray
    samples_used: int
    seed: int
    robust_min_eig: Optional[float] = None
    checks: dict = field(default_factory=dict)
    sampled_objective: Optional[float] = None
    x_min_eig: Optional[float] = None

    @property
    def _target(self) -> float:
        return self.analytic_objective if self.sampled_objective is None else self.sampled_objective

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def format(self) -> str:
        lines = [
            f"mc_objective       {self.mc_objective:.10e} +/- {self.mc_stderr:.3e}",
            f"analytic_objective {self.analytic_objective:.10e}",
            f"sampled_objective  {self._target:.10e}",
            f"mc_deviation_sigma {abs(self.mc_objective - self._target) / self.mc_stderr if self.mc_stderr > 0 else 0.0:.4f}",
            "bce_residuals      " + " ".join(f"{r:.3e}" for r in self.bce_residuals),
            f"samples            {self.samples_used}",
            f"x_min_eig          {self.x_min_eig if self.x_min_eig is not None else float('nan'):.3e}",
            f"seed               {self.seed}",
        ]
        if self.robust_min_eig is not None:
            lines.append(f"robust_min_eig     {self.robust_min_eig:.10e}")
        for name, ok in self.checks.items():
            lines.append(f"check {name:<24s} {'PASS' if ok else 'FAIL'}")
        return "\n".join(lines) + "\n"


def verify(
    X,
    game: GameSpec,
    objective: ObjectiveSpec,
    count: int = 200_000,
    seed: int = 0,
    model: Optional[RobustSdpModel] = None,
    theta_count: int = 500,
) -> VerificationReport:
    X = _as_matrix(X)
    # Solver output may carry eigenvalues down to -feas_tol * dim, beyond the
    # sampler's clipping tolerance; sample from the PSD projection instead.
    Xs, min_eig = project_psd(X)
    est, se = mc_objective(Xs, game, objective, count, seed)
    analytic = frob(objective.F, X)
    target = frob(objective.F, Xs)
    res = bce_residuals(X, game)
    checks = {
        "x_psd_within_tol": min_eig >= -SOLUTION_PSD_TOL * X.shape[0],
        "mc_within_4_sigma": abs(est - target) <= 4 * se,
    }
    rmin = None
    if model is not None and model.rho > 0:
        thetas = sample_spectral_ball(2 * game.n, model.rho, theta_count, seed)
        rmin = robust_min_eig(model, X, thetas)
        checks["robust_min_eig"] = rmin >= -1e-5
    else:
        checks["bce_residuals"] = float(np.max(np.abs(res))) <= 1e-6
    return VerificationReport(est, se, analytic, res, count, seed, rmin, checks, target, min_eig)
