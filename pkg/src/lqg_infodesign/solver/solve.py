from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, Optional, Union

import numpy as np

from ..core import frob
from ..robust import RobustSdpModel
from ..sdp import NominalSdpModel
from .backends import NUMERICAL_FAILURE, OPTIMAL, get_backend
from .conic import ConicProblem, svec, to_conic


@dataclass(frozen=True)
class SolveOptions:
    feas_tol: float = 1e-7
    rel_gap: float = 1e-7
    max_iter: int = 500
    backend: str = "clarabel"
    # Among optimal points pick the one with the smallest action variance.
    tie_break: bool = True


@dataclass
class Solution:
    status: str
    X: Optional[np.ndarray] = None
    t: float = float("nan")
    lam: float = float("nan")
    beta: Optional[float] = None
    residuals: Dict[str, float] = field(default_factory=dict)
    blocks: Dict[str, np.ndarray] = field(default_factory=dict)
    scalars: Dict[str, float] = field(default_factory=dict)
    backend: str = ""
    iterations: int = 0
    solve_ms: float = 0.0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL

    @property
    def n(self) -> int:
        return self.X.shape[0] // 2


def compute_residuals(problem: ConicProblem, z: np.ndarray) -> Dict[str, float]:
    """Recompute feasibility and objective from the raw vector, independent of the backend."""
    mats, _ = problem.split(z)
    eq = problem.A @ z - problem.b
    min_eig = min(float(np.linalg.eigvalsh(M).min()) for M in mats.values())
    worst_scaled = min(
        float(np.linalg.eigvalsh(mats[name]).min()) / d for name, d in problem.blocks
    )
    out = {
        "max_eq_violation": float(np.max(np.abs(eq))) if eq.size else 0.0,
        "min_block_eig": min_eig,
        "min_block_eig_per_dim": worst_scaled,
    }
    if problem.F is not None:
        out["objective_FX"] = frob(problem.F, mats["X"])
    return out


def solve(problem: ConicProblem, options: SolveOptions = SolveOptions()) -> Solution:
    """Solve one conic problem. Solver outcomes are reported in ``status``, never raised."""
    backend = get_backend(options.backend)
    start = time.perf_counter()
    raw = backend.solve(problem, options.feas_tol, options.rel_gap, options.max_iter)
    elapsed = 1e3 * (time.perf_counter() - start)
    if raw.status != OPTIMAL:
        return Solution(status=raw.status, backend=backend.name, iterations=raw.iterations, solve_ms=elapsed)
    res = compute_residuals(problem, raw.z)
    res["backend_gap"] = raw.gap
    status = OPTIMAL
    if res["max_eq_violation"] > options.feas_tol or res["min_block_eig_per_dim"] < -options.feas_tol:
        status = NUMERICAL_FAILURE
    mats, scal = problem.split(raw.z)
    X = mats["X"]
    t = scal.get("t", res.get("objective_FX", float("nan")))
    return Solution(
        status=status,
        X=X,
        t=t,
        lam=scal.get("lam", 0.0),
        beta=scal.get("beta"),
        residuals=res,
        blocks=mats,
        scalars=scal,
        backend=backend.name,
        iterations=raw.iterations,
        solve_ms=elapsed,
    )


def action_trace_objective(problem: ConicProblem) -> np.ndarray:
    """Cost vector of trace(var(a)) in the problem's variable layout."""
    n = problem.meta["n"]
    sel = np.zeros((2 * n, 2 * n))
    sel[:n, :n] = np.eye(n)
    c = np.zeros(problem.num_vars)
    c[problem.offsets()["X"]] = svec(sel)
    return c


def solve_model(
    model: Union[NominalSdpModel, RobustSdpModel],
    options: SolveOptions = SolveOptions(),
) -> Solution:
    """Solve a model; with ``tie_break`` return the least-disclosing optimum.

    The optimal set of information-design SDPs is often a face rather than a
    point (e.g. any public signal that makes all actions equal is optimal for
    the agreement objective). The second stage keeps the objective within
    rel_gap * (1 + |opt|) of the optimum and minimises trace(var(a)).
    """
    problem = to_conic(model)
    first = solve(problem, options)
    if not (options.tie_break and first.optimal):
        return first
    opt = float(problem.c @ _pack(problem, first))
    cap = opt + options.rel_gap * (1.0 + abs(opt))
    second_problem = problem.with_cap(cap, action_trace_objective(problem))
    second = solve(second_problem, options)
    if not second.optimal:
        return first
    second.blocks.pop("cap", None)
    second.solve_ms += first.solve_ms
    second.iterations += first.iterations
    if "t" not in second.scalars:
        second.t = second.residuals["objective_FX"]
    return second


def _pack(problem: ConicProblem, sol: Solution) -> np.ndarray:
    z = np.zeros(problem.num_vars)
    offs = problem.offsets()
    for name, _ in problem.blocks:
        z[offs[name]] = svec(sol.blocks[name])
    for name in problem.free:
        z[offs[name]] = sol.scalars[name]
    return z
