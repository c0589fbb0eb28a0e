"""Conic solver backends.

Each backend turns a ConicProblem into a RawResult. Both wrapped solvers are
primal-dual interior-point codes that accept PSD cones natively.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .conic import SQRT2, ConicProblem, svec_len, triu_pairs

OPTIMAL = "Optimal"
INFEASIBLE = "Infeasible"
UNBOUNDED = "Unbounded"
NUMERICAL_FAILURE = "NumericalFailure"


@dataclass
class RawResult:
    status: str
    z: Optional[np.ndarray]
    gap: float = float("nan")
    iterations: int = 0
    detail: str = ""


class ClarabelBackend:
    name = "clarabel"

    def solve(self, problem: ConicProblem, feas_tol: float, rel_gap: float, max_iter: int) -> RawResult:
        import clarabel

        N = problem.num_vars
        m = problem.num_equalities
        nb = sum(svec_len(d) for _, d in problem.blocks)
        # A z + s = b: equalities in the zero cone, then s = svec blocks in PSD cones
        A = sp.vstack([sp.csc_matrix(problem.A), -sp.eye(nb, N, format="csc")], format="csc")
        b = np.concatenate([problem.b, np.zeros(nb)])
        cones = [clarabel.ZeroConeT(m)] + [clarabel.PSDTriangleConeT(d) for _, d in problem.blocks]
        settings = clarabel.DefaultSettings()
        settings.verbose = False
        settings.max_iter = max_iter
        settings.tol_feas = min(feas_tol, 1e-8)
        settings.tol_gap_rel = min(rel_gap, 1e-8)
        settings.tol_gap_abs = min(rel_gap, 1e-8)
        P = sp.csc_matrix((N, N))
        sol = clarabel.DefaultSolver(P, problem.c, A, b, cones, settings).solve()
        status = str(sol.status)
        z = np.array(sol.x)
        gap = abs(sol.obj_val - sol.obj_val_dual) / (1.0 + abs(sol.obj_val))
        if status == "Solved":
            code = OPTIMAL
        elif "PrimalInfeasible" in status:
            code = INFEASIBLE
        elif "DualInfeasible" in status:
            code = UNBOUNDED
        elif status == "AlmostSolved":
            # accepted only if the independent residual check passes later
            code = OPTIMAL
        else:
            code = NUMERICAL_FAILURE
        return RawResult(code, z if code == OPTIMAL else None, gap, sol.iterations, status)


class CvxoptBackend:
    name = "cvxopt"

    def solve(self, problem: ConicProblem, feas_tol: float, rel_gap: float, max_iter: int) -> RawResult:
        from cvxopt import matrix, solvers, spmatrix

        N = problem.num_vars
        I, J, V = [], [], []
        row0 = 0
        col0 = 0
        for _, d in problem.blocks:
            # s = h - G z holds the full d x d block, column-major
            for k, (i, j) in enumerate(triu_pairs(d)):
                if i == j:
                    I.append(row0 + i + j * d)
                    J.append(col0 + k)
                    V.append(-1.0)
                else:
                    for r in (i + j * d, j + i * d):
                        I.append(row0 + r)
                        J.append(col0 + k)
                        V.append(-1.0 / SQRT2)
            row0 += d * d
            col0 += svec_len(d)
        G = spmatrix(V, I, J, (row0, N))
        h = matrix(0.0, (row0, 1))
        dims = {"l": 0, "q": [], "s": [d for _, d in problem.blocks]}
        # The robust models have no strictly feasible point, which can break
        # cvxopt's scaling update near convergence; retry at the requested
        # tolerances instead of the tighter internal ones.
        sol, detail = None, ""
        for shrink in (1e-1, 1.0):
            opts = {
                "show_progress": False,
                "maxiters": max_iter,
                "abstol": rel_gap * shrink * 1e-1,
                "reltol": rel_gap * shrink,
                "feastol": feas_tol * shrink,
            }
            try:
                sol = solvers.conelp(
                    matrix(problem.c),
                    G,
                    h,
                    dims,
                    A=matrix(problem.A),
                    b=matrix(problem.b),
                    options=opts,
                )
                break
            except (ArithmeticError, ValueError) as exc:
                detail = str(exc)
        if sol is None:
            return RawResult(NUMERICAL_FAILURE, None, detail=detail)
        status = sol["status"]
        if status == "optimal":
            code = OPTIMAL
        elif status == "primal infeasible":
            code = INFEASIBLE
        elif status == "dual infeasible":
            code = UNBOUNDED
        else:
            code = OPTIMAL if sol["x"] is not None else NUMERICAL_FAILURE
        z = np.array(sol["x"]).ravel() if code == OPTIMAL else None
        gap = sol.get("gap")
        pobj = sol.get("primal objective")
        gap = float("nan") if gap is None or pobj is None else abs(float(gap)) / (1.0 + abs(float(pobj)))
        return RawResult(code, z, gap, int(sol.get("iterations", 0)), status)


BACKENDS = {"clarabel": ClarabelBackend, "cvxopt": CvxoptBackend}


def get_backend(name: str):
    try:
        return BACKENDS[name]()
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; choose from {sorted(BACKENDS)}") from None
