from .backends import INFEASIBLE, NUMERICAL_FAILURE, OPTIMAL, UNBOUNDED, get_backend
from .conic import ConicProblem, expected_counts, smat, svec, to_conic
from .solve import Solution, SolveOptions, compute_residuals, solve, solve_model
from .sparse_io import read_problem, read_solution, write_problem, write_solution

__all__ = [
    "INFEASIBLE",
    "NUMERICAL_FAILURE",
    "OPTIMAL",
    "UNBOUNDED",
    "ConicProblem",
    "Solution",
    "SolveOptions",
    "compute_residuals",
    "expected_counts",
    "get_backend",
    "read_problem",
    "read_solution",
    "smat",
    "solve",
    "solve_model",
    "svec",
    "to_conic",
    "write_problem",
    "write_solution",
]
