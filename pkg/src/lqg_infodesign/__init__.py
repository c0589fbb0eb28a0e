"""Robust information design for linear-quadratic-Gaussian games.

The designer picks the joint covariance X of actions and states subject to
equilibrium (obedience) constraints; uncertainty in the payoff matrix H is
handled through a norm-bounded robust counterpart solved as an SDP.
"""
from .certificates import (
    Certificate,
    Theorem,
    certify_general_no_info,
    certify_public,
    certify_ui_public,
    eigenvalue_gap_bound,
    public_optimum,
    thresholds,
)
from .core import (
    GameSpec,
    InfoStructure,
    ObjectiveKind,
    ObjectiveSpec,
    agreement_objective,
    custom_objective,
    f_h_matrix,
    full_info_structure,
    no_info_structure,
    benchmark_h,
    benchmark_sigma,
    welfare_objective,
)
from .errors import InfoDesignError
from .robust import PerturbationSet, assemble_robust, reformulate_norm_bounded
from .sdp import assemble_nominal, build_m, build_r
from .solver import Solution, SolveOptions, solve, solve_model, to_conic
from .verification import check_robust_feasibility, distances, mc_objective, sample_recommendations, verify

__all__ = [
    "Certificate",
    "GameSpec",
    "InfoDesignError",
    "InfoStructure",
    "ObjectiveKind",
    "ObjectiveSpec",
    "PerturbationSet",
    "Solution",
    "SolveOptions",
    "Theorem",
    "agreement_objective",
    "assemble_nominal",
    "assemble_robust",
    "build_m",
    "build_r",
    "certify_general_no_info",
    "certify_public",
    "certify_ui_public",
    "check_robust_feasibility",
    "custom_objective",
    "distances",
    "eigenvalue_gap_bound",
    "f_h_matrix",
    "full_info_structure",
    "mc_objective",
    "no_info_structure",
    "benchmark_h",
    "benchmark_sigma",
    "public_optimum",
    "reformulate_norm_bounded",
    "sample_recommendations",
    "solve",
    "solve_model",
    "thresholds",
    "to_conic",
    "verify",
    "welfare_objective",
]
