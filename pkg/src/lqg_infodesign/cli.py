"""Command-line front end: ``lqg-infodesign {solve,sweep,certify,verify}``.

Exit codes: 0 success, 1 configuration or input error, 2 infeasible or
unbounded, 3 numerical failure, 4 verification band failed.
"""
from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager

import numpy as np

from .certificates import (
    Certificate,
    certify_general_no_info,
    certify_ui_public,
    infer_eta,
    public_certificates,
)
from .errors import InfoDesignError
from .experiments.config import ConfigError, load_config
from .experiments.sweep import solve_point, sweep_csv
from .robust import PerturbationSet, assemble_robust
from .solver import INFEASIBLE, OPTIMAL, UNBOUNDED, read_solution, write_solution
from .verification import distances, verify

EXIT_OK, EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_NUMERICAL, EXIT_VERIFY = 0, 1, 2, 3, 4


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _load(args):
    config, base = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        config = config.model_copy(update={"seed": args.seed})
    return config, base


def cmd_solve(args) -> int:
    config, base = _load(args)
    rho, eps_value = config.rho_grid[0], config.eps_grid[0]
    game, objective, model, sol = solve_point(config, rho, eps_value, base)
    with _output(args.out) as out:
        out.write(f"status            {sol.status}\n")
        out.write(f"rho               {rho:.17g}\n")
        out.write(f"eps_{config.eps_axis:<14s}{eps_value:.17g}\n")
        if sol.X is not None:
            d_no, d_full, d_norm = distances(sol.X, game)
            bce = max(abs(float(np.sum(R * sol.X))) for R in model.base.R)
            out.write(f"t                 {sol.t:.10e}\n")
            out.write(f"F.X               {sol.residuals['objective_FX']:.10e}\n")
            out.write(f"lambda            {sol.lam:.10e}\n")
            out.write(f"d_no              {d_no:.10e}\n")
            out.write(f"d_no_normalized   {d_norm:.10e}\n")
            out.write(f"d_full            {d_full:.10e}\n")
            out.write(f"bce_residual_max  {bce:.10e}\n")
    if args.dump:
        with open(args.dump, "w") as fh:
            write_solution(sol, fh, {"rho": repr(rho), "eps_value": repr(eps_value)})
    if sol.status == OPTIMAL:
        return EXIT_OK
    if sol.status in (INFEASIBLE, UNBOUNDED):
        return EXIT_INFEASIBLE
    return EXIT_NUMERICAL


def cmd_sweep(args) -> int:
    config, base = _load(args)
    text = sweep_csv(config, jobs=args.jobs, timing=not args.no_timing, base_dir=base)
    with _output(args.out) as out:
        out.write(text)
    return EXIT_OK


def _cert_row(cert: Certificate) -> str:
    nu = cert.details.get("nu")
    nu_s = "" if nu is None else f"{nu:.6g}"
    state = "fired" if cert.fired else "not fired"
    return f"{cert.theorem.value:<18s} {state:<12s} {cert.margin:>14.6e} {cert.threshold:>14.6e} {nu_s:>6s}"


def cmd_certify(args) -> int:
    config, base = _load(args)
    rho, eps_value = config.rho_grid[0], config.eps_grid[0]
    game = config.game_at(eps_value)
    objective = config.build_objective(game, base)
    eta = infer_eta(objective, game.H)
    F = objective.F
    rows = []
    if eta is None:
        rows.append(f"{'GeneralNoInfo':<18s} inapplicable ([F]_11 is not eta * H)")
        rows.append(f"{'PublicNoInfo':<18s} inapplicable ([F]_11 is not eta * H)")
        rows.append(f"{'PublicFullInfo':<18s} inapplicable ([F]_11 is not eta * H)")
    else:
        rows.append(_cert_row(certify_general_no_info(F, eta, game.eps, rho)))
        try:
            for cert in public_certificates(F, game.H, eta, game.eps, rho):
                rows.append(_cert_row(cert))
        except InfoDesignError as exc:
            rows.append(f"{'PublicNoInfo':<18s} inapplicable ({exc})")
            rows.append(f"{'PublicFullInfo':<18s} inapplicable ({exc})")
    try:
        ui = certify_ui_public(objective, game.H, game.Sigma)
        for name in ("UiPublicNoInfo", "UiPublicFullInfo"):
            rows.append(_cert_row(ui) if ui.theorem.value == name else f"{name:<18s} {'not fired':<12s}")
    except InfoDesignError as exc:
        rows.append(f"{'UiPublicNoInfo':<18s} inapplicable ({exc})")
        rows.append(f"{'UiPublicFullInfo':<18s} inapplicable ({exc})")
    with _output(args.out) as out:
        out.write(f"# rho={rho:.17g} eps_{config.eps_axis}={eps_value:.17g}\n")
        out.write(f"{'theorem':<18s} {'result':<12s} {'margin':>14s} {'threshold':>14s} {'nu':>6s}\n")
        for r in rows:
            out.write(r + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    config, base = _load(args)
    try:
        with open(args.dump) as fh:
            dump = read_solution(fh)
    except (OSError, InfoDesignError) as exc:
        print(f"error: cannot read solution dump: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if dump["X"] is None:
        print(f"error: dump holds no solution (status {dump['status']})", file=sys.stderr)
        return EXIT_CONFIG
    rho = float(dump["meta"].get("rho", config.rho_grid[0]))
    eps_value = float(dump["meta"].get("eps_value", config.eps_grid[0]))
    game = config.game_at(eps_value)
    if dump["X"].shape != (2 * game.n, 2 * game.n):
        print(f"error: dump dimension {dump['X'].shape[0]} does not match n={game.n}", file=sys.stderr)
        return EXIT_CONFIG
    objective = config.build_objective(game, base)
    model = assemble_robust(game, objective, PerturbationSet(rho, 2 * game.n))
    report = verify(dump["X"], game, objective, count=config.mc_count, seed=config.seed, model=model)
    with _output(args.out) as out:
        out.write(report.format())
    return EXIT_OK if report.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lqg-infodesign", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="YAML experiment config (defaults to the built-in instance)")
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--seed", type=int, help="override the config seed")

    p = sub.add_parser("solve", help="solve at the first grid point")
    common(p)
    p.add_argument("--dump", help="write the solution in sparse text form")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="solve every grid point, CSV output")
    common(p)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="leave solve_ms empty for byte-stable output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("certify", help="evaluate the optimality certificates")
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="Monte-Carlo and sampled-robustness checks of a dumped solution")
    common(p)
    p.add_argument("--dump", required=True, help="solution dump written by 'solve --dump'")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InfoDesignError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
