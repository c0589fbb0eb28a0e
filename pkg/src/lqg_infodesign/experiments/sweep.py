"""Grid runner over (rho, shift) producing one CSV row per point."""
from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, Iterable, List, Optional

import numpy as np

from ..robust import PerturbationSet, assemble_robust
from ..solver import solve_model
from ..verification import distances, point_seed
from .config import ExperimentConfig

COLUMNS = (
    "rho",
    "eps_value",
    "eps_axis",
    "status",
    "objective_t",
    "frob_objective",
    "dist_no",
    "dist_no_normalized",
    "dist_full",
    "lambda",
    "bce_residual_max",
    "solve_ms",
    "seed",
)
NUMERIC = COLUMNS[4:12]


def fmt(x: Optional[float]) -> str:
    return "" if x is None else f"{float(x):.17g}"


def solve_point(config: ExperimentConfig, rho: float, eps_value: float, base_dir: Path = Path(".")):
    """Assemble and solve the robust model at one grid point.

    Returns (game, objective, model, solution).
    """
    game = config.game_at(eps_value)
    objective = config.build_objective(game, base_dir)
    model = assemble_robust(game, objective, PerturbationSet(rho, 2 * game.n))
    return game, objective, model, solve_model(model, config.solver.options())


def run_point(config: ExperimentConfig, index: int, rho: float, eps_value: float, base_dir: str = ".") -> Dict[str, object]:
    game, _, model, sol = solve_point(config, rho, eps_value, Path(base_dir))
    row: Dict[str, object] = {
        "rho": rho,
        "eps_value": eps_value,
        "eps_axis": config.eps_axis,
        "status": sol.status,
        "seed": point_seed(config.seed, index),
        "solve_ms": sol.solve_ms,
    }
    if sol.optimal:
        d_no, d_full, d_norm = distances(sol.X, game)
        bce = np.array([np.sum(R * sol.X) for R in model.base.R])
        row.update(
            objective_t=sol.t,
            frob_objective=sol.residuals["objective_FX"],
            dist_no=d_no,
            dist_no_normalized=d_norm,
            dist_full=d_full,
            **{"lambda": sol.lam},
            bce_residual_max=float(np.max(np.abs(bce))),
        )
    return row


def run_sweep(config: ExperimentConfig, jobs: int = 1, base_dir: Path = Path(".")) -> List[Dict[str, object]]:
    """Solve every grid point; rows come back in grid order whatever ``jobs`` is."""
    points = config.grid()
    args = [(config, i, r, e, str(base_dir)) for i, (r, e) in enumerate(points)]
    if jobs <= 1:
        return [run_point(*a) for a in args]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(run_point, *a) for a in args]
        return [f.result() for f in futures]


def write_csv(rows: Iterable[Dict[str, object]], fh, timing: bool = True) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        out = []
        for col in COLUMNS:
            v = row.get(col)
            if col in ("eps_axis", "status"):
                out.append(v)
            elif col == "seed":
                out.append(str(v))
            elif col == "solve_ms" and not timing:
                out.append("")
            else:
                out.append(fmt(v))
        writer.writerow(out)


def sweep_csv(config: ExperimentConfig, jobs: int = 1, timing: bool = True, base_dir: Path = Path(".")) -> str:
    buf = io.StringIO()
    write_csv(run_sweep(config, jobs, base_dir), buf, timing)
    return buf.getvalue()
