"""Experiment configuration: a YAML file whose keys are exactly the fields below.

Defaults reproduce the four-player symmetric instance: H with unit diagonal
and 0.25 off-diagonal, var(g) with 4 on the diagonal and 1 off it, the
agreement objective and a (rho, diagonal shift) grid.
"""
from __future__ import annotations

from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..core import (
    GameSpec,
    ObjectiveSpec,
    agreement_objective,
    custom_objective,
    homogeneous_eps,
    benchmark_h,
    benchmark_sigma,
    welfare_objective,
)
from ..errors import InfoDesignError
from ..solver import SolveOptions

Matrix = List[List[float]]

DEFAULT_RHO_GRID = [round(0.25 * k, 10) for k in range(11)]
DEFAULT_EPS_DIAG_GRID = [round(0.03 + 0.01 * k, 10) for k in range(10)]
DEFAULT_EPS_OFFDIAG_GRID = [round(0.005 * (k + 1), 10) for k in range(10)]


class ConfigError(Exception):
    """Configuration could not be parsed; message carries line/field diagnostics."""


class SolverConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    feas_tol: float = 1e-7
    rel_gap: float = 1e-7
    max_iter: int = 500
    backend: Literal["clarabel", "cvxopt"] = "clarabel"
    tie_break: bool = True

    def options(self) -> SolveOptions:
        return SolveOptions(**self.model_dump())


class CustomObjective(BaseModel):
    model_config = ConfigDict(extra="forbid")

    F: str  # path to a whitespace-separated 2n x 2n matrix, relative to the config file
    eta: Optional[Matrix] = None


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(4, ge=1)
    H: Optional[Matrix] = None
    Sigma: Optional[Matrix] = None
    mu: Optional[List[float]] = None
    objective: Union[Literal["agreement", "welfare"], CustomObjective] = "agreement"
    eps_diag: float = Field(0.03, ge=0)
    eps_offdiag: float = Field(0.001, ge=0)
    eps: Optional[Matrix] = None
    rho_grid: List[float] = Field(default_factory=lambda: list(DEFAULT_RHO_GRID))
    eps_grid: List[float] = Field(default_factory=lambda: list(DEFAULT_EPS_DIAG_GRID))
    eps_axis: Literal["diag", "offdiag"] = "diag"
    solver: SolverConfig = Field(default_factory=SolverConfig)
    seed: int = Field(0, ge=0, lt=2**64)
    mc_count: int = Field(200_000, ge=1)

    @field_validator("rho_grid", "eps_grid")
    @classmethod
    def _grid(cls, v):
        if not v:
            raise ValueError("grid must be nonempty")
        if any(b < a for a, b in zip(v, v[1:])):
            raise ValueError("grid must be sorted ascending")
        if any(x < 0 for x in v):
            raise ValueError("grid values must be nonnegative")
        return v

    @model_validator(mode="after")
    def _matrices(self):
        n = self.n
        for name in ("H", "Sigma", "eps"):
            m = getattr(self, name)
            if m is not None and np.shape(m) != (n, n):
                raise ValueError(f"{name} must be {n}x{n}, got shape {np.shape(m)}")
        if self.mu is not None and len(self.mu) != n:
            raise ValueError(f"mu must have length {n}")
        try:
            self.game_at(self.eps_grid[0])
        except InfoDesignError as exc:
            raise ValueError(str(exc)) from None
        return self

    # -- derived objects -------------------------------------------------

    def H_matrix(self) -> np.ndarray:
        return benchmark_h(self.n) if self.H is None else np.array(self.H, dtype=float)

    def Sigma_matrix(self) -> np.ndarray:
        return benchmark_sigma(self.n) if self.Sigma is None else np.array(self.Sigma, dtype=float)

    def eps_matrix(self, value: Optional[float] = None) -> np.ndarray:
        """Shift matrix with the swept axis set to ``value``."""
        if self.eps is not None:
            E = np.array(self.eps, dtype=float)
        else:
            E = homogeneous_eps(self.n, self.eps_diag, self.eps_offdiag)
        if value is not None:
            mask = np.eye(self.n, dtype=bool)
            if self.eps_axis == "offdiag":
                mask = ~mask
            E = np.where(mask, value, E)
        return E

    def game_at(self, eps_value: Optional[float] = None) -> GameSpec:
        return GameSpec(self.H_matrix(), self.Sigma_matrix(), mu=self.mu, eps=self.eps_matrix(eps_value))

    def build_objective(self, game: GameSpec, base_dir: Path = Path(".")) -> ObjectiveSpec:
        if self.objective == "agreement":
            return agreement_objective(self.n)
        if self.objective == "welfare":
            return welfare_objective(game)
        path = Path(self.objective.F)
        if not path.is_absolute():
            path = base_dir / path
        F = np.loadtxt(path, ndmin=2)
        eta = None if self.objective.eta is None else np.array(self.objective.eta)
        return custom_objective(F, eta)

    def grid(self) -> List[Tuple[float, float]]:
        """(rho, eps_value) pairs in row-major order: rho outer, eps inner."""
        return [(r, e) for r in self.rho_grid for e in self.eps_grid]

    def dump(self) -> str:
        return yaml.safe_dump(self.model_dump(mode="json"), sort_keys=False)


def _key_lines(text: str) -> dict:
    try:
        node = yaml.compose(text)
    except yaml.YAMLError:
        return {}
    if not isinstance(node, yaml.MappingNode):
        return {}
    return {k.value: k.start_mark.line + 1 for k, _ in node.value}


def parse_config(text: str) -> ExperimentConfig:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}: " if mark is not None else ""
        raise ConfigError(f"{where}invalid YAML ({getattr(exc, 'problem', exc)})") from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("line 1: top level must be a mapping of field names")
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        lines = _key_lines(text)
        msgs = []
        for err in exc.errors():
            msg = err["msg"].removeprefix("Value error, ")
            loc_parts = [str(p) for p in err["loc"]]
            if not loc_parts:
                # whole-model checks name the offending field at the start of the message
                head = msg.split()[0] if msg else ""
                loc_parts = [head] if head in ExperimentConfig.model_fields else []
            loc = ".".join(loc_parts) or "<config>"
            line = lines.get(loc_parts[0]) if loc_parts else None
            where = f"line {line}, " if line else ""
            msgs.append(f"{where}field '{loc}': {msg}")
        raise ConfigError("; ".join(msgs)) from None


def load_config(path: Optional[str]) -> Tuple[ExperimentConfig, Path]:
    """Parse a config file (or the defaults when ``path`` is None)."""
    if path is None:
        return ExperimentConfig(), Path(".")
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config(text), p.parent
