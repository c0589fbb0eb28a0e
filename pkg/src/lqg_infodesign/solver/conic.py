"""Standard-form conic embedding.

    minimize    c . z
    subject to  A z = b
                z = (svec(S_1), ..., svec(S_B), free scalars),  every S_b PSD

Symmetric blocks use the scaled upper-triangular, column-major vectorization
(off-diagonals multiplied by sqrt(2)), so svec(A) . svec(X) = A . X.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple, Union

import numpy as np

from ..errors import MalformedModel
from ..robust import AffineLmi, RobustSdpModel
from ..sdp import NominalSdpModel

SQRT2 = np.sqrt(2.0)


def svec_len(d: int) -> int:
    return d * (d + 1) // 2


def triu_pairs(d: int):
    """(row, col) pairs of the upper triangle in column-major order."""
    return [(i, j) for j in range(d) for i in range(j + 1)]


def svec(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    d = X.shape[0]
    out = np.empty(svec_len(d))
    for k, (i, j) in enumerate(triu_pairs(d)):
        out[k] = X[i, j] if i == j else SQRT2 * 0.5 * (X[i, j] + X[j, i])
    return out


def smat(v: np.ndarray, d: int) -> np.ndarray:
    X = np.empty((d, d))
    for k, (i, j) in enumerate(triu_pairs(d)):
        if i == j:
            X[i, i] = v[k]
        else:
            X[i, j] = X[j, i] = v[k] / SQRT2
    return X


@dataclass(frozen=True)
class ConicProblem:
    blocks: Tuple[Tuple[str, int], ...]
    free: Tuple[str, ...]
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    labels: Tuple[str, ...] = ()
    F: Optional[np.ndarray] = None
    objective_scale: float = -1.0  # reported objective = objective_scale * (c . z)
    meta: Dict[str, object] = field(default_factory=dict)

    @property
    def num_vars(self) -> int:
        return sum(svec_len(d) for _, d in self.blocks) + len(self.free)

    @property
    def num_equalities(self) -> int:
        return self.A.shape[0]

    @property
    def block_dims(self) -> Tuple[int, ...]:
        return tuple(d for _, d in self.blocks)

    def offsets(self) -> Dict[str, slice]:
        out = {}
        pos = 0
        for name, d in self.blocks:
            out[name] = slice(pos, pos + svec_len(d))
            pos += svec_len(d)
        for name in self.free:
            out[name] = slice(pos, pos + 1)
            pos += 1
        return out

    def split(self, z: np.ndarray):
        """Split a variable vector into ({block: matrix}, {scalar: value})."""
        offs = self.offsets()
        mats = {name: smat(z[offs[name]], d) for name, d in self.blocks}
        scal = {name: float(z[offs[name]][0]) for name in self.free}
        return mats, scal

    def with_cap(self, cap: float, new_c: np.ndarray, label: str = "objective cap") -> "ConicProblem":
        """Add c . z <= cap (through a 1x1 PSD slack) and replace the objective."""
        A = np.hstack([self.A, np.zeros((self.A.shape[0], 1))])
        row = np.concatenate([self.c, [1.0]])
        # slack appended after the free scalars; keep it a PSD block by reordering
        nb = sum(svec_len(d) for _, d in self.blocks)
        perm = np.r_[np.arange(nb), A.shape[1] - 1, np.arange(nb, A.shape[1] - 1)]
        A = np.vstack([A, row])[:, perm]
        c = np.concatenate([new_c, [0.0]])[perm]
        return replace(
            self,
            blocks=self.blocks + (("cap", 1),),
            c=c,
            A=A,
            b=np.concatenate([self.b, [cap]]),
            labels=self.labels + (label,),
            objective_scale=1.0,
        )


def _lmi_rows(lmi: AffineLmi, slack: slice, x_slice: slice, scalar_pos: Dict[str, int], N: int, name: str):
    p = lmi.dim
    const = 0.5 * (lmi.constant + lmi.constant.T)
    scal = {k: 0.5 * (v + v.T) for k, v in lmi.scalar_coef.items()}
    rows, rhs, labels = [], [], []
    for k, (i, j) in enumerate(triu_pairs(p)):
        row = np.zeros(N)
        w = 1.0 if i == j else SQRT2
        row[slack.start + k] = 1.0  # svec coordinate equals w * S_ij
        if lmi.x_coef is not None:
            G = 0.5 * (lmi.x_coef[i, j] + lmi.x_coef[j, i])
            row[x_slice] -= w * svec(G)
        for var, coef in scal.items():
            if var not in scalar_pos:
                raise MalformedModel(f"LMI uses unknown scalar {var!r}")
            row[scalar_pos[var]] -= w * coef[i, j]
        rows.append(row)
        rhs.append(w * const[i, j])
        labels.append(f"{name}[{i},{j}]")
    return rows, rhs, labels


def to_conic(model: Union[NominalSdpModel, RobustSdpModel]) -> ConicProblem:
    """Embed a nominal or robust model in standard conic form."""
    if isinstance(model, NominalSdpModel):
        n = model.n
        d = 2 * n
        N = svec_len(d)
        rows = [svec(R) for R in model.R] + [svec(M) for M in model.M]
        rhs = [0.0] * len(model.R) + list(model.M_rhs)
        labels = [f"bce[{k}]" for k in range(n)] + [f"assign[{k}]" for k in range(len(model.M))]
        return ConicProblem(
            blocks=(("X", d),),
            free=(),
            c=-svec(model.F),
            A=np.array(rows).reshape(len(rows), N),
            b=np.array(rhs, dtype=float),
            labels=tuple(labels),
            F=model.F,
            meta={"n": n, "kind": "nominal"},
        )
    if isinstance(model, RobustSdpModel):
        n = model.n
        d = 2 * n
        blocks = [("X", d)] + [(f"lmi{b}", lmi.dim) for b, lmi in enumerate(model.lmi_blocks)]
        free = tuple(model.scalar_vars)
        if "t" not in free:
            raise MalformedModel("robust model lacks the epigraph variable t")
        sizes = [svec_len(dim) for _, dim in blocks]
        starts = np.cumsum([0] + sizes)
        N = int(starts[-1]) + len(free)
        scalar_pos = {name: int(starts[-1]) + i for i, name in enumerate(free)}
        x_slice = slice(0, sizes[0])
        rows = [np.concatenate([svec(M), np.zeros(N - sizes[0])]) for M in model.base.M]
        rhs = list(model.base.M_rhs)
        labels = [f"assign[{k}]" for k in range(len(model.base.M))]
        for b, lmi in enumerate(model.lmi_blocks):
            sl = slice(int(starts[b + 1]), int(starts[b + 2]))
            r, h, lab = _lmi_rows(lmi, sl, x_slice, scalar_pos, N, f"lmi{b}")
            rows += r
            rhs += h
            labels += lab
        c = np.zeros(N)
        c[scalar_pos["t"]] = -1.0
        return ConicProblem(
            blocks=tuple(blocks),
            free=free,
            c=c,
            A=np.array(rows),
            b=np.array(rhs, dtype=float),
            labels=tuple(labels),
            F=model.F,
            meta={"n": n, "kind": "robust", "rho": model.rho},
        )
    raise MalformedModel(f"cannot embed object of type {type(model).__name__}")


def expected_counts(n: int, kind: str = "nominal", welfare: bool = False) -> Dict[str, object]:
    """Analytical block and equality counts, for cross-checking to_conic."""
    d = 2 * n
    if kind == "nominal":
        return {"blocks": (d,), "free": 0, "equalities": n + svec_len(n)}
    obj_dim = 2 if welfare else 1
    return {
        "blocks": (d, 2 * d, obj_dim),
        "free": 3 if welfare else 2,
        "equalities": svec_len(n) + svec_len(2 * d) + svec_len(obj_dim),
    }
