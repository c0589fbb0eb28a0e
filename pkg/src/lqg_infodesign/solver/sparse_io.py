"""Sparse text dumps of conic problems and solutions.

Problem files list one nonzero per line, SDPA style, with matrix-entry
coefficients for the upper triangle of each PSD block (block numbers start
at 1; block 0 holds free scalars, addressed as row = col = scalar index)::

    # lqg-infodesign conic problem
    blocks 8 16 1
    free t lam
    equalities 147
    c <block> <row> <col> <value>
    a <equality> <block> <row> <col> <value>
    b <equality> <value>

Rows, columns and equality numbers are 1-based. Values are written with
``repr`` so parsing reproduces them to full double precision.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, TextIO

import numpy as np

from ..errors import MalformedModel
from .conic import SQRT2, ConicProblem, svec_len, triu_pairs

PROBLEM_HEADER = "# lqg-infodesign conic problem"
SOLUTION_HEADER = "# lqg-infodesign solution"


def _vector_entries(problem: ConicProblem, vec: np.ndarray):
    """Yield (block, row, col, matrix coefficient) for the nonzeros of a row vector."""
    pos = 0
    for b, (_, d) in enumerate(problem.blocks, start=1):
        for i, j in triu_pairs(d):
            v = vec[pos]
            pos += 1
            if v != 0.0:
                yield b, i + 1, j + 1, float(v if i == j else v / SQRT2)
    for s in range(len(problem.free)):
        v = vec[pos]
        pos += 1
        if v != 0.0:
            yield 0, s + 1, s + 1, float(v)


def write_problem(problem: ConicProblem, fh: TextIO) -> None:
    fh.write(PROBLEM_HEADER + "\n")
    fh.write("blocks " + " ".join(str(d) for d in problem.block_dims) + "\n")
    fh.write("free " + " ".join(problem.free) + "\n")
    fh.write(f"equalities {problem.num_equalities}\n")
    for b, i, j, v in _vector_entries(problem, problem.c):
        fh.write(f"c {b} {i} {j} {v!r}\n")
    for e in range(problem.num_equalities):
        for b, i, j, v in _vector_entries(problem, problem.A[e]):
            fh.write(f"a {e + 1} {b} {i} {j} {v!r}\n")
    for e, v in enumerate(problem.b, start=1):
        if v != 0.0:
            fh.write(f"b {e} {float(v)!r}\n")


def _column(dims: List[int], nfree: int, b: int, i: int, j: int) -> (int, float):
    """Map (block, row, col) to a vector position and the matrix-to-svec factor."""
    if b == 0:
        if not 1 <= i <= nfree:
            raise MalformedModel(f"free scalar index {i} out of range")
        return sum(svec_len(d) for d in dims) + i - 1, 1.0
    if not 1 <= b <= len(dims):
        raise MalformedModel(f"block {b} out of range")
    d = dims[b - 1]
    r, c = sorted((i - 1, j - 1))
    if c >= d or r < 0:
        raise MalformedModel(f"entry ({i}, {j}) outside block {b} of size {d}")
    start = sum(svec_len(x) for x in dims[: b - 1])
    return start + c * (c + 1) // 2 + r, (1.0 if r == c else SQRT2)


def read_problem(lines: Iterable[str]) -> ConicProblem:
    dims: List[int] = []
    free: List[str] = []
    m = None
    entries = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        try:
            if tok[0] == "blocks":
                dims = [int(x) for x in tok[1:]]
            elif tok[0] == "free":
                free = tok[1:]
            elif tok[0] == "equalities":
                m = int(tok[1])
            elif tok[0] in ("c", "a", "b"):
                entries.append((lineno, tok))
            else:
                raise MalformedModel(f"line {lineno}: unknown record {tok[0]!r}")
        except (IndexError, ValueError) as exc:
            raise MalformedModel(f"line {lineno}: {exc}") from None
    if m is None or not dims:
        raise MalformedModel("missing 'blocks' or 'equalities' header")
    N = sum(svec_len(d) for d in dims) + len(free)
    c = np.zeros(N)
    A = np.zeros((m, N))
    b = np.zeros(m)
    for lineno, tok in entries:
        try:
            if tok[0] == "b":
                b[int(tok[1]) - 1] = float(tok[2])
                continue
            if tok[0] == "c":
                blk, i, j, v = int(tok[1]), int(tok[2]), int(tok[3]), float(tok[4])
                target = c
            else:
                e = int(tok[1]) - 1
                if not 0 <= e < m:
                    raise MalformedModel(f"line {lineno}: equality {e + 1} out of range")
                blk, i, j, v = int(tok[2]), int(tok[3]), int(tok[4]), float(tok[5])
                target = A[e]
            pos, scale = _column(dims, len(free), blk, i, j)
            target[pos] = v * scale
        except (IndexError, ValueError) as exc:
            raise MalformedModel(f"line {lineno}: {exc}") from None
    blocks = tuple((("X" if k == 0 else f"block{k}"), d) for k, d in enumerate(dims))
    n = dims[0] // 2
    return ConicProblem(blocks=blocks, free=tuple(free), c=c, A=A, b=b, meta={"n": n})


def write_solution(sol, fh: TextIO, extra: Dict[str, object] | None = None) -> None:
    """Dump a Solution: status, scalars and the nonzero upper triangle of X."""
    fh.write(SOLUTION_HEADER + "\n")
    fh.write(f"status {sol.status}\n")
    if sol.X is None:
        return
    n2 = sol.X.shape[0]
    fh.write(f"dim {n2}\n")
    for k, v in (extra or {}).items():
        fh.write(f"meta {k} {v}\n")
    for name in sorted(sol.scalars):
        fh.write(f"scalar {name} {float(sol.scalars[name])!r}\n")
    for j in range(n2):
        for i in range(j + 1):
            v = float(sol.X[i, j])
            if v != 0.0:
                fh.write(f"X {i + 1} {j + 1} {v!r}\n")


def read_solution(lines: Iterable[str]) -> Dict[str, object]:
    """Parse a solution dump into {'status', 'X', 'scalars', 'meta'}."""
    status = None
    dim = None
    scalars: Dict[str, float] = {}
    meta: Dict[str, str] = {}
    entries = []
    seen_header = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if line == SOLUTION_HEADER:
            seen_header = True
            continue
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        try:
            if tok[0] == "status":
                status = tok[1]
            elif tok[0] == "dim":
                dim = int(tok[1])
            elif tok[0] == "scalar":
                scalars[tok[1]] = float(tok[2])
            elif tok[0] == "meta":
                meta[tok[1]] = " ".join(tok[2:])
            elif tok[0] == "X":
                entries.append((int(tok[1]) - 1, int(tok[2]) - 1, float(tok[3])))
            else:
                raise MalformedModel(f"line {lineno}: unknown record {tok[0]!r}")
        except (IndexError, ValueError) as exc:
            raise MalformedModel(f"line {lineno}: {exc}") from None
    if not seen_header or status is None:
        raise MalformedModel("not a solution dump (missing header or status)")
    X = None
    if dim is not None:
        X = np.zeros((dim, dim))
        for i, j, v in entries:
            if not (0 <= i < dim and 0 <= j < dim):
                raise MalformedModel(f"entry ({i + 1}, {j + 1}) outside dimension {dim}")
            X[i, j] = X[j, i] = v
    return {"status": status, "X": X, "scalars": scalars, "meta": meta}
