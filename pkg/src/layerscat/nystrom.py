"""Truncated-line Nystrom discretization of the collocation systems.

Grid: t_j = -A + j h, j = 0..2A/h, h = pi/N, A a positive multiple of pi
(so A/h is an integer).  The quadrature weights for the periodic logarithm,

    R_j^N(s) = -(1/N) [ sum_{m=1}^{N-1} cos(m (s - t_j))/m
                        + cos(N (s - t_j))/(2N) ],

integrate ln(4 sin^2((s-t)/2)) exactly against trigonometric polynomials of
degree < N (2 pi R_j^N are the classical log-quadrature weights).  The
discrete operator is

    (K_N psi)(s) = sum_j [ R_j^N(s) A(s, t_j) + (pi/N) B(s, t_j) ] psi(t_j),

collocated at s = t_i, giving the dense system (I - K_N) psi = rhs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack as _lapack

from .bie import BoundaryProblem, kernel_matrices, rhs_vector
from .errors import DomainError, SolverError

_COND_LIMIT = 1e12
_RESIDUAL_LIMIT = 1e-10


@dataclass(frozen=True)
class Grid:
    """Uniform truncated grid on [-A, A] with spacing h = pi/N."""

    half_width_A: float
    N: int

    def __post_init__(self):
        if self.N < 1 or self.N != int(self.N):
            raise DomainError("N must be a positive integer")
        if not (self.half_width_A > 0 and math.isfinite(self.half_width_A)):
            raise DomainError("truncation half-width must be positive")
        ratio = self.half_width_A / self.h
        if abs(ratio - round(ratio)) > 1e-9:
            raise DomainError(
                f"A/h must be an integer (A = {self.half_width_A}, h = {self.h})")

    @property
    def h(self) -> float:
        return math.pi / self.N

    @property
    def node_count(self) -> int:
        return 2 * int(round(self.half_width_A / self.h)) + 1

    @property
    def nodes(self) -> np.ndarray:
        m = self.node_count
        return -self.half_width_A + self.h * np.arange(m)


@dataclass(frozen=True)
class DensitySolution:
    """Nodal density values of one solved collocation system."""

    grid: Grid
    values: np.ndarray
    problem_kind: str
    residual_norm: float
    condition_estimate: float

    def dump_csv(self, path):
        t = self.grid.nodes
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("j,t_j,re_psi,im_psi\n")
            for j, (tj, v) in enumerate(zip(t, self.values)):
                fh.write(f"{j},{tj:.15g},{v.real:.15g},{v.imag:.15g}\n")


def log_weight(N: int, s, t_j):
    """Quadrature weight R_j^N(s) of the periodic-log rule."""
    if N < 1 or N != int(N):
        raise DomainError("N must be a positive integer")
    d = np.asarray(s, dtype=float) - np.asarray(t_j, dtype=float)
    acc = np.zeros_like(d)
    for m in range(1, N):
        acc = acc + np.cos(m * d) / m
    acc = acc + np.cos(N * d) / (2.0 * N)
    out = -acc / N
    return float(out) if out.ndim == 0 else out


def _weight_matrix(grid: Grid) -> np.ndarray:
    """R_{i-j} = R_j^N(t_i); Toeplitz in i - j and even in the offset."""
    m = grid.node_count
    offsets = np.arange(m) * grid.h
    row = log_weight(grid.N, offsets, 0.0)
    idx = np.absolute(np.arange(m)[:, None] - np.arange(m)[None, :])
    return row[idx]


def assemble(problem: BoundaryProblem, grid: Grid):
    """Dense collocation system (matrix, rhs) for the given problem."""
    t = grid.nodes
    A, B = kernel_matrices(problem, t)
    alpha = _weight_matrix(grid) * A + grid.h * B
    matrix = np.eye(grid.node_count, dtype=complex) - alpha
    rhs = np.asarray(rhs_vector(problem, t), dtype=complex)
    return matrix, rhs


def solve_system(matrix: np.ndarray, rhs: np.ndarray):
    """Direct dense solve with a factor-based condition estimate and one step
    of iterative refinement.  Returns (values, residual_norm, cond_estimate)."""
    matrix = np.ascontiguousarray(matrix, dtype=complex)
    rhs = np.asarray(rhs, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise SolverError("system matrix must be square")
    if matrix.shape[0] != rhs.shape[0]:
        raise SolverError("matrix/right-hand side size mismatch")
    anorm = np.linalg.norm(matrix, 1)
    try:
        lu, piv = sla.lu_factor(matrix)
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise SolverError(f"factorization failed: {exc}") from exc
    rcond, info = _lapack.zgecon(lu, anorm, norm="1")
    if info != 0 or not np.isfinite(rcond) or rcond <= 0:
        raise SolverError("singular collocation matrix")
    cond = 1.0 / rcond
    if cond > _COND_LIMIT:
        raise SolverError(f"collocation matrix too ill-conditioned (est {cond:.3e})")
    x = sla.lu_solve((lu, piv), rhs)
    x = x + sla.lu_solve((lu, piv), rhs - matrix @ x)
    residual = float(np.abs(matrix @ x - rhs).max())
    if residual > _RESIDUAL_LIMIT * max(1.0, float(np.abs(rhs).max())):
        raise SolverError(f"solve residual {residual:.3e} above tolerance")
    return x, residual, cond


def solve(problem: BoundaryProblem, grid: Grid) -> DensitySolution:
    """Assemble and solve; returns the nodal density with solve diagnostics."""
    matrix, rhs = assemble(problem, grid)
    values, residual, cond = solve_system(matrix, rhs)
    return DensitySolution(grid=grid, values=values, problem_kind=problem.kind,
                           residual_norm=residual, condition_estimate=cond)
