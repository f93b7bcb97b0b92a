"""Saddle-point solver and the phase-1 feasibility engine.

``solve_saddle`` runs a projected primal-dual extragradient iteration on the
Lagrange function over K x dual(P): a predictor step evaluates the gradients,
a corrector step re-applies them from the predicted midpoint. Plain
gradient descent-ascent can cycle on the bilinear coupling term; the two-step
scheme converges for convex-concave problems at a step below the reciprocal
of the gradient's Lipschitz constant.

``phase1`` minimizes half the squared distance of b_bar - A x from P over
x in K by projected gradient descent; its converged residual is the
feasibility verdict used by the regularity probes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import cones
from ._kernels import extragradient_loop, phase1_loop
from .errors import DimensionMismatchError
from .kkt import KktResiduals
from .problem import Certificate, ProblemSpec
from .spaces import as_coords

POWER_ITER_STEPS = 50
FEASIBLE_TOL = 1e-8          # defect distance accepted as "feasible"
INFEASIBLE_FACTOR = 1e-6     # a converged defect above this * (1+||b_bar||) proves infeasible


@dataclass(frozen=True)
class SolverOptions:
    step_scale: float = 0.9
    max_iters: int = 200_000
    residual_tol: float = 1e-8
    seed: int = 0  # reserved for randomized restarts; the default start is deterministic

    def __post_init__(self):
        if not 0.0 < self.step_scale < 1.0:
            raise ValueError(f"step_scale must be in (0, 1), got {self.step_scale}")
        if self.residual_tol <= 0.0:
            raise ValueError(f"residual_tol must be > 0, got {self.residual_tol}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")


@dataclass(frozen=True)
class SolveTrace:
    iters: int
    final_residuals: KktResiduals
    converged: bool
    lagrangian_history: tuple  # (iteration, L value) pairs, downsampled


class Phase1Result(NamedTuple):
    x: np.ndarray
    residual: float
    iters: int
    converged: bool


def operator_norm(M: np.ndarray, steps: int = POWER_ITER_STEPS) -> float:
    """Largest singular value estimated by power iteration on M.T @ M.

    Deterministic ramp start; a plain ones vector can be orthogonal to the
    top singular vector on sign-structured matrices.
    """
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 0.0
    n = M.shape[1]
    v = np.arange(1.0, n + 1.0)
    v /= np.linalg.norm(v)
    for _ in range(steps):
        w = M.T @ (M @ v)
        nw = np.linalg.norm(w)
        if nw < 1e-300:
            return 0.0
        v = w / nw
    return float(np.linalg.norm(M @ v))


def _start_point(prob: ProblemSpec):
    x0 = cones.project(prob.K, np.zeros(prob.dim_x))
    z0 = np.zeros(prob.dim_y)
    return x0, z0


def solve_saddle(prob: ProblemSpec, opts: SolverOptions = SolverOptions()):
    """Find the saddle point of the Lagrange function over K x dual(P).

    The problem is assumed validated and feasible (pre-check with
    ``regularity.feasible`` if in doubt; infeasibility shows up as a
    persistent primal-feasibility residual). Returns ``(Certificate,
    SolveTrace)``; ``trace.converged`` is False when the iteration budget ran
    out first.
    """
    A = prob.A.entries
    Q = prob.objective.Q
    # Step below the reciprocal Lipschitz constant of the saddle gradient
    # (||Q|| from the objective block, ||A|| from the bilinear coupling).
    tau = opts.step_scale / (operator_norm(A) + operator_norm(Q) + 1.0)
    x0, z0 = _start_point(prob)
    x, z, iters, converged, res, hist_it, hist_val = extragradient_loop(
        Q, prob.objective.c, prob.objective.d, A, prob.b,
        prob.K.codes(), cones.dual(prob.K).codes(),
        prob.P.codes(), cones.dual(prob.P).codes(),
        x0, z0, tau, opts.max_iters, opts.residual_tol,
    )
    cert = Certificate(x0=x, z0=z)
    trace = SolveTrace(
        iters=int(iters),
        final_residuals=KktResiduals(*[float(r) for r in res]),
        converged=bool(converged),
        lagrangian_history=tuple(zip((int(i) for i in hist_it), (float(v) for v in hist_val))),
    )
    return cert, trace


def phase1(prob: ProblemSpec, b_bar, opts: SolverOptions = SolverOptions(),
           x0: Optional[np.ndarray] = None) -> Phase1Result:
    """Search for x in K with b_bar - A x in P.

    Returns the best point found, the final defect distance, the iteration
    count, and whether the descent converged (feasible point reached or
    iterates stationary at the minimum distance). ``x0`` warm-starts the
    descent; the default start is the projection of the origin onto K.
    """
    b_bar = as_coords(b_bar)
    if b_bar.shape[0] != prob.dim_y:
        raise DimensionMismatchError("phase1 right-hand side", prob.dim_y, b_bar.shape[0])
    A = prob.A.entries
    start = cones.project(prob.K, np.zeros(prob.dim_x)) if x0 is None \
        else cones.project(prob.K, as_coords(x0))

    norm_a = operator_norm(A)
    scale = 1.0 + float(np.linalg.norm(b_bar))
    feas_tol = 1e-10 * scale
    if norm_a < 1e-300:  # zero operator: the defect does not depend on x
        resid = cones.distance(prob.P, b_bar)
        return Phase1Result(start, resid, 0, True)

    tau = opts.step_scale / norm_a**2
    x, resid, iters, converged = phase1_loop(
        A, b_bar, prob.K.codes(), prob.P.codes(),
        start, tau, opts.max_iters, feas_tol, 1e-12,
    )
    return Phase1Result(x, float(resid), int(iters), bool(converged))
