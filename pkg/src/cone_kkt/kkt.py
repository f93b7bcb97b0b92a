"""Certificate residuals, the accept/reject verdict, and the sampled saddle check.

A candidate pair (x0, z0) is measured against five first-order conditions:

    stationarity             I'(x0) + A.T z0 in dual(K)
    complementarity          <I'(x0) + A.T z0, x0> = 0
    primal feasibility       b - A x0 in P  and  x0 in K
    dual feasibility         z0 in dual(P)
    complementary slackness  <z0, A x0 - b> = 0

All residuals are Euclidean distances or absolute pairings; the verdict is
the conjunction of per-residual tolerance tests with one shared tolerance.
For convex problems with these polyhedral cones, passing all five certifies
optimality of x0; the sampled saddle check can only refute, never prove.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import cones
from .cones import ConeSpec
from .errors import DimensionMismatchError
from .problem import Certificate, ProblemSpec, gradient, objective_value

CONDITION_NAMES = (
    "stationarity",
    "complementarity",
    "primal_feasibility",
    "dual_feasibility",
    "complementary_slackness",
)


@dataclass(frozen=True)
class KktResiduals:
    r_stat: float
    r_comp: float
    r_pfeas: float
    r_dfeas: float
    r_slack: float

    def __post_init__(self):
        for name, val in self.as_dict().items():
            if not np.isfinite(val) or val < 0:
                raise ValueError(f"residual {name} must be finite and >= 0, got {val}")

    def as_dict(self) -> dict:
        return {
            "stationarity": self.r_stat,
            "complementarity": self.r_comp,
            "primal_feasibility": self.r_pfeas,
            "dual_feasibility": self.r_dfeas,
            "complementary_slackness": self.r_slack,
        }

    def max_residual(self) -> float:
        return max(self.r_stat, self.r_comp, self.r_pfeas, self.r_dfeas, self.r_slack)


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    residuals: KktResiduals
    tol: float
    failures: tuple  # (condition name, residual) pairs, empty when accepted


@dataclass(frozen=True)
class SaddleReport:
    samples: int
    max_left_violation: float   # largest L(x0, z) - L(x0, z0) over sampled z
    max_right_violation: float  # largest L(x0, z0) - L(x, z0) over sampled x
    worst_witnesses: tuple      # up to 3 ("x"|"z", point, violation), worst first


def _check_cert_dims(prob: ProblemSpec, cert: Certificate):
    if cert.x0.shape[0] != prob.dim_x:
        raise DimensionMismatchError("certificate x0", prob.dim_x, cert.x0.shape[0])
    if cert.z0.shape[0] != prob.dim_y:
        raise DimensionMismatchError("certificate z0", prob.dim_y, cert.z0.shape[0])


def kkt_residuals(prob: ProblemSpec, cert: Certificate) -> KktResiduals:
    """Compute the five residuals of the candidate pair."""
    _check_cert_dims(prob, cert)
    x, z = cert.x0, cert.z0
    A = prob.A.entries
    g = gradient(prob.objective, x) + A.T @ z
    slack = prob.b - A @ x
    return KktResiduals(
        r_stat=cones.distance(cones.dual(prob.K), g),
        r_comp=abs(float(g @ x)),
        r_pfeas=cones.distance(prob.P, slack) + cones.distance(prob.K, x),
        r_dfeas=cones.distance(cones.dual(prob.P), z),
        r_slack=abs(float(z @ (A @ x - prob.b))),
    )


def verify_certificate(prob: ProblemSpec, cert: Certificate, tol: float = 1e-6) -> Verdict:
    """Accept iff every residual is <= tol; otherwise name each failed condition."""
    if tol <= 0:
        raise ValueError(f"tolerance must be > 0, got {tol}")
    res = kkt_residuals(prob, cert)
    values = (res.r_stat, res.r_comp, res.r_pfeas, res.r_dfeas, res.r_slack)
    failures = tuple(
        (name, val) for name, val in zip(CONDITION_NAMES, values) if val > tol
    )
    return Verdict(accepted=not failures, residuals=res, tol=tol, failures=failures)


def check_saddle(prob: ProblemSpec, cert: Certificate, n_samples: int = 1000,
                 seed: int = 0, tol: float = 1e-6,
                 solver_solution: Optional[np.ndarray] = None) -> SaddleReport:
    """Probe the saddle inequality L(x0, z) <= L(x0, z0) <= L(x, z0) by sampling.

    The candidate pair is first projected onto K x dual(P) (the domain on
    which the inequality is defined; dual-infeasibility of the raw pair is
    the stationarity/dual residuals' business, not this check's). Sampled
    points are cone projections of seeded Gaussians, plus deterministic
    extremes: x in {x0, 0, solver solution}, z in {z0, 0}. Pass
    ``solver_solution`` to skip the internal solve that otherwise provides
    the third x-sample.
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    _check_cert_dims(prob, cert)

    Pdual = cones.dual(prob.P)
    x0 = cones.project(prob.K, cert.x0)
    z0 = cones.project(Pdual, cert.z0)

    if solver_solution is None:
        from .solver import SolverOptions, solve_saddle  # deferred: avoids an import cycle

        sol_cert, trace = solve_saddle(prob, SolverOptions(seed=seed))
        solver_x = sol_cert.x0 if trace.converged else None
    else:
        solver_x = np.asarray(solver_solution, dtype=float)

    rng = np.random.default_rng(seed)
    xs = [cones.project(prob.K, row) for row in rng.standard_normal((n_samples, prob.dim_x))]
    zs = [cones.project(Pdual, row) for row in rng.standard_normal((n_samples, prob.dim_y))]
    xs += [x0, np.zeros(prob.dim_x)]
    if solver_x is not None:
        xs.append(cones.project(prob.K, solver_x))
    zs += [z0, np.zeros(prob.dim_y)]

    A = prob.A.entries
    slack0 = A @ x0 - prob.b
    lag0 = objective_value(prob.objective, x0) + float(z0 @ slack0)

    X = np.asarray(xs)
    Z = np.asarray(zs)
    # L(x0, z) for all sampled z, and L(x, z0) for all sampled x, vectorized
    left_vals = objective_value(prob.objective, x0) + Z @ slack0
    obj_x = 0.5 * np.einsum("ij,ij->i", X @ prob.objective.Q, X) + X @ prob.objective.c + prob.objective.d
    right_vals = obj_x + (X @ A.T - prob.b) @ z0

    left_viol = np.maximum(left_vals - lag0, 0.0)
    right_viol = np.maximum(lag0 - right_vals, 0.0)

    witnesses = []
    for i in np.argsort(-left_viol)[:3]:
        if left_viol[i] > tol:
            witnesses.append(("z", Z[i].copy(), float(left_viol[i])))
    for i in np.argsort(-right_viol)[:3]:
        if right_viol[i] > tol:
            witnesses.append(("x", X[i].copy(), float(right_viol[i])))
    witnesses.sort(key=lambda w: -w[2])

    return SaddleReport(
        samples=n_samples,
        max_left_violation=float(np.max(left_viol)),
        max_right_violation=float(np.max(right_viol)),
        worst_witnesses=tuple(witnesses[:3]),
    )
