"""Cone-constrained convex programming toolkit.

Solves, certifies, and probes problems

    minimize   I(x)        (convex quadratic)
    subject to b - A x in P,   x in K

where the per-coordinate ordering cones K and P may have empty interior.
The package provides a projected extragradient saddle-point solver, exact
first-order (KKT) certificate checking, an independent brute-force oracle,
and regularity probes (strong-simultaneity radius estimation and the Slater
test, with their equivalence check where it applies).
"""

from ._kernels import backend
from .cones import FREE, NONNEG, ZERO, ConeSpec, contains, distance, dual, has_interior, project
from .kkt import (
    KktResiduals,
    SaddleReport,
    Verdict,
    check_saddle,
    kkt_residuals,
    verify_certificate,
)
from .oracle import OracleSolution, oracle_eps0, oracle_solve
from .problem import (
    Certificate,
    ProblemSpec,
    QuadraticFunctional,
    gradient,
    lagrangian,
    lagrangian_grad_x,
    objective_value,
    validate,
)
from .regularity import (
    EpsilonReport,
    EquivalenceReport,
    SlaterReport,
    check_equivalence,
    feasible,
    probe_slater,
    probe_strong_simultaneity,
    slack_witness,
)
from .solver import Phase1Result, SolverOptions, SolveTrace, phase1, solve_saddle
from .spaces import LinearMap, SpaceSpec, Vector, adjoint_apply, apply, norm, pairing

__version__ = "0.1.0"

__all__ = [
    "backend",
    "ConeSpec", "NONNEG", "ZERO", "FREE",
    "contains", "dual", "project", "distance", "has_interior",
    "SpaceSpec", "Vector", "LinearMap", "apply", "adjoint_apply", "pairing", "norm",
    "QuadraticFunctional", "ProblemSpec", "Certificate",
    "validate", "objective_value", "gradient", "lagrangian", "lagrangian_grad_x",
    "KktResiduals", "Verdict", "SaddleReport",
    "kkt_residuals", "verify_certificate", "check_saddle",
    "SolverOptions", "SolveTrace", "Phase1Result", "solve_saddle", "phase1",
    "EpsilonReport", "SlaterReport", "EquivalenceReport",
    "feasible", "probe_strong_simultaneity", "probe_slater",
    "slack_witness", "check_equivalence",
    "OracleSolution", "oracle_solve", "oracle_eps0",
    "__version__",
]
