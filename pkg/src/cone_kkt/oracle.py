"""Exact brute-force reference for tiny problems.

``oracle_solve`` enumerates every active set of the inequality constraints,
solves each equality-constrained stationarity system by least squares, and
keeps the best primal-feasible candidate: exact for convex quadratics at
desk scale, and entirely independent of the iterative solver. The
multiplier is recovered afterwards as the minimum-norm point of the
first-order conditions at the optimum, itself computed by the same
enumeration applied to a transformed problem.

``oracle_eps0`` cross-checks the sampled strong-simultaneity probe with a
dense directional grid, using exact (enumerated) feasibility tests.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import cones, regularity
from .cones import ConeSpec
from .errors import EnumerationGuardError, InfeasibleProblemError
from .problem import ProblemSpec, objective_value

ENUMERATION_GUARD = 14   # max dim_x + dim_y accepted by oracle_solve
SYSTEM_TOL = 1e-8        # consistency test for a stationarity system
CANDIDATE_FEAS_TOL = 1e-9
ACTIVE_TOL = 1e-8
VALUE_TIE_TOL = 1e-12


@dataclass(frozen=True)
class OracleSolution:
    x_opt: np.ndarray
    value: float
    active_set: tuple        # ("x", i) / ("slack", j) labels of binding inequalities
    z_recovered: np.ndarray  # minimum-norm multiplier at x_opt
    unique_multiplier: bool


def _best_active_set_point(Q, c, k_tags, A, b, p_tags):
    """Minimize 0.5 x'Qx + c'x over {x in K, b - A x in P} by enumeration.

    Returns ``(x, value_without_d, active_labels)`` or None when no candidate
    is feasible. Zero-tagged coordinates contribute permanent equality rows;
    free-tagged ones contribute nothing.
    """
    n = len(k_tags)
    rows_always = []
    rhs_always = []
    for i, t in enumerate(k_tags):
        if t == cones.ZERO:
            e = np.zeros(n)
            e[i] = 1.0
            rows_always.append(e)
            rhs_always.append(0.0)
    for j, t in enumerate(p_tags):
        if t == cones.ZERO:
            rows_always.append(A[j])
            rhs_always.append(b[j])

    ineqs = [("x", i) for i, t in enumerate(k_tags) if t == cones.NONNEG]
    ineqs += [("slack", j) for j, t in enumerate(p_tags) if t == cones.NONNEG]

    K = ConeSpec(tuple(k_tags))
    P = ConeSpec(tuple(p_tags))
    best = None  # (value, active_labels, x)
    for size in range(len(ineqs) + 1):
        for subset in itertools.combinations(ineqs, size):
            rows = list(rows_always)
            rhs = list(rhs_always)
            for kind, idx in subset:
                if kind == "x":
                    e = np.zeros(n)
                    e[idx] = 1.0
                    rows.append(e)
                    rhs.append(0.0)
                else:
                    rows.append(A[idx])
                    rhs.append(b[idx])
            k = len(rows)
            M = np.zeros((n + k, n + k))
            M[:n, :n] = Q
            if k:
                E = np.asarray(rows)
                M[:n, n:] = E.T
                M[n:, :n] = E
            target = np.concatenate([-c, np.asarray(rhs)]) if k else -c
            sol = np.linalg.lstsq(M, target, rcond=None)[0]
            if np.max(np.abs(M @ sol - target)) > SYSTEM_TOL * (1.0 + np.max(np.abs(target))):
                continue  # no stationary point on this face (or unbounded below along it)
            x = sol[:n]
            if not contains_point(K, x) or not contains_point(P, b - A @ x):
                continue
            value = float(0.5 * (x @ (Q @ x)) + c @ x)
            if best is None or value < best[0] - VALUE_TIE_TOL or (
                    abs(value - best[0]) <= VALUE_TIE_TOL and subset < best[1]):
                best = (value, subset, x)
    return best


def contains_point(C: ConeSpec, v, tol: float = CANDIDATE_FEAS_TOL) -> bool:
    return cones.contains(C, v, tol)


def _recover_multiplier(prob: ProblemSpec, x_opt: np.ndarray):
    """Minimum-norm z meeting the first-order conditions at x_opt.

    With the active sets fixed by x_opt, the conditions become linear in z:
    conic sign conditions on z itself plus sign/equality conditions on
    g + A.T z, where g is the objective gradient. That is again a (strictly
    convex) cone-constrained quadratic in z, solved by the same enumeration.
    """
    A = prob.A.entries
    n, m = prob.dim_x, prob.dim_y
    g = prob.objective.Q @ x_opt + prob.objective.c
    slack = prob.b - A @ x_opt

    z_tags = []
    for j, t in enumerate(prob.P.coords):
        if t == cones.ZERO:
            z_tags.append(cones.FREE)
        elif t == cones.FREE:
            z_tags.append(cones.ZERO)
        elif slack[j] > ACTIVE_TOL:   # strictly slack row: complementarity pins z_j = 0
            z_tags.append(cones.ZERO)
        else:
            z_tags.append(cones.NONNEG)

    u_tags = []
    for i, t in enumerate(prob.K.coords):
        if t == cones.ZERO:
            u_tags.append(cones.FREE)
        elif t == cones.FREE:
            u_tags.append(cones.ZERO)
        elif x_opt[i] > ACTIVE_TOL:   # interior coordinate: stationarity pins u_i = 0
            u_tags.append(cones.ZERO)
        else:
            u_tags.append(cones.NONNEG)

    # u = g + A.T z written as b' - A' z in P' with b' = g, A' = -A.T
    best = _best_active_set_point(
        np.eye(m), np.zeros(m), tuple(z_tags), -A.T, g, tuple(u_tags))
    if best is None:
        raise InfeasibleProblemError(
            "no multiplier satisfies the first-order conditions at the oracle optimum")
    z = best[2]

    eq_rows = [np.eye(m)[j] for j, t in enumerate(z_tags) if t == cones.ZERO]
    eq_rows += [A.T[i] for i, t in enumerate(u_tags) if t == cones.ZERO]
    if eq_rows:
        rank = int(np.linalg.matrix_rank(np.asarray(eq_rows), tol=1e-8))
    else:
        rank = 0
    return z, rank == m


def oracle_solve(prob: ProblemSpec) -> OracleSolution:
    """Exact solution of a desk-scale instance by active-set enumeration."""
    if prob.dim_x + prob.dim_y > ENUMERATION_GUARD:
        raise EnumerationGuardError(
            f"enumeration guard: dim_x + dim_y = {prob.dim_x + prob.dim_y} "
            f"exceeds {ENUMERATION_GUARD}")
    best = _best_active_set_point(
        prob.objective.Q, prob.objective.c, prob.K.coords,
        prob.A.entries, prob.b, prob.P.coords)
    if best is None:
        raise InfeasibleProblemError("no active set yields a feasible candidate")
    value, active, x_opt = best
    z, unique = _recover_multiplier(prob, x_opt)
    return OracleSolution(
        x_opt=x_opt,
        value=value + prob.objective.d,
        active_set=tuple(active),
        z_recovered=z,
        unique_multiplier=unique,
    )


class _ExactFeasibility:
    """Exact test of "exists x in K with b_bar - A x in P", reused across probes.

    Minimizes the squared defect || b_bar - A x - s ||^2 over (x, s) in K x P
    by active-set enumeration. The stationarity matrix of each active subset
    does not depend on b_bar, so its pseudo-inverse is precomputed once.
    Candidates that leave their cones are projected back before measuring the
    defect; a projected point is feasible, so its defect stays a sound upper
    bound on the true minimum distance.
    """

    def __init__(self, prob: ProblemSpec):
        A = prob.A.entries
        n, m = prob.dim_x, prob.dim_y
        self.A = A
        self.n, self.m = n, m
        self.w_cone = ConeSpec(tuple(prob.K.coords) + tuple(prob.P.coords))
        d = n + m
        Q = np.zeros((d, d))
        Q[:n, :n] = A.T @ A
        Q[:n, n:] = A.T
        Q[n:, :n] = A
        Q[n:, n:] = np.eye(m)

        always = [i for i, t in enumerate(self.w_cone.coords) if t == cones.ZERO]
        ineq = [i for i, t in enumerate(self.w_cone.coords) if t == cones.NONNEG]
        self.systems = []
        for size in range(len(ineq) + 1):
            for subset in itertools.combinations(ineq, size):
                pinned = always + list(subset)
                k = len(pinned)
                M = np.zeros((d + k, d + k))
                M[:d, :d] = Q
                for r, i in enumerate(pinned):
                    M[i, d + r] = 1.0
                    M[d + r, i] = 1.0
                self.systems.append((np.linalg.pinv(M), M, d + k))

    def distance(self, b_bar: np.ndarray) -> float:
        """Exact min over x in K of dist(P, b_bar - A x)."""
        n, m = self.n, self.m
        grad_const = np.concatenate([self.A.T @ b_bar, b_bar])
        best = math.inf
        for pinv, M, size in self.systems:
            rhs = np.zeros(size)
            rhs[:n + m] = grad_const
            sol = pinv @ rhs
            w = sol[:n + m]
            if np.max(np.abs(M @ sol - rhs)) <= SYSTEM_TOL * (1.0 + np.max(np.abs(rhs))):
                candidates = (w, cones.project(self.w_cone, w))
            else:
                candidates = (cones.project(self.w_cone, w),)
            for cand in candidates:
                if not cones.contains(self.w_cone, cand, CANDIDATE_FEAS_TOL):
                    continue
                defect = b_bar - self.A @ cand[:n] - cand[n:]
                best = min(best, float(np.linalg.norm(defect)))
        return best

    def feasible(self, b_bar: np.ndarray) -> bool:
        return self.distance(b_bar) <= 1e-8 * (1.0 + float(np.linalg.norm(b_bar)))


def _grid_directions(m: int, n_grid: int, p: float):
    if m == 1:
        return [np.array([1.0]), np.array([-1.0])]
    if m == 2:
        dirs = []
        for k in range(n_grid):
            theta = 2.0 * math.pi * k / n_grid
            v = np.array([math.cos(theta), math.sin(theta)])
            dirs.append(v / _pnorm(v, p))
        return dirs
    if m == 3:
        golden = math.pi * (3.0 - math.sqrt(5.0))
        dirs = []
        for i in range(n_grid):
            y = 1.0 - 2.0 * (i + 0.5) / n_grid
            r = math.sqrt(max(0.0, 1.0 - y * y))
            phi = golden * i
            v = np.array([r * math.cos(phi), y, r * math.sin(phi)])
            dirs.append(v / _pnorm(v, p))
        return dirs
    raise EnumerationGuardError(f"dense eps0 grid supports dim_y <= 3, got {m}")


def _pnorm(v, p):
    if math.isinf(p):
        return float(np.max(np.abs(v)))
    return float(np.linalg.norm(v, ord=p))


def oracle_eps0(prob: ProblemSpec, n_grid: int = 360) -> float:
    """Dense-grid estimate of the strong-simultaneity radius.

    For each of ``n_grid`` unit directions (uniform angular grid on the
    boundary of the Y p-norm ball) the largest feasible step is bisected with
    the exact enumeration-based feasibility test; the minimum over the grid
    is returned. Confined to dim_y <= 3, where such grids are dense enough
    to mean something.
    """
    if n_grid < 8:
        raise ValueError(f"n_grid must be >= 8, got {n_grid}")
    exact = _ExactFeasibility(prob)
    lambda_max = regularity.default_lambda_max(prob)
    bisect_tol = regularity.default_bisect_tol(prob)
    b = prob.b

    if not exact.feasible(b):
        return 0.0
    best = math.inf
    for z in _grid_directions(prob.dim_y, n_grid, prob.p_norm_y):
        if exact.feasible(b - lambda_max * z):
            best = min(best, lambda_max)
            continue
        lo, hi = 0.0, lambda_max
        while hi - lo > bisect_tol:
            mid = 0.5 * (lo + hi)
            if exact.feasible(b - mid * z):
                lo = mid
            else:
                hi = mid
        best = min(best, lo)
    return float(best)
