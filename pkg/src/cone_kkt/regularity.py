"""Regularity probes for the constraint system  b - A x in P,  x in K.

Two regularity notions are probed:

* strong simultaneity — the system stays solvable for every right-hand side
  in a p-norm ball of radius eps0 around b. ``probe_strong_simultaneity``
  estimates eps0 from below-the-boundary by bisecting, per unit direction z,
  the largest step lambda with b - lambda z still feasible; eps_hat is the
  minimum over the probed directions. Finitely many directions cannot
  certify a full ball, so eps_hat is an estimate, reported as such.

* the Slater condition — some x in K puts b - A x in the interior of P.
  Unusable whenever P has a coordinate pinned to zero (empty interior);
  strong simultaneity can still hold there, which is the whole point of
  probing both. When int P is nonempty the two conditions are equivalent,
  and ``check_equivalence`` cross-checks the probes against that fact.

``slack_witness`` turns a positive eps_hat into the constructive guarantee
behind the equivalence: for any nonzero z* in dual(P) it produces a feasible
x whose slack pairs with z* at least eps_hat * ||z*|| (up to probe slop).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import cones, spaces
from .errors import Phase1AmbiguousError, ProbeConsistencyError
from .problem import ProblemSpec
from .solver import FEASIBLE_TOL, INFEASIBLE_FACTOR, SolverOptions, phase1
from .spaces import as_coords

SLATER_MARGIN_TOL = 1e-6
DEFAULT_RANDOM_DIRECTIONS = 64

# Probe-side phase-1 budget. Feasibility witnesses can sit far from the
# origin (norms in the hundreds at desk scale), and the projected-gradient
# descent crawls along nearly flat valleys on the way there; the compiled
# kernel makes the larger budget cheap.
PROBE_OPTIONS = SolverOptions(max_iters=1_000_000)


@dataclass(frozen=True)
class DirectionProbe:
    direction: np.ndarray   # unit vector in the Y p-norm
    lam: float              # largest step found feasible along -direction
    ok: bool                # False when phase-1 could not classify some step


@dataclass(frozen=True)
class EpsilonReport:
    eps_hat: float
    directions_probed: int
    per_direction: tuple    # DirectionProbe entries, basis directions first
    norm_p: float
    bisect_tol: float
    lambda_max: float
    warnings: tuple

    def describe(self) -> str:
        return (f"eps_hat = {self.eps_hat:.6g} estimated over "
                f"{self.directions_probed} directions (p = {self.norm_p:g}, "
                f"bisection tolerance {self.bisect_tol:.3g})")


@dataclass(frozen=True)
class SlaterReport:
    holds: bool
    witness: Optional[np.ndarray]
    margin: Optional[float]  # min slack over the nonneg coordinates of P at the witness
    reason: Optional[str]    # set when holds is False


@dataclass(frozen=True)
class EquivalenceReport:
    applicable: bool         # int P nonempty, so the equivalence is in force
    slater_holds: bool
    eps_positive: bool
    consistent: bool         # slater_holds == eps_positive whenever applicable
    epsilon: EpsilonReport
    slater: SlaterReport


def default_lambda_max(prob: ProblemSpec) -> float:
    return 4.0 * (1.0 + spaces.norm(prob.b, prob.p_norm_y))


def default_bisect_tol(prob: ProblemSpec) -> float:
    return 1e-4 * (1.0 + spaces.norm(prob.b, prob.p_norm_y))


def feasible(prob: ProblemSpec, b_bar, opts: SolverOptions = PROBE_OPTIONS,
             x0=None) -> Optional[np.ndarray]:
    """Return some x in K with b_bar - A x in P (defect <= 1e-8), or None.

    None means the phase-1 descent converged to a defect clearly above the
    infeasibility threshold. An unclassifiable outcome (no convergence, or a
    converged defect inside the ambiguous band) raises Phase1AmbiguousError
    rather than guessing.
    """
    b_bar = as_coords(b_bar)
    res = phase1(prob, b_bar, opts, x0=x0)
    if res.residual <= FEASIBLE_TOL:
        return res.x
    if not res.converged:
        raise Phase1AmbiguousError(
            f"phase-1 did not converge within {opts.max_iters} iterations "
            f"(defect {res.residual:.3e})")
    threshold = INFEASIBLE_FACTOR * (1.0 + float(np.linalg.norm(b_bar)))
    if res.residual > threshold:
        return None
    raise Phase1AmbiguousError(
        f"phase-1 converged to defect {res.residual:.3e}, between the feasible "
        f"tolerance {FEASIBLE_TOL:.1e} and the infeasibility threshold {threshold:.3e}")


class _FeasibilityOracle:
    """Bisection predicate with warm starts chained along one direction."""

    def __init__(self, prob: ProblemSpec, opts: SolverOptions):
        self.prob = prob
        self.opts = opts
        self.warm = None

    def __call__(self, b_bar) -> bool:
        res = phase1(self.prob, b_bar, self.opts, x0=self.warm)
        if not res.converged and res.residual > FEASIBLE_TOL:
            raise Phase1AmbiguousError(
                f"phase-1 did not converge (defect {res.residual:.3e})")
        if res.residual <= FEASIBLE_TOL:
            self.warm = res.x
            return True
        return False


def _max_feasible_step(prob: ProblemSpec, direction: np.ndarray, lambda_max: float,
                       bisect_tol: float, opts: SolverOptions) -> float:
    """Largest lambda in [0, lambda_max] with b - lambda*direction feasible.

    The feasible lambdas form an interval starting at 0 (the constraint cone
    A K + P is convex), so bisection applies; the returned value was itself
    verified feasible, making it a sound lower bound. The step grows
    geometrically from below before bisecting: every probe then warm-starts
    near the previous feasible point, which keeps the phase-1 travel short
    even when feasibility at large steps needs a far-away witness.
    """
    is_feasible = _FeasibilityOracle(prob, opts)
    b = prob.b
    if not is_feasible(b):
        return 0.0
    lo, hi = 0.0, None
    lam = bisect_tol
    while lam < lambda_max:
        if is_feasible(b - lam * direction):
            lo = lam
            lam *= 2.0
        else:
            hi = lam
            break
    if hi is None:
        if is_feasible(b - lambda_max * direction):
            return lambda_max
        hi = lambda_max
    while hi - lo > bisect_tol:
        mid = 0.5 * (lo + hi)
        if is_feasible(b - mid * direction):
            lo = mid
        else:
            hi = mid
    return lo


def _unit(v: np.ndarray, p: float) -> np.ndarray:
    return v / spaces.norm(v, p)


def probe_strong_simultaneity(prob: ProblemSpec, n_random_dirs: int = DEFAULT_RANDOM_DIRECTIONS,
                              seed: int = 0, lambda_max: Optional[float] = None,
                              bisect_tol: Optional[float] = None,
                              opts: SolverOptions = PROBE_OPTIONS) -> EpsilonReport:
    """Estimate the strong-simultaneity radius eps0 over sampled directions.

    Probes the 2*dim_y signed basis directions (exact binders for coordinate
    cones) plus ``n_random_dirs`` seeded unit directions, bisecting the
    largest feasible step along each. Directions whose phase-1 searches
    cannot be classified are flagged and excluded from the minimum, with a
    warning in the report.
    """
    if n_random_dirs < 0:
        raise ValueError(f"n_random_dirs must be >= 0, got {n_random_dirs}")
    if lambda_max is None:
        lambda_max = default_lambda_max(prob)
    if bisect_tol is None:
        bisect_tol = default_bisect_tol(prob)
    if lambda_max <= 0:
        raise ValueError(f"lambda_max must be > 0, got {lambda_max}")

    m, p = prob.dim_y, prob.p_norm_y
    directions = []
    for j in range(m):
        e = np.zeros(m)
        e[j] = 1.0
        directions.append(e)
        directions.append(-e)
    rng = np.random.default_rng(seed)
    count = 0
    while count < n_random_dirs:
        v = rng.standard_normal(m)
        if spaces.norm(v, p) < 1e-12:
            continue
        directions.append(_unit(v, p))
        count += 1

    probes = []
    warnings = []
    for k, z in enumerate(directions):
        try:
            lam = _max_feasible_step(prob, z, lambda_max, bisect_tol, opts)
            probes.append(DirectionProbe(direction=z, lam=lam, ok=True))
        except Phase1AmbiguousError as exc:
            probes.append(DirectionProbe(direction=z, lam=float("nan"), ok=False))
            warnings.append(f"direction {k} excluded from the minimum: {exc}")

    good = [pr.lam for pr in probes if pr.ok]
    eps_hat = min(good) if good else 0.0
    if not good:
        warnings.append("no direction could be classified; eps_hat reported as 0")
    return EpsilonReport(
        eps_hat=float(eps_hat),
        directions_probed=len(directions),
        per_direction=tuple(probes),
        norm_p=p,
        bisect_tol=float(bisect_tol),
        lambda_max=float(lambda_max),
        warnings=tuple(warnings),
    )


def probe_slater(prob: ProblemSpec, opts: SolverOptions = PROBE_OPTIONS,
                 lambda_max: Optional[float] = None,
                 bisect_tol: Optional[float] = None) -> SlaterReport:
    """Search for x in K placing b - A x strictly inside P.

    Fails immediately when P has empty interior. Otherwise maximizes the
    uniform margin t on the nonneg coordinates of P (bisection on t, reusing
    the phase-1 engine with b shifted by t on those coordinates) and reports
    the witness's actual margin.
    """
    if not cones.has_interior(prob.P):
        return SlaterReport(holds=False, witness=None, margin=None, reason="empty interior")
    if lambda_max is None:
        lambda_max = default_lambda_max(prob)
    if bisect_tol is None:
        bisect_tol = default_bisect_tol(prob)

    nonneg = np.array([t == cones.NONNEG for t in prob.P.coords])
    x_at_b = feasible(prob, prob.b, opts)
    if x_at_b is None:
        return SlaterReport(holds=False, witness=None, margin=None,
                            reason="the system is infeasible at b itself")
    if not nonneg.any():  # P entirely free: every feasible point is interior
        return SlaterReport(holds=True, witness=x_at_b, margin=float("inf"), reason=None)

    e_s = nonneg.astype(float)
    best_t = _max_feasible_step(prob, e_s, lambda_max, bisect_tol, opts)
    witness = feasible(prob, prob.b - best_t * e_s, opts)
    if witness is None:  # best_t was verified feasible; re-solve cannot fail
        raise ProbeConsistencyError("margin step verified feasible but no witness recovered")
    slack = prob.b - prob.A.entries @ witness
    margin = float(np.min(slack[nonneg]))
    if margin > SLATER_MARGIN_TOL:
        return SlaterReport(holds=True, witness=witness, margin=margin, reason=None)
    return SlaterReport(holds=False, witness=None, margin=margin,
                        reason=f"best margin {margin:.3e} is not above {SLATER_MARGIN_TOL:.1e}")


def slack_witness(prob: ProblemSpec, zstar, eps_report: EpsilonReport,
                  opts: SolverOptions = PROBE_OPTIONS):
    """Feasible x whose slack pairs positively with the functional zstar.

    For zstar in dual(P), zstar != 0, and a positive eps_hat, returns
    ``(x, <zstar, b - A x>)`` with the pairing at least roughly
    eps_hat * ||zstar||_2: the slack dominates eps_hat times the unit vector
    along zstar, and dual-cone members pair nonnegatively with the rest.
    """
    zs = as_coords(zstar)
    nrm = float(np.linalg.norm(zs))
    if nrm <= 0.0:
        raise ValueError("zstar must be nonzero")
    if cones.distance(cones.dual(prob.P), zs) > 1e-8:
        raise ValueError("zstar must lie in dual(P) (within 1e-8)")
    if eps_report.eps_hat <= 0.0:
        raise ValueError("eps_hat must be positive to construct a witness")

    z0 = zs / nrm  # maximizer of <zstar, z> over the Euclidean unit ball
    lam = eps_report.eps_hat * (1.0 - 1e-6)
    x = feasible(prob, prob.b - lam * z0, opts)
    if x is None:
        raise ProbeConsistencyError(
            f"b - {lam:.6g} * z0 is infeasible: eps_hat {eps_report.eps_hat:.6g} "
            f"overestimates the true radius along this direction")
    pairing_value = float(zs @ (prob.b - prob.A.entries @ x))
    return x, pairing_value


def check_equivalence(prob: ProblemSpec, seed: int = 0,
                      n_random_dirs: int = DEFAULT_RANDOM_DIRECTIONS,
                      opts: SolverOptions = PROBE_OPTIONS) -> EquivalenceReport:
    """Run both probes and compare them where the equivalence applies.

    eps_positive uses a threshold of twice the bisection tolerance: anything
    below that is indistinguishable from zero at the probe's resolution.
    """
    eps = probe_strong_simultaneity(prob, n_random_dirs=n_random_dirs, seed=seed, opts=opts)
    slater = probe_slater(prob, opts=opts)
    applicable = cones.has_interior(prob.P)
    eps_positive = eps.eps_hat > 2.0 * eps.bisect_tol
    consistent = (slater.holds == eps_positive) if applicable else True
    return EquivalenceReport(
        applicable=applicable,
        slater_holds=slater.holds,
        eps_positive=eps_positive,
        consistent=consistent,
        epsilon=eps,
        slater=slater,
    )
