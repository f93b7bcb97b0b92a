"""The optimization problem and its Lagrange function.

The problem is

    minimize   I(x) = 0.5 x'Qx + c'x + d
    subject to b - A x in P,   x in K

with K and P per-coordinate cones. The Lagrange function couples objective
and constraint violation:

    L(x, z) = I(x) + <z, A x - b>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import cones
from .cones import ConeSpec
from .errors import DimensionMismatchError, ValidationError
from .spaces import LinearMap, SpaceSpec, as_coords

SYMMETRY_TOL = 1e-10
EIGENVALUE_TOL = 1e-10


@dataclass(frozen=True)
class QuadraticFunctional:
    """Convex quadratic objective 0.5 x'Qx + c'x + d with gradient Qx + c."""

    Q: np.ndarray
    c: np.ndarray
    d: float = 0.0

    def __post_init__(self):
        Q = np.asarray(self.Q, dtype=float)
        c = as_coords(self.c)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise ValueError(f"Q must be square, got shape {Q.shape}")
        if Q.shape[0] != c.shape[0]:
            raise DimensionMismatchError("objective Q/c", Q.shape[0], c.shape[0])
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", float(self.d))

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    @staticmethod
    def zero(dim: int) -> "QuadraticFunctional":
        return QuadraticFunctional(np.zeros((dim, dim)), np.zeros(dim), 0.0)


@dataclass(frozen=True)
class ProblemSpec:
    """A validated cone-constrained problem instance."""

    objective: QuadraticFunctional
    A: LinearMap
    b: np.ndarray
    K: ConeSpec
    P: ConeSpec
    p_norm_y: float = 2.0
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "b", as_coords(self.b))
        object.__setattr__(self, "p_norm_y", float(self.p_norm_y))

    @property
    def dim_x(self) -> int:
        return self.A.cols

    @property
    def dim_y(self) -> int:
        return self.A.rows

    @property
    def space_x(self) -> SpaceSpec:
        return SpaceSpec(self.dim_x)

    @property
    def space_y(self) -> SpaceSpec:
        return SpaceSpec(self.dim_y, self.p_norm_y)


@dataclass(frozen=True)
class Certificate:
    """A candidate primal point and multiplier to be verified or reported."""

    x0: np.ndarray
    z0: np.ndarray

    def __post_init__(self):
        x0 = as_coords(self.x0)
        z0 = as_coords(self.z0)
        if not (np.all(np.isfinite(x0)) and np.all(np.isfinite(z0))):
            raise ValueError("certificate entries must be finite")
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "z0", z0)


def validate(raw: ProblemSpec) -> ProblemSpec:
    """Check every invariant of a problem; raise ValidationError listing all failures."""
    errs = []
    obj = raw.objective
    n, m = raw.dim_x, raw.dim_y
    if obj.dim != n:
        errs.append(f"objective dimension {obj.dim} does not match operator domain {n}")
    if raw.b.shape[0] != m:
        errs.append(f"right-hand side has length {raw.b.shape[0]}, operator codomain is {m}")
    if raw.K.dim != n:
        errs.append(f"cone K has dimension {raw.K.dim}, expected {n}")
    if raw.P.dim != m:
        errs.append(f"cone P has dimension {raw.P.dim}, expected {m}")
    if not np.all(np.isfinite(raw.b)):
        errs.append("right-hand side has non-finite entries")
    if not np.all(np.isfinite(obj.Q)) or not np.all(np.isfinite(obj.c)) or not math.isfinite(obj.d):
        errs.append("objective has non-finite entries")
    else:
        asym = float(np.max(np.abs(obj.Q - obj.Q.T))) if obj.Q.size else 0.0
        if asym > SYMMETRY_TOL:
            errs.append(f"Q is not symmetric (max asymmetry {asym:.3e})")
        else:
            lam_min = float(np.min(np.linalg.eigvalsh(0.5 * (obj.Q + obj.Q.T)))) if obj.Q.size else 0.0
            if lam_min < -EIGENVALUE_TOL:
                errs.append(f"Q is indefinite (smallest eigenvalue {lam_min:.3e})")
    if math.isnan(raw.p_norm_y) or raw.p_norm_y < 1.0:
        errs.append(f"p_norm_y must be >= 1 or inf, got {raw.p_norm_y}")
    if errs:
        raise ValidationError(errs)
    return raw


def objective_value(I: QuadraticFunctional, x) -> float:
    """Evaluate 0.5 x'Qx + c'x + d."""
    xc = as_coords(x)
    if xc.shape[0] != I.dim:
        raise DimensionMismatchError("objective_value", I.dim, xc.shape[0])
    return float(0.5 * (xc @ (I.Q @ xc)) + I.c @ xc + I.d)


def gradient(I: QuadraticFunctional, x) -> np.ndarray:
    """Gradient Qx + c of the objective."""
    xc = as_coords(x)
    if xc.shape[0] != I.dim:
        raise DimensionMismatchError("gradient", I.dim, xc.shape[0])
    return I.Q @ xc + I.c


def lagrangian(prob: ProblemSpec, x, z) -> float:
    """L(x, z) = I(x) + <z, A x - b>."""
    xc = as_coords(x)
    zc = as_coords(z)
    if xc.shape[0] != prob.dim_x:
        raise DimensionMismatchError("lagrangian: x", prob.dim_x, xc.shape[0])
    if zc.shape[0] != prob.dim_y:
        raise DimensionMismatchError("lagrangian: z", prob.dim_y, zc.shape[0])
    return objective_value(prob.objective, xc) + float(zc @ (prob.A.entries @ xc - prob.b))


def lagrangian_grad_x(prob: ProblemSpec, x, z) -> np.ndarray:
    """Partial gradient of L in x: I'(x) + A.T z."""
    xc = as_coords(x)
    zc = as_coords(z)
    if xc.shape[0] != prob.dim_x:
        raise DimensionMismatchError("lagrangian_grad_x: x", prob.dim_x, xc.shape[0])
    if zc.shape[0] != prob.dim_y:
        raise DimensionMismatchError("lagrangian_grad_x: z", prob.dim_y, zc.shape[0])
    return gradient(prob.objective, xc) + prob.A.entries.T @ zc
