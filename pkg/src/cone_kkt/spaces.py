"""Finite-dimensional truncations of the primal and dual spaces.

Everything is a coordinate space: vectors and functionals live in the same
coordinates and are paired by the ordinary dot product. The p-norm attached
to a space only changes ball geometry (it matters to the regularity probes),
never the pairing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError


def as_coords(v) -> np.ndarray:
    """Coerce a Vector or array-like to a 1-D float64 array."""
    if isinstance(v, Vector):
        return v.coords
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D coordinate array, got shape {arr.shape}")
    return arr


def _check_p(p: float) -> float:
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise ValueError(f"norm exponent must be >= 1 or inf, got {p}")
    return p


@dataclass(frozen=True)
class SpaceSpec:
    """A coordinate space of a given dimension with an attached p-norm."""

    dim: int
    p: float = 2.0

    def __post_init__(self):
        if int(self.dim) < 1:
            raise ValueError(f"space dimension must be >= 1, got {self.dim}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "p", _check_p(self.p))


@dataclass(frozen=True)
class Vector:
    """Coordinates tied to a space; used for both points and functionals."""

    coords: np.ndarray
    space: SpaceSpec

    def __post_init__(self):
        arr = np.asarray(self.coords, dtype=float)
        if arr.ndim != 1:
            raise ValueError(f"vector coordinates must be 1-D, got shape {arr.shape}")
        if arr.shape[0] != self.space.dim:
            raise DimensionMismatchError("vector/space", self.space.dim, arr.shape[0])
        if not np.all(np.isfinite(arr)):
            raise ValueError("vector coordinates must be finite")
        object.__setattr__(self, "coords", arr)


@dataclass(frozen=True)
class LinearMap:
    """A dense linear operator stored row-major; transpose acts as the adjoint."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        if arr.ndim != 2:
            raise ValueError(f"operator entries must be 2-D, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("operator entries must be finite")
        object.__setattr__(self, "entries", arr)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]


def apply(A: LinearMap, x) -> np.ndarray:
    """Matrix-vector product A @ x."""
    xc = as_coords(x)
    if xc.shape[0] != A.cols:
        raise DimensionMismatchError("apply: operator domain", A.cols, xc.shape[0])
    return A.entries @ xc


def adjoint_apply(A: LinearMap, z) -> np.ndarray:
    """Adjoint product A.T @ z, so that <z, A x> == <A.T z, x> for all x."""
    zc = as_coords(z)
    if zc.shape[0] != A.rows:
        raise DimensionMismatchError("adjoint_apply: operator codomain", A.rows, zc.shape[0])
    return A.entries.T @ zc


def pairing(f, v) -> float:
    """Duality pairing <f, v>: the coordinate dot product."""
    fc = as_coords(f)
    vc = as_coords(v)
    if fc.shape[0] != vc.shape[0]:
        raise DimensionMismatchError("pairing", fc.shape[0], vc.shape[0])
    return float(fc @ vc)


def norm(v, p: float = 2.0) -> float:
    """The p-norm of ``v``; ``p=inf`` gives the max-abs norm."""
    vc = as_coords(v)
    p = _check_p(p)
    if vc.shape[0] == 0:
        return 0.0
    if math.isinf(p):
        return float(np.max(np.abs(vc)))
    return float(np.linalg.norm(vc, ord=p))
