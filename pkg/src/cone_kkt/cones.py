"""Per-coordinate cone algebra.

A cone is described by one tag per coordinate: ``nonneg`` (the coordinate is
>= 0), ``zero`` (pinned to 0), or ``free`` (unconstrained). Any coordinate
tagged ``zero`` traps the cone inside a proper subspace, which is exactly how
a cone with empty interior is modelled here. Duals, Euclidean projections,
and distances are all coordinatewise and exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .spaces import as_coords

NONNEG = "nonneg"
ZERO = "zero"
FREE = "free"
TAGS = (NONNEG, ZERO, FREE)

# integer codes used by the compiled kernels
CODE_NONNEG, CODE_ZERO, CODE_FREE = 0, 1, 2
_CODE = {NONNEG: CODE_NONNEG, ZERO: CODE_ZERO, FREE: CODE_FREE}
_DUAL = {NONNEG: NONNEG, ZERO: FREE, FREE: ZERO}


@dataclass(frozen=True)
class ConeSpec:
    """A coordinate cone given by per-coordinate tags."""

    coords: tuple

    def __post_init__(self):
        tags = tuple(self.coords)
        for t in tags:
            if t not in TAGS:
                raise ValueError(f"unknown cone tag {t!r}; expected one of {TAGS}")
        object.__setattr__(self, "coords", tags)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def codes(self) -> np.ndarray:
        """Tags as an int8 array (kernel representation)."""
        return np.array([_CODE[t] for t in self.coords], dtype=np.int8)

    @staticmethod
    def orthant(dim: int) -> "ConeSpec":
        return ConeSpec((NONNEG,) * dim)

    @staticmethod
    def all_free(dim: int) -> "ConeSpec":
        return ConeSpec((FREE,) * dim)


def _checked(C: ConeSpec, v) -> np.ndarray:
    arr = as_coords(v)
    if arr.shape[0] != C.dim:
        raise DimensionMismatchError("cone/vector", C.dim, arr.shape[0])
    return arr


def dual(C: ConeSpec) -> ConeSpec:
    """The conjugate cone {z : <z, v> >= 0 for all v in C}.

    Coordinatewise: nonneg stays nonneg, zero becomes free, free becomes zero.
    """
    return ConeSpec(tuple(_DUAL[t] for t in C.coords))


def contains(C: ConeSpec, v, tol: float = 0.0) -> bool:
    """Membership test with an absolute slack of ``tol`` per coordinate."""
    if tol < 0:
        raise ValueError(f"tolerance must be >= 0, got {tol}")
    arr = _checked(C, v)
    for t, val in zip(C.coords, arr):
        if t == NONNEG and val < -tol:
            return False
        if t == ZERO and abs(val) > tol:
            return False
    return True


def project(C: ConeSpec, v) -> np.ndarray:
    """Euclidean projection onto the cone."""
    arr = _checked(C, v)
    out = arr.copy()
    codes = C.codes()
    nn = codes == CODE_NONNEG
    out[nn] = np.maximum(out[nn], 0.0)
    out[codes == CODE_ZERO] = 0.0
    return out


def distance(C: ConeSpec, v) -> float:
    """Euclidean distance from ``v`` to the cone."""
    arr = _checked(C, v)
    return float(np.linalg.norm(arr - project(C, arr)))


def has_interior(C: ConeSpec) -> bool:
    """True iff the cone has nonempty interior (no coordinate pinned to zero)."""
    return ZERO not in C.coords
