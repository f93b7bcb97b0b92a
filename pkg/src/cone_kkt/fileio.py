"""JSON problem and certificate files.

Problems and certificates are plain JSON with an explicit schema_version so
fixtures stay diffable and language-neutral. Floats are serialized with
Python's shortest round-trip repr, so write-then-read reproduces identical
numbers. All writes go to a temporary file in the target directory followed
by an atomic rename; a failed command never leaves a partial file behind.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .cones import TAGS, ConeSpec
from .errors import ProblemFormatError
from .kkt import CONDITION_NAMES, Verdict
from .problem import Certificate, ProblemSpec, QuadraticFunctional, validate
from .spaces import LinearMap

SCHEMA_VERSION = 1

# Conventions recorded in every certificate, so a report is self-describing:
# the direction of the inequality residuals and the point entering slackness.
CERTIFICATE_NOTES = (
    "primal feasibility residual measures b - A x0 against P and x0 against K",
    "complementary slackness residual measures <z0, A x0 - b> at the candidate pair",
)


def _require(doc: dict, key: str, path: str):
    if key not in doc:
        raise ProblemFormatError(f"{path}: missing required field {key!r}")
    return doc[key]


def _as_number(val, what: str, path: str) -> float:
    if isinstance(val, str):
        if val.strip().lower() in ("inf", "infinity"):
            return math.inf
        raise ProblemFormatError(f"{path}: {what} must be a number or 'inf', got {val!r}")
    if not isinstance(val, (int, float)) or isinstance(val, bool):
        raise ProblemFormatError(f"{path}: {what} must be a number, got {val!r}")
    return float(val)


def _as_vector(val, length: int, what: str, path: str) -> np.ndarray:
    try:
        arr = np.asarray(val, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ProblemFormatError(f"{path}: {what} is not a numeric array: {exc}") from None
    if arr.shape != (length,):
        raise ProblemFormatError(
            f"{path}: {what} must have shape ({length},), got {arr.shape}")
    return arr


def _as_matrix(val, rows: int, cols: int, what: str, path: str) -> np.ndarray:
    try:
        arr = np.asarray(val, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ProblemFormatError(f"{path}: {what} is not a numeric matrix: {exc}") from None
    if arr.shape != (rows, cols):
        raise ProblemFormatError(
            f"{path}: {what} must have shape ({rows}, {cols}), got {arr.shape}")
    return arr


def _as_cone(val, length: int, what: str, path: str) -> ConeSpec:
    if not isinstance(val, list) or len(val) != length:
        raise ProblemFormatError(f"{path}: {what} must be a list of {length} tags")
    for t in val:
        if t not in TAGS:
            raise ProblemFormatError(
                f"{path}: {what} has unknown tag {t!r}; expected one of {TAGS}")
    return ConeSpec(tuple(val))


def load_problem(path: str) -> ProblemSpec:
    """Parse and validate a problem file; raises ProblemFormatError or ValidationError."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ProblemFormatError(f"{path}: cannot read: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ProblemFormatError(f"{path}: top level must be an object")

    version = _require(doc, "schema_version", path)
    if version != SCHEMA_VERSION:
        raise ProblemFormatError(
            f"{path}: unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise ProblemFormatError(f"{path}: name must be a string")
    dim_x = _require(doc, "dim_x", path)
    dim_y = _require(doc, "dim_y", path)
    if not isinstance(dim_x, int) or not isinstance(dim_y, int) or dim_x < 1 or dim_y < 1:
        raise ProblemFormatError(f"{path}: dim_x and dim_y must be positive integers")

    q_raw = _require(doc, "Q", path)
    if isinstance(q_raw, str):
        if q_raw != "zero":
            raise ProblemFormatError(f"{path}: Q must be a matrix or the string 'zero'")
        Q = np.zeros((dim_x, dim_x))
    else:
        Q = _as_matrix(q_raw, dim_x, dim_x, "Q", path)
    c = _as_vector(_require(doc, "c", path), dim_x, "c", path)
    d = _as_number(doc.get("d", 0.0), "d", path)
    A = _as_matrix(_require(doc, "A", path), dim_y, dim_x, "A", path)
    b = _as_vector(_require(doc, "b", path), dim_y, "b", path)
    K = _as_cone(_require(doc, "cone_K", path), dim_x, "cone_K", path)
    P = _as_cone(_require(doc, "cone_P", path), dim_y, "cone_P", path)
    p_norm_y = _as_number(doc.get("p_norm_y", 2), "p_norm_y", path)

    prob = ProblemSpec(
        objective=QuadraticFunctional(Q, c, d),
        A=LinearMap(A),
        b=b,
        K=K,
        P=P,
        p_norm_y=p_norm_y,
        name=name,
    )
    return validate(prob)


def problem_to_doc(prob: ProblemSpec) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "name": prob.name,
        "dim_x": prob.dim_x,
        "dim_y": prob.dim_y,
        "Q": [list(row) for row in prob.objective.Q],
        "c": list(prob.objective.c),
        "d": prob.objective.d,
        "A": [list(row) for row in prob.A.entries],
        "b": list(prob.b),
        "cone_K": list(prob.K.coords),
        "cone_P": list(prob.P.coords),
        "p_norm_y": "inf" if math.isinf(prob.p_norm_y) else prob.p_norm_y,
    }


def save_problem(prob: ProblemSpec, path: str):
    _atomic_write_json(problem_to_doc(prob), path)


@dataclass(frozen=True)
class CertificateDoc:
    problem_name: str
    x0: np.ndarray
    z0: np.ndarray
    residuals: dict
    verdict: str            # "accepted" | "rejected"
    tolerance: float
    notes: tuple = CERTIFICATE_NOTES
    schema_version: int = SCHEMA_VERSION

    def to_certificate(self) -> Certificate:
        return Certificate(x0=self.x0, z0=self.z0)


def certificate_doc(prob: ProblemSpec, cert: Certificate, verdict: Verdict) -> CertificateDoc:
    return CertificateDoc(
        problem_name=prob.name,
        x0=cert.x0,
        z0=cert.z0,
        residuals=verdict.residuals.as_dict(),
        verdict="accepted" if verdict.accepted else "rejected",
        tolerance=verdict.tol,
    )


def load_certificate(path: str) -> CertificateDoc:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ProblemFormatError(f"{path}: cannot read: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ProblemFormatError(f"{path}: top level must be an object")
    version = _require(doc, "schema_version", path)
    if version != SCHEMA_VERSION:
        raise ProblemFormatError(
            f"{path}: unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")
    x0 = np.asarray(_require(doc, "x0", path), dtype=float)
    z0 = np.asarray(_require(doc, "z0", path), dtype=float)
    if x0.ndim != 1 or z0.ndim != 1:
        raise ProblemFormatError(f"{path}: x0 and z0 must be flat arrays")
    residuals = _require(doc, "residuals", path)
    if not isinstance(residuals, dict) or set(residuals) != set(CONDITION_NAMES):
        raise ProblemFormatError(
            f"{path}: residuals must contain exactly the keys {CONDITION_NAMES}")
    verdict = _require(doc, "verdict", path)
    if verdict not in ("accepted", "rejected"):
        raise ProblemFormatError(f"{path}: verdict must be 'accepted' or 'rejected'")
    tolerance = _as_number(_require(doc, "tolerance", path), "tolerance", path)
    notes = doc.get("notes", [])
    if not isinstance(notes, list) or not all(isinstance(s, str) for s in notes):
        raise ProblemFormatError(f"{path}: notes must be a list of strings")
    return CertificateDoc(
        problem_name=str(doc.get("problem_name", "")),
        x0=x0,
        z0=z0,
        residuals={k: float(residuals[k]) for k in CONDITION_NAMES},
        verdict=verdict,
        tolerance=tolerance,
        notes=tuple(notes),
    )


def certificate_to_doc(doc: CertificateDoc) -> dict:
    return {
        "schema_version": doc.schema_version,
        "problem_name": doc.problem_name,
        "x0": list(doc.x0),
        "z0": list(doc.z0),
        "residuals": {k: doc.residuals[k] for k in CONDITION_NAMES},
        "verdict": doc.verdict,
        "tolerance": doc.tolerance,
        "notes": list(doc.notes),
    }


def save_certificate(doc: CertificateDoc, path: str):
    _atomic_write_json(certificate_to_doc(doc), path)


def _atomic_write_json(doc: dict, path: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".cone-kkt-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            # strict JSON: non-finite values must be sanitized by the caller
            json.dump(doc, fh, indent=2, allow_nan=False)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
