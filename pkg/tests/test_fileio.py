"""Problem/certificate file formats: round trips, rejection, atomicity."""

import json
import math
import os

import numpy as np
import pytest

from cone_kkt import Certificate, verify_certificate
from cone_kkt.errors import ProblemFormatError, ValidationError
from cone_kkt.fileio import (
    CertificateDoc,
    certificate_doc,
    load_certificate,
    load_problem,
    problem_to_doc,
    save_certificate,
    save_problem,
)
from cone_kkt.fixtures import p1, p2, path


def test_load_fixture_problems():
    prob = load_problem(path("p2"))
    assert prob.name == "p2"
    assert prob.dim_x == 3 and prob.dim_y == 2
    assert np.array_equal(prob.objective.Q, np.zeros((3, 3)))  # "zero" shorthand
    assert prob.P.coords == ("nonneg", "zero")


def test_problem_round_trip(tmp_path):
    prob = p2()
    out = tmp_path / "copy.json"
    save_problem(prob, str(out))
    again = load_problem(str(out))
    assert problem_to_doc(again) == problem_to_doc(prob)


def test_certificate_round_trip_full_precision(tmp_path):
    prob = p1()
    cert = Certificate([0.1 + 0.2, 1.0 / 3.0], [np.pi, 1e-17])
    doc = certificate_doc(prob, cert, verify_certificate(prob, cert, 1e-6))
    out = tmp_path / "c.json"
    save_certificate(doc, str(out))
    loaded = load_certificate(str(out))
    # bit-exact round trip of every number
    assert loaded.x0.tobytes() == cert.x0.tobytes()
    assert loaded.z0.tobytes() == cert.z0.tobytes()
    assert loaded.residuals == doc.residuals
    assert loaded.tolerance == doc.tolerance
    assert loaded.notes == doc.notes


def test_load_rejects_missing_field(tmp_path):
    doc = json.loads(open(path("p1")).read())
    del doc["A"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    with pytest.raises(ProblemFormatError, match="missing required field 'A'"):
        load_problem(str(bad))


def test_load_rejects_wrong_schema(tmp_path):
    doc = json.loads(open(path("p1")).read())
    doc["schema_version"] = 99
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    with pytest.raises(ProblemFormatError, match="schema_version"):
        load_problem(str(bad))


def test_load_rejects_bad_tag(tmp_path):
    doc = json.loads(open(path("p1")).read())
    doc["cone_K"] = ["nonneg", "positive"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    with pytest.raises(ProblemFormatError, match="unknown tag"):
        load_problem(str(bad))


def test_load_rejects_shape_mismatch(tmp_path):
    doc = json.loads(open(path("p1")).read())
    doc["b"] = [1.0, 2.0, 3.0]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    with pytest.raises(ProblemFormatError, match="shape"):
        load_problem(str(bad))


def test_load_rejects_indefinite_q(tmp_path):
    doc = json.loads(open(path("p1")).read())
    doc["Q"] = [[-1.0, 0.0], [0.0, 1.0]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    with pytest.raises(ValidationError, match="indefinite"):
        load_problem(str(bad))


def test_p_norm_inf_round_trip(tmp_path):
    doc = json.loads(open(path("p1")).read())
    doc["p_norm_y"] = "inf"
    f = tmp_path / "inf.json"
    f.write_text(json.dumps(doc))
    prob = load_problem(str(f))
    assert math.isinf(prob.p_norm_y)
    out = tmp_path / "again.json"
    save_problem(prob, str(out))
    assert json.loads(out.read_text())["p_norm_y"] == "inf"


def test_certificate_verdict_consistency_enforced(tmp_path):
    doc = json.loads(open(path("p1")).read())
    cert_doc = {
        "schema_version": 1, "problem_name": "p1",
        "x0": [0.5, 1.0], "z0": [[1.0]],  # nested: not a flat array
        "residuals": {}, "verdict": "accepted", "tolerance": 1e-6, "notes": [],
    }
    f = tmp_path / "c.json"
    f.write_text(json.dumps(cert_doc))
    with pytest.raises(ProblemFormatError):
        load_certificate(str(f))


def test_failed_write_leaves_no_partial_file(tmp_path):
    target = tmp_path / "cert.json"
    target.write_text("original")
    doc = CertificateDoc(
        problem_name="x", x0=np.array([0.0]), z0=np.array([0.0]),
        residuals={k: object() for k in (
            "stationarity", "complementarity", "primal_feasibility",
            "dual_feasibility", "complementary_slackness")},
        verdict="accepted", tolerance=1e-6)
    with pytest.raises(TypeError):
        save_certificate(doc, str(target))
    assert target.read_text() == "original"
    assert [p for p in os.listdir(tmp_path) if p.endswith(".tmp")] == []
