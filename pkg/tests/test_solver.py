"""Extragradient solver and phase-1 engine."""

import numpy as np
import pytest

from battery import make_feasible_instance
from cone_kkt import (
    SolverOptions,
    objective_value,
    phase1,
    solve_saddle,
    verify_certificate,
)
from cone_kkt.fixtures import p0, p1, p2
from cone_kkt.solver import operator_norm


def test_options_validation():
    with pytest.raises(ValueError):
        SolverOptions(step_scale=1.5)
    with pytest.raises(ValueError):
        SolverOptions(residual_tol=0.0)
    with pytest.raises(ValueError):
        SolverOptions(max_iters=0)


def test_operator_norm_matches_svd():
    rng = np.random.default_rng(4)
    for _ in range(50):
        m, n = rng.integers(1, 9, size=2)
        M = rng.standard_normal((m, n))
        est = operator_norm(M)
        exact = np.linalg.norm(M, 2)
        assert est <= exact + 1e-9
        assert est >= 0.95 * exact
    assert operator_norm(np.zeros((3, 3))) == 0.0


def test_solve_p0_trivial_optimum():
    cert, trace = solve_saddle(p0())
    assert trace.converged
    assert np.array_equal(cert.x0, [0.0, 0.0])
    assert np.array_equal(cert.z0, [0.0, 0.0])
    assert objective_value(p0().objective, cert.x0) == 0.0


def test_solve_p1_binding_coordinate():
    prob = p1()
    cert, trace = solve_saddle(prob)
    assert trace.converged
    assert np.max(np.abs(cert.x0 - [0.5, 1.0])) <= 1e-6
    assert np.max(np.abs(cert.z0 - [1.0, 0.0])) <= 1e-6
    assert abs(objective_value(prob.objective, cert.x0) - 0.25) <= 1e-8


def test_solve_p2_empty_interior_cone():
    prob = p2()
    cert, trace = solve_saddle(prob)
    assert trace.converged
    assert abs(objective_value(prob.objective, cert.x0)) <= 1e-6
    assert abs(cert.z0[0]) <= 1e-6
    assert abs(cert.z0[1]) <= 1.0 + 1e-6
    assert verify_certificate(prob, cert, 1e-6).accepted


def test_converged_runs_verify_at_ten_tol():
    rng = np.random.default_rng(100)
    for _ in range(20):
        prob = make_feasible_instance(rng)
        opts = SolverOptions()
        cert, trace = solve_saddle(prob, opts)
        if trace.converged:
            assert verify_certificate(prob, cert, 10.0 * opts.residual_tol).accepted


def test_trace_residuals_match_reported_point():
    from cone_kkt import kkt_residuals

    prob = p1()
    cert, trace = solve_saddle(prob)
    recomputed = kkt_residuals(prob, cert)
    for a, b in zip(trace.final_residuals.as_dict().values(), recomputed.as_dict().values()):
        assert abs(a - b) <= 1e-12


def test_merit_trend_on_fixtures():
    # the max-residual merit at iteration 2k stays within 1.01x of its value
    # at iteration k (re-run with a capped budget; iteration is deterministic)
    for prob in (p0(), p1(), p2()):
        _, full = solve_saddle(prob)
        limit = full.iters if full.iters > 0 else 1
        k = 10
        while 2 * k <= limit:
            merit_k = _merit_at(prob, k)
            merit_2k = _merit_at(prob, 2 * k)
            if merit_k <= 1e-12:
                break
            assert merit_2k <= 1.01 * merit_k + 1e-14, (prob.name, k)
            k *= 2


def _merit_at(prob, iters):
    opts = SolverOptions(max_iters=iters, residual_tol=1e-300)
    _, trace = solve_saddle(prob, opts)
    return trace.final_residuals.max_residual()


def test_deterministic_bitwise():
    prob = p1()
    c1, t1 = solve_saddle(prob)
    c2, t2 = solve_saddle(prob)
    assert c1.x0.tobytes() == c2.x0.tobytes()
    assert c1.z0.tobytes() == c2.z0.tobytes()
    assert t1.iters == t2.iters


def test_lagrangian_history_shape():
    _, trace = solve_saddle(p1())
    hist = trace.lagrangian_history
    assert hist[0][0] == 0
    assert hist[-1][0] == trace.iters
    iters = [i for i, _ in hist]
    assert iters == sorted(iters)


def test_phase1_feasible_immediately():
    res = phase1(p1(), [0.5, 2.0])
    assert res.residual <= 1e-8
    assert res.converged


def test_phase1_converges_to_positive_defect():
    # coordinate 1 cannot reach -0.1 with x1 >= 0: the minimum distance is 0.1
    res = phase1(p1(), [-0.1, 2.0])
    assert res.converged
    assert abs(res.residual - 0.1) <= 1e-9


def test_phase1_fixes_pinned_coordinate():
    # x = (0,0,5) zeroes the defect on the pinned coordinate of P
    res = phase1(p2(), [1.0, -5.0])
    assert res.converged
    assert res.residual <= 1e-8
    slack = np.array([1.0, -5.0]) - p2().A.entries @ res.x
    assert abs(slack[1]) <= 1e-8


def test_phase1_warm_start():
    prob = p2()
    cold = phase1(prob, [1.0, -5.0])
    warm = phase1(prob, [1.0, -5.0], x0=cold.x)
    assert warm.iters <= cold.iters
    assert warm.residual <= 1e-8
