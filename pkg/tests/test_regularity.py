"""Regularity probes: feasibility, eps0 estimation, Slater, witnesses."""

import dataclasses

import numpy as np
import pytest

from battery import make_equivalence_instance
from cone_kkt import (
    check_equivalence,
    dual,
    feasible,
    probe_slater,
    probe_strong_simultaneity,
    project,
    slack_witness,
)
from cone_kkt.fixtures import p0, p1, p2
from cone_kkt.regularity import default_bisect_tol


def _with_b(prob, b):
    return dataclasses.replace(prob, b=np.asarray(b, dtype=float))


def test_feasible_examples():
    assert feasible(p1(), [0.5, 2.0]) is not None
    assert feasible(p1(), [-0.1, 2.0]) is None
    x = feasible(p2(), [1.0, -5.0])
    assert x is not None
    slack = np.array([1.0, -5.0]) - p2().A.entries @ x
    assert abs(slack[1]) <= 1e-8


def test_eps_probe_fixture_values():
    for prob, expected in ((p0(), 1.0), (p1(), 0.5), (p2(), 1.0)):
        rep = probe_strong_simultaneity(prob, seed=0)
        assert abs(rep.eps_hat - expected) <= 2.0 * rep.bisect_tol, prob.name
        assert not rep.warnings


def test_eps_probe_basis_only():
    rep = probe_strong_simultaneity(p0(), n_random_dirs=0, seed=0)
    assert rep.directions_probed == 4
    assert abs(rep.eps_hat - 1.0) <= 2.0 * rep.bisect_tol


def test_eps_report_min_invariant():
    rep = probe_strong_simultaneity(p1(), seed=3)
    lams = [pr.lam for pr in rep.per_direction if pr.ok]
    assert rep.eps_hat == min(lams)
    assert all(lam >= 0.0 for lam in lams)


def test_eps_lower_bound_soundness():
    # each recorded step, shrunk by twice the bisection tolerance, stays feasible
    prob = p1()
    rep = probe_strong_simultaneity(prob, n_random_dirs=8, seed=5)
    for pr in rep.per_direction:
        lam = max(pr.lam - 2.0 * rep.bisect_tol, 0.0)
        assert feasible(prob, prob.b - lam * pr.direction) is not None


def test_eps_monotone_in_b():
    tighter = probe_strong_simultaneity(_with_b(p1(), [0.25, 2.0]), seed=0)
    looser = probe_strong_simultaneity(p1(), seed=0)
    assert abs(tighter.eps_hat - 0.25) <= 2.0 * tighter.bisect_tol
    assert tighter.eps_hat <= looser.eps_hat + tighter.bisect_tol


def test_slater_p1_holds():
    rep = probe_slater(p1())
    assert rep.holds
    assert abs(rep.margin - 0.5) <= 1e-3
    slack = p1().b - p1().A.entries @ rep.witness
    assert np.min(slack) >= 0.5 - 1e-3


def test_slater_p2_empty_interior():
    rep = probe_slater(p2())
    assert not rep.holds
    assert rep.reason == "empty interior"
    assert rep.witness is None


def test_slater_zero_margin_fails():
    rep = probe_slater(_with_b(p1(), [0.0, 2.0]))
    assert not rep.holds
    assert rep.margin is not None and rep.margin <= 1e-6


def test_slack_witness_fixture_bounds():
    rng = np.random.default_rng(50)
    for prob in (p0(), p1(), p2()):
        rep = probe_strong_simultaneity(prob, seed=0)
        Pd = dual(prob.P)
        done = 0
        while done < 10:
            z = project(Pd, rng.standard_normal(prob.dim_y))
            if np.linalg.norm(z) < 1e-9:
                continue
            x, val = slack_witness(prob, z, rep)
            bound = (rep.eps_hat - 2.0 * rep.bisect_tol) * np.linalg.norm(z) - 1e-6
            assert val >= bound, prob.name
            done += 1


def test_slack_witness_p1_axis_functionals():
    prob = p1()
    rep = probe_strong_simultaneity(prob, seed=0)
    x, val = slack_witness(prob, np.array([0.0, 1.0]), rep)
    assert val >= 2.0 - 1e-6
    x, val = slack_witness(prob, np.array([1.0, 0.0]), rep)
    assert val >= 0.5 - 2.0 * rep.bisect_tol - 1e-6


def test_slack_witness_preconditions():
    prob = p1()
    rep = probe_strong_simultaneity(prob, seed=0)
    with pytest.raises(ValueError, match="nonzero"):
        slack_witness(prob, np.zeros(2), rep)
    with pytest.raises(ValueError, match="dual"):
        slack_witness(prob, np.array([-1.0, 0.0]), rep)
    zero_eps = dataclasses.replace(rep, eps_hat=0.0)
    with pytest.raises(ValueError, match="positive"):
        slack_witness(prob, np.array([1.0, 0.0]), zero_eps)


def test_equivalence_p1():
    rep = check_equivalence(p1(), seed=0)
    assert rep.applicable and rep.slater_holds and rep.eps_positive and rep.consistent


def test_equivalence_boundary_b():
    rep = check_equivalence(_with_b(p1(), [0.0, 2.0]), seed=0)
    assert rep.applicable
    assert not rep.slater_holds
    assert not rep.eps_positive
    assert rep.consistent


def test_equivalence_p2_not_applicable():
    # strong simultaneity without Slater: the empty-interior regime
    rep = check_equivalence(p2(), seed=0)
    assert not rep.applicable
    assert rep.eps_positive
    assert not rep.slater_holds
    assert rep.consistent


def test_starved_probe_flags_directions_with_warning():
    # a one-iteration budget cannot classify the directions that need the
    # pinned coordinate of p2 repaired; those get flagged and excluded
    from cone_kkt import SolverOptions

    rep = probe_strong_simultaneity(p2(), n_random_dirs=0, seed=0,
                                    opts=SolverOptions(max_iters=1))
    flagged = [pr for pr in rep.per_direction if not pr.ok]
    assert flagged
    assert rep.warnings
    assert all(np.isnan(pr.lam) for pr in flagged)
    good = [pr.lam for pr in rep.per_direction if pr.ok]
    assert rep.eps_hat == min(good)


def test_probe_matches_dense_grid_in_inf_norm():
    # same feasible set as p1, measured in the max-abs ball: radius is still
    # the binding slack 0.5, and probe and grid must agree on it
    import math

    from cone_kkt.oracle import oracle_eps0

    prob = dataclasses.replace(p1(), p_norm_y=math.inf)
    rep = probe_strong_simultaneity(prob, seed=0)
    dense = oracle_eps0(prob, 360)
    assert abs(rep.eps_hat - 0.5) <= 2.0 * rep.bisect_tol
    assert abs(rep.eps_hat - dense) <= 5.0 * rep.bisect_tol


def test_equivalence_random_battery():
    rng = np.random.default_rng(600)
    for k in range(20):
        prob = make_equivalence_instance(rng, slater=bool(k % 2))
        rep = check_equivalence(prob, seed=k, n_random_dirs=16)
        assert rep.applicable
        assert rep.consistent, prob.name
        assert rep.slater_holds == bool(k % 2), prob.name
