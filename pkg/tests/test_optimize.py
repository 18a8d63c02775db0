"""Shape optimizer: constraints, restoration, solve, random bodies."""

import math

import numpy as np
import pytest

from hypiso.bodies import sausage
from hypiso.optimize import (
    Candidate,
    ShapeProblem,
    closure_jacobian,
    closure_residual_vec,
    lam_ball_circumference,
    perimeter_to_d,
    random_thick_body,
    solve,
)
from hypiso.spline import GeometryError
from hypiso.steiner import sausage_measures

SAUSAGE_P = 8.2464008819854406  # perimeter of sausage(2, 1)


def _sausage_x(lam: float, d: float):
    s = sausage(lam, d)
    kap = np.array([a.kappa for a in s.boundary.arcs])
    lon = np.array([a.length for a in s.boundary.arcs])
    return kap, lon


def test_lam_ball_circumference_value():
    assert lam_ball_circumference(2.0) == pytest.approx(
        3.6275987284684352, abs=1e-14)
    # it is the perimeter of the ball with boundary curvature lam
    r = math.atanh(0.5)
    assert lam_ball_circumference(2.0) == pytest.approx(
        2.0 * math.pi * math.sinh(r), abs=1e-14)


def test_perimeter_to_d_inverts_measures():
    assert perimeter_to_d(5.0, 10.0) == pytest.approx(
        2.1353304774241986, abs=1e-12)
    for lam, p in ((2.0, SAUSAGE_P), (3.0, 9.0), (5.0, 10.0)):
        d = perimeter_to_d(lam, p)
        assert sausage_measures(lam, d).perimeter == pytest.approx(p, abs=1e-10)
    # the floor itself maps to d = 0
    assert perimeter_to_d(2.0, lam_ball_circumference(2.0)) == pytest.approx(
        0.0, abs=1e-8)


def test_problem_validation():
    with pytest.raises(ValueError):
        ShapeProblem(1.0, 10.0, 16)
    with pytest.raises(ValueError):
        ShapeProblem(2.0, 10.0, 3)
    with pytest.raises(ValueError):
        # below the lam-ball circumference no thick body exists
        ShapeProblem(2.0, 3.0, 16)


def test_closure_residual_zero_on_sausage():
    kap, lon = _sausage_x(2.0, 1.0)
    assert np.max(np.abs(closure_residual_vec(kap, lon))) < 1e-12


def test_closure_jacobian_matches_finite_differences():
    rng = np.random.default_rng(8)
    kap, lon = _sausage_x(2.0, 1.0)
    res, J, _ = closure_jacobian(kap, lon)
    n = len(kap)
    h = 1e-7
    for _ in range(10):
        j = rng.integers(0, 2 * n)
        dk, dl = kap.copy(), lon.copy()
        if j < n:
            dk[j] += h
        else:
            dl[j - n] += h
        fd = (closure_residual_vec(dk, dl) - res) / h
        assert np.max(np.abs(fd - J[:, j])) < 1e-5


def test_solve_small_instance_reaches_sausage():
    # short run: the round start alone lands on the sausage optimum
    problem = ShapeProblem(2.0, SAUSAGE_P, 8)
    cands = solve(problem, seed=0, n_starts=2, max_iters=300)
    best = cands[0]
    target = 2.0 * math.pi + sausage_measures(2.0, 1.0).area
    assert best.objective == pytest.approx(target, abs=1e-3)
    assert best.closure_residual < 1e-8
    spline = best.to_spline()
    assert spline.perimeter() == pytest.approx(SAUSAGE_P, abs=1e-6)
    assert spline.check_thickness(2.0, tol=1e-6).ok


def test_solve_results_are_sorted_and_typed():
    problem = ShapeProblem(2.0, SAUSAGE_P, 8)
    cands = solve(problem, seed=3, n_starts=2, max_iters=200)
    objs = [c.objective for c in cands]
    assert objs == sorted(objs)
    assert all(isinstance(c, Candidate) for c in cands)
    obj = cands[0].to_json_dict()
    assert set(obj) >= {"kappas", "lengths", "objective", "converged"}


def test_random_thick_body_properties():
    body = random_thick_body(2.0, 12, seed=7)
    assert body.thick_for == 2.0
    assert body.boundary.check_thickness(2.0, tol=1e-9).ok
    assert body.boundary.closure_residual() < 1e-9
    assert body.boundary.is_simple()
    # Gauss-Bonnet consistency: turning = 2 pi + area
    s = body.boundary
    assert s.total_turning() == pytest.approx(
        2.0 * math.pi + s.area_gauss_bonnet(), abs=1e-12)


def test_random_thick_body_is_deterministic():
    a = random_thick_body(3.0, 10, seed=42)
    b = random_thick_body(3.0, 10, seed=42)
    assert [x.kappa for x in a.boundary.arcs] == [x.kappa for x in b.boundary.arcs]
    assert [x.length for x in a.boundary.arcs] == [x.length for x in b.boundary.arcs]
    c = random_thick_body(3.0, 10, seed=43)
    assert [x.kappa for x in c.boundary.arcs] != [x.kappa for x in a.boundary.arcs]


def test_random_thick_body_rejects_bad_args():
    with pytest.raises(ValueError):
        random_thick_body(1.0, 12, seed=0)
    with pytest.raises(ValueError):
        random_thick_body(2.0, 3, seed=0)
